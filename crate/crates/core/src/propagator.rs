//! Fixed-step RK4 integration of `iħ ∂ψ/∂t = H(t)ψ`, survival phases,
//! the entangling phase θ and leakage.
//!
//! The phase of a computational state `|n⟩` is the continuously unwrapped
//! argument of its survival amplitude `⟨n|ψ_n(t)⟩`, and
//! `θ = φ₀₀ − φ₀₁ − φ₁₀ + φ₁₁`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

// std, when linked anywhere in the build, provides these methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::{TwoDotBasisState, COMPUTATIONAL, COMPUTATIONAL_LABELS};
use crate::drive::{detuning, rabi_envelope, DriveModel, PhysicalParams, PulseSchedule};
use crate::error::{Error, Result};
use crate::linalg::{basis_vector, norm, State16, C64, DIM, ZERO};
use crate::units::HBAR_MEV_PS;

/// Norm drift tolerated before the state is renormalized.
pub const NORM_DRIFT_LIMIT: f64 = 1e-9;

/// Survival population below which a phase is considered undefined.
pub const MIN_SURVIVAL_POPULATION: f64 = 1e-6;

/// Largest per-state leakage for which a phase gate is assembled.
pub const CPHASE_LEAKAGE_LIMIT: f64 = 0.05;

/// Wraps an angle to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x % TAU;
    if y > PI {
        y -= TAU;
    } else if y <= -PI {
        y += TAU;
    }
    y
}

/// Distance of θ from π modulo 2π, in `[0, π]`.
pub fn theta_error(theta: f64) -> f64 {
    wrap_angle(theta - PI).abs()
}

/// `θ = φ₀₀ − φ₀₁ − φ₁₀ + φ₁₁` for phases in the order `00, 01, 10, 11`.
pub fn theta_from_phases(phi: &[f64; 4]) -> f64 {
    phi[0] - phi[1] - phi[2] + phi[3]
}

/// One RK4 step of length `dt` (which may be negative) from time `t`.
pub fn rk4_step(model: &DriveModel, s: &PulseSchedule, t: f64, dt: f64, psi: &State16) -> State16 {
    let k = -dt / HBAR_MEV_PS;
    // returns -i·dt/ħ · H(τ)·φ
    let f = |tau: f64, phi: &State16| -> State16 {
        let mut out = model.apply(detuning(tau, s), rabi_envelope(tau, s), phi);
        for v in out.iter_mut() {
            *v = C64::new(-v.im * k, v.re * k);
        }
        out
    };
    let axpy = |a: &State16, b: &State16, w: f64| -> State16 {
        let mut out = *a;
        for (o, x) in out.iter_mut().zip(b.iter()) {
            *o += x * w;
        }
        out
    };
    let k1 = f(t, psi);
    let k2 = f(t + 0.5 * dt, &axpy(psi, &k1, 0.5));
    let k3 = f(t + 0.5 * dt, &axpy(psi, &k2, 0.5));
    let k4 = f(t + dt, &axpy(psi, &k3, 1.0));
    let mut out = *psi;
    for i in 0..DIM {
        out[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) / 6.0;
    }
    out
}

/// Outcome of an integration run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationSummary {
    pub final_state: State16,
    /// Largest `|‖ψ‖ − 1|` seen before any renormalization.
    pub max_norm_drift: f64,
    pub renormalized: bool,
}

/// Integrates from `t0` to `t1` in `steps` equal steps starting from `psi0`.
///
/// `t1 < t0` runs backwards in time. The observer sees every grid point,
/// including the initial one, as `(k, t_k, ψ(t_k))`.
pub fn integrate<F>(
    model: &DriveModel,
    s: &PulseSchedule,
    t0: f64,
    t1: f64,
    steps: usize,
    psi0: &State16,
    mut observer: F,
) -> IntegrationSummary
where
    F: FnMut(usize, f64, &State16),
{
    let steps = steps.max(1);
    let dt = (t1 - t0) / steps as f64;
    let mut psi = *psi0;
    let n0 = norm(psi0);
    let mut max_drift = 0.0_f64;
    let mut renormalized = false;
    observer(0, t0, &psi);
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        psi = rk4_step(model, s, t, dt, &psi);
        let n = norm(&psi);
        let drift = (n - n0).abs();
        max_drift = max_drift.max(drift);
        if drift > NORM_DRIFT_LIMIT {
            let r = n0 / n;
            for v in psi.iter_mut() {
                *v *= r;
            }
            renormalized = true;
        }
        observer(k + 1, t0 + (k + 1) as f64 * dt, &psi);
    }
    IntegrationSummary {
        final_state: psi,
        max_norm_drift: max_drift,
        renormalized,
    }
}

/// Stored time evolution of one initial basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub initial: TwoDotBasisState,
    pub times: Vec<f64>,
    pub states: Vec<State16>,
    pub max_norm_drift: f64,
    pub renormalized: bool,
}

impl Trajectory {
    pub fn final_state(&self) -> &State16 {
        self.states.last().expect("trajectory holds at least one state")
    }

    /// `|⟨m|ψ(t_k)⟩|²` for every stored time.
    pub fn population_series(&self, m: TwoDotBasisState) -> Vec<f64> {
        self.states.iter().map(|psi| psi[m.index()].norm_sqr()).collect()
    }
}

/// Propagates `initial` over the schedule window and stores every state.
pub fn propagate(p: &PhysicalParams, s: &PulseSchedule, initial: TwoDotBasisState) -> Result<Trajectory> {
    s.validate()?;
    let model = DriveModel::new(p)?;
    model.check_step(s)?;
    propagate_model(&model, s, initial)
}

/// As [`propagate`] with a prepared model. The step size is not checked.
pub fn propagate_model(model: &DriveModel, s: &PulseSchedule, initial: TwoDotBasisState) -> Result<Trajectory> {
    s.validate()?;
    let steps = s.steps();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let t1 = s.t_start + steps as f64 * s.dt;
    let summary = integrate(model, s, s.t_start, t1, steps, &basis_vector(initial.index()), |_, t, psi| {
        times.push(t);
        states.push(*psi);
    });
    Ok(Trajectory {
        initial,
        times,
        states,
        max_norm_drift: summary.max_norm_drift,
        renormalized: summary.renormalized,
    })
}

/// Survival amplitude history of one computational state.
#[derive(Clone, Debug, PartialEq)]
pub struct SurvivalRun {
    pub initial: TwoDotBasisState,
    /// Grid times; empty unless series were recorded.
    pub times: Vec<f64>,
    /// Unwrapped phase of `⟨n|ψ_n(t)⟩`; empty unless series were recorded.
    pub phase: Vec<f64>,
    /// `|⟨m|ψ_n(t)⟩|²` for all 16 `m`; empty unless series were recorded.
    pub populations: Vec<[f64; DIM]>,
    pub final_phase: f64,
    /// `1 − |⟨n|ψ_n(T)⟩|²`.
    pub leakage: f64,
    pub max_norm_drift: f64,
    pub renormalized: bool,
    /// First `(time, population)` at which the survival population fell
    /// below [`MIN_SURVIVAL_POPULATION`].
    pub phase_lost: Option<(f64, f64)>,
}

impl SurvivalRun {
    /// `|⟨n|ψ_n(t)⟩|²` series.
    pub fn survival(&self) -> Vec<f64> {
        let i = self.initial.index();
        self.populations.iter().map(|p| p[i]).collect()
    }
}

/// Runs one initial state, following its survival phase step by step.
pub fn survival_run(
    model: &DriveModel,
    s: &PulseSchedule,
    initial: TwoDotBasisState,
    record_series: bool,
) -> Result<SurvivalRun> {
    s.validate()?;
    let n = initial.index();
    let steps = s.steps();
    let cap = if record_series { steps + 1 } else { 0 };
    let mut run = SurvivalRun {
        initial,
        times: Vec::with_capacity(cap),
        phase: Vec::with_capacity(cap),
        populations: Vec::with_capacity(cap),
        final_phase: 0.0,
        leakage: 0.0,
        max_norm_drift: 0.0,
        renormalized: false,
        phase_lost: None,
    };
    let mut phase = 0.0;
    let mut last_arg = 0.0;
    let mut last_amp = ZERO;
    let t1 = s.t_start + steps as f64 * s.dt;
    let summary = integrate(model, s, s.t_start, t1, steps, &basis_vector(n), |_, t, psi| {
        let amp = psi[n];
        let pop = amp.norm_sqr();
        if pop < MIN_SURVIVAL_POPULATION && run.phase_lost.is_none() {
            run.phase_lost = Some((t, pop));
        }
        let arg = amp.arg();
        phase += wrap_angle(arg - last_arg);
        last_arg = arg;
        last_amp = amp;
        if record_series {
            run.times.push(t);
            run.phase.push(phase);
            let mut pops = [0.0; DIM];
            for (o, v) in pops.iter_mut().zip(psi.iter()) {
                *o = v.norm_sqr();
            }
            run.populations.push(pops);
        }
    });
    run.final_phase = phase;
    run.leakage = (1.0 - last_amp.norm_sqr()).clamp(0.0, 1.0);
    run.max_norm_drift = summary.max_norm_drift;
    run.renormalized = summary.renormalized;
    Ok(run)
}

/// Final phases and leakage of the four computational states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSummary {
    /// `φ₀₀, φ₀₁, φ₁₀, φ₁₁` (rad).
    pub phi: [f64; 4],
    pub leakage: [f64; 4],
}

impl GateSummary {
    pub fn theta(&self) -> f64 {
        theta_from_phases(&self.phi)
    }

    pub fn theta_error(&self) -> f64 {
        theta_error(self.theta())
    }

    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Phases, θ and populations of a full gate run.
#[derive(Clone, Debug, PartialEq)]
pub struct GateRecord {
    pub summary: GateSummary,
    pub times: Vec<f64>,
    /// Unwrapped phase series in the order `00, 01, 10, 11`.
    pub phases: [Vec<f64>; 4],
    pub theta_series: Vec<f64>,
    /// Per initial state, `|⟨m|ψ_n(t)⟩|²` for all 16 `m`.
    pub populations: [Vec<[f64; DIM]>; 4],
    pub max_norm_drift: f64,
    pub renormalized: bool,
}

impl GateRecord {
    /// Assembles a record from the four runs, in the order `00, 01, 10, 11`.
    ///
    /// Fails if any survival amplitude vanished during its run.
    pub fn from_runs(runs: [SurvivalRun; 4]) -> Result<Self> {
        let summary = summary_from_runs(&runs)?;
        let max_norm_drift = runs.iter().fold(0.0, |a, r| a.max(r.max_norm_drift));
        let renormalized = runs.iter().any(|r| r.renormalized);
        let [r0, r1, r2, r3] = runs;
        let theta_series = (0..r0.phase.len())
            .map(|k| theta_from_phases(&[r0.phase[k], r1.phase[k], r2.phase[k], r3.phase[k]]))
            .collect();
        Ok(GateRecord {
            summary,
            times: r0.times,
            phases: [r0.phase, r1.phase, r2.phase, r3.phase],
            theta_series,
            populations: [r0.populations, r1.populations, r2.populations, r3.populations],
            max_norm_drift,
            renormalized,
        })
    }

    /// Survival population series `|⟨n|ψ_n(t)⟩|²` for computational state `n`.
    pub fn survival(&self, n: usize) -> Vec<f64> {
        let i = COMPUTATIONAL[n].index();
        self.populations[n].iter().map(|p| p[i]).collect()
    }
}

fn summary_from_runs(runs: &[SurvivalRun; 4]) -> Result<GateSummary> {
    let mut phi = [0.0; 4];
    let mut leakage = [0.0; 4];
    for (n, r) in runs.iter().enumerate() {
        if let Some((time_ps, population)) = r.phase_lost {
            return Err(Error::PhaseUndefined {
                state: COMPUTATIONAL_LABELS[n],
                time_ps,
                population,
            });
        }
        phi[n] = r.final_phase;
        leakage[n] = r.leakage;
    }
    Ok(GateSummary { phi, leakage })
}

fn prepared_model(p: &PhysicalParams, s: &PulseSchedule) -> Result<DriveModel> {
    s.validate()?;
    let model = DriveModel::new(p)?;
    model.check_step(s)?;
    Ok(model)
}

fn four_runs(model: &DriveModel, s: &PulseSchedule, record: bool) -> Result<[SurvivalRun; 4]> {
    let mut runs = Vec::with_capacity(4);
    for n in COMPUTATIONAL {
        runs.push(survival_run(model, s, n, record)?);
    }
    Ok(runs.try_into().expect("four computational states"))
}

/// Runs all four computational states and records phases, θ(t) and
/// populations.
pub fn gate_phases(p: &PhysicalParams, s: &PulseSchedule) -> Result<GateRecord> {
    let model = prepared_model(p, s)?;
    gate_phases_model(&model, s)
}

/// As [`gate_phases`] with a prepared model. The step size is not checked.
pub fn gate_phases_model(model: &DriveModel, s: &PulseSchedule) -> Result<GateRecord> {
    GateRecord::from_runs(four_runs(model, s, true)?)
}

/// Final phases and leakage only, without storing time series.
pub fn gate_summary(p: &PhysicalParams, s: &PulseSchedule) -> Result<GateSummary> {
    let model = prepared_model(p, s)?;
    summary_from_runs(&four_runs(&model, s, false)?)
}

/// Single-qubit corrections turning the gate into a controlled phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CphaseReport {
    /// Diagonal correction on dot a: `diag(e^{−iφ₀₀}, e^{−iφ₁₀})`.
    pub u1: [C64; 2],
    /// Diagonal correction on dot b: `diag(1, e^{i(φ₀₀−φ₀₁)})`.
    pub u2: [C64; 2],
    /// Corrected diagonal on `00, 01, 10, 11`; equals `(1, 1, 1, e^{iθ})`.
    pub corrected: [C64; 4],
    pub theta: f64,
    /// `|θ − π|` modulo 2π.
    pub theta_error: f64,
    pub within_tolerance: bool,
}

/// Builds the local corrections and checks how close the gate is to a
/// controlled-π phase.
pub fn cphase_check(g: &GateSummary, tol: f64) -> Result<CphaseReport> {
    for (n, &l) in g.leakage.iter().enumerate() {
        if !(l < CPHASE_LEAKAGE_LIMIT) {
            return Err(Error::LeakageTooLarge {
                state: COMPUTATIONAL_LABELS[n],
                leakage: l,
                limit: CPHASE_LEAKAGE_LIMIT,
            });
        }
    }
    let [p00, p01, p10, _] = g.phi;
    let u1 = [C64::from_polar(1.0, -p00), C64::from_polar(1.0, -p10)];
    let u2 = [C64::new(1.0, 0.0), C64::from_polar(1.0, p00 - p01)];
    let mut corrected = [ZERO; 4];
    for (n, c) in corrected.iter_mut().enumerate() {
        let (a, b) = (n >> 1, n & 1);
        *c = C64::from_polar(1.0, g.phi[n]) * u1[a] * u2[b];
    }
    let theta = g.theta();
    let err = theta_error(theta);
    Ok(CphaseReport {
        u1,
        u2,
        corrected,
        theta,
        theta_error: err,
        within_tolerance: err <= tol,
    })
}

/// Survival populations of the four computational states.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationReport {
    pub times: Vec<f64>,
    /// `|⟨n|ψ_n(t)⟩|²` in the order `00, 01, 10, 11`.
    pub survival: [Vec<f64>; 4],
}

pub fn populations_report(p: &PhysicalParams, s: &PulseSchedule) -> Result<PopulationReport> {
    let model = prepared_model(p, s)?;
    let runs = four_runs(&model, s, true)?;
    Ok(PopulationReport {
        times: runs[0].times.clone(),
        survival: [runs[0].survival(), runs[1].survival(), runs[2].survival(), runs[3].survival()],
    })
}

/// Leakage at one time-scale factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub factor: f64,
    pub leakage: [f64; 4],
    pub max_leakage: f64,
}

/// Final leakage with both pulse times (and the window) stretched by each
/// factor.
pub fn adiabaticity_scan(p: &PhysicalParams, s: &PulseSchedule, factors: &[f64]) -> Result<Vec<ScanPoint>> {
    let mut out = Vec::with_capacity(factors.len());
    for &factor in factors {
        out.push(scan_point(p, s, factor)?);
    }
    Ok(out)
}

/// One entry of [`adiabaticity_scan`].
pub fn scan_point(p: &PhysicalParams, s: &PulseSchedule, factor: f64) -> Result<ScanPoint> {
    if !(factor >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "scan.factors",
            reason: "time-scale factors must be at least 1",
        });
    }
    let scaled = s.time_scaled(factor);
    let model = prepared_model(p, &scaled)?;
    let mut leakage = [0.0; 4];
    for (n, st) in COMPUTATIONAL.iter().enumerate() {
        leakage[n] = survival_run(&model, &scaled, *st, false)?.leakage;
    }
    Ok(ScanPoint {
        factor,
        leakage,
        max_leakage: leakage.iter().fold(0.0, |a, &b| a.max(b)),
    })
}
