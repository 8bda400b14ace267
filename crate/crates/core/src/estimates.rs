//! Closed-form leakage estimates: Landau-Zener transitions at an avoided
//! crossing and phonon-assisted transitions.

// std, when linked anywhere in the build, provides these methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::COMPUTATIONAL;
use crate::drive::{detuning, max_detuning_rate, rabi_envelope, DriveModel, PhysicalParams, PulseSchedule};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, C64};
use crate::propagator::scan_point;
use crate::units::HBAR_MEV_PS;

/// Linear sweep through an avoided crossing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LZInput {
    /// Level separation at closest approach (meV).
    pub omega_gap: f64,
    /// Sweep rate `Δ̇` (meV/ps).
    pub delta_dot: f64,
}

impl LZInput {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_gap >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "lz.omega_gap_mev",
                reason: "gap must be non-negative",
            });
        }
        if !(self.delta_dot > 0.0) || !self.delta_dot.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lz.delta_dot_mev_per_ps",
                reason: "sweep rate must be positive and finite",
            });
        }
        Ok(())
    }
}

/// `P = exp(−π Ω² / (4 ħ Δ̇))`.
pub fn lz_probability(input: &LZInput) -> Result<f64> {
    input.validate()?;
    let g = input.omega_gap;
    Ok((-core::f64::consts::PI * g * g / (4.0 * HBAR_MEV_PS * input.delta_dot)).exp())
}

/// Inputs of the phonon estimate `P ∼ (J(ω_m)/Ω) exp(−λΩτ/ħ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhononEstimate {
    /// Spectral function at the cut-off, `J(ω_m)` (meV).
    pub j_at_cutoff: f64,
    pub lambda_const: f64,
    /// Gap Ω (meV).
    pub omega: f64,
    /// Gate time τ (ps).
    pub tau: f64,
}

impl PhononEstimate {
    /// Estimate with `λ = 1`.
    pub fn new(j_at_cutoff: f64, omega: f64, tau: f64) -> Self {
        PhononEstimate {
            j_at_cutoff,
            lambda_const: 1.0,
            omega,
            tau,
        }
    }
}

/// Order-of-magnitude phonon transition estimate. This is a scale, not a
/// bound on a probability, and can exceed 1 for small Ω.
pub fn phonon_suppression(e: &PhononEstimate) -> Result<f64> {
    if !(e.omega > 0.0) {
        return Err(Error::InvalidParameter {
            name: "phonon.omega_mev",
            reason: "gap must be positive",
        });
    }
    if !(e.j_at_cutoff >= 0.0 && e.lambda_const >= 0.0 && e.tau >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "phonon",
            reason: "J, lambda and tau must be non-negative",
        });
    }
    Ok(e.j_at_cutoff / e.omega * (-e.lambda_const * e.omega * e.tau / HBAR_MEV_PS).exp())
}

/// Number of time samples used to trace the dressed levels.
pub const GAP_SAMPLES: usize = 801;

/// Smallest separation, over the pulse, between the dressed level that
/// follows a computational state and its nearest neighbour in the same
/// manifold.
///
/// Levels are followed by rank: with the pulse off at the window edges each
/// computational state has a definite place in its manifold's ordered
/// spectrum, and adiabatic following keeps it there.
pub fn min_adiabatic_gap(p: &PhysicalParams, s: &PulseSchedule) -> Result<f64> {
    s.validate()?;
    let model = DriveModel::new(p)?;
    let mut gap = f64::INFINITY;
    for n in COMPUTATIONAL {
        let idx = crate::basis::manifold_of(n).indices();
        let pos = idx.iter().position(|&i| i == n.index()).expect("state lies in its manifold");
        let block = |t: f64| -> ([f64; 4], [[C64; 4]; 4]) {
            let h = model.hamiltonian(detuning(t, s), rabi_envelope(t, s));
            hermitian_eigen(&h.sub_block(&idx))
        };
        let (_, vecs) = block(s.t_start);
        let rank = (0..4)
            .max_by(|&a, &b| vecs[pos][a].norm_sqr().total_cmp(&vecs[pos][b].norm_sqr()))
            .expect("four levels");
        for k in 0..GAP_SAMPLES {
            let t = s.t_start + (s.t_end - s.t_start) * k as f64 / (GAP_SAMPLES - 1) as f64;
            let (ev, _) = block(t);
            if rank > 0 {
                gap = gap.min(ev[rank] - ev[rank - 1]);
            }
            if rank < 3 {
                gap = gap.min(ev[rank + 1] - ev[rank]);
            }
        }
    }
    Ok(gap)
}

/// Landau-Zener estimate next to the simulated leakage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LzReport {
    pub omega_gap: f64,
    pub delta_dot: f64,
    pub lz_estimate: f64,
    /// Largest final leakage of the four computational states.
    pub simulated_leakage: f64,
    pub leakage: [f64; 4],
}

/// Estimates leakage with the minimum adiabatic gap and the peak sweep rate
/// `max |dΔ/dt|`, and runs the simulation for comparison.
pub fn lz_vs_simulation(p: &PhysicalParams, s: &PulseSchedule) -> Result<LzReport> {
    let omega_gap = min_adiabatic_gap(p, s)?;
    let delta_dot = max_detuning_rate(s);
    let lz_estimate = lz_probability(&LZInput { omega_gap, delta_dot })?;
    let sim = scan_point(p, s, 1.0)?;
    Ok(LzReport {
        omega_gap,
        delta_dot,
        lz_estimate,
        simulated_leakage: sim.max_leakage,
        leakage: sim.leakage,
    })
}
