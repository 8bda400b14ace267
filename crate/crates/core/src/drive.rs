//! Chirped pulses and the rotating-frame Hamiltonian of the driven dot pair.
//!
//! In the frame rotating at the laser frequency,
//!
//! ```text
//! H(t) = Σ_κ [ δ|1⟩_κ⟨1| + Δ_κ(t) P_X,κ + (Ω(t)/2)(|1⟩_κ⟨x+| + ε̃|0⟩_κ⟨x−| + H.c.) ]
//!        + H_F + V_XX Σ_{ν,μ ∈ {x+, x−}} |νμ⟩⟨νμ|
//! ```
//!
//! with `Δ_κ(t) = Δ(t) + offset_κ` and the first-order Förster term `H_F`.
//! `|00⟩` is the zero of energy.

use alloc::vec::Vec;

// std, when linked anywhere in the build, provides these methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::{enumerate_basis, Dot, DotState, TwoDotBasisState};
use crate::error::{Error, Result};
use crate::foerster::{build_hf, ForsterCouplings, HfOrder};
use crate::linalg::{Operator16, State16, C64, DIM, ZERO};
use crate::units::HBAR_MEV_PS;

/// Largest phase `dt·E_max/ħ` a single step may accumulate.
pub const MAX_PHASE_PER_STEP: f64 = 0.1;

/// Default integration step (ps).
pub const DEFAULT_DT_PS: f64 = 0.001;

/// Half-width of the default window in units of the longer pulse time.
pub const DEFAULT_WINDOW_WIDTHS: f64 = 4.0;

/// `Ω(t) = Ω₀ exp(−(t/τ_Ω)²)` and `Δ(t) = −Δ₀ (1 − ½ exp(−(t/τ_Δ)²))` on the
/// grid `t_start, t_start + dt, …`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSchedule {
    /// Peak Rabi energy Ω₀ (meV).
    pub omega0: f64,
    /// τ_Ω (ps).
    pub tau_omega: f64,
    /// Maximum detuning Δ₀ (meV).
    pub delta0: f64,
    /// τ_Δ (ps).
    pub tau_delta: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
}

impl PulseSchedule {
    /// Schedule on `[−4·max(τ_Ω, τ_Δ), +4·max(τ_Ω, τ_Δ)]` with `dt = 1 fs`.
    pub fn new(omega0: f64, tau_omega: f64, delta0: f64, tau_delta: f64) -> Self {
        let half = DEFAULT_WINDOW_WIDTHS * tau_omega.max(tau_delta);
        PulseSchedule {
            omega0,
            tau_omega,
            delta0,
            tau_delta,
            t_start: -half,
            t_end: half,
            dt: DEFAULT_DT_PS,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_window(mut self, t_start: f64, t_end: f64) -> Self {
        self.t_start = t_start;
        self.t_end = t_end;
        self
    }

    /// Resets the window to the default `±4·max(τ_Ω, τ_Δ)`.
    pub fn with_default_window(self) -> Self {
        let half = DEFAULT_WINDOW_WIDTHS * self.tau_omega.max(self.tau_delta);
        self.with_window(-half, half)
    }

    /// Stretches both pulse times and the window by `factor`; `dt` is kept.
    pub fn time_scaled(&self, factor: f64) -> Self {
        PulseSchedule {
            tau_omega: self.tau_omega * factor,
            tau_delta: self.tau_delta * factor,
            t_start: self.t_start * factor,
            t_end: self.t_end * factor,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega0,
            self.tau_omega,
            self.delta0,
            self.tau_delta,
            self.t_start,
            self.t_end,
            self.dt,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter {
                name: "pulse",
                reason: "pulse parameters must be finite",
            });
        }
        if self.omega0 < 0.0 {
            return Err(Error::InvalidParameter {
                name: "pulse.omega0_mev",
                reason: "peak Rabi energy must be non-negative",
            });
        }
        if self.tau_omega <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "pulse.tau_omega_ps",
                reason: "must be positive",
            });
        }
        if self.tau_delta <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "pulse.tau_delta_ps",
                reason: "must be positive",
            });
        }
        if !(self.t_start < 0.0 && self.t_end > 0.0) {
            return Err(Error::InvalidParameter {
                name: "pulse.t_start_ps",
                reason: "window must satisfy t_start < 0 < t_end",
            });
        }
        if self.dt <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "pulse.dt_ps",
                reason: "must be positive",
            });
        }
        Ok(())
    }

    /// Number of steps covering the window.
    pub fn steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.dt).round().max(1.0) as usize
    }

    /// Time of grid point `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.dt
    }
}

pub fn rabi_envelope(t: f64, s: &PulseSchedule) -> f64 {
    let u = t / s.tau_omega;
    s.omega0 * (-u * u).exp()
}

pub fn detuning(t: f64, s: &PulseSchedule) -> f64 {
    let u = t / s.tau_delta;
    -s.delta0 * (1.0 - 0.5 * (-u * u).exp())
}

/// `dΔ/dt` (meV/ps).
pub fn detuning_rate(t: f64, s: &PulseSchedule) -> f64 {
    let u = t / s.tau_delta;
    -s.delta0 * t / (s.tau_delta * s.tau_delta) * (-u * u).exp()
}

/// `max_t |dΔ/dt| = Δ₀ / (τ_Δ √(2e))`, reached at `t = ±τ_Δ/√2`.
pub fn max_detuning_rate(s: &PulseSchedule) -> f64 {
    s.delta0.abs() / (s.tau_delta * (2.0 * core::f64::consts::E).sqrt())
}

/// Physical parameters of the dot pair (energies in meV).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Zeeman splitting δ of the qubit.
    pub delta: f64,
    /// Hole mixing ε.
    pub eps: f64,
    /// Optical mixing ε̃ = ε·l_lh/(l_hh·√3).
    pub eps_tilde: f64,
    pub couplings: ForsterCouplings,
    /// Biexcitonic shift.
    pub vxx: f64,
    /// Static detuning offset of each dot from the common laser.
    pub offset_a: f64,
    pub offset_b: f64,
}

impl PhysicalParams {
    /// Resonant dots with `ε̃ = ε`.
    pub fn new(delta: f64, eps: f64, couplings: ForsterCouplings, vxx: f64) -> Self {
        PhysicalParams {
            delta,
            eps,
            eps_tilde: eps,
            couplings,
            vxx,
            offset_a: 0.0,
            offset_b: 0.0,
        }
    }

    /// `ε̃` from the dipole length ratio `l_lh/l_hh`.
    pub fn eps_tilde_from_lengths(eps: f64, l_lh_over_l_hh: f64) -> f64 {
        eps * l_lh_over_l_hh / 3.0_f64.sqrt()
    }

    pub fn offset(&self, dot: Dot) -> f64 {
        match dot {
            Dot::A => self.offset_a,
            Dot::B => self.offset_b,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                name: "physics.eps",
                reason: "must satisfy |eps| < 1",
            });
        }
        if !(self.eps_tilde.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                name: "physics.eps_tilde",
                reason: "must satisfy |eps_tilde| < 1",
            });
        }
        let all = [
            self.delta,
            self.vxx,
            self.offset_a,
            self.offset_b,
            self.couplings.m_hh_hh,
            self.couplings.m_lh_lh,
            self.couplings.m_lh_hh,
        ];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "physics",
                reason: "energies must be finite",
            });
        }
        Ok(())
    }
}

/// σ+ coupling of one dot in the rotating frame, tensored with the identity
/// on the other dot.
pub fn light_coupling_rwa(omega: f64, eps_tilde: f64, dot: Dot) -> Operator16 {
    let mut h = Operator16::zero();
    for s in enumerate_basis() {
        let (upper, amp) = match s.on(dot) {
            DotState::Q1 => (DotState::Xplus, omega / 2.0),
            DotState::Q0 => (DotState::Xminus, eps_tilde * omega / 2.0),
            _ => continue,
        };
        h.add_hermitian_pair(s.index(), s.with(dot, upper).index(), C64::new(amp, 0.0));
    }
    h
}

/// Diagonal of the field-free part, excluding the detuning.
fn static_diagonal(p: &PhysicalParams) -> [f64; DIM] {
    let mut d = [0.0; DIM];
    for s in enumerate_basis() {
        let mut e = 0.0;
        for dot in [Dot::A, Dot::B] {
            match s.on(dot) {
                DotState::Q1 => e += p.delta,
                DotState::Xplus | DotState::Xminus => e += p.offset(dot),
                DotState::Q0 => {}
            }
        }
        if s.trion_count() == 2 {
            e += p.vxx;
        }
        d[s.index()] = e;
    }
    d
}

/// Number of trions in each basis state (the coefficient of `Δ(t)`).
pub fn trion_number_diagonal() -> [f64; DIM] {
    enumerate_basis().map(|s| s.trion_count() as f64)
}

/// Hamiltonian for a static detuning `Δ` and Rabi energy `Ω`.
pub fn static_hamiltonian(p: &PhysicalParams, detuning: f64, omega: f64) -> Result<Operator16> {
    Ok(DriveModel::new(p)?.hamiltonian(detuning, omega))
}

/// Full rotating-frame Hamiltonian at time `t`.
pub fn build_total(t: f64, p: &PhysicalParams, s: &PulseSchedule) -> Result<Operator16> {
    static_hamiltonian(p, detuning(t, s), rabi_envelope(t, s))
}

/// Sparse triplet form of an operator: `(row, column, value)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseOp(Vec<(u8, u8, C64)>);

impl SparseOp {
    pub fn from_dense(m: &Operator16) -> Self {
        let mut out = Vec::new();
        for i in 0..DIM {
            for j in 0..DIM {
                if m.0[i][j] != ZERO {
                    out.push((i as u8, j as u8, m.0[i][j]));
                }
            }
        }
        SparseOp(out)
    }

    /// `out += scale · A·psi`
    #[inline]
    pub fn apply_add(&self, scale: f64, psi: &State16, out: &mut State16) {
        for &(i, j, v) in &self.0 {
            out[i as usize] += v * psi[j as usize] * scale;
        }
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }
}

/// `H(Δ, Ω) = H_static + Δ·N_X + Ω·L`, split so it can be applied to a state
/// without assembling the dense matrix.
#[derive(Clone, Debug)]
pub struct DriveModel {
    base: Operator16,
    base_sparse: SparseOp,
    trion_number: [f64; DIM],
    light: Operator16,
    light_sparse: SparseOp,
}

impl DriveModel {
    /// Model with the first-order Förster term.
    pub fn new(p: &PhysicalParams) -> Result<Self> {
        Self::with_foerster_order(p, HfOrder::FirstOrder)
    }

    pub fn with_foerster_order(p: &PhysicalParams, order: HfOrder) -> Result<Self> {
        p.validate()?;
        let base = Operator16::from_diagonal(&static_diagonal(p)) + build_hf(p.eps, &p.couplings, order)?;
        let light = light_coupling_rwa(1.0, p.eps_tilde, Dot::A) + light_coupling_rwa(1.0, p.eps_tilde, Dot::B);
        Ok(Self::from_parts(base, light))
    }

    /// Model from an explicit static part and unit-Ω light operator.
    pub fn from_parts(base: Operator16, light: Operator16) -> Self {
        DriveModel {
            base_sparse: SparseOp::from_dense(&base),
            base,
            trion_number: trion_number_diagonal(),
            light_sparse: SparseOp::from_dense(&light),
            light,
        }
    }

    /// Adds a static term to the Hamiltonian.
    pub fn with_static_term(mut self, extra: &Operator16) -> Self {
        self.base += *extra;
        self.base_sparse = SparseOp::from_dense(&self.base);
        self
    }

    pub fn static_part(&self) -> &Operator16 {
        &self.base
    }

    pub fn hamiltonian(&self, detuning: f64, omega: f64) -> Operator16 {
        let mut h = self.base + self.light.scale(omega);
        for i in 0..DIM {
            h.0[i][i] += self.trion_number[i] * detuning;
        }
        h
    }

    pub fn at(&self, t: f64, s: &PulseSchedule) -> Operator16 {
        self.hamiltonian(detuning(t, s), rabi_envelope(t, s))
    }

    /// `H(Δ, Ω)·psi`.
    #[inline]
    pub fn apply(&self, detuning: f64, omega: f64, psi: &State16) -> State16 {
        let mut out = [ZERO; DIM];
        for i in 0..DIM {
            out[i] = psi[i] * (self.trion_number[i] * detuning);
        }
        self.base_sparse.apply_add(1.0, psi, &mut out);
        self.light_sparse.apply_add(omega, psi, &mut out);
        out
    }

    /// Largest spectral radius of `H(t)` over the schedule, sampled on the
    /// window ends, `t = 0`, and 200 interior points.
    pub fn max_spectral_radius(&self, s: &PulseSchedule) -> f64 {
        let n = 200;
        let mut worst = self.at(0.0, s).spectral_radius();
        for k in 0..=n {
            let t = s.t_start + (s.t_end - s.t_start) * k as f64 / n as f64;
            worst = worst.max(self.at(t, s).spectral_radius());
        }
        worst
    }

    /// Checks `dt·E_max/ħ < 0.1` and returns `E_max` (meV).
    pub fn check_step(&self, s: &PulseSchedule) -> Result<f64> {
        let e_max = self.max_spectral_radius(s);
        let phase = s.dt.abs() * e_max / HBAR_MEV_PS;
        if !(phase < MAX_PHASE_PER_STEP) {
            return Err(Error::StepTooLarge {
                dt_ps: s.dt,
                e_max_mev: e_max,
                phase_per_step: phase,
            });
        }
        Ok(e_max)
    }
}

/// Sorted eigenvalues at one value of `Δ/Ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumPoint {
    pub ratio: f64,
    pub eigenvalues: [f64; DIM],
}

/// Eigenvalues of the static Hamiltonian with `Ω = omega_fixed` and
/// `Δ = ratio·Ω` for each ratio on the grid.
pub fn spectrum_sweep(
    p: &PhysicalParams,
    omega_fixed: f64,
    ratio_grid: &[f64],
) -> Result<Vec<SpectrumPoint>> {
    if ratio_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "spectrum.ratios",
            reason: "ratio grid must not be empty",
        });
    }
    let model = DriveModel::new(p)?;
    Ok(ratio_grid
        .iter()
        .map(|&ratio| SpectrumPoint {
            ratio,
            eigenvalues: model.hamiltonian(ratio * omega_fixed, omega_fixed).eigenvalues(),
        })
        .collect())
}

/// Splits sorted eigenvalues into clusters wherever consecutive values are
/// more than `min_gap` apart. Returns cluster sizes.
pub fn cluster_sizes(sorted: &[f64], min_gap: f64) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut current = 0;
    for (i, _) in sorted.iter().enumerate() {
        if i > 0 && sorted[i] - sorted[i - 1] > min_gap {
            sizes.push(current);
            current = 0;
        }
        current += 1;
    }
    if current > 0 {
        sizes.push(current);
    }
    sizes
}

/// Sector of each basis state by trion number, used to group eigenvalues
/// far from resonance.
pub fn sector_of(s: TwoDotBasisState) -> usize {
    s.trion_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{dot_swap_permutation, manifolds, DotState::*};
    use crate::presets;
    use proptest::prelude::*;

    fn st(a: DotState, b: DotState) -> usize {
        TwoDotBasisState::new(a, b).index()
    }

    #[test]
    fn envelopes() {
        let s = presets::biexcitonic_pulse();
        assert_eq!(rabi_envelope(0.0, &s), 8.0);
        assert!((rabi_envelope(s.tau_omega, &s) - 8.0 / core::f64::consts::E).abs() < 1e-14);
        assert!((rabi_envelope(3.55, &s) - 2.943).abs() < 5e-4);
        assert_eq!(rabi_envelope(1.3, &s), rabi_envelope(-1.3, &s));
        assert_eq!(detuning(0.0, &s), -2.25);
        assert!((detuning(1e4, &s) + 4.5).abs() < 1e-12);
        assert!((detuning(2.55, &s) - (-4.5 * (1.0 - 1.0 / (2.0 * core::f64::consts::E)))).abs() < 1e-12);
        assert!((detuning(2.55, &s) + 3.672).abs() < 5e-4);
    }

    #[test]
    fn detuning_rate_matches_finite_difference() {
        let s = presets::biexcitonic_pulse();
        for t in [-3.0, -0.7, 0.0, 1.1, 4.0] {
            let h = 1e-5;
            let fd = (detuning(t + h, &s) - detuning(t - h, &s)) / (2.0 * h);
            assert!((fd - detuning_rate(t, &s)).abs() < 1e-8);
        }
        let peak = detuning_rate(-s.tau_delta / 2.0_f64.sqrt(), &s).abs();
        assert!((peak - max_detuning_rate(&s)).abs() < 1e-12);
    }

    #[test]
    fn light_coupling_elements() {
        let h = light_coupling_rwa(8.0, 0.1, Dot::A);
        assert!(h.is_hermitian(0.0));
        assert!((h.0[st(Q0, Q0)][st(Xminus, Q0)].re - 0.4).abs() < 1e-15);
        assert_eq!(h.0[st(Q1, Q0)][st(Xplus, Q0)].re, 4.0);
        // dot b untouched
        assert_eq!(h.0[st(Q0, Q1)][st(Q0, Xplus)].re, 0.0);

        let blocked = light_coupling_rwa(8.0, 0.0, Dot::B);
        for other in DotState::ALL {
            assert_eq!(blocked.0[st(other, Q0)][st(other, Xminus)], ZERO);
        }
        assert_eq!(light_coupling_rwa(0.0, 0.1, Dot::A), Operator16::zero());
    }

    #[test]
    fn diagonal_terms() {
        let mut p = presets::biexcitonic_params();
        p.offset_b = 0.3;
        let s = presets::biexcitonic_pulse();
        let t = 0.7;
        let h = build_total(t, &p, &s).unwrap();
        let d = detuning(t, &s);
        assert!((h.0[st(Q1, Xplus)][st(Q1, Xplus)].re - (p.delta + d + 0.3)).abs() < 1e-14);
        assert!((h.0[st(Xplus, Xminus)][st(Xplus, Xminus)].re - (2.0 * d + 0.3 + p.vxx)).abs() < 1e-14);
        assert_eq!(h.0[0][0].re, 0.0);

        let mut free = p;
        free.couplings = ForsterCouplings::zero();
        free.vxx = 0.0;
        free.offset_b = 0.0;
        let h = static_hamiltonian(&free, 0.0, 0.0).unwrap();
        let diag: Vec<f64> = (0..DIM).map(|i| h.0[i][i].re).collect();
        assert_eq!(diag[st(Q0, Q0)], 0.0);
        assert_eq!(diag[st(Q0, Q1)], p.delta);
        assert_eq!(diag[st(Q1, Q0)], p.delta);
        assert_eq!(diag[st(Q1, Q1)], 2.0 * p.delta);
        assert_eq!(h, Operator16::from_diagonal(&diag.try_into().unwrap()));
    }

    #[test]
    fn apply_matches_dense() {
        let p = presets::forster_params();
        let m = DriveModel::new(&p).unwrap();
        let psi: State16 = core::array::from_fn(|i| C64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.05));
        let dense = m.hamiltonian(-1.3, 2.7).apply(&psi);
        let sparse = m.apply(-1.3, 2.7, &psi);
        for (a, b) in dense.iter().zip(sparse.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn foerster_pair_splitting_without_light() {
        let mut p = presets::biexcitonic_params();
        p.eps = 0.0;
        p.eps_tilde = 0.0;
        let delta_static = -1.7;
        let h = static_hamiltonian(&p, delta_static, 0.0).unwrap();
        let block = [st(Q1, Xplus), st(Xplus, Q1)];
        let m = [
            [h.0[block[0]][block[0]], h.0[block[0]][block[1]]],
            [h.0[block[1]][block[0]], h.0[block[1]][block[1]]],
        ];
        let (ev, _) = crate::linalg::hermitian_eigen(&m);
        let centre = delta_static + p.delta;
        assert!((ev[0] - (centre - p.couplings.m_hh_hh)).abs() < 1e-13);
        assert!((ev[1] - (centre + p.couplings.m_hh_hh)).abs() < 1e-13);
    }

    #[test]
    fn spectrum_without_light_is_analytic() {
        let mut p = presets::spectrum_params(1.0);
        p.eps = 0.0;
        p.eps_tilde = 0.0;
        let (d, m, v) = (p.delta, p.couplings.m_hh_hh, p.vxx);
        let ratio = 2.5;
        let omega = 1.0;
        let x = ratio * omega;
        let pts = spectrum_sweep(&p, omega, &[ratio]).unwrap();
        // Ω enters only via the light term; evaluate at Ω → 0 with Δ fixed
        let h0 = static_hamiltonian(&p, x, 0.0).unwrap().eigenvalues();
        let mut expect = [
            0.0, x - m, x + m, 2.0 * x + v,
            d, x, x + d, 2.0 * x + v,
            d, x, x + d, 2.0 * x + v,
            2.0 * d, x + d - m, x + d + m, 2.0 * x + v,
        ];
        expect.sort_by(f64::total_cmp);
        for (a, b) in h0.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert_eq!(pts.len(), 1);
    }

    #[test]
    fn single_point_zero_couplings_gives_diagonal() {
        let p = PhysicalParams::new(0.7, 0.0, ForsterCouplings::zero(), 0.0);
        let pts = spectrum_sweep(&p, 0.0, &[3.0]).unwrap();
        let h = static_hamiltonian(&p, 0.0, 0.0).unwrap();
        let mut diag: Vec<f64> = (0..DIM).map(|i| h.0[i][i].re).collect();
        diag.sort_by(f64::total_cmp);
        assert_eq!(pts[0].eigenvalues.to_vec(), diag);
        assert!(spectrum_sweep(&p, 1.0, &[]).is_err());
    }

    #[test]
    fn far_detuned_spectrum_has_three_groups() {
        let p = presets::spectrum_params(1.0);
        for ratio in [-10.0, 10.0] {
            let ev = spectrum_sweep(&p, 1.0, &[ratio]).unwrap()[0].eigenvalues;
            assert_eq!(cluster_sizes(&ev, 4.0), [4, 8, 4]);
        }
    }

    #[test]
    fn step_check() {
        let p = presets::biexcitonic_params();
        let s = presets::biexcitonic_pulse();
        let m = DriveModel::new(&p).unwrap();
        let e_max = m.check_step(&s).unwrap();
        assert!(e_max > 5.0 && e_max < 20.0, "E_max = {e_max}");
        assert!(matches!(m.check_step(&s.with_dt(0.05)), Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn schedule_validation() {
        let s = presets::biexcitonic_pulse();
        assert!(s.validate().is_ok());
        assert_eq!(s.steps(), 28_400);
        assert!(PulseSchedule { tau_omega: 0.0, ..s }.validate().is_err());
        assert!(s.with_window(1.0, 2.0).validate().is_err());
        assert!(s.with_dt(0.0).validate().is_err());
        let scaled = s.time_scaled(2.0);
        assert_eq!(scaled.tau_delta, 5.1);
        assert_eq!(scaled.steps(), 56_800);
    }

    fn arb_params() -> impl Strategy<Value = PhysicalParams> {
        (
            -2.0..2.0f64,
            -0.5..0.5f64,
            -0.5..0.5f64,
            (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64),
            -3.0..3.0f64,
            -1.0..1.0f64,
        )
            .prop_map(|(delta, eps, eps_tilde, m, vxx, off)| PhysicalParams {
                delta,
                eps,
                eps_tilde,
                couplings: ForsterCouplings {
                    m_hh_hh: m.0,
                    m_lh_lh: m.1,
                    m_lh_hh: m.2,
                },
                vxx,
                offset_a: off,
                offset_b: -0.5 * off,
            })
    }

    fn arb_pulse() -> impl Strategy<Value = PulseSchedule> {
        (0.0..10.0f64, 0.5..6.0f64, -6.0..6.0f64, 0.5..6.0f64)
            .prop_map(|(o, to, d, td)| PulseSchedule::new(o, to, d, td))
    }

    /// Connected components of the non-zero pattern of `h`.
    fn components(h: &Operator16) -> Vec<Vec<usize>> {
        let mut seen = [false; DIM];
        let mut out = Vec::new();
        for start in 0..DIM {
            if seen[start] {
                continue;
            }
            let mut comp = std::vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let i = comp[k];
                for j in 0..DIM {
                    if !seen[j] && (h.0[i][j] != ZERO || h.0[j][i] != ZERO) {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    proptest! {
        #[test]
        fn hamiltonian_is_hermitian(p in arb_params(), s in arb_pulse(), t in -20.0..20.0f64) {
            let h = build_total(t, &p, &s).unwrap();
            prop_assert!(h.is_hermitian(0.0));
        }

        #[test]
        fn block_structure(p in arb_params(), s in arb_pulse(), t in -20.0..20.0f64) {
            let h = build_total(t, &p, &s).unwrap();
            let scale = h.frobenius_norm();
            for m1 in manifolds() {
                for m2 in manifolds() {
                    if m1 == m2 { continue; }
                    for i in m1.indices() {
                        for j in m2.indices() {
                            prop_assert!(h.0[i][j].norm() <= 1e-12 * scale);
                        }
                    }
                }
            }
        }

        #[test]
        fn dot_swap_symmetry(p in arb_params(), s in arb_pulse(), t in -20.0..20.0f64) {
            let mut p = p;
            p.offset_b = p.offset_a;
            let h = build_total(t, &p, &s).unwrap();
            let swapped = h.permuted(&dot_swap_permutation());
            prop_assert!((swapped - h).max_abs() < 1e-14);
        }

        #[test]
        fn sorted_eigenvalues_are_lipschitz_in_ratio(p in arb_params(), start in -8.0..6.0f64) {
            let omega = 1.3;
            let step = 0.01;
            let grid: Vec<f64> = (0..200).map(|k| start + k as f64 * step).collect();
            let pts = spectrum_sweep(&p, omega, &grid).unwrap();
            // ‖∂H/∂ratio‖₂ = 2Ω (double-trion states carry 2Δ)
            let bound = 2.0 * omega * step * (1.0 + 1e-9) + 1e-12;
            for w in pts.windows(2) {
                for k in 0..DIM {
                    prop_assert!((w[1].eigenvalues[k] - w[0].eigenvalues[k]).abs() <= bound);
                }
            }
        }
    }

    #[test]
    fn manifolds_match_numerical_reachability() {
        // generic parameters: every structural coupling is non-zero
        let p = PhysicalParams {
            delta: 0.9,
            eps: 0.13,
            eps_tilde: 0.11,
            couplings: ForsterCouplings { m_hh_hh: 0.5, m_lh_lh: 0.2, m_lh_hh: 0.4 },
            vxx: 1.7,
            offset_a: 0.1,
            offset_b: -0.2,
        };
        let h = build_total(0.3, &p, &presets::biexcitonic_pulse()).unwrap();
        let comps = components(&h);
        assert_eq!(comps.len(), 4);
        for m in manifolds() {
            let mut idx = m.indices().to_vec();
            idx.sort();
            assert!(comps.contains(&idx));
        }
        assert_eq!(
            crate::basis::manifold_of(TwoDotBasisState::new(Xminus, Xplus)).seed,
            TwoDotBasisState::new(Q0, Q1)
        );
    }
}
