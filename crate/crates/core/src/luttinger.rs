//! Heavy/light hole sub-band mixing.
//!
//! The bulk four-band Luttinger-Kohn Hamiltonian is written in the basis
//! `{|+3/2⟩, |+1/2⟩, |−1/2⟩, |−3/2⟩}`. In a parabolic dot with well-defined
//! envelope parity `⟨k⟩ = 0`, so it splits into two 2×2 blocks,
//! `{+3/2, −1/2}` and `{−3/2, +1/2}`, each of the form
//!
//! ```text
//!         1  ⎡ 2ω_T + ΔE_h       W      ⎤
//!  H  =  ─── ⎢                           ⎥
//!         4  ⎣     W        2ω_T − ΔE_h ⎦
//! ```
//!
//! with `ω_T = ω_x + ω_y + ω_z`, `ΔE_h = (ω_T − 3ω_z)·γ₂/γ₁` and
//! `W = √3(γ₂ + γ₃)(ω_x − ω_y)/2`. Trap frequencies are given as `ħω` in meV.
//! Only axially symmetric terms are kept.

// std, when linked anywhere in the build, provides these methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};
use crate::units::HBAR2_OVER_2M0_MEV_NM2;

/// Below this ratio of `2|ΔE_h|` to `|W|` the first-order mixing estimate is
/// flagged as unreliable.
pub const PERTURBATIVE_RATIO_WARNING: f64 = 5.0;

/// Twice the `J_z` projection of each basis state, in basis order.
pub const JZ2_ORDER: [i8; 4] = [3, 1, -1, -3];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LuttingerParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl LuttingerParams {
    pub fn new(gamma1: f64, gamma2: f64, gamma3: f64) -> Result<Self> {
        let p = LuttingerParams {
            gamma1,
            gamma2,
            gamma3,
        };
        p.validate()?;
        Ok(p)
    }

    /// Typical GaAs values.
    pub const fn gaas() -> Self {
        LuttingerParams {
            gamma1: 6.8,
            gamma2: 2.1,
            gamma3: 2.9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma1.is_finite() && self.gamma2.is_finite() && self.gamma3.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "luttinger",
                reason: "Luttinger parameters must be finite",
            });
        }
        if self.gamma1 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "luttinger.gamma1",
                reason: "must be positive",
            });
        }
        if self.gamma1 <= 2.0 * self.gamma2 {
            return Err(Error::InvalidParameter {
                name: "luttinger.gamma2",
                reason: "gamma1 > 2·gamma2 is required for a positive heavy-hole mass",
            });
        }
        Ok(())
    }
}

/// Trap frequencies as energies `ħω` (meV).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapFrequencies {
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_z: f64,
}

impl TrapFrequencies {
    pub fn new(omega_x: f64, omega_y: f64, omega_z: f64) -> Result<Self> {
        let w = TrapFrequencies {
            omega_x,
            omega_y,
            omega_z,
        };
        w.validate()?;
        Ok(w)
    }

    /// An anisotropic self-assembled dot: `ħω = (10, 11, 45)` meV.
    pub const fn anisotropic_dot() -> Self {
        TrapFrequencies {
            omega_x: 10.0,
            omega_y: 11.0,
            omega_z: 45.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("trap.omega_x_mev", self.omega_x),
            ("trap.omega_y_mev", self.omega_y),
            ("trap.omega_z_mev", self.omega_z),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "trap frequency must be positive and finite",
                });
            }
        }
        Ok(())
    }

    pub fn total(&self) -> f64 {
        self.omega_x + self.omega_y + self.omega_z
    }

    pub fn swapped_xy(&self) -> Self {
        TrapFrequencies {
            omega_x: self.omega_y,
            omega_y: self.omega_x,
            omega_z: self.omega_z,
        }
    }
}

/// Envelope expectation values `⟨k⟩` (nm⁻¹).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct KVector {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

/// Bulk Luttinger-Kohn Hamiltonian (meV).
///
/// `kinetic_scale` is `ħ²/2m₀` in meV·nm²; pass [`HBAR2_OVER_2M0_MEV_NM2`]
/// for physical units.
pub fn lk_bulk_hamiltonian(p: &LuttingerParams, k: &KVector, kinetic_scale: f64) -> [[C64; 4]; 4] {
    let (g1, g2, g3) = (p.gamma1, p.gamma2, p.gamma3);
    let kperp2 = k.kx * k.kx + k.ky * k.ky;
    let kz2 = k.kz * k.kz;
    let h_hh = kinetic_scale * (kz2 * (g1 - 2.0 * g2) + kperp2 * (g1 + g2));
    let h_lh = kinetic_scale * (kz2 * (g1 + 2.0 * g2) + kperp2 * (g1 - g2));
    let sqrt3 = 3.0_f64.sqrt();
    let b = C64::new(k.kx, -k.ky) * (2.0 * sqrt3 * kinetic_scale * g3 * k.kz);
    let c = C64::new(
        g2 * (k.kx * k.kx - k.ky * k.ky),
        -2.0 * g3 * k.kx * k.ky,
    ) * (sqrt3 * kinetic_scale);
    let hh = C64::new(h_hh, 0.0);
    let lh = C64::new(h_lh, 0.0);
    [
        [hh, -b, -c, ZERO],
        [-b.conj(), lh, ZERO, -c],
        [-c.conj(), ZERO, lh, b],
        [ZERO, -c.conj(), b.conj(), hh],
    ]
}

/// [`lk_bulk_hamiltonian`] with the physical `ħ²/2m₀`.
pub fn lk_bulk_hamiltonian_physical(p: &LuttingerParams, k: &KVector) -> [[C64; 4]; 4] {
    lk_bulk_hamiltonian(p, k, HBAR2_OVER_2M0_MEV_NM2)
}

/// The quantities defining the confined 2×2 block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubbandParameters {
    /// `ω_T = ω_x + ω_y + ω_z`
    pub omega_t: f64,
    /// `ΔE_h = (ω_T − 3ω_z)·γ₂/γ₁`
    pub delta_e_h: f64,
    /// `W = √3(γ₂ + γ₃)(ω_x − ω_y)/2`
    pub w: f64,
}

pub fn subband_parameters(p: &LuttingerParams, w: &TrapFrequencies) -> SubbandParameters {
    let omega_t = w.total();
    SubbandParameters {
        omega_t,
        delta_e_h: (omega_t - 3.0 * w.omega_z) * p.gamma2 / p.gamma1,
        w: 3.0_f64.sqrt() * (p.gamma2 + p.gamma3) / 2.0 * (w.omega_x - w.omega_y),
    }
}

/// Confined Hamiltonian block in the `{|+3/2⟩, |−1/2⟩}` basis (meV).
pub fn parabolic_block(p: &LuttingerParams, w: &TrapFrequencies) -> [[f64; 2]; 2] {
    let s = subband_parameters(p, w);
    [
        [(2.0 * s.omega_t + s.delta_e_h) / 4.0, s.w / 4.0],
        [s.w / 4.0, (2.0 * s.omega_t - s.delta_e_h) / 4.0],
    ]
}

/// First-order mixing parameter `ε = W / (2ΔE_h)`.
///
/// Logs a warning when `2|ΔE_h| < 5|W|`, where the estimate loses accuracy.
pub fn mixing_epsilon(p: &LuttingerParams, w: &TrapFrequencies) -> Result<f64> {
    let s = subband_parameters(p, w);
    if s.delta_e_h == 0.0 {
        return Err(Error::DegenerateSubbands);
    }
    if 2.0 * s.delta_e_h.abs() < PERTURBATIVE_RATIO_WARNING * s.w.abs() {
        log::warn!(
            "hole mixing outside the perturbative regime: 2|ΔE_h| = {} meV, |W| = {} meV",
            2.0 * s.delta_e_h.abs(),
            s.w.abs()
        );
    }
    Ok(s.w / (2.0 * s.delta_e_h))
}

/// Mixing amplitude ratio from the exact rotation of [`parabolic_block`],
/// `tan(½·atan(W/ΔE_h))`.
pub fn exact_mixing_epsilon(p: &LuttingerParams, w: &TrapFrequencies) -> Result<f64> {
    let s = subband_parameters(p, w);
    if s.delta_e_h == 0.0 {
        return Err(Error::DegenerateSubbands);
    }
    Ok((0.5 * (s.w / s.delta_e_h).atan()).tan())
}

/// Gap between the two eigenvalues of [`parabolic_block`],
/// `½·√(ΔE_h² + W²)` (meV).
pub fn heavy_light_splitting(p: &LuttingerParams, w: &TrapFrequencies) -> f64 {
    let s = subband_parameters(p, w);
    0.5 * s.delta_e_h.hypot(s.w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoleKind {
    /// Predominantly `|+3/2⟩`, admixed with `|−1/2⟩`.
    HPlus,
    /// Predominantly `|−3/2⟩`, admixed with `|+1/2⟩`.
    HMinus,
    /// Predominantly `|+1/2⟩`.
    HPrimePlus,
    /// Predominantly `|−1/2⟩`.
    HPrimeMinus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedHoleState {
    pub eps: f64,
    pub kind: HoleKind,
    /// Amplitudes over `{|+3/2⟩, |+1/2⟩, |−1/2⟩, |−3/2⟩}`.
    pub amplitudes: [f64; 4],
}

impl MixedHoleState {
    /// Amplitude on the pure state with twice-projection `jz2`.
    pub fn amplitude_of(&self, jz2: i8) -> f64 {
        JZ2_ORDER
            .iter()
            .position(|&j| j == jz2)
            .map_or(0.0, |i| self.amplitudes[i])
    }

    pub fn overlap(&self, other: &MixedHoleState) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// The four mixed hole states `[h+, h−, h′+, h′−]` for mixing `eps`.
pub fn hole_eigenstates(eps: f64) -> Result<[MixedHoleState; 4]> {
    if !(eps.abs() < 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "mixing parameter must satisfy |eps| < 1",
        });
    }
    let c = (1.0 - eps * eps).sqrt();
    let mk = |kind, amplitudes| MixedHoleState {
        eps,
        kind,
        amplitudes,
    };
    Ok([
        mk(HoleKind::HPlus, [c, 0.0, eps, 0.0]),
        mk(HoleKind::HMinus, [0.0, eps, 0.0, c]),
        mk(HoleKind::HPrimePlus, [0.0, c, 0.0, -eps]),
        mk(HoleKind::HPrimeMinus, [-eps, 0.0, c, 0.0]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen;
    use proptest::prelude::*;

    const GAAS: LuttingerParams = LuttingerParams::gaas();
    const DOT: TrapFrequencies = TrapFrequencies::anisotropic_dot();

    #[test]
    fn gaas_subband_numbers() {
        let s = subband_parameters(&GAAS, &DOT);
        assert_eq!(s.omega_t, 66.0);
        // ΔE_h = −69·2.1/6.8, W = −√3·5/2
        assert!((s.delta_e_h - (-21.308_823_529_411_764)).abs() < 1e-12);
        assert!((s.w - (-4.330_127_018_922_193)).abs() < 1e-12);
        let eps = mixing_epsilon(&GAAS, &DOT).unwrap();
        assert!((eps - 0.1017).abs() < 5e-4, "eps = {eps}");
        let closed = 3.0_f64.sqrt() * 6.8 * 5.0 * (10.0 - 11.0) / (4.0 * 2.1 * (66.0 - 135.0));
        assert!((eps - closed).abs() < 1e-14);
        let gap = heavy_light_splitting(&GAAS, &DOT);
        assert!((gap - 10.9).abs() < 0.05, "gap = {gap}");
    }

    #[test]
    fn splitting_is_eigenvalue_gap() {
        let m = parabolic_block(&GAAS, &DOT);
        let mc = m.map(|r| r.map(|x| C64::new(x, 0.0)));
        let (ev, _) = hermitian_eigen(&mc);
        assert!((ev[1] - ev[0] - heavy_light_splitting(&GAAS, &DOT)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_limits() {
        let iso_xy = TrapFrequencies::new(10.0, 10.0, 45.0).unwrap();
        assert_eq!(parabolic_block(&GAAS, &iso_xy)[0][1], 0.0);
        assert_eq!(mixing_epsilon(&GAAS, &iso_xy).unwrap(), 0.0);
        let s = subband_parameters(&GAAS, &iso_xy);
        assert_eq!(heavy_light_splitting(&GAAS, &iso_xy), s.delta_e_h.abs() / 2.0);

        let iso = TrapFrequencies::new(20.0, 20.0, 20.0).unwrap();
        assert_eq!(heavy_light_splitting(&GAAS, &iso), 0.0);
        assert_eq!(mixing_epsilon(&GAAS, &iso), Err(Error::DegenerateSubbands));

        let no_coupling = LuttingerParams {
            gamma1: 6.8,
            gamma2: 0.0,
            gamma3: 0.0,
        };
        let m = parabolic_block(&no_coupling, &DOT);
        assert_eq!(m, [[33.0, 0.0], [0.0, 33.0]]);
    }

    #[test]
    fn parameter_validation() {
        assert!(LuttingerParams::new(6.8, 2.1, 2.9).is_ok());
        assert!(LuttingerParams::new(-1.0, 0.1, 0.1).is_err());
        assert!(LuttingerParams::new(4.0, 2.0, 0.1).is_err());
        assert!(TrapFrequencies::new(0.0, 1.0, 1.0).is_err());
        assert!(hole_eigenstates(1.0).is_err());
        assert!(hole_eigenstates(f64::NAN).is_err());
    }

    #[test]
    fn bulk_hamiltonian_special_k() {
        let zero = lk_bulk_hamiltonian_physical(&GAAS, &KVector::default());
        assert!(zero.iter().flatten().all(|v| *v == ZERO));

        let kz_only = lk_bulk_hamiltonian_physical(&GAAS, &KVector { kx: 0.0, ky: 0.0, kz: 0.3 });
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(kz_only[i][j], ZERO);
                }
            }
        }

        let kx = 0.2;
        let h = lk_bulk_hamiltonian_physical(&GAAS, &KVector { kx, ky: kx, kz: 0.0 });
        let c = -h[0][2];
        assert!(c.re.abs() < 1e-15);
        let expect = 3.0_f64.sqrt() * 2.0 * HBAR2_OVER_2M0_MEV_NM2 * GAAS.gamma3 * kx * kx;
        assert!((c.norm() - expect).abs() < 1e-12);
    }

    #[test]
    fn hole_states_with_ten_percent_mixing() {
        let [hp, hm, hpp, hpm] = hole_eigenstates(0.1).unwrap();
        assert_eq!(hp.amplitude_of(-1), 0.1);
        assert!((hp.amplitude_of(3) - 0.99_f64.sqrt()).abs() < 1e-15);
        assert_eq!(hp.overlap(&hpm), 0.0);
        assert_eq!(hm.overlap(&hpp), 0.0);
        for h in [hp, hm, hpp, hpm] {
            assert!((h.overlap(&h) - 1.0).abs() < 1e-15);
        }
        let pure = hole_eigenstates(0.0).unwrap()[0];
        assert_eq!(pure.amplitudes, [1.0, 0.0, 0.0, 0.0]);
    }

    fn arb_params() -> impl Strategy<Value = (LuttingerParams, TrapFrequencies)> {
        (
            1.0..10.0f64,
            0.05..0.45f64,
            0.0..4.0f64,
            5.0..20.0f64,
            5.0..20.0f64,
            30.0..80.0f64,
        )
            .prop_map(|(g1, g2_frac, g3, wx, wy, wz)| {
                (
                    LuttingerParams {
                        gamma1: g1,
                        gamma2: g1 * g2_frac,
                        gamma3: g3,
                    },
                    TrapFrequencies {
                        omega_x: wx,
                        omega_y: wy,
                        omega_z: wz,
                    },
                )
            })
    }

    proptest! {
        #[test]
        fn bulk_hamiltonian_is_hermitian(
            g in (1.0..10.0f64, 0.0..3.0f64, 0.0..3.0f64),
            k in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
        ) {
            let p = LuttingerParams { gamma1: g.0 + 2.0 * g.1, gamma2: g.1, gamma3: g.2 };
            let h = lk_bulk_hamiltonian_physical(&p, &KVector { kx: k.0, ky: k.1, kz: k.2 });
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert!((h[i][j] - h[j][i].conj()).norm() < 1e-12);
                }
            }
        }

        #[test]
        fn zero_k_decouples_into_parity_blocks(g in (1.0..10.0f64, 0.0..3.0f64, 0.0..3.0f64)) {
            let p = LuttingerParams { gamma1: g.0 + 2.0 * g.1, gamma2: g.1, gamma3: g.2 };
            // {+3/2, −1/2} = indices {0, 2}; {+1/2, −3/2} = {1, 3}
            let h = lk_bulk_hamiltonian_physical(&p, &KVector::default());
            for (i, j) in [(0, 1), (0, 3), (2, 1), (2, 3)] {
                prop_assert_eq!(h[i][j], ZERO);
                prop_assert_eq!(h[j][i], ZERO);
            }
        }

        #[test]
        fn first_order_rotation_residual((p, w) in arb_params()) {
            let s = subband_parameters(&p, &w);
            prop_assume!(s.delta_e_h.abs() > 1e-6);
            let eps = mixing_epsilon(&p, &w).unwrap();
            prop_assume!(eps.abs() < 1.0);
            let [hp, _, _, hpm] = hole_eigenstates(eps).unwrap();
            let m = parabolic_block(&p, &w);
            // restrict to {+3/2, −1/2}
            let u = [hp.amplitudes[0], hp.amplitudes[2]];
            let v = [hpm.amplitudes[0], hpm.amplitudes[2]];
            let off = u[0] * (m[0][0] * v[0] + m[0][1] * v[1]) + u[1] * (m[1][0] * v[0] + m[1][1] * v[1]);
            prop_assert!(off.abs() <= s.w.abs() * eps * eps + 1e-12);
        }

        #[test]
        fn epsilon_flips_under_xy_exchange((p, w) in arb_params()) {
            let s = subband_parameters(&p, &w);
            prop_assume!(s.delta_e_h.abs() > 1e-6);
            let a = mixing_epsilon(&p, &w).unwrap();
            let b = mixing_epsilon(&p, &w.swapped_xy()).unwrap();
            prop_assert!((a + b).abs() <= 1e-12 * (1.0 + a.abs()));
        }

        #[test]
        fn exact_and_perturbative_epsilon_agree_to_third_order((p, w) in arb_params()) {
            let s = subband_parameters(&p, &w);
            prop_assume!(s.delta_e_h.abs() > 1e-6);
            let pert = mixing_epsilon(&p, &w).unwrap();
            prop_assume!(pert.abs() <= 0.2);
            // oracle: eigenvector of the lower eigenvalue from the Jacobi solver
            let m = parabolic_block(&p, &w).map(|r| r.map(|x| C64::new(x, 0.0)));
            let (_, vecs) = hermitian_eigen(&m);
            // the |+3/2⟩-dominated eigenvector
            let col = if vecs[0][0].norm() > vecs[1][0].norm() { 0 } else { 1 };
            let ratio = (vecs[1][col] / vecs[0][col]).re;
            let exact = exact_mixing_epsilon(&p, &w).unwrap();
            prop_assert!((exact - ratio).abs() < 1e-9, "exact {} vs eigenvector {}", exact, ratio);
            prop_assert!((exact - pert).abs() <= pert.abs().powi(3) + 1e-12);
        }
    }
}
