//! Förster (dipole-dipole) transfer of electron-hole pairs between the dots.
//!
//! The dots are stacked along the growth axis `z`, so the transfer conserves
//! the angular momentum of the exciton. Coupling strengths between excitons
//! of definite `(J_z,h, J_z,e)` are tabulated in [`TABLE`] in units of
//!
//! ```text
//! M_ij = e² W₁ W₂ l_i l_j / (12π ε₀ ε_r R³),   i, j ∈ {hh, lh}.
//! ```
//!
//! Trions carry a mixed hole (see [`crate::luttinger`]), so transfer between
//! trion states is assembled by expanding each hole over pure `J_z` states
//! and summing table entries.
//!
//! Angular momenta are stored doubled (`jz2 = 2·J_z`) so they stay integral.

use alloc::vec::Vec;

// std, when linked anywhere in the build, provides these methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::{enumerate_basis, Dot, DotState, TwoDotBasisState};
use crate::error::{Error, Result};
use crate::linalg::{Operator16, C64};
use crate::units::COULOMB_MEV_NM;

/// Angular momentum of an exciton: hole and electron projections, doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExcitonAM {
    pub jz_hole2: i8,
    pub jz_electron2: i8,
}

impl ExcitonAM {
    pub const fn new_unchecked(jz_hole2: i8, jz_electron2: i8) -> Self {
        ExcitonAM {
            jz_hole2,
            jz_electron2,
        }
    }

    pub fn new(jz_hole2: i8, jz_electron2: i8) -> Result<Self> {
        if !matches!(jz_hole2, -3 | -1 | 1 | 3) {
            return Err(Error::InvalidParameter {
                name: "jz_hole",
                reason: "hole projection must be one of ±3/2, ±1/2",
            });
        }
        if !matches!(jz_electron2, -1 | 1) {
            return Err(Error::InvalidParameter {
                name: "jz_electron",
                reason: "electron projection must be ±1/2",
            });
        }
        Ok(ExcitonAM::new_unchecked(jz_hole2, jz_electron2))
    }

    /// Net `J_z` (an integer in −2..=2).
    pub const fn net_jz(self) -> i8 {
        (self.jz_hole2 + self.jz_electron2) / 2
    }

    /// All eight hole/electron combinations.
    pub fn all() -> [ExcitonAM; 8] {
        let mut out = [ExcitonAM::new_unchecked(3, 1); 8];
        let mut n = 0;
        for h in [3, 1, -1, -3] {
            for e in [1, -1] {
                out[n] = ExcitonAM::new_unchecked(h, e);
                n += 1;
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Band {
    HeavyHole,
    LightHole,
}

/// Which coupling constant multiplies a table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingConstant {
    HhHh,
    LhLh,
    LhHh,
}

/// Förster couplings (meV).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForsterCouplings {
    pub m_hh_hh: f64,
    pub m_lh_lh: f64,
    pub m_lh_hh: f64,
}

impl ForsterCouplings {
    /// Couplings derived from a single dipole-length ratio: fixes
    /// `M_lh,lh = M_lh,hh² / M_hh,hh` (or `M_lh,hh` when `M_hh,hh = 0`).
    pub fn consistent(m_hh_hh: f64, m_lh_hh: f64) -> Self {
        let m_lh_lh = if m_hh_hh != 0.0 {
            m_lh_hh * m_lh_hh / m_hh_hh
        } else {
            m_lh_hh
        };
        ForsterCouplings {
            m_hh_hh,
            m_lh_lh,
            m_lh_hh,
        }
    }

    pub fn from_scale(scale: &ForsterScale, l: &DipoleLengths) -> Result<Self> {
        Ok(ForsterCouplings {
            m_hh_hh: m_ij(scale, l, Band::HeavyHole, Band::HeavyHole)?,
            m_lh_lh: m_ij(scale, l, Band::LightHole, Band::LightHole)?,
            m_lh_hh: m_ij(scale, l, Band::LightHole, Band::HeavyHole)?,
        })
    }

    pub const fn zero() -> Self {
        ForsterCouplings {
            m_hh_hh: 0.0,
            m_lh_lh: 0.0,
            m_lh_hh: 0.0,
        }
    }

    pub fn value(&self, k: CouplingConstant) -> f64 {
        match k {
            CouplingConstant::HhHh => self.m_hh_hh,
            CouplingConstant::LhLh => self.m_lh_lh,
            CouplingConstant::LhHh => self.m_lh_hh,
        }
    }
}

/// Radial dipole lengths `l_i = ∫ f_i(r) r³ g(r) dr` (nm).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DipoleLengths {
    pub l_hh: f64,
    pub l_lh: f64,
}

impl DipoleLengths {
    pub fn get(&self, band: Band) -> f64 {
        match band {
            Band::HeavyHole => self.l_hh,
            Band::LightHole => self.l_lh,
        }
    }
}

/// Geometry and dielectric environment of the dot pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForsterScale {
    pub eps_r: f64,
    /// Inter-dot distance (nm).
    pub r_nm: f64,
    /// Electron-hole envelope overlaps of the two dots.
    pub w1: f64,
    pub w2: f64,
}

impl ForsterScale {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_nm > 0.0) {
            return Err(Error::InvalidParameter {
                name: "foerster.r_nm",
                reason: "inter-dot distance must be positive",
            });
        }
        if !(self.eps_r >= 1.0) {
            return Err(Error::InvalidParameter {
                name: "foerster.eps_r",
                reason: "relative permittivity must be at least 1",
            });
        }
        if !(self.w1.abs() <= 1.0 && self.w2.abs() <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "foerster.w",
                reason: "envelope overlaps must satisfy |W| <= 1",
            });
        }
        Ok(())
    }
}

/// `M_ij = e² W₁ W₂ l_i l_j / (12π ε₀ ε_r R³)` in meV.
pub fn m_ij(scale: &ForsterScale, l: &DipoleLengths, i: Band, j: Band) -> Result<f64> {
    scale.validate()?;
    let r3 = scale.r_nm * scale.r_nm * scale.r_nm;
    Ok(COULOMB_MEV_NM / (3.0 * scale.eps_r * r3) * scale.w1 * scale.w2 * l.get(i) * l.get(j))
}

/// One entry of the exciton-exciton coupling table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableEntry {
    pub state1: ExcitonAM,
    pub state2: ExcitonAM,
    pub factor: f64,
    pub constant: CouplingConstant,
    /// Human-readable element, e.g. `"-4*M_lh_lh/3"`.
    pub symbolic: &'static str,
}

impl TableEntry {
    pub fn value(&self, c: &ForsterCouplings) -> f64 {
        self.factor * c.value(self.constant)
    }
}

const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_8;

const fn am(h: i8, e: i8) -> ExcitonAM {
    ExcitonAM::new_unchecked(h, e)
}

/// The non-zero Förster couplings between excitons of definite angular
/// momentum, for inter-dot separation along `z`.
pub const TABLE: [TableEntry; 9] = [
    TableEntry { state1: am(-3, 1), state2: am(-3, 1), factor: 1.0, constant: CouplingConstant::HhHh, symbolic: "M_hh_hh" },
    TableEntry { state1: am(3, -1), state2: am(3, -1), factor: 1.0, constant: CouplingConstant::HhHh, symbolic: "M_hh_hh" },
    TableEntry { state1: am(-1, 1), state2: am(-1, 1), factor: -4.0 / 3.0, constant: CouplingConstant::LhLh, symbolic: "-4*M_lh_lh/3" },
    TableEntry { state1: am(1, -1), state2: am(1, -1), factor: -4.0 / 3.0, constant: CouplingConstant::LhLh, symbolic: "-4*M_lh_lh/3" },
    TableEntry { state1: am(-1, 1), state2: am(1, -1), factor: 4.0 / 3.0, constant: CouplingConstant::LhLh, symbolic: "4*M_lh_lh/3" },
    TableEntry { state1: am(-1, -1), state2: am(-1, -1), factor: 1.0 / 3.0, constant: CouplingConstant::LhLh, symbolic: "M_lh_lh/3" },
    TableEntry { state1: am(1, 1), state2: am(1, 1), factor: 1.0 / 3.0, constant: CouplingConstant::LhLh, symbolic: "M_lh_lh/3" },
    TableEntry { state1: am(-3, 1), state2: am(-1, -1), factor: FRAC_1_SQRT_3, constant: CouplingConstant::LhHh, symbolic: "M_lh_hh/sqrt(3)" },
    TableEntry { state1: am(3, -1), state2: am(1, 1), factor: FRAC_1_SQRT_3, constant: CouplingConstant::LhHh, symbolic: "M_lh_hh/sqrt(3)" },
];

/// Table entry for an unordered pair of excitons, if any.
pub fn table_entry(s1: ExcitonAM, s2: ExcitonAM) -> Option<&'static TableEntry> {
    TABLE
        .iter()
        .find(|e| (e.state1 == s1 && e.state2 == s2) || (e.state1 == s2 && e.state2 == s1))
}

/// Förster matrix element between two excitons (meV); zero for pairs that
/// change the net `J_z` or are absent from [`TABLE`].
pub fn table1_element(s1: ExcitonAM, s2: ExcitonAM, c: &ForsterCouplings) -> f64 {
    if s1.net_jz() != s2.net_jz() {
        return 0.0;
    }
    table_entry(s1, s2).map_or(0.0, |e| e.value(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orbital {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Gauss-Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `(1/r)·∫ ⟨r|orbital⟩ · axis · ⟨r|S⟩ dΩ`, evaluated by product quadrature:
/// Gauss-Legendre in `cos θ` and the trapezoid rule in `φ`.
///
/// The integrand is a low-order polynomial in `cos θ` times a trigonometric
/// polynomial in `φ`, so the rule is exact up to rounding.
pub fn angular_integral(orbital: Orbital, axis: Axis) -> f64 {
    let norm_p = (3.0 / (4.0 * core::f64::consts::PI)).sqrt();
    let norm_s = 1.0 / (4.0 * core::f64::consts::PI).sqrt();
    let n_phi = 32;
    let dphi = 2.0 * core::f64::consts::PI / n_phi as f64;
    let mut total = 0.0;
    for (u, w) in gauss_legendre(12) {
        let sin_t = (1.0 - u * u).sqrt();
        for k in 0..n_phi {
            let phi = k as f64 * dphi;
            let dir = [sin_t * phi.cos(), sin_t * phi.sin(), u];
            let orb = match orbital {
                Orbital::X => dir[0],
                Orbital::Y => dir[1],
                Orbital::Z => dir[2],
            };
            let ax = match axis {
                Axis::X => dir[0],
                Axis::Y => dir[1],
                Axis::Z => dir[2],
            };
            total += w * dphi * norm_p * orb * ax * norm_s;
        }
    }
    total
}

/// How the mixed hole of a trion is expanded over pure `J_z` states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HoleExpansion {
    /// Major component 1, admixture `ε`: the linear expansion used to derive
    /// `⟨x+1|T|1x+⟩ = M_hh,hh + ε²M_lh,lh/3`.
    #[default]
    Linear,
    /// Normalized states, major component `√(1 − ε²)`.
    Normalized,
}

/// Hole of a trion state, as `(major jz2, minor jz2)`.
fn trion_hole(s: DotState) -> Option<(i8, i8)> {
    match s {
        DotState::Xplus => Some((3, -1)),
        DotState::Xminus => Some((-3, 1)),
        _ => None,
    }
}

/// Doubled spin of a resident qubit electron.
fn qubit_spin2(s: DotState) -> Option<i8> {
    match s {
        DotState::Q1 => Some(1),
        DotState::Q0 => Some(-1),
        _ => None,
    }
}

fn hole_amplitude(state: DotState, jz2: i8, eps: f64, expansion: HoleExpansion) -> f64 {
    let Some((major, minor)) = trion_hole(state) else {
        return 0.0;
    };
    if jz2 == major {
        match expansion {
            HoleExpansion::Linear => 1.0,
            HoleExpansion::Normalized => (1.0 - eps * eps).sqrt(),
        }
    } else if jz2 == minor {
        eps
    } else {
        0.0
    }
}

/// `⟨bra|T|ket⟩` for the trion transfer operator with the linear hole
/// expansion.
pub fn trion_transfer_element(
    bra: TwoDotBasisState,
    ket: TwoDotBasisState,
    eps: f64,
    c: &ForsterCouplings,
) -> f64 {
    trion_transfer_element_with(bra, ket, eps, c, HoleExpansion::Linear)
}

/// `⟨bra|T|ket⟩` moving one electron-hole pair from the trion dot of `ket`
/// to its qubit dot.
///
/// The transferred pair leaves its partner electron behind, and can only be
/// received by a dot whose resident electron has the opposite spin. Only
/// single-trion states couple; double-trion channels are not included.
pub fn trion_transfer_element_with(
    bra: TwoDotBasisState,
    ket: TwoDotBasisState,
    eps: f64,
    c: &ForsterCouplings,
    expansion: HoleExpansion,
) -> f64 {
    let (trion_dot, qubit_dot) = match (ket.dot_a.is_trion(), ket.dot_b.is_trion()) {
        (true, false) => (Dot::A, Dot::B),
        (false, true) => (Dot::B, Dot::A),
        _ => return 0.0,
    };
    // bra: trion moved to the qubit dot, qubit left on the former trion dot
    let (Some(left_spin2), Some(_)) = (
        qubit_spin2(bra.on(trion_dot)),
        trion_hole(bra.on(qubit_dot)),
    ) else {
        return 0.0;
    };
    let resident_spin2 = qubit_spin2(ket.on(qubit_dot)).expect("qubit dot holds a qubit");

    let donor_electron2 = -left_spin2;
    let acceptor_electron2 = -resident_spin2;
    let mut total = 0.0;
    for donor_hole2 in [3, 1, -1, -3] {
        let a = hole_amplitude(ket.on(trion_dot), donor_hole2, eps, expansion);
        if a == 0.0 {
            continue;
        }
        for acceptor_hole2 in [3, 1, -1, -3] {
            let b = hole_amplitude(bra.on(qubit_dot), acceptor_hole2, eps, expansion);
            if b == 0.0 {
                continue;
            }
            let v = table1_element(
                ExcitonAM::new_unchecked(donor_hole2, donor_electron2),
                ExcitonAM::new_unchecked(acceptor_hole2, acceptor_electron2),
                c,
            );
            total += a * b * v;
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HfOrder {
    /// Only the terms that survive to first order in `ε`.
    FirstOrder,
    /// Every [`trion_transfer_element`].
    Exact,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.abs() < 1.0) {
        return Err(Error::InvalidParameter {
            name: "physics.eps",
            reason: "mixing parameter must satisfy |eps| < 1",
        });
    }
    Ok(())
}

/// Förster Hamiltonian on the two-dot basis.
///
/// To first order in `ε`:
///
/// ```text
/// H_F = M_hh,hh (|0x−⟩⟨x−0| + |1x+⟩⟨x+1|)
///     + (2 M_lh,hh ε / √3)(|1x−⟩⟨x+0| + |x−1⟩⟨0x+|) + H.c.
/// ```
pub fn build_hf(eps: f64, c: &ForsterCouplings, order: HfOrder) -> Result<Operator16> {
    check_eps(eps)?;
    match order {
        HfOrder::FirstOrder => Ok(first_order_hf(eps, c)),
        HfOrder::Exact => Ok(exact_hf(eps, c, HoleExpansion::Linear)),
    }
}

/// All trion transfer elements with a chosen hole expansion.
pub fn build_hf_exact_with(
    eps: f64,
    c: &ForsterCouplings,
    expansion: HoleExpansion,
) -> Result<Operator16> {
    check_eps(eps)?;
    Ok(exact_hf(eps, c, expansion))
}

fn first_order_hf(eps: f64, c: &ForsterCouplings) -> Operator16 {
    use DotState::*;
    let s = |a, b| TwoDotBasisState::new(a, b).index();
    let mut h = Operator16::zero();
    let hh = C64::new(c.m_hh_hh, 0.0);
    let mixed = C64::new(2.0 * c.m_lh_hh * eps / 3.0_f64.sqrt(), 0.0);
    h.add_hermitian_pair(s(Q0, Xminus), s(Xminus, Q0), hh);
    h.add_hermitian_pair(s(Q1, Xplus), s(Xplus, Q1), hh);
    h.add_hermitian_pair(s(Q1, Xminus), s(Xplus, Q0), mixed);
    h.add_hermitian_pair(s(Xminus, Q1), s(Q0, Xplus), mixed);
    h
}

fn exact_hf(eps: f64, c: &ForsterCouplings, expansion: HoleExpansion) -> Operator16 {
    let basis = enumerate_basis();
    let mut h = Operator16::zero();
    for bra in basis {
        for ket in basis {
            let v = trion_transfer_element_with(bra, ket, eps, c, expansion);
            h.0[bra.index()][ket.index()] = C64::new(v, 0.0);
        }
    }
    debug_assert!(h.is_hermitian(1e-12 * (1.0 + h.max_abs())));
    h
}
