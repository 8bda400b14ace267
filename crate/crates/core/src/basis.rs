//! The fixed 16-state two-dot basis.
//!
//! Each dot is in one of four states: the qubit states `|0⟩ = |−1/2_e⟩`,
//! `|1⟩ = |+1/2_e⟩`, or one of the trions `|x+⟩`, `|x−⟩`. The product state
//! `|ab⟩` has index `4·code(a) + code(b)` with codes `Q0 = 0`, `Q1 = 1`,
//! `Xplus = 2`, `Xminus = 3`. Dot `a` is always written first.

use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Operator16, DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DotState {
    Q0,
    Q1,
    Xplus,
    Xminus,
}

impl DotState {
    pub const ALL: [DotState; 4] = [DotState::Q0, DotState::Q1, DotState::Xplus, DotState::Xminus];

    pub const fn code(self) -> usize {
        match self {
            DotState::Q0 => 0,
            DotState::Q1 => 1,
            DotState::Xplus => 2,
            DotState::Xminus => 3,
        }
    }

    pub const fn from_code(code: usize) -> Option<DotState> {
        match code {
            0 => Some(DotState::Q0),
            1 => Some(DotState::Q1),
            2 => Some(DotState::Xplus),
            3 => Some(DotState::Xminus),
            _ => None,
        }
    }

    pub const fn is_trion(self) -> bool {
        matches!(self, DotState::Xplus | DotState::Xminus)
    }

    /// Logical bit carried by this dot state: a trion inherits the bit of the
    /// qubit state it is optically connected to (`x+ ↔ 1`, `x− ↔ 0`).
    pub const fn logical_bit(self) -> u8 {
        match self {
            DotState::Q0 | DotState::Xminus => 0,
            DotState::Q1 | DotState::Xplus => 1,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            DotState::Q0 => "0",
            DotState::Q1 => "1",
            DotState::Xplus => "x+",
            DotState::Xminus => "x-",
        }
    }
}

/// Which of the two dots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dot {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoDotBasisState {
    pub dot_a: DotState,
    pub dot_b: DotState,
}

impl TwoDotBasisState {
    pub const fn new(dot_a: DotState, dot_b: DotState) -> Self {
        TwoDotBasisState { dot_a, dot_b }
    }

    pub const fn index(self) -> usize {
        4 * self.dot_a.code() + self.dot_b.code()
    }

    pub fn from_index(index: usize) -> Option<Self> {
        if index >= DIM {
            return None;
        }
        Some(TwoDotBasisState {
            dot_a: DotState::from_code(index / 4)?,
            dot_b: DotState::from_code(index % 4)?,
        })
    }

    pub const fn on(self, dot: Dot) -> DotState {
        match dot {
            Dot::A => self.dot_a,
            Dot::B => self.dot_b,
        }
    }

    pub const fn with(self, dot: Dot, state: DotState) -> Self {
        match dot {
            Dot::A => TwoDotBasisState::new(state, self.dot_b),
            Dot::B => TwoDotBasisState::new(self.dot_a, state),
        }
    }

    pub const fn swapped(self) -> Self {
        TwoDotBasisState::new(self.dot_b, self.dot_a)
    }

    pub const fn trion_count(self) -> usize {
        self.dot_a.is_trion() as usize + self.dot_b.is_trion() as usize
    }

    pub const fn is_computational(self) -> bool {
        self.trion_count() == 0
    }

    /// Short label such as `"1x+"` or `"x-x-"`.
    pub fn label(self) -> alloc::string::String {
        let mut s = alloc::string::String::from(self.dot_a.label());
        s.push_str(self.dot_b.label());
        s
    }
}

impl fmt::Display for TwoDotBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}{}>", self.dot_a.label(), self.dot_b.label())
    }
}

/// The four computational states in the order `|00⟩, |01⟩, |10⟩, |11⟩`.
pub const COMPUTATIONAL: [TwoDotBasisState; 4] = [
    TwoDotBasisState::new(DotState::Q0, DotState::Q0),
    TwoDotBasisState::new(DotState::Q0, DotState::Q1),
    TwoDotBasisState::new(DotState::Q1, DotState::Q0),
    TwoDotBasisState::new(DotState::Q1, DotState::Q1),
];

/// Labels for [`COMPUTATIONAL`], used in reports and errors.
pub const COMPUTATIONAL_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// All 16 basis states ordered by index.
pub fn enumerate_basis() -> [TwoDotBasisState; DIM] {
    let mut out = [COMPUTATIONAL[0]; DIM];
    for (i, s) in out.iter_mut().enumerate() {
        *s = TwoDotBasisState::new(
            DotState::ALL[i / 4],
            DotState::ALL[i % 4],
        );
    }
    out
}

/// Permutation of basis indices exchanging the two dots.
pub fn dot_swap_permutation() -> [usize; DIM] {
    let mut perm = [0; DIM];
    for s in enumerate_basis() {
        perm[s.index()] = s.swapped().index();
    }
    perm
}

/// Diagonal 0/1 projector onto the given states.
pub fn projector(states: &[TwoDotBasisState]) -> Result<Operator16> {
    if states.is_empty() {
        return Err(Error::EmptyProjector);
    }
    let mut diag = [0.0; DIM];
    for s in states {
        diag[s.index()] = 1.0;
    }
    Ok(Operator16::from_diagonal(&diag))
}

/// Projector onto states in which `dot` holds the given single-dot states.
pub fn dot_projector(dot: Dot, on: &[DotState]) -> Operator16 {
    let mut diag = [0.0; DIM];
    for s in enumerate_basis() {
        if on.contains(&s.on(dot)) {
            diag[s.index()] = 1.0;
        }
    }
    Operator16::from_diagonal(&diag)
}

pub fn single_trion_states() -> alloc::vec::Vec<TwoDotBasisState> {
    enumerate_basis()
        .into_iter()
        .filter(|s| s.trion_count() == 1)
        .collect()
}

pub fn double_trion_states() -> alloc::vec::Vec<TwoDotBasisState> {
    enumerate_basis()
        .into_iter()
        .filter(|s| s.trion_count() == 2)
        .collect()
}

/// Kind of structural coupling between two basis states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingKind {
    /// σ+ light on one dot: `|1⟩ ↔ |x+⟩` (bright) or `|0⟩ ↔ |x−⟩` (mixing-allowed).
    Optical,
    /// First-order Förster transfer of a trion between the dots.
    Foerster,
}

/// Structurally non-zero off-diagonal couplings of the rotating-frame
/// Hamiltonian, independent of parameter values. Each pair is listed once.
pub fn coupling_pattern() -> alloc::vec::Vec<(TwoDotBasisState, TwoDotBasisState, CouplingKind)> {
    use DotState::*;
    let mut edges = alloc::vec::Vec::new();
    for other in DotState::ALL {
        for (lo, hi) in [(Q1, Xplus), (Q0, Xminus)] {
            edges.push((
                TwoDotBasisState::new(lo, other),
                TwoDotBasisState::new(hi, other),
                CouplingKind::Optical,
            ));
            edges.push((
                TwoDotBasisState::new(other, lo),
                TwoDotBasisState::new(other, hi),
                CouplingKind::Optical,
            ));
        }
    }
    let s = TwoDotBasisState::new;
    for (x, y) in [
        (s(Q0, Xminus), s(Xminus, Q0)),
        (s(Q1, Xplus), s(Xplus, Q1)),
        (s(Q1, Xminus), s(Xplus, Q0)),
        (s(Xminus, Q1), s(Q0, Xplus)),
    ] {
        edges.push((x, y, CouplingKind::Foerster));
    }
    edges
}

/// One of the four invariant 4-state blocks: a computational seed plus the
/// excited states it connects to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Manifold {
    pub seed: TwoDotBasisState,
    /// Members ordered by basis index.
    pub members: [TwoDotBasisState; 4],
}

impl Manifold {
    pub fn contains(&self, s: TwoDotBasisState) -> bool {
        self.members.contains(&s)
    }

    pub fn indices(&self) -> [usize; 4] {
        self.members.map(|m| m.index())
    }
}

/// The four manifolds, seeded by `|00⟩, |01⟩, |10⟩, |11⟩` in that order,
/// found as connected components of [`coupling_pattern`].
pub fn manifolds() -> [Manifold; 4] {
    let mut parent: [usize; DIM] = core::array::from_fn(|i| i);
    fn find(parent: &mut [usize; DIM], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (x, y, _) in coupling_pattern() {
        let rx = find(&mut parent, x.index());
        let ry = find(&mut parent, y.index());
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    }
    COMPUTATIONAL.map(|seed| {
        let root = find(&mut parent, seed.index());
        let mut members = [seed; 4];
        let mut n = 0;
        for s in enumerate_basis() {
            if find(&mut parent, s.index()) == root {
                assert!(n < 4, "manifold of {seed} has more than four members");
                members[n] = s;
                n += 1;
            }
        }
        assert_eq!(n, 4, "manifold of {seed} has fewer than four members");
        Manifold { seed, members }
    })
}

pub fn manifold_of(state: TwoDotBasisState) -> Manifold {
    manifolds()
        .into_iter()
        .find(|m| m.contains(state))
        .expect("the manifolds cover the basis")
}

#[cfg(test)]
mod tests {
    use super::DotState::*;
    use super::*;

    fn s(a: DotState, b: DotState) -> TwoDotBasisState {
        TwoDotBasisState::new(a, b)
    }

    #[test]
    fn ordering_convention() {
        let b = enumerate_basis();
        assert_eq!(b[0], s(Q0, Q0));
        assert_eq!(b[5], s(Q1, Q1));
        for (i, st) in b.iter().enumerate() {
            assert_eq!(st.index(), i);
            assert_eq!(TwoDotBasisState::from_index(i), Some(*st));
        }
        assert_eq!(TwoDotBasisState::from_index(16), None);
    }

    #[test]
    fn sector_counts() {
        let b = enumerate_basis();
        assert_eq!(b.iter().filter(|s| s.is_computational()).count(), 4);
        assert_eq!(single_trion_states().len(), 8);
        assert_eq!(double_trion_states().len(), 4);
    }

    #[test]
    fn manifolds_match_closed_form() {
        let m = manifolds();
        let expect = [
            [s(Q0, Q0), s(Q0, Xminus), s(Xminus, Q0), s(Xminus, Xminus)],
            [s(Q0, Q1), s(Q0, Xplus), s(Xminus, Q1), s(Xminus, Xplus)],
            [s(Q1, Q0), s(Q1, Xminus), s(Xplus, Q0), s(Xplus, Xminus)],
            [s(Q1, Q1), s(Q1, Xplus), s(Xplus, Q1), s(Xplus, Xplus)],
        ];
        for (mf, want) in m.iter().zip(expect.iter()) {
            let mut want = *want;
            want.sort_by_key(|x| x.index());
            assert_eq!(mf.members, want);
        }
        assert_eq!(manifold_of(s(Q1, Xplus)).seed, s(Q1, Q1));
        assert_eq!(manifold_of(s(Q0, Q0)).seed, s(Q0, Q0));
        assert_eq!(manifold_of(s(Xminus, Xplus)).seed, s(Q0, Q1));
    }

    #[test]
    fn manifold_partition() {
        let mut seen = [0u8; DIM];
        for m in manifolds() {
            for x in m.members {
                seen[x.index()] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn manifold_is_labelled_by_logical_bits() {
        for st in enumerate_basis() {
            let seed = manifold_of(st).seed;
            assert_eq!(st.dot_a.logical_bit(), seed.dot_a.logical_bit());
            assert_eq!(st.dot_b.logical_bit(), seed.dot_b.logical_bit());
        }
    }

    #[test]
    fn projectors() {
        let all = enumerate_basis();
        assert_eq!(projector(&all).unwrap(), Operator16::identity());
        let p = projector(&[s(Q0, Q0)]).unwrap();
        assert_eq!(p.trace().re, 1.0);
        assert_eq!(p.0[0][0].re, 1.0);
        let p = projector(&single_trion_states()).unwrap();
        assert_eq!(p.trace().re, 8.0);
        assert_eq!(p * p, p);
        assert_eq!(p.dagger(), p);
        assert_eq!(projector(&[]), Err(Error::EmptyProjector));
    }

    #[test]
    fn swap_is_an_involution() {
        let perm = dot_swap_permutation();
        for i in 0..DIM {
            assert_eq!(perm[perm[i]], i);
        }
        assert_eq!(perm[s(Q0, Q1).index()], s(Q1, Q0).index());
    }
}
