//! Dense complex linear algebra for the 16-state problem.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
// std, when linked anywhere in the build, provides these methods inherently
#[allow(unused_imports)]
use num_traits::Float;

pub type C64 = Complex64;

/// Dimension of the two-dot Hilbert space.
pub const DIM: usize = 16;

/// A state vector in the fixed two-dot basis.
pub type State16 = [C64; DIM];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense 16×16 complex matrix in the fixed basis order of [`crate::basis`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator16(pub [[C64; DIM]; DIM]);

impl Default for Operator16 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Operator16 {
    pub const fn zero() -> Self {
        Operator16([[ZERO; DIM]; DIM])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64; DIM]) -> Self {
        let mut m = Self::zero();
        for (i, &d) in diag.iter().enumerate() {
            m.0[i][i] = C64::new(d, 0.0);
        }
        m
    }

    /// Adds `v` at `(i, j)` and `conj(v)` at `(j, i)`.
    ///
    /// On the diagonal this adds `2·Re(v)`.
    pub fn add_hermitian_pair(&mut self, i: usize, j: usize, v: C64) {
        self.0[i][j] += v;
        self.0[j][i] += v.conj();
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                out.0[j][i] = self.0[i][j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..DIM).map(|i| self.0[i][i]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .fold(0.0, |acc, v| acc.max(v.norm()))
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry of `|A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..DIM {
            for j in i..DIM {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn apply(&self, psi: &State16) -> State16 {
        let mut out = [ZERO; DIM];
        for (o, row) in out.iter_mut().zip(self.0.iter()) {
            let mut acc = ZERO;
            for (a, b) in row.iter().zip(psi.iter()) {
                acc += a * b;
            }
            *o = acc;
        }
        out
    }

    /// Conjugates by a basis permutation: `out[perm[i]][perm[j]] = self[i][j]`.
    pub fn permuted(&self, perm: &[usize; DIM]) -> Self {
        let mut out = Self::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                out.0[perm[i]][perm[j]] = self.0[i][j];
            }
        }
        out
    }

    /// Eigenvalues in ascending order. Assumes the matrix is Hermitian.
    pub fn eigenvalues(&self) -> [f64; DIM] {
        hermitian_eigen(&self.0).0
    }

    /// Largest absolute eigenvalue. Assumes the matrix is Hermitian.
    pub fn spectral_radius(&self) -> f64 {
        let ev = self.eigenvalues();
        ev[0].abs().max(ev[DIM - 1].abs())
    }

    /// The 4×4 sub-block on the given row/column indices.
    pub fn sub_block(&self, idx: &[usize; 4]) -> [[C64; 4]; 4] {
        let mut out = [[ZERO; 4]; 4];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[a][b] = self.0[i][j];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Operator16 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Operator16 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for Operator16 {
    type Output = Operator16;
    fn add(mut self, rhs: Operator16) -> Operator16 {
        self += rhs;
        self
    }
}

impl AddAssign for Operator16 {
    fn add_assign(&mut self, rhs: Operator16) {
        for (ra, rb) in self.0.iter_mut().zip(rhs.0.iter()) {
            for (a, b) in ra.iter_mut().zip(rb.iter()) {
                *a += b;
            }
        }
    }
}

impl Sub for Operator16 {
    type Output = Operator16;
    fn sub(mut self, rhs: Operator16) -> Operator16 {
        for (ra, rb) in self.0.iter_mut().zip(rhs.0.iter()) {
            for (a, b) in ra.iter_mut().zip(rb.iter()) {
                *a -= b;
            }
        }
        self
    }
}

impl Mul for Operator16 {
    type Output = Operator16;
    fn mul(self, rhs: Operator16) -> Operator16 {
        let mut out = Operator16::zero();
        for i in 0..DIM {
            for k in 0..DIM {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..DIM {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

pub fn norm(psi: &State16) -> f64 {
    psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖₂`.
pub fn distance(a: &State16, b: &State16) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn basis_vector(index: usize) -> State16 {
    let mut psi = [ZERO; DIM];
    psi[index] = ONE;
    psi
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// the columns of the second matrix. Only the Hermitian part of the input is
/// meaningful.
pub fn hermitian_eigen<const N: usize>(m: &[[C64; N]; N]) -> ([f64; N], [[C64; N]; N]) {
    let mut a = *m;
    let mut v = [[ZERO; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = ONE;
    }

    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |acc, x| acc.max(x.norm()));
    if scale > 0.0 {
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..N {
                for q in (p + 1)..N {
                    off += a[p][q].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-15 * scale {
                break;
            }
            for p in 0..N {
                for q in (p + 1)..N {
                    let apq = a[p][q];
                    let g = apq.norm();
                    if g <= 1e-300 {
                        continue;
                    }
                    let phase = apq / g;
                    let app = a[p][p].re;
                    let aqq = a[q][q].re;
                    let tau = (aqq - app) / (2.0 * g);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // J restricted to (p, q): [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]
                    let jpp = C64::new(c, 0.0);
                    let jpq = C64::new(s, 0.0);
                    let jqp = -phase.conj() * s;
                    let jqq = phase.conj() * c;
                    for row in a.iter_mut() {
                        let (x, y) = (row[p], row[q]);
                        row[p] = x * jpp + y * jqp;
                        row[q] = x * jpq + y * jqq;
                    }
                    for k in 0..N {
                        let (x, y) = (a[p][k], a[q][k]);
                        a[p][k] = jpp.conj() * x + jqp.conj() * y;
                        a[q][k] = jpq.conj() * x + jqq.conj() * y;
                    }
                    a[p][q] = ZERO;
                    a[q][p] = ZERO;
                    a[p][p].im = 0.0;
                    a[q][q].im = 0.0;
                    for row in v.iter_mut() {
                        let (x, y) = (row[p], row[q]);
                        row[p] = x * jpp + y * jqp;
                        row[q] = x * jpq + y * jqq;
                    }
                }
            }
        }
    }

    let mut order = [0usize; N];
    for (i, o) in order.iter_mut().enumerate() {
        *o = i;
    }
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let mut values = [0.0; N];
    let mut vectors = [[ZERO; N]; N];
    for (col, &src) in order.iter().enumerate() {
        values[col] = a[src][src].re;
        for row in 0..N {
            vectors[row][col] = v[row][src];
        }
    }
    (values, vectors)
}
