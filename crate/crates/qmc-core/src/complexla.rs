//! Dense complex linear algebra on small matrices.
//!
//! Everything here is tolerance-based: no exact comparison of complex values
//! is performed anywhere. The eigendecomposition of a unitary operator is
//! computed by splitting it into its Hermitian and anti-Hermitian parts and
//! diagonalizing both with cyclic Jacobi rotations; since a unitary matrix is
//! normal the two parts commute and share an eigenbasis.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex;

use crate::error::{Error, Result};

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

/// Numerical tolerances shared by all operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Residual threshold deciding subspace membership and linear
    /// independence.
    pub membership_eps: f64,
    /// Max-entry threshold on `U†U - I` for accepting a matrix as unitary.
    pub unitarity_eps: f64,
    /// Eigenvalues closer than this on the unit circle count as degenerate.
    pub degeneracy_gap: f64,
    /// Inner products larger than this in magnitude count as nonorthogonal.
    pub overlap_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            membership_eps: 1e-9,
            unitarity_eps: 1e-8,
            degeneracy_gap: 1e-8,
            overlap_eps: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = self.membership_eps > 0.0
            && self.unitarity_eps > 0.0
            && self.degeneracy_gap > 0.0
            && self.overlap_eps > 0.0;
        if positive && self.membership_eps <= self.unitarity_eps {
            Ok(())
        } else {
            Err(Error::BadTolerances)
        }
    }
}

/// A vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct CVector {
    entries: Vec<C64>,
}

impl CVector {
    pub fn new(entries: Vec<C64>) -> Self {
        assert!(!entries.is_empty(), "vector must have positive dimension");
        CVector { entries }
    }

    /// Standard basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut entries = vec![C64::new(0.0, 0.0); dim];
        entries[k] = C64::new(1.0, 0.0);
        CVector { entries }
    }

    pub fn zero(dim: usize) -> Self {
        CVector {
            entries: vec![C64::new(0.0, 0.0); dim],
        }
    }

    pub fn from_reals(entries: &[f64]) -> Self {
        CVector::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|c| c.norm_sqr()).sum())
    }

    pub fn set(&mut self, i: usize, v: C64) {
        self.entries[i] = v;
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: C64, other: &CVector) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
    }

    pub fn scaled(&self, c: C64) -> CVector {
        CVector::new(self.entries.iter().map(|&e| e * c).collect())
    }

    pub fn add(&self, other: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), other.dim());
        CVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), other.dim());
        CVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }

    /// `self - c * other`, the Gram-Schmidt update step.
    pub fn axpy_sub(&self, c: C64, other: &CVector) -> CVector {
        debug_assert_eq!(self.dim(), other.dim());
        CVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a - c * b)
                .collect(),
        )
    }

    /// Unit vector along `self`, or `None` if the norm is below `eps`.
    pub fn normalized(&self, eps: f64) -> Option<CVector> {
        let n = self.norm();
        if n <= eps {
            None
        } else {
            Some(self.scaled(C64::new(1.0 / n, 0.0)))
        }
    }

    pub fn distance(&self, other: &CVector) -> f64 {
        self.sub(other).norm()
    }
}

/// Inner product `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &CVector, b: &CVector) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(dot(a, b))
}

/// Same as [`inner`] for operands already known to share a dimension.
pub(crate) fn dot(a: &CVector, b: &CVector) -> C64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.entries
        .iter()
        .zip(&b.entries)
        .map(|(&x, &y)| x.conj() * y)
        .sum()
}

/// Re-orthogonalized (twice-applied) Gram-Schmidt.
///
/// Returns an orthonormal set spanning the same subspace as the input.
/// Vectors whose residual against the accumulated set has norm at most
/// `membership_eps` are dropped.
pub fn orthonormalize(vectors: &[CVector], tol: &Tolerances) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::new();
    for v in vectors {
        if let Some(r) = project_residual(v, &out, tol.membership_eps) {
            out.push(r);
        }
    }
    out
}

/// Residual of `v` after twice-applied projection onto the orthonormal set
/// `basis`, normalized; `None` when the residual norm is at most `eps`.
pub(crate) fn project_residual(v: &CVector, basis: &[CVector], eps: f64) -> Option<CVector> {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &r);
            r = r.axpy_sub(c, b);
        }
    }
    r.normalized(eps)
}

/// Norm of the residual of `v` after projection onto the orthonormal set.
pub(crate) fn residual_norm(v: &CVector, basis: &[CVector]) -> f64 {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &r);
            r = r.axpy_sub(c, b);
        }
    }
    r.norm()
}

/// A dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols));
        CMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let converted: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        CMatrix::from_rows(&converted)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.cols, v.dim());
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v.entries()[j];
            }
            out[i] = acc;
        }
        CVector::new(out)
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scaled(&self, c: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * c).collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max-entry magnitude of `U†U - I`; zero for an exactly unitary matrix.
    pub fn unitarity_violation(&self) -> f64 {
        assert!(self.is_square());
        self.dagger()
            .mul(self)
            .sub(&CMatrix::identity(self.rows))
            .max_abs()
    }

    pub fn is_unitary(&self, eps: f64) -> bool {
        self.is_square() && self.unitarity_violation() <= eps
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::new((0..self.rows).map(|i| self.get(i, j)).collect())
    }
}

/// Eigendecomposition of a unitary matrix.
///
/// Returns `d` eigenpairs with orthonormal eigenvectors; each eigenvalue has
/// modulus within the unitarity tolerance of 1.
///
/// Method: write `U = A + iB` with `A = (U + U†)/2` and `B = (U - U†)/(2i)`,
/// both Hermitian and commuting because `U` is normal. Diagonalize `A` by
/// Jacobi rotations, then diagonalize `B` restricted to each eigenvalue
/// cluster of `A`. The combined basis diagonalizes `U`.
pub fn eig_unitary(u: &CMatrix, tol: &Tolerances) -> Result<Vec<(C64, CVector)>> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            got: u.cols(),
        });
    }
    let violation = u.unitarity_violation();
    if violation > tol.unitarity_eps {
        return Err(Error::NotUnitary { violation });
    }
    let d = u.rows();
    let udag = u.dagger();
    let a = u.add(&udag).scaled(C64::new(0.5, 0.0));
    let b = u.sub(&udag).scaled(C64::new(0.0, -0.5));

    let (eva, veca) = jacobi_hermitian(&a);

    // Sort by the Hermitian-part eigenvalue so clusters are contiguous.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eva[i].partial_cmp(&eva[j]).unwrap());

    // A cluster gap below which Hermitian-part eigenvalues are treated as
    // equal; must exceed the Jacobi round-off but stay well under the
    // residual contract of 1e-7.
    let cluster_gap = 1e-9;

    let mut pairs: Vec<(C64, CVector)> = Vec::with_capacity(d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && eva[order[end]] - eva[order[end - 1]] < cluster_gap {
            end += 1;
        }
        let cluster: Vec<CVector> = order[start..end].iter().map(|&j| veca.column(j)).collect();
        if cluster.len() == 1 {
            let v = &cluster[0];
            let lambda = dot(v, &u.mul_vec(v));
            pairs.push((lambda, v.clone()));
        } else {
            // Restrict B to the cluster and diagonalize the small block.
            let k = cluster.len();
            let mut block = CMatrix::zeros(k, k);
            let images: Vec<CVector> = cluster.iter().map(|v| b.mul_vec(v)).collect();
            for i in 0..k {
                for j in 0..k {
                    block.set(i, j, dot(&cluster[i], &images[j]));
                }
            }
            let (_, vecb) = jacobi_hermitian(&block);
            for j in 0..k {
                let mut v = CVector::zero(cluster[0].dim());
                for (i, c) in cluster.iter().enumerate() {
                    v = v.add(&c.scaled(vecb.get(i, j)));
                }
                let v = v.normalized(0.0).expect("unitary combination of a basis");
                let lambda = dot(&v, &u.mul_vec(&v));
                pairs.push((lambda, v));
            }
        }
        start = end;
    }
    Ok(pairs)
}

/// True iff some pair of eigenvalues is closer than the degeneracy gap.
pub fn is_degenerate(pairs: &[(C64, CVector)], tol: &Tolerances) -> bool {
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if (pairs[i].0 - pairs[j].0).norm() < tol.degeneracy_gap {
                return true;
            }
        }
    }
    false
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Returns the (real) eigenvalues and a unitary matrix whose columns are the
/// corresponding orthonormal eigenvectors.
fn jacobi_hermitian(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);

    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s
    };

    for _sweep in 0..60 {
        if off(&a) < 1e-28 * (n as f64) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                // Phase factor making the pivot real, then a real Jacobi
                // rotation on the (p, q) plane.
                let phase = apq / C64::new(mag, 0.0);
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;

                // J restricted to the (p, q) plane:
                //   J[p][p] = c·phase, J[p][q] = s·phase,
                //   J[q][p] = -s,      J[q][q] = c.
                let jpp = phase * c;
                let jpq = phase * s;
                let jqp = C64::new(-s, 0.0);
                let jqq = C64::new(c, 0.0);

                // A := A·J (columns p, q), then A := J†·A (rows p, q).
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * jpp + aiq * jqp);
                    a.set(i, q, aip * jpq + aiq * jqq);
                }
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, jpp.conj() * apj + jqp.conj() * aqj);
                    a.set(q, j, jpq.conj() * apj + jqq.conj() * aqj);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * jpp + viq * jqp);
                    v.set(i, q, vip * jpq + viq * jqq);
                }
            }
        }
    }

    let evals = (0..n).map(|i| a.get(i, i).re).collect();
    (evals, v)
}
