//! The lattice of closed subspaces of a finite-dimensional Hilbert space.
//!
//! A subspace is stored as an orthonormal basis (possibly empty, for the
//! zero subspace). Equality of subspaces is mutual inclusion; bases are not
//! canonical. The meet is computed through the ortho-complement as
//! `(X^⊥ ∨ Y^⊥)^⊥`, which is exact in finite dimension.

use alloc::vec::Vec;

use crate::complexla::{
    dot, orthonormalize, project_residual, residual_norm, CMatrix, CVector, Tolerances,
};
use crate::error::{Error, Result};

/// A closed subspace, represented by an orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim_ambient: usize,
    basis: Vec<CVector>,
}

impl Subspace {
    /// The zero subspace of a `d`-dimensional space.
    pub fn zero(d: usize) -> Self {
        assert!(d >= 1);
        Subspace {
            dim_ambient: d,
            basis: Vec::new(),
        }
    }

    /// The whole space as a rank-`d` subspace with the standard basis.
    pub fn full(d: usize) -> Self {
        assert!(d >= 1);
        Subspace {
            dim_ambient: d,
            basis: (0..d).map(|k| CVector::basis(d, k)).collect(),
        }
    }

    /// Span of the given vectors, orthonormalized.
    pub fn span_of(vectors: &[CVector], d: usize, tol: &Tolerances) -> Self {
        assert!(vectors.iter().all(|v| v.dim() == d));
        Subspace {
            dim_ambient: d,
            basis: orthonormalize(vectors, tol),
        }
    }

    /// The one-dimensional span of `v`. Errors when `v` is numerically zero.
    pub fn ray(v: &CVector, tol: &Tolerances) -> Result<Self> {
        let unit = v
            .normalized(tol.membership_eps)
            .ok_or(Error::EmptyInitialSubspace)?;
        Ok(Subspace {
            dim_ambient: v.dim(),
            basis: alloc::vec![unit],
        })
    }

    /// Wraps a basis already known to be orthonormal.
    pub(crate) fn from_orthonormal(basis: Vec<CVector>, d: usize) -> Self {
        debug_assert!(basis.iter().all(|v| v.dim() == d));
        Subspace {
            dim_ambient: d,
            basis,
        }
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim_ambient
    }

    /// Membership test: `‖v - P_X v‖ ≤ membership_eps · max(1, ‖v‖)`.
    pub fn contains(&self, v: &CVector, tol: &Tolerances) -> Result<bool> {
        if v.dim() != self.dim_ambient {
            return Err(Error::DimensionMismatch {
                expected: self.dim_ambient,
                got: v.dim(),
            });
        }
        let threshold = tol.membership_eps * f64::max(1.0, v.norm());
        Ok(residual_norm(v, &self.basis) <= threshold)
    }

    /// Inclusion test: every basis vector of `self` lies in `other`.
    pub fn leq(&self, other: &Subspace, tol: &Tolerances) -> Result<bool> {
        if self.dim_ambient != other.dim_ambient {
            return Err(Error::DimensionMismatch {
                expected: self.dim_ambient,
                got: other.dim_ambient,
            });
        }
        for b in &self.basis {
            if !other.contains(b, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Subspace equality as mutual inclusion.
    pub fn same(&self, other: &Subspace, tol: &Tolerances) -> Result<bool> {
        Ok(self.leq(other, tol)? && other.leq(self, tol)?)
    }

    /// Join `X ∨ Y = span(X ∪ Y)`.
    pub fn join(&self, other: &Subspace, tol: &Tolerances) -> Subspace {
        assert_eq!(self.dim_ambient, other.dim_ambient);
        let mut basis = self.basis.clone();
        for v in &other.basis {
            if let Some(r) = project_residual(v, &basis, tol.membership_eps) {
                basis.push(r);
            }
        }
        Subspace {
            dim_ambient: self.dim_ambient,
            basis,
        }
    }

    /// Ortho-complement `X^⊥`.
    pub fn complement(&self, tol: &Tolerances) -> Subspace {
        let d = self.dim_ambient;
        let mut basis = self.basis.clone();
        let mut comp = Vec::new();
        for k in 0..d {
            if let Some(r) = project_residual(&CVector::basis(d, k), &basis, tol.membership_eps) {
                basis.push(r.clone());
                comp.push(r);
            }
        }
        debug_assert_eq!(comp.len(), d - self.basis.len());
        Subspace {
            dim_ambient: d,
            basis: comp,
        }
    }

    /// Meet `X ∩ Y`, computed as `(X^⊥ ∨ Y^⊥)^⊥`.
    pub fn meet(&self, other: &Subspace, tol: &Tolerances) -> Subspace {
        assert_eq!(self.dim_ambient, other.dim_ambient);
        self.complement(tol)
            .join(&other.complement(tol), tol)
            .complement(tol)
    }

    /// Projector `P = Σ_k |b_k⟩⟨b_k|` onto the subspace.
    pub fn projector(&self) -> CMatrix {
        let d = self.dim_ambient;
        let mut p = CMatrix::zeros(d, d);
        for b in &self.basis {
            for i in 0..d {
                for j in 0..d {
                    let v = p.get(i, j) + b.entries()[i] * b.entries()[j].conj();
                    p.set(i, j, v);
                }
            }
        }
        p
    }

    /// Projection of `v` onto the subspace.
    pub fn project(&self, v: &CVector) -> CVector {
        let mut out = CVector::zero(self.dim_ambient);
        for b in &self.basis {
            out = out.add(&b.scaled(dot(b, v)));
        }
        out
    }

    /// Projector commutation test: `‖P_X P_Y - P_Y P_X‖_max ≤ 1e-8`.
    pub fn commutes(&self, other: &Subspace, _tol: &Tolerances) -> bool {
        assert_eq!(self.dim_ambient, other.dim_ambient);
        let px = self.projector();
        let py = other.projector();
        px.mul(&py).sub(&py.mul(&px)).max_abs() <= 1e-8
    }

    /// Image `U X` of the subspace under a unitary.
    pub fn apply(&self, u: &CMatrix, tol: &Tolerances) -> Result<Subspace> {
        if !u.is_square() || u.cols() != self.dim_ambient {
            return Err(Error::DimensionMismatch {
                expected: self.dim_ambient,
                got: u.cols(),
            });
        }
        let violation = u.unitarity_violation();
        if violation > tol.unitarity_eps {
            return Err(Error::NotUnitary { violation });
        }
        let images: Vec<CVector> = self.basis.iter().map(|b| u.mul_vec(b)).collect();
        Ok(Subspace::span_of(&images, self.dim_ambient, tol))
    }
}

/// Single scaled basis vector helper for building fixtures and tests.
pub fn ray(v: &CVector, tol: &Tolerances) -> Subspace {
    Subspace::span_of(core::slice::from_ref(v), v.dim(), tol)
}
