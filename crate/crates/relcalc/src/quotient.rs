//! Quotient spaces X/E, the single-valued part of a relation, and the norms
//! they induce.
//!
//! X/E is identified isometrically with E-perp: the class [x] is represented
//! by the canonical representative P_{E-perp} x, which realizes the quotient
//! inner product <[x],[y]> = <x-perp, y-perp> without coset bookkeeping.
//! The single-valued part of T is the linear operator sending x in D(T) to
//! the representative of T(x) modulo T(0); it carries the norm of T.

use crate::relation::{Relation, RelationError};
use crate::subspace::{inner, Matrix, Scalar, Subspace, SubspaceError, Vector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuotientError {
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// X/E with the inner product inherited from E-perp.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    modulus: Subspace,
    lift: Subspace,
}

impl QuotientSpace {
    pub fn new(modulus: Subspace) -> Self {
        let lift = modulus.complement();
        Self { modulus, lift }
    }

    pub fn modulus(&self) -> &Subspace {
        &self.modulus
    }

    /// Canonical representative of [x]: the projection of x onto E-perp.
    pub fn representative(&self, x: &Vector) -> Vector {
        self.lift.project(x)
    }

    /// <[x],[y]>; vanishes whenever either argument lies in E.
    pub fn inner(&self, x: &Vector, y: &Vector) -> Scalar {
        inner(&self.representative(x), &self.representative(y))
    }

    /// |[x]| = d(x, E).
    pub fn norm(&self, x: &Vector) -> f64 {
        self.representative(x).norm()
    }
}

/// Quotient inner product <[x],[y]> on X/E.
pub fn quotient_inner(e: &Subspace, x: &Vector, y: &Vector) -> Result<Scalar, QuotientError> {
    for v in [x, y] {
        if v.len() != e.ambient_dim() {
            return Err(QuotientError::Subspace(SubspaceError::VectorLength {
                expected: e.ambient_dim(),
                found: v.len(),
            }));
        }
    }
    Ok(QuotientSpace::new(e.clone()).inner(x, y))
}

/// The single-valued part of a relation: a matrix from D(T)-coordinates to
/// T(0)-perp-coordinates. For every domain basis vector x_i and any
/// f_i in T(x_i), the i-th column is the coordinate vector of the projection
/// of f_i onto T(0)-perp; the choice of representative does not matter since
/// representatives differ by elements of T(0).
#[derive(Debug, Clone)]
pub struct SingleValuedPart {
    space_dim: usize,
    domain: Subspace,
    codomain: Subspace,
    matrix: Matrix,
}

impl SingleValuedPart {
    /// Single-valued part on the full domain D(T).
    pub fn of(t: &Relation) -> Self {
        let parts = t.components();
        Self::build(t, parts.domain, &parts.mul_part).expect("every D(T) basis vector has an image")
    }

    /// Single-valued part restricted to a given sub-domain of D(T).
    /// Fails with [`RelationError::OutOfDomain`] if some basis vector of
    /// `domain` has no image under the relation.
    pub fn on_domain(t: &Relation, domain: &Subspace) -> Result<Self, RelationError> {
        let parts = t.components();
        Self::build(t, domain.clone(), &parts.mul_part)
    }

    fn build(t: &Relation, domain: Subspace, mul_part: &Subspace) -> Result<Self, RelationError> {
        let codomain = mul_part.complement();
        let k = domain.dim();
        let r = codomain.dim();
        let mut matrix = Matrix::zeros(r, k);
        if k > 0 {
            if t.dim() == 0 {
                return Err(RelationError::OutOfDomain);
            }
            let tol = t.tol();
            // one batched least-squares solve for all domain basis vectors
            let xb = t.x_block();
            let coeffs = crate::numeric::lstsq(
                &xb,
                domain.basis(),
                crate::numeric::Threshold::Absolute(tol.rank_rel_tol),
            );
            let reconstructed = &xb * &coeffs;
            for i in 0..k {
                let residual = (reconstructed.column(i) - domain.basis().column(i)).norm();
                if residual > tol.angle_tol {
                    return Err(RelationError::OutOfDomain);
                }
            }
            if r > 0 {
                let representatives = t.f_block() * coeffs;
                matrix = codomain.basis().adjoint() * representatives;
            }
        }
        Ok(Self {
            space_dim: t.space_dim(),
            domain,
            codomain,
            matrix,
        })
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    /// Orthonormal basis of T(0)-perp, the codomain of the operator.
    pub fn codomain(&self) -> &Subspace {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Coordinates of x in the domain basis; error when x is not in the
    /// domain within tolerance.
    pub fn coords_of(&self, x: &Vector) -> Result<Vector, RelationError> {
        if !self.domain.contains_vector(x) {
            return Err(RelationError::OutOfDomain);
        }
        Ok(self.domain.basis().adjoint() * x)
    }

    /// The value of the operator at x, as a vector of the ambient space
    /// (lying in T(0)-perp).
    pub fn value_at(&self, x: &Vector) -> Result<Vector, RelationError> {
        let c = self.coords_of(x)?;
        if self.codomain.is_zero() {
            return Ok(Vector::zeros(self.space_dim));
        }
        Ok(self.codomain.basis() * (&self.matrix * c))
    }

    /// |T(x)| = |(single-valued part) x|.
    pub fn norm_at(&self, x: &Vector) -> Result<f64, RelationError> {
        let c = self.coords_of(x)?;
        Ok((&self.matrix * c).norm())
    }

    /// |T| = sigma_max of the matrix; 0 when the domain is trivial.
    pub fn operator_norm(&self) -> f64 {
        crate::numeric::sigma_max(&self.matrix)
    }

    /// Largest c >= 0 with |T(x)| >= c |x| on the domain: the smallest
    /// singular value over all input directions. Positive infinity when the
    /// domain is trivial (the bound is vacuous), zero when the matrix has a
    /// nontrivial null space.
    pub fn min_gain(&self) -> f64 {
        crate::numeric::sigma_min_inputs(&self.matrix)
    }
}

/// Construct the single-valued part of a relation (the operator realizing
/// T modulo T(0)).
pub fn single_valued_part(t: &Relation) -> SingleValuedPart {
    SingleValuedPart::of(t)
}

/// |T(x)| for x in D(T), computed as d(f, T(0)) for a least-squares
/// representative f of T(x). In debug builds the single-valued-part route
/// |M c| is evaluated as well and both values are required to agree.
pub fn relation_norm_at(t: &Relation, x: &Vector) -> Result<f64, RelationError> {
    let parts = t.components();
    if !parts.domain.contains_vector(x) {
        return Err(RelationError::OutOfDomain);
    }
    let f = t.representative_of(x).ok_or(RelationError::OutOfDomain)?;
    let dist = (&f - parts.mul_part.project(&f)).norm();
    #[cfg(debug_assertions)]
    {
        let svp = SingleValuedPart::of(t);
        let via_matrix = svp.norm_at(x)?;
        let slack = 1e-9 * dist.max(via_matrix) + 1e-12 * (1.0 + f.norm());
        debug_assert!(
            (dist - via_matrix).abs() <= slack,
            "norm routes disagree: d(f,T(0)) = {dist}, |Mc| = {via_matrix}"
        );
    }
    Ok(dist)
}

/// |T| = |single-valued part|, the supremum of |T(x)| over the unit ball
/// of D(T); zero when D(T) = {0}.
pub fn relation_norm(t: &Relation) -> f64 {
    SingleValuedPart::of(t).operator_norm()
}
