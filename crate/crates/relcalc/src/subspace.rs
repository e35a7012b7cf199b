//! Rank-revealing subspace arithmetic over C^m.
//!
//! A [`Subspace`] stores an orthonormal basis (as matrix columns) together
//! with the [`TolerancePolicy`] that produced it. Every higher layer of the
//! crate (relations, quotients, deficiency indices, bounds) reduces to the
//! operations here. Values are immutable; bases are never mutated in place.

use crate::numeric;
use crate::tol::TolerancePolicy;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Complex scalar of the ambient Hilbert spaces.
pub type Scalar = nalgebra::Complex<f64>;
pub type Vector = DVector<Scalar>;
pub type Matrix = DMatrix<Scalar>;

/// Inner product, linear in the first argument: `<x,y> = sum x_i conj(y_i)`.
pub fn inner(x: &Vector, y: &Vector) -> Scalar {
    y.dotc(x)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubspaceError {
    #[error("ambient dimension must be at least 1")]
    EmptyAmbient,
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("vector has length {found}, expected {expected}")]
    VectorLength { expected: usize, found: usize },
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("columns are not orthonormal (Gram defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },
}

/// Outcome of comparing two subspaces of the same ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetRelation {
    Equal,
    /// The left operand is contained in the right one.
    LeftInRight,
    /// The right operand is contained in the left one.
    RightInLeft,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub relation: SetRelation,
    /// Largest principal angle (radians) between the two spans, taken over
    /// min(dim A, dim B) canonical angle pairs.
    pub max_angle: f64,
}

/// How singular values are thresholded when deciding a numerical rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RankScale {
    /// sigma >= rank_rel_tol * sigma_max: the default, scale-invariant rule.
    Relative,
    /// sigma >= rank_rel_tol * 1. Correct for sub-blocks of an orthonormal
    /// frame, whose singular values live in [0, 1] by construction; a
    /// relative rule would misread an all-tiny block as full rank.
    UnitFrame,
}

#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    tol: TolerancePolicy,
}

fn all_finite(mat: &Matrix) -> bool {
    mat.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

impl Subspace {
    /// Orthonormal basis for the numerical span of `vectors` inside C^m.
    ///
    /// Singular values below `rank_rel_tol * sigma_max` are truncated, so
    /// nearly dependent inputs collapse to the lower-dimensional span. An
    /// empty input yields the zero subspace.
    pub fn orthonormalize(
        ambient_dim: usize,
        vectors: &[Vector],
        tol: TolerancePolicy,
    ) -> Result<Self, SubspaceError> {
        if ambient_dim == 0 {
            return Err(SubspaceError::EmptyAmbient);
        }
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(SubspaceError::VectorLength {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim, tol));
        }
        let mat = Matrix::from_columns(vectors);
        Self::span_of_columns(&mat, tol)
    }

    /// Numerical column span of a matrix. Equivalent to [`Self::orthonormalize`]
    /// on the columns.
    pub fn span_of_columns(mat: &Matrix, tol: TolerancePolicy) -> Result<Self, SubspaceError> {
        if mat.nrows() == 0 {
            return Err(SubspaceError::EmptyAmbient);
        }
        if !all_finite(mat) {
            return Err(SubspaceError::NonFinite);
        }
        Ok(Self::span_internal(mat, tol, RankScale::Relative))
    }

    /// Span with the rank decision already validated by the caller.
    pub(crate) fn span_internal(mat: &Matrix, tol: TolerancePolicy, scale: RankScale) -> Self {
        let m = mat.nrows();
        if mat.ncols() == 0 {
            return Self::zero(m, tol);
        }
        let threshold = match scale {
            RankScale::Relative => numeric::Threshold::RelativeToPivot(tol.rank_rel_tol),
            RankScale::UnitFrame => numeric::Threshold::Absolute(tol.rank_rel_tol),
        };
        let basis = numeric::rank_revealing_span(mat, threshold);
        if basis.ncols() == 0 {
            return Self::zero(m, tol);
        }
        Self::from_orthonormal_unchecked(basis, tol)
    }

    /// Wrap columns that are already orthonormal; Gram defect above 1e-12
    /// is rejected.
    pub fn from_orthonormal(basis: Matrix, tol: TolerancePolicy) -> Result<Self, SubspaceError> {
        if basis.nrows() == 0 {
            return Err(SubspaceError::EmptyAmbient);
        }
        if !all_finite(&basis) {
            return Err(SubspaceError::NonFinite);
        }
        let candidate = Self {
            ambient_dim: basis.nrows(),
            basis,
            tol,
        };
        let defect = candidate.orthonormality_defect();
        if defect >= 1e-12 {
            return Err(SubspaceError::NotOrthonormal { defect });
        }
        Ok(candidate)
    }

    pub(crate) fn from_orthonormal_unchecked(basis: Matrix, tol: TolerancePolicy) -> Self {
        let ambient_dim = basis.nrows();
        debug_assert!(ambient_dim >= 1);
        debug_assert!(basis.ncols() <= ambient_dim);
        let s = Self {
            ambient_dim,
            basis,
            tol,
        };
        debug_assert!(
            s.orthonormality_defect() < 1e-10,
            "basis not orthonormal: defect {}",
            s.orthonormality_defect()
        );
        s
    }

    /// The zero subspace {0} of C^m, a first-class value with dim 0.
    pub fn zero(ambient_dim: usize, tol: TolerancePolicy) -> Self {
        assert!(ambient_dim >= 1, "ambient dimension must be at least 1");
        Self {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
            tol,
        }
    }

    /// All of C^m.
    pub fn full(ambient_dim: usize, tol: TolerancePolicy) -> Self {
        assert!(ambient_dim >= 1, "ambient dimension must be at least 1");
        Self {
            ambient_dim,
            basis: Matrix::identity(ambient_dim, ambient_dim),
            tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn tol(&self) -> TolerancePolicy {
        self.tol
    }

    /// Max-abs deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let d = self.dim();
        if d == 0 {
            return 0.0;
        }
        let gram = self.basis.adjoint() * &self.basis;
        let mut defect = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j {
                    Scalar::new(1.0, 0.0)
                } else {
                    Scalar::new(0.0, 0.0)
                };
                defect = defect.max((gram[(i, j)] - target).norm());
            }
        }
        defect
    }

    /// Orthogonal complement, by completing the basis to a unitary one;
    /// `dim(result) = ambient_dim - dim(self)` holds exactly.
    pub fn complement(&self) -> Self {
        let m = self.ambient_dim;
        if self.is_zero() {
            return Self::full(m, self.tol);
        }
        if self.dim() == m {
            return Self::zero(m, self.tol);
        }
        let completion = numeric::orthonormal_completion(&self.basis);
        debug_assert_eq!(completion.ncols(), m - self.dim());
        Self::from_orthonormal_unchecked(completion, self.tol)
    }

    /// Subspace sum A + B (span of the union).
    pub fn sum(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_ambient(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut cols: Vec<Vector> = Vec::with_capacity(self.dim() + other.dim());
        cols.extend(self.basis.column_iter().map(|c| c.into_owned()));
        cols.extend(other.basis.column_iter().map(|c| c.into_owned()));
        let mat = Matrix::from_columns(&cols);
        // columns are unit vectors, so the frame scale is 1
        Ok(Self::span_internal(&mat, self.tol, RankScale::UnitFrame))
    }

    /// Intersection, computed as the complement of the sum of complements.
    pub fn intersect(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check_ambient(other)?;
        Ok(self.complement().sum(&other.complement())?.complement())
    }

    /// Orthogonal projection of `v` onto the subspace.
    ///
    /// Panics if `v` has the wrong length (contract: `len(v) = ambient_dim`).
    pub fn project(&self, v: &Vector) -> Vector {
        assert_eq!(
            v.len(),
            self.ambient_dim,
            "projection argument has wrong length"
        );
        if self.is_zero() {
            return Vector::zeros(self.ambient_dim);
        }
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Whether `v` lies in the subspace within `angle_tol`, measured as the
    /// residual after projection relative to max(1, |v|).
    pub fn contains_vector(&self, v: &Vector) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let residual = v - self.project(v);
        residual.norm() <= self.tol.angle_tol * v.norm().max(1.0)
    }

    /// Operator norm of (I - P_other) restricted to self: the sine of the
    /// largest principal angle from self into other. Zero for the zero
    /// subspace.
    pub(crate) fn directed_gap(&self, other: &Self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let residual = if other.is_zero() {
            self.basis.clone()
        } else {
            &self.basis - &other.basis * (other.basis.adjoint() * &self.basis)
        };
        numeric::sigma_max(&residual)
    }

    /// Compare two subspaces by principal angles. Containment of A in B is
    /// declared when dim A <= dim B and |(I - P_B) P_A| < angle_tol; equality
    /// requires mutual containment and equal dimensions.
    pub fn compare(&self, other: &Self) -> Result<Comparison, SubspaceError> {
        self.check_ambient(other)?;
        let gap_lr = self.directed_gap(other);
        let gap_rl = other.directed_gap(self);
        let left_in_right = self.dim() <= other.dim() && gap_lr < self.tol.angle_tol;
        let right_in_left = other.dim() <= self.dim() && gap_rl < self.tol.angle_tol;
        let relation = if left_in_right && right_in_left && self.dim() == other.dim() {
            SetRelation::Equal
        } else if left_in_right {
            SetRelation::LeftInRight
        } else if right_in_left {
            SetRelation::RightInLeft
        } else {
            SetRelation::Incomparable
        };
        let principal_gap = if self.dim() <= other.dim() {
            gap_lr
        } else {
            gap_rl
        };
        Ok(Comparison {
            relation,
            max_angle: principal_gap.clamp(0.0, 1.0).asin(),
        })
    }

    fn check_ambient(&self, other: &Self) -> Result<(), SubspaceError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(SubspaceError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }
}

/// Basis of the right null space { c : M c = 0 } of a matrix, as a subspace
/// of the coordinate space C^(ncols).
pub(crate) fn nullspace(mat: &Matrix, tol: TolerancePolicy, scale: RankScale) -> Subspace {
    let k = mat.ncols();
    assert!(k >= 1, "nullspace of a 0-column matrix is undefined");
    let row_space = Subspace::span_internal(&mat.adjoint(), tol, scale);
    row_space.complement()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn v(entries: &[(f64, f64)]) -> Vector {
        Vector::from_iterator(entries.len(), entries.iter().map(|&(re, im)| c(re, im)))
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn colinear_input_collapses_to_one_dim() {
        let s = Subspace::orthonormalize(
            2,
            &[v(&[(1.0, 0.0), (0.0, 0.0)]), v(&[(2.0, 0.0), (0.0, 0.0)])],
            tol(),
        )
        .unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains_vector(&v(&[(5.0, 0.0), (0.0, 0.0)])));
    }

    #[test]
    fn empty_input_is_zero_subspace() {
        let s = Subspace::orthonormalize(3, &[], tol()).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(s.is_zero());
    }

    #[test]
    fn near_dependent_pair_truncates() {
        // Cross-checked against the closed-form singular values of the
        // 2x2 matrix [[1,1],[0,1e-14]]: sigma_2 / sigma_1 ~ 7e-15 < 1e-10.
        let cols = vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1e-14, 0.0)],
        ];
        let (s1, s2) = relcalc_oracles::singular_values_two_cols(&cols);
        assert!(s2 < tol().rank_rel_tol * s1);
        let s = Subspace::orthonormalize(
            2,
            &[v(&[(1.0, 0.0), (0.0, 0.0)]), v(&[(1.0, 0.0), (1e-14, 0.0)])],
            tol(),
        )
        .unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn rejects_empty_ambient_and_bad_lengths() {
        assert!(matches!(
            Subspace::orthonormalize(0, &[], tol()),
            Err(SubspaceError::EmptyAmbient)
        ));
        let err = Subspace::orthonormalize(2, &[v(&[(1.0, 0.0)])], tol()).unwrap_err();
        assert_eq!(
            err,
            SubspaceError::VectorLength {
                expected: 2,
                found: 1
            }
        );
        let bad = Subspace::span_of_columns(
            &Matrix::from_columns(&[v(&[(f64::NAN, 0.0), (0.0, 0.0)])]),
            tol(),
        );
        assert!(matches!(bad, Err(SubspaceError::NonFinite)));
    }

    #[test]
    fn complement_of_axis_in_c2() {
        let e1 = Subspace::orthonormalize(2, &[v(&[(1.0, 0.0), (0.0, 0.0)])], tol()).unwrap();
        let comp = e1.complement();
        assert_eq!(comp.dim(), 1);
        assert!(comp.contains_vector(&v(&[(0.0, 0.0), (1.0, 0.0)])));
    }

    #[test]
    fn complement_of_zero_is_full() {
        let z = Subspace::zero(3, tol());
        let comp = z.complement();
        assert_eq!(comp.dim(), 3);
        assert_eq!(comp.complement().dim(), 0);
    }

    #[test]
    fn complement_of_complex_line() {
        // span{(1,i)/sqrt2} in C^2; its complement must be span{(1,-i)/sqrt2}:
        // <(1,i),(1,-i)> = 1*conj(1) + i*conj(-i) = 1 + i*i = 0.
        let direct = relcalc_oracles::inner(
            &[
                relcalc_oracles::C::new(1.0, 0.0),
                relcalc_oracles::C::new(0.0, 1.0),
            ],
            &[
                relcalc_oracles::C::new(1.0, 0.0),
                relcalc_oracles::C::new(0.0, -1.0),
            ],
        );
        assert!(direct.norm() < 1e-15);
        let line = Subspace::orthonormalize(2, &[v(&[(1.0, 0.0), (0.0, 1.0)])], tol()).unwrap();
        let comp = line.complement();
        assert_eq!(comp.dim(), 1);
        assert!(comp.contains_vector(&v(&[
            (std::f64::consts::FRAC_1_SQRT_2, 0.0),
            (0.0, -std::f64::consts::FRAC_1_SQRT_2)
        ])));
    }

    #[test]
    fn intersect_coordinate_planes() {
        let a = Subspace::orthonormalize(
            3,
            &[
                v(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
                v(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
            ],
            tol(),
        )
        .unwrap();
        let b = Subspace::orthonormalize(
            3,
            &[
                v(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
                v(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
            ],
            tol(),
        )
        .unwrap();
        let cap = a.intersect(&b).unwrap();
        assert_eq!(cap.dim(), 1);
        assert!(cap.contains_vector(&v(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)])));
        // idempotence
        let self_cap = a.intersect(&a).unwrap();
        assert_eq!(self_cap.compare(&a).unwrap().relation, SetRelation::Equal);
    }

    #[test]
    fn intersect_rejects_ambient_mismatch() {
        let a = Subspace::full(2, tol());
        let b = Subspace::full(3, tol());
        assert!(matches!(
            a.intersect(&b),
            Err(SubspaceError::AmbientMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn projection_examples() {
        let e1 = Subspace::orthonormalize(2, &[v(&[(1.0, 0.0), (0.0, 0.0)])], tol()).unwrap();
        let p = e1.project(&v(&[(3.0, 0.0), (4.0, 0.0)]));
        assert!((p[0] - c(3.0, 0.0)).norm() < 1e-14);
        assert!(p[1].norm() < 1e-14);

        let z = Subspace::zero(2, tol());
        assert!(z.project(&v(&[(1.0, 0.0), (2.0, 0.0)])).norm() < 1e-15);

        // project (1,0) onto span{(1,1)/sqrt2}: Gram projection by hand is (0.5, 0.5)
        let diag = Subspace::orthonormalize(2, &[v(&[(1.0, 0.0), (1.0, 0.0)])], tol()).unwrap();
        let p = diag.project(&v(&[(1.0, 0.0), (0.0, 0.0)]));
        assert!((p[0] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((p[1] - c(0.5, 0.0)).norm() < 1e-14);
        // residual is orthogonal to the subspace
        let r = v(&[(1.0, 0.0), (0.0, 0.0)]) - &p;
        assert!(inner(&r, &p).norm() < 1e-14);
    }

    #[test]
    fn compare_variants() {
        let e1 = Subspace::orthonormalize(2, &[v(&[(1.0, 0.0), (0.0, 0.0)])], tol()).unwrap();
        let full = Subspace::full(2, tol());
        let cmp = e1.compare(&full).unwrap();
        assert_eq!(cmp.relation, SetRelation::LeftInRight);
        assert!(cmp.max_angle < 1e-12);

        let cmp = full.compare(&e1).unwrap();
        assert_eq!(cmp.relation, SetRelation::RightInLeft);

        let cmp = e1.compare(&e1).unwrap();
        assert_eq!(cmp.relation, SetRelation::Equal);
        assert_eq!(cmp.max_angle, 0.0);

        let near = Subspace::orthonormalize(2, &[v(&[(1.0, 0.0), (1e-12, 0.0)])], tol()).unwrap();
        let cmp = e1.compare(&near).unwrap();
        assert_eq!(cmp.relation, SetRelation::Equal);
        assert!(cmp.max_angle < tol().angle_tol);

        let e2 = Subspace::orthonormalize(2, &[v(&[(0.0, 0.0), (1.0, 0.0)])], tol()).unwrap();
        let cmp = e1.compare(&e2).unwrap();
        assert_eq!(cmp.relation, SetRelation::Incomparable);
        assert!((cmp.max_angle - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn zero_subspace_is_contained_everywhere() {
        let z = Subspace::zero(3, tol());
        let plane = Subspace::orthonormalize(3, &[v(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)])], tol())
            .unwrap();
        assert_eq!(
            z.compare(&plane).unwrap().relation,
            SetRelation::LeftInRight
        );
        assert_eq!(z.compare(&z).unwrap().relation, SetRelation::Equal);
    }

    #[test]
    fn from_orthonormal_validates_gram() {
        let ok = Matrix::identity(3, 2);
        assert!(Subspace::from_orthonormal(ok, tol()).is_ok());
        let mut bad = Matrix::identity(3, 2);
        bad[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(
            Subspace::from_orthonormal(bad, tol()),
            Err(SubspaceError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn nullspace_of_rank_one_block() {
        // 2x2 matrix with identical columns: null space is span{(1,-1)/sqrt2}
        let mat =
            Matrix::from_columns(&[v(&[(1.0, 0.0), (0.0, 0.0)]), v(&[(1.0, 0.0), (0.0, 0.0)])]);
        let ns = nullspace(&mat, tol(), RankScale::Relative);
        assert_eq!(ns.dim(), 1);
        let prod = &mat * ns.basis();
        assert!(prod.norm() < 1e-12);
    }
}
