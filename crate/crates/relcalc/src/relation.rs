//! Linear relations T on X = C^n, represented by an orthonormal basis of
//! their graph inside C^{2n} (x-part in the first n coordinates, f-part in
//! the last n).
//!
//! In finite dimensions every subspace is closed, so closures are identity
//! maps here and the closed/non-closed distinction of the general theory
//! collapses; the calculus below is exact up to the rank tolerances of the
//! underlying [`Subspace`] arithmetic.

use crate::subspace::{
    nullspace, Matrix, RankScale, Scalar, SetRelation, Subspace, SubspaceError, Vector,
};
use crate::tol::TolerancePolicy;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelationError {
    #[error("relations live on different spaces: C^{left} vs C^{right}")]
    SpaceDimMismatch { left: usize, right: usize },
    #[error("graph has ambient dimension {found}, expected {expected}")]
    GraphAmbient { expected: usize, found: usize },
    #[error("space dimension must be at least 1")]
    EmptySpace,
    #[error("vector is not in the domain of the relation")]
    OutOfDomain,
    #[error("relation is not Hermitian")]
    NotHermitian,
    #[error("deficiency index not constant on a half-plane: {details}")]
    DeficiencyInconsistent { details: String },
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// The four canonical subspaces attached to a relation.
#[derive(Debug, Clone)]
pub struct RelationParts {
    /// D(T) = { x : (x,f) in T for some f }.
    pub domain: Subspace,
    /// R(T) = { f : (x,f) in T for some x }.
    pub range: Subspace,
    /// T(0) = { f : (0,f) in T }, the multivalued part.
    pub mul_part: Subspace,
    /// { x : (x,0) in T }.
    pub kernel: Subspace,
}

/// The affine set T(x) = representative + direction (direction = T(0)).
#[derive(Debug, Clone)]
pub struct AffineImage {
    pub representative: Vector,
    pub direction: Subspace,
}

#[derive(Debug, Clone)]
pub struct Relation {
    space_dim: usize,
    graph: Subspace,
}

impl Relation {
    /// Wrap a subspace of C^{2n} as a relation on C^n.
    pub fn from_graph(space_dim: usize, graph: Subspace) -> Result<Self, RelationError> {
        if space_dim == 0 {
            return Err(RelationError::EmptySpace);
        }
        if graph.ambient_dim() != 2 * space_dim {
            return Err(RelationError::GraphAmbient {
                expected: 2 * space_dim,
                found: graph.ambient_dim(),
            });
        }
        Ok(Self { space_dim, graph })
    }

    /// Relation spanned by the given (x, f) pairs.
    pub fn from_pairs(
        space_dim: usize,
        pairs: &[(Vector, Vector)],
        tol: TolerancePolicy,
    ) -> Result<Self, RelationError> {
        let mut cols = Vec::with_capacity(pairs.len());
        for (x, f) in pairs {
            if x.len() != space_dim || f.len() != space_dim {
                return Err(RelationError::Subspace(SubspaceError::VectorLength {
                    expected: space_dim,
                    found: if x.len() != space_dim {
                        x.len()
                    } else {
                        f.len()
                    },
                }));
            }
            let mut col = Vector::zeros(2 * space_dim);
            col.rows_mut(0, space_dim).copy_from(x);
            col.rows_mut(space_dim, space_dim).copy_from(f);
            cols.push(col);
        }
        let graph = Subspace::orthonormalize(2 * space_dim, &cols, tol)?;
        Self::from_graph(space_dim, graph)
    }

    /// Graph of a (single-valued, everywhere defined) matrix operator.
    pub fn from_operator(a: &Matrix, tol: TolerancePolicy) -> Result<Self, RelationError> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(RelationError::EmptySpace);
        }
        let mut stacked = Matrix::zeros(2 * n, n);
        stacked
            .view_mut((0, 0), (n, n))
            .copy_from(&Matrix::identity(n, n));
        stacked.view_mut((n, 0), (n, n)).copy_from(a);
        let graph = Subspace::span_of_columns(&stacked, tol)?;
        Self::from_graph(n, graph)
    }

    pub fn identity(space_dim: usize, tol: TolerancePolicy) -> Self {
        Self::from_operator(&Matrix::identity(space_dim, space_dim), tol)
            .expect("identity operator graph")
    }

    /// The degenerate relation {(0,0)}.
    pub fn zero_relation(space_dim: usize, tol: TolerancePolicy) -> Self {
        Self {
            space_dim,
            graph: Subspace::zero(2 * space_dim, tol),
        }
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn tol(&self) -> TolerancePolicy {
        self.graph.tol()
    }

    /// x-parts of the graph basis, an n x dim block.
    pub(crate) fn x_block(&self) -> Matrix {
        self.graph.basis().rows(0, self.space_dim).into_owned()
    }

    /// f-parts of the graph basis, an n x dim block.
    pub(crate) fn f_block(&self) -> Matrix {
        self.graph
            .basis()
            .rows(self.space_dim, self.space_dim)
            .into_owned()
    }

    /// Domain, range, multivalued part and kernel.
    ///
    /// The x/f blocks are sub-blocks of an orthonormal frame, so all rank
    /// decisions run against the unit frame scale.
    pub fn components(&self) -> RelationParts {
        let n = self.space_dim;
        let tol = self.tol();
        if self.dim() == 0 {
            let z = Subspace::zero(n, tol);
            return RelationParts {
                domain: z.clone(),
                range: z.clone(),
                mul_part: z.clone(),
                kernel: z,
            };
        }
        let x = self.x_block();
        let f = self.f_block();
        let domain = Subspace::span_internal(&x, tol, RankScale::UnitFrame);
        let range = Subspace::span_internal(&f, tol, RankScale::UnitFrame);
        // mul_part: images of the graph directions whose x-part vanishes.
        // For unit c with Xc = 0 the image Fc is again a unit vector, so the
        // mapped basis stays an orthonormal frame.
        let x_null = nullspace(&x, tol, RankScale::UnitFrame);
        let mul_part = if x_null.is_zero() {
            Subspace::zero(n, tol)
        } else {
            Subspace::span_internal(&(&f * x_null.basis()), tol, RankScale::UnitFrame)
        };
        let f_null = nullspace(&f, tol, RankScale::UnitFrame);
        let kernel = if f_null.is_zero() {
            Subspace::zero(n, tol)
        } else {
            Subspace::span_internal(&(&x * f_null.basis()), tol, RankScale::UnitFrame)
        };
        debug_assert_eq!(self.dim(), domain.dim() + mul_part.dim());
        RelationParts {
            domain,
            range,
            mul_part,
            kernel,
        }
    }

    /// One representative f with (x, f) in T, found by least squares on the
    /// graph basis; None when x is outside D(T) within tolerance.
    pub(crate) fn representative_of(&self, x: &Vector) -> Option<Vector> {
        assert_eq!(x.len(), self.space_dim, "argument has wrong length");
        let tol = self.tol();
        if self.dim() == 0 {
            return (x.norm() <= tol.angle_tol).then(|| Vector::zeros(self.space_dim));
        }
        let xb = self.x_block();
        let rhs = Matrix::from_columns(std::slice::from_ref(x));
        let coeffs = crate::numeric::lstsq(
            &xb,
            &rhs,
            crate::numeric::Threshold::Absolute(tol.rank_rel_tol),
        )
        .column(0)
        .into_owned();
        let residual = (&xb * &coeffs - x).norm();
        if residual > tol.angle_tol * x.norm().max(1.0) {
            return None;
        }
        Some(self.f_block() * coeffs)
    }

    /// The affine set T(x), or None when x is outside D(T) (within tolerance).
    pub fn image_of(&self, x: &Vector) -> Option<AffineImage> {
        let representative = self.representative_of(x)?;
        Some(AffineImage {
            representative,
            direction: self.components().mul_part,
        })
    }

    /// alpha T = { (x, alpha f) : (x, f) in T }.
    pub fn scalar_mul(&self, alpha: Scalar) -> Self {
        assert!(alpha.re.is_finite() && alpha.im.is_finite());
        if self.dim() == 0 {
            return self.clone();
        }
        let n = self.space_dim;
        let mut cols = self.graph.basis().clone_owned();
        for j in 0..cols.ncols() {
            for i in n..2 * n {
                cols[(i, j)] *= alpha;
            }
        }
        Self {
            space_dim: n,
            graph: Subspace::span_internal(&cols, self.tol(), RankScale::Relative),
        }
    }

    /// Operator-like sum T + S = { (x, f+g) : (x,f) in T, (x,g) in S }.
    ///
    /// Computed by intersecting the lifted subspaces {(x,f,g) : (x,f) in T}
    /// and {(x,f,g) : (x,g) in S} of C^{3n} and mapping (x,f,g) to (x, f+g).
    pub fn op_sum(&self, other: &Self) -> Result<Self, RelationError> {
        if self.space_dim != other.space_dim {
            return Err(RelationError::SpaceDimMismatch {
                left: self.space_dim,
                right: other.space_dim,
            });
        }
        let n = self.space_dim;
        let tol = self.tol();

        // {(x,f,g): (x,f) in T, g free}: graph columns plus free g directions
        let dt = self.dim();
        let mut lift_t = Matrix::zeros(3 * n, dt + n);
        lift_t
            .view_mut((0, 0), (2 * n, dt))
            .copy_from(self.graph.basis());
        lift_t
            .view_mut((2 * n, dt), (n, n))
            .copy_from(&Matrix::identity(n, n));
        let lift_t = Subspace::from_orthonormal_unchecked(lift_t, tol);

        // {(x,f,g): (x,g) in S, f free}
        let ds = other.dim();
        let mut lift_s = Matrix::zeros(3 * n, ds + n);
        lift_s.view_mut((0, 0), (n, ds)).copy_from(&other.x_block());
        lift_s
            .view_mut((2 * n, 0), (n, ds))
            .copy_from(&other.f_block());
        lift_s
            .view_mut((n, ds), (n, n))
            .copy_from(&Matrix::identity(n, n));
        let lift_s = Subspace::from_orthonormal_unchecked(lift_s, tol);

        let triples = lift_t.intersect(&lift_s)?;
        if triples.is_zero() {
            return Ok(Self::zero_relation(n, tol));
        }
        let basis = triples.basis();
        let d = basis.ncols();
        let mut mapped = Matrix::zeros(2 * n, d);
        mapped.view_mut((0, 0), (n, d)).copy_from(&basis.rows(0, n));
        let summed = basis.rows(n, n) + basis.rows(2 * n, n);
        mapped.view_mut((n, 0), (n, d)).copy_from(&summed);
        Ok(Self {
            space_dim: n,
            graph: Subspace::span_internal(&mapped, tol, RankScale::Relative),
        })
    }

    /// The adjoint T* = { (y,g) : <g,x> = <y,f> for all (x,f) in T }.
    ///
    /// Computed as the orthogonal complement of the rotated graph
    /// { (-f, x) : (x,f) in T }; the rotation is unitary, so
    /// dim T* = 2n - dim T exactly.
    pub fn adjoint(&self) -> Self {
        let n = self.space_dim;
        let tol = self.tol();
        if self.dim() == 0 {
            return Self {
                space_dim: n,
                graph: Subspace::full(2 * n, tol),
            };
        }
        let d = self.dim();
        let mut rotated = Matrix::zeros(2 * n, d);
        rotated
            .view_mut((0, 0), (n, d))
            .copy_from(&(-self.f_block()));
        rotated.view_mut((n, 0), (n, d)).copy_from(&self.x_block());
        let rotated = Subspace::from_orthonormal_unchecked(rotated, tol);
        Self {
            space_dim: n,
            graph: rotated.complement(),
        }
    }

    /// T - lambda I = { (x, f - lambda x) : (x,f) in T }.
    pub fn shift(&self, lambda: Scalar) -> Self {
        assert!(lambda.re.is_finite() && lambda.im.is_finite());
        if self.dim() == 0 {
            return self.clone();
        }
        let n = self.space_dim;
        let d = self.dim();
        let mut cols = Matrix::zeros(2 * n, d);
        cols.view_mut((0, 0), (n, d)).copy_from(&self.x_block());
        let shifted = self.f_block() - self.x_block().map(|z| z * lambda);
        cols.view_mut((n, 0), (n, d)).copy_from(&shifted);
        Self {
            space_dim: n,
            graph: Subspace::span_internal(&cols, self.tol(), RankScale::Relative),
        }
    }

    /// Max-abs violation of the defining symmetry identity
    /// `<f_i, x_j> = <x_i, f_j>` over all graph basis pairs; zero exactly
    /// when X^H F is Hermitian.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.dim();
        if d == 0 {
            return 0.0;
        }
        let m = self.x_block().adjoint() * self.f_block();
        let mut defect = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        defect
    }

    /// T is Hermitian when its graph is contained in the graph of T*.
    pub fn is_hermitian(&self) -> bool {
        let adj = self.adjoint();
        matches!(
            self.graph
                .compare(adj.graph())
                .expect("same ambient by construction")
                .relation,
            SetRelation::Equal | SetRelation::LeftInRight
        )
    }

    /// T is self-adjoint when T = T*; with the adjoint dimension law this is
    /// equivalent to T Hermitian with dim(graph) = n.
    pub fn is_self_adjoint(&self) -> bool {
        self.dim() == self.space_dim && self.is_hermitian()
    }
}
