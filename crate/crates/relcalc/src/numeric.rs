//! Low-level dense kernels shared by the subspace arithmetic.
//!
//! Everything here is built from Householder factorizations (plain and
//! column-pivoted QR) and Hermitian eigendecompositions. The iterative
//! bidiagonal SVD is avoided on purpose: on matrices with repeated or zero
//! singular values (orthogonal projectors, re-orthonormalized bases) its
//! complex implementation can mis-pair singular vectors, while Householder
//! reflections and symmetric tridiagonal iterations stay exact to machine
//! precision.

use nalgebra::linalg::{ColPivQR, SymmetricEigen};
use nalgebra::{Complex, DMatrix};

pub(crate) type Scalar = Complex<f64>;
pub(crate) type Matrix = DMatrix<Scalar>;

fn hermitian_average(m: &Matrix) -> Matrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of the smaller Gram matrix of `mat`, descending and clamped
/// to be nonnegative: the squared singular values (up to the smaller
/// dimension).
pub(crate) fn singular_values_squared(mat: &Matrix) -> Vec<f64> {
    let (r, c) = (mat.nrows(), mat.ncols());
    if r == 0 || c == 0 {
        return Vec::new();
    }
    let gram = if r <= c {
        hermitian_average(&(mat * mat.adjoint()))
    } else {
        hermitian_average(&(mat.adjoint() * mat))
    };
    let mut eigs: Vec<f64> = SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .map(|&x| x.max(0.0))
        .collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eigs
}

/// Largest singular value; 0 for empty matrices.
pub(crate) fn sigma_max(mat: &Matrix) -> f64 {
    singular_values_squared(mat)
        .first()
        .map_or(0.0, |&x| x.sqrt())
}

/// Smallest singular value over all input directions (ncols of them):
/// zero when the matrix has more columns than rows.
pub(crate) fn sigma_min_inputs(mat: &Matrix) -> f64 {
    let (r, c) = (mat.nrows(), mat.ncols());
    if c == 0 {
        return f64::INFINITY;
    }
    if r < c {
        return 0.0;
    }
    let gram = hermitian_average(&(mat.adjoint() * mat));
    SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &x| acc.min(x.max(0.0)))
        .sqrt()
}

/// How the rank-truncation threshold of [`rank_revealing_span`] is formed
/// from the pivot magnitudes (the singular-value estimates of the
/// column-pivoted QR).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Threshold {
    /// `rel * max_pivot`: the scale-invariant default.
    RelativeToPivot(f64),
    /// A fixed cutoff, used for sub-blocks of orthonormal frames whose
    /// natural scale is 1 regardless of the blocks' own magnitudes.
    Absolute(f64),
}

/// Orthonormal basis of the numerical column space via column-pivoted
/// Householder QR: the leading Q columns whose pivot magnitudes reach the
/// threshold.
pub(crate) fn rank_revealing_span(mat: &Matrix, threshold: Threshold) -> Matrix {
    let m = mat.nrows();
    if mat.ncols() == 0 {
        return Matrix::zeros(m, 0);
    }
    let qr = ColPivQR::new(mat.clone());
    let r = qr.r();
    let steps = r.nrows().min(r.ncols());
    let max_pivot = (0..steps).map(|i| r[(i, i)].norm()).fold(0.0f64, f64::max);
    let cutoff = match threshold {
        Threshold::RelativeToPivot(rel) => {
            if max_pivot <= 0.0 {
                return Matrix::zeros(m, 0);
            }
            rel * max_pivot
        }
        Threshold::Absolute(abs) => abs,
    };
    debug_assert!(cutoff > 0.0);
    let mut rank = 0usize;
    while rank < steps && r[(rank, rank)].norm() >= cutoff {
        rank += 1;
    }
    if rank == 0 {
        return Matrix::zeros(m, 0);
    }
    qr.q().columns(0, rank).into_owned()
}

/// Completes an orthonormal set of columns to a unitary basis and returns
/// the new columns: an orthonormal basis of the orthogonal complement.
/// `basis` must have orthonormal columns.
pub(crate) fn orthonormal_completion(basis: &Matrix) -> Matrix {
    let (m, d) = (basis.nrows(), basis.ncols());
    assert!(d <= m);
    if d == 0 {
        return Matrix::identity(m, m);
    }
    if d == m {
        return Matrix::zeros(m, 0);
    }
    // Householder QR of [B | I]: the first d reflections triangularize B, so
    // the first d columns of Q span col(B) and the remaining m - d span its
    // complement.
    let mut stacked = Matrix::zeros(m, d + m);
    stacked.view_mut((0, 0), (m, d)).copy_from(basis);
    stacked
        .view_mut((0, d), (m, m))
        .copy_from(&Matrix::identity(m, m));
    let q = stacked.qr().q();
    debug_assert_eq!(q.ncols(), m);
    let completion = q.columns(d, m - d).into_owned();
    debug_assert!(
        (basis.adjoint() * &completion).norm() < 1e-12 * (m as f64),
        "completion not orthogonal to the input basis"
    );
    completion
}

/// Minimum-residual least-squares solution of `a x = rhs` (per column of
/// `rhs`) via truncated column-pivoted QR; directions with pivot magnitude
/// below the threshold are ignored.
pub(crate) fn lstsq(a: &Matrix, rhs: &Matrix, threshold: Threshold) -> Matrix {
    let k = a.ncols();
    let cols = rhs.ncols();
    assert_eq!(a.nrows(), rhs.nrows());
    if k == 0 {
        return Matrix::zeros(0, cols);
    }
    let qr = ColPivQR::new(a.clone());
    let r = qr.r();
    let steps = r.nrows().min(k);
    let scale = (0..steps).map(|i| r[(i, i)].norm()).fold(0.0f64, f64::max);
    let cutoff = match threshold {
        Threshold::RelativeToPivot(rel) => rel * scale,
        Threshold::Absolute(abs) => abs,
    };
    let mut rank = 0usize;
    while rank < steps && scale > 0.0 && r[(rank, rank)].norm() >= cutoff {
        rank += 1;
    }
    let mut solution = Matrix::zeros(k, cols);
    if rank > 0 {
        let y = qr.q().columns(0, rank).adjoint() * rhs;
        let r_head = r.view((0, 0), (rank, rank)).into_owned();
        let z = r_head
            .solve_upper_triangular(&y)
            .expect("leading pivot block is nonsingular by construction");
        solution.view_mut((0, 0), (rank, cols)).copy_from(&z);
    }
    qr.p().inv_permute_rows(&mut solution);
    solution
}
