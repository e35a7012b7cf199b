//! Reference linear algebra routines for cross-checking the main library.
//!
//! Everything here is deliberately written from scratch on `Vec<Vec<Complex64>>`
//! with Gaussian elimination and partial pivoting, so that no code path is
//! shared with the SVD-based implementation under test. Accuracy is adequate
//! for the desk-scale matrices (dimension <= 16) the test suites use.

// index-based elimination loops are the point here: no iterator adapters,
// no shared code with the library under test
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

pub type C = Complex64;

/// Dense column-major-agnostic matrix as rows of equal length.
pub type Mat = Vec<Vec<C>>;

fn nrows(a: &Mat) -> usize {
    a.len()
}

fn ncols(a: &Mat) -> usize {
    a.first().map_or(0, |r| r.len())
}

/// Row-reduce `a` in place with partial pivoting. Returns the pivot columns.
fn row_echelon(a: &mut Mat, tol: f64) -> Vec<usize> {
    let (m, n) = (nrows(a), ncols(a));
    let mut pivots = Vec::new();
    let mut row = 0usize;
    // scale reference for the absolute pivot threshold
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    for col in 0..n {
        if row == m {
            break;
        }
        let (best, best_val) = (row..m)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if best_val <= tol * scale {
            continue;
        }
        a.swap(row, best);
        let inv = C::new(1.0, 0.0) / a[row][col];
        for j in col..n {
            a[row][j] *= inv;
        }
        for r in 0..m {
            if r != row {
                let factor = a[r][col];
                if factor.norm() > 0.0 {
                    for j in col..n {
                        let sub = factor * a[row][j];
                        a[r][j] -= sub;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Numerical rank by Gaussian elimination with pivot threshold `tol * scale`.
pub fn rank(a: &Mat, tol: f64) -> usize {
    let mut work = a.clone();
    row_echelon(&mut work, tol).len()
}

/// Basis of the right null space { x : A x = 0 }, one vector per free column.
pub fn nullspace(a: &Mat, tol: f64) -> Vec<Vec<C>> {
    let n = ncols(a);
    let mut work = a.clone();
    let pivots = row_echelon(&mut work, tol);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![C::new(0.0, 0.0); n];
        v[fc] = C::new(1.0, 0.0);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[r][fc];
        }
        basis.push(v);
    }
    basis
}

/// Solve the least-squares problem min ||A x - b|| via the normal equations.
/// Requires A to have full column rank; returns None when elimination breaks down.
pub fn lstsq(a: &Mat, b: &[C], tol: f64) -> Option<Vec<C>> {
    let (m, n) = (nrows(a), ncols(a));
    assert_eq!(m, b.len());
    // G = A^H A, rhs = A^H b
    let mut aug: Mat = vec![vec![C::new(0.0, 0.0); n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = C::new(0.0, 0.0);
            for r in 0..m {
                s += a[r][i].conj() * a[r][j];
            }
            aug[i][j] = s;
        }
        let mut s = C::new(0.0, 0.0);
        for r in 0..m {
            s += a[r][i].conj() * b[r];
        }
        aug[i][n] = s;
    }
    let pivots = row_echelon(&mut aug, tol);
    if pivots.len() < n {
        return None;
    }
    Some((0..n).map(|i| aug[i][n]).collect())
}

/// Matrix-vector product.
pub fn matvec(a: &Mat, x: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(aij, xj)| aij * xj).sum())
        .collect()
}

/// Inner product, linear in the first argument: sum_i x_i * conj(y_i).
pub fn inner(x: &[C], y: &[C]) -> C {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(x: &[C]) -> f64 {
    inner(x, x).re.sqrt()
}

/// Adjoint of a linear relation given by graph basis vectors in C^{2n},
/// solved directly from the defining identity <g,x> = <y,f>: the pair
/// (y,g) must annihilate every row [-conj(f_i) | conj(x_i)].
pub fn adjoint_by_definition(graph_vectors: &[Vec<C>], n: usize, tol: f64) -> Vec<Vec<C>> {
    let mut constraints: Mat = Vec::with_capacity(graph_vectors.len());
    for v in graph_vectors {
        assert_eq!(v.len(), 2 * n);
        let mut row = Vec::with_capacity(2 * n);
        for j in 0..n {
            row.push(-v[n + j].conj());
        }
        for j in 0..n {
            row.push(v[j].conj());
        }
        constraints.push(row);
    }
    if constraints.is_empty() {
        // adjoint of the zero relation is all of C^{2n}
        return (0..2 * n)
            .map(|i| {
                let mut e = vec![C::new(0.0, 0.0); 2 * n];
                e[i] = C::new(1.0, 0.0);
                e
            })
            .collect();
    }
    nullspace(&constraints, tol)
}

/// Singular values of a 2-column matrix in closed form (largest first),
/// from the eigenvalues of the 2x2 Gram matrix.
pub fn singular_values_two_cols(a: &Mat) -> (f64, f64) {
    assert_eq!(ncols(a), 2);
    let m = nrows(a);
    let mut g = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = C::new(0.0, 0.0);
            for r in 0..m {
                s += a[r][i].conj() * a[r][j];
            }
            g[i][j] = s;
        }
    }
    let tr = g[0][0].re + g[1][1].re;
    let det = (g[0][0] * g[1][1] - g[0][1] * g[1][0]).re;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let l1 = (tr / 2.0 + disc).max(0.0);
    let l2 = (tr / 2.0 - disc).max(0.0);
    (l1.sqrt(), l2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn rank_of_colinear_vectors() {
        let a = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ];
        assert_eq!(rank(&a, 1e-10), 1);
    }

    #[test]
    fn nullspace_annihilates() {
        let a = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.5)],
            vec![c(0.0, 1.0), c(1.0, 0.0), c(-1.0, 0.0)],
        ];
        let ns = nullspace(&a, 1e-12);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for r in matvec(&a, v) {
                assert!(r.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn lstsq_exact_system() {
        let a = vec![vec![c(2.0, 0.0)], vec![c(0.0, 0.0)]];
        let x = lstsq(&a, &[c(4.0, 2.0), c(0.0, 0.0)], 1e-12).unwrap();
        assert!((x[0] - c(2.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn adjoint_of_nilpotent_matrix_graph() {
        // graph of [[0,1],[0,0]] has basis (e1; 0), (e2; e1)
        let g = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ];
        let adj = adjoint_by_definition(&g, 2, 1e-12);
        assert_eq!(adj.len(), 2);
        // adjoint must be the graph of [[0,0],[1,0]]: pairs (y; A^H y)
        for v in &adj {
            let (y1, y2, g1, g2) = (v[0], v[1], v[2], v[3]);
            assert!((g1 - c(0.0, 0.0) * y1).norm() < 1e-12);
            assert!((g2 - y1).norm() < 1e-12, "g2={g2} y1={y1} y2={y2}");
        }
    }

    #[test]
    fn two_column_singular_values_match_hand_value() {
        let a = vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1e-14, 0.0)],
        ];
        let (s1, s2) = singular_values_two_cols(&a);
        assert!((s1 - std::f64::consts::SQRT_2).abs() < 1e-6);
        assert!(s2 < 1e-10 * s1);
    }
}
