//! Shared helpers for the integration test suites.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use relcalc::{Relation, Subspace, TolerancePolicy};

pub type C = Complex<f64>;
pub type Mat = DMatrix<C>;
pub type Vec_ = DVector<C>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        C::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec_ {
    Vec_::from_fn(len, |_, _| {
        C::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random subspace of C^m with dimension exactly d (resampling on the
/// measure-zero collapses).
pub fn random_subspace(rng: &mut ChaCha8Rng, m: usize, d: usize) -> Subspace {
    assert!(d <= m);
    if d == 0 {
        return Subspace::zero(m, tol());
    }
    loop {
        let s = Subspace::span_of_columns(&random_matrix(rng, m, d), tol()).unwrap();
        if s.dim() == d {
            return s;
        }
    }
}

/// Relation with a random graph of dimension d inside C^{2n}.
pub fn random_relation(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Relation {
    Relation::from_graph(n, random_subspace(rng, 2 * n, d)).unwrap()
}

/// Relation { (x, Bx + m) } with the given domain and multivalued part
/// spans; B is a random map from the domain into C^n.
pub fn random_relation_on(rng: &mut ChaCha8Rng, domain: &Subspace, mul: &Subspace) -> Relation {
    let n = domain.ambient_dim();
    let k = domain.dim();
    let map = random_matrix(rng, n, k);
    let mut pairs: Vec<(Vec_, Vec_)> = (0..k)
        .map(|j| {
            (
                domain.basis().column(j).into_owned(),
                map.column(j).into_owned(),
            )
        })
        .collect();
    for m in mul.basis().column_iter() {
        pairs.push((Vec_::zeros(n), m.into_owned()));
    }
    Relation::from_pairs(n, &pairs, tol()).unwrap()
}

/// Convert a nalgebra matrix into the row-major format of the oracle crate.
pub fn to_oracle(mat: &Mat) -> Vec<Vec<relcalc_oracles::C>> {
    (0..mat.nrows())
        .map(|i| {
            (0..mat.ncols())
                .map(|j| relcalc_oracles::C::new(mat[(i, j)].re, mat[(i, j)].im))
                .collect()
        })
        .collect()
}

/// Graph basis vectors of a relation as oracle-format rows of length 2n.
pub fn graph_rows(rel: &Relation) -> Vec<Vec<relcalc_oracles::C>> {
    rel.graph()
        .basis()
        .column_iter()
        .map(|col| {
            col.iter()
                .map(|z| relcalc_oracles::C::new(z.re, z.im))
                .collect()
        })
        .collect()
}
