//! Seeded construction of self-adjoint relations, Hermitian relations and
//! relatively bounded Hermitian perturbations.
//!
//! Hermitian instances are built as subspaces of self-adjoint relations,
//! which guarantees T contained in T* exactly by construction instead of
//! symmetrizing after the fact. Perturbations are built on D(T) and rescaled
//! against the pure relative bound so the witness pair (a, b) is known.

use super::{HarnessError, InstanceSpec};
use crate::bounds::pure_relative_bound;
use crate::quotient::SingleValuedPart;
use crate::relation::Relation;
use crate::subspace::{Matrix, Scalar, SetRelation, Subspace, Vector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// A generated perturbation together with its verified witness pair:
/// |S(x)| <= witness_a |x| + witness_b |T(x)| on D(T).
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub relation: Relation,
    pub witness_a: f64,
    pub witness_b: f64,
}

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        Scalar::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub(crate) fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let z = random_matrix(rng, dim, dim);
    (&z + z.adjoint()).scale(0.5)
}

/// Hermitian matrix with eigenvalues of modulus in [floor, floor + 2],
/// random signs: a spectral gap away from zero.
pub(crate) fn random_hermitian_with_gap(rng: &mut ChaCha8Rng, dim: usize, floor: f64) -> Matrix {
    if dim == 0 {
        return Matrix::zeros(0, 0);
    }
    let q = random_matrix(rng, dim, dim).qr().q();
    let eigs = Vector::from_fn(dim, |_, _| {
        let magnitude = floor + 2.0 * rng.random::<f64>();
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        Scalar::new(sign * magnitude, 0.0)
    });
    &q * Matrix::from_diagonal(&eigs) * q.adjoint()
}

/// Random subspace of C^m of exact dimension d.
pub(crate) fn random_subspace(
    rng: &mut ChaCha8Rng,
    m: usize,
    d: usize,
    tol: crate::tol::TolerancePolicy,
) -> Result<Subspace, HarnessError> {
    if d > m {
        return Err(HarnessError::InvalidSpec(format!(
            "subspace dimension {d} exceeds ambient {m}"
        )));
    }
    if d == 0 {
        return Ok(Subspace::zero(m, tol));
    }
    for _ in 0..8 {
        let candidate = Subspace::span_of_columns(&random_matrix(rng, m, d), tol)
            .map_err(|e| HarnessError::Generation(e.to_string()))?;
        if candidate.dim() == d {
            return Ok(candidate);
        }
    }
    Err(HarnessError::Generation(format!(
        "random {d}-dim subspace of C^{m} kept collapsing"
    )))
}

fn pairs_from_blocks(x_cols: &Matrix, f_cols: &Matrix) -> Vec<(Vector, Vector)> {
    (0..x_cols.ncols())
        .map(|j| (x_cols.column(j).into_owned(), f_cols.column(j).into_owned()))
        .collect()
}

fn mul_pairs(mul: &Subspace) -> Vec<(Vector, Vector)> {
    let n = mul.ambient_dim();
    mul.basis()
        .column_iter()
        .map(|m| (Vector::zeros(n), m.into_owned()))
        .collect()
}

/// Self-adjoint relation T = { (x, Ax + m) : x in M-perp, m in M } with a
/// random multivalued part M of dim `dim_mul` and a random Hermitian A on
/// M-perp.
pub fn gen_self_adjoint(spec: &InstanceSpec) -> Result<Relation, HarnessError> {
    gen_self_adjoint_inner(spec, None)
}

/// Same construction, with the operator part's spectrum kept a distance
/// `floor` away from zero so the relation satisfies a lower bound
/// |T(x)| >= floor |x|.
pub(crate) fn gen_self_adjoint_with_gap(
    spec: &InstanceSpec,
    floor: f64,
) -> Result<Relation, HarnessError> {
    gen_self_adjoint_inner(spec, Some(floor))
}

fn gen_self_adjoint_inner(spec: &InstanceSpec, gap: Option<f64>) -> Result<Relation, HarnessError> {
    let n = spec.n;
    if n == 0 {
        return Err(HarnessError::InvalidSpec("n must be at least 1".into()));
    }
    if spec.dim_mul > n {
        return Err(HarnessError::InvalidSpec(format!(
            "dim_mul {} exceeds n {}",
            spec.dim_mul, n
        )));
    }
    let mut rng = rng_for(spec.seed);
    let mul = random_subspace(&mut rng, n, spec.dim_mul, spec.tol)?;
    let dom = mul.complement();
    let k = dom.dim();
    let h = match gap {
        Some(floor) => random_hermitian_with_gap(&mut rng, k, floor),
        None => random_hermitian(&mut rng, k),
    };
    let w = dom.basis();
    let mut pairs = pairs_from_blocks(&w.clone_owned(), &(w * &h));
    pairs.extend(mul_pairs(&mul));
    let t = Relation::from_pairs(n, &pairs, spec.tol)?;
    if !t.is_self_adjoint() {
        return Err(HarnessError::Generation(format!(
            "self-adjoint construction failed its own predicate (seed {})",
            spec.seed
        )));
    }
    Ok(t)
}

/// Hermitian relation of graph dimension `dim_dom + dim_mul`: a random
/// subspace of a self-adjoint relation's graph containing {0} x M. Any
/// subspace of a self-adjoint relation is Hermitian.
pub fn gen_hermitian(spec: &InstanceSpec) -> Result<Relation, HarnessError> {
    gen_hermitian_inner(spec, None)
}

pub(crate) fn gen_hermitian_with_gap(
    spec: &InstanceSpec,
    floor: f64,
) -> Result<Relation, HarnessError> {
    gen_hermitian_inner(spec, Some(floor))
}

fn gen_hermitian_inner(spec: &InstanceSpec, gap: Option<f64>) -> Result<Relation, HarnessError> {
    let n = spec.n;
    if n == 0 {
        return Err(HarnessError::InvalidSpec("n must be at least 1".into()));
    }
    if spec.dim_dom + spec.dim_mul > n {
        return Err(HarnessError::InvalidSpec(format!(
            "dim_dom {} + dim_mul {} exceeds n {}",
            spec.dim_dom, spec.dim_mul, n
        )));
    }
    let mut rng = rng_for(spec.seed);
    let mul = random_subspace(&mut rng, n, spec.dim_mul, spec.tol)?;
    let dom_full = mul.complement();
    let k = dom_full.dim();
    let h = match gap {
        Some(floor) => random_hermitian_with_gap(&mut rng, k, floor),
        None => random_hermitian(&mut rng, k),
    };
    // random dim_dom-dimensional slice of the operator part
    let coeffs = random_matrix(&mut rng, k, spec.dim_dom);
    let w = dom_full.basis();
    let x_cols = w * &coeffs;
    let f_cols = w * (&h * &coeffs);
    let mut pairs = pairs_from_blocks(&x_cols, &f_cols);
    pairs.extend(mul_pairs(&mul));
    let t = Relation::from_pairs(n, &pairs, spec.tol)?;
    if !t.is_hermitian() {
        return Err(HarnessError::Generation(format!(
            "Hermitian construction failed its own predicate (seed {})",
            spec.seed
        )));
    }
    if t.dim() != spec.dim_dom + spec.dim_mul {
        return Err(HarnessError::Generation(format!(
            "Hermitian construction collapsed to dim {} (wanted {}+{})",
            t.dim(),
            spec.dim_dom,
            spec.dim_mul
        )));
    }
    Ok(t)
}

/// How the multivalued part of a generated perturbation is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum MulChoice {
    /// Inside T(0): makes S(0) subset of T(0) true by construction.
    InsideMulOf,
    /// Anywhere in D(S)-perp: containment in T(0) is then a consequence of
    /// the surrounding hypotheses, not of the construction.
    Free,
}

/// Hermitian perturbation S with D(S) containing D(T), rescaled so the
/// witness pair satisfies witness_b = spec.perturbation_target_b.
///
/// When T has no kernel directions the pure bound is finite and scaling
/// makes (0, target_b) an exact witness; otherwise |S(x)| <= a |x| with
/// a = |S on D(T)| is used as the witness and b keeps the target value.
pub fn gen_perturbation(t: &Relation, spec: &InstanceSpec) -> Result<Perturbation, HarnessError> {
    gen_perturbation_inner(t, spec, MulChoice::InsideMulOf)
}

pub(crate) fn gen_perturbation_inner(
    t: &Relation,
    spec: &InstanceSpec,
    mul_choice: MulChoice,
) -> Result<Perturbation, HarnessError> {
    let target_b = spec.perturbation_target_b;
    if !(0.0..1.0).contains(&target_b) {
        return Err(HarnessError::InvalidSpec(format!(
            "perturbation target b must lie in [0, 1), got {target_b}"
        )));
    }
    let n = t.space_dim();
    let tol = spec.tol;
    let mut rng = rng_for(spec.seed ^ 0x9e37_79b9_7f4a_7c15);
    let parts = t.components();

    // domain of S: D(T), possibly extended by one direction orthogonal to it
    let extension_room = parts.domain.complement();
    let extend = !extension_room.is_zero() && rng.random::<bool>();
    let dom_s = if extend {
        let extra = extension_room.basis() * random_matrix(&mut rng, extension_room.dim(), 1);
        let mut cols: Vec<Vector> = parts
            .domain
            .basis()
            .column_iter()
            .map(|c| c.into_owned())
            .collect();
        cols.push(extra.column(0).into_owned());
        Subspace::orthonormalize(n, &cols, tol)
            .map_err(|e| HarnessError::Generation(e.to_string()))?
    } else {
        parts.domain.clone()
    };

    // Hermitian S requires D(S) orthogonal to S(0); pick the multivalued
    // part accordingly
    let mul_room = match mul_choice {
        MulChoice::InsideMulOf => parts.mul_part.intersect(&dom_s.complement()),
        MulChoice::Free => Ok(dom_s.complement()),
    }
    .map_err(|e| HarnessError::Generation(e.to_string()))?;
    let mul_dim = if mul_room.is_zero() {
        0
    } else {
        rng.random_range(0..=mul_room.dim())
    };
    let mul_s = if mul_dim == 0 {
        Subspace::zero(n, tol)
    } else {
        let picked = mul_room.basis() * random_matrix(&mut rng, mul_room.dim(), mul_dim);
        Subspace::span_of_columns(&picked, tol)
            .map_err(|e| HarnessError::Generation(e.to_string()))?
    };

    let k = dom_s.dim();
    let hb = random_hermitian(&mut rng, k);
    let v = dom_s.basis();
    let mut pairs = pairs_from_blocks(&v.clone_owned(), &(v * &hb));
    pairs.extend(mul_pairs(&mul_s));
    let s0 = Relation::from_pairs(n, &pairs, tol)?;
    if !s0.is_hermitian() {
        return Err(HarnessError::Generation(format!(
            "perturbation construction failed Hermitian predicate (seed {})",
            spec.seed
        )));
    }

    let (relation, witness_a, witness_b) = scale_to_witness(&s0, t, &parts.domain, target_b)?;
    debug_assert!(relation.is_hermitian());
    if mul_choice == MulChoice::InsideMulOf {
        let contained = matches!(
            relation
                .components()
                .mul_part
                .compare(&parts.mul_part)
                .expect("same ambient")
                .relation,
            SetRelation::Equal | SetRelation::LeftInRight
        );
        if !contained {
            return Err(HarnessError::Generation(format!(
                "perturbation multivalued part escaped T(0) (seed {})",
                spec.seed
            )));
        }
    }
    Ok(Perturbation {
        relation,
        witness_a,
        witness_b,
    })
}

fn scale_to_witness(
    s0: &Relation,
    t: &Relation,
    dom_t: &Subspace,
    target_b: f64,
) -> Result<(Relation, f64, f64), HarnessError> {
    let beta = pure_relative_bound(s0, t)?;
    if target_b > 0.0 && beta.is_finite() && beta > 1e-8 {
        let scaled = s0.scalar_mul(Scalar::new(target_b / beta, 0.0));
        return Ok((scaled, 0.0, target_b));
    }
    if beta <= 1e-8 {
        // S vanishes on D(T): (0, target_b) is a witness as it stands
        return Ok((s0.clone(), 0.0, target_b));
    }
    // kernel directions of T force the a-term: use the operator norm of S
    // restricted to D(T) as the a-witness
    let ms = SingleValuedPart::on_domain(s0, dom_t)?;
    Ok((s0.clone(), ms.operator_norm(), target_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deficiency::deficiency_pair;
    use crate::tol::TolerancePolicy;

    fn spec(n: usize, dim_mul: usize, dim_dom: usize, seed: u64) -> InstanceSpec {
        InstanceSpec {
            n,
            dim_mul,
            dim_dom,
            seed,
            perturbation_target_b: 0.5,
            tol: TolerancePolicy::default(),
        }
    }

    #[test]
    fn self_adjoint_without_mul_is_operator_graph() {
        let t = gen_self_adjoint(&spec(3, 0, 3, 1)).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.components().mul_part.dim(), 0);
        assert!(t.is_self_adjoint());
    }

    #[test]
    fn self_adjoint_with_full_mul_is_zero_times_space() {
        let t = gen_self_adjoint(&spec(2, 2, 0, 5)).unwrap();
        assert_eq!(t.components().domain.dim(), 0);
        assert_eq!(t.components().mul_part.dim(), 2);
        assert!(t.is_self_adjoint());
    }

    #[test]
    fn self_adjoint_mixed_case_has_zero_deficiency() {
        let t = gen_self_adjoint(&spec(3, 1, 2, 42)).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(deficiency_pair(&t).unwrap(), (0, 0));
    }

    #[test]
    fn hermitian_slice_has_requested_dims_and_deficiency() {
        let t = gen_hermitian(&spec(3, 0, 1, 9)).unwrap();
        assert!(t.is_hermitian());
        assert_eq!(t.dim(), 1);
        assert_eq!(deficiency_pair(&t).unwrap(), (2, 2));
    }

    #[test]
    fn hermitian_full_slice_is_self_adjoint() {
        let t = gen_hermitian(&spec(3, 1, 2, 17)).unwrap();
        assert!(t.is_self_adjoint());
    }

    #[test]
    fn generators_reject_bad_dims() {
        assert!(gen_self_adjoint(&spec(2, 3, 0, 0)).is_err());
        assert!(gen_hermitian(&spec(2, 1, 2, 0)).is_err());
    }

    #[test]
    fn perturbation_hits_pure_witness() {
        let t = gen_self_adjoint_with_gap(&spec(4, 1, 3, 23), 0.5).unwrap();
        let p = gen_perturbation(&t, &spec(4, 1, 3, 23)).unwrap();
        assert!(p.relation.is_hermitian());
        assert_eq!(p.witness_a, 0.0);
        assert!((p.witness_b - 0.5).abs() < 1e-12);
        let beta = pure_relative_bound(&p.relation, &t).unwrap();
        assert!((beta - 0.5).abs() < 1e-8, "pure bound {beta}");
    }

    #[test]
    fn half_copy_of_relation_has_pure_bound_half() {
        let t = gen_self_adjoint(&spec(3, 1, 2, 31)).unwrap();
        let s = t.scalar_mul(Scalar::new(0.5, 0.0));
        let beta = pure_relative_bound(&s, &t).unwrap();
        assert!((beta - 0.5).abs() < 1e-9);
    }

    #[test]
    fn perturbation_target_zero_gives_bounded_witness() {
        let t = gen_self_adjoint(&spec(3, 1, 2, 77)).unwrap();
        let mut sp = spec(3, 1, 2, 77);
        sp.perturbation_target_b = 0.0;
        let p = gen_perturbation(&t, &sp).unwrap();
        assert_eq!(p.witness_b, 0.0);
        assert!(p.witness_a >= 0.0);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_hermitian(&spec(4, 1, 2, 1234)).unwrap();
        let b = gen_hermitian(&spec(4, 1, 2, 1234)).unwrap();
        assert_eq!(
            a.graph().compare(b.graph()).unwrap().relation,
            SetRelation::Equal
        );
        assert_eq!(a.graph().basis(), b.graph().basis());
    }
}
