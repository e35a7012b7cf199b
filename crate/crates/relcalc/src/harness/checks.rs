//! Executable checkers: each one verifies the hypotheses of a statement
//! computationally and then asserts its conclusion at a pinned tolerance.
//!
//! A checker returns [`CheckOutcome::Inapplicable`] when the hypotheses fail
//! (the statement says nothing about the instance) and
//! [`CheckOutcome::Fail`] only when verified hypotheses lead to a violated
//! conclusion.

use crate::bounds::{pure_relative_bound, BoundError};
use crate::deficiency::{deficiency_pair, lower_bound_constant};
use crate::quotient::SingleValuedPart;
use crate::relation::Relation;
use crate::subspace::{Scalar, SetRelation, Subspace, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::generate::rng_for;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    /// Verified hypotheses, violated conclusion.
    Fail(String),
    /// Hypotheses not satisfied; the statement makes no claim.
    Inapplicable(String),
}

impl CheckOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

/// Pinned numerical tolerances for all checkers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckTolerances {
    /// Relative tolerance for the norm identity |T(x)| = d(f, T(0)).
    pub norm_identity_rel: f64,
    /// Relative tolerance for the shifted-norm identity
    /// |(T-zI)x|^2 = |(T-aI)x|^2 + b^2 |x|^2.
    pub shift_identity_rel: f64,
    /// Additive slack for sampled witness inequalities.
    pub witness_slack: f64,
    /// Additive slack when comparing lower-bound constants.
    pub lower_bound_slack: f64,
    /// Additive slack for the bound-conversion inequalities.
    pub conversion_slack: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            norm_identity_rel: 1e-10,
            shift_identity_rel: 1e-10,
            witness_slack: 1e-9,
            lower_bound_slack: 1e-8,
            conversion_slack: 1e-9,
        }
    }
}

impl CheckTolerances {
    pub fn as_pairs(&self) -> Vec<(String, f64)> {
        vec![
            ("norm_identity_rel".into(), self.norm_identity_rel),
            ("shift_identity_rel".into(), self.shift_identity_rel),
            ("witness_slack".into(), self.witness_slack),
            ("lower_bound_slack".into(), self.lower_bound_slack),
            ("conversion_slack".into(), self.conversion_slack),
        ]
    }
}

fn is_subset(inner: &Subspace, outer: &Subspace) -> bool {
    matches!(
        inner.compare(outer).expect("same ambient").relation,
        SetRelation::Equal | SetRelation::LeftInRight
    )
}

fn range_defect(t: &Relation) -> usize {
    t.space_dim() - t.components().range.dim()
}

fn random_domain_vector(domain: &Subspace, rng: &mut ChaCha8Rng) -> Vector {
    let k = domain.dim();
    let coeffs = Vector::from_fn(k, |_, _| {
        Scalar::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    domain.basis() * coeffs
}

/// Stability of the lower bound and of the range codimension under a pure
/// relative perturbation: given |T(x)| >= c |x| and |S(x)| <= b |T(x)| with
/// b < 1, D(T) in D(S), S(0) in T(0), the sum satisfies
/// |（T+S)(x)| >= (1-b) c |x| and dim R(T+S)-perp = dim R(T)-perp.
pub fn check_lemma_3_1(
    t: &Relation,
    s: &Relation,
    c: f64,
    b: f64,
    tol: &CheckTolerances,
) -> CheckOutcome {
    if !(c > 0.0 && c.is_finite()) {
        return CheckOutcome::Inapplicable(format!("hypothesis needs c > 0, got {c}"));
    }
    if !(0.0..1.0).contains(&b) {
        return CheckOutcome::Inapplicable(format!("hypothesis needs 0 <= b < 1, got {b}"));
    }
    let c_actual = lower_bound_constant(t);
    if c_actual < c - tol.lower_bound_slack {
        return CheckOutcome::Inapplicable(format!(
            "T violates the lower bound: smallest gain {c_actual} < c = {c}"
        ));
    }
    let beta = match pure_relative_bound(s, t) {
        Ok(beta) => beta,
        Err(BoundError::DomainNotContained) => {
            return CheckOutcome::Inapplicable("D(T) not contained in D(S)".into())
        }
        Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
    };
    if beta > b + tol.witness_slack {
        return CheckOutcome::Inapplicable(format!(
            "pure relative bound {beta} exceeds hypothesis b = {b}"
        ));
    }
    if !is_subset(&s.components().mul_part, &t.components().mul_part) {
        return CheckOutcome::Inapplicable("S(0) not contained in T(0)".into());
    }

    let sum = match t.op_sum(s) {
        Ok(sum) => sum,
        Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
    };
    let c1 = lower_bound_constant(&sum);
    let required = (1.0 - b) * c - tol.lower_bound_slack;
    if c1 < required || c1.is_nan() {
        return CheckOutcome::Fail(format!(
            "lower bound of T+S is {c1}, below (1-b)c = {}",
            (1.0 - b) * c
        ));
    }
    let (dt, dsum) = (range_defect(t), range_defect(&sum));
    if dt != dsum {
        return CheckOutcome::Fail(format!(
            "range codimension changed: dim R(T)-perp = {dt}, dim R(T+S)-perp = {dsum}"
        ));
    }
    CheckOutcome::Pass
}

/// Same conclusions via the bounded-perturbation hypothesis
/// |S(x)| <= a |x| with 0 <= a < c, which forces the pure bound b = a/c < 1.
pub fn check_corollary_3_1(
    t: &Relation,
    s: &Relation,
    c: f64,
    a: f64,
    tol: &CheckTolerances,
) -> CheckOutcome {
    if !(c > 0.0 && c.is_finite()) {
        return CheckOutcome::Inapplicable(format!("hypothesis needs c > 0, got {c}"));
    }
    if !(0.0 <= a && a < c) {
        return CheckOutcome::Inapplicable(format!("hypothesis needs 0 <= a < c, got a = {a}"));
    }
    let dom_t = t.components().domain;
    let ms = match SingleValuedPart::on_domain(s, &dom_t) {
        Ok(ms) => ms,
        Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
    };
    let s_norm = ms.operator_norm();
    if s_norm > a + tol.witness_slack {
        return CheckOutcome::Inapplicable(format!(
            "|S| on D(T) is {s_norm}, above the hypothesis a = {a}"
        ));
    }
    check_lemma_3_1(t, s, c, a / c, tol)
}

/// The shifted-norm identity of Hermitian relations:
/// |(T - zI)(x)|^2 = |(T - Re(z) I)(x)|^2 + Im(z)^2 |x|^2 on D(T).
pub fn check_lemma_3_2(
    t: &Relation,
    z_samples: &[Scalar],
    x_per_z: usize,
    seed: u64,
    tol: &CheckTolerances,
) -> CheckOutcome {
    if !t.is_hermitian() {
        return CheckOutcome::Inapplicable("relation is not Hermitian".into());
    }
    let domain = t.components().domain;
    if domain.is_zero() {
        return CheckOutcome::Pass;
    }
    let mut rng = rng_for(seed);
    for &z in z_samples {
        let (re, im) = (z.re, z.im);
        let shifted_z = t.shift(z);
        let shifted_re = t.shift(Scalar::new(re, 0.0));
        let svp_z = SingleValuedPart::of(&shifted_z);
        let svp_re = SingleValuedPart::of(&shifted_re);
        for _ in 0..x_per_z {
            let x = random_domain_vector(&domain, &mut rng);
            let lhs = match svp_z.norm_at(&x) {
                Ok(v) => v * v,
                Err(e) => return CheckOutcome::Fail(format!("norm evaluation failed: {e}")),
            };
            let rhs = match svp_re.norm_at(&x) {
                Ok(v) => v * v + im * im * x.norm_squared(),
                Err(e) => return CheckOutcome::Fail(format!("norm evaluation failed: {e}")),
            };
            let scale = lhs.max(rhs).max(1.0);
            if (lhs - rhs).abs() > tol.shift_identity_rel * scale {
                return CheckOutcome::Fail(format!(
                    "identity violated at z = {re}+{im}i: lhs = {lhs}, rhs = {rhs}"
                ));
            }
        }
    }
    CheckOutcome::Pass
}

/// Which conclusions of the perturbation theorem to assert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityConclusions {
    /// Deficiency indices are preserved.
    DeficiencyOnly,
    /// Deficiency indices are preserved and T+S is self-adjoint exactly
    /// when T is.
    Full,
}

/// Stability of deficiency indices and of self-adjointness of Hermitian
/// relations under a relatively bounded Hermitian perturbation with witness
/// |S(x)| <= a |x| + b |T(x)|, b < 1.
///
/// Also re-derives the proof-internal route when b > 0: with
/// eps = (1/b^2 - 1)/2 and gamma = a/(b sqrt(eps)), sampled vectors must
/// satisfy |S(x)| <= sqrt(1+eps) b |(T -+ i gamma I)(x)|.
pub fn check_theorem_3_1(
    t: &Relation,
    s: &Relation,
    witness_a: f64,
    witness_b: f64,
    seed: u64,
    conclusions: StabilityConclusions,
    tol: &CheckTolerances,
) -> CheckOutcome {
    if !t.is_hermitian() {
        return CheckOutcome::Inapplicable("T is not Hermitian".into());
    }
    if !s.is_hermitian() {
        return CheckOutcome::Inapplicable("S is not Hermitian".into());
    }
    if !(witness_a >= 0.0 && witness_a.is_finite()) || !(0.0..1.0).contains(&witness_b) {
        return CheckOutcome::Inapplicable(format!(
            "witness pair must have a >= 0 and 0 <= b < 1, got ({witness_a}, {witness_b})"
        ));
    }
    let parts_t = t.components();
    let parts_s = s.components();
    if !is_subset(&parts_t.domain, &parts_s.domain) {
        return CheckOutcome::Inapplicable("D(T) not contained in D(S)".into());
    }
    if !is_subset(&parts_s.mul_part, &parts_t.mul_part) {
        return CheckOutcome::Inapplicable("S(0) not contained in T(0)".into());
    }

    // verify the witness on sampled domain vectors
    let mut rng = rng_for(seed);
    let svp_t = SingleValuedPart::of(t);
    let svp_s = match SingleValuedPart::on_domain(s, &parts_t.domain) {
        Ok(svp) => svp,
        Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
    };
    let witness_samples = 64;
    let mut samples = Vec::with_capacity(witness_samples);
    if !parts_t.domain.is_zero() {
        for _ in 0..witness_samples {
            samples.push(random_domain_vector(&parts_t.domain, &mut rng));
        }
    }
    for x in &samples {
        let (ns, nt) = match (svp_s.norm_at(x), svp_t.norm_at(x)) {
            (Ok(ns), Ok(nt)) => (ns, nt),
            _ => return CheckOutcome::Inapplicable("norm evaluation failed on a sample".into()),
        };
        let bound = witness_a * x.norm() + witness_b * nt;
        if ns > bound + tol.witness_slack * bound.max(1.0) {
            return CheckOutcome::Inapplicable(format!(
                "witness ({witness_a}, {witness_b}) fails on a sample: |Sx| = {ns} > {bound}"
            ));
        }
    }

    let sum = match t.op_sum(s) {
        Ok(sum) => sum,
        Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
    };
    if !sum.is_hermitian() {
        return CheckOutcome::Fail("T+S lost the Hermitian property".into());
    }
    let d_t = match deficiency_pair(t) {
        Ok(d) => d,
        Err(e) => return CheckOutcome::Fail(format!("deficiency of T: {e}")),
    };
    let d_sum = match deficiency_pair(&sum) {
        Ok(d) => d,
        Err(e) => return CheckOutcome::Fail(format!("deficiency of T+S: {e}")),
    };
    if d_t != d_sum {
        return CheckOutcome::Fail(format!("deficiency indices changed: {d_t:?} vs {d_sum:?}"));
    }
    if conclusions == StabilityConclusions::Full {
        let (sa_t, sa_sum) = (t.is_self_adjoint(), sum.is_self_adjoint());
        if sa_t != sa_sum {
            return CheckOutcome::Fail(format!(
                "self-adjointness not preserved: T {sa_t}, T+S {sa_sum}"
            ));
        }
    }

    // proof-internal inequality via the rotated lower bound
    if witness_b > 0.0 {
        let eps = (1.0 / (witness_b * witness_b) - 1.0) / 2.0;
        let factor = (1.0 + eps).sqrt() * witness_b;
        if factor >= 1.0 || factor.is_nan() {
            return CheckOutcome::Fail(format!(
                "epsilon choice failed: sqrt(1+eps) b = {factor} is not below 1"
            ));
        }
        let gamma = witness_a / (witness_b * eps.sqrt());
        for sign in [1.0, -1.0] {
            // T + i sign gamma I = shift by -i sign gamma
            let rotated = t.shift(Scalar::new(0.0, -sign * gamma));
            let svp_rot = SingleValuedPart::of(&rotated);
            for x in &samples {
                let (ns, nrot) = match (svp_s.norm_at(x), svp_rot.norm_at(x)) {
                    (Ok(ns), Ok(nrot)) => (ns, nrot),
                    _ => {
                        return CheckOutcome::Fail(
                            "norm evaluation failed on a rotated sample".into(),
                        )
                    }
                };
                let bound = factor * nrot;
                if ns > bound + tol.witness_slack * bound.max(1.0) {
                    return CheckOutcome::Fail(format!(
                        "rotated witness fails: |Sx| = {ns} > sqrt(1+eps) b |(T{}i y I)x| = {bound}",
                        if sign > 0.0 { "+" } else { "-" }
                    ));
                }
            }
        }
    }
    CheckOutcome::Pass
}

/// Containment of multivalued parts: for self-adjoint T and Hermitian S
/// with D(T) in D(S), the multivalued part of S lies inside that of T.
pub fn check_lemma_2_5(t: &Relation, s: &Relation) -> CheckOutcome {
    if !t.is_self_adjoint() {
        return CheckOutcome::Inapplicable("T is not self-adjoint".into());
    }
    if !s.is_hermitian() {
        return CheckOutcome::Inapplicable("S is not Hermitian".into());
    }
    let parts_t = t.components();
    let parts_s = s.components();
    if !is_subset(&parts_t.domain, &parts_s.domain) {
        return CheckOutcome::Inapplicable("D(T) not contained in D(S)".into());
    }
    if !is_subset(&parts_s.mul_part, &parts_t.mul_part) {
        return CheckOutcome::Fail(format!(
            "S(0) (dim {}) escapes T(0) (dim {})",
            parts_s.mul_part.dim(),
            parts_t.mul_part.dim()
        ));
    }
    CheckOutcome::Pass
}

/// Self-adjointness of T+S for self-adjoint T and T-bounded Hermitian S with
/// bound below 1 and D(T) in D(S); the containment S(0) in T(0) is not
/// assumed but derived first.
pub fn check_corollary_3_2(
    t: &Relation,
    s: &Relation,
    witness_a: f64,
    witness_b: f64,
    seed: u64,
    tol: &CheckTolerances,
) -> CheckOutcome {
    match check_lemma_2_5(t, s) {
        CheckOutcome::Pass => {}
        other => return other,
    }
    match check_theorem_3_1(
        t,
        s,
        witness_a,
        witness_b,
        seed,
        StabilityConclusions::Full,
        tol,
    ) {
        CheckOutcome::Pass => {}
        other => return other,
    }
    // T is self-adjoint, so the equivalence specializes to: T+S self-adjoint
    let sum = match t.op_sum(s) {
        Ok(sum) => sum,
        Err(e) => return CheckOutcome::Inapplicable(e.to_string()),
    };
    if !sum.is_self_adjoint() {
        return CheckOutcome::Fail("T+S is not self-adjoint".into());
    }
    CheckOutcome::Pass
}

/// Full-range criterion: a Hermitian relation with R(T - lambda I) =
/// R(T - conj(lambda) I) = X for some nonreal lambda is self-adjoint.
pub fn check_lemma_2_4(t: &Relation, lambda_samples: &[Scalar]) -> CheckOutcome {
    if !t.is_hermitian() {
        return CheckOutcome::Inapplicable("relation is not Hermitian".into());
    }
    let n = t.space_dim();
    let qualifying = lambda_samples.iter().any(|&lambda| {
        lambda.im != 0.0
            && t.shift(lambda).components().range.dim() == n
            && t.shift(lambda.conj()).components().range.dim() == n
    });
    if !qualifying {
        return CheckOutcome::Inapplicable("no sampled nonreal lambda had both ranges full".into());
    }
    if t.is_self_adjoint() {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail("full ranges at a nonreal point but T != T*".into())
    }
}
