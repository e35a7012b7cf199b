//! Batch runner: generates seeded instances per statement and folds the
//! checker outcomes into a [`TheoremReport`].
//!
//! Instance trials are independent and run in parallel on the current rayon
//! pool, keyed by per-instance seeds drawn up front from the master seed;
//! results merge in seed order, so a report is identical for a fixed master
//! seed regardless of thread count.

use super::checks::{
    check_corollary_3_1, check_corollary_3_2, check_lemma_2_4, check_lemma_2_5, check_lemma_3_1,
    check_lemma_3_2, check_theorem_3_1, CheckOutcome, CheckTolerances, StabilityConclusions,
};
use super::generate::{
    gen_hermitian_with_gap, gen_perturbation_inner, gen_self_adjoint, gen_self_adjoint_with_gap,
    rng_for, MulChoice,
};
use super::{gen_hermitian, gen_perturbation, Failure, HarnessError, InstanceSpec, TheoremReport};
use crate::deficiency::lower_bound_constant;
use crate::quotient::SingleValuedPart;
use crate::relation::Relation;
use crate::subspace::Scalar;
use crate::subspace::Subspace;
use crate::tol::TolerancePolicy;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// The statements the suite can exercise. Identifiers mirror the numbering
/// used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    /// 2.4: full ranges at a nonreal point imply self-adjointness.
    Lemma24,
    /// 2.5: multivalued-part containment for dominated Hermitian pairs.
    Lemma25,
    /// 3.1 (lemma): lower bound and range codimension survive pure
    /// relative perturbations.
    Lemma31,
    /// 3.2: the shifted-norm identity of Hermitian relations.
    Lemma32,
    /// 3.3: deficiency indices survive relatively bounded perturbations.
    Lemma33,
    /// 3.1 (theorem): self-adjointness survives relatively bounded
    /// perturbations.
    Theorem31,
    /// 3.2 (corollary): self-adjointness of T+S without assuming the
    /// multivalued-part containment.
    Corollary32,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::Lemma24,
        TheoremId::Lemma25,
        TheoremId::Lemma31,
        TheoremId::Lemma32,
        TheoremId::Lemma33,
        TheoremId::Theorem31,
        TheoremId::Corollary32,
    ];

    pub fn flag(&self) -> &'static str {
        match self {
            TheoremId::Lemma24 => "2.4",
            TheoremId::Lemma25 => "2.5",
            TheoremId::Lemma31 => "3.1-lemma",
            TheoremId::Lemma32 => "3.2",
            TheoremId::Lemma33 => "3.3",
            TheoremId::Theorem31 => "3.1-theorem",
            TheoremId::Corollary32 => "3.2-corollary",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            TheoremId::Lemma24 => "full ranges at a nonreal point imply self-adjointness",
            TheoremId::Lemma25 => "multivalued part of a dominated Hermitian relation is contained",
            TheoremId::Lemma31 => {
                "lower bound and range codimension survive pure relative perturbation"
            }
            TheoremId::Lemma32 => "shifted-norm identity for Hermitian relations",
            TheoremId::Lemma33 => "deficiency indices survive relatively bounded perturbation",
            TheoremId::Theorem31 => "self-adjointness survives relatively bounded perturbation",
            TheoremId::Corollary32 => {
                "sum with a dominated Hermitian perturbation stays self-adjoint"
            }
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2.4" => Ok(TheoremId::Lemma24),
            "2.5" => Ok(TheoremId::Lemma25),
            "3.1-lemma" => Ok(TheoremId::Lemma31),
            "3.2" => Ok(TheoremId::Lemma32),
            "3.3" => Ok(TheoremId::Lemma33),
            // bare 3.1 means the headline statement
            "3.1" | "3.1-theorem" => Ok(TheoremId::Theorem31),
            "3.2-corollary" => Ok(TheoremId::Corollary32),
            other => Err(format!(
                "unknown theorem id {other:?}; expected one of 2.4, 2.5, 3.1-lemma, 3.2, 3.3, 3.1-theorem, 3.2-corollary"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub theorem: TheoremId,
    pub instances: usize,
    pub seed: u64,
    /// Inclusive range of space dimensions to draw from.
    pub n_range: (usize, usize),
    /// Witness bound targeted by perturbation generation.
    pub target_b: f64,
    pub tol: TolerancePolicy,
    pub check_tol: CheckTolerances,
}

impl SuiteConfig {
    pub fn new(theorem: TheoremId, instances: usize, seed: u64) -> Self {
        Self {
            theorem,
            instances,
            seed,
            n_range: (2, 6),
            target_b: 0.5,
            tol: TolerancePolicy::default(),
            check_tol: CheckTolerances::default(),
        }
    }
}

/// Spectral floor used when a statement needs |T(x)| >= c |x| with c > 0.
const GAP_FLOOR: f64 = 0.5;

/// Run the configured checker over `instances` generated instances.
pub fn run_suite(config: &SuiteConfig) -> Result<TheoremReport, HarnessError> {
    if config.instances == 0 {
        return Err(HarnessError::InvalidConfig(
            "instance count must be at least 1".into(),
        ));
    }
    let (lo, hi) = config.n_range;
    if lo < 1 || hi < lo || hi > 12 {
        return Err(HarnessError::InvalidConfig(format!(
            "n range must satisfy 1 <= lo <= hi <= 12, got {lo}..{hi}"
        )));
    }
    if !(0.0..1.0).contains(&config.target_b) {
        return Err(HarnessError::InvalidConfig(format!(
            "target b must lie in [0, 1), got {}",
            config.target_b
        )));
    }

    let mut seed_rng = rng_for(config.seed);
    let seeds: Vec<u64> = (0..config.instances).map(|_| seed_rng.random()).collect();

    let outcomes: Vec<(u64, CheckOutcome)> = seeds
        .par_iter()
        .map(|&instance_seed| (instance_seed, run_instance(config, instance_seed)))
        .collect();

    let mut passes = 0usize;
    let mut failures = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            CheckOutcome::Pass => passes += 1,
            CheckOutcome::Fail(diagnostic) => failures.push(Failure { seed, diagnostic }),
            CheckOutcome::Inapplicable(reason) => failures.push(Failure {
                seed,
                diagnostic: format!("generated instance missed the hypotheses: {reason}"),
            }),
        }
    }
    Ok(TheoremReport {
        theorem_id: config.theorem.flag().to_string(),
        instances_run: config.instances,
        passes,
        failures,
        tolerances: config.check_tol.as_pairs(),
    })
}

fn run_instance(config: &SuiteConfig, instance_seed: u64) -> CheckOutcome {
    let mut rng = rng_for(instance_seed);
    let (lo, hi) = config.n_range;
    let n = rng.random_range(lo..=hi);
    let dim_mul = rng.random_range(0..=n / 2);
    let dim_dom = rng.random_range(0..=(n - dim_mul));
    let spec = InstanceSpec {
        n,
        dim_mul,
        dim_dom,
        seed: rng.random(),
        perturbation_target_b: config.target_b,
        tol: config.tol,
    };
    match config.theorem {
        TheoremId::Lemma24 => lemma_2_4_instance(&spec, &mut rng),
        TheoremId::Lemma25 => lemma_2_5_instance(&spec, &mut rng),
        TheoremId::Lemma31 => lemma_3_1_instance(&spec, &mut rng, &config.check_tol),
        TheoremId::Lemma32 => lemma_3_2_instance(&spec, &mut rng, &config.check_tol),
        TheoremId::Lemma33 => stability_instance(
            &spec,
            &mut rng,
            StabilityConclusions::DeficiencyOnly,
            &config.check_tol,
        ),
        TheoremId::Theorem31 => stability_instance(
            &spec,
            &mut rng,
            StabilityConclusions::Full,
            &config.check_tol,
        ),
        TheoremId::Corollary32 => corollary_3_2_instance(&spec, &mut rng, &config.check_tol),
    }
}

fn gen_outcome<T>(result: Result<T, HarnessError>) -> Result<T, CheckOutcome> {
    result.map_err(|e| CheckOutcome::Fail(format!("generation failed: {e}")))
}

fn lemma_2_4_instance(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let t = match gen_outcome(gen_self_adjoint(spec)) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let lambdas: Vec<Scalar> = (0..4)
        .map(|_| {
            let re = 4.0 * rng.random::<f64>() - 2.0;
            let im = loop {
                let im = 4.0 * rng.random::<f64>() - 2.0;
                if im.abs() > 0.1 {
                    break im;
                }
            };
            Scalar::new(re, im)
        })
        .collect();
    check_lemma_2_4(&t, &lambdas)
}

fn lemma_2_5_instance(spec: &InstanceSpec, _rng: &mut ChaCha8Rng) -> CheckOutcome {
    let t = match gen_outcome(gen_self_adjoint(spec)) {
        Ok(t) => t,
        Err(out) => return out,
    };
    // multivalued part of S deliberately chosen without reference to T(0)
    let s = match gen_outcome(gen_perturbation_inner(&t, spec, MulChoice::Free)) {
        Ok(p) => p.relation,
        Err(out) => return out,
    };
    check_lemma_2_5(&t, &s)
}

fn lemma_3_1_instance(
    spec: &InstanceSpec,
    rng: &mut ChaCha8Rng,
    tol: &CheckTolerances,
) -> CheckOutcome {
    // T needs a genuine lower bound: build the operator part with a
    // spectral gap, as a self-adjoint relation or a Hermitian slice of one
    let t = if rng.random::<bool>() {
        gen_outcome(gen_self_adjoint_with_gap(spec, GAP_FLOOR))
    } else {
        gen_outcome(gen_hermitian_with_gap(spec, GAP_FLOOR))
    };
    let t = match t {
        Ok(t) => t,
        Err(out) => return out,
    };
    let c_actual = lower_bound_constant(&t);
    if c_actual <= 0.0 || c_actual.is_nan() {
        return CheckOutcome::Fail(format!("gap construction produced lower bound {c_actual}"));
    }
    // hypothesis constant slightly inside the actual bound
    let c = if c_actual.is_finite() {
        0.95 * c_actual
    } else {
        GAP_FLOOR
    };

    let b = spec.perturbation_target_b;
    let p = match gen_outcome(gen_perturbation(&t, spec)) {
        Ok(p) => p,
        Err(out) => return out,
    };
    if p.witness_a != 0.0 {
        return CheckOutcome::Fail(
            "gap construction should admit a pure witness but did not".into(),
        );
    }
    match check_lemma_3_1(&t, &p.relation, c, b, tol) {
        CheckOutcome::Pass => {}
        other => return other,
    }

    // bounded route: rescale the same perturbation so |S x| <= a |x| with
    // a < c, then the conclusions must hold via b = a/c
    let ratio = 0.1 + 0.8 * rng.random::<f64>();
    let dom_t = t.components().domain;
    let ms = match SingleValuedPart::on_domain(&p.relation, &dom_t) {
        Ok(ms) => ms,
        Err(e) => return CheckOutcome::Fail(format!("restriction failed: {e}")),
    };
    let s_norm = ms.operator_norm();
    if s_norm <= 0.0 {
        // zero perturbation: the bounded route is trivial
        return check_corollary_3_1(&t, &p.relation, c, 0.0, tol);
    }
    let a = ratio * c;
    let s_bounded = p.relation.scalar_mul(Scalar::new(a / s_norm, 0.0));
    check_corollary_3_1(&t, &s_bounded, c, a, tol)
}

fn lemma_3_2_instance(
    spec: &InstanceSpec,
    rng: &mut ChaCha8Rng,
    tol: &CheckTolerances,
) -> CheckOutcome {
    let t = match gen_outcome(gen_hermitian(spec)) {
        Ok(t) => t,
        Err(out) => return out,
    };
    let mut z_samples: Vec<Scalar> = (0..9)
        .map(|_| {
            Scalar::new(
                4.0 * rng.random::<f64>() - 2.0,
                4.0 * rng.random::<f64>() - 2.0,
            )
        })
        .collect();
    // degenerate real case stays covered
    z_samples.push(Scalar::new(4.0 * rng.random::<f64>() - 2.0, 0.0));
    check_lemma_3_2(&t, &z_samples, 50, rng.random(), tol)
}

fn stability_instance(
    spec: &InstanceSpec,
    rng: &mut ChaCha8Rng,
    conclusions: StabilityConclusions,
    tol: &CheckTolerances,
) -> CheckOutcome {
    // half the instances are self-adjoint, half proper Hermitian slices
    let t = if rng.random::<bool>() {
        gen_outcome(gen_self_adjoint(spec))
    } else {
        gen_outcome(gen_hermitian(spec))
    };
    let t = match t {
        Ok(t) => t,
        Err(out) => return out,
    };
    let p = match gen_outcome(gen_perturbation(&t, spec)) {
        Ok(p) => p,
        Err(out) => return out,
    };
    check_theorem_3_1(
        &t,
        &p.relation,
        p.witness_a,
        p.witness_b,
        rng.random(),
        conclusions,
        tol,
    )
}

fn corollary_3_2_instance(
    spec: &InstanceSpec,
    rng: &mut ChaCha8Rng,
    tol: &CheckTolerances,
) -> CheckOutcome {
    let t = match gen_outcome(gen_self_adjoint(spec)) {
        Ok(t) => t,
        Err(out) => return out,
    };
    // containment of S(0) in T(0) is not built in here; the corollary
    // derives it
    let p = match gen_outcome(gen_perturbation_inner(&t, spec, MulChoice::Free)) {
        Ok(p) => p,
        Err(out) => return out,
    };
    check_corollary_3_2(&t, &p.relation, p.witness_a, p.witness_b, rng.random(), tol)
}

/// Outcome frequencies of an exploratory run over hypothesis-violating
/// instances. Nothing is asserted: the converse of the stability statements
/// is not claimed, and finite dimensions may simply fail to produce
/// counterexamples.
#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub theorem_id: String,
    pub instances_run: usize,
    /// Instances where the intended hypothesis violation was confirmed
    /// numerically (pure bound >= 1, or S(0) escaping T(0)).
    pub violations_confirmed: usize,
    /// Confirmed-violating instances whose conclusion still held.
    pub conclusion_held: usize,
    /// Confirmed-violating instances whose conclusion failed.
    pub conclusion_violated: usize,
}

/// Exploratory mode: generate instances that deliberately break the
/// hypotheses of a stability statement (relative bound at or above 1, or a
/// multivalued part escaping T(0)) and report how often the conclusion
/// still holds. `config.target_b` is ignored; only the stability statements
/// (3.1-lemma, 3.3, 3.1-theorem) are supported.
pub fn run_fuzz(config: &SuiteConfig) -> Result<FuzzReport, HarnessError> {
    if config.instances == 0 {
        return Err(HarnessError::InvalidConfig(
            "instance count must be at least 1".into(),
        ));
    }
    let (lo, hi) = config.n_range;
    if lo < 1 || hi < lo || hi > 12 {
        return Err(HarnessError::InvalidConfig(format!(
            "n range must satisfy 1 <= lo <= hi <= 12, got {lo}..{hi}"
        )));
    }
    if !matches!(
        config.theorem,
        TheoremId::Lemma31 | TheoremId::Lemma33 | TheoremId::Theorem31
    ) {
        return Err(HarnessError::InvalidConfig(format!(
            "fuzz mode exercises the stability statements only, not {}",
            config.theorem
        )));
    }

    let mut seed_rng = rng_for(config.seed);
    let seeds: Vec<u64> = (0..config.instances).map(|_| seed_rng.random()).collect();
    let outcomes: Vec<Option<bool>> = seeds
        .par_iter()
        .map(|&instance_seed| fuzz_instance(config, instance_seed))
        .collect();

    let mut report = FuzzReport {
        theorem_id: config.theorem.flag().to_string(),
        instances_run: config.instances,
        violations_confirmed: 0,
        conclusion_held: 0,
        conclusion_violated: 0,
    };
    for held in outcomes.into_iter().flatten() {
        report.violations_confirmed += 1;
        if held {
            report.conclusion_held += 1;
        } else {
            report.conclusion_violated += 1;
        }
    }
    Ok(report)
}

/// Returns None when the intended violation could not be confirmed, and
/// otherwise whether the conclusion held.
fn fuzz_instance(config: &SuiteConfig, instance_seed: u64) -> Option<bool> {
    let mut rng = rng_for(instance_seed);
    let (lo, hi) = config.n_range;
    let n = rng.random_range(lo..=hi);
    let dim_mul = rng.random_range(0..=n / 2);
    // keep the domain proper so a multivalued escape is geometrically
    // possible on half the instances
    let dim_dom = rng.random_range(0..=(n - dim_mul));
    let spec = InstanceSpec {
        n,
        dim_mul,
        dim_dom,
        seed: rng.random(),
        perturbation_target_b: 0.9,
        tol: config.tol,
    };
    let t = if rng.random::<bool>() {
        gen_self_adjoint(&spec).ok()?
    } else {
        gen_hermitian(&spec).ok()?
    };
    let parts_t = t.components();

    let escape_room = parts_t
        .domain
        .complement()
        .intersect(&parts_t.mul_part.complement())
        .ok()?;
    let try_escape = rng.random::<bool>() && !escape_room.is_zero();

    let s = if try_escape {
        // Hermitian S on D(T) whose multivalued part leaves T(0)
        let escaped = Subspace::span_of_columns(
            &(escape_room.basis() * super::generate::random_matrix(&mut rng, escape_room.dim(), 1)),
            config.tol,
        )
        .ok()?;
        let k = parts_t.domain.dim();
        let hb = super::generate::random_hermitian(&mut rng, k);
        let v = parts_t.domain.basis();
        let mut pairs: Vec<(crate::subspace::Vector, crate::subspace::Vector)> = (0..k)
            .map(|j| (v.column(j).into_owned(), (v * &hb).column(j).into_owned()))
            .collect();
        for m in escaped.basis().column_iter() {
            pairs.push((crate::subspace::Vector::zeros(n), m.into_owned()));
        }
        Relation::from_pairs(n, &pairs, config.tol).ok()?
    } else {
        // relative bound pushed to or above 1
        let p = gen_perturbation(&t, &spec).ok()?;
        let beta = crate::bounds::pure_relative_bound(&p.relation, &t).ok()?;
        if !(beta.is_finite() && beta > 1e-8) {
            return None;
        }
        let blowup = (1.0 + 2.0 * rng.random::<f64>()) / beta;
        p.relation.scalar_mul(Scalar::new(blowup, 0.0))
    };

    // confirm the violation numerically
    let confirmed = if try_escape {
        let mul_s = s.components().mul_part;
        !matches!(
            mul_s
                .compare(&parts_t.mul_part)
                .expect("same ambient")
                .relation,
            crate::subspace::SetRelation::Equal | crate::subspace::SetRelation::LeftInRight
        )
    } else {
        matches!(
            crate::bounds::pure_relative_bound(&s, &t),
            Ok(beta) if beta >= 1.0
        )
    };
    if !confirmed {
        return None;
    }

    let sum = t.op_sum(&s).ok()?;
    let held = match config.theorem {
        TheoremId::Lemma31 => {
            t.space_dim() - t.components().range.dim()
                == sum.space_dim() - sum.components().range.dim()
        }
        TheoremId::Lemma33 => {
            sum.is_hermitian() && deficiency_pair_or_none(&t) == deficiency_pair_or_none(&sum)
        }
        TheoremId::Theorem31 => sum.is_hermitian() && t.is_self_adjoint() == sum.is_self_adjoint(),
        _ => unreachable!("rejected above"),
    };
    Some(held)
}

fn deficiency_pair_or_none(t: &Relation) -> Option<(usize, usize)> {
    crate::deficiency::deficiency_pair(t).ok()
}
