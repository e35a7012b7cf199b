//! Random instance generators and executable checkers for the
//! perturbation-stability statements about linear relations: invariance of
//! deficiency indices and preservation of self-adjointness under bounded and
//! relatively bounded Hermitian perturbations.
//!
//! Generators construct hypothesis-satisfying instances directly (Hermitian
//! relations as subspaces of self-adjoint ones, perturbations rescaled to a
//! prescribed witness bound), and checkers verify both the hypotheses and
//! the conclusions numerically, so a run is falsifiable end to end: a
//! violated hypothesis yields an inapplicable outcome, a violated conclusion
//! a failure with a diagnostic.

mod checks;
mod generate;
mod suite;

pub use checks::{
    check_corollary_3_1, check_corollary_3_2, check_lemma_2_4, check_lemma_2_5, check_lemma_3_1,
    check_lemma_3_2, check_theorem_3_1, CheckOutcome, CheckTolerances, StabilityConclusions,
};
pub use generate::{gen_hermitian, gen_perturbation, gen_self_adjoint, Perturbation};
pub use suite::{run_fuzz, run_suite, FuzzReport, SuiteConfig, TheoremId};

use crate::bounds::BoundError;
use crate::relation::RelationError;
use crate::tol::TolerancePolicy;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
    #[error("invalid suite config: {0}")]
    InvalidConfig(String),
    #[error("generator failed: {0}")]
    Generation(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Parameters of one generated instance.
#[derive(Debug, Clone, Copy)]
pub struct InstanceSpec {
    /// Dimension of the underlying space C^n.
    pub n: usize,
    /// Dimension of the multivalued part T(0).
    pub dim_mul: usize,
    /// Dimension of the domain (Hermitian construction only; the
    /// self-adjoint construction fixes dim_dom = n - dim_mul).
    pub dim_dom: usize,
    pub seed: u64,
    /// Witness bound b in [0, 1) targeted by perturbation generation.
    pub perturbation_target_b: f64,
    pub tol: TolerancePolicy,
}

impl InstanceSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            dim_mul: 0,
            dim_dom: n,
            seed,
            perturbation_target_b: 0.5,
            tol: TolerancePolicy::default(),
        }
    }
}

/// Result of running one checker over a batch of generated instances.
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub instances_run: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    /// Named tolerances the checks ran with.
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub seed: u64,
    pub diagnostic: String,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passes == self.instances_run
    }
}
