//! Numerical calculus of linear relations (multivalued linear operators) on
//! finite-dimensional complex Hilbert spaces X = C^n.
//!
//! A linear relation is a subspace of X x X generalizing the graph of an
//! operator: it may be multivalued (T(0) != {0}) and need not be densely
//! defined. This crate provides
//!
//! - rank-revealing subspace arithmetic over C^m ([`subspace`]),
//! - the relation calculus: sums, scalar multiples, adjoints, shifts and
//!   the Hermitian/self-adjoint predicates ([`relation`]),
//! - quotient-space norms and the single-valued part of a relation
//!   ([`quotient`]),
//! - deficiency spaces/indices and lower-bound constants ([`deficiency`]),
//! - relative boundedness: minimal pure bounds, bound curves and the
//!   linear/quadratic bound conversions ([`bounds`]),
//! - seeded instance generators plus executable checkers for the
//!   perturbation-stability statements the library is built around
//!   ([`harness`]).
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here is safe to use from parallel test drivers.

pub mod bounds;
pub mod deficiency;
pub mod harness;
mod numeric;
pub mod quotient;
pub mod relation;
pub mod subspace;
pub mod tol;

pub use bounds::{bound_curve, convert_bounds, pure_relative_bound, quadratic_bound, BoundReport};
pub use deficiency::{deficiency_index, deficiency_pair, lower_bound_constant, DeficiencyRecord};
pub use quotient::{
    quotient_inner, relation_norm, relation_norm_at, QuotientSpace, SingleValuedPart,
};
pub use relation::{Relation, RelationParts};
pub use subspace::{Scalar, SetRelation, Subspace};
pub use tol::TolerancePolicy;
