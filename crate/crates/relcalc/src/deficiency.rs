//! Deficiency spaces and indices, and the lower-bound constant of a relation.
//!
//! For a Hermitian relation the deficiency index d_lambda(T) =
//! dim R(T - lambda I)^perp is constant on each open half-plane; the pair
//! (d_+, d_-) at lambda = (i, -i) classifies the self-adjoint extension
//! structure. Here the half-plane constancy is sampled at several points and
//! enforced rather than assumed.

use crate::quotient::SingleValuedPart;
use crate::relation::{Relation, RelationError};
use crate::subspace::{Scalar, Subspace};

/// Deficiency space and index of T at one spectral parameter.
#[derive(Debug, Clone)]
pub struct DeficiencyRecord {
    pub lambda: Scalar,
    /// R(T - lambda I)^perp.
    pub space: Subspace,
    /// dim of the deficiency space.
    pub index: usize,
}

/// Deficiency space and index of T at lambda.
pub fn deficiency_index(t: &Relation, lambda: Scalar) -> DeficiencyRecord {
    let range = t.shift(lambda).components().range;
    let space = range.complement();
    DeficiencyRecord {
        lambda,
        index: space.dim(),
        space,
    }
}

const UPPER_SAMPLES: [(f64, f64); 3] = [(0.0, 1.0), (0.0, 2.0), (1.0, 1.0)];
const LOWER_SAMPLES: [(f64, f64); 3] = [(0.0, -1.0), (0.0, -2.0), (1.0, -1.0)];

/// The pair (d_+, d_-) of a Hermitian relation, evaluated at (i, -i).
///
/// Constancy per half-plane is sampled at lambda in {i, 2i, 1+i} and
/// {-i, -2i, 1-i}; disagreement is reported as a numerical breakdown rather
/// than silently picking one value. Non-Hermitian input violates the
/// precondition of the pair notation and is rejected.
pub fn deficiency_pair(t: &Relation) -> Result<(usize, usize), RelationError> {
    if !t.is_hermitian() {
        return Err(RelationError::NotHermitian);
    }
    let mut indices = [0usize; 2];
    for (half, samples) in [UPPER_SAMPLES, LOWER_SAMPLES].iter().enumerate() {
        let values: Vec<usize> = samples
            .iter()
            .map(|&(re, im)| deficiency_index(t, Scalar::new(re, im)).index)
            .collect();
        if values.iter().any(|&v| v != values[0]) {
            return Err(RelationError::DeficiencyInconsistent {
                details: format!("indices {:?} at sampled points {:?}", values, samples),
            });
        }
        indices[half] = values[0];
    }
    Ok((indices[0], indices[1]))
}

/// The largest c >= 0 with |T(x)| >= c |x| for all x in D(T): the smallest
/// singular value of the single-valued part over its input space. When
/// D(T) = {0} the bound is vacuous and the +infinity sentinel is returned;
/// callers must handle it.
pub fn lower_bound_constant(t: &Relation) -> f64 {
    SingleValuedPart::of(t).min_gain()
}
