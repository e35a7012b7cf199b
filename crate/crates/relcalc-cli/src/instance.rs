//! On-disk instance format.
//!
//! An instance file stores one space dimension, the tolerance policy, and a
//! map of named relations. Each relation is a list of graph basis rows; a
//! row holds the 2n complex coordinates of one basis vector of the graph
//! (x-part first) as 4n interleaved re/im values. Values round-trip
//! losslessly: floats are written in shortest-exact decimal form.

use relcalc::{Relation, Subspace, TolerancePolicy};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::AppError;

#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub space_dim: usize,
    pub tol: TolSection,
    pub relations: BTreeMap<String, RelationSection>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TolSection {
    pub rank_rel_tol: f64,
    pub angle_tol: f64,
}

impl From<TolerancePolicy> for TolSection {
    fn from(tol: TolerancePolicy) -> Self {
        Self {
            rank_rel_tol: tol.rank_rel_tol,
            angle_tol: tol.angle_tol,
        }
    }
}

impl TolSection {
    pub fn to_policy(self) -> Result<TolerancePolicy, AppError> {
        TolerancePolicy::new(self.rank_rel_tol, self.angle_tol)
            .map_err(|e| AppError::usage(format!("invalid tolerances in instance file: {e}")))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RelationSection {
    /// Graph basis vectors as rows of 4n reals: re,im per coordinate,
    /// x-part first.
    pub basis: Vec<Vec<f64>>,
}

fn relation_to_rows(relation: &Relation) -> Vec<Vec<f64>> {
    relation
        .graph()
        .basis()
        .column_iter()
        .map(|col| {
            let mut row = Vec::with_capacity(2 * col.len());
            for z in col.iter() {
                row.push(z.re);
                row.push(z.im);
            }
            row
        })
        .collect()
}

impl InstanceFile {
    pub fn new(space_dim: usize, tol: TolerancePolicy) -> Self {
        Self {
            space_dim,
            tol: tol.into(),
            relations: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, relation: &Relation) {
        assert_eq!(relation.space_dim(), self.space_dim);
        self.relations.insert(
            name.into(),
            RelationSection {
                basis: relation_to_rows(relation),
            },
        );
    }

    /// Reconstruct one named relation. Rows that already form an
    /// orthonormal set are kept verbatim so emit/load round-trips are
    /// byte-exact; anything else (hand-written files) is re-orthonormalized.
    pub fn relation(&self, name: &str) -> Result<Relation, AppError> {
        let section = self.relations.get(name).ok_or_else(|| {
            AppError::usage(format!(
                "instance file has no relation named {name:?} (available: {:?})",
                self.relations.keys().collect::<Vec<_>>()
            ))
        })?;
        let n = self.space_dim;
        if n == 0 {
            return Err(AppError::usage("space_dim must be at least 1".into()));
        }
        let tol = self.tol.to_policy()?;
        let mut columns = Vec::with_capacity(section.basis.len());
        for (i, row) in section.basis.iter().enumerate() {
            if row.len() != 4 * n {
                return Err(AppError::usage(format!(
                    "relation {name:?} row {i} has {} values, expected {}",
                    row.len(),
                    4 * n
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(AppError::usage(format!(
                    "relation {name:?} row {i} contains a non-finite value"
                )));
            }
            columns.push(nalgebra_vector(row));
        }
        let graph = if columns.is_empty() {
            Subspace::zero(2 * n, tol)
        } else {
            let matrix = nalgebra::DMatrix::from_columns(&columns);
            match Subspace::from_orthonormal(matrix, tol) {
                Ok(s) => s,
                Err(_) => Subspace::orthonormalize(2 * n, &columns, tol)
                    .map_err(|e| AppError::usage(format!("relation {name:?}: {e}")))?,
            }
        };
        Relation::from_graph(n, graph)
            .map_err(|e| AppError::usage(format!("relation {name:?}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| AppError::usage(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<(), AppError> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| AppError::numerical(format!("serialization failed: {e}")))?;
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| AppError::usage(format!("cannot write {}: {e}", path.display())))
    }
}

fn nalgebra_vector(row: &[f64]) -> nalgebra::DVector<relcalc::Scalar> {
    nalgebra::DVector::from_iterator(
        row.len() / 2,
        row.chunks_exact(2)
            .map(|c| relcalc::Scalar::new(c[0], c[1])),
    )
}
