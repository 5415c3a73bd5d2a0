//! JSON representations of spaces, Lagrangians and relations.
//!
//! ```json
//! {"dim": 2, "gram": [[{"re": 1, "im": 0}, ...], ...], "gamma": [[...], ...]}
//! {"basis": [[{"re": 1, "im": 0}], [{"re": 0, "im": 0}]]}
//! {"source_dim": 2, "target_dim": 2, "source": {...}, "target": {...}, "basis": [[...]]}
//! ```
//!
//! Matrices are row-major; a Lagrangian basis has one row per coordinate and
//! one column per basis vector. A missing `"im"` reads as zero.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bordism::BordismRelation;
use crate::error::{Error, Result};
use crate::hermsymp::{HermitianSymplecticSpace, Lagrangian, Tolerances};
use crate::linalg::CMat;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonComplex {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

pub type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub dim: usize,
    pub gram: JsonMatrix,
    pub gamma: JsonMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagrangianJson {
    pub basis: JsonMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationJson {
    pub source_dim: usize,
    pub target_dim: usize,
    pub source: SpaceJson,
    pub target: SpaceJson,
    pub basis: JsonMatrix,
}

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| JsonComplex {
                    re: m[(i, j)].re,
                    im: m[(i, j)].im,
                })
                .collect()
        })
        .collect()
}

/// `rows x cols` matrix; `cols` is taken from the first row when absent.
pub fn matrix_from_json(rows: &JsonMatrix, expected_rows: usize, what: &str) -> Result<CMat> {
    if rows.len() != expected_rows {
        return Err(Error::Shape(format!(
            "{what}: expected {expected_rows} rows, found {}",
            rows.len()
        )));
    }
    let cols = rows.first().map_or(0, Vec::len);
    let mut m = CMat::zeros(expected_rows, cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Shape(format!(
                "{what}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, z) in row.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{what}: non-finite entry at ({i}, {j})"
                )));
            }
            m[(i, j)] = Complex64::new(z.re, z.im);
        }
    }
    Ok(m)
}

impl SpaceJson {
    pub fn from_space(space: &HermitianSymplecticSpace) -> Self {
        SpaceJson {
            dim: space.dim(),
            gram: matrix_to_json(space.gram()),
            gamma: matrix_to_json(space.gamma()),
        }
    }

    pub fn matrices(&self) -> Result<(CMat, CMat)> {
        let gram = matrix_from_json(&self.gram, self.dim, "gram")?;
        let gamma = matrix_from_json(&self.gamma, self.dim, "gamma")?;
        if gram.ncols() != self.dim || gamma.ncols() != self.dim {
            return Err(Error::Shape(format!(
                "gram and gamma must be {0}x{0}",
                self.dim
            )));
        }
        Ok((gram, gamma))
    }

    pub fn to_space(&self, tol: Tolerances) -> Result<HermitianSymplecticSpace> {
        let (gram, gamma) = self.matrices()?;
        HermitianSymplecticSpace::with_tolerances(gram, gamma, tol)
    }
}

impl LagrangianJson {
    pub fn from_lagrangian(v: &Lagrangian) -> Self {
        LagrangianJson {
            basis: matrix_to_json(v.basis()),
        }
    }

    pub fn to_lagrangian(&self, space: &Arc<HermitianSymplecticSpace>) -> Result<Lagrangian> {
        let basis = matrix_from_json(&self.basis, space.dim(), "basis")?;
        Lagrangian::new(space, basis)
    }
}

impl RelationJson {
    pub fn from_relation(rel: &BordismRelation) -> Self {
        RelationJson {
            source_dim: rel.source().dim(),
            target_dim: rel.target().dim(),
            source: SpaceJson::from_space(rel.source()),
            target: SpaceJson::from_space(rel.target()),
            basis: matrix_to_json(rel.graph().basis()),
        }
    }

    pub fn to_relation(&self, tol: Tolerances) -> Result<BordismRelation> {
        if self.source.dim != self.source_dim || self.target.dim != self.target_dim {
            return Err(Error::Shape(
                "factor dimensions disagree with the embedded spaces".into(),
            ));
        }
        let source = Arc::new(self.source.to_space(tol)?);
        let target = Arc::new(self.target.to_space(tol)?);
        let basis = matrix_from_json(&self.basis, self.source_dim + self.target_dim, "basis")?;
        BordismRelation::new(source, target, basis)
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("{what}: {e}")))
}
