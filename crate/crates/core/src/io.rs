//! JSON documents for single relations and group problems.
//!
//! A cell is written either as an explicit index list or as a two-element
//! integer pair `[lo, hi]` with `lo <= hi`, which expands to the run
//! `{lo, ..., hi}` (a single term when `lo == hi`). Any other list is taken
//! verbatim.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::consensus::{GroupProblem, PerfectMethod};
use crate::consistency::{ConsistencyParams, PriorityVector, StopMode};
use crate::error::{Error, Result, ValidationError};
use crate::hflpr::{validate_hflpr, Hflpr};
use crate::scale::{LinguisticScale, DEFAULT_TAU};
use crate::similarity::SimilarityMeasure;

/// Wire form of a relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HflprDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub cells: Vec<Vec<Vec<f64>>>,
}

/// Expands `[lo, hi]` integer pairs with `lo <= hi` into consecutive runs.
pub fn expand_cell(cell: &[f64]) -> Vec<f64> {
    if let [lo, hi] = *cell {
        let integral = lo.fract() == 0.0 && hi.fract() == 0.0 && lo.is_finite() && hi.is_finite();
        if integral && lo <= hi && hi - lo < 1e6 {
            return (lo as i64..=hi as i64).map(|x| x as f64).collect();
        }
    }
    cell.to_vec()
}

impl HflprDoc {
    /// Expands runs and validates the matrix; `tau` falls back to
    /// `default_tau` when absent from the document.
    pub fn to_hflpr(&self, default_tau: u32) -> std::result::Result<Hflpr, ValidationError> {
        let scale = LinguisticScale::new(self.tau.unwrap_or(default_tau))?;
        if let Some(n) = self.n {
            if n != self.cells.len() {
                return Err(ValidationError::DeclaredSize {
                    declared: n,
                    found: self.cells.len(),
                });
            }
        }
        let raw: Vec<Vec<Vec<f64>>> = self
            .cells
            .iter()
            .map(|row| row.iter().map(|c| expand_cell(c)).collect())
            .collect();
        validate_hflpr(&raw, &scale)
    }

    /// Explicit-list form of a relation.
    pub fn from_hflpr(b: &Hflpr) -> Self {
        Self {
            tau: Some(b.scale().tau()),
            n: Some(b.n()),
            cells: b.to_raw(),
        }
    }
}

impl Serialize for Hflpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HflprDoc::from_hflpr(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hflpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = HflprDoc::deserialize(d)?;
        doc.to_hflpr(DEFAULT_TAU).map_err(serde::de::Error::custom)
    }
}

/// Parses and validates a relation document.
pub fn parse_hflpr(json: &str) -> Result<Hflpr> {
    let doc: HflprDoc = serde_json::from_str(json).map_err(|e| Error::param("json", e.to_string()))?;
    Ok(doc.to_hflpr(DEFAULT_TAU)?)
}

fn default_gamma() -> f64 {
    0.95
}

fn default_zeta_mod() -> f64 {
    0.5
}

fn default_tau() -> u32 {
    DEFAULT_TAU
}

/// Wire form of a group problem, single- or multi-index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default = "default_tau")]
    pub tau: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Feedback blend weight kept on the expert's own judgment.
    #[serde(default = "default_zeta_mod")]
    pub zeta: f64,
    /// Padding parameter for unequal cell lengths.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization_zeta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_mode: Option<StopMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perfect_method: Option<PerfectMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity: Option<SimilarityMeasure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dms: Vec<HflprDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problems_per_index: Option<Vec<Vec<HflprDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_names: Option<Vec<String>>,
}

/// Parsed group document: one problem per index plus fusion weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub problems: Vec<GroupProblem>,
    /// Present for multi-index documents.
    pub index_weights: Option<PriorityVector>,
    pub index_names: Vec<String>,
}

impl GroupDoc {
    /// Consistency parameters shared by every index.
    pub fn consistency_params(&self) -> ConsistencyParams {
        let d = ConsistencyParams::default();
        ConsistencyParams {
            alpha: self.alpha,
            beta: self.beta.unwrap_or(d.beta),
            threshold: self.threshold,
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            stop_mode: self.stop_mode.unwrap_or(d.stop_mode),
            zeta: self.normalization_zeta.unwrap_or(d.zeta),
        }
    }

    fn problem(&self, docs: &[HflprDoc]) -> Result<GroupProblem> {
        let mut matrices = Vec::with_capacity(docs.len());
        for (h, d) in docs.iter().enumerate() {
            let m = d.to_hflpr(self.tau).map_err(|e| Error::DecisionMaker {
                dm: h + 1,
                source: Box::new(e.into()),
            })?;
            if let Some(n) = self.n {
                if m.n() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: m.n(),
                    });
                }
            }
            matrices.push(m);
        }
        Ok(GroupProblem {
            matrices,
            gamma: self.gamma,
            zeta_mod: self.zeta,
            consistency: self.consistency_params(),
            perfect_method: self.perfect_method.unwrap_or_default(),
            similarity: self.similarity.unwrap_or_default(),
            max_rounds: self.max_rounds,
        })
    }

    /// Validates every matrix and builds the problems.
    pub fn to_spec(&self) -> Result<GroupSpec> {
        match &self.problems_per_index {
            Some(per_index) => {
                if per_index.is_empty() {
                    return Err(Error::param("problems_per_index", "must not be empty"));
                }
                let problems = per_index
                    .iter()
                    .map(|docs| self.problem(docs))
                    .collect::<Result<Vec<_>>>()?;
                let weights = match &self.index_weights {
                    Some(w) => PriorityVector::new(w.clone())?,
                    None => PriorityVector::uniform(problems.len()),
                };
                if weights.len() != problems.len() {
                    return Err(Error::DimensionMismatch {
                        expected: problems.len(),
                        found: weights.len(),
                    });
                }
                let names = self
                    .index_names
                    .clone()
                    .unwrap_or_else(|| (1..=problems.len()).map(|m| format!("index {m}")).collect());
                Ok(GroupSpec {
                    problems,
                    index_weights: Some(weights),
                    index_names: names,
                })
            }
            None => Ok(GroupSpec {
                problems: vec![self.problem(&self.dms)?],
                index_weights: None,
                index_names: vec![],
            }),
        }
    }
}

/// Parses a group document.
pub fn parse_group(json: &str) -> Result<GroupDoc> {
    serde_json::from_str(json).map_err(|e| Error::param("json", e.to_string()))
}
