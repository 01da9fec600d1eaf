//! Hamming-type distances between term sets and similarity between
//! preference relations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hflpr::Hflpr;
use crate::hflts::{normalize_pair, Hflts};
use crate::scale::LinguisticScale;
use crate::slices::SliceStack;

/// Denominator applied to absolute index differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DistanceDivisor {
    /// `2τ`: the widest possible index gap maps to distance 1.
    DoubleTau,
    /// `2τ + 1`: the number of terms in the scale.
    #[default]
    Granularity,
}

impl DistanceDivisor {
    pub fn value(self, scale: &LinguisticScale) -> f64 {
        match self {
            Self::DoubleTau => scale.max_index(),
            Self::Granularity => scale.granularity() as f64,
        }
    }

    fn value_from_two_tau(self, two_tau: f64) -> f64 {
        match self {
            Self::DoubleTau => two_tau,
            Self::Granularity => two_tau + 1.0,
        }
    }
}

/// Which cells enter the matrix-level average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CellScope {
    /// The `n(n-1)/2` strict upper cells.
    UpperTriangle,
    /// All `n²` cells, diagonal included.
    #[default]
    AllCells,
}

/// Configuration of the relation-level similarity `1 - mean distance`.
///
/// The default (divisor `2τ+1`, all cells, padding with the maximum term)
/// is the measure that reproduces the published expert weights; the
/// upper-triangle, `2τ` variant is available as [`SimilarityMeasure::upper_2tau`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMeasure {
    #[serde(default)]
    pub divisor: DistanceDivisor,
    #[serde(default)]
    pub scope: CellScope,
    /// Padding parameter used when cell lengths differ.
    #[serde(default = "default_zeta")]
    pub zeta: f64,
}

fn default_zeta() -> f64 {
    1.0
}

impl Default for SimilarityMeasure {
    fn default() -> Self {
        Self {
            divisor: DistanceDivisor::Granularity,
            scope: CellScope::AllCells,
            zeta: default_zeta(),
        }
    }
}

impl SimilarityMeasure {
    /// Upper-triangle mean of Hamming distances divided by `2τ`.
    pub fn upper_2tau(zeta: f64) -> Self {
        Self {
            divisor: DistanceDivisor::DoubleTau,
            scope: CellScope::UpperTriangle,
            zeta,
        }
    }
}

/// Normalized Hamming distance between two term sets:
/// `(1/L) Σ_ℓ |I(a^ℓ) - I(b^ℓ)| / divisor` after padding to a common `L`.
pub fn hflts_distance(a: &Hflts, b: &Hflts, scale: &LinguisticScale, zeta: f64, divisor: DistanceDivisor) -> f64 {
    let (a, b) = normalize_pair(a, b, zeta);
    let d = divisor.value(scale);
    a.indices()
        .iter()
        .zip(b.indices())
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        / (a.len() as f64 * d)
}

/// Similarity between two slice stacks of equal shape.
pub fn stack_similarity(a: &SliceStack, b: &SliceStack, measure: &SimilarityMeasure) -> f64 {
    1.0 - stack_distance(a, b, measure)
}

/// Mean cell distance between two slice stacks of equal shape.
pub fn stack_distance(a: &SliceStack, b: &SliceStack, measure: &SimilarityMeasure) -> f64 {
    let n = a.n();
    let d = measure.divisor.value_from_two_tau(a.two_tau());
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        for j in 0..n {
            let include = match measure.scope {
                CellScope::UpperTriangle => i < j,
                CellScope::AllCells => true,
            };
            if include {
                total += a.cell_abs_diff(b, i, j) / d;
                count += 1;
            }
        }
    }
    total / count as f64
}

/// Similarity between two relations. Both are padded to the longer of
/// their maximum cell lengths before comparison.
pub fn hflpr_similarity(a: &Hflpr, b: &Hflpr, measure: &SimilarityMeasure) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    if a.scale() != b.scale() {
        return Err(Error::param("scale", "relations use different scales"));
    }
    let len = a.max_len().max(b.max_len());
    let sa = a.slices(measure.zeta, Some(len));
    let sb = b.slices(measure.zeta, Some(len));
    Ok(stack_similarity(&sa, &sb, measure))
}
