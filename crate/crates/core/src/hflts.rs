//! Hesitant fuzzy linguistic term sets as ordered lists of term indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scale::LinguisticScale;

/// An ordered, non-empty list of (possibly fractional) term indices.
///
/// Integer-valued inputs are consecutive runs such as `{s_4, s_5, s_6}`.
/// Adjusted relations carry virtual terms like `s_5.5408`, and blending
/// may produce repeated values, so the invariant is "non-decreasing".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Hflts {
    indices: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Hflts {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Hflts> for Vec<f64> {
    fn from(h: Hflts) -> Self {
        h.indices
    }
}

impl Hflts {
    /// Validates a non-empty, finite, non-decreasing index list.
    pub fn new(indices: Vec<f64>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::param("hflts", "term set must not be empty"));
        }
        if indices.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("hflts", "indices must be finite"));
        }
        if indices.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param("hflts", "indices must be non-decreasing"));
        }
        Ok(Self { indices })
    }

    /// Sorts the indices before validating them.
    pub fn from_unsorted(mut indices: Vec<f64>) -> Result<Self> {
        indices.sort_by(f64::total_cmp);
        Self::new(indices)
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<f64>) -> Self {
        debug_assert!(!indices.is_empty());
        debug_assert!(indices.windows(2).all(|w| w[0] <= w[1]));
        Self { indices }
    }

    /// The consecutive run `{s_lo, ..., s_hi}`.
    pub fn run(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::param("hflts", format!("run bounds {lo} > {hi}")));
        }
        Ok(Self {
            indices: (lo..=hi).map(f64::from).collect(),
        })
    }

    /// A single-term set.
    pub fn singleton(x: f64) -> Self {
        Self { indices: vec![x] }
    }

    /// Term indices in ascending order.
    pub fn indices(&self) -> &[f64] {
        &self.indices
    }

    /// Number of terms `#b`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Always false; term sets are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Smallest index `I(b⁻)`.
    pub fn lower(&self) -> f64 {
        self.indices[0]
    }

    /// Largest index `I(b⁺)`.
    pub fn upper(&self) -> f64 {
        self.indices[self.indices.len() - 1]
    }

    /// The `ℓ`-th smallest index (0-based).
    pub fn get(&self, l: usize) -> f64 {
        self.indices[l]
    }

    /// Reciprocal set `{2τ - x}` in ascending order.
    pub fn reciprocal(&self, scale: &LinguisticScale) -> Self {
        Self {
            indices: self.indices.iter().rev().map(|&x| scale.negate(x)).collect(),
        }
    }

    /// Whether every index is an integer.
    pub fn is_integral(&self) -> bool {
        self.indices.iter().all(|x| x.fract() == 0.0)
    }

    /// Pads the set to `len` terms by inserting `ζ·b⁺ + (1-ζ)·b⁻` and
    /// re-sorting. Sets already at least `len` long are returned unchanged.
    pub fn padded(&self, len: usize, zeta: f64) -> Self {
        if self.len() >= len {
            return self.clone();
        }
        let (lo, hi) = (self.lower(), self.upper());
        // Written as an offset from `lo` and clamped so the fill never leaves
        // `[lo, hi]` through rounding.
        let fill = (lo + zeta * (hi - lo)).clamp(lo, hi);
        let mut indices = self.indices.clone();
        indices.resize(len, fill);
        indices.sort_by(f64::total_cmp);
        Self { indices }
    }

    /// Elementwise `λ·I(b)`.
    pub fn scale(&self, lambda: f64) -> Self {
        Self {
            indices: self.indices.iter().map(|x| lambda * x).collect(),
        }
    }
}

/// Extends the shorter of two sets to the longer one's length using the
/// `ζ·b⁺ + (1-ζ)·b⁻` padding rule. Equal-length inputs are returned as is.
pub fn normalize_pair(a: &Hflts, b: &Hflts, zeta: f64) -> (Hflts, Hflts) {
    let len = a.len().max(b.len());
    (a.padded(len, zeta), b.padded(len, zeta))
}

/// Elementwise index sum of two equal-length sets. The result is not
/// clamped to the scale.
pub fn index_add(a: &Hflts, b: &Hflts) -> Result<Hflts> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(Hflts::from_sorted_unchecked(
        a.indices.iter().zip(&b.indices).map(|(x, y)| x + y).collect(),
    ))
}

/// Scalar multiple `λ·I(b)` for `λ ≥ 0`.
pub fn index_scale(a: &Hflts, lambda: f64) -> Result<Hflts> {
    if !(lambda >= 0.0) {
        return Err(Error::param("lambda", "must be non-negative"));
    }
    Ok(a.scale(lambda))
}
