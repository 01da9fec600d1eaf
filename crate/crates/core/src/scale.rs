//! Linguistic term sets `S = {s_0, ..., s_{2τ}}`.

use serde::{Deserialize, Serialize};

use crate::error::ValidationError;

/// Default half-granularity: nine terms `s_0..s_8`.
pub const DEFAULT_TAU: u32 = 4;

/// A symmetric linguistic scale with `2τ + 1` terms centred on `s_τ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinguisticScale {
    tau: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Default for LinguisticScale {
    fn default() -> Self {
        Self {
            tau: DEFAULT_TAU,
            labels: None,
        }
    }
}

impl LinguisticScale {
    /// Builds an unlabelled scale. `tau` must be positive.
    pub fn new(tau: u32) -> Result<Self, ValidationError> {
        if tau == 0 {
            return Err(ValidationError::InvalidScale {
                reason: "tau must be positive".into(),
            });
        }
        Ok(Self { tau, labels: None })
    }

    /// Builds a scale with one display label per term.
    pub fn with_labels(tau: u32, labels: Vec<String>) -> Result<Self, ValidationError> {
        let scale = Self::new(tau)?;
        if labels.len() != scale.granularity() {
            return Err(ValidationError::InvalidScale {
                reason: format!("expected {} labels, got {}", scale.granularity(), labels.len()),
            });
        }
        Ok(Self {
            labels: Some(labels),
            ..scale
        })
    }

    /// Half-granularity `τ`.
    pub fn tau(&self) -> u32 {
        self.tau
    }

    /// `τ` as a float, the index of the neutral term.
    pub fn mid(&self) -> f64 {
        f64::from(self.tau)
    }

    /// `2τ`, the largest term index.
    pub fn max_index(&self) -> f64 {
        2.0 * f64::from(self.tau)
    }

    /// Number of terms, `2τ + 1`.
    pub fn granularity(&self) -> usize {
        2 * self.tau as usize + 1
    }

    /// Display labels if present.
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of an integer term index, falling back to `s_k`.
    pub fn label(&self, index: usize) -> String {
        match &self.labels {
            Some(l) if index < l.len() => l[index].clone(),
            _ => format!("s_{index}"),
        }
    }

    /// Whether `x` lies in `[0, 2τ]` up to a small float tolerance.
    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && x >= -crate::EPS && x <= self.max_index() + crate::EPS
    }

    /// Reciprocal index `2τ - x`.
    pub fn negate(&self, x: f64) -> f64 {
        self.max_index() - x
    }

    /// Clamps `x` into `[0, 2τ]`.
    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(0.0, self.max_index())
    }
}
