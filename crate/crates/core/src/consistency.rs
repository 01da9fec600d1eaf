//! Geometric consistency index, priority extraction and iterative repair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hflpr::Hflpr;
use crate::hflts::Hflts;
use crate::scale::LinguisticScale;
use crate::slices::SliceStack;

/// Base of the exponential scale transform `r_ij = 9^(φ_ij/τ - 1)`.
pub const SAATY_BASE: f64 = 9.0;

/// Slack used when comparing slice indices so that the smallest slice
/// wins ties despite rounding noise.
const TIE_TOL: f64 = 1e-12;

/// Normalized, strictly positive weights over alternatives (or experts).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PriorityVector {
    weights: Vec<f64>,
}

impl PriorityVector {
    /// Accepts weights that are positive and sum to 1 within `1e-9`.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::param("weights", "must be non-empty, finite and positive"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::param("weights", format!("must sum to 1, got {sum}")));
        }
        Ok(Self { weights })
    }

    /// Divides positive raw scores by their sum.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::param("weights", "scores must have a positive finite sum"));
        }
        Self::new(raw.into_iter().map(|x| x / sum).collect())
    }

    /// The uniform vector `1/n`.
    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// 0-based indices sorted by descending weight; ties keep the lower index first.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.weights.len()).collect();
        idx.sort_by(|&a, &b| self.weights[b].total_cmp(&self.weights[a]).then(a.cmp(&b)));
        idx
    }

    /// Ranking rendered as `X1 > X3 > X2`.
    pub fn ranking_string(&self) -> String {
        format_ranking(&self.ranking())
    }
}

/// Renders 0-based ranking indices as `X1 > X3 > X2`.
pub fn format_ranking(ranking: &[usize]) -> String {
    ranking
        .iter()
        .map(|i| format!("X{}", i + 1))
        .collect::<Vec<_>>()
        .join(" > ")
}

/// Priority vector of one reciprocal index matrix (row-major `n × n`):
/// `w_i ∝ (Π_j 9^(φ_ij/τ - 1))^(1/n)`.
pub fn slice_priority(slice: &[f64], n: usize, tau: f64) -> PriorityVector {
    let ln9 = SAATY_BASE.ln();
    let exps: Vec<f64> = (0..n)
        .map(|i| {
            let s: f64 = (0..n).map(|j| slice[i * n + j] / tau - 1.0).sum();
            ln9 * s / n as f64
        })
        .collect();
    let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let g: Vec<f64> = exps.iter().map(|e| (e - m).exp()).collect();
    let sum: f64 = g.iter().sum();
    PriorityVector {
        weights: g.into_iter().map(|x| x / sum).collect(),
    }
}

/// One priority vector per slice of the relation normalized with `zeta`.
pub fn priority_vectors(b: &Hflpr, zeta: f64) -> Vec<PriorityVector> {
    let s = b.slices(zeta, None);
    let tau = b.scale().mid();
    (0..s.len()).map(|l| slice_priority(s.slice(l), s.n(), tau)).collect()
}

/// Consistency index of one slice:
/// `2/((n-1)(n-2)) Σ_{i<j} (φ_ij/τ - 2α(w_i - w_j) - 1)²`.
pub fn hflgci_for_slice(slice: &[f64], n: usize, tau: f64, w: &PriorityVector, alpha: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::UndefinedForN { n });
    }
    let w = w.weights();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = slice[i * n + j] / tau - 2.0 * alpha * (w[i] - w[j]) - 1.0;
            s += r * r;
        }
    }
    Ok(2.0 * s / ((n - 1) * (n - 2)) as f64)
}

/// Minimum slice index together with the achieving slice and its weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceConsistency {
    pub hflgci: f64,
    /// 1-based slice position `ℓ*`.
    pub slice: usize,
    pub priority: PriorityVector,
}

/// Evaluates every slice of a stack and keeps the minimum index; the
/// smallest `ℓ` wins ties.
pub fn stack_consistency(s: &SliceStack, alpha: f64) -> Result<SliceConsistency> {
    let n = s.n();
    let tau = s.two_tau() / 2.0;
    let mut best: Option<SliceConsistency> = None;
    for l in 0..s.len() {
        let w = slice_priority(s.slice(l), n, tau);
        let v = hflgci_for_slice(s.slice(l), n, tau, &w, alpha)?;
        if best.as_ref().is_none_or(|b| v < b.hflgci - TIE_TOL) {
            best = Some(SliceConsistency {
                hflgci: v,
                slice: l + 1,
                priority: w,
            });
        }
    }
    best.ok_or(Error::UndefinedForN { n })
}

/// Minimum consistency index over the slices of `b` padded with `zeta`.
pub fn consistency_index(b: &Hflpr, alpha: f64, zeta: f64) -> Result<SliceConsistency> {
    stack_consistency(&b.slices(zeta, None), alpha)
}

/// Single-term relation `I(l̄_ij) = 2τ · w_i / (w_i + w_j)`.
pub fn perfect_lpr(w: &PriorityVector, scale: &LinguisticScale) -> Result<Hflpr> {
    let w = w.weights();
    let m = scale.max_index();
    Ok(Hflpr::from_upper(w.len(), scale.clone(), |i, j| {
        Hflts::singleton(m * w[i] / (w[i] + w[j]))
    })?)
}

/// Blends every index of `b` toward the matching single-term target:
/// `I ← β·I + (1-β)·I(l̄_ij)`. Cell lengths are preserved.
pub fn adjust(b: &Hflpr, lbar: &Hflpr, beta: f64) -> Result<Hflpr> {
    if lbar.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: b.n(),
            found: lbar.n(),
        });
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::param("beta", "must lie in [0, 1]"));
    }
    Ok(b.map_upper(|i, j, c| {
        let t = lbar.cell(i, j).get(0);
        Hflts::from_sorted_unchecked(c.indices().iter().map(|x| beta * x + (1.0 - beta) * t).collect())
    }))
}

/// When the repair loop stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StopMode {
    /// Stop once the index is at or below the critical value.
    #[default]
    Threshold,
    /// Stop once an adjustment lowers the index by at most `epsilon` and
    /// report the matrix before that adjustment.
    Convergence,
}

/// Parameters of the repair loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConsistencyParams {
    /// Scale factor `α`; `None` resolves to `(n-1)/2`.
    pub alpha: Option<f64>,
    /// Weight kept on the current matrix in each adjustment.
    pub beta: f64,
    /// Critical value; `None` looks up the published table.
    pub threshold: Option<f64>,
    /// Convergence tolerance.
    pub epsilon: f64,
    /// Maximum number of recorded index evaluations.
    pub max_iterations: usize,
    pub stop_mode: StopMode,
    /// Padding parameter used when cell lengths differ.
    pub zeta: f64,
}

impl Default for ConsistencyParams {
    fn default() -> Self {
        Self {
            alpha: None,
            beta: 0.5,
            threshold: None,
            epsilon: 1e-4,
            max_iterations: 50,
            stop_mode: StopMode::Threshold,
            zeta: 1.0,
        }
    }
}

impl ConsistencyParams {
    /// `α` for `n` alternatives, defaulting to `(n-1)/2`.
    pub fn alpha_for(&self, n: usize) -> f64 {
        self.alpha.unwrap_or((n as f64 - 1.0) / 2.0)
    }

    /// Checks ranges for a problem with `n` alternatives and resolves the
    /// threshold needed in threshold mode.
    pub fn resolve(&self, n: usize) -> Result<(f64, Option<f64>)> {
        if n < 3 {
            return Err(Error::UndefinedForN { n });
        }
        let alpha = self.alpha_for(n);
        if !alpha.is_finite() || alpha < (n as f64 - 1.0) / 2.0 - 1e-12 {
            return Err(Error::param(
                "alpha",
                format!("must be at least (n-1)/2 = {}", (n as f64 - 1.0) / 2.0),
            ));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::param("beta", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.zeta) {
            return Err(Error::param("zeta", "must lie in [0, 1]"));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::param("epsilon", "must be non-negative"));
        }
        if self.max_iterations == 0 {
            return Err(Error::param("max_iterations", "must be positive"));
        }
        let threshold = match (self.threshold, self.stop_mode) {
            (Some(t), _) if !(t >= 0.0) => return Err(Error::param("threshold", "must be non-negative")),
            (Some(t), _) => Some(t),
            (None, StopMode::Threshold) => Some(critical_value_for_alpha(n, alpha)?),
            (None, StopMode::Convergence) => critical_value_for_alpha(n, alpha).ok(),
        };
        Ok((alpha, threshold))
    }
}

/// Result of the repair loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    /// The accepted (or last) relation.
    pub final_matrix: Hflpr,
    /// Number of recorded index evaluations, equal to the trace length.
    pub iterations: usize,
    /// Number of adjustments applied to reach `final_matrix`.
    pub adjustments: usize,
    /// Minimum index per recorded evaluation.
    pub hflgci_trace: Vec<f64>,
    /// Index of `final_matrix`.
    pub final_hflgci: f64,
    /// 1-based slice achieving the minimum for `final_matrix`.
    pub optimal_slice: usize,
    pub priority: PriorityVector,
    /// Whether the stop rule fired before the iteration cap.
    pub accepted: bool,
    /// In convergence mode, the index of the rejected next iterate.
    pub probe_hflgci: Option<f64>,
    pub alpha: f64,
    pub threshold: Option<f64>,
    pub stop_mode: StopMode,
}

/// Runs the repair loop and returns the accepted relation.
pub fn algorithm1(b: &Hflpr, params: &ConsistencyParams) -> Result<ConsistencyReport> {
    algorithm1_observed(b, params, |_| {})
}

/// As [`algorithm1`], calling `observe` on every adjusted intermediate
/// relation.
pub fn algorithm1_observed<F>(b: &Hflpr, params: &ConsistencyParams, mut observe: F) -> Result<ConsistencyReport>
where
    F: FnMut(&Hflpr),
{
    let n = b.n();
    let (alpha, threshold) = params.resolve(n)?;
    let mut current = b.clone();
    let mut trace: Vec<f64> = Vec::new();
    let mut previous: Option<(Hflpr, SliceConsistency)> = None;

    let report = |m: Hflpr, c: SliceConsistency, trace: Vec<f64>, accepted: bool, probe: Option<f64>| {
        let iterations = trace.len();
        ConsistencyReport {
            final_matrix: m,
            iterations,
            adjustments: iterations.saturating_sub(1),
            hflgci_trace: trace,
            final_hflgci: c.hflgci,
            optimal_slice: c.slice,
            priority: c.priority,
            accepted,
            probe_hflgci: probe,
            alpha,
            threshold,
            stop_mode: params.stop_mode,
        }
    };

    loop {
        let c = consistency_index(&current, alpha, params.zeta)?;
        if params.stop_mode == StopMode::Convergence {
            if let Some((pm, pc)) = previous.take() {
                if pc.hflgci - c.hflgci <= params.epsilon {
                    return Ok(report(pm, pc, trace, true, Some(c.hflgci)));
                }
            }
        }
        trace.push(c.hflgci);
        if params.stop_mode == StopMode::Threshold && c.hflgci <= threshold.unwrap_or(f64::INFINITY) {
            return Ok(report(current, c, trace, true, None));
        }
        if trace.len() >= params.max_iterations {
            return Err(Error::IterationCapExceeded {
                report: Box::new(report(current, c, trace, false, None)),
            });
        }
        let lbar = perfect_lpr(&c.priority, b.scale())?;
        let next = adjust(&current, &lbar, params.beta)?;
        observe(&next);
        previous = Some((std::mem::replace(&mut current, next), c));
    }
}

/// Published critical values, rows `n = 3..=8`, columns `α - (n-1)/2`
/// in `{0, 0.2, 0.4, 0.6}`.
pub const CRITICAL_VALUES: [[f64; 4]; 6] = [
    [0.1816, 0.3836, 0.6704, 1.1081],
    [0.1559, 0.2708, 0.4248, 0.6230],
    [0.1738, 0.2448, 0.3477, 0.4604],
    [0.1606, 0.2228, 0.2908, 0.3748],
    [0.1625, 0.2051, 0.2586, 0.3182],
    [0.1537, 0.1914, 0.2360, 0.2799],
];

/// Published mean and variance of the converged index, same layout as
/// [`CRITICAL_VALUES`].
pub const CALIBRATION_MOMENTS: [[(f64, f64); 4]; 6] = [
    [(0.0431, 0.0021), (0.1047, 0.0086), (0.1996, 0.0246), (0.3321, 0.0669)],
    [(0.0528, 0.0015), (0.0905, 0.0036), (0.1431, 0.0088), (0.2199, 0.0181)],
    [(0.0595, 0.0012), (0.0853, 0.0028), (0.1234, 0.0056), (0.1638, 0.0098)],
    [(0.0594, 0.0011), (0.0837, 0.0022), (0.1100, 0.0036), (0.1411, 0.0061)],
    [(0.0616, 0.0011), (0.0771, 0.0018), (0.1011, 0.0028), (0.1217, 0.0043)],
    [(0.0597, 0.0010), (0.0742, 0.0015), (0.0912, 0.0023), (0.1113, 0.0032)],
];

/// Column offsets of the published tables.
pub const ALPHA_OFFSETS: [f64; 4] = [0.0, 0.2, 0.4, 0.6];

fn table_position(n: usize, offset: f64) -> Result<(usize, usize)> {
    let col = ALPHA_OFFSETS.iter().position(|o| (o - offset).abs() < 1e-9);
    match (n, col) {
        (3..=8, Some(c)) => Ok((n - 3, c)),
        _ => Err(Error::OutOfTable { n, offset }),
    }
}

/// Published critical value for `n` and `α = (n-1)/2 + offset`.
pub fn critical_value(n: usize, alpha_offset: f64) -> Result<f64> {
    let (r, c) = table_position(n, alpha_offset)?;
    Ok(CRITICAL_VALUES[r][c])
}

/// Published critical value for an absolute `α`.
pub fn critical_value_for_alpha(n: usize, alpha: f64) -> Result<f64> {
    critical_value(n, alpha - (n as f64 - 1.0) / 2.0)
}

/// Published `(mean, variance)` for `n` and an offset.
pub fn calibration_moments(n: usize, alpha_offset: f64) -> Result<(f64, f64)> {
    let (r, c) = table_position(n, alpha_offset)?;
    Ok(CALIBRATION_MOMENTS[r][c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hflpr::validate_hflpr;

    fn scale() -> LinguisticScale {
        LinguisticScale::default()
    }

    fn single(v: [f64; 3]) -> Hflpr {
        Hflpr::from_upper(3, scale(), |i, j| Hflts::singleton(v[i + j - 1])).unwrap()
    }

    #[test]
    fn indifference_gives_uniform_weights_and_zero_index() {
        let b = single([4.0, 4.0, 4.0]);
        for w in priority_vectors(&b, 0.5) {
            for x in w.weights() {
                assert!((x - 1.0 / 3.0).abs() < 1e-12);
            }
        }
        let c = consistency_index(&b, 1.7, 0.5).unwrap();
        assert!(c.hflgci.abs() < 1e-12);
        assert_eq!(c.slice, 1);
    }

    #[test]
    fn strong_preferences_order_weights() {
        let b = single([6.0, 6.0, 6.0]);
        let w = &priority_vectors(&b, 0.5)[0];
        let x = w.weights();
        assert!(x[0] > x[1] && x[1] > x[2]);
    }

    #[test]
    fn perfect_lpr_values() {
        assert!(PriorityVector::new(vec![0.8, 0.3]).is_err());
        assert!(PriorityVector::new(vec![1.0, 0.0]).is_err());
        let u = perfect_lpr(&PriorityVector::uniform(4), &scale()).unwrap();
        assert!(u.cells().iter().flatten().all(|c| c.indices() == [4.0]));
        let w = PriorityVector::new(vec![0.5, 0.125, 0.375]).unwrap();
        let l = perfect_lpr(&w, &scale()).unwrap();
        assert!((l.cell(0, 1).get(0) - 6.4).abs() < 1e-12);
    }

    #[test]
    fn adjust_extremes() {
        let raw = vec![
            vec![vec![4.0], vec![5.0, 6.0], vec![4.0, 5.0, 6.0]],
            vec![vec![2.0, 3.0], vec![4.0], vec![2.0, 3.0, 4.0]],
            vec![vec![2.0, 3.0, 4.0], vec![4.0, 5.0, 6.0], vec![4.0]],
        ];
        let b = validate_hflpr(&raw, &scale()).unwrap();
        let l = perfect_lpr(&PriorityVector::new(vec![0.5, 0.2, 0.3]).unwrap(), &scale()).unwrap();
        assert_eq!(adjust(&b, &l, 1.0).unwrap(), b);
        let z = adjust(&b, &l, 0.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for x in z.cell(i, j).indices() {
                    assert!((x - l.cell(i, j).get(0)).abs() < 1e-12);
                }
            }
        }
        assert!(adjust(&b, &l, 1.5).is_err());
    }

    #[test]
    fn undefined_for_two_alternatives() {
        let w = PriorityVector::uniform(2);
        assert!(matches!(
            hflgci_for_slice(&[4.0; 4], 2, 4.0, &w, 1.0),
            Err(Error::UndefinedForN { n: 2 })
        ));
    }

    #[test]
    fn critical_table_lookups() {
        assert_eq!(critical_value(3, 0.0).unwrap(), 0.1816);
        assert_eq!(critical_value(3, 0.2).unwrap(), 0.3836);
        assert_eq!(critical_value(8, 0.6).unwrap(), 0.2799);
        assert_eq!(critical_value_for_alpha(3, 1.2).unwrap(), 0.3836);
        assert!(critical_value(9, 0.0).is_err());
        assert!(critical_value(3, 0.1).is_err());
    }

    #[test]
    fn consistent_input_accepted_without_adjustment() {
        let w = PriorityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let alpha = 1.0;
        // Entries chosen so the slice satisfies φ_ij/τ - 1 = 2α(w_i - w_j).
        let b = Hflpr::from_upper(3, scale(), |i, j| {
            let x = w.weights();
            Hflts::singleton(4.0 * (1.0 + 2.0 * alpha * (x[i] - x[j])))
        })
        .unwrap();
        let params = ConsistencyParams {
            alpha: Some(alpha),
            threshold: Some(0.1816),
            ..Default::default()
        };
        let r = algorithm1(&b, &params).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.adjustments, 0);
        assert_eq!(r.final_matrix, b);
    }

    #[test]
    fn ranking_breaks_ties_by_index() {
        let w = PriorityVector::new(vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(w.ranking(), vec![1, 0, 2]);
        assert_eq!(w.ranking_string(), "X2 > X1 > X3");
    }

    #[test]
    fn params_validation() {
        let p = ConsistencyParams {
            alpha: Some(0.5),
            ..Default::default()
        };
        assert!(p.resolve(3).is_err());
        let p = ConsistencyParams {
            beta: 1.5,
            ..Default::default()
        };
        assert!(p.resolve(3).is_err());
        let p = ConsistencyParams::default();
        assert_eq!(p.resolve(4).unwrap(), (1.5, Some(0.1559)));
        assert!(ConsistencyParams::default().resolve(9).is_err());
        let p = ConsistencyParams {
            stop_mode: StopMode::Convergence,
            ..Default::default()
        };
        assert_eq!(p.resolve(9).unwrap(), (4.0, None));
    }
}
