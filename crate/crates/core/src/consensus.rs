//! Group decision making: perfect relations, expert weights, weighted
//! aggregation, worst consensus degree and the feedback loop.
//!
//! The group works on slice stacks padded to the longest cell found in
//! any expert's relation, so every aggregation is rank-matched.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::consistency::{algorithm1, stack_consistency, ConsistencyParams, ConsistencyReport, PriorityVector};
use crate::error::{Error, Result};
use crate::hflpr::Hflpr;
use crate::similarity::{stack_similarity, SimilarityMeasure};
use crate::slices::SliceStack;

/// How a perfectly consistent counterpart of a relation is built, slice by
/// slice, from the normalized index matrix `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PerfectMethod {
    /// With `h = φ/2τ`: `h̃_ij = A/(A+B)`, where
    /// `A = (Π_k h_ik h_kj)^(1/n)` and `B = (Π_k (1-h_ik)(1-h_kj))^(1/n)`.
    #[default]
    Multiplicative,
    /// `φ̃_ij = (1/n) Σ_k (φ_ik + φ_kj - τ)`, clamped to `[0, 2τ]`.
    Additive,
}

fn additive_entry(s: &[f64], n: usize, tau: f64, two_tau: f64, i: usize, j: usize) -> f64 {
    let sum: f64 = (0..n).map(|k| s[i * n + k] + s[k * n + j] - tau).sum();
    (sum / n as f64).clamp(0.0, two_tau)
}

fn multiplicative_entry(s: &[f64], n: usize, two_tau: f64, i: usize, j: usize) -> f64 {
    let mut ln_a = 0.0;
    let mut ln_b = 0.0;
    for k in 0..n {
        let hik = s[i * n + k] / two_tau;
        let hkj = s[k * n + j] / two_tau;
        ln_a += hik.ln() + hkj.ln();
        ln_b += (1.0 - hik).ln() + (1.0 - hkj).ln();
    }
    match (ln_a.is_finite(), ln_b.is_finite()) {
        (true, true) => two_tau / (1.0 + ((ln_b - ln_a) / n as f64).exp()),
        (false, true) => 0.0,
        (true, false) => two_tau,
        // Both products vanish: the ratio is undefined, use the additive
        // estimate for this cell instead.
        (false, false) => additive_entry(s, n, two_tau / 2.0, two_tau, i, j),
    }
}

/// Perfectly consistent counterpart of every slice. Cells are not
/// re-sorted, so slice `ℓ` of the output corresponds to slice `ℓ` of `s`.
pub fn perfect_stack(s: &SliceStack, method: PerfectMethod) -> SliceStack {
    let n = s.n();
    let two_tau = s.two_tau();
    let tau = two_tau / 2.0;
    let slices: Vec<Vec<f64>> = (0..s.len())
        .map(|l| {
            let m = s.slice(l);
            let mut out = vec![tau; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    out[i * n + j] = match method {
                        PerfectMethod::Additive => additive_entry(m, n, tau, two_tau, i, j),
                        PerfectMethod::Multiplicative => multiplicative_entry(m, n, two_tau, i, j),
                    };
                }
            }
            out
        })
        .collect();
    SliceStack::from_upper_slices(n, two_tau, &slices)
}

/// Perfectly consistent relation derived from `b` padded with `zeta`, with
/// each cell re-sorted into ascending order.
pub fn perfect_hflpr(b: &Hflpr, method: PerfectMethod, zeta: f64) -> Hflpr {
    perfect_stack(&b.slices(zeta, None), method)
        .sorted()
        .to_hflpr(b.scale())
}

/// Expert weights `p_h = sim(B^h, B̃^h) / Σ_g sim(B^g, B̃^g)`. Falls back to
/// uniform weights when every similarity is zero.
pub fn dm_weights(
    originals: &[SliceStack],
    perfects: &[SliceStack],
    measure: &SimilarityMeasure,
) -> Result<PriorityVector> {
    if originals.len() != perfects.len() {
        return Err(Error::DimensionMismatch {
            expected: originals.len(),
            found: perfects.len(),
        });
    }
    let sims: Vec<f64> = originals
        .iter()
        .zip(perfects)
        .map(|(a, b)| stack_similarity(a, b, measure))
        .collect();
    if sims.iter().sum::<f64>() <= 0.0 {
        warn!("all expert similarities are zero; using uniform expert weights");
        return Ok(PriorityVector::uniform(sims.len()));
    }
    PriorityVector::normalized(sims)
}

fn check_shapes(stacks: &[&SliceStack]) -> Result<()> {
    let first = stacks
        .first()
        .ok_or_else(|| Error::param("matrices", "at least one matrix is required"))?;
    for s in stacks {
        if s.n() != first.n() {
            return Err(Error::DimensionMismatch {
                expected: first.n(),
                found: s.n(),
            });
        }
        if s.len() != first.len() {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                found: s.len(),
            });
        }
    }
    Ok(())
}

/// Rank-matched weighted mean `Σ_h p_h · S_h` of equally shaped stacks.
pub fn hflwa_aggregate(stacks: &[&SliceStack], p: &PriorityVector) -> Result<SliceStack> {
    check_shapes(stacks)?;
    if p.len() != stacks.len() {
        return Err(Error::DimensionMismatch {
            expected: stacks.len(),
            found: p.len(),
        });
    }
    Ok(SliceStack::weighted_sum(stacks, p.weights()))
}

/// Worst consensus degree: the minimum similarity to the collective and
/// the expert achieving it (smallest index on ties).
pub fn wcd(matrices: &[SliceStack], collective: &SliceStack, measure: &SimilarityMeasure) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (h, m) in matrices.iter().enumerate() {
        let s = stack_similarity(m, collective, measure);
        if s < best.0 {
            best = (s, h);
        }
    }
    best
}

/// Row distance sums `Σ_j d(b_ij, b̄_ij)` for every alternative `i`.
pub fn row_deviations(b: &SliceStack, collective: &SliceStack) -> Vec<f64> {
    let n = b.n();
    (0..n)
        .map(|i| (0..n).map(|j| b.cell_abs_diff(collective, i, j)).sum())
        .collect()
}

/// Alternative whose row deviates most from the collective (smallest
/// index on ties).
pub fn max_deviation_target(b: &SliceStack, collective: &SliceStack) -> usize {
    let rows = row_deviations(b, collective);
    let mut best = 0;
    for (i, &r) in rows.iter().enumerate() {
        if r > rows[best] {
            best = i;
        }
    }
    best
}

/// Moves row `i` of `b` toward the collective:
/// `b_ij ← ζ·b_ij + (1-ζ)·b̄_ij` per slice for `j ≠ i`; column `i` follows
/// by reciprocity.
pub fn modify_row(b: &SliceStack, i: usize, collective: &SliceStack, zeta: f64) -> SliceStack {
    let mut out = b.clone();
    for l in 0..b.len() {
        for j in 0..b.n() {
            if j != i {
                let v = zeta * b.get(l, i, j) + (1.0 - zeta) * collective.get(l, i, j);
                out.set_pair(l, i, j, v);
            }
        }
    }
    out
}

/// A group of experts judging the same alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupProblem {
    pub matrices: Vec<Hflpr>,
    /// Consensus threshold `γ`.
    pub gamma: f64,
    /// Blend weight kept on the expert's own judgment during feedback.
    pub zeta_mod: f64,
    pub consistency: ConsistencyParams,
    pub perfect_method: PerfectMethod,
    pub similarity: SimilarityMeasure,
    /// Cap on feedback rounds; `None` means `n·k·10`.
    pub max_rounds: Option<usize>,
}

impl GroupProblem {
    /// A problem with default parameters (`ζ = 0.5`, multiplicative perfect
    /// relations, the default similarity).
    pub fn new(matrices: Vec<Hflpr>, gamma: f64) -> Self {
        Self {
            matrices,
            gamma,
            zeta_mod: 0.5,
            consistency: ConsistencyParams::default(),
            perfect_method: PerfectMethod::default(),
            similarity: SimilarityMeasure::default(),
            max_rounds: None,
        }
    }

    fn validate(&self) -> Result<(usize, usize)> {
        let k = self.matrices.len();
        if k < 2 {
            return Err(Error::TooFewDecisionMakers { k });
        }
        let first = &self.matrices[0];
        for m in &self.matrices[1..] {
            if m.n() != first.n() {
                return Err(Error::DimensionMismatch {
                    expected: first.n(),
                    found: m.n(),
                });
            }
            if m.scale() != first.scale() {
                return Err(Error::param("scale", "all experts must share one scale"));
            }
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::param("gamma", "must lie in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.zeta_mod) {
            return Err(Error::param("zeta", "must lie in [0, 1]"));
        }
        Ok((first.n(), k))
    }

    /// Effective cap on feedback rounds.
    pub fn round_cap(&self) -> usize {
        let n = self.matrices.first().map_or(0, Hflpr::n);
        self.max_rounds.unwrap_or(n * self.matrices.len() * 10)
    }
}

/// One consensus check, and the modification it triggered if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusRound {
    pub wcd: f64,
    /// 0-based expert with the lowest similarity.
    pub worst_dm: usize,
    /// 0-based alternative whose row was modified.
    pub worst_alternative: Option<usize>,
    pub modified: bool,
}

/// Full record of a group decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusTrace {
    /// Every consensus check in order; the last one either passed or hit the cap.
    pub rounds: Vec<ConsensusRound>,
    /// Number of feedback modifications applied.
    pub modifications: usize,
    pub dm_weights: PriorityVector,
    /// Collective perfect relation the experts are compared against.
    pub collective: Hflpr,
    /// Aggregate of the accepted (and possibly modified) relations.
    pub aggregated: Hflpr,
    pub final_hflgci: f64,
    /// 1-based slice giving the final priority.
    pub optimal_slice: usize,
    pub final_priority: PriorityVector,
    /// 0-based alternatives by descending priority.
    pub ranking: Vec<usize>,
    pub consistency_reports: Vec<ConsistencyReport>,
    /// Relations after the feedback loop, in normalized form.
    pub final_matrices: Vec<Hflpr>,
}

impl ConsensusTrace {
    /// Worst consensus degree at the final check.
    pub fn final_wcd(&self) -> f64 {
        self.rounds.last().map_or(1.0, |r| r.wcd)
    }
}

/// Consistency repair, expert weighting, aggregation and feedback until the
/// worst consensus degree reaches `γ`.
pub fn algorithm2(problem: &GroupProblem) -> Result<ConsensusTrace> {
    let (n, _k) = problem.validate()?;
    let scale = problem.matrices[0].scale().clone();
    let (alpha, _) = problem.consistency.resolve(n)?;
    let zeta = problem.consistency.zeta;

    let reports: Vec<ConsistencyReport> = problem
        .matrices
        .par_iter()
        .enumerate()
        .map(|(h, b)| {
            algorithm1(b, &problem.consistency).map_err(|e| Error::DecisionMaker {
                dm: h + 1,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;

    let len = problem.matrices.iter().map(Hflpr::max_len).max().unwrap_or(1);
    let originals: Vec<SliceStack> = problem.matrices.iter().map(|b| b.slices(zeta, Some(len))).collect();
    let perfects: Vec<SliceStack> = originals
        .iter()
        .map(|s| perfect_stack(s, problem.perfect_method))
        .collect();
    let p = dm_weights(&originals, &perfects, &problem.similarity)?;
    let collective = hflwa_aggregate(&perfects.iter().collect::<Vec<_>>(), &p)?.sorted();

    let mut accepted: Vec<SliceStack> = reports.iter().map(|r| r.final_matrix.slices(zeta, Some(len))).collect();
    let cap = problem.round_cap();
    let mut rounds = Vec::new();
    let mut modifications = 0;
    loop {
        let (w, h) = wcd(&accepted, &collective, &problem.similarity);
        if w >= problem.gamma {
            rounds.push(ConsensusRound {
                wcd: w,
                worst_dm: h,
                worst_alternative: None,
                modified: false,
            });
            break;
        }
        if modifications >= cap {
            rounds.push(ConsensusRound {
                wcd: w,
                worst_dm: h,
                worst_alternative: None,
                modified: false,
            });
            let trace = finish(
                problem,
                &scale,
                alpha,
                rounds,
                modifications,
                p,
                &collective,
                &accepted,
                reports,
            )?;
            return Err(Error::ConsensusCapExceeded {
                cap,
                trace: Box::new(trace),
            });
        }
        let i = max_deviation_target(&accepted[h], &collective);
        accepted[h] = modify_row(&accepted[h], i, &collective, problem.zeta_mod);
        modifications += 1;
        rounds.push(ConsensusRound {
            wcd: w,
            worst_dm: h,
            worst_alternative: Some(i),
            modified: true,
        });
    }
    finish(
        problem,
        &scale,
        alpha,
        rounds,
        modifications,
        p,
        &collective,
        &accepted,
        reports,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish(
    _problem: &GroupProblem,
    scale: &crate::scale::LinguisticScale,
    alpha: f64,
    rounds: Vec<ConsensusRound>,
    modifications: usize,
    p: PriorityVector,
    collective: &SliceStack,
    accepted: &[SliceStack],
    reports: Vec<ConsistencyReport>,
) -> Result<ConsensusTrace> {
    let aggregated = hflwa_aggregate(&accepted.iter().collect::<Vec<_>>(), &p)?;
    let c = stack_consistency(&aggregated, alpha)?;
    Ok(ConsensusTrace {
        rounds,
        modifications,
        dm_weights: p,
        collective: collective.to_hflpr(scale),
        aggregated: aggregated.to_hflpr(scale),
        final_hflgci: c.hflgci,
        optimal_slice: c.slice,
        ranking: c.priority.ranking(),
        final_priority: c.priority,
        consistency_reports: reports,
        final_matrices: accepted.iter().map(|s| s.to_hflpr(scale)).collect(),
    })
}

/// Weighted fusion `w*_i = Σ_m ϖ_m · w^m_i` of per-index priorities.
pub fn fuse_indices(
    priorities: &[PriorityVector],
    index_weights: &PriorityVector,
) -> Result<(PriorityVector, Vec<usize>)> {
    if priorities.len() != index_weights.len() {
        return Err(Error::DimensionMismatch {
            expected: priorities.len(),
            found: index_weights.len(),
        });
    }
    let n = priorities
        .first()
        .ok_or_else(|| Error::param("priorities", "at least one index is required"))?
        .len();
    let mut fused = vec![0.0; n];
    for (w, &m) in priorities.iter().zip(index_weights.weights()) {
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            });
        }
        for (f, x) in fused.iter_mut().zip(w.weights()) {
            *f += m * x;
        }
    }
    let fused = PriorityVector::normalized(fused)?;
    let ranking = fused.ranking();
    Ok((fused, ranking))
}

/// Outcome of several group problems fused with index weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiIndexOutcome {
    pub per_index: Vec<ConsensusTrace>,
    pub index_weights: PriorityVector,
    pub fused: PriorityVector,
    pub ranking: Vec<usize>,
}

/// Runs every group problem and fuses the resulting priorities.
pub fn solve_indices(problems: &[GroupProblem], index_weights: &PriorityVector) -> Result<MultiIndexOutcome> {
    let per_index: Vec<ConsensusTrace> = problems.iter().map(algorithm2).collect::<Result<_>>()?;
    let priorities: Vec<PriorityVector> = per_index.iter().map(|t| t.final_priority.clone()).collect();
    let (fused, ranking) = fuse_indices(&priorities, index_weights)?;
    Ok(MultiIndexOutcome {
        per_index,
        index_weights: index_weights.clone(),
        fused,
        ranking,
    })
}
