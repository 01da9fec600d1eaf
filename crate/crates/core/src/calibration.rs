//! Monte-Carlo calibration of critical values.
//!
//! Each sample is a random relation repaired in convergence mode; the
//! reported index of the last accepted iterate is collected. The suggested
//! critical value is `mean + 3·sqrt(variance)`.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::consistency::{algorithm1, ConsistencyParams, StopMode};
use crate::error::{Error, Result};
use crate::random::{random_hflpr, CellGenerator};
use crate::scale::LinguisticScale;

/// Width of the density histogram bins.
pub const DENSITY_BIN_WIDTH: f64 = 0.01;

/// Inputs of one calibration scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub n: usize,
    pub alpha: f64,
    pub samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub generator: CellGenerator,
    /// Repair parameters; the stop mode is forced to convergence.
    #[serde(default)]
    pub params: ConsistencyParams,
    #[serde(default)]
    pub scale: LinguisticScale,
}

impl CalibrationConfig {
    /// Scenario with default repair parameters and `α = (n-1)/2 + offset`.
    pub fn with_offset(n: usize, alpha_offset: f64, samples: usize, seed: u64) -> Self {
        Self {
            n,
            alpha: (n as f64 - 1.0) / 2.0 + alpha_offset,
            samples,
            seed,
            generator: CellGenerator::default(),
            params: ConsistencyParams::default(),
            scale: LinguisticScale::default(),
        }
    }
}

/// One histogram bin `[low, high)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityBin {
    pub bin_low: f64,
    pub bin_high: f64,
    pub count: usize,
}

/// Outcome of a calibration scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub n: usize,
    pub alpha: f64,
    /// Reported index per sample, in sample order.
    pub samples: Vec<f64>,
    pub mean: f64,
    /// Unbiased sample variance (0 for a single sample).
    pub variance: f64,
    /// `mean + 3·sqrt(variance)`.
    pub suggested: f64,
    /// Samples whose repair hit the iteration cap; their last index is used.
    pub capped: usize,
    pub density: Vec<DensityBin>,
}

/// Runs the scenario. Sample `k` draws from its own ChaCha stream, so
/// results do not depend on the number of worker threads.
pub fn calibrate(config: &CalibrationConfig) -> Result<CalibrationResult> {
    if config.samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    let params = ConsistencyParams {
        alpha: Some(config.alpha),
        stop_mode: StopMode::Convergence,
        ..config.params.clone()
    };
    params.resolve(config.n)?;

    let outcomes: Vec<Result<(f64, bool)>> = (0..config.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(k as u64);
            let b = random_hflpr(config.n, &config.scale, config.generator, &mut rng)?;
            match algorithm1(&b, &params) {
                Ok(r) => Ok((r.final_hflgci, false)),
                Err(Error::IterationCapExceeded { report }) => Ok((report.final_hflgci, true)),
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut samples = Vec::with_capacity(config.samples);
    let mut capped = 0;
    for o in outcomes {
        let (v, c) = o?;
        samples.push(v);
        capped += usize::from(c);
    }
    let (mean, variance) = mean_variance(&samples);
    Ok(CalibrationResult {
        n: config.n,
        alpha: config.alpha,
        mean,
        variance,
        suggested: mean + 3.0 * variance.sqrt(),
        capped,
        density: histogram(&samples, DENSITY_BIN_WIDTH),
        samples,
    })
}

/// Writes `scenario_n,alpha,sample_id,hflgci`, one row per sample.
pub fn write_samples_csv<W: Write>(results: &[CalibrationResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario_n", "alpha", "sample_id", "hflgci"])
        .map_err(csv_error)?;
    for r in results {
        for (k, v) in r.samples.iter().enumerate() {
            w.serialize((r.n, r.alpha, k, v)).map_err(csv_error)?;
        }
    }
    w.flush().map_err(|e| Error::param("output", e.to_string()))
}

/// Writes `n,alpha,mean,variance,suggested`, one row per scenario.
pub fn write_summary_csv<W: Write>(results: &[CalibrationResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "alpha", "mean", "variance", "suggested"])
        .map_err(csv_error)?;
    for r in results {
        w.serialize((r.n, r.alpha, r.mean, r.variance, r.suggested))
            .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::param("output", e.to_string()))
}

/// Writes `bin_low,bin_high,count` for one scenario's histogram.
pub fn write_density_csv<W: Write>(result: &CalibrationResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for bin in &result.density {
        w.serialize(bin).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::param("output", e.to_string()))
}

fn csv_error(e: csv::Error) -> Error {
    Error::param("output", e.to_string())
}

/// Sample mean and unbiased variance.
pub fn mean_variance(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, 0.0);
    }
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Fixed-width histogram from 0 up to the bin holding the largest value.
pub fn histogram(x: &[f64], width: f64) -> Vec<DensityBin> {
    let max = x.iter().cloned().fold(0.0_f64, f64::max);
    let bins = (max / width).floor() as usize + 1;
    let mut counts = vec![0usize; bins];
    for &v in x {
        let k = ((v.max(0.0) / width).floor() as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| DensityBin {
            bin_low: k as f64 * width,
            bin_high: (k + 1) as f64 * width,
            count,
        })
        .collect()
}
