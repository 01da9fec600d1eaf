//! Random preference relations for Monte-Carlo experiments and fuzzing.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ValidationError};
use crate::hflpr::Hflpr;
use crate::hflts::Hflts;
use crate::scale::LinguisticScale;

/// How the bounds `lo ≤ hi` of each random upper cell are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CellGenerator {
    /// Uniform over the `(2τ+1)(2τ+2)/2` ordered pairs `lo ≤ hi`.
    #[default]
    UniformPair,
    /// Two independent uniform draws on `0..=2τ`, sorted.
    SortedDraws,
}

/// Draws one consecutive run `{lo..hi}` on the scale.
pub fn random_run<R: Rng + ?Sized>(scale: &LinguisticScale, generator: CellGenerator, rng: &mut R) -> Hflts {
    let g = scale.granularity() as u32;
    let (lo, hi) = match generator {
        CellGenerator::UniformPair => {
            let mut k = rng.random_range(0..g * (g + 1) / 2);
            let mut lo = 0;
            // Row `lo` holds the pairs (lo, lo..g-1), g - lo of them.
            while k >= g - lo {
                k -= g - lo;
                lo += 1;
            }
            (lo, lo + k)
        }
        CellGenerator::SortedDraws => {
            let a = rng.random_range(0..g);
            let b = rng.random_range(0..g);
            (a.min(b), a.max(b))
        }
    };
    Hflts::run(lo, hi).expect("lo <= hi by construction")
}

/// A random relation whose upper cells are independent consecutive runs.
pub fn random_hflpr<R: Rng + ?Sized>(
    n: usize,
    scale: &LinguisticScale,
    generator: CellGenerator,
    rng: &mut R,
) -> Result<Hflpr> {
    if n < 3 {
        return Err(ValidationError::TooSmall { n }.into());
    }
    Ok(Hflpr::from_upper(n, scale.clone(), |_, _| {
        random_run(scale, generator, rng)
    })?)
}
