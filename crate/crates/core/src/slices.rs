//! Length-normalized slice representation of a preference relation.
//!
//! After padding every cell to a common length `L`, a relation splits into
//! `L` linguistic preference relations. Slice `ℓ` takes the `ℓ`-th smallest
//! index of each upper cell and fills the lower triangle by reciprocity, so
//! each slice is itself a reciprocal matrix.

use crate::hflpr::Hflpr;
use crate::hflts::Hflts;
use crate::scale::LinguisticScale;

/// `L` reciprocal `n × n` index matrices stored slice-major, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceStack {
    n: usize,
    len: usize,
    two_tau: f64,
    data: Vec<f64>,
}

impl SliceStack {
    /// Pads each upper cell of `b` to `len` terms with parameter `zeta` and
    /// splits the result into slices. `len` must be at least `b.max_len()`.
    pub fn from_hflpr(b: &Hflpr, zeta: f64, len: usize) -> Self {
        let n = b.n();
        let two_tau = b.scale().max_index();
        let mut s = Self::filled(n, len, two_tau);
        for i in 0..n {
            for j in (i + 1)..n {
                let c = b.cell(i, j).padded(len, zeta);
                for l in 0..len {
                    s.set_pair(l, i, j, c.get(l));
                }
            }
        }
        s
    }

    /// A stack with every entry at the neutral index `τ`.
    pub fn filled(n: usize, len: usize, two_tau: f64) -> Self {
        Self {
            n,
            len,
            two_tau,
            data: vec![two_tau / 2.0; n * n * len],
        }
    }

    /// Builds a stack from explicit slice matrices (row-major `n × n`).
    /// Only the strict upper triangle is read; the rest follows.
    pub fn from_upper_slices(n: usize, two_tau: f64, slices: &[Vec<f64>]) -> Self {
        let mut s = Self::filled(n, slices.len(), two_tau);
        for (l, m) in slices.iter().enumerate() {
            for i in 0..n {
                for j in (i + 1)..n {
                    s.set_pair(l, i, j, m[i * n + j]);
                }
            }
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of slices `L`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `2τ` of the underlying scale.
    pub fn two_tau(&self) -> f64 {
        self.two_tau
    }

    /// Entry `(i, j)` of slice `l`.
    pub fn get(&self, l: usize, i: usize, j: usize) -> f64 {
        self.data[(l * self.n + i) * self.n + j]
    }

    /// Sets `(i, j)` to `v` and `(j, i)` to `2τ - v` in slice `l`.
    pub fn set_pair(&mut self, l: usize, i: usize, j: usize, v: f64) {
        let n = self.n;
        self.data[(l * n + i) * n + j] = v;
        self.data[(l * n + j) * n + i] = self.two_tau - v;
    }

    /// Slice `l` as a row-major `n × n` matrix.
    pub fn slice(&self, l: usize) -> &[f64] {
        let m = self.n * self.n;
        &self.data[l * m..(l + 1) * m]
    }

    /// Values of cell `(i, j)` across slices.
    pub fn cell_values(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.len).map(|l| self.get(l, i, j)).collect()
    }

    /// Mean absolute index difference of cell `(i, j)` across slices.
    pub fn cell_abs_diff(&self, other: &SliceStack, i: usize, j: usize) -> f64 {
        debug_assert_eq!(self.len, other.len);
        (0..self.len)
            .map(|l| (self.get(l, i, j) - other.get(l, i, j)).abs())
            .sum::<f64>()
            / self.len as f64
    }

    /// Re-sorts each upper cell's values across slices into ascending order
    /// and rebuilds the lower triangle by reciprocity.
    pub fn sorted(&self) -> Self {
        let mut s = self.clone();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let mut v = self.cell_values(i, j);
                v.sort_by(f64::total_cmp);
                for (l, x) in v.into_iter().enumerate() {
                    s.set_pair(l, i, j, x);
                }
            }
        }
        s
    }

    /// Converts back to a relation with `L` terms per off-diagonal cell.
    /// Upper cells are sorted and clamped into the scale.
    pub fn to_hflpr(&self, scale: &LinguisticScale) -> Hflpr {
        Hflpr::from_upper_unchecked(self.n, scale.clone(), |i, j| {
            let mut v: Vec<f64> = self.cell_values(i, j).into_iter().map(|x| scale.clamp(x)).collect();
            v.sort_by(f64::total_cmp);
            Hflts::from_sorted_unchecked(v)
        })
    }

    /// Weighted slice-by-slice sum `Σ_h p_h · S_h`. All stacks must share
    /// `n`, `L` and the scale; `weights` must have one entry per stack.
    pub fn weighted_sum(stacks: &[&SliceStack], weights: &[f64]) -> Self {
        let first = stacks[0];
        let mut out = Self {
            data: vec![0.0; first.data.len()],
            ..first.clone()
        };
        for (s, &p) in stacks.iter().zip(weights) {
            for (o, x) in out.data.iter_mut().zip(&s.data) {
                *o += p * x;
            }
        }
        out
    }
}
