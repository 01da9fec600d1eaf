//! Hesitant fuzzy linguistic preference relations.

use crate::error::ValidationError;
use crate::hflts::Hflts;
use crate::scale::LinguisticScale;
use crate::slices::SliceStack;

/// Tolerance for the reciprocity and diagonal checks. Accepts values
/// printed with four decimals whose pairwise sums are exact.
pub const RECIPROCITY_TOL: f64 = 1e-6;

/// An `n × n` reciprocal matrix of term sets on a linguistic scale.
///
/// Every cell is stored in ascending order. Reciprocity pairs the `ℓ`-th
/// smallest index of `b_ij` with the `ℓ`-th largest index of `b_ji`:
/// `I(b_ij^(ℓ)) + I(b_ji^(#b-ℓ+1)) = 2τ`. The diagonal is `{s_τ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hflpr {
    scale: LinguisticScale,
    cells: Vec<Vec<Hflts>>,
}

impl Hflpr {
    /// Builds a relation from its strict upper triangle. `upper(i, j)` is
    /// called for `i < j` (0-based); lower cells follow by reciprocity.
    pub fn from_upper<F>(n: usize, scale: LinguisticScale, mut upper: F) -> Result<Self, ValidationError>
    where
        F: FnMut(usize, usize) -> Hflts,
    {
        if n < 3 {
            return Err(ValidationError::TooSmall { n });
        }
        let mut cells = vec![vec![Hflts::singleton(scale.mid()); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let c = upper(i, j);
                check_cell(c.indices(), i, j, &scale)?;
                cells[j][i] = c.reciprocal(&scale);
                cells[i][j] = c;
            }
        }
        Ok(Self { scale, cells })
    }

    /// Builds a relation from the upper triangle without range checks.
    /// Callers guarantee every index lies in `[0, 2τ]`.
    pub(crate) fn from_upper_unchecked<F>(n: usize, scale: LinguisticScale, mut upper: F) -> Self
    where
        F: FnMut(usize, usize) -> Hflts,
    {
        let mut cells = vec![vec![Hflts::singleton(scale.mid()); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let c = upper(i, j);
                cells[j][i] = c.reciprocal(&scale);
                cells[i][j] = c;
            }
        }
        Self { scale, cells }
    }

    /// Number of alternatives.
    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn scale(&self) -> &LinguisticScale {
        &self.scale
    }

    /// Cell `b_ij` (0-based).
    pub fn cell(&self, i: usize, j: usize) -> &Hflts {
        &self.cells[i][j]
    }

    pub fn cells(&self) -> &[Vec<Hflts>] {
        &self.cells
    }

    /// Longest cell length in the matrix.
    pub fn max_len(&self) -> usize {
        self.cells.iter().flatten().map(Hflts::len).max().unwrap_or(1)
    }

    /// Whether every index is an integer.
    pub fn is_integral(&self) -> bool {
        self.cells.iter().flatten().all(Hflts::is_integral)
    }

    /// Rebuilds the relation with new upper cells; lower cells follow by
    /// reciprocity and every index is clamped into the scale.
    pub fn map_upper<F>(&self, mut f: F) -> Self
    where
        F: FnMut(usize, usize, &Hflts) -> Hflts,
    {
        let scale = self.scale.clone();
        Self::from_upper_unchecked(self.n(), scale.clone(), |i, j| {
            let c = f(i, j, &self.cells[i][j]);
            let clamped: Vec<f64> = c.indices().iter().map(|&x| scale.clamp(x)).collect();
            Hflts::from_sorted_unchecked(clamped)
        })
    }

    /// Raw index lists, row by row.
    pub fn to_raw(&self) -> Vec<Vec<Vec<f64>>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|c| c.indices().to_vec()).collect())
            .collect()
    }

    /// Hesitant fuzzy preference relation `h_ij^ℓ = I(b_ij^ℓ) / 2τ`.
    pub fn to_hfpr(&self) -> Vec<Vec<Vec<f64>>> {
        let m = self.scale.max_index();
        self.cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.indices().iter().map(|x| x / m).collect())
                    .collect()
            })
            .collect()
    }

    /// Normalized slice representation: every upper cell padded to `len`
    /// terms (at least the matrix maximum) with parameter `zeta`.
    pub fn slices(&self, zeta: f64, len: Option<usize>) -> SliceStack {
        SliceStack::from_hflpr(self, zeta, len.unwrap_or(0).max(self.max_len()))
    }

    /// Re-checks every invariant. Used on intermediate matrices in tests.
    pub fn revalidate(&self) -> Result<(), ValidationError> {
        validate_hflpr(&self.to_raw(), &self.scale).map(|_| ())
    }
}

fn check_cell(v: &[f64], i: usize, j: usize, scale: &LinguisticScale) -> Result<(), ValidationError> {
    let (ci, cj) = (i + 1, j + 1);
    if v.is_empty() {
        return Err(ValidationError::EmptyCell { i: ci, j: cj });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(ValidationError::NonNumeric { i: ci, j: cj });
    }
    if let Some(&value) = v.iter().find(|&&x| !scale.contains(x)) {
        return Err(ValidationError::IndexOutOfRange {
            i: ci,
            j: cj,
            value,
            max: scale.max_index(),
        });
    }
    if v.windows(2).any(|w| w[0] > w[1]) {
        return Err(ValidationError::OrderingViolation { i: ci, j: cj });
    }
    Ok(())
}

/// Validates a raw `n × n` matrix of index lists and returns the relation.
///
/// Checks run in this order: size and shape, every cell (non-empty,
/// finite, in range, ascending) in row-major order, the diagonal, then
/// each `(i, j)`/`(j, i)` pair for equal length and reciprocity.
pub fn validate_hflpr(raw: &[Vec<Vec<f64>>], scale: &LinguisticScale) -> Result<Hflpr, ValidationError> {
    let n = raw.len();
    if n < 3 {
        return Err(ValidationError::TooSmall { n });
    }
    for (r, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(ValidationError::NotSquare {
                row: r + 1,
                found: row.len(),
                expected: n,
            });
        }
    }
    for (i, row) in raw.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            check_cell(cell, i, j, scale)?;
        }
    }
    for (i, row) in raw.iter().enumerate() {
        let d = &row[i];
        if d.len() != 1 || (d[0] - scale.mid()).abs() > RECIPROCITY_TOL {
            return Err(ValidationError::DiagonalViolation { i: i + 1 });
        }
    }
    let two_tau = scale.max_index();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&raw[i][j], &raw[j][i]);
            if a.len() != b.len() {
                return Err(ValidationError::LengthMismatch { i: i + 1, j: j + 1 });
            }
            let len = a.len();
            let ok = (0..len).all(|l| (a[l] + b[len - 1 - l] - two_tau).abs() <= RECIPROCITY_TOL);
            if !ok {
                return Err(ValidationError::ReciprocityViolation { i: i + 1, j: j + 1 });
            }
        }
    }
    let cells = raw
        .iter()
        .map(|row| row.iter().map(|c| Hflts::from_sorted_unchecked(c.clone())).collect())
        .collect();
    Ok(Hflpr {
        scale: scale.clone(),
        cells,
    })
}
