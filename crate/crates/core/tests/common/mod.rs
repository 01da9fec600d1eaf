//! Shared constructions and independent oracles for the integration tests.
//!
//! Nothing here calls into the numeric routines under test: priorities,
//! indices and perfect relations are recomputed from their closed forms.

#![allow(dead_code, clippy::needless_range_loop)]

use hflpr_core::{Hflpr, Hflts, LinguisticScale};

pub const TAU: f64 = 4.0;

pub fn scale() -> LinguisticScale {
    LinguisticScale::default()
}

/// Relation built from per-slice upper values `upper[l][i][j]` (only `i < j`
/// is read). Cells are sorted, so callers supply comonotone slices.
pub fn from_slices(upper: &[Vec<Vec<f64>>]) -> Hflpr {
    let n = upper[0].len();
    Hflpr::from_upper(n, scale(), |i, j| {
        Hflts::new(upper.iter().map(|s| s[i][j]).collect()).expect("comonotone slices")
    })
    .expect("indices in range")
}

/// Priority vector by the direct product formula with `powf`.
pub fn oracle_priority(phi: &[Vec<f64>], tau: f64) -> Vec<f64> {
    let n = phi.len();
    let g: Vec<f64> = (0..n)
        .map(|i| {
            let prod: f64 = (0..n).map(|j| 9f64.powf(phi[i][j] / tau - 1.0)).product();
            prod.powf(1.0 / n as f64)
        })
        .collect();
    let s: f64 = g.iter().sum();
    g.into_iter().map(|x| x / s).collect()
}

/// Consistency index of one full index matrix with its own priorities.
pub fn oracle_slice_index(phi: &[Vec<f64>], tau: f64, alpha: f64) -> f64 {
    let n = phi.len();
    let w = oracle_priority(phi, tau);
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += (phi[i][j] / tau - 2.0 * alpha * (w[i] - w[j]) - 1.0).powi(2);
        }
    }
    2.0 * s / ((n - 1) * (n - 2)) as f64
}

/// Pads an ascending list to `len` terms by inserting
/// `zeta·max + (1-zeta)·min` and re-sorting.
pub fn oracle_pad(v: &[f64], len: usize, zeta: f64) -> Vec<f64> {
    let mut out = v.to_vec();
    let fill = zeta * v[v.len() - 1] + (1.0 - zeta) * v[0];
    while out.len() < len {
        out.push(fill);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Index matrices of every slice: upper cells padded, lower cells mirrored.
pub fn oracle_slices(b: &Hflpr, zeta: f64) -> Vec<Vec<Vec<f64>>> {
    let n = b.n();
    let len = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| b.cell(i, j).len())
        .max()
        .unwrap();
    (0..len)
        .map(|l| {
            let mut phi = vec![vec![TAU; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = oracle_pad(b.cell(i, j).indices(), len, zeta)[l];
                    phi[i][j] = v;
                    phi[j][i] = 2.0 * TAU - v;
                }
            }
            phi
        })
        .collect()
}

/// Minimum slice index and its 1-based slice.
pub fn oracle_index(b: &Hflpr, alpha: f64, zeta: f64) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (l, phi) in oracle_slices(b, zeta).iter().enumerate() {
        let v = oracle_slice_index(phi, TAU, alpha);
        if v < best.0 - 1e-12 {
            best = (v, l + 1);
        }
    }
    best
}

/// Two-level priority vector that the geometric-mean extraction maps to
/// itself: one alternative (`low`) weighted `b`, the rest `a = ratio·b`.
/// Returns the weights and the `α` that makes it a fixed point.
pub fn fixed_point_weights(n: usize, low: usize, ratio: f64) -> (Vec<f64>, f64) {
    let k = (n - 1) as f64;
    let b = 1.0 / (k * ratio + 1.0);
    let a = ratio * b;
    let c = ratio.ln() / (a - b);
    let alpha = c / (2.0 * 9f64.ln());
    let w = (0..n).map(|i| if i == low { b } else { a }).collect();
    (w, alpha)
}

/// Perfect relation whose slice `perfect_slice` (0-based) is the
/// linear-form matrix `φ_ij = τ(1 + 2α(w_i - w_j))` of a fixed-point `w`,
/// and whose other slices shift every `v_i = 2ατ·w_i` by
/// `(ℓ - ℓ0)·0.05·(n-1-i)`, keeping every slice additively consistent and
/// the cells ascending. `None` when a shifted index leaves the scale.
pub fn try_perfect_with_index_zero(
    n: usize,
    low: usize,
    ratio: f64,
    slices: usize,
    perfect_slice: usize,
) -> Option<(Hflpr, f64)> {
    let (w, alpha) = fixed_point_weights(n, low, ratio);
    let v: Vec<f64> = w.iter().map(|x| 2.0 * alpha * TAU * x).collect();
    let upper: Vec<Vec<Vec<f64>>> = (0..slices)
        .map(|l| {
            let shift = l as f64 - perfect_slice as f64;
            let vl: Vec<f64> = (0..n).map(|i| v[i] + shift * 0.05 * (n - 1 - i) as f64).collect();
            (0..n).map(|i| (0..n).map(|j| TAU + vl[i] - vl[j]).collect()).collect()
        })
        .collect();
    let in_range = upper
        .iter()
        .flatten()
        .flatten()
        .all(|x| (-1e-12..=2.0 * TAU + 1e-12).contains(x));
    in_range.then(|| (from_slices(&clamp_all(upper)), alpha))
}

fn clamp_all(upper: Vec<Vec<Vec<f64>>>) -> Vec<Vec<Vec<f64>>> {
    upper
        .into_iter()
        .map(|s| {
            s.into_iter()
                .map(|r| r.into_iter().map(|x| x.clamp(0.0, 2.0 * TAU)).collect())
                .collect()
        })
        .collect()
}

/// As [`try_perfect_with_index_zero`], panicking when out of range.
pub fn perfect_with_index_zero(n: usize, low: usize, ratio: f64, slices: usize, perfect_slice: usize) -> (Hflpr, f64) {
    try_perfect_with_index_zero(n, low, ratio, slices, perfect_slice).expect("indices in range")
}

/// Additively consistent relation `φ^ℓ_ij = τ + v^ℓ_i - v^ℓ_j` with
/// `v^ℓ = v + ℓ·d`, `d` decreasing.
pub fn additive_perfect(v: &[f64], d: &[f64], slices: usize) -> Hflpr {
    let n = v.len();
    let upper: Vec<Vec<Vec<f64>>> = (0..slices)
        .map(|l| {
            (0..n)
                .map(|i| (0..n).map(|j| TAU + v[i] - v[j] + l as f64 * (d[i] - d[j])).collect())
                .collect()
        })
        .collect();
    from_slices(&upper)
}

/// Multiplicatively consistent relation `h^ℓ_ij = u^ℓ_i / (u^ℓ_i + u^ℓ_j)`
/// with `u^ℓ_i = u_i·exp(ℓ·d_i)`, `d` decreasing.
pub fn multiplicative_perfect(u: &[f64], d: &[f64], slices: usize) -> Hflpr {
    let n = u.len();
    let upper: Vec<Vec<Vec<f64>>> = (0..slices)
        .map(|l| {
            let ul: Vec<f64> = (0..n).map(|i| u[i] * (l as f64 * d[i]).exp()).collect();
            (0..n)
                .map(|i| (0..n).map(|j| 2.0 * TAU * ul[i] / (ul[i] + ul[j])).collect())
                .collect()
        })
        .collect();
    from_slices(&upper)
}

/// Largest `|h_ik + h_kj - 0.5 - h_ij|` over every slice of the fuzzy form.
pub fn transitivity_residual(b: &Hflpr) -> f64 {
    let h = b.to_hfpr();
    let n = b.n();
    let len = h[0][1].len();
    let mut worst: f64 = 0.0;
    for l in 0..len {
        // Lower cells hold the reciprocal in reverse order.
        let at = |i: usize, j: usize| {
            if i <= j {
                h[i][j][if i == j { 0 } else { l }]
            } else {
                h[i][j][len - 1 - l]
            }
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((at(i, k) + at(k, j) - 0.5 - at(i, j)).abs());
                }
            }
        }
    }
    worst
}

/// Largest absolute difference between two relations of equal shape.
pub fn max_abs_diff(a: &Hflpr, b: &Hflpr) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.n() {
        for j in 0..a.n() {
            let (x, y) = (a.cell(i, j).indices(), b.cell(i, j).indices());
            assert_eq!(x.len(), y.len(), "cell ({i},{j}) length");
            for (p, q) in x.iter().zip(y) {
                worst = worst.max((p - q).abs());
            }
        }
    }
    worst
}
