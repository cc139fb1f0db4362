use alloc::vec::Vec;

use crate::{Error, Result};

/// Correlation coefficient used to compare two score vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CorrelationCoefficient {
    Pearson,
    #[default]
    Spearman,
    /// Kendall's tau-b.
    Kendall,
}

impl CorrelationCoefficient {
    pub const ALL: [CorrelationCoefficient; 3] = [
        CorrelationCoefficient::Pearson,
        CorrelationCoefficient::Spearman,
        CorrelationCoefficient::Kendall,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorrelationCoefficient::Pearson => "pearson",
            CorrelationCoefficient::Spearman => "spearman",
            CorrelationCoefficient::Kendall => "kendall",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
    }

    pub fn compute(self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            CorrelationCoefficient::Pearson => pearson(x, y),
            CorrelationCoefficient::Spearman => spearman(x, y),
            CorrelationCoefficient::Kendall => kendall(x, y),
        }
    }

    /// Transforms a vector that will be reused as the `x` argument of many
    /// calls; see [`compute_prepared`](Self::compute_prepared).
    pub(crate) fn prepare(self, x: &[f64]) -> Vec<f64> {
        match self {
            CorrelationCoefficient::Spearman => average_ranks(x),
            _ => x.to_vec(),
        }
    }

    /// Same as [`compute`](Self::compute) with `x` already prepared.
    /// Bitwise equal to the unprepared result.
    pub(crate) fn compute_prepared(self, prepared_x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            CorrelationCoefficient::Spearman => {
                check(prepared_x, y)?;
                pearson(prepared_x, &average_ranks(y))
            }
            other => other.compute(prepared_x, y),
        }
    }
}

fn check(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 || x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput);
    }
    Ok(())
}

/// Product-moment correlation, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let (dx, dy) = (xi - mx, yi - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput);
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// 1-based ranks with tied values sharing the average of their positions.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let mut ranks = alloc::vec![0.0; x.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && x[idx[end]] == x[idx[start]] {
            end += 1;
        }
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation of the average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

fn tie_pairs(run: u64) -> u64 {
    run * (run - 1) / 2
}

/// Kendall's tau-b, in `O(n log n)` (Knight's algorithm).
pub fn kendall(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    let n = x.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]).then(y[i].total_cmp(&y[j])));

    // Pairs tied in x, and pairs tied in both.
    let (mut tied_x, mut tied_xy) = (0u64, 0u64);
    let (mut run_x, mut run_xy) = (1u64, 1u64);
    for w in idx.windows(2) {
        let (p, q) = (w[0], w[1]);
        if x[p] == x[q] {
            run_x += 1;
            if y[p] == y[q] {
                run_xy += 1;
            } else {
                tied_xy += tie_pairs(run_xy);
                run_xy = 1;
            }
        } else {
            tied_x += tie_pairs(run_x);
            tied_xy += tie_pairs(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    tied_x += tie_pairs(run_x);
    tied_xy += tie_pairs(run_xy);

    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let swaps = count_inversions(&mut ys);

    let mut tied_y = 0u64;
    let mut run_y = 1u64;
    for w in ys.windows(2) {
        if w[0] == w[1] {
            run_y += 1;
        } else {
            tied_y += tie_pairs(run_y);
            run_y = 1;
        }
    }
    tied_y += tie_pairs(run_y);

    let total = tie_pairs(n as u64);
    let s = total as i64 - tied_x as i64 - tied_y as i64 + tied_xy as i64 - 2 * swaps as i64;
    let den = libm::sqrt((total - tied_x) as f64 * (total - tied_y) as f64);
    if den == 0.0 {
        return Err(Error::DegenerateInput);
    }
    Ok((s as f64 / den).clamp(-1.0, 1.0))
}

/// Sorts `v` ascending and returns the number of strictly inverted pairs.
fn count_inversions(v: &mut [f64]) -> u64 {
    let n = v.len();
    let mut buf = alloc::vec![0.0; n];
    let mut swaps = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if v[j] < v[i] {
                    swaps += (mid - i) as u64;
                    buf[k] = v[j];
                    j += 1;
                } else {
                    buf[k] = v[i];
                    i += 1;
                }
                k += 1;
            }
            buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
            k += mid - i;
            buf[k..k + hi - j].copy_from_slice(&v[j..hi]);
            v[lo..hi].copy_from_slice(&buf[lo..hi]);
            lo = hi;
        }
        width *= 2;
    }
    swaps
}
