//! Rank correlations that stay meaningful under heavy ties.
//!
//! Spearman's rho is the Pearson correlation of mid-ranks. The Adler variant
//! of Kendall's tau divides the pair statistic `S = concordant - discordant`
//! by the most extreme `S`, in the same direction, that any arrangement of the
//! two samples could reach given their tie structure, so a tie-consistent perfect ordering scores exactly 1
//! even when one variable has only a handful of distinct levels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::resampling::ConfidenceInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    Spearman,
    Adler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub method: CorrelationMethod,
    pub estimate: f64,
    pub ci: Option<ConfidenceInterval>,
}

/// Classification of all unordered index pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub concordant: u64,
    pub discordant: u64,
    pub ties_x_only: u64,
    pub ties_y_only: u64,
    pub ties_both: u64,
    pub s_statistic: i64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.concordant + self.discordant + self.ties_x_only + self.ties_y_only + self.ties_both
    }
}

fn pairs_of(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

fn check_not_constant(x: &[f64], y: &[f64]) -> Result<()> {
    for (name, v) in [("x", x), ("y", y)] {
        if v.len() < 2 || v.iter().all(|&a| a == v[0]) {
            return Err(Error::DegenerateInput(format!(
                "{name} has fewer than two distinct values; correlation is undefined"
            )));
        }
    }
    Ok(())
}

fn sorted_indices(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// Lengths of runs of equal values in ascending order.
fn tie_blocks(values: &[f64]) -> Vec<usize> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] != sorted[start] {
            blocks.push(i - start);
            start = i;
        }
    }
    blocks
}

/// Mid-ranks (1-based): tied values share the mean of the positions they occupy.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let order = sorted_indices(values);
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Spearman's rho as a bare coefficient.
pub fn spearman_coefficient(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    check_not_constant(x, y)?;
    Ok(pearson(&average_ranks(x), &average_ranks(y)))
}

/// Pearson correlation of the mid-rank vectors.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationEstimate> {
    Ok(CorrelationEstimate {
        method: CorrelationMethod::Spearman,
        estimate: spearman_coefficient(x, y)?,
        ci: None,
    })
}

fn sign(a: f64, b: f64) -> i8 {
    if a < b {
        -1
    } else if a > b {
        1
    } else {
        0
    }
}

/// Direct O(n²) classification of every unordered pair.
pub fn kendall_counts(x: &[f64], y: &[f64]) -> Result<PairCounts> {
    check_lengths(x, y)?;
    let mut c = PairCounts::default();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            match (sign(x[i], x[j]), sign(y[i], y[j])) {
                (0, 0) => c.ties_both += 1,
                (0, _) => c.ties_x_only += 1,
                (_, 0) => c.ties_y_only += 1,
                (a, b) if a == b => c.concordant += 1,
                _ => c.discordant += 1,
            }
        }
    }
    c.s_statistic = c.concordant as i64 - c.discordant as i64;
    Ok(c)
}

/// Pairs tied in neither variable when the i-th value of `bx`'s sorted
/// sequence sits next to the i-th value of `by`'s, given both as tie-block
/// lengths along the common order.
fn untied_pairs(n: usize, bx: &[usize], by: &[usize]) -> u64 {
    let tied_x: u64 = bx.iter().map(|&t| pairs_of(t as u64)).sum();
    let tied_y: u64 = by.iter().map(|&t| pairs_of(t as u64)).sum();

    // each segment between consecutive block boundaries is the overlap of
    // one x block and one y block
    let mut tied_both = 0;
    let (mut i, mut j) = (0, 0);
    let (mut left_x, mut left_y) = (bx.first().copied().unwrap_or(0), by.first().copied().unwrap_or(0));
    while i < bx.len() && j < by.len() {
        let overlap = left_x.min(left_y);
        tied_both += pairs_of(overlap as u64);
        left_x -= overlap;
        left_y -= overlap;
        if left_x == 0 {
            i += 1;
            left_x = bx.get(i).copied().unwrap_or(0);
        }
        if left_y == 0 {
            j += 1;
            left_y = by.get(j).copied().unwrap_or(0);
        }
    }
    pairs_of(n as u64) + tied_both - tied_x - tied_y
}

/// Largest `S` attainable by re-pairing the values of `x` and `y`.
///
/// The maximum is reached by pairing the i-th smallest `x` with the i-th
/// smallest `y`. That arrangement has no discordant pairs, so its `S` is the
/// number of pairs tied in neither variable: `N - Tx - Ty + Txy`, where `Txy`
/// counts pairs inside the overlap of an x tie block and a y tie block.
pub fn adler_max_s(x: &[f64], y: &[f64]) -> Result<u64> {
    check_lengths(x, y)?;
    Ok(untied_pairs(x.len(), &tie_blocks(x), &tie_blocks(y)))
}

/// Smallest `S` attainable by re-pairing, from the anti-sorted arrangement.
///
/// With ties in both variables this is generally not `-adler_max_s`, because
/// reversing one order changes which tie blocks overlap.
pub fn adler_min_s(x: &[f64], y: &[f64]) -> Result<i64> {
    check_lengths(x, y)?;
    let mut by = tie_blocks(y);
    by.reverse();
    Ok(-(untied_pairs(x.len(), &tie_blocks(x), &by) as i64))
}

/// Adler's tau as a bare coefficient.
pub fn adler_coefficient(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    check_not_constant(x, y)?;
    let s = kendall_counts(x, y)?.s_statistic;
    let bound = if s >= 0 {
        adler_max_s(x, y)? as f64
    } else {
        -(adler_min_s(x, y)? as f64)
    };
    Ok(s as f64 / bound)
}

/// Kendall's `S` normalized by the extreme value it could reach in the same
/// direction under the observed tie structure: the attainable maximum for
/// positive `S`, the magnitude of the attainable minimum for negative `S`.
pub fn adler_tau(x: &[f64], y: &[f64]) -> Result<CorrelationEstimate> {
    Ok(CorrelationEstimate {
        method: CorrelationMethod::Adler,
        estimate: adler_coefficient(x, y)?,
        ci: None,
    })
}
