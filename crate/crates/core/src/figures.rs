//! Data behind the per-quality box plots and the quality-stacked histogram.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dataset::{Dataset, Quality};
use crate::descriptive::{median_sorted, quantile_sorted, sorted_copy, GroupLabel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxPlotSummary {
    pub quality_label: GroupLabel,
    pub n: usize,
    pub minimum: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub maximum: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

/// Quartiles by linear interpolation of order statistics, Tukey whiskers
/// (most extreme points within 1.5 IQR of the quartiles), outliers beyond.
///
/// A whisker never retracts past its quartile: when no point lies between a
/// fence and the adjacent quartile the whisker sits on the quartile.
pub fn boxplot_summary(values: &[f64]) -> Result<BoxPlotSummary> {
    labelled_boxplot(GroupLabel::All, values)
}

pub fn labelled_boxplot(label: GroupLabel, values: &[f64]) -> Result<BoxPlotSummary> {
    if values.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let sorted = sorted_copy(values);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let (fence_low, fence_high) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);

    let inside = sorted.iter().copied().filter(|v| (fence_low..=fence_high).contains(v));
    let whisker_low = inside.clone().next().map_or(q1, |v| v.min(q1));
    let whisker_high = inside.last().map_or(q3, |v| v.max(q3));
    let outliers = sorted
        .iter()
        .copied()
        .filter(|&v| v < fence_low || v > fence_high)
        .collect();

    Ok(BoxPlotSummary {
        quality_label: label,
        n: sorted.len(),
        minimum: sorted[0],
        q1,
        median: median_sorted(&sorted),
        q3,
        maximum: sorted[sorted.len() - 1],
        whisker_low,
        whisker_high,
        outliers,
    })
}

/// One box plot per observed quality score, ascending.
pub fn boxplots_by_quality(d: &Dataset) -> Result<Vec<BoxPlotSummary>> {
    crate::dataset::partition_by_quality(d)
        .into_iter()
        .map(|(q, values)| labelled_boxplot(GroupLabel::Quality(q), &values))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    /// Count per observed quality score; zero entries are kept.
    pub counts: BTreeMap<Quality, usize>,
}

impl HistogramBin {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StackedHistogram {
    pub bin_width: f64,
    pub origin: f64,
    pub bins: Vec<HistogramBin>,
}

impl StackedHistogram {
    pub fn total(&self) -> usize {
        self.bins.iter().map(HistogramBin::total).sum()
    }
}

fn edge(origin: f64, width: f64, k: i64) -> f64 {
    origin + k as f64 * width
}

/// Index `k` with `origin + k*w <= v < origin + (k+1)*w`, using the same edge
/// arithmetic that is reported.
fn bin_index(v: f64, origin: f64, width: f64) -> i64 {
    let mut k = ((v - origin) / width).floor() as i64;
    while v < edge(origin, width, k) {
        k -= 1;
    }
    while v >= edge(origin, width, k + 1) {
        k += 1;
    }
    k
}

/// Left-closed bins `[origin + k*w, origin + (k+1)*w)` covering exactly the
/// occupied range, with counts split by quality score.
pub fn histogram(d: &Dataset, bin_width: f64, origin: f64) -> Result<StackedHistogram> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::InvalidConfig(format!("bin width {bin_width} must be positive")));
    }
    if !origin.is_finite() {
        return Err(Error::InvalidConfig(format!("bin origin {origin} must be finite")));
    }
    let labelled: Vec<(i64, Quality)> = d
        .observations()
        .iter()
        .map(|o| (bin_index(o.indicator, origin, bin_width), o.quality))
        .collect();
    let first = labelled.iter().map(|b| b.0).min().expect("dataset is non-empty");
    let last = labelled.iter().map(|b| b.0).max().expect("dataset is non-empty");
    let empty: BTreeMap<Quality, usize> = labelled.iter().map(|&(_, q)| (q, 0)).collect();

    let mut bins: Vec<HistogramBin> = (first..=last)
        .map(|k| HistogramBin {
            lower: edge(origin, bin_width, k),
            upper: edge(origin, bin_width, k + 1),
            counts: empty.clone(),
        })
        .collect();
    for (k, q) in labelled {
        *bins[(k - first) as usize].counts.get_mut(&q).expect("label seeded") += 1;
    }
    Ok(StackedHistogram {
        bin_width,
        origin,
        bins,
    })
}
