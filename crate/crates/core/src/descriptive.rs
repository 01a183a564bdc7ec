//! Grouped descriptive statistics, between-group mean differences and the
//! sorted-assignment benchmark.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::dataset::{partition_by_quality, Dataset, Quality};
use crate::error::{Error, Result};
use crate::resampling::{bootstrap_ci, bootstrap_diff_ci, BootstrapConfig, ConfidenceInterval, Statistic};

/// Divisor used for the standard deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SdConvention {
    /// Divide by `n - 1`; undefined for a single value.
    #[default]
    Sample,
    /// Divide by `n`.
    Population,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub median: f64,
    pub mean: f64,
    pub sd: Option<f64>,
}

/// Neumaier-compensated sum.
pub(crate) fn sum(values: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut carry = 0.0;
    for &v in values {
        let t = total + v;
        if total.abs() >= v.abs() {
            carry += (total - t) + v;
        } else {
            carry += (v - t) + total;
        }
        total = t;
    }
    total + carry
}

/// Arithmetic mean, clamped to the data range; `NaN` for an empty slice.
pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    (sum(values) / values.len() as f64).clamp(min, max)
}

pub(crate) fn sd(values: &[f64], center: f64, convention: SdConvention) -> Option<f64> {
    let n = values.len();
    let divisor = match convention {
        SdConvention::Sample if n < 2 => return None,
        SdConvention::Sample => (n - 1) as f64,
        SdConvention::Population if n == 0 => return None,
        SdConvention::Population => n as f64,
    };
    let squares: Vec<f64> = values.iter().map(|v| (v - center) * (v - center)).collect();
    Some((sum(&squares) / divisor).sqrt())
}

/// Quantile of sorted data by linear interpolation between order statistics
/// (position `(n - 1) * p`).
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    if frac == 0.0 || lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

pub(crate) fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
}

/// Median with the midpoint convention for even `n`.
pub(crate) fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        // halve first so the midpoint cannot overflow
        sorted[n / 2 - 1] / 2.0 + sorted[n / 2] / 2.0
    }
}

pub fn summarize(values: &[f64]) -> Result<Summary> {
    summarize_with(values, SdConvention::Sample)
}

pub fn summarize_with(values: &[f64], convention: SdConvention) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let sorted = sorted_copy(values);
    let mean = mean(values);
    Ok(Summary {
        n: values.len(),
        median: median_sorted(&sorted),
        mean,
        sd: sd(values, mean, convention),
    })
}

/// Row label in the grouped table: a quality score or the pooled row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupLabel {
    Quality(Quality),
    All,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Quality(q) => q.fmt(f),
            GroupLabel::All => f.write_str("All"),
        }
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupLabel::Quality(q) => serializer.serialize_u8(q.get()),
            GroupLabel::All => serializer.serialize_str("All"),
        }
    }
}

/// One row of the grouped descriptive table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub quality_label: GroupLabel,
    pub n: usize,
    pub median: f64,
    pub mean: f64,
    pub sd: Option<f64>,
    pub mean_ci: ConfidenceInterval,
}

fn group_summary(
    label: GroupLabel,
    values: &[f64],
    cfg: &BootstrapConfig,
    convention: SdConvention,
) -> Result<GroupSummary> {
    let s = summarize_with(values, convention)?;
    Ok(GroupSummary {
        quality_label: label,
        n: s.n,
        median: s.median,
        mean: s.mean,
        sd: s.sd,
        mean_ci: bootstrap_ci(values, Statistic::Mean, cfg)?,
    })
}

/// One row per observed quality score (ascending) followed by the pooled "All" row.
/// Mean intervals are bootstrapped within each group.
pub fn table1(d: &Dataset, cfg: &BootstrapConfig) -> Result<Vec<GroupSummary>> {
    table1_with(d, cfg, SdConvention::Sample)
}

pub fn table1_with(
    d: &Dataset,
    cfg: &BootstrapConfig,
    convention: SdConvention,
) -> Result<Vec<GroupSummary>> {
    let mut rows = Vec::new();
    for (quality, values) in partition_by_quality(d) {
        rows.push(group_summary(GroupLabel::Quality(quality), &values, cfg, convention)?);
    }
    rows.push(group_summary(GroupLabel::All, &d.indicators(), cfg, convention)?);
    Ok(rows)
}

/// `mean(hi) - mean(lo)`.
pub fn mean_difference(hi: &[f64], lo: &[f64]) -> Result<f64> {
    if hi.is_empty() || lo.is_empty() {
        return Err(Error::EmptyGroup);
    }
    Ok(mean(hi) - mean(lo))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferenceResult {
    pub group_hi: Quality,
    pub group_lo: Quality,
    pub mean_difference: f64,
    pub ci: ConfidenceInterval,
}

/// Mean differences between each pair of consecutive observed quality scores,
/// lowest pair first.
pub fn mean_differences(d: &Dataset, cfg: &BootstrapConfig) -> Result<Vec<DifferenceResult>> {
    let groups: Vec<_> = partition_by_quality(d).into_iter().collect();
    groups
        .windows(2)
        .map(|pair| {
            let (lo_q, lo) = &pair[0];
            let (hi_q, hi) = &pair[1];
            Ok(DifferenceResult {
                group_hi: *hi_q,
                group_lo: *lo_q,
                mean_difference: mean_difference(hi, lo)?,
                ci: bootstrap_diff_ci(hi, lo, cfg)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterfactualGroup {
    pub quality: Quality,
    pub n: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterfactualDifference {
    pub group_hi: Quality,
    pub group_lo: Quality,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterfactual {
    pub groups: Vec<CounterfactualGroup>,
    pub differences: Vec<CounterfactualDifference>,
}

impl Counterfactual {
    pub fn mean_of(&self, quality: Quality) -> Option<f64> {
        self.groups.iter().find(|g| g.quality == quality).map(|g| g.mean)
    }
}

/// Best-case separation: sorts every indicator value ascending and hands out
/// quality labels in ascending order using the observed group sizes, so the
/// lowest label receives the lowest block of values.
///
/// Ties in the indicator are broken by original position.
pub fn idealized_sort_benchmark(d: &Dataset) -> Counterfactual {
    let mut order: Vec<(f64, usize)> = d
        .observations()
        .iter()
        .enumerate()
        .map(|(i, o)| (o.indicator, i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let sorted: Vec<f64> = order.into_iter().map(|(v, _)| v).collect();

    let mut groups = Vec::new();
    let mut start = 0;
    for (quality, values) in partition_by_quality(d) {
        let block = &sorted[start..start + values.len()];
        groups.push(CounterfactualGroup {
            quality,
            n: block.len(),
            mean: mean(block),
        });
        start += values.len();
    }
    let differences = groups
        .windows(2)
        .map(|w| CounterfactualDifference {
            group_hi: w[1].quality,
            group_lo: w[0].quality,
            difference: w[1].mean - w[0].mean,
        })
        .collect();
    Counterfactual { groups, differences }
}

/// Relative excess `hi_mean / lo_mean - 1`.
pub fn ratio_claim(hi_mean: f64, lo_mean: f64) -> Result<f64> {
    if !(lo_mean > 0.0) {
        return Err(Error::DivisionByNonpositive(lo_mean));
    }
    Ok(hi_mean / lo_mean - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(score: u8) -> Quality {
        Quality::new(score).unwrap()
    }

    fn quick_cfg() -> BootstrapConfig {
        BootstrapConfig { replicates: 200, ..Default::default() }
    }

    #[test]
    fn summarize_small() {
        let s = summarize(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s, Summary { n: 3, median: 2.0, mean: 2.0, sd: Some(1.0) });
        assert_eq!(summarize(&[1.0, 2.0, 3.0, 4.0]).unwrap().median, 2.5);
        assert_eq!(summarize(&[4.0]).unwrap().sd, None);
        assert_eq!(summarize_with(&[4.0], SdConvention::Population).unwrap().sd, Some(0.0));
        assert_eq!(summarize(&[]), Err(Error::EmptyGroup));
    }

    #[test]
    fn population_sd() {
        let s = summarize_with(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0], SdConvention::Population)
            .unwrap();
        assert_eq!(s.sd, Some(2.0));
    }

    #[test]
    fn mean_stays_in_range_for_constant_input() {
        let s = summarize(&[0.1; 7]).unwrap();
        assert_eq!(s.mean, 0.1);
        assert_eq!(s.sd, Some(0.0));
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&v, 0.25), 2.0);
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 1.0), 5.0);
        assert_eq!(quantile_sorted(&[1.0, 2.0], 0.25), 1.25);
        assert_eq!(quantile_sorted(&[7.0], 0.9), 7.0);
    }

    #[test]
    fn differences_and_ratio() {
        assert_eq!(mean_difference(&[3.0, 5.0], &[1.0]).unwrap(), 3.0);
        assert_eq!(mean_difference(&[1.5, 2.5], &[1.5, 2.5]).unwrap(), 0.0);
        assert_eq!(mean_difference(&[], &[1.0]), Err(Error::EmptyGroup));
        assert_eq!(ratio_claim(2.0, 2.0).unwrap(), 0.0);
        assert_eq!(ratio_claim(3.0, 2.0).unwrap(), 0.5);
        assert!((ratio_claim(1.99, 1.55).unwrap() - 0.284).abs() < 0.005);
        assert_eq!(ratio_claim(1.0, 0.0), Err(Error::DivisionByNonpositive(0.0)));
        assert!(ratio_claim(1.0, -2.0).is_err());
    }

    #[test]
    fn sorted_benchmark_blocks() {
        // 1..6, sizes (2, 2, 2), labels scrambled
        let d = Dataset::from_pairs(&[(6.0, 3), (1.0, 5), (4.0, 4), (2.0, 3), (5.0, 4), (3.0, 5)])
            .unwrap();
        let cf = idealized_sort_benchmark(&d);
        let means: Vec<f64> = cf.groups.iter().map(|g| g.mean).collect();
        assert_eq!(means, vec![1.5, 3.5, 5.5]);
        assert_eq!(cf.differences.len(), 2);
        assert_eq!(cf.differences[0].difference, 2.0);
        assert_eq!(cf.differences[1].group_hi, q(5));
    }

    #[test]
    fn sorted_benchmark_fixed_point() {
        let d = Dataset::from_pairs(&[(0.5, 3), (0.7, 3), (1.1, 4), (1.4, 4), (1.9, 4), (2.5, 5)])
            .unwrap();
        let cf = idealized_sort_benchmark(&d);
        for (quality, values) in partition_by_quality(&d) {
            assert_eq!(cf.mean_of(quality), Some(mean(&values)));
        }
    }

    #[test]
    fn table_rows() {
        let d = Dataset::from_pairs(&[(1.0, 4), (3.0, 4)]).unwrap();
        let rows = table1(&d, &quick_cfg()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].quality_label, GroupLabel::Quality(q(4)));
        assert_eq!(rows[1].quality_label, GroupLabel::All);
        assert_eq!(
            (rows[0].n, rows[0].median, rows[0].mean, rows[0].sd),
            (rows[1].n, rows[1].median, rows[1].mean, rows[1].sd)
        );
        assert_eq!(rows[0].mean_ci, rows[1].mean_ci);
    }

    #[test]
    fn label_display() {
        assert_eq!(GroupLabel::Quality(q(3)).to_string(), "3");
        assert_eq!(GroupLabel::All.to_string(), "All");
    }

    fn dataset_strategy() -> impl Strategy<Value = Vec<(f64, u8)>> {
        prop::collection::vec((0.01f64..5.0, 3u8..=5), 3..120)
    }

    proptest! {
        #[test]
        fn all_row_matches_pooled_summary(pairs in dataset_strategy()) {
            let d = Dataset::from_pairs(&pairs).unwrap();
            let rows = table1(&d, &BootstrapConfig { replicates: 20, ..Default::default() }).unwrap();
            let all = rows.last().unwrap();
            let pooled = summarize(&d.indicators()).unwrap();
            prop_assert_eq!(all.n, rows[..rows.len() - 1].iter().map(|r| r.n).sum::<usize>());
            prop_assert_eq!((all.median, all.mean, all.sd), (pooled.median, pooled.mean, pooled.sd));
            for r in &rows {
                prop_assert!(r.mean_ci.low <= r.mean_ci.high);
            }
        }

        #[test]
        fn counterfactual_means_nondecreasing(pairs in dataset_strategy()) {
            let d = Dataset::from_pairs(&pairs).unwrap();
            let cf = idealized_sort_benchmark(&d);
            prop_assert!(cf.groups.windows(2).all(|w| w[0].mean <= w[1].mean));
            prop_assert!(cf.differences.iter().all(|x| x.difference >= 0.0));
        }

        #[test]
        fn affine_equivariance(
            values in prop::collection::vec(-100.0f64..100.0, 2..200),
            shift in -50.0f64..50.0,
            scale in 0.1f64..10.0,
        ) {
            let base = summarize(&values).unwrap();
            let moved: Vec<f64> = values.iter().map(|v| v * scale + shift).collect();
            let t = summarize(&moved).unwrap();
            let spread = values.iter().fold(0.0f64, |m, v| m.max(v.abs())) * scale + shift.abs() + 1.0;
            let tol = 1e-12 * spread * values.len() as f64;
            prop_assert!((t.mean - (base.mean * scale + shift)).abs() <= tol);
            prop_assert!((t.median - (base.median * scale + shift)).abs() <= tol);
            prop_assert!((t.sd.unwrap() - base.sd.unwrap() * scale).abs() <= tol);
        }

        #[test]
        fn median_and_mean_within_range(values in prop::collection::vec(-1e6f64..1e6, 1..100)) {
            let s = summarize(&values).unwrap();
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(min <= s.median && s.median <= max);
            prop_assert!(min <= s.mean && s.mean <= max);
            prop_assert!(s.sd.map_or(true, |sd| sd >= 0.0));
        }
    }
}
