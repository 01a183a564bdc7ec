//! Statistics for comparing a continuous, field-normalized citation indicator
//! against ordinal peer-review quality scores.
//!
//! The crate is organized bottom-up:
//!
//! - [`dataset`] parses and partitions the two-column (indicator, quality) table.
//! - [`descriptive`] computes grouped summaries, mean differences and the
//!   sorted-assignment benchmark.
//! - [`correlation`] provides mid-ranks, Spearman's rho, Kendall pair counts and
//!   the Adler tie-corrected Kendall variant.
//! - [`resampling`] is a seeded, parallel, deterministic bootstrap engine.
//! - [`figures`] produces box-plot and stacked-histogram data.
//! - [`format`] holds the two-decimal rounding used by human-readable reports.

pub mod correlation;
pub mod dataset;
pub mod descriptive;
mod error;
pub mod figures;
pub mod format;
pub mod resampling;

pub use correlation::{
    adler_coefficient, adler_max_s, adler_min_s, adler_tau, average_ranks, kendall_counts, spearman, spearman_coefficient, CorrelationEstimate,
    CorrelationMethod, PairCounts,
};
pub use dataset::{
    parse_dataset, partition_by_quality, validate_dataset, ColumnOrder, Dataset, Observation,
    ParseOptions, Quality, ValidationReport,
};
pub use descriptive::{
    idealized_sort_benchmark, mean_difference, mean_differences, ratio_claim, summarize,
    summarize_with, table1, table1_with, Counterfactual, CounterfactualDifference,
    CounterfactualGroup, DifferenceResult, GroupLabel, GroupSummary, SdConvention, Summary,
};
pub use error::{Error, Result};
pub use figures::{
    boxplot_summary, boxplots_by_quality, histogram, labelled_boxplot, BoxPlotSummary, HistogramBin,
    StackedHistogram,
};
pub use resampling::{
    bootstrap_ci, bootstrap_corr_ci, bootstrap_diff_ci, BootstrapConfig, CiMethod,
    ConfidenceInterval, CorrelationCi, Statistic,
};
