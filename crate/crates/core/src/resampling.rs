//! Seeded nonparametric bootstrap.
//!
//! Every replicate draws from its own ChaCha8 stream selected by
//! `(seed, replicate index)`, so results do not depend on how replicates are
//! scheduled across threads. Intervals come from the sorted replicate
//! statistics, either as plain percentiles or bias-corrected and accelerated
//! (BCa) percentiles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::correlation::{adler_coefficient, spearman_coefficient, CorrelationMethod};
use crate::descriptive::{mean, median_sorted, quantile_sorted, sd, sorted_copy, SdConvention};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CiMethod {
    #[default]
    Percentile,
    Bca,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    /// Confidence level in (0, 1).
    pub level: f64,
    pub seed: u64,
    pub method: CiMethod,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            replicates: 10_000,
            level: 0.95,
            seed: 0,
            method: CiMethod::Percentile,
            workers: 0,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "confidence level {} is outside (0, 1)",
                self.level
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
    pub level: f64,
    pub replicates_used: usize,
}

/// Statistics available to [`bootstrap_ci`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Mean,
    Median,
    /// Sample standard deviation (divisor `n - 1`).
    Sd,
}

impl Statistic {
    pub fn evaluate(self, values: &[f64]) -> Option<f64> {
        if values.is_empty() {
            return None;
        }
        match self {
            Statistic::Mean => Some(mean(values)),
            Statistic::Median => Some(median_sorted(&sorted_copy(values))),
            Statistic::Sd => sd(values, mean(values), SdConvention::Sample),
        }
    }

    fn min_len(self) -> usize {
        match self {
            Statistic::Sd => 2,
            _ => 1,
        }
    }
}

/// Random stream for one replicate.
pub(crate) fn replicate_rng(seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    rng
}

fn resample_into<T: Copy>(source: &[T], out: &mut Vec<T>, rng: &mut ChaCha8Rng) {
    out.clear();
    let n = source.len();
    out.extend((0..n).map(|_| source[rng.random_range(0..n)]));
}

/// Evaluates `replicate` once per index, in parallel, preserving index order.
fn run_replicates<T, F>(cfg: &BootstrapConfig, replicate: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    let job = || {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|i| replicate(&mut replicate_rng(cfg.seed, i)))
            .collect::<Result<Vec<T>>>()
    };
    if cfg.workers == 0 {
        job()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(job)
    }
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Bias-correction and acceleration adjusted tail probabilities.
fn bca_probabilities(
    replicates: &[f64],
    estimate: f64,
    jackknife: &[f64],
    alpha: f64,
) -> (f64, f64) {
    const EPS: f64 = 1e-12;
    let normal = standard_normal();
    let below = replicates.iter().filter(|&&t| t < estimate).count() as f64;
    let equal = replicates.iter().filter(|&&t| t == estimate).count() as f64;
    let p0 = ((below + 0.5 * equal) / replicates.len() as f64).clamp(EPS, 1.0 - EPS);
    let z0 = normal.inverse_cdf(p0);

    let acceleration = if jackknife.len() < 2 {
        0.0
    } else {
        let center = mean(jackknife);
        let (num, den) = jackknife.iter().fold((0.0, 0.0), |(num, den), &t| {
            let d = center - t;
            (num + d * d * d, den + d * d)
        });
        if den > 0.0 {
            num / (6.0 * den.powf(1.5))
        } else {
            0.0
        }
    };

    let adjust = |p: f64| {
        let z = normal.inverse_cdf(p);
        let shifted = z0 + z;
        let adjusted = normal.cdf(z0 + shifted / (1.0 - acceleration * shifted));
        if adjusted.is_finite() {
            adjusted.clamp(0.0, 1.0)
        } else {
            p
        }
    };
    (adjust(alpha / 2.0), adjust(1.0 - alpha / 2.0))
}

fn interval(
    mut stats: Vec<f64>,
    estimate: f64,
    jackknife: impl FnOnce() -> Vec<f64>,
    cfg: &BootstrapConfig,
) -> ConfidenceInterval {
    stats.sort_by(f64::total_cmp);
    let alpha = 1.0 - cfg.level;
    let (p_low, p_high) = match cfg.method {
        CiMethod::Percentile => (alpha / 2.0, 1.0 - alpha / 2.0),
        CiMethod::Bca => bca_probabilities(&stats, estimate, &jackknife(), alpha),
    };
    ConfidenceInterval {
        low: quantile_sorted(&stats, p_low),
        high: quantile_sorted(&stats, p_high),
        level: cfg.level,
        replicates_used: stats.len(),
    }
}

fn leave_one_out<T: Copy, R>(values: &[T], mut f: impl FnMut(&[T]) -> Option<R>) -> Vec<R> {
    let mut buf = Vec::with_capacity(values.len().saturating_sub(1));
    (0..values.len())
        .filter_map(|skip| {
            buf.clear();
            buf.extend(values.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v));
            f(&buf)
        })
        .collect()
}

/// Bootstrap interval for a one-sample statistic.
pub fn bootstrap_ci(
    values: &[f64],
    statistic: Statistic,
    cfg: &BootstrapConfig,
) -> Result<ConfidenceInterval> {
    cfg.validate()?;
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if values.len() < statistic.min_len() {
        return Err(Error::StatisticUndefined(format!(
            "{statistic:?} needs at least {} values, got {}",
            statistic.min_len(),
            values.len()
        )));
    }
    let estimate = statistic.evaluate(values).expect("length checked");
    let stats = run_replicates(cfg, |rng| {
        let mut sample = Vec::with_capacity(values.len());
        resample_into(values, &mut sample, rng);
        statistic
            .evaluate(&sample)
            .ok_or_else(|| Error::StatisticUndefined(format!("{statistic:?} of resample")))
    })?;
    Ok(interval(stats, estimate, || leave_one_out(values, |s| statistic.evaluate(s)), cfg))
}

/// Bootstrap interval for `mean(hi) - mean(lo)`; each replicate resamples both
/// groups independently at their own sizes.
pub fn bootstrap_diff_ci(hi: &[f64], lo: &[f64], cfg: &BootstrapConfig) -> Result<ConfidenceInterval> {
    cfg.validate()?;
    if hi.is_empty() || lo.is_empty() {
        return Err(Error::EmptyInput);
    }
    let estimate = mean(hi) - mean(lo);
    let stats = run_replicates(cfg, |rng| {
        let mut a = Vec::with_capacity(hi.len());
        let mut b = Vec::with_capacity(lo.len());
        resample_into(hi, &mut a, rng);
        resample_into(lo, &mut b, rng);
        Ok(mean(&a) - mean(&b))
    })?;
    let jackknife = || {
        let (mean_hi, mean_lo) = (mean(hi), mean(lo));
        let mut out = leave_one_out(hi, |s| (!s.is_empty()).then(|| mean(s) - mean_lo));
        out.extend(leave_one_out(lo, |s| (!s.is_empty()).then(|| mean_hi - mean(s))));
        out
    };
    Ok(interval(stats, estimate, jackknife, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationCi {
    pub ci: ConfidenceInterval,
    /// Resamples discarded because one variable was constant.
    pub redraws: usize,
}

fn correlation_of(method: CorrelationMethod, pairs: &[(f64, f64)]) -> Result<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
    match method {
        CorrelationMethod::Spearman => spearman_coefficient(&x, &y),
        CorrelationMethod::Adler => adler_coefficient(&x, &y),
    }
}

fn is_constant(values: impl Iterator<Item = f64>) -> bool {
    let mut values = values.peekable();
    match values.next() {
        Some(first) => values.all(|v| v == first),
        None => true,
    }
}

/// Case-resampling bootstrap interval for a rank correlation.
///
/// Resamples in which either variable is constant are redrawn from the same
/// replicate stream. More than 10% redraws overall is an error.
pub fn bootstrap_corr_ci(
    pairs: &[(f64, f64)],
    method: CorrelationMethod,
    cfg: &BootstrapConfig,
) -> Result<CorrelationCi> {
    cfg.validate()?;
    if pairs.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let too_many = |redraws: usize| redraws * 10 > cfg.replicates;
    let estimate = correlation_of(method, pairs)?;
    let outcomes = run_replicates(cfg, |rng| {
        let mut sample = Vec::with_capacity(pairs.len());
        let mut redraws = 0;
        loop {
            resample_into(pairs, &mut sample, rng);
            if !is_constant(sample.iter().map(|p| p.0)) && !is_constant(sample.iter().map(|p| p.1)) {
                return Ok((correlation_of(method, &sample)?, redraws));
            }
            redraws += 1;
            if too_many(redraws) {
                return Err(Error::TooManyDegenerateResamples {
                    redraws,
                    replicates: cfg.replicates,
                });
            }
        }
    })?;
    let redraws: usize = outcomes.iter().map(|o| o.1).sum();
    if too_many(redraws) {
        return Err(Error::TooManyDegenerateResamples {
            redraws,
            replicates: cfg.replicates,
        });
    }
    let stats = outcomes.into_iter().map(|o| o.0).collect();
    let jackknife = || leave_one_out(pairs, |s| correlation_of(method, s).ok());
    Ok(CorrelationCi {
        ci: interval(stats, estimate, jackknife, cfg),
        redraws,
    })
}
