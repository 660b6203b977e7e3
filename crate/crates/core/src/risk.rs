//! Empirical risk measures: VaR, CVaR, and the double-bootstrap VaR pipeline.
//!
//! VaR convention: the estimate at confidence level c is the ceil(c*m)-th
//! order statistic of the sample (lower empirical quantile, no
//! interpolation). Theorem-style "loss probability q" statements map to
//! c = 1 - q. One convention everywhere prevents sign bugs.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, substream};
use crate::stats::quantile_sorted;

/// Which risk measure a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Var,
    Cvar,
    ExpectedUtility,
}

/// A risk-measure estimate with its bootstrap confidence interval.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskMeasureReport {
    pub measure: MeasureKind,
    /// Confidence level of the quantile being estimated, in (0, 1).
    pub confidence_level: f64,
    pub point_estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Aggregation count n this report belongs to.
    pub aggregation_count: usize,
    pub sample_count: usize,
    pub seed: u64,
}

/// 1-based order-statistic rank for the VaR at `level`: ceil(level * m).
fn var_rank(m: usize, level: f64) -> usize {
    ((level * m as f64).ceil() as usize).clamp(1, m)
}

/// Empirical VaR: the ceil(level*m)-th order statistic. Reorders `samples`.
pub fn var_in_place(samples: &mut [f64], level: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("var of empty sample"));
    }
    if !(0.0 < level && level < 1.0) {
        return Err(Error::ProbabilityDomain { name: "level", value: level });
    }
    let k = var_rank(samples.len(), level);
    let (_, v, _) = samples.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*v)
}

/// Empirical VaR on a borrowed sample.
pub fn var(samples: &[f64], level: f64) -> Result<f64> {
    let mut v = samples.to_vec();
    var_in_place(&mut v, level)
}

/// Empirical CVaR: mean of the samples strictly beyond the VaR order
/// statistic (by position). Needs at least 2 such samples.
pub fn cvar(samples: &[f64], level: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("cvar of empty sample"));
    }
    if !(0.0 < level && level < 1.0) {
        return Err(Error::ProbabilityDomain { name: "level", value: level });
    }
    let mut v = samples.to_vec();
    let k = var_rank(v.len(), level);
    let m = v.len();
    if m - k < 2 {
        return Err(Error::InsufficientTail { have: m - k });
    }
    let (_, _, tail) = v.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(tail.iter().sum::<f64>() / tail.len() as f64)
}

const PURPOSE_BOOT: u64 = 0x10;

/// Inner bootstrap loop: `inner_reps` equal-weight portfolio instances, each
/// the mean of `n` draws-with-replacement from `data`, reduced to a VaR.
fn inner_var(data: &[f64], n: usize, level: f64, inner_reps: usize, rng: &mut impl Rng) -> f64 {
    let m = data.len();
    let mut agg = Vec::with_capacity(inner_reps);
    for _ in 0..inner_reps {
        let mut s = 0.0;
        for _ in 0..n {
            s += data[rng.random_range(0..m)];
        }
        agg.push(s / n as f64);
    }
    var_in_place(&mut agg, level).expect("inner_reps >= 1 and level validated")
}

/// Double-bootstrap VaR sweep over aggregation counts (the Fig. 3b pipeline).
///
/// For each n, the point estimate comes from an inner loop on the original
/// data; `outer_reps` resamples of the base data (size m, with replacement)
/// re-run the inner loop and give 90% percentile confidence intervals.
/// Deterministic for fixed (data, seed): every (n, outer-rep) pair owns a
/// private sub-stream and reductions run in stream order.
pub fn bootstrap_var_sweep(
    data: &[f64],
    aggregation_counts: &[usize],
    level: f64,
    inner_reps: usize,
    outer_reps: usize,
    seed: u64,
) -> Result<Vec<RiskMeasureReport>> {
    let m = data.len();
    if m < 30 {
        return Err(Error::Resolution(format!("need at least 30 base observations, have {m}")));
    }
    if !(0.0 < level && level < 1.0) {
        return Err(Error::ProbabilityDomain { name: "level", value: level });
    }
    if level * (inner_reps as f64) < 10.0 {
        return Err(Error::Resolution(format!(
            "level * inner_reps = {} < 10: too few tail points",
            level * inner_reps as f64
        )));
    }
    if aggregation_counts.iter().any(|&n| n == 0) {
        return Err(Error::EmptyInput("aggregation counts must be >= 1"));
    }
    if outer_reps < 2 {
        return Err(Error::Resolution("need at least 2 outer bootstrap replications".into()));
    }

    let mut reports = Vec::with_capacity(aggregation_counts.len());
    for (ni, &n) in aggregation_counts.iter().enumerate() {
        let base_stream = (ni as u64) * (outer_reps as u64 + 1);
        let point = {
            let mut rng = stream_rng(seed, substream(PURPOSE_BOOT, base_stream));
            inner_var(data, n, level, inner_reps, &mut rng)
        };
        let mut outer: Vec<f64> = (0..outer_reps)
            .into_par_iter()
            .map(|rep| {
                let mut rng =
                    stream_rng(seed, substream(PURPOSE_BOOT, base_stream + 1 + rep as u64));
                // outer resample of equal size m, with replacement
                let resample: Vec<f64> =
                    (0..m).map(|_| data[rng.random_range(0..m)]).collect();
                inner_var(&resample, n, level, inner_reps, &mut rng)
            })
            .collect();
        outer.sort_unstable_by(f64::total_cmp);
        let lo = quantile_sorted(&outer, 0.05)?;
        let hi = quantile_sorted(&outer, 0.95)?;
        reports.push(RiskMeasureReport {
            measure: MeasureKind::Var,
            confidence_level: level,
            point_estimate: point,
            // percentile bounds widened to bracket the point estimate so the
            // report invariant ci_low <= point <= ci_high always holds
            ci_low: lo.min(point),
            ci_high: hi.max(point),
            aggregation_count: n,
            sample_count: inner_reps,
            seed,
        });
    }
    Ok(reports)
}
