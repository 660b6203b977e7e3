//! Empirical statistics used across the crate: estimate-with-CI containers,
//! KS / Anderson-Darling statistics, Kendall's tau, and quantile helpers.

use crate::error::{Error, Result};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// A scalar Monte Carlo estimate with a confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateCi {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub sample_count: usize,
}

impl EstimateCi {
    /// Degenerate zero-width estimate (used for analytically exact values).
    pub fn exact(value: f64) -> Self {
        EstimateCi { estimate: value, ci_low: value, ci_high: value, sample_count: 0 }
    }

    /// CLT interval from accumulated sum and sum of squares.
    pub fn from_moments(sum: f64, sum_sq: f64, n: usize, z: f64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = (sum_sq / nf - mean * mean).max(0.0);
        let se = (var / nf).sqrt();
        EstimateCi { estimate: mean, ci_low: mean - z * se, ci_high: mean + z * se, sample_count: n }
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }

    pub fn excludes_zero_positive(&self) -> bool {
        self.ci_low > 0.0
    }

    pub fn excludes_zero_negative(&self) -> bool {
        self.ci_high < 0.0
    }

    pub fn contains_zero(&self) -> bool {
        self.ci_low <= 0.0 && self.ci_high >= 0.0
    }
}

/// Two-sided 95% normal quantile, used for CLT intervals throughout.
pub const Z95: f64 = 1.959963984540054;

/// Mean and unbiased variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() < 2 {
        0.0
    } else {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    };
    (mean, var)
}

/// Sorts a copy ascending (total order; NaNs would sort last but inputs are
/// expected finite).
pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Lower empirical quantile: the ceil(p*n)-th order statistic of a sorted
/// slice. The same convention as `risk::var`, reused for percentile CIs.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptyInput("quantile of empty slice"));
    }
    if !(0.0 < p && p < 1.0) {
        return Err(Error::ProbabilityDomain { name: "p", value: p });
    }
    let k = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Ok(sorted[k - 1])
}

/// One-sample Kolmogorov-Smirnov statistic against a reference cdf.
/// `data` must be sorted ascending.
pub fn ks_statistic_sorted<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> f64 {
    let n = data.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in data.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    sup
}

/// Two-sample Kolmogorov-Smirnov statistic. Inputs need not be sorted.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let a = sorted(a);
    let b = sorted(b);
    let (mut i, mut j) = (0usize, 0usize);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut sup = 0.0f64;
    while i < a.len() && j < b.len() {
        // advance both past the current value so ties move together
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Asymptotic two-sample KS critical value at significance `alpha`:
/// c(alpha) * sqrt((n+m)/(n*m)) with c(alpha) = sqrt(-ln(alpha/2)/2).
pub fn ks_two_sample_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Anderson-Darling statistic, case 0 (fully specified cdf).
/// `data` must be sorted ascending.
pub fn ad_statistic_sorted<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> f64 {
    let n = data.len();
    let nf = n as f64;
    // clamp away from {0,1} so the logs stay finite
    let eps = 1e-300;
    let mut acc = 0.0;
    for i in 0..n {
        let fi = cdf(data[i]).clamp(eps, 1.0 - 1e-16);
        let fj = cdf(data[n - 1 - i]).clamp(eps, 1.0 - 1e-16);
        acc += (2.0 * i as f64 + 1.0) * (fi.ln() + (1.0 - fj).ln());
    }
    -nf - acc / nf
}

/// Kendall's tau via merge-sort discordance counting, O(n log n).
/// Pairs are sorted by x (ties broken by y); discordant pairs are strict
/// inversions in the y sequence. Denominator is n(n-1)/2, so exactly tied
/// pairs count as concordant-neutral; intended for continuous data and for
/// short trend checks with distinct x.
pub fn kendall_tau(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Shape { what: "kendall_tau inputs", left: xs.len(), right: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::EmptyInput("kendall_tau needs at least 2 points"));
    }
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_unstable_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(ys[a].total_cmp(&ys[b])));
    let mut y: Vec<f64> = idx.iter().map(|&i| ys[i]).collect();
    let mut buf = vec![0.0; y.len()];
    let discordant = count_inversions(&mut y, &mut buf);
    let n = xs.len() as f64;
    let pairs = n * (n - 1.0) / 2.0;
    Ok(1.0 - 4.0 * discordant as f64 / (2.0 * pairs))
}

fn count_inversions(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (lo, hi) = v.split_at_mut(mid);
    let mut inv = count_inversions(lo, &mut buf[..mid]) + count_inversions(hi, &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);
    while i < lo.len() && j < hi.len() {
        if hi[j] < lo[i] {
            inv += (lo.len() - i) as u64;
            buf[k] = hi[j];
            j += 1;
        } else {
            buf[k] = lo[i];
            i += 1;
        }
        k += 1;
    }
    while i < lo.len() {
        buf[k] = lo[i];
        i += 1;
        k += 1;
    }
    while j < hi.len() {
        buf[k] = hi[j];
        j += 1;
        k += 1;
    }
    v.copy_from_slice(&buf[..n]);
    inv
}

/// Two-sided Student-t quantile for batch-mean confidence intervals.
pub fn t_quantile_975(df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64)
        .expect("valid dof")
        .inverse_cdf(0.975)
}

/// t-interval over a small vector of batch statistics.
pub fn batch_ci(batch_values: &[f64]) -> EstimateCi {
    let n = batch_values.len();
    let (mean, var) = mean_var(batch_values);
    let se = (var / n as f64).sqrt();
    let t = t_quantile_975(n - 1);
    EstimateCi { estimate: mean, ci_low: mean - t * se, ci_high: mean + t * se, sample_count: n }
}
