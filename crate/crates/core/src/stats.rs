//! Summary statistics with confidence metadata.
//!
//! Means carry a normal-approximation 95% half-width floored at the Hoeffding
//! half-width for the known range. Proportions use the Wilson score interval
//! and quantiles a distribution-free order-statistic interval.

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Hoeffding 95% half-width for the mean of `n` values lying in an interval
/// of length `range`.
pub fn hoeffding_half_width(range: f64, n: usize) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    range * ((2.0f64 / 0.05).ln() / (2.0 * n as f64)).sqrt()
}

/// Combined standard error of a difference of independent estimates.
pub fn combined_sigma(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// 95% half-width: `max(Z95 * std_error, hoeffding)`.
    pub ci: f64,
    pub n: usize,
}

impl MeanEstimate {
    /// `range` is the length of the interval the samples are known to lie in.
    pub fn from_samples(xs: &[f64], range: f64) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                std_error: f64::INFINITY,
                ci: f64::INFINITY,
                n: 0,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        let std_error = (var / n as f64).sqrt();
        let ci = (Z95 * std_error).max(hoeffding_half_width(range, n));
        Self {
            mean,
            std_error,
            ci,
            n,
        }
    }

    /// A value known without sampling error.
    pub fn exact(value: f64) -> Self {
        Self {
            mean: value,
            std_error: 0.0,
            ci: 0.0,
            n: 0,
        }
    }
}

/// Sample variance (n - 1 denominator).
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
}

/// An exceedance frequency with its Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub count: usize,
    pub n: usize,
    pub value: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Proportion {
    pub fn new(count: usize, n: usize) -> Self {
        if n == 0 {
            return Self {
                count,
                n,
                value: f64::NAN,
                std_error: f64::INFINITY,
                ci_low: 0.0,
                ci_high: 1.0,
            };
        }
        let count = count.min(n);
        let nf = n as f64;
        let p = count as f64 / nf;
        let (ci_low, ci_high) = wilson_interval(count, n, Z95);
        Self {
            count,
            n,
            value: p,
            std_error: (p * (1.0 - p) / nf).sqrt(),
            ci_low,
            ci_high,
        }
    }

    pub fn from_flags(flags: impl IntoIterator<Item = bool>) -> Self {
        let (count, n) = flags
            .into_iter()
            .fold((0, 0), |(c, n), f| (c + usize::from(f), n + 1));
        Self::new(count, n)
    }

    /// Half-width of the Wilson interval.
    pub fn ci(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// Wilson score interval for `positive` successes in `total` trials.
pub fn wilson_interval(positive: usize, total: usize, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = positive.min(total) as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let margin = z * ((p * (1.0 - p) + z2 / (4.0 * n)) / n).sqrt();
    let lo = if positive == 0 { 0.0 } else { ((center - margin) / denom).clamp(0.0, 1.0) };
    let hi = if positive >= total { 1.0 } else { ((center + margin) / denom).clamp(0.0, 1.0) };
    (lo, hi)
}

/// An empirical quantile with an order-statistic confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileEstimate {
    pub level: f64,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

impl QuantileEstimate {
    pub fn ci(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// Smallest sample value `v` with `#{x > v} <= (1 - level) * n`.
///
/// `sorted` must be ascending and nonempty.
pub fn upper_quantile(sorted: &[f64], level: f64) -> QuantileEstimate {
    let n = sorted.len();
    assert!(n > 0, "quantile of empty sample");
    let level = level.clamp(0.0, 1.0);
    let nf = n as f64;
    let rank = |r: f64| -> usize { (r.max(1.0) as usize).min(n) };
    // Tiny slack so that e.g. 0.95 * 100 does not round up to 96.
    let k = rank((level * nf - 1e-9).ceil());
    let spread = Z95 * (nf * level * (1.0 - level)).sqrt();
    let lo = rank((level * nf - spread).floor());
    let hi = rank((level * nf + spread).ceil());
    QuantileEstimate {
        level,
        value: sorted[k - 1],
        ci_low: sorted[lo - 1],
        ci_high: sorted[hi - 1],
        n,
    }
}

/// Ordinary least squares fit `y = intercept + slope * x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Classical standard error of the slope; NaN with two points.
    pub slope_std_error: f64,
    pub points: usize,
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_std_error = if n > 2 {
        let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (ssr / (nf - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Some(LinearFit {
        slope,
        intercept,
        slope_std_error,
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // Known lower bounds at z = 1.96.
        let (lo, _) = wilson_interval(10, 10, 1.96);
        assert!((lo - 0.722_459_831_233_383_4).abs() < 1e-9);
        let (lo, _) = wilson_interval(80, 100, 1.96);
        assert!((lo - 0.711_169_038_073_497_6).abs() < 1e-9);
    }

    #[test]
    fn zero_count_has_positive_upper_bound() {
        let p = Proportion::new(0, 1000);
        assert_eq!(p.value, 0.0);
        assert_eq!(p.ci_low, 0.0);
        assert!(p.ci_high > 0.0 && p.ci_high < 0.01);
    }

    #[test]
    fn mean_ci_floors_at_hoeffding() {
        let xs = vec![0.5; 100];
        let e = MeanEstimate::from_samples(&xs, 1.0);
        assert_eq!(e.mean, 0.5);
        assert_eq!(e.std_error, 0.0);
        assert!((e.ci - hoeffding_half_width(1.0, 100)).abs() < 1e-15);
    }

    #[test]
    fn upper_quantile_exceedance_rule() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        // At most 5 of 100 values may exceed the 0.95 quantile.
        let q = upper_quantile(&xs, 0.95);
        assert_eq!(q.value, 95.0);
        assert!(q.ci_low <= q.value && q.value <= q.ci_high);
        assert_eq!(upper_quantile(&xs, 1.0).value, 100.0);
        assert_eq!(upper_quantile(&xs, 0.0).value, 1.0);
    }

    #[test]
    fn least_squares_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let fit = least_squares(&xs, &ys).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3.0).abs() < 1e-12);
        assert!(least_squares(&[1.0], &[1.0]).is_none());
    }
}
