//! Empirical-distribution tools for validating samplers: ECDF,
//! Kolmogorov–Smirnov distance with asymptotic p-value, nearest-rank
//! quantiles.
//!
//! The target law is heavy-tailed with infinite mean, so everything here
//! is quantile- and CDF-based on purpose; there are no moment statistics.

use crate::error::{ensure, Error, Result};

/// Kolmogorov–Smirnov comparison of a sample against a reference CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    /// Supremum distance between the empirical and reference CDFs.
    pub d_n: f64,
    /// Sample size.
    pub n: usize,
    /// Asymptotic p-value of `d_n * sqrt(n)` under the null.
    pub p_value: f64,
}

/// Right-continuous empirical CDF of a sample.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    /// Build from a nonempty sample; the input is copied and sorted.
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    /// Fraction of the sample at or below `y`.
    pub fn query(&self, y: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= y);
        count as f64 / self.sorted.len() as f64
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    /// The sorted sample underlying the step function.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

/// Build an ECDF from a nonempty sample; see [`Ecdf`].
pub fn ecdf(samples: &[f64]) -> Result<Ecdf> {
    Ecdf::new(samples)
}

/// Kolmogorov–Smirnov statistic of `samples` against the reference `cdf`.
///
/// The supremum over the step function is attained at sample points:
/// `D_n = max_i max(i/n - F(y_(i)), F(y_(i)) - (i-1)/n)`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsReport> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let cdf_values: Vec<f64> = sorted.iter().map(|&y| cdf(y)).collect();
    Ok(ks_from_sorted_cdf_values(&cdf_values))
}

/// Kolmogorov–Smirnov statistic when the reference CDF has already been
/// evaluated at the ascending sample points (for reference CDFs that are
/// themselves quadratures, where cumulative evaluation is much cheaper).
pub fn ks_from_sorted_cdf_values(cdf_values: &[f64]) -> KsReport {
    let n = cdf_values.len();
    assert!(n > 0, "empty CDF value slice");
    let nf = n as f64;
    let mut d = 0.0_f64;
    for (i, &f) in cdf_values.iter().enumerate() {
        let upper = (i + 1) as f64 / nf - f;
        let lower = f - i as f64 / nf;
        d = d.max(upper).max(lower);
    }
    let d = d.clamp(0.0, 1.0);
    KsReport {
        d_n: d,
        n,
        p_value: ks_p_value(d, n),
    }
}

/// Asymptotic Kolmogorov p-value: `Q(lambda) = 2 sum_{k>=1} (-1)^{k-1}
/// exp(-2 k^2 lambda^2)` at `lambda = d_n * sqrt(n)`, truncated once a
/// term drops below 1e-12, clamped into [0, 1].
pub fn ks_p_value(d_n: f64, n: usize) -> f64 {
    assert!(n >= 1, "sample size must be positive");
    let lambda = d_n * (n as f64).sqrt();
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100_000_u64 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Nearest-rank empirical quantile: the order statistic of rank
/// `ceil(q * n)`.
pub fn empirical_quantile(samples: &[f64], q: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    ensure(q.is_finite() && q > 0.0 && q < 1.0, "q", "in (0, 1)", q)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as usize;
    let idx = rank.clamp(1, n) - 1;
    Ok(sorted[idx])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecdf_counting_and_ties() {
        let e = ecdf(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.query(2.0), 2.0 / 3.0);
        let single = ecdf(&[5.0]).unwrap();
        assert_eq!(single.query(4.999), 0.0);
        assert_eq!(single.query(5.0), 1.0);
        let tied = ecdf(&[1.0, 1.0, 2.0]).unwrap();
        assert_eq!(tied.query(1.0), 2.0 / 3.0);
        assert!(ecdf(&[]).is_err());
    }

    #[test]
    fn ecdf_limits() {
        let e = ecdf(&[0.3, -1.5, 7.0]).unwrap();
        assert_eq!(e.query(f64::NEG_INFINITY), 0.0);
        assert_eq!(e.query(f64::INFINITY), 1.0);
    }

    #[test]
    fn ks_single_sample_at_median() {
        let r = ks_statistic(&[0.0], |_| 0.5).unwrap();
        assert_eq!(r.d_n, 0.5);
        assert_eq!(r.n, 1);
    }

    #[test]
    fn ks_uniform_lattice_offset() {
        // samples at the (i - 0.5)/n quantiles of U(0,1): D_n = 1/(2n) exactly
        let n = 100;
        let samples: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let r = ks_statistic(&samples, |y| y.clamp(0.0, 1.0)).unwrap();
        assert!((r.d_n - 0.005).abs() < 1e-15, "d_n = {}", r.d_n);
        assert!(ks_statistic(&[], |y: f64| y).is_err());
    }

    #[test]
    fn ks_p_value_anchors() {
        // classical 5% critical value
        let p = ks_p_value(1.358, 1);
        assert!((p - 0.050).abs() <= 0.002, "Q(1.358) = {p}");
        // tiny lambda: p -> 1
        assert!(ks_p_value(0.01, 1) >= 0.999_999);
        assert_eq!(ks_p_value(0.0, 7), 1.0);
        // huge lambda: p below 1e-10 (leading term 2 exp(-50))
        assert!(ks_p_value(5.0, 1) < 1e-10);
    }

    #[test]
    fn ks_p_value_monotone() {
        // Monotone at the accuracy of the truncated series; for tiny
        // lambda the alternating sum carries ~1e-15 of roundoff.
        let mut prev = 1.0;
        for i in 1..=60 {
            let lambda = 0.05 * i as f64;
            let p = ks_p_value(lambda, 1);
            assert!(p <= prev + 1e-12, "not monotone at lambda={lambda}");
            prev = p;
        }
    }

    #[test]
    fn quantile_nearest_rank() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(empirical_quantile(&s, 0.5).unwrap(), 2.0);
        let ten: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        assert_eq!(empirical_quantile(&ten, 0.9999).unwrap(), 10.0);
        assert_eq!(empirical_quantile(&ten, 0.1).unwrap(), 1.0);
        assert!(empirical_quantile(&[], 0.5).is_err());
        assert!(empirical_quantile(&s, 0.0).is_err());
        assert!(empirical_quantile(&s, 1.0).is_err());
    }

    #[test]
    fn quantile_and_ecdf_consistent() {
        let s = [0.4, 1.2, -0.3, 2.2, 9.0, 0.8, 0.8];
        let e = ecdf(&s).unwrap();
        for i in 1..20 {
            let q = i as f64 / 20.0;
            let y = empirical_quantile(&s, q).unwrap();
            assert!(e.query(y) >= q, "ecdf(quantile({q})) < {q}");
        }
    }
}
