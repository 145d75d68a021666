//! Small statistics helpers: Wilson score intervals, binomial spread and a
//! pooled two-sample Pearson chi-square test.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided Wilson score interval for `successes` out of `trials` at
/// normal quantile `z`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Standard deviation of the empirical mean of `n` Bernoulli(`p`) trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Number of bins after pooling sparse ones.
    pub bins: usize,
}

/// Minimum expected count per bin before it is pooled with other sparse bins.
pub const MIN_EXPECTED: f64 = 5.0;

/// Pearson test of homogeneity for two histograms over the same bins.
/// Bins whose smaller expected count is below [`MIN_EXPECTED`] are merged
/// into a single bin.
pub fn pooled_chi_square(a: &[u64], b: &[u64]) -> ChiSquare {
    assert_eq!(a.len(), b.len(), "histograms must share bins");
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let total = (na + nb) as f64;
    if na == 0 || nb == 0 {
        return ChiSquare { statistic: 0.0, df: 0, p_value: 1.0, bins: 0 };
    }
    let (fa, fb) = (na as f64 / total, nb as f64 / total);
    let mut bins: Vec<(u64, u64)> = Vec::new();
    let mut sparse = (0u64, 0u64);
    for (&x, &y) in a.iter().zip(b) {
        let n = (x + y) as f64;
        if n == 0.0 {
            continue;
        }
        if n * fa.min(fb) < MIN_EXPECTED {
            sparse.0 += x;
            sparse.1 += y;
        } else {
            bins.push((x, y));
        }
    }
    if sparse.0 + sparse.1 > 0 {
        bins.push(sparse);
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(x, y)| {
            let n = (x + y) as f64;
            let (ea, eb) = (n * fa, n * fb);
            (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb
        })
        .sum();
    let df = bins.len().saturating_sub(1);
    let p_value = if df == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(df as f64).expect("positive degrees of freedom").cdf(statistic)
    };
    ChiSquare { statistic, df, p_value, bins: bins.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_the_estimate() {
        let (lo, hi) = wilson(30, 100, 1.96);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.2189).abs() < 1e-3 && (hi - 0.3958).abs() < 1e-3);
        assert_eq!(wilson(0, 0, 1.96), (0.0, 1.0));
    }

    #[test]
    fn identical_histograms_have_zero_statistic() {
        let c = pooled_chi_square(&[100, 200, 300], &[100, 200, 300]);
        assert_eq!(c.statistic, 0.0);
        assert_eq!(c.df, 2);
        assert!((c.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn textbook_two_by_two() {
        // 2x2 table [[20, 30], [30, 20]]: statistic 4.0 with one degree of freedom
        let c = pooled_chi_square(&[20, 30], &[30, 20]);
        assert!((c.statistic - 4.0).abs() < 1e-12);
        assert!((c.p_value - 0.0455).abs() < 1e-3);
    }

    #[test]
    fn sparse_bins_are_pooled() {
        let c = pooled_chi_square(&[1000, 1, 2, 0], &[1000, 2, 1, 1]);
        assert_eq!(c.bins, 2);
    }
}
