//! Bootstrap confidence intervals, percentiles, and Spearman rank
//! correlation.
//!
//! The bootstrap here is the plain percentile bootstrap on the mean: draw
//! `resamples` datasets of the original size with replacement, take each
//! mean, and read the interval off the empirical quantiles of those means.
//! Resampling is driven by a ChaCha8 stream from an explicit seed, so every
//! interval is bit-for-bit reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of bootstrap resamples.
pub const DEFAULT_RESAMPLES: usize = 1000;

/// Default confidence level.
pub const DEFAULT_LEVEL: f64 = 0.95;

/// A bootstrap percentile confidence interval for the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    /// Arithmetic mean of the input sample.
    pub mean: f64,
    /// Lower endpoint of the interval.
    pub ci_low: f64,
    /// Upper endpoint of the interval.
    pub ci_high: f64,
    /// Confidence level the endpoints correspond to.
    pub level: f64,
    /// Number of resamples drawn.
    pub resamples: usize,
    /// Seed of the resampling stream.
    pub seed: u64,
    /// True when the sample had a single element, so the interval collapsed
    /// to a point by construction rather than by statistics.
    pub degenerate: bool,
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Precondition(format!("{what} must be non-empty")));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Precondition(format!(
            "{what} contains a non-finite value {bad}"
        )));
    }
    Ok(())
}

/// Percentile bootstrap CI for the mean of `samples`.
///
/// `level` is the two-sided confidence level in (0, 1); the endpoints are
/// the `(1 - level)/2` and `1 - (1 - level)/2` quantiles of the resampled
/// means. A single-element sample yields a degenerate point interval with
/// the `degenerate` flag set.
pub fn bootstrap_ci(
    samples: &[f64],
    resamples: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapSummary> {
    check_finite(samples, "bootstrap sample")?;
    if resamples == 0 {
        return Err(Error::Precondition(
            "need at least one bootstrap resample".into(),
        ));
    }
    if !(level.is_finite() && level > 0.0 && level < 1.0) {
        return Err(Error::Precondition(format!(
            "confidence level must lie strictly between 0 and 1, got {level}"
        )));
    }
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Ok(BootstrapSummary {
            mean,
            ci_low: mean,
            ci_high: mean,
            level,
            resamples,
            seed,
            degenerate: true,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut acc = 0.0;
        for _ in 0..n {
            acc += samples[rng.random_range(0..n)];
        }
        means.push(acc / n as f64);
    }
    let alpha = (1.0 - level) / 2.0;
    let ci_low = percentile(&means, alpha)?;
    let ci_high = percentile(&means, 1.0 - alpha)?;
    Ok(BootstrapSummary {
        mean,
        ci_low,
        ci_high,
        level,
        resamples,
        seed,
        degenerate: false,
    })
}

/// Quantile of `values` at fraction `q ∈ [0, 1]`, with linear interpolation
/// between order statistics (`h = q·(n-1)`); endpoints are inclusive, so
/// `q = 0` is the minimum and `q = 1` the maximum. The input need not be
/// sorted.
pub fn percentile(values: &[f64], q: f64) -> Result<f64> {
    check_finite(values, "percentile input")?;
    if !(q.is_finite() && (0.0..=1.0).contains(&q)) {
        return Err(Error::Precondition(format!(
            "quantile fraction must lie in [0, 1], got {q}"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finiteness checked above"));
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Ranks with ties sharing their average rank (1-based).
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .partial_cmp(&values[j])
            .expect("finiteness checked")
    });
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j (0-based) share the average of ranks i+1..=j+1.
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation of two equal-length samples (`n ≥ 3`), with
/// average ranks on ties. Errors when either input is constant, because the
/// correlation is undefined there.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_finite(x, "first Spearman input")?;
    check_finite(y, "second Spearman input")?;
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!(
            "Spearman inputs have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::Precondition(format!(
            "Spearman needs at least 3 points, got {}",
            x.len()
        )));
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in rx.iter().zip(ry.iter()) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::Numerical(
            "Spearman correlation is undefined for a constant input".into(),
        ));
    }
    Ok(cov / (vx * vy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn identical_samples_give_a_point_interval() {
        let s = bootstrap_ci(&[3.7; 24], 500, 0.95, 7).unwrap();
        // Every resampled mean is the same accumulation of the same constant,
        // so the interval collapses onto the mean exactly (up to the shared
        // rounding of that accumulation).
        assert!((s.mean - 3.7).abs() < 1e-12);
        assert_eq!(s.ci_low, s.mean);
        assert_eq!(s.ci_high, s.mean);
        assert!(
            !s.degenerate,
            "n > 1 is statistically degenerate only at n = 1"
        );
    }

    #[test]
    fn interval_is_ordered_and_bounded_by_the_data() {
        let samples: Vec<f64> = (0..40).map(|i| (i % 2) as f64).collect();
        let s = bootstrap_ci(&samples, 1000, 0.95, 11).unwrap();
        assert!(s.ci_low <= s.mean && s.mean <= s.ci_high);
        assert!(
            s.ci_low >= 0.0 && s.ci_high <= 1.0,
            "means of 0/1 data stay in [0, 1]"
        );
        assert!(s.ci_high > s.ci_low, "binary data has real width");
    }

    #[test]
    fn half_width_tracks_the_standard_error() {
        // For n = 200 normal draws, the 95% bootstrap interval on the mean
        // should have half-width ≈ 1.96·s/√n within 20%.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let normal = StandardNormal;
        let samples: Vec<f64> = (0..200).map(|_| normal.sample(&mut rng)).collect();
        let mean = samples.iter().sum::<f64>() / 200.0;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 199.0;
        let se = (var / 200.0).sqrt();
        let s = bootstrap_ci(&samples, 2000, 0.95, 5).unwrap();
        let half = (s.ci_high - s.ci_low) / 2.0;
        let want = 1.96 * se;
        assert!(
            (half - want).abs() / want < 0.2,
            "half-width {half:.4} vs normal-theory {want:.4}"
        );
    }

    #[test]
    fn resampling_is_bitwise_deterministic_in_the_seed() {
        let samples = [0.4, -1.2, 3.3, 0.0, 2.2, -0.7];
        let a = bootstrap_ci(&samples, 777, 0.9, 123).unwrap();
        let b = bootstrap_ci(&samples, 777, 0.9, 123).unwrap();
        assert_eq!(a, b);
        let c = bootstrap_ci(&samples, 777, 0.9, 124).unwrap();
        assert!(
            a.ci_low != c.ci_low || a.ci_high != c.ci_high,
            "different seeds should move the interval"
        );
    }

    #[test]
    fn single_sample_degenerates_to_a_flagged_point() {
        let s = bootstrap_ci(&[2.5], 1000, 0.95, 1).unwrap();
        assert!(s.degenerate);
        assert_eq!((s.mean, s.ci_low, s.ci_high), (2.5, 2.5, 2.5));
    }

    #[test]
    fn bootstrap_rejects_bad_input() {
        assert!(bootstrap_ci(&[], 100, 0.95, 0).is_err());
        assert!(bootstrap_ci(&[1.0, f64::NAN], 100, 0.95, 0).is_err());
        assert!(bootstrap_ci(&[1.0, 2.0], 0, 0.95, 0).is_err());
        assert!(bootstrap_ci(&[1.0, 2.0], 100, 0.0, 0).is_err());
        assert!(bootstrap_ci(&[1.0, 2.0], 100, 1.0, 0).is_err());
        assert!(bootstrap_ci(&[1.0, 2.0], 100, -0.5, 0).is_err());
    }

    #[test]
    fn wider_level_gives_a_wider_interval() {
        let samples: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
        let narrow = bootstrap_ci(&samples, 1500, 0.90, 4).unwrap();
        let wide = bootstrap_ci(&samples, 1500, 0.99, 4).unwrap();
        assert!(wide.ci_low <= narrow.ci_low);
        assert!(wide.ci_high >= narrow.ci_high);
    }

    #[test]
    fn coverage_of_the_true_mean_is_near_nominal() {
        // 500 independent trials of n = 30 standard-normal draws; the 95%
        // interval should contain the true mean 0 at a rate in [90%, 99%].
        let normal = StandardNormal;
        let mut covered = 0;
        for trial in 0..500u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(50_000 + trial);
            let samples: Vec<f64> = (0..30).map(|_| normal.sample(&mut rng)).collect();
            let s = bootstrap_ci(&samples, 200, 0.95, 80_000 + trial).unwrap();
            if s.ci_low <= 0.0 && 0.0 <= s.ci_high {
                covered += 1;
            }
        }
        let rate = covered as f64 / 500.0;
        assert!(
            (0.90..=0.99).contains(&rate),
            "coverage {rate} outside [0.90, 0.99]"
        );
    }

    #[test]
    fn percentile_interpolates_between_order_statistics() {
        assert_eq!(percentile(&[3.0, 1.0, 2.0], 0.5).unwrap(), 2.0);
        assert_eq!(percentile(&[1.0, 2.0, 3.0, 4.0], 0.5).unwrap(), 2.5);
        assert_eq!(percentile(&[1.0, 2.0, 3.0, 4.0], 0.0).unwrap(), 1.0);
        assert_eq!(percentile(&[1.0, 2.0, 3.0, 4.0], 1.0).unwrap(), 4.0);
        assert_eq!(percentile(&[5.0], 0.3).unwrap(), 5.0);
        // h = 0.25·3 = 0.75 → 1 + 0.75·(2-1).
        assert!((percentile(&[1.0, 2.0, 3.0, 4.0], 0.25).unwrap() - 1.75).abs() < 1e-15);
    }

    #[test]
    fn percentile_rejects_bad_input() {
        assert!(percentile(&[], 0.5).is_err());
        assert!(percentile(&[1.0, f64::INFINITY], 0.5).is_err());
        assert!(percentile(&[1.0, 2.0], -0.1).is_err());
        assert!(percentile(&[1.0, 2.0], 1.1).is_err());
        assert!(percentile(&[1.0, 2.0], f64::NAN).is_err());
    }

    #[test]
    fn spearman_matches_hand_computed_values() {
        // Permutation distance formula on tie-free data: ρ = 1 - 6Σd²/(n³-n).
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!((spearman(&x, &[1.0, 2.0, 3.0, 5.0, 4.0]).unwrap() - 0.9).abs() < 1e-12);
        assert!((spearman(&x, &[2.0, 1.0, 4.0, 3.0, 5.0]).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn spearman_is_exactly_one_for_monotone_relations() {
        let x: [f64; 5] = [0.3, 1.1, 2.9, 4.0, 7.5];
        let cubed: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        assert_eq!(spearman(&x, &cubed).unwrap(), 1.0);
        let negated: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(spearman(&x, &negated).unwrap(), -1.0);
    }

    #[test]
    fn ties_share_average_ranks() {
        assert_eq!(
            average_ranks(&[10.0, 20.0, 20.0, 30.0]),
            vec![1.0, 2.5, 2.5, 4.0]
        );
        // Identical tie structure on both sides → perfect correlation.
        let x = [1.0, 2.0, 2.0, 3.0];
        assert_eq!(spearman(&x, &[10.0, 20.0, 20.0, 30.0]).unwrap(), 1.0);
        assert_eq!(spearman(&x, &[30.0, 20.0, 20.0, 10.0]).unwrap(), -1.0);
    }

    #[test]
    fn spearman_rejects_bad_input() {
        assert!(spearman(&[1.0, 2.0], &[1.0, 2.0]).is_err(), "too short");
        assert!(
            spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err(),
            "length mismatch"
        );
        assert!(spearman(&[1.0, 2.0, f64::NAN], &[1.0, 2.0, 3.0]).is_err());
        assert!(
            spearman(&[5.0, 5.0, 5.0], &[1.0, 2.0, 3.0]).is_err(),
            "constant input has no defined rank correlation"
        );
    }
}
