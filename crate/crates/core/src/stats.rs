//! Statistical helpers for acceptance checks on simulated data.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Standard error sqrt(p̂(1 − p̂)/trials) of a binomial frequency estimate.
pub fn binomial_stderr(successes: u64, trials: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("stderr needs trials ≥ 1".into()));
    }
    if successes > trials {
        return Err(Error::InvalidArgument(format!(
            "{successes} successes out of {trials} trials"
        )));
    }
    let p = successes as f64 / trials as f64;
    Ok((p * (1.0 - p) / trials as f64).sqrt())
}

/// Result of a two-sample homogeneity test over K categories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub degrees_of_freedom: u32,
    pub p_value: f64,
}

/// Pearson chi-square test of whether two count vectors over the same
/// categories were drawn from one distribution. Categories empty in both
/// samples are dropped.
pub fn chi_square_homogeneity(first: &[u64], second: &[u64]) -> Result<ChiSquareOutcome> {
    if first.len() != second.len() {
        return Err(Error::DimensionMismatch {
            left: first.len(),
            right: second.len(),
        });
    }
    let row1: u64 = first.iter().sum();
    let row2: u64 = second.iter().sum();
    if row1 == 0 || row2 == 0 {
        return Err(Error::InvalidArgument(
            "both samples need at least one observation".into(),
        ));
    }
    let total = (row1 + row2) as f64;

    let mut statistic = 0.0;
    let mut occupied = 0u32;
    for (&a, &b) in first.iter().zip(second) {
        let column = a + b;
        if column == 0 {
            continue;
        }
        occupied += 1;
        for (observed, row_total) in [(a, row1), (b, row2)] {
            let expected = row_total as f64 * column as f64 / total;
            let diff = observed as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    if occupied < 2 {
        return Err(Error::InvalidArgument(
            "homogeneity test needs at least two occupied categories".into(),
        ));
    }

    let degrees_of_freedom = occupied - 1;
    let chi = ChiSquared::new(degrees_of_freedom as f64)
        .map_err(|e| Error::InvalidArgument(format!("chi-square setup: {e}")))?;
    let p_value = 1.0 - chi.cdf(statistic);
    Ok(ChiSquareOutcome {
        statistic,
        degrees_of_freedom,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::RandomSource;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stderr_matches_hand_values() {
        assert_abs_diff_eq!(
            binomial_stderr(50, 100).unwrap(),
            0.05,
            epsilon = 1e-15
        );
        assert_eq!(binomial_stderr(0, 100).unwrap(), 0.0);
        assert_eq!(binomial_stderr(100, 100).unwrap(), 0.0);
        assert!(binomial_stderr(5, 0).is_err());
        assert!(binomial_stderr(5, 4).is_err());
    }

    /// 2×2 table [[10,20],[20,10]]: every expected cell is 15, so the
    /// statistic is 4·(5²/15) = 20/3 with one degree of freedom.
    #[test]
    fn chi_square_statistic_matches_hand_computation() {
        let outcome = chi_square_homogeneity(&[10, 20], &[20, 10]).unwrap();
        assert_abs_diff_eq!(outcome.statistic, 20.0 / 3.0, epsilon = 1e-12);
        assert_eq!(outcome.degrees_of_freedom, 1);
        assert_abs_diff_eq!(outcome.p_value, 0.009823, epsilon = 3e-4);
    }

    #[test]
    fn identical_rows_give_zero_statistic() {
        let outcome = chi_square_homogeneity(&[7, 13, 29], &[7, 13, 29]).unwrap();
        assert_eq!(outcome.statistic, 0.0);
        assert_eq!(outcome.degrees_of_freedom, 2);
        assert_abs_diff_eq!(outcome.p_value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_categories_are_dropped() {
        let outcome = chi_square_homogeneity(&[10, 0, 20], &[20, 0, 10]).unwrap();
        assert_eq!(outcome.degrees_of_freedom, 1);
        assert_abs_diff_eq!(outcome.statistic, 20.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn same_distribution_samples_pass() {
        let mut rng = RandomSource::from_seed(151);
        let mut first = [0u64; 16];
        let mut second = [0u64; 16];
        for _ in 0..20_000 {
            first[rng.below(16)] += 1;
            second[rng.below(16)] += 1;
        }
        let outcome = chi_square_homogeneity(&first, &second).unwrap();
        assert!(outcome.p_value > 0.01, "p = {}", outcome.p_value);
    }

    #[test]
    fn shifted_distribution_samples_fail() {
        let mut rng = RandomSource::from_seed(157);
        let mut first = [0u64; 8];
        let mut second = [0u64; 8];
        for _ in 0..20_000 {
            first[rng.below(8)] += 1;
            // Second sample is biased toward low categories.
            let draw = rng.below(8).min(rng.below(8));
            second[draw] += 1;
        }
        let outcome = chi_square_homogeneity(&first, &second).unwrap();
        assert!(outcome.p_value < 1e-6, "p = {}", outcome.p_value);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(chi_square_homogeneity(&[1, 2], &[1, 2, 3]).is_err());
        assert!(chi_square_homogeneity(&[0, 0], &[1, 2]).is_err());
        assert!(chi_square_homogeneity(&[5, 0], &[3, 0]).is_err());
    }
}
