//! Reduction of a collective guessing strategy on n states to an
//! individual strategy on one unknown state, by conditioning on correct
//! guesses for n−1 known states and teleporting the unknown one.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{bb84_state, projector, teleport_through_singlet, RandomSource};
use crate::stats::binomial_stderr;

use super::bounds::MU;
use super::game::{optimal_povm, SubsetGuess};

const ITERATION_CAP: u64 = 1_000_000;

/// Subset relabeling induced by each Bell outcome's Pauli correction: a
/// guess about the teleported-but-uncorrected qubit becomes a guess about
/// the input qubit under the inverse correction, which permutes the
/// alphabet and therefore the subsets.
const RELABEL: [[usize; 4]; 4] = [
    [3, 4, 1, 2], // Y swaps both basis pairs
    [2, 1, 4, 3], // X swaps the computational pair
    [4, 3, 2, 1], // Z swaps the Hadamard pair
    [1, 2, 3, 4], // identity
];

/// Maps a guess about the uncorrected receiver qubit to the equivalent
/// guess about the teleported input.
pub fn relabel_guess(bell_outcome: usize, guess: SubsetGuess) -> Result<SubsetGuess> {
    let row = RELABEL
        .get(bell_outcome)
        .ok_or_else(|| Error::InvalidArgument(format!("Bell outcome {bell_outcome} not in 0..4")))?;
    SubsetGuess::new(row[guess.index() - 1])
}

/// One accepted run of the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    /// Loop passes used, counting the accepted one.
    pub iterations: u64,
    /// Whether the relabeled guess contained the unknown state.
    pub success: bool,
}

/// Runs the rejection-sampling reduction for the product strategy on `n`
/// states: each pass measures n−1 freshly drawn known states and restarts
/// unless every guess is correct; the accepted pass teleports an unknown
/// alphabet state through a singlet, measures the uncorrected receiver
/// qubit, and relabels the announced subset through the Bell outcome.
pub fn reduction_demo(n: usize, rng: &mut RandomSource) -> Result<ReductionReport> {
    if n == 0 || n > 3 {
        return Err(Error::InvalidArgument(format!(
            "reduction is implemented for 1 ≤ n ≤ 3, got {n}"
        )));
    }
    let strategy = optimal_povm();
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        if iterations > ITERATION_CAP {
            return Err(Error::IterationCapExceeded {
                cap: ITERATION_CAP,
            });
        }
        let mut accepted = true;
        for _ in 0..n - 1 {
            let known = rng.below(4) + 1;
            let guess = strategy.measure(&projector(&bb84_state(known)?), rng)?;
            if !guess.contains(known) {
                accepted = false;
                break;
            }
        }
        if !accepted {
            continue;
        }

        let unknown_index = rng.below(4) + 1;
        let unknown = bb84_state(unknown_index)?;
        let outcome = teleport_through_singlet(&unknown, rng)?;
        let raw_guess = strategy.measure(&projector(&outcome.raw_state), rng)?;
        let final_guess = relabel_guess(outcome.bell_outcome, raw_guess)?;
        return Ok(ReductionReport {
            iterations,
            success: final_guess.contains(unknown_index),
        });
    }
}

/// Aggregated reduction runs, each on its own random stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionStats {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub mean_iterations: f64,
    /// Per-state ceiling the conditional success rate is compared to.
    pub bound: f64,
    pub bound_violated: bool,
}

/// Repeats [`reduction_demo`] over independent trials and compares the
/// conditional success rate against the single-game ceiling.
pub fn reduction_statistics(n: usize, trials: u64, seed: u64) -> Result<ReductionStats> {
    if trials < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    let (successes, iterations) = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<(u64, u64)> {
            let mut rng = RandomSource::stream(seed, trial);
            let report = reduction_demo(n, &mut rng)?;
            Ok((u64::from(report.success), report.iterations))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let estimate = successes as f64 / trials as f64;
    let stderr = binomial_stderr(successes, trials)?;
    Ok(ReductionStats {
        n,
        trials,
        seed,
        successes,
        estimate,
        stderr,
        mean_iterations: iterations as f64 / trials as f64,
        bound: MU,
        bound_violated: estimate > MU + 4.0 * stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{bb84_index_of, bell_correction, PureState};

    /// The frozen table must agree with direct linear algebra: relabeled
    /// membership of i equals raw membership of the Pauli image of e_i.
    #[test]
    fn relabel_table_matches_pauli_action_on_the_alphabet() {
        for bell_outcome in 0..4 {
            let correction = bell_correction(bell_outcome).unwrap();
            for state_index in 1..=4usize {
                let moved = correction
                    .apply(&bb84_state(state_index).unwrap())
                    .unwrap();
                let moved = PureState::normalized(moved).unwrap();
                let image = bb84_index_of(&moved).expect("Paulis permute the alphabet");
                for subset in 1..=4usize {
                    let raw = SubsetGuess::new(subset).unwrap();
                    let relabeled = relabel_guess(bell_outcome, raw).unwrap();
                    assert_eq!(
                        relabeled.contains(state_index),
                        raw.contains(image),
                        "outcome {bell_outcome}, subset {subset}, state {state_index}"
                    );
                }
            }
        }
    }

    #[test]
    fn relabeling_is_an_involution() {
        for bell_outcome in 0..4 {
            for subset in 1..=4 {
                let guess = SubsetGuess::new(subset).unwrap();
                let once = relabel_guess(bell_outcome, guess).unwrap();
                let twice = relabel_guess(bell_outcome, once).unwrap();
                assert_eq!(twice, guess);
            }
        }
    }

    #[test]
    fn single_state_demo_reduces_to_the_plain_game() {
        let mut rng = RandomSource::from_seed(131);
        let runs = 20_000u32;
        let mut wins = 0u32;
        for _ in 0..runs {
            let report = reduction_demo(1, &mut rng).unwrap();
            assert_eq!(report.iterations, 1);
            if report.success {
                wins += 1;
            }
        }
        let freq = wins as f64 / runs as f64;
        let stderr = (MU * (1.0 - MU) / runs as f64).sqrt();
        assert!((freq - MU).abs() < 4.0 * stderr, "frequency {freq}");
    }

    #[test]
    fn conditioned_demo_stays_within_the_single_game_bound() {
        let mut rng = RandomSource::from_seed(137);
        let runs = 20_000u32;
        let mut wins = 0u32;
        for _ in 0..runs {
            if reduction_demo(2, &mut rng).unwrap().success {
                wins += 1;
            }
        }
        let freq = wins as f64 / runs as f64;
        let stderr = (freq * (1.0 - freq) / runs as f64).sqrt();
        assert!(freq <= MU + 4.0 * stderr, "frequency {freq}");
    }

    /// Restart counts are geometric with acceptance probability μ^{n−1}.
    #[test]
    fn iteration_counts_match_the_geometric_oracle() {
        let mut rng = RandomSource::from_seed(139);
        for (n, acceptance) in [(2usize, MU), (3, MU * MU)] {
            let runs = 10_000u32;
            let total: u64 = (0..runs)
                .map(|_| reduction_demo(n, &mut rng).unwrap().iterations)
                .sum();
            let mean = total as f64 / runs as f64;
            let expected = 1.0 / acceptance;
            // Geometric variance (1−p)/p²; four standard errors.
            let stderr = ((1.0 - acceptance) / (acceptance * acceptance) / runs as f64).sqrt();
            assert!(
                (mean - expected).abs() < 4.0 * stderr.max(1e-3),
                "n={n}: mean {mean} vs {expected}"
            );
        }
    }

    #[test]
    fn out_of_range_sizes_are_rejected() {
        let mut rng = RandomSource::from_seed(149);
        assert!(reduction_demo(0, &mut rng).is_err());
        assert!(reduction_demo(4, &mut rng).is_err());
    }

    #[test]
    fn aggregated_statistics_match_a_serial_replay() {
        let stats = reduction_statistics(2, 2_000, 151).unwrap();
        let mut successes = 0u64;
        let mut iterations = 0u64;
        for trial in 0..2_000 {
            let mut rng = RandomSource::stream(151, trial);
            let report = reduction_demo(2, &mut rng).unwrap();
            successes += u64::from(report.success);
            iterations += report.iterations;
        }
        assert_eq!(stats.successes, successes);
        assert_eq!(stats.mean_iterations, iterations as f64 / 2_000.0);
        assert_eq!(stats.estimate, successes as f64 / 2_000.0);
        assert!(!stats.bound_violated);
    }

    #[test]
    fn single_state_statistics_never_loop() {
        let stats = reduction_statistics(1, 500, 157).unwrap();
        assert_eq!(stats.mean_iterations, 1.0);
        assert_eq!(stats.bound, MU);
    }

    #[test]
    fn tiny_trial_budgets_are_rejected() {
        assert!(reduction_statistics(1, 99, 163).is_err());
    }
}
