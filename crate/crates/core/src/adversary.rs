//! Cheating-committer strategies and Monte Carlo estimates of their
//! success at unveiling both bit values, compared against the product
//! bound and its concentration-bound relaxation under error tolerance.

use std::sync::LazyLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::discrimination::{
    azuma_bound, cached_density, optimal_povm, security_bound, GuessingStrategy, SubsetGuess, MU,
};
use crate::error::{Error, Result};
use crate::protocol::{bob_prepare, wing_consistency, Basis, Outcome, OutcomeRecord, PreparedStates};
use crate::qcore::{born_sample, RandomSource};
use crate::stats::binomial_stderr;

static OPTIMAL_ATTACK: LazyLock<GuessingStrategy> = LazyLock::new(optimal_povm);

/// How the committer produces a subset guess for each received state.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackStrategy {
    /// Measure with the best four-outcome discrimination measurement.
    OptimalSubsetGuess,
    /// Measure every state in one fixed basis and invent the conjugate
    /// basis outcome with a coin flip.
    FixedBasisThenFabricate(Basis),
    /// Announce a uniformly random subset without touching the state.
    UniformGuess,
    /// Any caller-supplied four-outcome measurement.
    CustomPovm(GuessingStrategy),
}

impl AttackStrategy {
    /// Identifier used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            AttackStrategy::OptimalSubsetGuess => "optimal",
            AttackStrategy::FixedBasisThenFabricate(Basis::Computational) => "fixed-z",
            AttackStrategy::FixedBasisThenFabricate(Basis::Hadamard) => "fixed-x",
            AttackStrategy::UniformGuess => "uniform",
            AttackStrategy::CustomPovm(_) => "custom",
        }
    }

    /// Produces the subset guess for one received state.
    pub fn guess(&self, state_index: usize, rng: &mut RandomSource) -> Result<SubsetGuess> {
        match self {
            AttackStrategy::OptimalSubsetGuess => {
                OPTIMAL_ATTACK.measure(cached_density(state_index)?, rng)
            }
            AttackStrategy::FixedBasisThenFabricate(basis) => {
                let measured = born_sample(cached_density(state_index)?, basis.povm(), rng)? as u8;
                let fabricated = rng.bit();
                match basis {
                    Basis::Computational => SubsetGuess::from_declared_bits(measured, fabricated),
                    Basis::Hadamard => SubsetGuess::from_declared_bits(fabricated, measured),
                }
            }
            AttackStrategy::UniformGuess => SubsetGuess::new(rng.below(4) + 1),
            AttackStrategy::CustomPovm(strategy) => {
                strategy.measure(cached_density(state_index)?, rng)
            }
        }
    }
}

/// One attempted dual unveiling: the per-state guesses, the outcome
/// records they pin down for each wing, and whether each wing's record
/// would pass verification for its claimed bit.
#[derive(Debug, Clone, PartialEq)]
pub struct CheatTrial {
    guesses: Vec<SubsetGuess>,
    z_record: OutcomeRecord,
    x_record: OutcomeRecord,
    correct_count: usize,
    z_consistent: bool,
    x_consistent: bool,
    success: bool,
}

impl CheatTrial {
    pub fn n(&self) -> usize {
        self.guesses.len()
    }

    pub fn guesses(&self) -> &[SubsetGuess] {
        &self.guesses
    }

    /// Record unveiled at the wing claiming bit 0.
    pub fn z_record(&self) -> &OutcomeRecord {
        &self.z_record
    }

    /// Record unveiled at the wing claiming bit 1.
    pub fn x_record(&self) -> &OutcomeRecord {
        &self.x_record
    }

    /// States whose guessed subset contains the prepared state.
    pub fn correct_count(&self) -> usize {
        self.correct_count
    }

    pub fn z_consistent(&self) -> bool {
        self.z_consistent
    }

    pub fn x_consistent(&self) -> bool {
        self.x_consistent
    }

    /// Both wings would accept their respective bits.
    pub fn success(&self) -> bool {
        self.success
    }
}

/// Runs one dual-unveiling attempt: every state gets a subset guess whose
/// computational member fixes the bit-0 record and whose Hadamard member
/// fixes the bit-1 record; each record is then graded exactly as the
/// verifier would grade it.
pub fn run_cheat_trial(
    strategy: &AttackStrategy,
    prepared: &PreparedStates,
    tolerance: f64,
    rng: &mut RandomSource,
) -> Result<CheatTrial> {
    if !(0.0..1.0).contains(&tolerance) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must lie in [0,1), got {tolerance}"
        )));
    }
    let n = prepared.n();
    let mut guesses = Vec::with_capacity(n);
    let mut z_entries = Vec::with_capacity(n);
    let mut x_entries = Vec::with_capacity(n);
    let mut correct_count = 0usize;
    for k in 0..n {
        let index = prepared.index(k);
        let guess = strategy.guess(index, rng)?;
        if guess.contains(index) {
            correct_count += 1;
        }
        z_entries.push(Outcome::from_bit(guess.computational_bit())?);
        x_entries.push(Outcome::from_bit(guess.hadamard_bit())?);
        guesses.push(guess);
    }
    let z_record = OutcomeRecord::new(z_entries)?;
    let x_record = OutcomeRecord::new(x_entries)?;
    let z_consistent = wing_consistency(&z_record, 0, prepared)?.error_fraction <= tolerance;
    let x_consistent = wing_consistency(&x_record, 1, prepared)?.error_fraction <= tolerance;
    Ok(CheatTrial {
        guesses,
        z_record,
        x_record,
        correct_count,
        z_consistent,
        x_consistent,
        success: z_consistent && x_consistent,
    })
}

/// Estimated dual-unveiling success rate against the product bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub strategy: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub successes: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    pub bound_violated: bool,
}

fn state_count_as_u32(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::InvalidArgument(format!("state count {n} too large")))
}

fn check_trial_budget(trials: u64) -> Result<()> {
    if trials < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    Ok(())
}

/// Monte Carlo estimate of the success probability over independent
/// trials with fresh preparations, each trial on its own random stream.
pub fn estimate_cheat_probability(
    strategy: &AttackStrategy,
    n: usize,
    trials: u64,
    tolerance: f64,
    seed: u64,
) -> Result<MonteCarloReport> {
    let bound = security_bound(state_count_as_u32(n)?)?;
    check_trial_budget(trials)?;
    if !(0.0..1.0).contains(&tolerance) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must lie in [0,1), got {tolerance}"
        )));
    }
    let successes = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<u64> {
            let mut rng = RandomSource::stream(seed, trial);
            let prepared = bob_prepare(n, &mut rng)?;
            let trial = run_cheat_trial(strategy, &prepared, tolerance, &mut rng)?;
            Ok(u64::from(trial.success()))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let estimate = successes as f64 / trials as f64;
    let stderr = binomial_stderr(successes, trials)?;
    Ok(MonteCarloReport {
        strategy: strategy.label().to_string(),
        n,
        trials,
        seed,
        tolerance,
        successes,
        estimate,
        stderr,
        bound,
        bound_violated: estimate > bound + 4.0 * stderr,
    })
}

/// Distribution of per-trial correct-guess counts: entry c counts the
/// trials in which exactly c of the n subset guesses contained the
/// prepared state.
pub fn correct_count_histogram(
    strategy: &AttackStrategy,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    state_count_as_u32(n)?;
    if n == 0 {
        return Err(Error::InvalidArgument("need n ≥ 1".into()));
    }
    check_trial_budget(trials)?;
    (0..trials)
        .into_par_iter()
        .try_fold(
            || vec![0u64; n + 1],
            |mut acc, trial| -> Result<Vec<u64>> {
                let mut rng = RandomSource::stream(seed, trial);
                let prepared = bob_prepare(n, &mut rng)?;
                let trial = run_cheat_trial(strategy, &prepared, 0.0, &mut rng)?;
                acc[trial.correct_count()] += 1;
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )
}

/// One tolerance setting's estimate, paired with the concentration bound
/// at the matching deviation when one applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TolerancePoint {
    pub tolerance: f64,
    pub successes: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub epsilon: Option<f64>,
    pub azuma: Option<f64>,
}

/// Success rates across error tolerances, from one shared set of trials.
/// At tolerance t a trial succeeds when at most a fraction t of its
/// guesses miss, and the matching deviation is ε = (1 − t) − μ, with the
/// concentration bound reported while ε stays positive.
pub fn cheat_with_tolerance_curve(
    strategy: &AttackStrategy,
    n: usize,
    tolerances: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<TolerancePoint>> {
    let n_u32 = state_count_as_u32(n)?;
    for &t in tolerances {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must lie in [0,1), got {t}"
            )));
        }
    }
    let histogram = correct_count_histogram(strategy, n, trials, seed)?;
    tolerances
        .iter()
        .map(|&tolerance| {
            let threshold = n as f64 * (1.0 - tolerance);
            let successes = histogram
                .iter()
                .enumerate()
                .filter(|&(count, _)| count as f64 + 1e-9 >= threshold)
                .map(|(_, &c)| c)
                .sum::<u64>();
            let estimate = successes as f64 / trials as f64;
            let stderr = binomial_stderr(successes, trials)?;
            let epsilon = (1.0 - tolerance) - MU;
            let (epsilon, azuma) = if epsilon > 0.0 {
                (Some(epsilon), Some(azuma_bound(n_u32, epsilon)?))
            } else {
                (None, None)
            };
            Ok(TolerancePoint {
                tolerance,
                successes,
                estimate,
                stderr,
                epsilon,
                azuma,
            })
        })
        .collect()
}

/// Estimated success of the optimal attack when the committer may also
/// declare states lost, against the loss-adjusted bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossCheckReport {
    pub loss: f64,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub mean_survivors: f64,
    /// Average over trials of μ^(surviving count).
    pub expected_bound: f64,
    /// Closed form of the same average, (f + (1−f)μ)^n.
    pub analytic_bound: f64,
    pub bound_violated: bool,
}

/// Optimal attack with post-measurement loss declarations: each state is
/// measured first and declared lost with probability f afterwards; the
/// trial succeeds when every surviving guess contains its state. Success
/// is compared against the mean of μ^(survivors).
pub fn loss_attack_check(f: f64, n: usize, trials: u64, seed: u64) -> Result<LossCheckReport> {
    state_count_as_u32(n)?;
    if !(0.0..1.0).contains(&f) {
        return Err(Error::InvalidArgument(format!(
            "loss probability must lie in [0,1), got {f}"
        )));
    }
    if n as f64 * (1.0 - f) < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "expected survivor count n(1−f) = {} is below 1",
            n as f64 * (1.0 - f)
        )));
    }
    check_trial_budget(trials)?;
    let strategy = AttackStrategy::OptimalSubsetGuess;
    let (successes, survivor_histogram) = (0..trials)
        .into_par_iter()
        .try_fold(
            || (0u64, vec![0u64; n + 1]),
            |(mut successes, mut histogram), trial| -> Result<(u64, Vec<u64>)> {
                let mut rng = RandomSource::stream(seed, trial);
                let prepared = bob_prepare(n, &mut rng)?;
                let mut survivors = 0usize;
                let mut all_correct = true;
                for k in 0..n {
                    let index = prepared.index(k);
                    let guess = strategy.guess(index, &mut rng)?;
                    let lost = rng.bernoulli(f);
                    if !lost {
                        survivors += 1;
                        if !guess.contains(index) {
                            all_correct = false;
                        }
                    }
                }
                successes += u64::from(all_correct);
                histogram[survivors] += 1;
                Ok((successes, histogram))
            },
        )
        .try_reduce(
            || (0u64, vec![0u64; n + 1]),
            |(sa, mut ha), (sb, hb)| {
                for (x, y) in ha.iter_mut().zip(hb) {
                    *x += y;
                }
                Ok((sa + sb, ha))
            },
        )?;
    let estimate = successes as f64 / trials as f64;
    let stderr = binomial_stderr(successes, trials)?;
    let mean_survivors = survivor_histogram
        .iter()
        .enumerate()
        .map(|(m, &c)| m as f64 * c as f64)
        .sum::<f64>()
        / trials as f64;
    let expected_bound = survivor_histogram
        .iter()
        .enumerate()
        .map(|(m, &c)| MU.powi(m as i32) * c as f64)
        .sum::<f64>()
        / trials as f64;
    let analytic_bound = (f + (1.0 - f) * MU).powi(state_count_as_u32(n)? as i32);
    Ok(LossCheckReport {
        loss: f,
        n,
        trials,
        seed,
        successes,
        estimate,
        stderr,
        mean_survivors,
        expected_bound,
        analytic_bound,
        bound_violated: estimate > expected_bound + 4.0 * stderr,
    })
}
