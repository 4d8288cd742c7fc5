//! Monte Carlo security properties: no strategy in a large random sample
//! beats the per-state ceiling, and the optimal attack's success counts
//! obey the concentration tail that underwrites the noisy-regime bound.

use relbc_core::adversary::{
    cheat_with_tolerance_curve, correct_count_histogram, estimate_cheat_probability,
    AttackStrategy,
};
use relbc_core::discrimination::{azuma_bound, random_strategy, MU};
use relbc_core::qcore::RandomSource;
use relbc_core::stats::binomial_stderr;

#[test]
fn random_povm_attacks_never_beat_the_bound() {
    let mut source = RandomSource::from_seed(1_009);
    for round in 0..1000u64 {
        let strategy = AttackStrategy::CustomPovm(random_strategy(&mut source).unwrap());
        let report = estimate_cheat_probability(&strategy, 1, 10_000, 0.0, 50_000 + round).unwrap();
        assert!(
            !report.bound_violated,
            "round {round}: estimate {} vs bound {}",
            report.estimate, report.bound
        );
    }
}

#[test]
fn optimal_attack_success_counts_obey_the_concentration_tail() {
    let n = 1000usize;
    let trials = 10_000u64;
    let histogram =
        correct_count_histogram(&AttackStrategy::OptimalSubsetGuess, n, trials, 60_001).unwrap();
    assert_eq!(histogram.iter().sum::<u64>(), trials);

    for eps in [0.02f64, 0.05] {
        let threshold = n as f64 * (MU + eps);
        let tail: u64 = histogram
            .iter()
            .enumerate()
            .filter(|&(count, _)| count as f64 + 1e-9 >= threshold)
            .map(|(_, &c)| c)
            .sum();
        let fraction = tail as f64 / trials as f64;
        let bound = azuma_bound(n as u32, eps).unwrap();
        let stderr = binomial_stderr(tail, trials).unwrap();
        assert!(
            fraction <= bound + 4.0 * stderr,
            "eps {eps}: tail fraction {fraction} exceeds bound {bound}"
        );
    }
}

#[test]
fn noisy_tolerance_estimate_stays_below_its_azuma_bound() {
    let curve = cheat_with_tolerance_curve(
        &AttackStrategy::OptimalSubsetGuess,
        200,
        &[0.05],
        100_000,
        61_001,
    )
    .unwrap();
    let point = &curve[0];
    let eps = point.epsilon.unwrap();
    assert!((eps - ((1.0 - 0.05) - MU)).abs() < 1e-12);
    let bound = point.azuma.unwrap();
    assert!((bound - azuma_bound(200, eps).unwrap()).abs() < 1e-15);
    assert!(
        point.estimate <= bound + 4.0 * point.stderr,
        "estimate {} exceeds bound {bound}",
        point.estimate
    );
}
