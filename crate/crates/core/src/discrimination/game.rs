//! The subset-guessing game: a qubit drawn uniformly from the BB84 alphabet
//! is measured once, and the measurer must name a cyclic-adjacent pair of
//! alphabet states containing it.

use std::f64::consts::PI;
use std::sync::LazyLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::eigen::inverse_sqrt;
use crate::qcore::{
    bb84_state, born_sample, min_eigenvalue, projector, random_psd, trace_product, wrap_index,
    Operator, Povm, PureState, RandomSource,
};

/// Hermiticity tolerance on the certificate operator.
const GAMMA_HERM_TOL: f64 = 1e-10;

/// Guess that the hidden state lies in {|e_i⟩, |e_{i+1}⟩}. These adjacent
/// pairs, one state from each basis, are the only pairs a single outcome
/// can vouch for simultaneously.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SubsetGuess {
    index: usize,
}

impl SubsetGuess {
    pub fn new(index: usize) -> Result<Self> {
        if (1..=4).contains(&index) {
            Ok(Self { index })
        } else {
            Err(Error::InvalidArgument(format!(
                "subset index {index} not in 1..=4"
            )))
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Indices of the two member states.
    pub fn members(&self) -> [usize; 2] {
        [self.index, wrap_index(self.index + 1)]
    }

    pub fn contains(&self, state_index: usize) -> bool {
        self.members().contains(&wrap_index(state_index))
    }

    /// Computational-basis bit this guess commits the measurer to: the bit
    /// whose eigenstate is the guess's computational-basis member.
    pub fn computational_bit(&self) -> u8 {
        match self.index {
            1 | 4 => 0,
            _ => 1,
        }
    }

    /// Hadamard-basis bit this guess commits the measurer to.
    pub fn hadamard_bit(&self) -> u8 {
        match self.index {
            1 | 2 => 0,
            _ => 1,
        }
    }

    /// Inverse of the bit pair mapping: each (computational, hadamard) bit
    /// pair pins down exactly one subset.
    pub fn from_declared_bits(computational: u8, hadamard: u8) -> Result<Self> {
        let index = match (computational, hadamard) {
            (0, 0) => 1,
            (1, 0) => 2,
            (1, 1) => 3,
            (0, 1) => 4,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "declared bits ({computational}, {hadamard}) not binary"
                )))
            }
        };
        Ok(Self { index })
    }
}

/// A four-outcome qubit measurement whose k-th outcome is announced as the
/// guess S_k. Elements may be zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessingStrategy {
    povm: Povm,
}

impl GuessingStrategy {
    pub fn new(povm: Povm) -> Result<Self> {
        if povm.dim() != 2 {
            return Err(Error::UnsupportedDimension { dim: povm.dim() });
        }
        if povm.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "strategy needs exactly 4 outcomes, got {}",
                povm.len()
            )));
        }
        Ok(Self { povm })
    }

    /// Strategy that ignores the qubit and always announces S_index.
    pub fn fixed_guess(index: usize) -> Result<Self> {
        let guess = SubsetGuess::new(index)?;
        let elements = (1..=4)
            .map(|k| {
                if k == guess.index() {
                    Operator::identity(2)
                } else {
                    Operator::zero(2)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(Povm::new(elements)?)
    }

    /// Strategy that announces a uniformly random subset.
    pub fn uniform_guess() -> Self {
        let quarter = Operator::identity(2)
            .expect("qubit identity")
            .scale(0.25);
        let povm = Povm::new(vec![quarter.clone(), quarter.clone(), quarter.clone(), quarter])
            .expect("four quarter-identities form a measurement");
        Self { povm }
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn elements(&self) -> &[Operator] {
        self.povm.elements()
    }

    /// Element announcing S_index, 1-based.
    pub fn element(&self, index: usize) -> Result<&Operator> {
        SubsetGuess::new(index)?;
        Ok(&self.povm.elements()[index - 1])
    }

    /// Measures `rho` and announces the sampled subset.
    pub fn measure(&self, rho: &Operator, rng: &mut RandomSource) -> Result<SubsetGuess> {
        let k = born_sample(rho, &self.povm, rng)?;
        SubsetGuess::new(k + 1)
    }
}

/// Verdict of an optimality certificate: the smallest eigenvalue found
/// across all hypothesis conditions, and which hypothesis produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateResult {
    pub passed: bool,
    pub worst_index: usize,
    pub worst_eigenvalue: f64,
}

static ALPHABET_DENSITIES: LazyLock<[Operator; 4]> = LazyLock::new(|| {
    [1, 2, 3, 4].map(|i| projector(&bb84_state(i).expect("alphabet state")))
});

/// Cached density operator of the i-th alphabet state, for sampling loops.
pub(crate) fn cached_density(index: usize) -> Result<&'static Operator> {
    if (1..=4).contains(&index) {
        Ok(&ALPHABET_DENSITIES[index - 1])
    } else {
        Err(Error::InvalidArgument(format!(
            "alphabet index {index} not in 1..=4"
        )))
    }
}

/// Density operator of the i-th alphabet state.
pub(crate) fn alphabet_density(index: usize) -> Result<Operator> {
    cached_density(index).cloned()
}

/// Equal mixture ½(ρ_i + ρ_{i+1}) of the two members of S_i: the effective
/// state to discriminate when only the announced subset matters.
pub fn transformed_state(index: usize) -> Result<Operator> {
    let a = alphabet_density(index)?;
    let b = alphabet_density(wrap_index(index + 1))?;
    Ok((&a + &b).scale(0.5))
}

/// Measurement directions θ_i = iπ/4 − π/8 of the optimal strategy.
pub fn optimal_angles() -> [f64; 4] {
    let mut angles = [0.0; 4];
    for (k, slot) in angles.iter_mut().enumerate() {
        *slot = (k + 1) as f64 * PI / 4.0 - PI / 8.0;
    }
    angles
}

fn angle_projector(theta: f64) -> Operator {
    let state = PureState::new(vec![theta.cos().into(), theta.sin().into()])
        .expect("direction vector is unit");
    projector(&state)
}

/// The optimal strategy: elements ½P_i with P_i projecting onto the
/// direction θ_i. Each outcome certifies its subset with confidence μ.
pub fn optimal_povm() -> GuessingStrategy {
    let elements = optimal_angles()
        .iter()
        .map(|theta| angle_projector(*theta).scale(0.5))
        .collect();
    let povm = Povm::new(elements).expect("optimal elements form a measurement");
    GuessingStrategy::new(povm).expect("optimal measurement is a qubit strategy")
}

/// Random four-outcome qubit strategy: four Wishart-distributed positive
/// operators whitened by the inverse square root of their sum.
pub fn random_strategy(rng: &mut RandomSource) -> Result<GuessingStrategy> {
    let raw: Vec<Operator> = (0..4)
        .map(|_| random_psd(2, rng))
        .collect::<Result<Vec<_>>>()?;
    let mut sum = Operator::zero(2)?;
    for a in &raw {
        sum = &sum + a;
    }
    let whitener = inverse_sqrt(&sum)?;
    let elements = raw.iter().map(|a| &(&whitener * a) * &whitener).collect();
    GuessingStrategy::new(Povm::new(elements)?)
}

fn check_strategy_elements(elements: &[Operator]) -> Result<()> {
    if elements.len() != 4 {
        return Err(Error::InvalidArgument(format!(
            "strategy needs exactly 4 elements, got {}",
            elements.len()
        )));
    }
    for el in elements {
        if el.dim() != 2 {
            return Err(Error::UnsupportedDimension { dim: el.dim() });
        }
    }
    Ok(())
}

/// Entrywise deviation of Σ elements from the identity. Works on raw
/// element lists so that deliberately broken strategies can be graded.
pub fn completeness_defect(elements: &[Operator]) -> Result<f64> {
    check_strategy_elements(elements)?;
    let mut sum = Operator::zero(2)?;
    for el in elements {
        sum = &sum + el;
    }
    sum.max_abs_diff(&Operator::identity(2)?)
}

/// Average win probability ¼ Σ_i Tr(ρ_i (π_i + π_{i−1})) over uniform
/// alphabet priors: outcome i or i−1 both announce a subset containing e_i.
pub fn win_probability_of(elements: &[Operator]) -> Result<f64> {
    check_strategy_elements(elements)?;
    let mut total = 0.0;
    for i in 1..=4usize {
        let rho = alphabet_density(i)?;
        let covering = &elements[i - 1] + &elements[(i + 2) % 4];
        total += trace_product(&rho, &covering)?.re;
    }
    Ok(total / 4.0)
}

pub fn win_probability(strategy: &GuessingStrategy) -> Result<f64> {
    win_probability_of(strategy.elements())
}

/// The certificate operator ¼ Σ_i (½ρ_i + ½ρ_{i+1}) π_i, computed exactly
/// in this left-multiplied order and not symmetrized.
pub fn gamma_operator_of(elements: &[Operator]) -> Result<Operator> {
    check_strategy_elements(elements)?;
    let mut gamma = Operator::zero(2)?;
    for i in 1..=4usize {
        let weighted = &transformed_state(i)? * &elements[i - 1];
        gamma = &gamma + &weighted;
    }
    Ok(gamma.scale(0.25))
}

pub fn gamma_operator(strategy: &GuessingStrategy) -> Result<Operator> {
    gamma_operator_of(strategy.elements())
}

fn hermitian_part(op: &Operator) -> Operator {
    (&op.adjoint() + op).scale(0.5)
}

/// Optimality certificate: passes iff Γ − ¼σ_i ≥ −tol for every subset
/// hypothesis i, which pins the strategy as a minimum-error measurement
/// for the transformed ensemble and hence optimal for the game.
pub fn holevo_certificate_of(elements: &[Operator], tol: f64) -> Result<CertificateResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "certificate tolerance must be positive, got {tol}"
        )));
    }
    let gamma = gamma_operator_of(elements)?;
    let defect = gamma.hermiticity_defect();
    if defect > GAMMA_HERM_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let gamma = hermitian_part(&gamma);
    let mut worst_index = 1;
    let mut worst_eigenvalue = f64::INFINITY;
    for i in 1..=4usize {
        let condition = &gamma - &transformed_state(i)?.scale(0.25);
        let lo = min_eigenvalue(&condition)?;
        if lo < worst_eigenvalue {
            worst_eigenvalue = lo;
            worst_index = i;
        }
    }
    Ok(CertificateResult {
        passed: worst_eigenvalue >= -tol,
        worst_index,
        worst_eigenvalue,
    })
}

pub fn holevo_certificate(strategy: &GuessingStrategy, tol: f64) -> Result<CertificateResult> {
    holevo_certificate_of(strategy.elements(), tol)
}

/// Confidence Tr(A·¼(ρ_i + ρ_{i+1})) / (½·Tr A) that the hidden state lies
/// in S_i given that a measurement realized the outcome operator `a`.
pub fn max_confidence_ratio(a: &Operator, index: usize) -> Result<f64> {
    SubsetGuess::new(index)?;
    if a.dim() != 2 {
        return Err(Error::UnsupportedDimension { dim: a.dim() });
    }
    let lo = min_eigenvalue(a)?;
    if lo < -1e-10 {
        return Err(Error::NotPositive { min_eigenvalue: lo });
    }
    let trace = a.trace().re;
    if trace <= 1e-12 {
        return Err(Error::InvalidTrace { deviation: trace });
    }
    let conditional = transformed_state(index)?.scale(0.5);
    Ok(trace_product(a, &conditional)?.re / (0.5 * trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrimination::bounds::MU;
    use approx::assert_abs_diff_eq;

    #[test]
    fn subset_membership_matches_cyclic_pairs() {
        let expected: [[usize; 2]; 4] = [[1, 2], [2, 3], [3, 4], [4, 1]];
        for i in 1..=4 {
            let s = SubsetGuess::new(i).unwrap();
            assert_eq!(s.members(), expected[i - 1]);
            for m in 1..=4 {
                assert_eq!(s.contains(m), expected[i - 1].contains(&m));
            }
        }
        assert!(SubsetGuess::new(0).is_err());
        assert!(SubsetGuess::new(5).is_err());
    }

    #[test]
    fn subset_members_are_nonorthogonal_cross_basis_pairs() {
        for i in 1..=4 {
            let [a, b] = SubsetGuess::new(i).unwrap().members();
            let fid = bb84_state(a)
                .unwrap()
                .fidelity(&bb84_state(b).unwrap())
                .unwrap();
            assert_abs_diff_eq!(fid, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn declared_bits_round_trip() {
        for i in 1..=4 {
            let s = SubsetGuess::new(i).unwrap();
            let back =
                SubsetGuess::from_declared_bits(s.computational_bit(), s.hadamard_bit()).unwrap();
            assert_eq!(back, s);
        }
        assert!(SubsetGuess::from_declared_bits(2, 0).is_err());
    }

    /// The bit pair of S_i is the pair of basis outcomes its two member
    /// states produce deterministically.
    #[test]
    fn declared_bits_match_member_eigenstates() {
        for i in 1..=4 {
            let s = SubsetGuess::new(i).unwrap();
            for m in s.members() {
                match m {
                    1 => assert_eq!(s.computational_bit(), 0),
                    3 => assert_eq!(s.computational_bit(), 1),
                    2 => assert_eq!(s.hadamard_bit(), 0),
                    4 => assert_eq!(s.hadamard_bit(), 1),
                    _ => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn optimal_elements_match_stated_directions() {
        let strategy = optimal_povm();
        let theta = PI / 8.0;
        let first = angle_projector(theta).scale(0.5);
        assert!(strategy.element(1).unwrap().max_abs_diff(&first).unwrap() < 1e-15);
        for i in 1..=4 {
            assert_abs_diff_eq!(strategy.element(i).unwrap().trace().re, 0.5, epsilon = 1e-15);
        }
        assert!(completeness_defect(strategy.elements()).unwrap() < 1e-12);
    }

    #[test]
    fn optimal_strategy_wins_with_probability_mu() {
        let p = win_probability(&optimal_povm()).unwrap();
        assert_abs_diff_eq!(p, MU, epsilon = 1e-12);
    }

    #[test]
    fn fixed_guess_wins_half_the_time() {
        for i in 1..=4 {
            let p = win_probability(&GuessingStrategy::fixed_guess(i).unwrap()).unwrap();
            assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn uniform_guess_wins_half_the_time() {
        let p = win_probability(&GuessingStrategy::uniform_guess()).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn optimal_gamma_is_proportional_to_identity() {
        let gamma = gamma_operator(&optimal_povm()).unwrap();
        let expected = Operator::identity(2)
            .unwrap()
            .scale(0.125 * (1.0 + std::f64::consts::FRAC_1_SQRT_2));
        assert!(gamma.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    /// One angle off by 0.1 rad must break completeness or the optimality
    /// certificate (here it always breaks completeness: the four
    /// directions stop averaging to the identity).
    #[test]
    fn perturbed_angles_fail_certification() {
        for k in 0..4 {
            for delta in [0.1, -0.1] {
                let mut angles = optimal_angles();
                angles[k] += delta;
                let elements: Vec<Operator> =
                    angles.iter().map(|&t| angle_projector(t).scale(0.5)).collect();
                let incomplete = completeness_defect(&elements).unwrap() > 1e-10;
                let uncertified = match holevo_certificate_of(&elements, 1e-10) {
                    Ok(result) => !result.passed,
                    Err(_) => true,
                };
                assert!(incomplete || uncertified, "angle {k} shift {delta}");
            }
        }
    }

    /// Direct formula evaluation for the always-S_1 strategy: Γ is the
    /// first transformed state scaled by ¼.
    #[test]
    fn fixed_guess_gamma_matches_hand_computation() {
        let gamma = gamma_operator(&GuessingStrategy::fixed_guess(1).unwrap()).unwrap();
        let expected = transformed_state(1).unwrap().scale(0.25);
        assert!(gamma.max_abs_diff(&expected).unwrap() < 1e-15);
        assert_abs_diff_eq!(gamma.trace().re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma.entry(0, 0).re, 0.1875, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma.entry(0, 1).re, 0.0625, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma.entry(1, 1).re, 0.0625, epsilon = 1e-15);
    }

    #[test]
    fn certificate_passes_for_optimal_strategy() {
        let result = holevo_certificate(&optimal_povm(), 1e-10).unwrap();
        assert!(result.passed);
        assert!(result.worst_eigenvalue.abs() < 1e-12);
    }

    /// Eigenvalue minima for always-S_1, worked out by hand: conditions 2
    /// and 4 reduce to ±⅛ eigenvalue pairs and condition 3 to ±√2/8.
    #[test]
    fn certificate_fails_for_fixed_guess_with_known_margin() {
        let result =
            holevo_certificate(&GuessingStrategy::fixed_guess(1).unwrap(), 1e-10).unwrap();
        assert!(!result.passed);
        assert_eq!(result.worst_index, 3);
        assert_abs_diff_eq!(
            result.worst_eigenvalue,
            -std::f64::consts::SQRT_2 / 8.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(result.worst_eigenvalue, -0.17677669529663687, epsilon = 1e-15);
    }

    #[test]
    fn certificate_fails_for_uniform_guess() {
        let result = holevo_certificate(&GuessingStrategy::uniform_guess(), 1e-10).unwrap();
        assert!(!result.passed);
        assert!(result.worst_eigenvalue < -0.01);
    }

    #[test]
    fn certificate_rejects_nonpositive_tolerance() {
        assert!(holevo_certificate(&optimal_povm(), 0.0).is_err());
        assert!(holevo_certificate(&optimal_povm(), -1e-10).is_err());
    }

    #[test]
    fn random_strategies_never_beat_mu_and_obey_the_trace_identity() {
        let mut rng = RandomSource::from_seed(109);
        for _ in 0..1000 {
            let strategy = random_strategy(&mut rng).unwrap();
            let p = win_probability(&strategy).unwrap();
            assert!(p <= MU + 1e-9, "win probability {p} exceeds the bound");
            let gamma = gamma_operator(&strategy).unwrap();
            assert_abs_diff_eq!(2.0 * gamma.trace().re, p, epsilon = 1e-10);
        }
    }

    #[test]
    fn max_confidence_of_identity_is_half() {
        let id = Operator::identity(2).unwrap();
        for i in 1..=4 {
            assert_abs_diff_eq!(max_confidence_ratio(&id, i).unwrap(), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn max_confidence_is_saturated_by_optimal_directions() {
        for (k, theta) in optimal_angles().iter().enumerate() {
            let p = angle_projector(*theta);
            let ratio = max_confidence_ratio(&p, k + 1).unwrap();
            assert_abs_diff_eq!(ratio, MU, epsilon = 1e-12);
        }
    }

    #[test]
    fn max_confidence_never_beats_mu() {
        let mut rng = RandomSource::from_seed(113);
        for _ in 0..10_000 {
            let a = random_psd(2, &mut rng).unwrap();
            for i in 1..=4 {
                let ratio = max_confidence_ratio(&a, i).unwrap();
                assert!(ratio <= MU + 1e-9, "ratio {ratio} exceeds the bound");
            }
        }
    }

    #[test]
    fn max_confidence_rejects_bad_outcomes() {
        let zero = Operator::zero(2).unwrap();
        assert!(matches!(
            max_confidence_ratio(&zero, 1),
            Err(Error::InvalidTrace { .. })
        ));
        let negative = Operator::identity(2).unwrap().scale(-1.0);
        assert!(matches!(
            max_confidence_ratio(&negative, 1),
            Err(Error::NotPositive { .. })
        ));
        assert!(max_confidence_ratio(&Operator::identity(2).unwrap(), 0).is_err());
    }

    #[test]
    fn measuring_an_alphabet_state_wins_at_the_optimal_rate() {
        let strategy = optimal_povm();
        let mut rng = RandomSource::from_seed(127);
        let trials = 40_000u32;
        let mut wins = 0u32;
        for _ in 0..trials {
            let m = rng.below(4) + 1;
            let rho = alphabet_density(m).unwrap();
            if strategy.measure(&rho, &mut rng).unwrap().contains(m) {
                wins += 1;
            }
        }
        let freq = wins as f64 / trials as f64;
        let stderr = (MU * (1.0 - MU) / trials as f64).sqrt();
        assert!((freq - MU).abs() < 4.0 * stderr, "frequency {freq}");
    }

    #[test]
    fn strategy_constructor_rejects_wrong_shapes() {
        let id = Operator::identity(2).unwrap();
        let halves = Povm::new(vec![id.scale(0.5), id.scale(0.5)]).unwrap();
        assert!(GuessingStrategy::new(halves).is_err());

        let id4 = Operator::identity(4).unwrap();
        let quarters =
            Povm::new(vec![id4.scale(0.25), id4.scale(0.25), id4.scale(0.25), id4.scale(0.25)])
                .unwrap();
        assert!(GuessingStrategy::new(quarters).is_err());
    }
}
