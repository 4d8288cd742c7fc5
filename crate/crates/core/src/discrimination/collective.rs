//! Two-state collective measurements: certifies that the tensor product of
//! the optimal single-state strategy is already the best joint measurement
//! on a pair of alphabet states.

use crate::error::{Error, Result};
use crate::qcore::{min_eigenvalue, tensor, Operator};

use super::game::{optimal_povm, transformed_state, CertificateResult, GuessingStrategy};

const GAMMA_HERM_TOL: f64 = 1e-10;

fn pair_hypotheses() -> Result<Vec<Operator>> {
    let mut states = Vec::with_capacity(16);
    for i in 1..=4 {
        for j in 1..=4 {
            states.push(tensor(&transformed_state(i)?, &transformed_state(j)?)?);
        }
    }
    Ok(states)
}

fn pair_elements(first: &GuessingStrategy, second: &GuessingStrategy) -> Result<Vec<Operator>> {
    let mut elements = Vec::with_capacity(16);
    for a in first.elements() {
        for b in second.elements() {
            elements.push(tensor(a, b)?);
        }
    }
    Ok(elements)
}

/// Certificate operator (1/16) Σ_{ij} (σ_i ⊗ σ_j)(π_i ⊗ π'_j) for a product
/// of two single-state strategies.
pub fn collective_gamma_pair(
    first: &GuessingStrategy,
    second: &GuessingStrategy,
) -> Result<Operator> {
    let states = pair_hypotheses()?;
    let elements = pair_elements(first, second)?;
    let mut gamma = Operator::zero(4)?;
    for (state, element) in states.iter().zip(&elements) {
        gamma = &gamma + &(state * element);
    }
    Ok(gamma.scale(1.0 / 16.0))
}

/// Optimality certificate for a product measurement on two states: passes
/// iff Γ₂ − (1/16)(σ_i ⊗ σ_j) ≥ −tol for all 16 hypothesis pairs. The
/// reported index is 4(i−1) + j.
pub fn collective_certificate_pair(
    first: &GuessingStrategy,
    second: &GuessingStrategy,
    tol: f64,
) -> Result<CertificateResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "certificate tolerance must be positive, got {tol}"
        )));
    }
    let gamma = collective_gamma_pair(first, second)?;
    let defect = gamma.hermiticity_defect();
    if defect > GAMMA_HERM_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let gamma = (&gamma.adjoint() + &gamma).scale(0.5);
    let mut worst_index = 1;
    let mut worst_eigenvalue = f64::INFINITY;
    for (k, state) in pair_hypotheses()?.iter().enumerate() {
        let condition = &gamma - &state.scale(1.0 / 16.0);
        let lo = min_eigenvalue(&condition)?;
        if lo < worst_eigenvalue {
            worst_eigenvalue = lo;
            worst_index = k + 1;
        }
    }
    Ok(CertificateResult {
        passed: worst_eigenvalue >= -tol,
        worst_index,
        worst_eigenvalue,
    })
}

/// Certificate for the optimal strategy applied independently to each of
/// two states. A pass means joint measurements cannot beat per-state ones,
/// so the two-game win probability is exactly μ².
pub fn collective_certificate_n2(tol: f64) -> Result<CertificateResult> {
    let optimal = optimal_povm();
    collective_certificate_pair(&optimal, &optimal, tol)
}
