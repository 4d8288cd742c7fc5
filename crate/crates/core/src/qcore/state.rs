//! Pure states of small qubit registers and the conjugate-coding alphabet.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::rng::RandomSource;
use crate::error::{Error, Result};

/// Largest Hilbert-space dimension the toolkit operates on (4 qubits).
pub const MAX_DIM: usize = 16;

/// Tolerance on state normalization.
pub(crate) const NORM_TOL: f64 = 1e-12;

fn check_dim(dim: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&dim) || !dim.is_power_of_two() {
        return Err(Error::UnsupportedDimension { dim });
    }
    Ok(())
}

/// Unit vector in a register space of dimension 2, 4, 8, or 16.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes, which must be finite and unit-norm
    /// within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "state amplitude",
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let deviation = (norm - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `amplitudes` and builds the state; the zero vector is
    /// rejected.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "state amplitude",
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidArgument(
                "cannot normalize the zero vector".into(),
            ));
        }
        let scaled = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self { amplitudes: scaled })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Overlap `|⟨self|other⟩|²`; global phase is irrelevant, so this is
    /// the canonical state comparison.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

/// Conjugate-coding alphabet: index 1 ↦ |0⟩, 2 ↦ |+⟩, 3 ↦ |1⟩, 4 ↦ |−⟩.
/// Index arithmetic elsewhere wraps modulo 4 (see [`wrap_index`]).
pub fn bb84_state(index: usize) -> Result<PureState> {
    let s = FRAC_1_SQRT_2;
    let amps = match index {
        1 => vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        2 => vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
        3 => vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        4 => vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "alphabet index {index} not in 1..=4"
            )))
        }
    };
    PureState::new(amps)
}

/// Wraps a 1-based alphabet index onto 1..=4.
pub fn wrap_index(index: usize) -> usize {
    debug_assert!(index >= 1);
    (index - 1) % 4 + 1
}

/// Identifies which alphabet ray `state` lies on (up to global phase),
/// within overlap 1e-9 of unity.
pub fn bb84_index_of(state: &PureState) -> Option<usize> {
    if state.dim() != 2 {
        return None;
    }
    (1..=4).find(|&i| {
        let e = bb84_state(i).expect("index in range");
        state.fidelity(&e).map(|f| (f - 1.0).abs() < 1e-9).unwrap_or(false)
    })
}

/// Haar-distributed random state: normalized vector of complex Gaussians.
pub fn random_state(dim: usize, rng: &mut RandomSource) -> Result<PureState> {
    check_dim(dim)?;
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gaussian(), rng.gaussian()))
        .collect();
    PureState::normalized(amps)
}

/// Haar-distributed random qubit.
pub fn random_qubit(rng: &mut RandomSource) -> PureState {
    random_state(2, rng).expect("dimension 2 is supported")
}
