//! Single-qubit teleportation through a singlet pair.

use num_complex::Complex64;

use super::operator::{pauli_x, pauli_y, pauli_z, Operator};
use super::rng::RandomSource;
use super::state::PureState;
use crate::error::{Error, Result};

/// Bell basis order: Φ+, Φ−, Ψ+, Ψ−.
const BELL_AMPLITUDES: [[Complex64; 4]; 4] = {
    const Z: Complex64 = Complex64::new(0.0, 0.0);
    const P: Complex64 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    const M: Complex64 = Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[P, Z, Z, P], [P, Z, Z, M], [Z, P, P, Z], [Z, P, M, Z]]
};

/// One of the four Bell states, indexed 0..4 in the order Φ+, Φ−, Ψ+, Ψ−.
pub fn bell_state(outcome: usize) -> Result<PureState> {
    let amps = BELL_AMPLITUDES
        .get(outcome)
        .ok_or_else(|| Error::InvalidArgument(format!("Bell outcome {outcome} not in 0..4")))?;
    PureState::new(amps.to_vec())
}

/// The singlet (|01⟩ − |10⟩)/√2 shared between sender and receiver.
pub fn singlet_state() -> PureState {
    bell_state(3).expect("singlet is a valid Bell state")
}

/// Pauli correction that maps the receiver's post-measurement qubit back to
/// the input state, per Bell outcome.
pub fn bell_correction(outcome: usize) -> Result<Operator> {
    match outcome {
        0 => Ok(pauli_y()),
        1 => Ok(pauli_x()),
        2 => Ok(pauli_z()),
        3 => Operator::identity(2),
        _ => Err(Error::InvalidArgument(format!(
            "Bell outcome {outcome} not in 0..4"
        ))),
    }
}

/// Result of teleporting a qubit: the sampled Bell outcome, the receiver's
/// qubit before correction, and the corrected (= input) state.
#[derive(Debug, Clone)]
pub struct TeleportOutcome {
    pub bell_outcome: usize,
    pub raw_state: PureState,
    pub state: PureState,
}

/// Simulates teleportation of `psi` through a fresh singlet: forms the
/// three-qubit product state, projects the first two qubits onto a Bell
/// state sampled by the Born rule, and applies the matching Pauli
/// correction to the receiver.
pub fn teleport_through_singlet(
    psi: &PureState,
    rng: &mut RandomSource,
) -> Result<TeleportOutcome> {
    if psi.dim() != 2 {
        return Err(Error::UnsupportedDimension { dim: psi.dim() });
    }
    let singlet = singlet_state();
    // joint[4a + 2b + c] with a the input qubit, (b, c) the singlet pair.
    let mut joint = [Complex64::new(0.0, 0.0); 8];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                joint[4 * a + 2 * b + c] = psi.amplitude(a) * singlet.amplitude(2 * b + c);
            }
        }
    }

    // Unnormalized receiver amplitudes conditioned on each Bell outcome.
    let mut branches = [[Complex64::new(0.0, 0.0); 2]; 4];
    let mut weights = [0.0f64; 4];
    for (k, bell) in BELL_AMPLITUDES.iter().enumerate() {
        for c in 0..2 {
            let mut amp = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    amp += bell[2 * a + b].conj() * joint[4 * a + 2 * b + c];
                }
            }
            branches[k][c] = amp;
        }
        weights[k] = branches[k].iter().map(|z| z.norm_sqr()).sum();
    }

    let total: f64 = weights.iter().sum();
    let draw = rng.uniform() * total;
    let mut acc = 0.0;
    let mut bell_outcome = 3;
    for (k, w) in weights.iter().enumerate() {
        acc += w;
        if draw < acc {
            bell_outcome = k;
            break;
        }
    }

    let raw_state = PureState::normalized(branches[bell_outcome].to_vec())?;
    let corrected = bell_correction(bell_outcome)?.apply(&raw_state)?;
    let state = PureState::normalized(corrected)?;
    Ok(TeleportOutcome {
        bell_outcome,
        raw_state,
        state,
    })
}

/// Round-trip demonstration: teleports `state` and returns the corrected
/// receiver qubit, which matches the input up to global phase.
pub fn teleport_demo(state: &PureState, rng: &mut RandomSource) -> Result<PureState> {
    Ok(teleport_through_singlet(state, rng)?.state)
}
