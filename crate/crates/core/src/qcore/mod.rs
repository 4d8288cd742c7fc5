//! Complex linear algebra and quantum primitives for dimensions 2 to 16:
//! pure states, Hermitian operators, POVMs, Born-rule sampling, tensor
//! products, and qubit teleportation.

pub mod eigen;
pub mod operator;
pub mod povm;
pub mod random;
pub mod rng;
pub mod state;
pub mod teleport;

/// Complex scalar used throughout the crate.
pub type ComplexScalar = num_complex::Complex64;

pub use eigen::{eigenvalues, min_eigenvalue};
pub use operator::{pauli_x, pauli_y, pauli_z, projector, tensor, trace_product, Operator};
pub use povm::{born_sample, outcome_probabilities, Povm};
pub use random::{random_hermitian, random_psd};
pub use rng::RandomSource;
pub use state::{bb84_index_of, bb84_state, random_qubit, random_state, wrap_index, PureState, MAX_DIM};
pub use teleport::{
    bell_correction, bell_state, singlet_state, teleport_demo, teleport_through_singlet,
    TeleportOutcome,
};
