//! The subset-guessing game a committer must win to break binding:
//! optimal measurement, win probability, optimality certificates, and the
//! analytic bounds they imply.

mod bounds;
mod collective;
mod game;
mod reduction;

pub use bounds::{azuma_bound, security_bound, SecurityConstants, MU, NOISE_THRESHOLD};
pub use collective::{collective_certificate_n2, collective_certificate_pair, collective_gamma_pair};
pub use game::{
    completeness_defect, gamma_operator, gamma_operator_of, holevo_certificate,
    holevo_certificate_of, max_confidence_ratio, optimal_angles, optimal_povm, random_strategy,
    transformed_state, win_probability, win_probability_of, CertificateResult, GuessingStrategy,
    SubsetGuess,
};
pub use reduction::{
    reduction_demo, reduction_statistics, relabel_guess, ReductionReport, ReductionStats,
};

pub(crate) use game::cached_density;
