//! Analytic security bounds for sequences of guessing games.

use serde::Serialize;

use crate::error::{Error, Result};

/// Optimal single-game win probability, ½(1 + 1/√2).
pub const MU: f64 = 0.5 * (1.0 + std::f64::consts::FRAC_1_SQRT_2);

/// Largest tolerable combined noise and error rate, 1 − μ = ½ − 1/(2√2).
pub const NOISE_THRESHOLD: f64 = 1.0 - MU;

/// The two constants every security statement is phrased in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecurityConstants {
    pub mu: f64,
    pub noise_threshold: f64,
}

impl SecurityConstants {
    pub fn standard() -> Self {
        Self {
            mu: MU,
            noise_threshold: NOISE_THRESHOLD,
        }
    }
}

impl Default for SecurityConstants {
    fn default() -> Self {
        Self::standard()
    }
}

/// Upper bound μ^n on the probability of winning all of n independent
/// guessing games.
pub fn security_bound(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("bound needs n ≥ 1".into()));
    }
    Ok(MU.powi(n as i32))
}

/// Concentration bound exp(−n·eps²/(2μ²)) on the fraction of games won
/// exceeding μ + eps.
pub fn azuma_bound(n: u32, eps: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("bound needs n ≥ 1".into()));
    }
    if !eps.is_finite() {
        return Err(Error::NonFinite {
            context: "azuma_bound eps",
        });
    }
    if eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "azuma_bound needs eps > 0, got {eps}"
        )));
    }
    Ok((-(n as f64) * eps * eps / (2.0 * MU * MU)).exp())
}
