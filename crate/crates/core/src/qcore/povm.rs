//! POVMs and Born-rule sampling.

use super::eigen::min_eigenvalue;
use super::operator::{trace_product, Operator};
use super::rng::RandomSource;
use crate::error::{Error, Result};

/// PSD tolerance on POVM elements and density operators.
pub(crate) const PSD_TOL: f64 = 1e-10;
/// Entrywise tolerance on completeness (elements summing to identity).
pub(crate) const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance on total sampled probability, and on clamping negative dust.
pub(crate) const PROB_TOL: f64 = 1e-9;

/// Positive operator-valued measure: a non-empty list of PSD operators
/// summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<Operator>,
}

impl Povm {
    /// Validates positivity (min eigenvalue ≥ −1e-10) of every element and
    /// completeness within 1e-10 entrywise.
    pub fn new(elements: Vec<Operator>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidArgument("POVM needs at least one element".into()))?;
        let dim = first.dim();
        let mut sum = Operator::zero(dim)?;
        for el in &elements {
            if el.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: el.dim(),
                });
            }
            let lo = min_eigenvalue(el)?;
            if lo < -PSD_TOL {
                return Err(Error::NotPositive { min_eigenvalue: lo });
            }
            sum = &sum + el;
        }
        let deviation = sum.max_abs_diff(&Operator::identity(dim)?)?;
        if deviation > COMPLETENESS_TOL {
            return Err(Error::IncompletePovm { deviation });
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn validate_density(rho: &Operator) -> Result<()> {
    let defect = rho.hermiticity_defect();
    if defect > PSD_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let trace_dev = (rho.trace().re - 1.0).abs();
    if trace_dev > PSD_TOL {
        return Err(Error::InvalidTrace {
            deviation: trace_dev,
        });
    }
    let lo = min_eigenvalue(rho)?;
    if lo < -PSD_TOL {
        return Err(Error::NotPositive { min_eigenvalue: lo });
    }
    Ok(())
}

/// Outcome distribution `p_k = Tr(ρ π_k)`, with sub-1e-9 negative dust
/// clamped to zero and the vector renormalized.
pub fn outcome_probabilities(rho: &Operator, povm: &Povm) -> Result<Vec<f64>> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: povm.dim(),
        });
    }
    validate_density(rho)?;
    let mut probs = Vec::with_capacity(povm.len());
    let mut total = 0.0;
    for el in povm.elements() {
        let p = trace_product(rho, el)?.re;
        if p < -PROB_TOL {
            return Err(Error::InconsistentProbabilities { total: p });
        }
        let p = p.max(0.0);
        total += p;
        probs.push(p);
    }
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::InconsistentProbabilities { total });
    }
    for p in &mut probs {
        *p /= total;
    }
    Ok(probs)
}

/// Samples a measurement of `rho` with `povm`, returning the 0-based index
/// of the realized element.
pub fn born_sample(rho: &Operator, povm: &Povm, rng: &mut RandomSource) -> Result<usize> {
    let probs = outcome_probabilities(rho, povm)?;
    let draw = rng.uniform();
    let mut acc = 0.0;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if draw < acc {
            return Ok(k);
        }
    }
    Ok(probs.len() - 1)
}
