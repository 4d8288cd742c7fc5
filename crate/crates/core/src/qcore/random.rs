//! Random operators for property tests and strategy sampling.

use num_complex::Complex64;

use super::operator::Operator;
use super::rng::RandomSource;
use crate::error::Result;

/// Complex Ginibre matrix: i.i.d. standard-normal real and imaginary parts.
fn random_ginibre(dim: usize, rng: &mut RandomSource) -> Result<Operator> {
    Operator::from_fn(dim, |_, _| Complex64::new(rng.gaussian(), rng.gaussian()))
}

/// Random positive semidefinite operator `G†G` for Ginibre `G`.
pub fn random_psd(dim: usize, rng: &mut RandomSource) -> Result<Operator> {
    let g = random_ginibre(dim, rng)?;
    Ok(&g.adjoint() * &g)
}

/// Random Hermitian operator `(G + G†)/2`.
pub fn random_hermitian(dim: usize, rng: &mut RandomSource) -> Result<Operator> {
    let g = random_ginibre(dim, rng)?;
    Ok((&g + &g.adjoint()).scale(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::eigen::min_eigenvalue;

    #[test]
    fn random_psd_is_positive_and_hermitian() {
        let mut rng = RandomSource::from_seed(59);
        for &dim in &[2usize, 4] {
            for _ in 0..100 {
                let a = random_psd(dim, &mut rng).unwrap();
                assert!(a.is_hermitian(1e-12));
                assert!(min_eigenvalue(&a).unwrap() >= -1e-10);
            }
        }
    }

    #[test]
    fn random_hermitian_is_hermitian() {
        let mut rng = RandomSource::from_seed(61);
        for _ in 0..100 {
            let a = random_hermitian(8, &mut rng).unwrap();
            assert!(a.is_hermitian(1e-12));
        }
    }
}
