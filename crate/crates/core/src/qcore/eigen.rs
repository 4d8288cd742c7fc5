//! Hermitian eigenvalue routines: closed form at dimension 2, cyclic
//! complex Jacobi sweeps above.

use num_complex::Complex64;

use super::operator::Operator;
use crate::error::{Error, Result};

/// Hermiticity tolerance on eigensolver inputs.
const INPUT_HERM_TOL: f64 = 1e-12;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this.
const OFF_DIAG_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

/// Smallest eigenvalue of a Hermitian operator, accurate to 1e-10.
pub fn min_eigenvalue(h: &Operator) -> Result<f64> {
    let defect = h.hermiticity_defect();
    if defect > INPUT_HERM_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    if h.dim() == 2 {
        let a = h.entry(0, 0).re;
        let d = h.entry(1, 1).re;
        let z = h.entry(0, 1);
        let mid = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + z.norm_sqr()).sqrt();
        return Ok(mid - radius);
    }
    let (values, _) = jacobi_eigensystem(h, false)?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

/// All eigenvalues, ascending.
pub fn eigenvalues(h: &Operator) -> Result<Vec<f64>> {
    let defect = h.hermiticity_defect();
    if defect > INPUT_HERM_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let (mut values, _) = jacobi_eigensystem(h, false)?;
    values.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(values)
}

/// Eigenvalues plus a unitary whose columns are the eigenvectors.
pub(crate) fn eigensystem(h: &Operator) -> Result<(Vec<f64>, Operator)> {
    let defect = h.hermiticity_defect();
    if defect > INPUT_HERM_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let (values, vectors) = jacobi_eigensystem(h, true)?;
    Ok((values, vectors.expect("vectors requested")))
}

/// Inverse square root of a positive-definite Hermitian operator.
pub(crate) fn inverse_sqrt(h: &Operator) -> Result<Operator> {
    let (values, vectors) = eigensystem(h)?;
    if let Some(&lo) = values
        .iter()
        .find(|v| **v < 1e-12)
    {
        return Err(Error::NotPositive { min_eigenvalue: lo });
    }
    let dim = h.dim();
    // V · diag(1/√λ) · V†
    Operator::from_fn(dim, |i, j| {
        (0..dim)
            .map(|k| vectors.entry(i, k) * vectors.entry(j, k).conj() / values[k].sqrt())
            .sum()
    })
}

fn off_diagonal_norm(a: &Operator) -> f64 {
    let dim = a.dim();
    let mut acc = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                acc += a.entry(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi for complex Hermitian matrices. Each rotation zeroes one
/// off-diagonal pair via the unitary that diagonalizes the 2×2 principal
/// block: a phase absorbing arg(A[p][q]) composed with a real rotation.
fn jacobi_eigensystem(h: &Operator, want_vectors: bool) -> Result<(Vec<f64>, Option<Operator>)> {
    let dim = h.dim();
    let mut a = h.clone();
    let mut v = if want_vectors {
        Some(Operator::identity(dim)?)
    } else {
        None
    };

    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < OFF_DIAG_TOL {
            let values = (0..dim).map(|i| a.entry(i, i).re).collect();
            return Ok((values, v));
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a.entry(p, q);
                let r = apq.norm();
                if r < OFF_DIAG_TOL / (dim * dim) as f64 {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a.entry(p, p).re;
                let aqq = a.entry(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Column p/q entries of the rotation U = diag(1, e^{-iφ}) · R
                // restricted to the (p, q) plane.
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(-s, 0.0);
                let u_qp = phase.conj() * s;
                let u_qq = phase.conj() * c;

                // A ← U† A U, touching only rows/columns p and q.
                for k in 0..dim {
                    let akp = a.entry(k, p);
                    let akq = a.entry(k, q);
                    *a.entry_mut(k, p) = akp * u_pp + akq * u_qp;
                    *a.entry_mut(k, q) = akp * u_pq + akq * u_qq;
                }
                for k in 0..dim {
                    let apk = a.entry(p, k);
                    let aqk = a.entry(q, k);
                    *a.entry_mut(p, k) = u_pp.conj() * apk + u_qp.conj() * aqk;
                    *a.entry_mut(q, k) = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                // The rotated pair is zero in exact arithmetic; suppress dust.
                *a.entry_mut(p, q) = Complex64::new(0.0, 0.0);
                *a.entry_mut(q, p) = Complex64::new(0.0, 0.0);
                let dpp = a.entry(p, p).re;
                let dqq = a.entry(q, q).re;
                *a.entry_mut(p, p) = Complex64::new(dpp, 0.0);
                *a.entry_mut(q, q) = Complex64::new(dqq, 0.0);

                if let Some(vecs) = v.as_mut() {
                    for k in 0..dim {
                        let vkp = vecs.entry(k, p);
                        let vkq = vecs.entry(k, q);
                        *vecs.entry_mut(k, p) = vkp * u_pp + vkq * u_qp;
                        *vecs.entry_mut(k, q) = vkp * u_pq + vkq * u_qq;
                    }
                }
            }
        }
    }
    if off_diagonal_norm(&a) < OFF_DIAG_TOL {
        let values = (0..dim).map(|i| a.entry(i, i).re).collect();
        return Ok((values, v));
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::random::random_hermitian;
    use crate::qcore::rng::RandomSource;
    use crate::qcore::state::random_state;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrices_are_exact() {
        let d = Operator::new(2, vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(min_eigenvalue(&d).unwrap(), -1.0, epsilon = 1e-14);
        let i4 = Operator::identity(4).unwrap();
        assert_abs_diff_eq!(min_eigenvalue(&i4).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn dim2_closed_form_matches_hand_computation() {
        // [[2, 1+i], [1-i, 0]]: eigenvalues 1 ± √3.
        let m = Operator::new(2, vec![c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(min_eigenvalue(&m).unwrap(), 1.0 - 3.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let m = Operator::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(min_eigenvalue(&m), Err(Error::NotHermitian { .. })));
    }

    /// Rayleigh quotients upper-bound the smallest eigenvalue.
    #[test]
    fn rayleigh_quotient_oracle() {
        let mut rng = RandomSource::from_seed(41);
        for &dim in &[2usize, 4, 8, 16] {
            let h = random_hermitian(dim, &mut rng).unwrap();
            let lo = min_eigenvalue(&h).unwrap();
            for _ in 0..100 {
                let v = random_state(dim, &mut rng).unwrap();
                let hv = h.apply(&v).unwrap();
                let quotient: f64 = v
                    .amplitudes()
                    .iter()
                    .zip(&hv)
                    .map(|(a, b)| (a.conj() * b).re)
                    .sum();
                assert!(
                    lo <= quotient + 1e-10,
                    "dim {dim}: min {lo} above Rayleigh quotient {quotient}"
                );
            }
        }
    }

    /// The eigensystem reconstructs the input: V diag(λ) V† = H.
    #[test]
    fn eigensystem_reconstructs_input() {
        let mut rng = RandomSource::from_seed(43);
        for &dim in &[2usize, 4, 8] {
            for _ in 0..20 {
                let h = random_hermitian(dim, &mut rng).unwrap();
                let (values, vectors) = eigensystem(&h).unwrap();
                let rebuilt = Operator::from_fn(dim, |i, j| {
                    (0..dim)
                        .map(|k| vectors.entry(i, k) * vectors.entry(j, k).conj() * values[k])
                        .sum()
                })
                .unwrap();
                assert!(
                    rebuilt.max_abs_diff(&h).unwrap() < 1e-10,
                    "reconstruction failed at dim {dim}"
                );
            }
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let mut rng = RandomSource::from_seed(47);
        for &dim in &[4usize, 16] {
            let h = random_hermitian(dim, &mut rng).unwrap();
            let sum: f64 = eigenvalues(&h).unwrap().iter().sum();
            assert_abs_diff_eq!(sum, h.trace().re, epsilon = 1e-9);
        }
    }

    #[test]
    fn inverse_sqrt_squares_to_inverse() {
        let mut rng = RandomSource::from_seed(53);
        for &dim in &[2usize, 4] {
            let g = crate::qcore::random::random_psd(dim, &mut rng).unwrap();
            let pd = &g + &Operator::identity(dim).unwrap(); // strictly positive
            let inv_sqrt = inverse_sqrt(&pd).unwrap();
            let should_be_identity = &(&inv_sqrt * &pd) * &inv_sqrt;
            assert!(
                should_be_identity
                    .max_abs_diff(&Operator::identity(dim).unwrap())
                    .unwrap()
                    < 1e-10
            );
        }
    }

    #[test]
    fn inverse_sqrt_rejects_singular_input() {
        let p = crate::qcore::operator::projector(&crate::qcore::state::bb84_state(1).unwrap());
        assert!(matches!(inverse_sqrt(&p), Err(Error::NotPositive { .. })));
    }
}
