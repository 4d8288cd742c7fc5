//! Dense complex operators on small register spaces.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::state::{PureState, MAX_DIM};
use crate::error::{Error, Result};

/// Tolerance on Hermiticity for validated constructors.
pub(crate) const HERM_TOL: f64 = 1e-12;

/// Square complex matrix, row-major, on dimension 2, 4, 8, or 16.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&dim) || !dim.is_power_of_two() {
        return Err(Error::UnsupportedDimension { dim });
    }
    Ok(())
}

impl Operator {
    /// Builds an operator from `dim * dim` row-major entries, all finite.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "operator entry",
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds an operator entry by entry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::new(dim, entries)
    }

    /// Like [`Operator::new`], additionally requiring Hermiticity within
    /// 1e-12.
    pub fn hermitian(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        let op = Self::new(dim, entries)?;
        let deviation = op.hermiticity_defect();
        if deviation > HERM_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub(crate) fn entry_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let dim = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[j * dim + i] = self.entry(i, j).conj();
            }
        }
        Self { dim, entries }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.entry(i, j) - self.entry(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Largest entrywise absolute difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Applies the operator to a state, returning raw (possibly
    /// unnormalized) amplitudes.
    pub fn apply(&self, state: &PureState) -> Result<Vec<Complex64>> {
        if self.dim != state.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: state.dim(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (i, slot) in out.iter_mut().enumerate() {
            for j in 0..self.dim {
                *slot += self.entry(i, j) * state.amplitude(j);
            }
        }
        Ok(out)
    }
}

/// Arithmetic panics on dimension mismatch: formula code always combines
/// operators built on the same space, so a mismatch is a programming error.
impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        let dim = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let aik = self.entry(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    entries[i * dim + j] += aik * rhs.entry(k, j);
                }
            }
        }
        Operator { dim, entries }
    }
}

/// Rank-1 projector `|ψ⟩⟨ψ|`: Hermitian, idempotent, trace 1.
pub fn projector(state: &PureState) -> Operator {
    let dim = state.dim();
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            entries.push(state.amplitude(i) * state.amplitude(j).conj());
        }
    }
    Operator { dim, entries }
}

/// Kronecker product; errors when the result would exceed dimension 16.
pub fn tensor(a: &Operator, b: &Operator) -> Result<Operator> {
    let dim = a.dim() * b.dim();
    if dim > MAX_DIM {
        return Err(Error::CapacityExceeded { dim, max: MAX_DIM });
    }
    Operator::from_fn(dim, |i, j| {
        let (ia, ib) = (i / b.dim(), i % b.dim());
        let (ja, jb) = (j / b.dim(), j % b.dim());
        a.entry(ia, ja) * b.entry(ib, jb)
    })
}

/// `Re Tr(a · b)` without forming the product; the imaginary part is also
/// returned so callers can assert it vanishes for Hermitian pairs.
pub fn trace_product(a: &Operator, b: &Operator) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let dim = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        for k in 0..dim {
            acc += a.entry(i, k) * b.entry(k, i);
        }
    }
    Ok(acc)
}

pub fn pauli_x() -> Operator {
    Operator::new(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .expect("constant matrix is valid")
}

pub fn pauli_y() -> Operator {
    Operator::new(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .expect("constant matrix is valid")
}

pub fn pauli_z() -> Operator {
    Operator::new(
        2,
        vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ],
    )
    .expect("constant matrix is valid")
}
