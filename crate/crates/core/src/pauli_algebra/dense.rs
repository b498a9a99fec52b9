use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Tolerance used when a Hermitian flag is requested on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense operator on `n_qubits` qubits backed by a complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<C64>,
    n_qubits: usize,
    hermitian: bool,
}

fn log2_exact(d: usize) -> Option<usize> {
    (d.is_power_of_two()).then(|| d.trailing_zeros() as usize)
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n_qubits = log2_exact(matrix.nrows()).ok_or_else(|| {
            Error::Dimension(format!(
                "dimension {} is not a power of two",
                matrix.nrows()
            ))
        })?;
        Ok(DenseOperator {
            matrix,
            n_qubits,
            hermitian: false,
        })
    }

    /// Wraps a matrix and verifies Hermiticity to [`HERMITIAN_TOL`] relative
    /// to its Frobenius norm (absolute for norms below one).
    pub fn hermitian(matrix: DMatrix<C64>, context: &str) -> Result<Self> {
        let mut op = Self::from_matrix(matrix)?;
        let dev = op.hermiticity_deviation();
        if dev > HERMITIAN_TOL * op.matrix.norm().max(1.0) {
            return Err(Error::NotHermitian {
                context: context.to_string(),
                deviation: dev,
            });
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn zeros(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        DenseOperator {
            matrix: DMatrix::zeros(d, d),
            n_qubits,
            hermitian: true,
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        DenseOperator {
            matrix: DMatrix::identity(d, d),
            n_qubits,
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Frobenius norm of `A - A†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            matrix: self.matrix.adjoint(),
            ..*self
        }
        .with_matrix_flag(self.hermitian)
    }

    pub fn transpose(&self) -> Self {
        DenseOperator {
            matrix: self.matrix.transpose(),
            n_qubits: self.n_qubits,
            hermitian: self.hermitian,
        }
    }

    fn with_matrix_flag(mut self, hermitian: bool) -> Self {
        self.hermitian = hermitian;
        self
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn scale(&self, s: C64) -> Self {
        DenseOperator {
            matrix: &self.matrix * s,
            n_qubits: self.n_qubits,
            hermitian: self.hermitian && s.im == 0.0,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self * other + other * self
    }

    /// `self ⊗ other`, with `self` on the leftmost qubits.
    pub fn kron(&self, other: &Self) -> Self {
        DenseOperator {
            matrix: self.matrix.kronecker(&other.matrix),
            n_qubits: self.n_qubits + other.n_qubits,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    /// Max-abs entry distance, handy for tolerance checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "operator dimensions {} and {} differ",
            self.dim(),
            other.dim()
        );
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.check_dim(rhs);
        DenseOperator {
            matrix: &self.matrix * &rhs.matrix,
            n_qubits: self.n_qubits,
            hermitian: false,
        }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        self.check_dim(rhs);
        DenseOperator {
            matrix: &self.matrix + &rhs.matrix,
            n_qubits: self.n_qubits,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Add for DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: DenseOperator) -> DenseOperator {
        &self + &rhs
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        self.check_dim(rhs);
        DenseOperator {
            matrix: &self.matrix - &rhs.matrix,
            n_qubits: self.n_qubits,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Sub for DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: DenseOperator) -> DenseOperator {
        &self - &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(DenseOperator::from_matrix(DMatrix::zeros(3, 3)).is_err());
        assert!(DenseOperator::from_matrix(DMatrix::zeros(2, 4)).is_err());
        assert_eq!(
            DenseOperator::from_matrix(DMatrix::zeros(8, 8))
                .unwrap()
                .n_qubits(),
            3
        );
    }

    #[test]
    fn hermitian_flag_is_verified() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = C64::new(0.0, 1.0);
        m[(1, 0)] = C64::new(0.0, -1.0);
        assert!(DenseOperator::hermitian(m.clone(), "sigma_y")
            .unwrap()
            .is_flagged_hermitian());
        m[(1, 0)] = C64::new(0.0, 1.0);
        assert!(matches!(
            DenseOperator::hermitian(m, "bad"),
            Err(Error::NotHermitian { .. })
        ));
    }
}
