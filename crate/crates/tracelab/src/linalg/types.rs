//! Refinements of `ComplexMatrix` with spectral invariants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eig::hermitian_eig;
use crate::linalg::matrix::ComplexMatrix;

/// Relative Hermitian-symmetry tolerance: residual <= 1e-12 * ||M||_F.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Numerical-PSD floor: lambda_min >= -1e-10 * ||M||.
pub const PSD_TOL: f64 = 1e-10;
/// Relative eigenvalue floor below which fractional/negative powers and
/// inverses refuse to proceed.
pub const INVERSION_FLOOR: f64 = 1e-12;

/// A square matrix equal to its conjugate transpose within tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let _ = mat.dim()?;
        let tol = HERMITIAN_TOL * mat.frobenius_norm().max(f64::MIN_POSITIVE);
        let residual = mat.hermitian_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        Ok(Self { mat })
    }

    /// Force symmetry by averaging with the adjoint, then wrap.
    pub fn symmetrized(mat: &ComplexMatrix) -> Result<Self> {
        let _ = mat.dim()?;
        Ok(Self {
            mat: mat.symmetrize(),
        })
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        hermitian_eig(self)
    }
}

/// Eigenvalues ascending, eigenvectors as the columns of a unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// U diag(f(lambda)) U*.
    pub fn assemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let mut scaled = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let w = f(self.eigenvalues[j]);
            for i in 0..n {
                scaled[(i, j)] = u[(i, j)] * w;
            }
        }
        &scaled * &u.conj_transpose()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.assemble(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

/// Hermitian positive semi-definite matrix with its eigendecomposition cached.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "ComplexMatrix")]
pub struct PsdMatrix {
    mat: ComplexMatrix,
    #[serde(skip)]
    eig: EigenDecomposition,
}

impl From<PsdMatrix> for ComplexMatrix {
    fn from(p: PsdMatrix) -> ComplexMatrix {
        p.mat
    }
}

impl PsdMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let herm = HermitianMatrix::new(mat)?;
        let eig = herm.eig()?;
        let scale = eig.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        if eig.min() < -PSD_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotPsd { min_eig: eig.min() });
        }
        Ok(Self {
            mat: herm.into_matrix(),
            eig,
        })
    }

    /// Build from spectral data; eigenvalues must already be (numerically)
    /// nonnegative and ascending with `vectors` unitary.
    pub fn from_spectral(eigenvalues: Vec<f64>, eigenvectors: ComplexMatrix) -> Self {
        let eig = EigenDecomposition {
            eigenvalues,
            eigenvectors,
        };
        let mat = eig.reconstruct().symmetrize();
        Self { mat, eig }
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(entries))
    }

    pub fn identity(n: usize) -> Self {
        let eig = EigenDecomposition {
            eigenvalues: vec![1.0; n],
            eigenvectors: ComplexMatrix::identity(n),
        };
        Self {
            mat: ComplexMatrix::identity(n),
            eig,
        }
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn eig(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn min_eig(&self) -> f64 {
        self.eig.min()
    }

    pub fn max_eig(&self) -> f64 {
        self.eig.max()
    }

    /// Strict positivity as required wherever an inverse power is taken.
    pub fn is_strictly_positive(&self) -> bool {
        self.min_eig() > INVERSION_FLOOR * self.max_eig().max(f64::MIN_POSITIVE)
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }
}

impl<'de> Deserialize<'de> for PsdMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mat = ComplexMatrix::deserialize(d)?;
        PsdMatrix::new(mat).map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mat = ComplexMatrix::deserialize(d)?;
        HermitianMatrix::new(mat).map_err(serde::de::Error::custom)
    }
}
