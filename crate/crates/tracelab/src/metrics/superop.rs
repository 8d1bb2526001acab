//! Superoperators as dense n^2 x n^2 matrices acting on column-stacked
//! vectorizations of n x n matrices.
//!
//! Spectral-kernel operators are assembled directly from eigendecompositions
//! (the `Q_F` definition) instead of Kronecker identities, which sidesteps
//! transpose-convention bugs; channel superoperators are assembled from the
//! action on matrix units.

use num_complex::Complex64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, svd, ComplexMatrix, HermitianMatrix, PsdMatrix,
};

/// Column-stacking: vec(X)[i + n*j] = X[i, j].
pub fn vec_matrix(x: &ComplexMatrix) -> Vec<Complex64> {
    let n = x.rows();
    let mut v = vec![Complex64::new(0.0, 0.0); n * x.cols()];
    for j in 0..x.cols() {
        for i in 0..n {
            v[i + n * j] = x[(i, j)];
        }
    }
    v
}

pub fn unvec_matrix(v: &[Complex64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| v[i + n * j])
}

/// Dense superoperator on n x n matrices.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    dim: usize,
    mat: ComplexMatrix,
}

impl SuperOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            dim: n,
            mat: ComplexMatrix::identity(n * n),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Spectral assembly of `Q_F^{A,B}(X) = sum F(lam_j, mu_k) E_j X E_k`.
    ///
    /// In the orthonormal basis of matrix units `u_j v_k^*` the operator is
    /// diagonal with entries `F(lam_j, mu_k)`, so it is assembled as a sum of
    /// rank-one projectors weighted by the kernel.
    pub fn from_kernel(
        a: &PsdMatrix,
        b: &PsdMatrix,
        kernel: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let n = a.dim();
        if b.dim() != n {
            return Err(Error::DimMismatch(n, b.dim()));
        }
        let (la, ua) = (&a.eig().eigenvalues, &a.eig().eigenvectors);
        let (mb, ub) = (&b.eig().eigenvalues, &b.eig().eigenvectors);
        let mut mat = ComplexMatrix::zeros(n * n, n * n);
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for k in 0..n {
                let f = kernel(la[j], mb[k]);
                if !f.is_finite() {
                    return Err(Error::SingularPower {
                        min: la[j].min(mb[k]),
                        max: la[j].max(mb[k]),
                    });
                }
                // g = vec(u_j v_k^*).
                for col in 0..n {
                    let vkc = ub[(col, k)].conj();
                    for row in 0..n {
                        g[row + n * col] = ua[(row, j)] * vkc;
                    }
                }
                for r in 0..n * n {
                    let gf = g[r] * f;
                    for c in 0..n * n {
                        mat[(r, c)] += gf * g[c].conj();
                    }
                }
            }
        }
        Ok(Self { dim: n, mat })
    }

    /// Matrix of a square channel, one column per matrix unit.
    pub fn from_channel(ch: &KrausChannel) -> Result<Self> {
        if ch.in_dim() != ch.out_dim() {
            return Err(Error::DimMismatch(ch.in_dim(), ch.out_dim()));
        }
        let n = ch.in_dim();
        let mut mat = ComplexMatrix::zeros(n * n, n * n);
        for c in 0..n {
            for d in 0..n {
                let mut unit = ComplexMatrix::zeros(n, n);
                unit[(c, d)] = Complex64::new(1.0, 0.0);
                let image = ch.apply(&unit)?;
                let col = vec_matrix(&image);
                for r in 0..n * n {
                    mat[(r, c + n * d)] = col[r];
                }
            }
        }
        Ok(Self { dim: n, mat })
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimMismatch(x.rows(), self.dim));
        }
        let v = self.mat.matvec(&vec_matrix(x));
        Ok(unvec_matrix(&v, self.dim))
    }

    /// Hilbert-Schmidt adjoint.
    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            mat: self.mat.conj_transpose(),
        }
    }

    pub fn compose(&self, other: &SuperOperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(Self {
            dim: self.dim,
            mat: &self.mat * &other.mat,
        })
    }

    pub fn sub(&self, other: &SuperOperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(Self {
            dim: self.dim,
            mat: &self.mat - &other.mat,
        })
    }

    /// Largest singular value of the superoperator matrix.
    pub fn op_norm(&self) -> Result<f64> {
        Ok(svd(&self.mat)?.sigma_max())
    }

    pub fn self_adjoint_residual(&self) -> f64 {
        self.mat.hermitian_residual()
    }

    /// Minimum eigenvalue of the Hermitian symmetrization. The symmetrization
    /// residual must itself be negligible before the eigenvalue is trusted;
    /// both are returned.
    pub fn min_eig_symmetrized(&self) -> Result<(f64, f64)> {
        let residual = self.self_adjoint_residual();
        let herm = HermitianMatrix::symmetrized(&self.mat)?;
        let eig = hermitian_eig(&herm)?;
        Ok((eig.min(), residual))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn constant_kernel_is_identity() {
        let mut rng = sample::stream_rng(1, 0);
        let a = sample::conditioned_psd(3, 10.0, &mut rng);
        let b = sample::conditioned_psd(3, 10.0, &mut rng);
        let q = SuperOperator::from_kernel(&a, &b, |_, _| 1.0).unwrap();
        assert!(q.matrix().max_abs_diff(&ComplexMatrix::identity(9)) < 1e-10);
    }

    #[test]
    fn left_variable_kernel_is_left_multiplication() {
        let mut rng = sample::stream_rng(2, 0);
        let a = PsdMatrix::diag(&[2.0, 3.0]).unwrap();
        let b = sample::conditioned_psd(2, 10.0, &mut rng);
        let q = SuperOperator::from_kernel(&a, &b, |x, _| x).unwrap();
        let x = sample::ginibre(2, &mut rng);
        let out = q.apply(&x).unwrap();
        let expect = a.as_matrix() * &x;
        assert!(out.max_abs_diff(&expect) < 1e-10);
    }

    #[test]
    fn channel_matrix_matches_action() {
        let mut rng = sample::stream_rng(3, 0);
        let ch = crate::channels::random_mixed_unitary(3, 3, &mut rng);
        let sop = SuperOperator::from_channel(&ch).unwrap();
        let x = sample::ginibre(3, &mut rng);
        let via_matrix = sop.apply(&x).unwrap();
        let direct = ch.apply(&x).unwrap();
        assert!(via_matrix.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn adjoint_matches_kraus_adjoint() {
        // The HS adjoint of sum K . K* is sum K* . K.
        let mut rng = sample::stream_rng(4, 0);
        let ch = crate::channels::random_mixed_unitary(2, 2, &mut rng);
        let sop = SuperOperator::from_channel(&ch).unwrap().adjoint();
        let x = sample::ginibre(2, &mut rng);
        let via_matrix = sop.apply(&x).unwrap();
        let mut direct = ComplexMatrix::zeros(2, 2);
        for k in ch.kraus() {
            direct = &direct + &(&(&k.conj_transpose() * &x) * k);
        }
        assert!(via_matrix.max_abs_diff(&direct) < 1e-12);
    }
}
