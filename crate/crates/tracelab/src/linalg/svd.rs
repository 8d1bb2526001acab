//! Singular value decomposition and polar decomposition for square complex
//! matrices, computed from the Hermitian eigendecomposition of X*X.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::types::{HermitianMatrix, PsdMatrix, INVERSION_FLOOR};

/// X = U diag(sigma) V*, singular values descending and nonnegative.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.sigma.len();
        let mut us = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                us[(i, j)] = self.u[(i, j)] * self.sigma[j];
            }
        }
        &us * &self.v.conj_transpose()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }

    /// |X| = V diag(sigma) V* as a PSD matrix.
    pub fn abs_matrix(&self) -> PsdMatrix {
        let mut ascending = self.sigma.clone();
        ascending.reverse();
        let n = ascending.len();
        let mut v = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            v.set_column(j, &self.v.column(n - 1 - j));
        }
        PsdMatrix::from_spectral(ascending, v)
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(v: &mut [Complex64], basis: &ComplexMatrix, upto: usize) {
    for k in 0..upto {
        let mut dot = Complex64::new(0.0, 0.0);
        for i in 0..v.len() {
            dot += basis[(i, k)].conj() * v[i];
        }
        for i in 0..v.len() {
            v[i] -= basis[(i, k)] * dot;
        }
    }
}

pub fn svd(x: &ComplexMatrix) -> Result<SvdResult> {
    let n = x.dim()?;
    let gram = HermitianMatrix::symmetrized(&(&x.conj_transpose() * x))?;
    let eig = gram.eig()?;

    // Descending singular order.
    let mut v = ComplexMatrix::zeros(n, n);
    let mut sigma = vec![0.0; n];
    for (j, sig) in sigma.iter_mut().enumerate() {
        let src = n - 1 - j;
        v.set_column(j, &eig.eigenvectors.column(src));
        *sig = eig.eigenvalues[src].max(0.0).sqrt();
    }
    let sigma_max = sigma[0];
    let cutoff = 1e-13 * sigma_max;

    let mut u = ComplexMatrix::zeros(n, n);
    let mut rank = 0;
    for j in 0..n {
        if sigma[j] > cutoff {
            let mut col = x.matvec(&v.column(j));
            // Re-orthogonalize against previous columns; clustered singular
            // values lose orthogonality through the Gram route.
            project_out(&mut col, &u, j);
            let len = norm(&col);
            if len > 0.0 {
                // ||X v_j|| is a more accurate singular value than sqrt(eig).
                sigma[j] = if j == 0 { len } else { len.min(sigma[j - 1]) };
                for z in col.iter_mut() {
                    *z /= len;
                }
                u.set_column(j, &col);
                rank = j + 1;
                continue;
            }
        }
        sigma[j] = sigma[j].min(if j == 0 { f64::INFINITY } else { sigma[j - 1] });
        break;
    }

    // Complete U to a unitary basis for the (numerically) null directions.
    let mut filled = rank;
    let mut candidate = 0usize;
    while filled < n {
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        col[candidate % n] = Complex64::new(1.0, 0.0);
        if candidate >= n {
            // Degenerate fallback: random-ish deterministic direction.
            for (i, z) in col.iter_mut().enumerate() {
                *z = Complex64::new(((candidate + i) as f64).sin(), ((candidate * 7 + i) as f64).cos());
            }
        }
        project_out(&mut col, &u, filled);
        let len = norm(&col);
        candidate += 1;
        if len > 1e-3 {
            for z in col.iter_mut() {
                *z /= len;
            }
            u.set_column(filled, &col);
            filled += 1;
        }
    }

    Ok(SvdResult { u, sigma, v })
}

/// Polar decomposition X = U |X| with U completed to a unitary on the
/// numerical null space.
pub fn polar(x: &ComplexMatrix) -> Result<(ComplexMatrix, PsdMatrix)> {
    let s = svd(x)?;
    let u = &s.u * &s.v.conj_transpose();
    Ok((u, s.abs_matrix()))
}

/// Inverse through the SVD; rejects numerically singular input.
pub fn inverse(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = svd(x)?;
    if s.sigma_min() <= INVERSION_FLOOR * s.sigma_max() {
        return Err(Error::SingularPower {
            min: s.sigma_min(),
            max: s.sigma_max(),
        });
    }
    let n = s.sigma.len();
    let mut vs = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            vs[(i, j)] = s.v[(i, j)] / s.sigma[j];
        }
    }
    Ok(&vs * &s.u.conj_transpose())
}

/// Relative eigenvalue/singular spread check used as the invertibility gate.
pub fn is_invertible(x: &ComplexMatrix) -> Result<bool> {
    let s = svd(x)?;
    Ok(s.sigma_min() > INVERSION_FLOOR * s.sigma_max())
}

/// Explicit regularization X + eps * ||X|| * 1, mirroring the approximation
/// argument for non-invertible inputs. Callers opt in; nothing in the crate
/// regularizes silently.
pub fn regularized(x: &ComplexMatrix, eps: Option<f64>) -> Result<ComplexMatrix> {
    let n = x.dim()?;
    let op_norm = svd(x)?.sigma_max();
    let eps = eps.unwrap_or(1e-8);
    let shift = eps * op_norm.max(f64::MIN_POSITIVE);
    Ok(x + &ComplexMatrix::identity(n).scale_re(shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_svd() {
        let s = svd(&ComplexMatrix::identity(4)).unwrap();
        assert!(s.sigma.iter().all(|&x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn diagonal_abs_values() {
        let s = svd(&ComplexMatrix::diag(&[-2.0, 3.0])).unwrap();
        assert!((s.sigma[0] - 3.0).abs() < 1e-12);
        assert!((s.sigma[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_squared_matches_gram_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = sample::ginibre(3, &mut rng);
        let s = svd(&x).unwrap();
        let gram = HermitianMatrix::symmetrized(&(&x.conj_transpose() * &x)).unwrap();
        let e = gram.eig().unwrap();
        for j in 0..3 {
            let lam = e.eigenvalues[2 - j].max(0.0);
            assert!((s.sigma[j] * s.sigma[j] - lam).abs() < 1e-10 * (1.0 + lam));
        }
        let scale = x.frobenius_norm();
        assert!(s.reconstruct().max_abs_diff(&x) < 1e-10 * scale);
    }

    #[test]
    fn polar_reconstructs_and_u_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = sample::ginibre(3, &mut rng);
        let (u, a) = polar(&x).unwrap();
        let n = 3;
        let gram = &u.conj_transpose() * &u;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
        let recon = &u * a.as_matrix();
        assert!(recon.max_abs_diff(&x) < 1e-10 * x.frobenius_norm());
    }

    #[test]
    fn polar_diagonal_signs() {
        let (u, a) = polar(&ComplexMatrix::diag(&[-1.0, 2.0])).unwrap();
        assert!((u[(0, 0)].re + 1.0).abs() < 1e-12);
        assert!((u[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!(a.as_matrix().max_abs_diff(&ComplexMatrix::diag(&[1.0, 2.0])) < 1e-12);
    }

    #[test]
    fn rank_deficient_polar_is_total() {
        let x = ComplexMatrix::diag(&[0.0, 2.0]);
        let (u, a) = polar(&x).unwrap();
        let gram = &u.conj_transpose() * &u;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
        assert!((&u * a.as_matrix()).max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn regularization_is_explicit_and_shifts_spectrum() {
        let x = ComplexMatrix::diag(&[0.0, 2.0]);
        let reg = regularized(&x, None).unwrap();
        // Default shift 1e-8 * ||X||; the zero singular value moves off zero.
        let s = svd(&reg).unwrap();
        assert!((s.sigma_min() - 2e-8).abs() < 1e-12);
        let reg = regularized(&x, Some(0.5)).unwrap();
        assert!(reg.max_abs_diff(&ComplexMatrix::diag(&[1.0, 3.0])) < 1e-12);
    }

    #[test]
    fn inverse_rejects_singular() {
        assert!(matches!(
            inverse(&ComplexMatrix::diag(&[1.0, 0.0])),
            Err(Error::SingularPower { .. })
        ));
        let x = ComplexMatrix::diag(&[2.0, 4.0]);
        let inv = inverse(&x).unwrap();
        assert!((&x * &inv).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }
}
