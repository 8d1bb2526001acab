//! Fractional matrix powers and Schatten quantities.

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::svd::svd;
use crate::linalg::types::PsdMatrix;

/// P^t through the cached spectral decomposition. Negative or non-integer
/// exponents require strict positivity.
pub fn matrix_power(p: &PsdMatrix, t: f64) -> Result<PsdMatrix> {
    if t == 0.0 {
        return Ok(PsdMatrix::identity(p.dim()));
    }
    if t == 1.0 {
        return Ok(p.clone());
    }
    let fractional = t < 0.0 || t.fract() != 0.0;
    if fractional && !p.is_strictly_positive() {
        return Err(Error::SingularPower {
            min: p.min_eig(),
            max: p.max_eig(),
        });
    }
    let eig = p.eig();
    let powered: Vec<f64> = if fractional {
        eig.eigenvalues.iter().map(|&l| l.powf(t)).collect()
    } else {
        eig.eigenvalues.iter().map(|&l| l.powi(t as i32)).collect()
    };
    // Keep the spectral cache consistent: ascending order.
    let mut pairs: Vec<(f64, usize)> = powered.iter().cloned().zip(0..p.dim()).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let n = p.dim();
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, (val, src)) in pairs.into_iter().enumerate() {
        values.push(val);
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(PsdMatrix::from_spectral(values, vectors))
}

/// Tr |X|^s = sum sigma_i^s, for s > 0.
pub fn abs_power_trace(x: &ComplexMatrix, s: f64) -> Result<f64> {
    if s <= 0.0 || s.is_nan() {
        return Err(Error::BadExponent(s));
    }
    let sv = svd(x)?;
    Ok(sv.sigma.iter().map(|&sig| sig.powf(s)).sum())
}

/// Schatten p-norm; p = infinity is the operator norm.
pub fn schatten_norm(x: &ComplexMatrix, p: f64) -> Result<f64> {
    if p == f64::INFINITY {
        return Ok(svd(x)?.sigma_max());
    }
    if p < 1.0 {
        return Err(Error::BadExponent(p));
    }
    Ok(abs_power_trace(x, p)?.powf(1.0 / p))
}

/// Operator norm, i.e. the largest singular value.
pub fn operator_norm(x: &ComplexMatrix) -> Result<f64> {
    schatten_norm(x, f64::INFINITY)
}

/// Smallest eigenvalue of the Hermitian part; the matrix must be Hermitian
/// within working tolerance (residual returned alongside).
pub fn min_eig_symmetrized(x: &ComplexMatrix) -> Result<(f64, f64)> {
    let residual = x.hermitian_residual();
    let herm = crate::linalg::types::HermitianMatrix::symmetrized(x)?;
    let eig = herm.eig()?;
    Ok((eig.min(), residual))
}

/// PSD check gate used by channel inequalities: lambda_min(H) with H = (X+X*)/2.
pub fn psd_order_min_eig(x: &ComplexMatrix) -> Result<f64> {
    Ok(min_eig_symmetrized(x)?.0)
}
