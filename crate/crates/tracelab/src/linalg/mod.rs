//! Self-contained dense complex linear algebra: Hermitian eigendecomposition,
//! SVD, polar decomposition, fractional powers and Schatten quantities.

mod eig;
mod matrix;
mod schatten;
mod svd;
mod types;

pub use eig::hermitian_eig;
pub use matrix::ComplexMatrix;
pub use schatten::{
    abs_power_trace, matrix_power, min_eig_symmetrized, operator_norm, psd_order_min_eig,
    schatten_norm,
};
pub use svd::{inverse, is_invertible, polar, regularized, svd, SvdResult};
pub use types::{
    EigenDecomposition, HermitianMatrix, PsdMatrix, HERMITIAN_TOL, INVERSION_FLOOR, PSD_TOL,
};

/// Relative scale for tolerance comparisons: max(1, |x|).
#[inline]
pub fn rel_scale(x: f64) -> f64 {
    x.abs().max(1.0)
}
