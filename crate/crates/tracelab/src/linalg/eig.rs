//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Unconditionally stable at the dimensions this crate targets (n <= 64).
//! Convergence is declared when the off-diagonal Frobenius mass drops below
//! `1e-14 * ||M||_F`; the sweep budget is `30 * n^2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::types::{EigenDecomposition, HermitianMatrix};

const OFF_DIAG_TOL: f64 = 1e-14;

fn off_diag_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues (ascending) and a unitary matrix of eigenvectors (columns).
pub fn hermitian_eig(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = m.as_matrix().dim()?;
    let scale = m.as_matrix().frobenius_norm();
    let mut a = m.as_matrix().symmetrize();
    let mut v = ComplexMatrix::identity(n);

    if n == 1 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![a[(0, 0)].re],
            eigenvectors: v,
        });
    }

    let tol = OFF_DIAG_TOL * scale;
    let max_sweeps = 30 * n * n;
    let mut sweeps = 0;
    while off_diag_mass(&a) > tol {
        if sweeps >= max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off: off_diag_mass(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a[(p, q)];
                let g = gamma.norm();
                if g <= OFF_DIAG_TOL * scale / (n as f64) {
                    continue;
                }
                // Phase that makes the pivot real, then a real rotation.
                let phase = gamma / g; // e^{i phi}
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * g);
                // Smaller-magnitude root of t^2 - 2*tau*t - 1 = 0, which
                // zeroes the rotated pivot for this choice of G.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Unitary G = I except G[p][p]=c, G[p][q]=-s*e^{i phi},
                // G[q][p]=s*e^{-i phi}, G[q][q]=c; apply A <- G^* A G, V <- V G.
                let s_e = phase.conj() * s; // s * e^{-i phi}
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * s_e;
                    a[(i, q)] = aiq * c - aip * s_e.conj();
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * s_e.conj();
                    a[(q, j)] = aqj * c - apj * s_e;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * s_e;
                    v[(i, q)] = viq * c - vip * s_e.conj();
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}
