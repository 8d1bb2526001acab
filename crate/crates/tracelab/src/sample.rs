//! Seeded random matrix ensembles used by certification and search runs.
//!
//! Every sampler takes an explicit RNG. Runs derive independent sub-streams
//! with `stream_rng`, so trials can execute in any order (or in parallel)
//! without changing results.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexMatrix, PsdMatrix};

/// RNG for sub-stream `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex normal via Box-Muller; avoids distribution-crate churn.
pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u1.ln()).sqrt();
    // Var(re) = Var(im) = 1/2 so that E|z|^2 = 1.
    Complex64::new(r * u2.cos(), r * u2.sin()).scale(0.5f64.sqrt())
}

/// Ginibre ensemble: independent standard complex Gaussian entries.
pub fn ginibre(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// Haar-like random unitary: QR-style orthonormalization of a Ginibre sample
/// with the phases fixed by the positive-diagonal convention.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, rng);
    let mut q = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut col = g.column(j);
        // Two Gram-Schmidt passes for orthogonality at working precision.
        for _ in 0..2 {
            for k in 0..j {
                let mut dot = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    dot += q[(i, k)].conj() * col[i];
                }
                for i in 0..n {
                    col[i] -= q[(i, k)] * dot;
                }
            }
        }
        let len = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // Phase fixing: rotate so the first sizable component is positive real.
        let pivot = col
            .iter()
            .find(|z| z.norm() > 1e-8 * len)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = pivot / pivot.norm();
        for z in col.iter_mut() {
            *z /= phase * len;
        }
        q.set_column(j, &col);
    }
    q
}

/// Random strictly positive matrix with condition number capped at `kappa`:
/// Haar eigenbasis, eigenvalues log-uniform in [1/sqrt(kappa), sqrt(kappa)].
pub fn conditioned_psd(n: usize, kappa: f64, rng: &mut impl Rng) -> PsdMatrix {
    assert!(kappa >= 1.0);
    let u = haar_unitary(n, rng);
    let half_log = 0.5 * kappa.ln();
    let mut evals: Vec<f64> = (0..n)
        .map(|_| (rng.gen_range(-1.0..1.0) * half_log).exp())
        .collect();
    evals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    PsdMatrix::from_spectral(evals, u)
}

/// Random invertible matrix with singular values clipped to condition `kappa`.
pub fn conditioned_invertible(n: usize, kappa: f64, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, rng);
    let s = crate::linalg::svd(&g).expect("svd of random sample");
    let smax = s.sigma_max().max(f64::MIN_POSITIVE);
    let floor = smax / kappa;
    let mut us = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let sig = s.sigma[j].max(floor);
        for i in 0..n {
            us[(i, j)] = s.u[(i, j)] * sig;
        }
    }
    &us * &s.v.conj_transpose()
}
