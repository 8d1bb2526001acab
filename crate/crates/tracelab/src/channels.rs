//! Quantum channels in Kraus form: unital CPTP families for monotonicity
//! tests, the block-swap channel, and the non-unital partial trace used to
//! show why unitality cannot be dropped.
//!
//! Complete positivity is structural (Kraus form); trace preservation and
//! unitality are checked numerically at construction. Tensor products use
//! system-first, ancilla-second column-major index fusion, so the doubling
//! embedding `X -> diag(X, X)` is literally `kron_fused(X, I_2)`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::sample;

/// Residual tolerance for trace preservation and unitality checks.
pub const CHANNEL_TOL: f64 = 1e-10;

/// A completely positive map given by Kraus operators (out_dim x in_dim).
#[derive(Debug, Clone, Serialize)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
    #[serde(skip)]
    unital: bool,
}

impl KrausChannel {
    /// Validate trace preservation (sum K*K = 1) and record unitality
    /// (sum K K* = 1).
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::BadWeights("no Kraus operators".into()))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        for k in &kraus {
            if k.rows() != out_dim || k.cols() != in_dim {
                return Err(Error::DimMismatch(k.rows(), out_dim));
            }
        }
        let mut tp = ComplexMatrix::zeros(in_dim, in_dim);
        let mut un = ComplexMatrix::zeros(out_dim, out_dim);
        for k in &kraus {
            tp = &tp + &(&k.conj_transpose() * k);
            un = &un + &(k * &k.conj_transpose());
        }
        let tp_residual = tp.max_abs_diff(&ComplexMatrix::identity(in_dim));
        if tp_residual > CHANNEL_TOL {
            return Err(Error::BadWeights(format!(
                "not trace preserving (residual {tp_residual:.3e})"
            )));
        }
        let unital = un.max_abs_diff(&ComplexMatrix::identity(out_dim)) <= CHANNEL_TOL;
        Ok(Self {
            in_dim,
            out_dim,
            kraus,
            unital,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// Residual of `sum K K* - 1`, for error reporting.
    pub fn unitality_residual(&self) -> f64 {
        let mut un = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            un = &un + &(k * &k.conj_transpose());
        }
        un.max_abs_diff(&ComplexMatrix::identity(self.out_dim))
    }

    /// Kraus action `sum K X K*`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.in_dim || x.cols() != self.in_dim {
            return Err(Error::DimMismatch(x.rows(), self.in_dim));
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out = &out + &(&(k * x) * &k.conj_transpose());
        }
        Ok(out)
    }

    /// Identity channel on dimension n.
    pub fn identity(n: usize) -> Self {
        Self {
            in_dim: n,
            out_dim: n,
            kraus: vec![ComplexMatrix::identity(n)],
            unital: true,
        }
    }

    /// Convex combination of unitary conjugations; unconditionally UCPTP.
    pub fn mixed_unitary(weights: &[f64], unitaries: &[ComplexMatrix]) -> Result<Self> {
        if weights.len() != unitaries.len() || weights.is_empty() {
            return Err(Error::BadWeights(format!(
                "{} weights vs {} unitaries",
                weights.len(),
                unitaries.len()
            )));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::BadWeights("negative weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadWeights(format!("weights sum to {total}")));
        }
        let n = unitaries[0].rows();
        for u in unitaries {
            let gram = &u.conj_transpose() * u;
            let residual = gram.max_abs_diff(&ComplexMatrix::identity(n));
            if residual > CHANNEL_TOL {
                return Err(Error::NotUnitary(residual));
            }
        }
        let kraus = weights
            .iter()
            .zip(unitaries)
            .map(|(&w, u)| u.scale_re(w.sqrt()))
            .collect();
        Self::new(kraus)
    }

    /// On dimension 2n: `X -> (X + S X S)/2` with S the swap of the two
    /// n-blocks. Unital and trace preserving.
    pub fn block_swap(n: usize) -> Self {
        let two_n = 2 * n;
        let mut s = ComplexMatrix::zeros(two_n, two_n);
        for i in 0..n {
            s[(i, n + i)] = Complex64::new(1.0, 0.0);
            s[(n + i, i)] = Complex64::new(1.0, 0.0);
        }
        let inv_sqrt2 = 0.5f64.sqrt();
        let kraus = vec![
            ComplexMatrix::identity(two_n).scale_re(inv_sqrt2),
            s.scale_re(inv_sqrt2),
        ];
        Self::new(kraus).expect("block swap is CPTP by construction")
    }

    /// Partial trace over the two-dimensional ancilla of a 2n-dimensional
    /// space: CPTP but NOT unital; `apply(diag(X, X)) = 2X`.
    pub fn partial_trace(n: usize) -> Self {
        let mut k0 = ComplexMatrix::zeros(n, 2 * n);
        let mut k1 = ComplexMatrix::zeros(n, 2 * n);
        for i in 0..n {
            k0[(i, i)] = Complex64::new(1.0, 0.0);
            k1[(i, n + i)] = Complex64::new(1.0, 0.0);
        }
        Self::new(vec![k0, k1]).expect("partial trace is CPTP by construction")
    }

    /// Pinching onto a partition of the basis indices: projector Kraus
    /// operators, output block-diagonal. Unital and trace preserving.
    pub fn pinching(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in blocks {
            for &i in block {
                if i >= n {
                    return Err(Error::BadPartition(format!("index {i} out of range")));
                }
                if seen[i] {
                    return Err(Error::BadPartition(format!("index {i} repeated")));
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::BadPartition("indices not covered".into()));
        }
        let kraus = blocks
            .iter()
            .map(|block| {
                let mut p = ComplexMatrix::zeros(n, n);
                for &i in block {
                    p[(i, i)] = Complex64::new(1.0, 0.0);
                }
                p
            })
            .collect();
        Self::new(kraus)
    }

    /// Composition `self after inner`.
    pub fn compose(&self, inner: &KrausChannel) -> Result<Self> {
        if inner.out_dim != self.in_dim {
            return Err(Error::DimMismatch(inner.out_dim, self.in_dim));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for k2 in &self.kraus {
            for k1 in &inner.kraus {
                kraus.push(k2 * k1);
            }
        }
        Self::new(kraus)
    }

    /// Tensor product with system-first, ancilla-second column-major fusion.
    pub fn tensor(sys: &KrausChannel, anc: &KrausChannel) -> Result<Self> {
        if sys.in_dim != sys.out_dim || anc.in_dim != anc.out_dim {
            return Err(Error::DimMismatch(sys.in_dim, sys.out_dim));
        }
        let mut kraus = Vec::with_capacity(sys.kraus.len() * anc.kraus.len());
        for ks in &sys.kraus {
            for ka in &anc.kraus {
                kraus.push(ComplexMatrix::kron_fused(ks, ka));
            }
        }
        Self::new(kraus)
    }
}

impl<'de> Deserialize<'de> for KrausChannel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            kraus: Vec<ComplexMatrix>,
        }
        let repr = Repr::deserialize(d)?;
        KrausChannel::new(repr.kraus).map_err(serde::de::Error::custom)
    }
}

/// Seeded Haar-like random unitary (see `sample::haar_unitary`).
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = sample::stream_rng(seed, 0);
    sample::haar_unitary(n, &mut rng)
}

/// Random mixed-unitary channel with `terms` unitaries and Dirichlet-uniform
/// weights.
pub fn random_mixed_unitary(n: usize, terms: usize, rng: &mut impl Rng) -> KrausChannel {
    let mut weights: Vec<f64> = (0..terms)
        .map(|_| -(rng.gen_range(f64::MIN_POSITIVE..1.0f64)).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    // Exact renormalization so the sum check cannot trip on rounding.
    let total: f64 = weights.iter().sum();
    weights[0] += 1.0 - total;
    let unitaries: Vec<ComplexMatrix> = (0..terms).map(|_| sample::haar_unitary(n, rng)).collect();
    KrausChannel::mixed_unitary(&weights, &unitaries).expect("mixed unitary is UCPTP")
}
