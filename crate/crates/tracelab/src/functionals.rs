//! The trace functionals under study, as pure functions of matrix inputs and
//! exponent parameters.
//!
//! Out-of-range parameters evaluate without complaint; admissibility for the
//! various convexity/monotonicity regimes is a queryable flag, because the
//! optimality and counterexample machinery must evaluate outside them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    abs_power_trace, matrix_power, ComplexMatrix, HermitianMatrix, PsdMatrix,
};

/// Parameters of the triple functional `Tr |B^{-p} K1 A K2 C^{-q}|^s`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleParams {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub k1: ComplexMatrix,
    pub k2: ComplexMatrix,
}

impl TripleParams {
    pub fn with_identity(p: f64, q: f64, s: f64, n: usize) -> Self {
        Self {
            p,
            q,
            s,
            k1: ComplexMatrix::identity(n),
            k2: ComplexMatrix::identity(n),
        }
    }

    /// Joint-convexity regime: 0 < p,q <= 1/2, p+q < 1, s >= 1/(1-p-q).
    /// Boundary comparisons carry a 1e-12 relative slack so that exact
    /// threshold parameters written in decimal stay admissible.
    pub fn convexity_admissible(&self) -> bool {
        self.p > 0.0
            && self.q > 0.0
            && self.p <= 0.5
            && self.q <= 0.5
            && self.p + self.q < 1.0
            && self.s >= 1.0 / (1.0 - self.p - self.q) * (1.0 - 1e-12)
    }

    /// Channel-monotonicity regime: p,q in (0,1/2], p+q <= 1/2, 2 <= s <= 1/(p+q).
    pub fn monotonicity_admissible(&self) -> bool {
        self.p > 0.0
            && self.q > 0.0
            && self.p <= 0.5
            && self.q <= 0.5
            && self.p + self.q <= 0.5 * (1.0 + 1e-12)
            && self.s >= 2.0 * (1.0 - 1e-12)
            && self.s <= 1.0 / (self.p + self.q) * (1.0 + 1e-12)
    }
}

/// Parameters of `Lambda_{alpha,beta,p}(P, X) = Tr |P^{alpha/p} X P^{beta/p}|^p`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LambdaParams {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
}

impl LambdaParams {
    /// Channel-monotonicity regime: alpha+beta = -1, alpha in [-1,0], p >= 2.
    pub fn admissible(&self) -> bool {
        (self.alpha + self.beta + 1.0).abs() < 1e-12
            && (-1.0..=0.0).contains(&self.alpha)
            && self.p >= 2.0
    }
}

/// `Tr |B^{-p} K1 A K2 C^{-q}|^s`. B and C must be strictly positive.
pub fn psi_pqs(
    a: &ComplexMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
    params: &TripleParams,
) -> Result<f64> {
    let bp = matrix_power(b, -params.p)?;
    let cq = matrix_power(c, -params.q)?;
    let prod = &(&(&(bp.as_matrix() * &params.k1) * a) * &params.k2) * cq.as_matrix();
    abs_power_trace(&prod, params.s)
}

/// `Tr |P^{alpha/p} X P^{beta/p}|^p`.
pub fn lambda_abp(p_mat: &PsdMatrix, x: &ComplexMatrix, params: &LambdaParams) -> Result<f64> {
    let left = matrix_power(p_mat, params.alpha / params.p)?;
    let right = matrix_power(p_mat, params.beta / params.p)?;
    let prod = &(left.as_matrix() * x) * right.as_matrix();
    abs_power_trace(&prod, params.p)
}

/// `Tr |K1 A^p K2|^s`; A must be strictly positive when p is negative or
/// fractional.
pub fn psi_ps(
    a: &PsdMatrix,
    k1: &ComplexMatrix,
    k2: &ComplexMatrix,
    p: f64,
    s: f64,
) -> Result<f64> {
    let ap = matrix_power(a, p)?;
    let prod = &(k1 * ap.as_matrix()) * k2;
    abs_power_trace(&prod, s)
}

/// `Tr (A^p B^{q2} A^p C^{r2})`, the trace form of `Tr |B^{q2/2} A^p C^{r2/2}|^2`.
///
/// The trace form is the canonical value; the Schatten form is available as a
/// cross-check through [`phi_triple_schatten`].
pub fn phi_triple(
    a: &PsdMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
    p: f64,
    q2: f64,
    r2: f64,
) -> Result<f64> {
    let ap = matrix_power(a, p)?;
    let bq = matrix_power(b, q2)?;
    let cr = matrix_power(c, r2)?;
    let prod = &(&(ap.as_matrix() * bq.as_matrix()) * ap.as_matrix()) * cr.as_matrix();
    let t = prod.trace();
    debug_assert!(t.im.abs() <= 1e-9 * t.re.abs().max(1.0));
    Ok(t.re)
}

/// `Tr |B^{q2/2} A^p C^{r2/2}|^2`, the Schatten route to the same value.
pub fn phi_triple_schatten(
    a: &PsdMatrix,
    b: &PsdMatrix,
    c: &PsdMatrix,
    p: f64,
    q2: f64,
    r2: f64,
) -> Result<f64> {
    let ap = matrix_power(a, p)?;
    let bq = matrix_power(b, q2 / 2.0)?;
    let cr = matrix_power(c, r2 / 2.0)?;
    let prod = &(bq.as_matrix() * ap.as_matrix()) * cr.as_matrix();
    abs_power_trace(&prod, 2.0)
}

/// `Tr (X* A X B)` for PSD weights A, B; real by cyclicity since
/// `X* A X` and `B` are both PSD.
pub fn matrix_quadratic_form(x: &ComplexMatrix, a: &PsdMatrix, b: &PsdMatrix) -> f64 {
    let t = (&(&(&x.conj_transpose() * a.as_matrix()) * x) * b.as_matrix()).trace();
    debug_assert!(t.im.abs() <= 1e-9 * t.re.abs().max(1.0));
    t.re
}

/// `Tr (B^{q/2} A^p B^{q/2})^s`, evaluated through the Gram form
/// `(A^{p/2} B^{q/2})^* (A^{p/2} B^{q/2})` so the inner matrix is PSD by
/// construction.
pub fn two_var(a: &PsdMatrix, b: &PsdMatrix, p: f64, q: f64, s: f64) -> Result<f64> {
    let ah = matrix_power(a, p / 2.0)?;
    let bh = matrix_power(b, q / 2.0)?;
    let g = ah.as_matrix() * bh.as_matrix();
    let gram = &g.conj_transpose() * &g;
    let herm = HermitianMatrix::symmetrized(&gram)?;
    let eig = herm.eig()?;
    let max = eig.max().max(f64::MIN_POSITIVE);
    if s < 0.0 && eig.min() <= crate::linalg::INVERSION_FLOOR * max {
        return Err(Error::SingularPower {
            min: eig.min(),
            max,
        });
    }
    Ok(eig
        .eigenvalues
        .iter()
        .map(|&l| if l <= 0.0 { 0.0 } else { l.powf(s) })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn psi_pqs_identity_case() {
        let n = 3;
        let params = TripleParams::with_identity(0.25, 0.25, 2.0, n);
        let a = ComplexMatrix::identity(n);
        let b = PsdMatrix::identity(n);
        let v = psi_pqs(&a, &b, &b, &params).unwrap();
        assert!((v - n as f64).abs() < 1e-12);
        assert!(params.convexity_admissible());
    }

    #[test]
    fn psi_pqs_diagonal_example() {
        // K1 = K2 = I, A = diag(1,2), B = diag(1,4), C = diag(1,9),
        // p = q = 1/4, s = 2 -> 1 + (4^{-1/4} * 2 * 9^{-1/4})^2 = 5/3.
        let params = TripleParams::with_identity(0.25, 0.25, 2.0, 2);
        let a = ComplexMatrix::diag(&[1.0, 2.0]);
        let b = PsdMatrix::diag(&[1.0, 4.0]).unwrap();
        let c = PsdMatrix::diag(&[1.0, 9.0]).unwrap();
        let v = psi_pqs(&a, &b, &c, &params).unwrap();
        assert!((v - 5.0 / 3.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn lambda_scalar_case() {
        // 1x1: P = 4, X = 3, alpha = beta = -1/2, p = 2 -> x^p / y = 9/4.
        let p = PsdMatrix::diag(&[4.0]).unwrap();
        let x = ComplexMatrix::diag(&[3.0]);
        let params = LambdaParams {
            alpha: -0.5,
            beta: -0.5,
            p: 2.0,
        };
        let v = lambda_abp(&p, &x, &params).unwrap();
        assert!((v - 2.25).abs() < 1e-12);
        assert!(params.admissible());
    }

    #[test]
    fn lambda_identity_base() {
        let mut rng = sample::stream_rng(1, 0);
        let x = sample::ginibre(3, &mut rng);
        let p = PsdMatrix::identity(3);
        let params = LambdaParams {
            alpha: -0.3,
            beta: -0.7,
            p: 3.0,
        };
        let v = lambda_abp(&p, &x, &params).unwrap();
        let direct = abs_power_trace(&x, 3.0).unwrap();
        assert!((v - direct).abs() < 1e-10 * direct.max(1.0));
    }

    #[test]
    fn lambda_hand_example() {
        // P = diag(1,4), X = all-ones, alpha = -1, beta = 0, p = 2
        // -> Tr(P^{-1} X X^*) = 2 * (1 + 1/4) = 5/2.
        let p = PsdMatrix::diag(&[1.0, 4.0]).unwrap();
        let x = ComplexMatrix::from_fn(2, 2, |_, _| num_complex::Complex64::new(1.0, 0.0));
        let params = LambdaParams {
            alpha: -1.0,
            beta: 0.0,
            p: 2.0,
        };
        let v = lambda_abp(&p, &x, &params).unwrap();
        assert!((v - 2.5).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn psi_ps_diagonal_and_congruence() {
        let a = PsdMatrix::diag(&[2.0, 3.0]).unwrap();
        let i = ComplexMatrix::identity(2);
        let v = psi_ps(&a, &i, &i, 0.5, 2.0).unwrap();
        assert!((v - 5.0).abs() < 1e-12); // sum a_i^{ps} = 2 + 3

        // K2 = K1^*, p = 1, s = 1 -> Tr(K1 A K1^*).
        let mut rng = sample::stream_rng(2, 0);
        let k1 = sample::ginibre(2, &mut rng);
        let v = psi_ps(&a, &k1, &k1.conj_transpose(), 1.0, 1.0).unwrap();
        let direct = (&(&k1 * a.as_matrix()) * &k1.conj_transpose()).trace().re;
        assert!((v - direct).abs() < 1e-10 * direct.max(1.0));
    }

    #[test]
    fn psi_ps_congruence_consistency() {
        // With K2 = K1^*, psi_ps equals Tr (K1 A^p K1^*)^s computed through
        // the eigenvalues of the PSD inner matrix.
        let mut rng = sample::stream_rng(5, 0);
        let a = sample::conditioned_psd(3, 50.0, &mut rng);
        let k1 = sample::ginibre(3, &mut rng);
        let (p, s) = (0.7, 1.6);
        let v = psi_ps(&a, &k1, &k1.conj_transpose(), p, s).unwrap();
        let inner = PsdMatrix::new(
            (&(&k1 * matrix_power(&a, p).unwrap().as_matrix()) * &k1.conj_transpose())
                .symmetrize(),
        )
        .unwrap();
        let via_eig: f64 = inner
            .eig()
            .eigenvalues
            .iter()
            .map(|&l| l.max(0.0).powf(s))
            .sum();
        assert!((v - via_eig).abs() < 1e-9 * v.max(1.0), "{v} vs {via_eig}");
    }

    #[test]
    fn psi_ps_rank_one_embedding_matches_scalar() {
        // K1 = sum |1><j|, K2 = sum r_j |j><1| embeds |sum u_j^p r_j|^s.
        use num_complex::Complex64;
        let n = 3;
        let u = [0.8, 1.4, 2.2];
        let r = [1.0, -1.0, 0.5];
        let (p, s) = (0.3, 3.0);
        let k1 = ComplexMatrix::from_fn(n, n, |i, _| {
            Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)
        });
        let k2 = ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if j == 0 { r[i] } else { 0.0 }, 0.0)
        });
        let a = PsdMatrix::diag(&u).unwrap();
        let v = psi_ps(&a, &k1, &k2, p, s).unwrap();
        let scalar: f64 = u
            .iter()
            .zip(&r)
            .map(|(&ui, &ri)| ui.powf(p) * ri)
            .sum::<f64>()
            .abs()
            .powf(s);
        assert!((v - scalar).abs() < 1e-10 * scalar.max(1.0), "{v} vs {scalar}");
    }

    #[test]
    fn phi_triple_examples() {
        let i2 = PsdMatrix::identity(2);
        assert!((phi_triple(&i2, &i2, &i2, 1.0, 1.0, 1.0).unwrap() - 2.0).abs() < 1e-12);

        // diag A=(1,2), B=(1,3), C=(1,5), p=1, 2q=1, 2r=1 -> 1 + 60 = 61.
        let a = PsdMatrix::diag(&[1.0, 2.0]).unwrap();
        let b = PsdMatrix::diag(&[1.0, 3.0]).unwrap();
        let c = PsdMatrix::diag(&[1.0, 5.0]).unwrap();
        let v = phi_triple(&a, &b, &c, 1.0, 1.0, 1.0).unwrap();
        assert!((v - 61.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn phi_triple_routes_agree() {
        let mut rng = sample::stream_rng(3, 0);
        for _ in 0..5 {
            let a = sample::conditioned_psd(3, 50.0, &mut rng);
            let b = sample::conditioned_psd(3, 50.0, &mut rng);
            let c = sample::conditioned_psd(3, 50.0, &mut rng);
            let t = phi_triple(&a, &b, &c, 0.7, 0.4, -0.3).unwrap();
            let s = phi_triple_schatten(&a, &b, &c, 0.7, 0.4, -0.3).unwrap();
            assert!((t - s).abs() < 1e-9 * t.abs().max(1.0), "{t} vs {s}");
        }
    }

    #[test]
    fn two_var_scalars() {
        let a = PsdMatrix::diag(&[2.0]).unwrap();
        let b = PsdMatrix::diag(&[3.0]).unwrap();
        let v = two_var(&a, &b, 0.7, -0.4, 1.3).unwrap();
        let expect = (2.0f64.powf(0.7) * 3.0f64.powf(-0.4)).powf(1.3);
        assert!((v - expect).abs() < 1e-12);
        let i3 = PsdMatrix::identity(3);
        assert!((two_var(&i3, &i3, 0.5, 0.5, 2.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_var_matches_psi_specialization() {
        // two_var(A, B, 2, 2a, g/2) = Tr (B^a A^2 B^a)^{g/2} = Tr |B^a A|^g,
        // which is psi_pqs(A, B, I) with (p, q, s) = (-a, anything, g).
        let mut rng = sample::stream_rng(8, 0);
        let a_psd = sample::conditioned_psd(3, 30.0, &mut rng);
        let b_psd = sample::conditioned_psd(3, 30.0, &mut rng);
        let (alpha, gamma) = (-0.4, 2.6);
        let lhs = two_var(&a_psd, &b_psd, 2.0, 2.0 * alpha, gamma / 2.0).unwrap();
        let params = TripleParams::with_identity(-alpha, 0.37, gamma, 3);
        let rhs = psi_pqs(
            a_psd.as_matrix(),
            &b_psd,
            &PsdMatrix::identity(3),
            &params,
        )
        .unwrap();
        assert!((lhs - rhs).abs() < 1e-9 * lhs.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn homogeneity_and_reduction_invariants() {
        let mut rng = sample::stream_rng(4, 0);
        let n = 3;
        let params = TripleParams::with_identity(0.25, 0.25, 2.0, n);
        let a = sample::ginibre(n, &mut rng);
        let b = sample::conditioned_psd(n, 100.0, &mut rng);
        let c = sample::conditioned_psd(n, 100.0, &mut rng);
        let base = psi_pqs(&a, &b, &c, &params).unwrap();

        // psi(tA, B, C) = t^s psi(A, B, C).
        let t = 1.7;
        let scaled = psi_pqs(&a.scale_re(t), &b, &c, &params).unwrap();
        assert!((scaled - t.powf(params.s) * base).abs() < 1e-9 * scaled.max(1.0));

        // Lambda(tP, tX) = t^{p-1} Lambda(P, X) when alpha + beta = -1.
        let lp = LambdaParams {
            alpha: -0.4,
            beta: -0.6,
            p: 2.5,
        };
        let pm = sample::conditioned_psd(n, 100.0, &mut rng);
        let x = sample::ginibre(n, &mut rng);
        let lam = lambda_abp(&pm, &x, &lp).unwrap();
        let t = 2.3;
        let pm_t = PsdMatrix::new(pm.as_matrix().scale_re(t)).unwrap();
        let lam_t = lambda_abp(&pm_t, &x.scale_re(t), &lp).unwrap();
        assert!(
            (lam_t - t.powf(lp.p - 1.0) * lam).abs() < 1e-9 * lam_t.max(1.0),
            "{lam_t} vs {}",
            t.powf(lp.p - 1.0) * lam
        );

        // psi_pqs specializes to lambda_abp: with K = I, B = C = P,
        // (p, q, s) = (-alpha/p_L, -beta/p_L, p_L) gives Lambda(P, X).
        let specialized = TripleParams::with_identity(-lp.alpha / lp.p, -lp.beta / lp.p, lp.p, n);
        let via_psi = psi_pqs(&x, &pm, &pm, &specialized).unwrap();
        assert!((via_psi - lam).abs() < 1e-9 * lam.max(1.0));
    }
}
