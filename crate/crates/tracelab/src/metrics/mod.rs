//! Superoperator calculus for monotone metrics: multiplication operators,
//! spectral kernels, trace Hessians, the Petz metric family, and the
//! quadratic form derived from Schatten norms (which fails to be a monotone
//! metric for p != 1).

mod measure;
mod quadrature;
mod scalar;
mod superop;

pub use measure::AtomicMeasure;
pub use quadrature::{gauss_legendre, power_integral};
pub use scalar::{deriv_diff_quotient, diff_quotient, ScalarFn};
pub use superop::{unvec_matrix, vec_matrix, SuperOperator};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{rel_scale, ComplexMatrix, HermitianMatrix, PsdMatrix};

/// `Q_F^{A,B}` as a dense superoperator.
pub fn q_f(
    a: &PsdMatrix,
    b: &PsdMatrix,
    kernel: impl Fn(f64, f64) -> f64,
) -> Result<SuperOperator> {
    SuperOperator::from_kernel(a, b, kernel)
}

/// `J_f^{A,B} = f(L_A R_B^{-1}) R_B`, i.e. the spectral kernel
/// `F(x, y) = f(x / y) * y`.
pub fn j_f(a: &PsdMatrix, b: &PsdMatrix, f: ScalarFn) -> Result<SuperOperator> {
    q_f(a, b, move |x, y| f.eval(x / y) * y)
}

/// The sesquilinear form `<X, Q_F^{A,B}(X)>` evaluated spectrally without
/// assembling the superoperator: `sum F(lam_j, mu_k) |(U* X V)_{jk}|^2`.
pub fn kernel_quadratic_form(
    a: &PsdMatrix,
    b: &PsdMatrix,
    kernel: impl Fn(f64, f64) -> f64,
    x: &ComplexMatrix,
) -> Result<f64> {
    let n = a.dim();
    if b.dim() != n || x.rows() != n || x.cols() != n {
        return Err(Error::DimMismatch(x.rows(), n));
    }
    let (la, ua) = (&a.eig().eigenvalues, &a.eig().eigenvectors);
    let (mb, ub) = (&b.eig().eigenvalues, &b.eig().eigenvectors);
    let xt = &(&ua.conj_transpose() * x) * ub;
    let mut total = 0.0;
    for j in 0..n {
        for k in 0..n {
            let f = kernel(la[j], mb[k]);
            if !f.is_finite() {
                return Err(Error::SingularPower {
                    min: la[j].min(mb[k]),
                    max: la[j].max(mb[k]),
                });
            }
            total += f * xt[(j, k)].norm_sqr();
        }
    }
    Ok(total)
}

/// Second derivative of `Tr f(D + sA)` at s = 0, computed through the kernel
/// `f'^[1]` on the spectrum of D.
pub fn hessian_trace(f: ScalarFn, d: &PsdMatrix, a: &HermitianMatrix) -> Result<f64> {
    if a.dim() != d.dim() {
        return Err(Error::DimMismatch(a.dim(), d.dim()));
    }
    kernel_quadratic_form(d, d, deriv_diff_quotient(f), a.as_matrix())
}

fn trace_f(f: ScalarFn, m: &ComplexMatrix) -> Result<f64> {
    let herm = HermitianMatrix::symmetrized(m)?;
    let eig = herm.eig()?;
    Ok(eig.eigenvalues.iter().map(|&l| f.eval(l)).sum())
}

/// Finite-difference oracle for [`hessian_trace`]: central second difference
/// with Richardson extrapolation from steps h and h/2. The direction is
/// normalized so the step size only has to respect the spectral floor of D.
pub fn hessian_trace_fd(f: ScalarFn, d: &PsdMatrix, a: &HermitianMatrix) -> Result<f64> {
    let a_norm = crate::linalg::operator_norm(a.as_matrix())?;
    if a_norm == 0.0 {
        return Ok(0.0);
    }
    let unit = a.as_matrix().scale_re(1.0 / a_norm);
    // Step relative to the spectral scale of D, capped so D + s*unit stays
    // strictly positive; roundoff in the second difference scales as 1/h^2,
    // so stepping relative to lambda_min alone is too small.
    let h = (1e-4 * d.max_eig()).min(0.25 * d.min_eig()).max(1e-10);
    let second = |step: f64| -> Result<f64> {
        let plus = trace_f(f, &(d.as_matrix() + &unit.scale_re(step)))?;
        let zero = trace_f(f, d.as_matrix())?;
        let minus = trace_f(f, &(d.as_matrix() - &unit.scale_re(step)))?;
        Ok((plus - 2.0 * zero + minus) / (step * step))
    };
    let coarse = second(h)?;
    let fine = second(h / 2.0)?;
    let richardson = (4.0 * fine - coarse) / 3.0;
    Ok(richardson * a_norm * a_norm)
}

/// The monotone-metric form `K^f_D(A, B) = <A, (f(L_D R_D^{-1}) R_D)^{-1} B>`
/// with `<X, Y> = Tr(X Y^*)`. D must be strictly positive with unit trace;
/// f must be positive on spectrum ratios.
pub fn petz_metric(
    f: ScalarFn,
    d: &PsdMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<Complex64> {
    let n = d.dim();
    if a.rows() != n || b.rows() != n || !a.is_square() || !b.is_square() {
        return Err(Error::DimMismatch(a.rows(), n));
    }
    if (d.trace() - 1.0).abs() > 1e-10 {
        return Err(Error::DomainViolation(format!(
            "D must have unit trace (got {})",
            d.trace()
        )));
    }
    let (ld, u) = (&d.eig().eigenvalues, &d.eig().eigenvectors);
    let at = &(&u.conj_transpose() * a) * u;
    let bt = &(&u.conj_transpose() * b) * u;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            let fval = f.eval(ld[j] / ld[k]) * ld[k];
            if fval <= 0.0 || !fval.is_finite() {
                return Err(Error::SingularPower {
                    min: ld[j].min(ld[k]),
                    max: ld[j].max(ld[k]),
                });
            }
            total += at[(j, k)] * bt[(j, k)].conj() / fval;
        }
    }
    Ok(total)
}

/// Commutative closed form of the norm-derived quadratic form on diagonal
/// inputs:
/// `K'_D(A,B) = 2(2-p) ||D||_p^{2-2p} Tr(D^{p-1}A) Tr(D^{p-1}B)
///            + 2(p-1) ||D||_p^{2-p} Tr(D^{p-2}AB)`.
pub fn kprime_commutative(d: &[f64], a: &[f64], b: &[f64], p: f64) -> Result<f64> {
    let n = d.len();
    if a.len() != n || b.len() != n {
        return Err(Error::DimMismatch(a.len(), n));
    }
    if d.iter().any(|&x| x <= 0.0) {
        return Err(Error::SingularPower {
            min: d.iter().cloned().fold(f64::INFINITY, f64::min),
            max: d.iter().cloned().fold(0.0, f64::max),
        });
    }
    let norm_p = d.iter().map(|&x| x.powf(p)).sum::<f64>().powf(1.0 / p);
    let dot = |expo: f64, v: &[f64]| -> f64 {
        d.iter()
            .zip(v)
            .map(|(&di, &vi)| di.powf(expo) * vi)
            .sum()
    };
    let cross: f64 = d
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&di, (&ai, &bi))| di.powf(p - 2.0) * ai * bi)
        .sum();
    Ok(2.0 * (2.0 - p) * norm_p.powf(2.0 - 2.0 * p) * dot(p - 1.0, a) * dot(p - 1.0, b)
        + 2.0 * (p - 1.0) * norm_p.powf(2.0 - p) * cross)
}

fn schatten_sq(m: &ComplexMatrix, p: f64) -> Result<f64> {
    let herm = HermitianMatrix::symmetrized(m)?;
    let eig = herm.eig()?;
    Ok(eig
        .eigenvalues
        .iter()
        .map(|&l| l.abs().powf(p))
        .sum::<f64>()
        .powf(2.0 / p))
}

/// Numerical mixed partial `d_s d_t ||D + sA + tB||_p^2` at zero, central
/// four-corner stencil with Richardson extrapolation.
pub fn kprime_numeric(
    d: &PsdMatrix,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    p: f64,
) -> Result<f64> {
    if p <= 1.0 - 1e-12 {
        return Err(Error::BadExponent(p));
    }
    let na = crate::linalg::operator_norm(a.as_matrix())?;
    let nb = crate::linalg::operator_norm(b.as_matrix())?;
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    let ua = a.as_matrix().scale_re(1.0 / na);
    let ub = b.as_matrix().scale_re(1.0 / nb);
    let h = (1e-4 * d.max_eig()).min(0.125 * d.min_eig()).max(1e-10);
    let corners = |step: f64| -> Result<f64> {
        let eval = |sa: f64, sb: f64| -> Result<f64> {
            let m = &(d.as_matrix() + &ua.scale_re(sa)) + &ub.scale_re(sb);
            schatten_sq(&m, p)
        };
        Ok(
            (eval(step, step)? - eval(step, -step)? - eval(-step, step)? + eval(-step, -step)?)
                / (4.0 * step * step),
        )
    };
    let coarse = corners(h)?;
    let fine = corners(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0 * na * nb)
}

/// Why the norm-derived quadratic form cannot be a monotone metric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormMetricMismatchReport {
    pub p: f64,
    /// `K'(D, D) = 2 ||D||_p^2` on two unit-trace diagonal densities; any
    /// monotone metric would have to make this constant.
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub kprime_d1: f64,
    pub kprime_d2: f64,
    pub difference: f64,
    pub kprime_d1_numeric: f64,
    pub kprime_d2_numeric: f64,
    /// For p = 1: the traceless direction on which the form degenerates,
    /// violating definiteness.
    pub degenerate_a: Option<Vec<f64>>,
    pub degenerate_value: Option<f64>,
}

/// Demonstrates the two failure modes of the norm-derived form: for p > 1
/// `K'(D, D) = 2 ||D||_p^2` is not constant over unit-trace densities, and
/// for p = 1 the form vanishes on nonzero traceless directions.
pub fn norm_metric_mismatch(p: f64) -> Result<NormMetricMismatchReport> {
    let d1 = vec![0.5, 0.5];
    let d2 = vec![0.75, 0.25];
    let k1 = kprime_commutative(&d1, &d1, &d1, p)?;
    let k2 = kprime_commutative(&d2, &d2, &d2, p)?;

    let numeric = |d: &[f64]| -> Result<f64> {
        let dm = PsdMatrix::diag(d)?;
        let am = HermitianMatrix::new(ComplexMatrix::diag(d))?;
        kprime_numeric(&dm, &am, &am, p)
    };
    let (k1_num, k2_num) = if p > 1.0 {
        (numeric(&d1)?, numeric(&d2)?)
    } else {
        (k1, k2)
    };

    let (degenerate_a, degenerate_value) = if (p - 1.0).abs() < 1e-12 {
        let a = vec![1.0, -1.0];
        let v = kprime_commutative(&d1, &a, &a, p)?;
        (Some(a), Some(v))
    } else {
        (None, None)
    };

    Ok(NormMetricMismatchReport {
        p,
        d1,
        d2,
        kprime_d1: k1,
        kprime_d2: k2,
        difference: (k1 - k2).abs(),
        kprime_d1_numeric: k1_num,
        kprime_d2_numeric: k2_num,
        degenerate_a,
        degenerate_value,
    })
}

/// Monotonicity of the inverse multiplication operator under a unital
/// channel: `lambda_min( (J_f^{A,B})^{-1} - phi^* (J_f^{phiA,phiB})^{-1} phi )`.
///
/// f must belong to the operator-monotone catalog. The symmetrization
/// residual is checked before the eigenvalue is trusted.
pub fn petz_monotonicity_check(
    f: ScalarFn,
    ch: &KrausChannel,
    a: &PsdMatrix,
    b: &PsdMatrix,
) -> Result<f64> {
    if !f.is_operator_monotone() {
        return Err(Error::BadFunction(format!(
            "{} is not in the operator-monotone catalog",
            f.id()
        )));
    }
    if !ch.is_unital() {
        return Err(Error::NonUnitalChannel(ch.unitality_residual()));
    }
    let inv_kernel = move |x: f64, y: f64| 1.0 / (f.eval(x / y) * y);
    let rhs = q_f(a, b, inv_kernel)?;
    let fa = PsdMatrix::new(ch.apply(a.as_matrix())?)?;
    let fb = PsdMatrix::new(ch.apply(b.as_matrix())?)?;
    let inner = q_f(&fa, &fb, inv_kernel)?;
    let phi = SuperOperator::from_channel(ch)?;
    let lhs = phi.adjoint().compose(&inner)?.compose(&phi)?;
    let diff = rhs.sub(&lhs)?;
    let (min_eig, residual) = diff.min_eig_symmetrized()?;
    if residual > 1e-10 * rel_scale(diff.op_norm()?) {
        return Err(Error::NotHermitian {
            residual,
            tol: 1e-10,
        });
    }
    Ok(min_eig)
}

/// Monotonicity of the kernel quadratic form built from an atomic measure:
/// `gap = <X, Q^{A,B}(X)> - <phi(X), Q^{phiA,phiB}(phi X)> >= 0`.
/// Returns `(gap, scale)` with scale = max(1, |two sides|).
pub fn kernel_monotonicity_gap(
    mu: &AtomicMeasure,
    ch: &KrausChannel,
    a: &PsdMatrix,
    b: &PsdMatrix,
    x: &ComplexMatrix,
) -> Result<(f64, f64)> {
    if !ch.is_unital() {
        return Err(Error::NonUnitalChannel(ch.unitality_residual()));
    }
    let kernel = mu.deriv_diff_quotient();
    let rhs = kernel_quadratic_form(a, b, &kernel, x)?;
    let fa = PsdMatrix::new(ch.apply(a.as_matrix())?)?;
    let fb = PsdMatrix::new(ch.apply(b.as_matrix())?)?;
    let fx = ch.apply(x)?;
    let lhs = kernel_quadratic_form(&fa, &fb, &kernel, &fx)?;
    Ok((rhs - lhs, rel_scale(rhs.abs().max(lhs.abs()))))
}

/// Max error of 32-node Gauss-Legendre for `integral_0^1 x^t dt` against the
/// logarithmic mean over the given grid.
pub fn log_mean_quadrature_error(grid: &[f64]) -> f64 {
    let h = ScalarFn::LogMean;
    grid.iter()
        .map(|&x| (power_integral(x) - h.eval(x)).abs())
        .fold(0.0, f64::max)
}

/// `|| Q_{1/F} Q_F - Id ||` as superoperator matrices.
pub fn q_inverse_identity(
    a: &PsdMatrix,
    b: &PsdMatrix,
    kernel: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let q = q_f(a, b, &kernel)?;
    let qinv = q_f(a, b, |x, y| 1.0 / kernel(x, y))?;
    let n2 = a.dim() * a.dim();
    let prod = qinv.compose(&q)?;
    let diff = prod.matrix() - &ComplexMatrix::identity(n2);
    crate::linalg::operator_norm(&diff)
}
