//! Max- and min-form variational formulas for Schatten trace powers, the
//! underlying Hoelder+Young lower bound, and the closed-form matrices that
//! saturate it.
//!
//! For exponents with `1/r0 = 1/r1 + 1/r2 + 1/r3`:
//!
//! ```text
//! Tr |X^{-1} B Y^{-1}|^{r2}
//!   = max_{A,C} { (r2/r0) Tr|ABC|^{r0} - (r2/r1) Tr|AX|^{r1} - (r2/r3) Tr|YC|^{r3} }
//! Tr |L M R|^{r0}
//!   = min_{G,H} { (r0/r1) Tr|LG|^{r1} + (r0/r2) Tr|G^{-1} M H^{-1}|^{r2} + (r0/r3) Tr|HR|^{r3} }
//! ```
//!
//! Both extrema are attained by explicit polar-decomposition constructions,
//! checked numerically here together with probe dominance: no random
//! perturbation of the optimizer may beat the closed form beyond tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    abs_power_trace, inverse, matrix_power, polar, rel_scale, svd, ComplexMatrix, PsdMatrix,
    INVERSION_FLOOR,
};
use crate::sample;

/// Probe perturbation size for optimality checks.
const PROBE_DELTA: f64 = 1e-2;
/// Default number of probes per saturation check.
pub const DEFAULT_PROBES: usize = 100;

/// Exponent quadruple with `1/r0 = 1/r1 + 1/r2 + 1/r3` (within 1e-12).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentQuad {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl ExponentQuad {
    pub fn new(r0: f64, r1: f64, r2: f64, r3: f64) -> Result<Self> {
        if !(r0 > 0.0 && r1 > 0.0 && r2 > 0.0 && r3 > 0.0) {
            return Err(Error::BadQuad(f64::NAN));
        }
        let residual = (1.0 / r0 - (1.0 / r1 + 1.0 / r2 + 1.0 / r3)).abs();
        if residual > 1e-12 {
            return Err(Error::BadQuad(residual));
        }
        Ok(Self { r0, r1, r2, r3 })
    }

    /// The quadruple `(r, 1/p, s, 1/q)` with `1/r = p + q + 1/s` used by the
    /// triple joint-convexity argument.
    pub fn from_convexity_params(p: f64, q: f64, s: f64) -> Result<Self> {
        let r = 1.0 / (p + q + 1.0 / s);
        Self::new(r, 1.0 / p, s, 1.0 / q)
    }
}

/// Outcome of one saturation check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaturationReport {
    pub lhs: f64,
    pub rhs: f64,
    /// (lhs - rhs) / max(1, |lhs|).
    pub gap: f64,
    pub witness_a: ComplexMatrix,
    pub witness_c: ComplexMatrix,
    /// Worst signed excess of a probe over the optimum, relative to scale;
    /// for the max form positive means a probe beat the closed form.
    pub probe_excess: f64,
    pub probes: usize,
}

fn require_invertible(x: &ComplexMatrix) -> Result<()> {
    let s = svd(x)?;
    if s.sigma_min() <= INVERSION_FLOOR * s.sigma_max() {
        return Err(Error::SingularPower {
            min: s.sigma_min(),
            max: s.sigma_max(),
        });
    }
    Ok(())
}

/// Both sides of the Hoelder+Young bound
/// `Tr|X^{-1}BY^{-1}|^{r2} >= (r2/r0)Tr|ABC|^{r0} - (r2/r1)Tr|AX|^{r1} - (r2/r3)Tr|YC|^{r3}`.
pub fn holder_young_lower_bound(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    quad: &ExponentQuad,
) -> Result<(f64, f64)> {
    let xi = inverse(x)?;
    let yi = inverse(y)?;
    let lhs = abs_power_trace(&(&(&xi * b) * &yi), quad.r2)?;
    let rhs = rhs_at(a, b, c, x, y, quad)?;
    Ok((lhs, rhs))
}

fn rhs_at(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    quad: &ExponentQuad,
) -> Result<f64> {
    let abc = abs_power_trace(&(&(a * b) * c), quad.r0)?;
    let ax = abs_power_trace(&(a * x), quad.r1)?;
    let yc = abs_power_trace(&(y * c), quad.r3)?;
    Ok(quad.r2 / quad.r0 * abc - quad.r2 / quad.r1 * ax - quad.r2 / quad.r3 * yc)
}

/// The pair (A, C) that turns the bound into an equality:
/// with `W = X^{-1} B Y^{-1} = U |W|`,
/// `A = |W|^{r2/r1} U^* X^{-1}` and `C = Y^{-1} |W|^{r2/r3}`.
///
/// W must be invertible; the construction divides by powers of |W|.
pub fn saturating_pair(
    x: &ComplexMatrix,
    b_mid: &ComplexMatrix,
    y: &ComplexMatrix,
    quad: &ExponentQuad,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let xi = inverse(x)?;
    let yi = inverse(y)?;
    let w = &(&xi * b_mid) * &yi;
    require_invertible(&w)?;
    let (u, absw) = polar(&w)?;
    let a = &(matrix_power(&absw, quad.r2 / quad.r1)?.as_matrix() * &u.conj_transpose()) * &xi;
    let c = &yi * matrix_power(&absw, quad.r2 / quad.r3)?.as_matrix();
    Ok((a, c))
}

/// Saturation check for the max form `Tr|X^{-1}BY^{-1}|^{r2}`.
///
/// The closed-form (A, C) must reach the left-hand side within 1e-8
/// relative, and multiplicatively perturbed probes must never exceed it.
pub fn variational_max_check(
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    quad: &ExponentQuad,
    probes: usize,
    seed: u64,
) -> Result<SaturationReport> {
    require_invertible(b)?;
    let xi = inverse(x)?;
    let yi = inverse(y)?;
    let lhs = abs_power_trace(&(&(&xi * b) * &yi), quad.r2)?;
    let (a_opt, c_opt) = saturating_pair(x, b, y, quad)?;
    let rhs = rhs_at(&a_opt, b, &c_opt, x, y, quad)?;
    let scale = rel_scale(lhs);

    let mut rng = sample::stream_rng(seed, 0);
    let n = b.dim()?;
    let mut excess = f64::NEG_INFINITY;
    for _ in 0..probes {
        let ga = sample::ginibre(n, &mut rng).scale_re(PROBE_DELTA);
        let gc = sample::ginibre(n, &mut rng).scale_re(PROBE_DELTA);
        let a_probe = &a_opt * &(&ComplexMatrix::identity(n) + &ga);
        let c_probe = &c_opt * &(&ComplexMatrix::identity(n) + &gc);
        let probe = rhs_at(&a_probe, b, &c_probe, x, y, quad)?;
        excess = excess.max((probe - lhs) / scale);
    }

    Ok(SaturationReport {
        lhs,
        rhs,
        gap: (lhs - rhs) / scale,
        witness_a: a_opt,
        witness_c: c_opt,
        probe_excess: if probes == 0 { f64::NEG_INFINITY } else { excess },
        probes,
    })
}

/// Objective of the min form at a given (G, H).
fn min_objective(
    left: &ComplexMatrix,
    mid: &ComplexMatrix,
    right: &ComplexMatrix,
    g: &ComplexMatrix,
    h: &ComplexMatrix,
    quad: &ExponentQuad,
) -> Result<f64> {
    let gi = inverse(g)?;
    let hi = inverse(h)?;
    let t1 = abs_power_trace(&(left * g), quad.r1)?;
    let t2 = abs_power_trace(&(&(&gi * mid) * &hi), quad.r2)?;
    let t3 = abs_power_trace(&(h * right), quad.r3)?;
    Ok(quad.r0 / quad.r1 * t1 + quad.r0 / quad.r2 * t2 + quad.r0 / quad.r3 * t3)
}

/// Saturation check for the min form `Tr|L M R|^{r0}`.
///
/// The optimal pair is obtained by inverting the saturating map: with
/// `P = L M R = U |P|`, `G = L^{-1} U |P|^{r0/r1} U^*` and
/// `H = |P|^{r0/r3} R^{-1}`. Probes must never fall below the left-hand side.
pub fn variational_min_check(
    left: &ComplexMatrix,
    mid: &ComplexMatrix,
    right: &ComplexMatrix,
    quad: &ExponentQuad,
    probes: usize,
    seed: u64,
) -> Result<SaturationReport> {
    let prod = &(left * mid) * right;
    require_invertible(&prod)?;
    let lhs = abs_power_trace(&prod, quad.r0)?;
    let (u, absp) = polar(&prod)?;
    let li = inverse(left)?;
    let ri = inverse(right)?;
    let g_opt = &(&(&li * &u) * matrix_power(&absp, quad.r0 / quad.r1)?.as_matrix())
        * &u.conj_transpose();
    let h_opt = matrix_power(&absp, quad.r0 / quad.r3)?.as_matrix() * &ri;
    let rhs = min_objective(left, mid, right, &g_opt, &h_opt, quad)?;
    let scale = rel_scale(lhs);

    let mut rng = sample::stream_rng(seed, 0);
    let n = prod.dim()?;
    let mut deficit = f64::NEG_INFINITY;
    for _ in 0..probes {
        let gg = sample::ginibre(n, &mut rng).scale_re(PROBE_DELTA);
        let gh = sample::ginibre(n, &mut rng).scale_re(PROBE_DELTA);
        let g_probe = &g_opt * &(&ComplexMatrix::identity(n) + &gg);
        let h_probe = &h_opt * &(&ComplexMatrix::identity(n) + &gh);
        let probe = min_objective(left, mid, right, &g_probe, &h_probe, quad)?;
        // Positive means a probe fell below the claimed minimum.
        deficit = deficit.max((lhs - probe) / scale);
    }

    Ok(SaturationReport {
        lhs,
        rhs,
        gap: (lhs - rhs) / scale,
        witness_a: g_opt,
        witness_c: h_opt,
        probe_excess: if probes == 0 { f64::NEG_INFINITY } else { deficit },
        probes,
    })
}

/// PSD-only convenience used by tests: |W| powers of a PSD mid with X = Y = I
/// make the saturating pair itself PSD powers.
pub fn identity_frame_pair(b_mid: &PsdMatrix, quad: &ExponentQuad) -> Result<(PsdMatrix, PsdMatrix)> {
    let a = matrix_power(b_mid, quad.r2 / quad.r1)?;
    let c = matrix_power(b_mid, quad.r2 / quad.r3)?;
    Ok((a, c))
}
