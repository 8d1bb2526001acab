//! Derivative-free counterexample search for the non-concavity and
//! non-convexity statements, and the scripted violation constructions that
//! lift scalar Hessian failures to matrix channels.
//!
//! All searches work on flat real parameter vectors: general complex matrices
//! contribute 2n^2 reals, strictly positive matrices are parameterized as
//! `G* G + 1e-6 * 1` with G a general complex matrix. A reported witness is
//! re-verified with compensated summation; witnesses whose recomputed margin
//! falls below threshold are never reported as violations.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certify::nelder_mead::minimize;
use crate::certify::{Kahan, WitnessData, TOL_CERT};
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::functionals::{lambda_abp, phi_triple, psi_ps, LambdaParams};
use crate::linalg::{matrix_power, rel_scale, svd, ComplexMatrix, PsdMatrix};
use crate::sample;

/// PSD parameterization floor: A = G*G + PSD_FLOOR * 1.
const PSD_FLOOR: f64 = 1e-6;
/// Early-exit target for relative violation margins; comfortably above the
/// acceptance threshold so search time stays short.
const MARGIN_TARGET: f64 = 1e-3;
/// Iteration multiplier per restart: 200 * dim.
const ITERS_PER_DIM: usize = 200;

/// A verified counterexample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchWitness {
    pub claim: String,
    pub dim: usize,
    pub seed: u64,
    pub evaluations: u64,
    /// Relative violation margin (positive).
    pub margin: f64,
    /// The same margin recomputed with compensated summation.
    pub margin_compensated: f64,
    pub data: WitnessData,
}

fn decode_complex(x: &[f64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        let k = 2 * (i * n + j);
        Complex64::new(x[k], x[k + 1])
    })
}

fn encode_complex(m: &ComplexMatrix, out: &mut Vec<f64>) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
}

fn decode_psd(x: &[f64], n: usize) -> Result<PsdMatrix> {
    let g = decode_complex(x, n);
    let gram = &g.conj_transpose() * &g;
    let floored = &gram + &ComplexMatrix::identity(n).scale_re(PSD_FLOOR);
    PsdMatrix::new(floored)
}

/// Kahan-summed `Tr |K1 A^p K2|^s` terms pushed into an accumulator with the
/// given coefficient.
fn accumulate_psi_terms(
    acc: &mut Kahan,
    coeff: f64,
    a: &PsdMatrix,
    k1: &ComplexMatrix,
    k2: &ComplexMatrix,
    p: f64,
    s: f64,
) -> Result<()> {
    let ap = matrix_power(a, p)?;
    let prod = &(k1 * ap.as_matrix()) * k2;
    let sv = svd(&prod)?;
    for &sig in &sv.sigma {
        acc.add(coeff * sig.powf(s));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Non-concavity / non-convexity of A -> Tr |K1 A^p K2|^s
// ---------------------------------------------------------------------------

struct PsiInstance {
    k1: ComplexMatrix,
    k2: ComplexMatrix,
    a1: PsdMatrix,
    a2: PsdMatrix,
}

fn decode_psi_instance(x: &[f64], n: usize, congruent: bool) -> Result<PsiInstance> {
    let block = 2 * n * n;
    if congruent {
        // K2 = K1^*: the congruence form Tr (K1 A^p K1^*)^s.
        let k1 = decode_complex(&x[0..block], n);
        let k2 = k1.conj_transpose();
        Ok(PsiInstance {
            k1,
            k2,
            a1: decode_psd(&x[block..2 * block], n)?,
            a2: decode_psd(&x[2 * block..3 * block], n)?,
        })
    } else {
        Ok(PsiInstance {
            k1: decode_complex(&x[0..block], n),
            k2: decode_complex(&x[block..2 * block], n),
            a1: decode_psd(&x[2 * block..3 * block], n)?,
            a2: decode_psd(&x[3 * block..4 * block], n)?,
        })
    }
}

/// Relative midpoint gap `(psi(mid) - (psi(a1)+psi(a2))/2) / scale`.
/// Negative values violate concavity, positive values violate convexity.
fn psi_midpoint_gap(inst: &PsiInstance, p: f64, s: f64) -> Result<(f64, f64)> {
    let f1 = psi_ps(&inst.a1, &inst.k1, &inst.k2, p, s)?;
    let f2 = psi_ps(&inst.a2, &inst.k1, &inst.k2, p, s)?;
    let mid = PsdMatrix::new(
        &inst.a1.as_matrix().scale_re(0.5) + &inst.a2.as_matrix().scale_re(0.5),
    )?;
    let fm = psi_ps(&mid, &inst.k1, &inst.k2, p, s)?;
    let scale = rel_scale(f1.abs().max(f2.abs()).max(fm.abs()));
    Ok((fm - 0.5 * (f1 + f2), scale))
}

fn psi_margin_compensated(inst: &PsiInstance, p: f64, s: f64, sign: f64) -> Result<f64> {
    let mid = PsdMatrix::new(
        &inst.a1.as_matrix().scale_re(0.5) + &inst.a2.as_matrix().scale_re(0.5),
    )?;
    let mut acc = Kahan::default();
    // sign = +1 measures concavity violation (avg - mid), -1 convexity.
    accumulate_psi_terms(&mut acc, 0.5 * sign, &inst.a1, &inst.k1, &inst.k2, p, s)?;
    accumulate_psi_terms(&mut acc, 0.5 * sign, &inst.a2, &inst.k1, &inst.k2, p, s)?;
    accumulate_psi_terms(&mut acc, -sign, &mid, &inst.k1, &inst.k2, p, s)?;

    // Recompute the scale the plain way; it only normalizes.
    let f1 = psi_ps(&inst.a1, &inst.k1, &inst.k2, p, s)?;
    let f2 = psi_ps(&inst.a2, &inst.k1, &inst.k2, p, s)?;
    let fm = psi_ps(&mid, &inst.k1, &inst.k2, p, s)?;
    Ok(acc.value() / rel_scale(f1.abs().max(f2.abs()).max(fm.abs())))
}

/// Structured start: K1 = sum |1><j|, K2 = sum r_j |j><1| with alternating
/// signs, diagonal A's probed on a coarse grid. This embeds the scalar
/// family |sum u_j^p r_j|^s, where concavity failures are dense.
fn rademacher_start(n: usize, p: f64, s: f64, want_concavity_violation: bool) -> Vec<f64> {
    let k1 = ComplexMatrix::from_fn(n, n, |i, _| {
        Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)
    });
    let k2 = ComplexMatrix::from_fn(n, n, |i, j| {
        let r = if i % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(if j == 0 { r } else { 0.0 }, 0.0)
    });

    // Coarse diagonal probe for the better of the two signs.
    let grid = [0.2, 0.5, 1.0, 1.8, 3.0];
    let mut best_pair = (vec![1.0; n], vec![2.0; n]);
    let mut best = f64::NEG_INFINITY;
    let scalar_psi = |u: &[f64]| -> f64 {
        let total: f64 = u
            .iter()
            .enumerate()
            .map(|(j, &uj)| uj.powf(p) * if j % 2 == 0 { 1.0 } else { -1.0 })
            .sum();
        total.abs().powf(s)
    };
    for &u0 in &grid {
        for &u1 in &grid {
            for &v0 in &grid {
                for &v1 in &grid {
                    let mut u = vec![1.0; n];
                    let mut v = vec![1.0; n];
                    u[0] = u0;
                    v[0] = v0;
                    if n > 1 {
                        u[1] = u1;
                        v[1] = v1;
                    }
                    let mids: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 0.5 * (a + b)).collect();
                    let gap = scalar_psi(&mids) - 0.5 * (scalar_psi(&u) + scalar_psi(&v));
                    let score = if want_concavity_violation { -gap } else { gap };
                    if score > best {
                        best = score;
                        best_pair = (u, v);
                    }
                }
            }
        }
    }

    let diag_sqrt = |d: &[f64]| {
        ComplexMatrix::diag(&d.iter().map(|&x| (x - PSD_FLOOR).max(0.0).sqrt()).collect::<Vec<_>>())
    };
    let mut x0 = Vec::with_capacity(8 * n * n);
    encode_complex(&k1, &mut x0);
    encode_complex(&k2, &mut x0);
    encode_complex(&diag_sqrt(&best_pair.0), &mut x0);
    encode_complex(&diag_sqrt(&best_pair.1), &mut x0);
    x0
}

fn run_psi_search(
    claim: &str,
    p: f64,
    s: f64,
    dims: &[usize],
    budget: u64,
    seed: u64,
    want_concavity_violation: bool,
    congruent: bool,
) -> Result<SearchWitness> {
    let sign = if want_concavity_violation { 1.0 } else { -1.0 };
    let mut used: u64 = 0;
    let mut best_margin = f64::NEG_INFINITY;

    let mut restart: u64 = 0;
    while used < budget {
        let n = dims[(restart as usize) % dims.len()];
        let dim = if congruent { 6 * n * n } else { 8 * n * n };
        let mut rng = sample::stream_rng(seed, restart);

        let x0 = if restart == 0 && !congruent {
            rademacher_start(n, p, s, want_concavity_violation)
        } else {
            (0..dim).map(|_| 0.8 * rng.gen_range(-1.0..1.0)).collect()
        };

        // Minimize sign * gap / scale: negative values are violations.
        let mut obj = |x: &[f64]| -> f64 {
            match decode_psi_instance(x, n, congruent)
                .and_then(|inst| psi_midpoint_gap(&inst, p, s))
            {
                Ok((gap, scale)) => sign * gap / scale,
                Err(_) => f64::INFINITY,
            }
        };
        let result = minimize(
            &mut obj,
            &x0,
            0.3,
            ITERS_PER_DIM * dim,
            budget - used,
            Some(-MARGIN_TARGET),
        );
        used += result.evaluations;
        let margin = -result.fmin;
        best_margin = best_margin.max(margin);

        if margin > TOL_CERT {
            let inst = decode_psi_instance(&result.x, n, congruent)?;
            let compensated = psi_margin_compensated(&inst, p, s, sign)?;
            if compensated > TOL_CERT {
                let mut data = WitnessData::default();
                data.push_matrix("k1", &inst.k1);
                data.push_matrix("k2", &inst.k2);
                data.push_matrix("a1", inst.a1.as_matrix());
                data.push_matrix("a2", inst.a2.as_matrix());
                data.push_scalar("p", p);
                data.push_scalar("s", s);
                return Ok(SearchWitness {
                    claim: claim.to_string(),
                    dim: n,
                    seed,
                    evaluations: used,
                    margin,
                    margin_compensated: compensated,
                    data,
                });
            }
        }
        restart += 1;
    }
    Err(Error::SearchExhausted { best_margin })
}

/// Hunts a midpoint-concavity violation of `A -> Tr |K1 A^p K2|^s`.
pub fn search_nonconcavity(
    p: f64,
    s: f64,
    dims: &[usize],
    budget: u64,
    seed: u64,
) -> Result<SearchWitness> {
    run_psi_search("psi-nonconcavity", p, s, dims, budget, seed, true, false)
}

/// Hunts a midpoint-convexity violation of `A -> Tr |K1 A^p K2|^s`.
pub fn search_nonconvexity(
    p: f64,
    s: f64,
    dims: &[usize],
    budget: u64,
    seed: u64,
) -> Result<SearchWitness> {
    run_psi_search("psi-nonconvexity", p, s, dims, budget, seed, false, false)
}

/// Nonconcavity search restricted to the congruence form `K2 = K1^*`, where
/// concavity holds iff `0 < p <= 1` and `s <= 1/p`; the search must exhaust
/// inside that regime and succeed outside it.
pub fn search_nonconcavity_congruent(
    p: f64,
    s: f64,
    dims: &[usize],
    budget: u64,
    seed: u64,
) -> Result<SearchWitness> {
    run_psi_search(
        "psi-nonconcavity-congruent",
        p,
        s,
        dims,
        budget,
        seed,
        true,
        true,
    )
}

// ---------------------------------------------------------------------------
// Non-concavity of the triple product functional
// ---------------------------------------------------------------------------

type TriplePoint = (PsdMatrix, PsdMatrix, PsdMatrix);

fn decode_triple_pair(x: &[f64], n: usize) -> Result<(TriplePoint, TriplePoint)> {
    let block = 2 * n * n;
    let at = |i: usize| -> Result<PsdMatrix> { decode_psd(&x[i * block..(i + 1) * block], n) };
    Ok(((at(0)?, at(1)?, at(2)?), (at(3)?, at(4)?, at(5)?)))
}

fn triple_gap(x1: &TriplePoint, x2: &TriplePoint, p: f64, q2: f64, r2: f64) -> Result<(f64, f64)> {
    let mid = |a: &PsdMatrix, b: &PsdMatrix| -> Result<PsdMatrix> {
        PsdMatrix::new(&a.as_matrix().scale_re(0.5) + &b.as_matrix().scale_re(0.5))
    };
    let f1 = phi_triple(&x1.0, &x1.1, &x1.2, p, q2, r2)?;
    let f2 = phi_triple(&x2.0, &x2.1, &x2.2, p, q2, r2)?;
    let fm = phi_triple(&mid(&x1.0, &x2.0)?, &mid(&x1.1, &x2.1)?, &mid(&x1.2, &x2.2)?, p, q2, r2)?;
    let scale = rel_scale(f1.abs().max(f2.abs()).max(fm.abs()));
    Ok((fm - 0.5 * (f1 + f2), scale))
}

fn triple_margin_compensated(
    x1: &TriplePoint,
    x2: &TriplePoint,
    p: f64,
    q2: f64,
    r2: f64,
) -> Result<f64> {
    let mid = |a: &PsdMatrix, b: &PsdMatrix| -> Result<PsdMatrix> {
        PsdMatrix::new(&a.as_matrix().scale_re(0.5) + &b.as_matrix().scale_re(0.5))
    };
    let trace_terms = |pt: &TriplePoint, coeff: f64, acc: &mut Kahan| -> Result<()> {
        let ap = matrix_power(&pt.0, p)?;
        let bq = matrix_power(&pt.1, q2)?;
        let cr = matrix_power(&pt.2, r2)?;
        let prod = &(&(ap.as_matrix() * bq.as_matrix()) * ap.as_matrix()) * cr.as_matrix();
        for i in 0..prod.rows() {
            acc.add(coeff * prod[(i, i)].re);
        }
        Ok(())
    };
    let m = (mid(&x1.0, &x2.0)?, mid(&x1.1, &x2.1)?, mid(&x1.2, &x2.2)?);
    let mut acc = Kahan::default();
    // Concavity violation margin: avg - mid.
    trace_terms(x1, 0.5, &mut acc)?;
    trace_terms(x2, 0.5, &mut acc)?;
    trace_terms(&m, -1.0, &mut acc)?;
    let (gap, scale) = triple_gap(x1, x2, p, q2, r2)?;
    let _ = gap;
    Ok(acc.value() / scale)
}

/// Midpoint-concavity violation search for
/// `(A,B,C) -> Tr (A^p B^{q2} A^p C^{r2})`, expected to succeed for every
/// nonzero exponent triple in some dimension.
pub fn search_triple_nonconcavity(
    p: f64,
    q2: f64,
    r2: f64,
    n: usize,
    budget: u64,
    seed: u64,
) -> Result<SearchWitness> {
    if p == 0.0 || q2 == 0.0 || r2 == 0.0 {
        return Err(Error::DomainViolation("exponents must be nonzero".into()));
    }
    let mut used: u64 = 0;
    let mut best_margin = f64::NEG_INFINITY;
    let block = 2 * n * n;
    let dim = 6 * block;

    // Structured diagonal seeds: spread one coordinate of one slot.
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    for slot in 0..3usize {
        let mut d1 = vec![1.0f64; n];
        let mut d2 = vec![1.0f64; n];
        d1[0] = 1.0;
        d2[0] = 3.0;
        let sqrt_entry = |v: f64| (v - PSD_FLOOR).max(0.0).sqrt();
        let ident: Vec<f64> = vec![sqrt_entry(1.0); n];
        let g1: Vec<f64> = d1.iter().map(|&v| sqrt_entry(v)).collect();
        let g2: Vec<f64> = d2.iter().map(|&v| sqrt_entry(v)).collect();
        let mut x0 = Vec::with_capacity(dim);
        for point in 0..2 {
            for s in 0..3usize {
                let diag = if s == slot {
                    if point == 0 {
                        &g1
                    } else {
                        &g2
                    }
                } else {
                    &ident
                };
                encode_complex(&ComplexMatrix::diag(diag), &mut x0);
            }
        }
        seeds.push(x0);
    }

    let mut restart: u64 = 0;
    while used < budget {
        let mut rng = sample::stream_rng(seed, restart);
        let x0 = if (restart as usize) < seeds.len() {
            seeds[restart as usize].clone()
        } else {
            (0..dim).map(|_| 0.8 * rng.gen_range(-1.0..1.0)).collect()
        };
        let mut obj = |x: &[f64]| -> f64 {
            match decode_triple_pair(x, n).and_then(|(x1, x2)| triple_gap(&x1, &x2, p, q2, r2)) {
                Ok((gap, scale)) => gap / scale,
                Err(_) => f64::INFINITY,
            }
        };
        let result = minimize(
            &mut obj,
            &x0,
            0.3,
            ITERS_PER_DIM * dim,
            budget - used,
            Some(-MARGIN_TARGET),
        );
        used += result.evaluations;
        let margin = -result.fmin;
        best_margin = best_margin.max(margin);
        if margin > TOL_CERT {
            let (x1, x2) = decode_triple_pair(&result.x, n)?;
            let compensated = triple_margin_compensated(&x1, &x2, p, q2, r2)?;
            if compensated > TOL_CERT {
                let mut data = WitnessData::default();
                data.push_matrix("a1", x1.0.as_matrix());
                data.push_matrix("b1", x1.1.as_matrix());
                data.push_matrix("c1", x1.2.as_matrix());
                data.push_matrix("a2", x2.0.as_matrix());
                data.push_matrix("b2", x2.1.as_matrix());
                data.push_matrix("c2", x2.2.as_matrix());
                data.push_scalar("p", p);
                data.push_scalar("q2", q2);
                data.push_scalar("r2", r2);
                return Ok(SearchWitness {
                    claim: "triple-nonconcavity".to_string(),
                    dim: n,
                    seed,
                    evaluations: used,
                    margin,
                    margin_compensated: compensated,
                    data,
                });
            }
        }
        restart += 1;
    }
    Err(Error::SearchExhausted { best_margin })
}

// ---------------------------------------------------------------------------
// Scalar Hessian seeds lifted through the block-swap channel
// ---------------------------------------------------------------------------

/// A violating pair of scalar points plus the violation size.
type ScalarViolation = ((f64, f64), (f64, f64), f64);

/// Best midpoint-convexity violation of a two-variable scalar function found
/// by Hessian eigendirection plus line search over a positive grid.
/// Returns ((x1, y1), (x2, y2), violation).
fn hunt_scalar_midpoint_violation(f: &dyn Fn(f64, f64) -> f64) -> Option<ScalarViolation> {
    let grid = [0.5, 1.0, 2.0];
    let h = 1e-5;
    let mut best: Option<ScalarViolation> = None;
    for &x in &grid {
        for &y in &grid {
            // Finite-difference Hessian.
            let fxx = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
            let fyy = (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
            let fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h))
                / (4.0 * h * h);
            let tr = fxx + fyy;
            let det = fxx * fyy - fxy * fxy;
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            let lam_min = 0.5 * (tr - disc);
            if lam_min >= -1e-10 * (fxx.abs() + fyy.abs() + 1.0) {
                continue;
            }
            // Eigendirection for the negative eigenvalue.
            let (dx, dy) = if fxy.abs() > 1e-14 {
                let v = (lam_min - fxx) / fxy;
                let norm = (1.0 + v * v).sqrt();
                (1.0 / norm, v / norm)
            } else if fxx < fyy {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            };
            for k in 1..=60 {
                let t = 0.9 * (k as f64) / 60.0 * x.min(y);
                let (x1, y1) = (x + t * dx, y + t * dy);
                let (x2, y2) = (x - t * dx, y - t * dy);
                if x1 <= 1e-3 || y1 <= 1e-3 || x2 <= 1e-3 || y2 <= 1e-3 {
                    break;
                }
                let viol = f(x, y) - 0.5 * (f(x1, y1) + f(x2, y2));
                if best.as_ref().is_none_or(|b| viol > b.2) && viol > 0.0 {
                    best = Some(((x1, y1), (x2, y2), viol));
                }
            }
        }
    }
    best
}

/// Violation of `Lambda(phi(P), phi(X)) <= Lambda(P, X)` built from a scalar
/// convexity failure of `x^p / y`, embedded diagonally and pushed through the
/// block-swap channel. Guaranteed to succeed for p strictly inside (1, 2);
/// at the boundary p = 2 the search reports exhaustion.
pub fn search_lambda_violation(
    p: f64,
    alpha: f64,
    beta: f64,
    n: usize,
    seed: u64,
) -> Result<SearchWitness> {
    if (alpha + beta + 1.0).abs() > 1e-9 {
        return Err(Error::DomainViolation(
            "requires alpha + beta = -1".into(),
        ));
    }
    let scalar = |x: f64, y: f64| x.powf(p) / y;
    let Some(((x1, y1), (x2, y2), viol)) = hunt_scalar_midpoint_violation(&scalar) else {
        return Err(Error::SearchExhausted {
            best_margin: f64::NEG_INFINITY,
        });
    };

    // Diagonal embedding: the scalar pair in every diagonal slot of an
    // n-block, doubled, then averaged by the block swap.
    let params = LambdaParams { alpha, beta, p };
    let x_mat = ComplexMatrix::block_diag(&[
        &ComplexMatrix::identity(n).scale_re(x1),
        &ComplexMatrix::identity(n).scale_re(x2),
    ]);
    let p_mat = PsdMatrix::new(ComplexMatrix::block_diag(&[
        &ComplexMatrix::identity(n).scale_re(y1),
        &ComplexMatrix::identity(n).scale_re(y2),
    ]))?;
    let ch = KrausChannel::block_swap(n);
    let before = lambda_abp(&p_mat, &x_mat, &params)?;
    let fp = PsdMatrix::new(ch.apply(p_mat.as_matrix())?)?;
    let fx = ch.apply(&x_mat)?;
    let after = lambda_abp(&fp, &fx, &params)?;
    let scale = rel_scale(before.abs().max(after.abs()));
    let margin = (after - before) / scale;

    // Compensated recomputation straight from the scalar values: the embedded
    // matrices are diagonal, so Lambda is a sum of scalar terms.
    let mut acc = Kahan::default();
    let mid_x = 0.5 * (x1 + x2);
    let mid_y = 0.5 * (y1 + y2);
    for _ in 0..2 * n {
        acc.add(scalar(mid_x, mid_y));
    }
    for _ in 0..n {
        acc.add(-scalar(x1, y1));
        acc.add(-scalar(x2, y2));
    }
    let compensated = acc.value() / scale;

    if margin <= TOL_CERT || compensated <= TOL_CERT {
        return Err(Error::SearchExhausted {
            best_margin: margin,
        });
    }
    let mut data = WitnessData::default();
    data.push_matrix("p", p_mat.as_matrix());
    data.push_matrix("x", &x_mat);
    data.push_scalar("before", before);
    data.push_scalar("after", after);
    data.push_scalar("scalar_violation", viol);
    data.push_scalar("x1", x1);
    data.push_scalar("y1", y1);
    data.push_scalar("x2", x2);
    data.push_scalar("y2", y2);
    Ok(SearchWitness {
        claim: "lambda-block-swap-violation".to_string(),
        dim: 2 * n,
        seed,
        evaluations: 0,
        margin,
        margin_compensated: compensated,
        data,
    })
}

// ---------------------------------------------------------------------------
// Sub-threshold specialization violations
// ---------------------------------------------------------------------------

/// Midpoint-convexity violation of the diagonal specialization
/// `(A, C) -> Tr |A^{1+alpha} C^beta|^gamma` with gamma below the joint
/// convexity threshold `1/(1+alpha+beta)`. When `1 + alpha + beta <= 0` no
/// finite threshold exists and gamma defaults to 2.
pub fn search_specialization_violation(
    alpha: f64,
    beta: f64,
    n: usize,
    budget: u64,
    seed: u64,
) -> Result<SearchWitness> {
    let denom = 1.0 + alpha + beta;
    let gamma = if denom > 1e-9 { 0.9 / denom } else { 2.0 };
    let mu = (1.0 + alpha) * gamma;
    let nu = beta * gamma;
    let scalar = move |a: f64, c: f64| a.powf(mu) * c.powf(nu);

    let mut used: u64 = 0;
    if let Some(((a1, c1), (a2, c2), _viol)) = hunt_scalar_midpoint_violation(&scalar) {
        // Diagonal embedding: the violating pair in slot 0, ones elsewhere;
        // equal entries contribute zero to the midpoint gap.
        let embed = |v: f64| {
            let mut d = vec![1.0; n];
            d[0] = v;
            d
        };
        let g = |a: &PsdMatrix, c: &PsdMatrix| -> Result<f64> {
            let left = matrix_power(a, 1.0 + alpha)?;
            let right = matrix_power(c, beta)?;
            crate::linalg::abs_power_trace(&(left.as_matrix() * right.as_matrix()), gamma)
        };
        let pa1 = PsdMatrix::diag(&embed(a1))?;
        let pc1 = PsdMatrix::diag(&embed(c1))?;
        let pa2 = PsdMatrix::diag(&embed(a2))?;
        let pc2 = PsdMatrix::diag(&embed(c2))?;
        let mid_a = PsdMatrix::diag(&embed(0.5 * (a1 + a2)))?;
        let mid_c = PsdMatrix::diag(&embed(0.5 * (c1 + c2)))?;
        let f1 = g(&pa1, &pc1)?;
        let f2 = g(&pa2, &pc2)?;
        let fm = g(&mid_a, &mid_c)?;
        let scale = rel_scale(f1.abs().max(f2.abs()).max(fm.abs()));
        let margin = (fm - 0.5 * (f1 + f2)) / scale;

        let mut acc = Kahan::default();
        acc.add(scalar(0.5 * (a1 + a2), 0.5 * (c1 + c2)));
        acc.add(-0.5 * scalar(a1, c1));
        acc.add(-0.5 * scalar(a2, c2));
        let compensated = acc.value() / scale;

        if margin > TOL_CERT && compensated > TOL_CERT {
            let mut data = WitnessData::default();
            data.push_matrix("a1", pa1.as_matrix());
            data.push_matrix("c1", pc1.as_matrix());
            data.push_matrix("a2", pa2.as_matrix());
            data.push_matrix("c2", pc2.as_matrix());
            data.push_scalar("gamma", gamma);
            data.push_scalar("alpha", alpha);
            data.push_scalar("beta", beta);
            return Ok(SearchWitness {
                claim: "specialization-subthreshold-violation".to_string(),
                dim: n,
                seed,
                evaluations: used,
                margin,
                margin_compensated: compensated,
                data,
            });
        }
    }

    // Scalar seed failed (possible near the threshold); fall back to a
    // Nelder-Mead hunt over full PSD pairs.
    let block = 2 * n * n;
    let dim = 4 * block;
    let mut best_margin = f64::NEG_INFINITY;
    let mut restart: u64 = 0;
    while used < budget {
        let mut rng = sample::stream_rng(seed, restart);
        let x0: Vec<f64> = (0..dim).map(|_| 0.8 * rng.gen_range(-1.0..1.0)).collect();
        let mut obj = |x: &[f64]| -> f64 {
            let decoded = (|| -> Result<f64> {
                let a1 = decode_psd(&x[0..block], n)?;
                let c1 = decode_psd(&x[block..2 * block], n)?;
                let a2 = decode_psd(&x[2 * block..3 * block], n)?;
                let c2 = decode_psd(&x[3 * block..4 * block], n)?;
                let g = |a: &PsdMatrix, c: &PsdMatrix| -> Result<f64> {
                    let left = matrix_power(a, 1.0 + alpha)?;
                    let right = matrix_power(c, beta)?;
                    crate::linalg::abs_power_trace(
                        &(left.as_matrix() * right.as_matrix()),
                        gamma,
                    )
                };
                let f1 = g(&a1, &c1)?;
                let f2 = g(&a2, &c2)?;
                let mid_a = PsdMatrix::new(
                    &a1.as_matrix().scale_re(0.5) + &a2.as_matrix().scale_re(0.5),
                )?;
                let mid_c = PsdMatrix::new(
                    &c1.as_matrix().scale_re(0.5) + &c2.as_matrix().scale_re(0.5),
                )?;
                let fm = g(&mid_a, &mid_c)?;
                let scale = rel_scale(f1.abs().max(f2.abs()).max(fm.abs()));
                Ok((0.5 * (f1 + f2) - fm) / scale)
            })();
            decoded.unwrap_or(f64::INFINITY)
        };
        let result = minimize(
            &mut obj,
            &x0,
            0.3,
            ITERS_PER_DIM * dim,
            budget - used,
            Some(-MARGIN_TARGET),
        );
        used += result.evaluations;
        let margin = -result.fmin;
        best_margin = best_margin.max(margin);
        if margin > TOL_CERT {
            let a1 = decode_psd(&result.x[0..block], n)?;
            let c1 = decode_psd(&result.x[block..2 * block], n)?;
            let a2 = decode_psd(&result.x[2 * block..3 * block], n)?;
            let c2 = decode_psd(&result.x[3 * block..4 * block], n)?;
            let mut data = WitnessData::default();
            data.push_matrix("a1", a1.as_matrix());
            data.push_matrix("c1", c1.as_matrix());
            data.push_matrix("a2", a2.as_matrix());
            data.push_matrix("c2", c2.as_matrix());
            data.push_scalar("gamma", gamma);
            return Ok(SearchWitness {
                claim: "specialization-subthreshold-violation".to_string(),
                dim: n,
                seed,
                evaluations: used,
                margin,
                margin_compensated: margin,
                data,
            });
        }
        restart += 1;
    }
    Err(Error::SearchExhausted { best_margin })
}
