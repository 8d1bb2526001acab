//! Command handlers. Every handler builds its complete JSON value before
//! anything is written, so no command emits partial output on error.

use serde::Serialize;
use serde_json::{json, Value};

use tracelab::certify::{
    self, certify_channel_monotonicity, certify_joint_convexity, certify_lambda_monotonicity,
    certify_quadratic_monotonicity, scalar_convexity_boundary, CertReport, TrialRecord, Verdict,
};
use tracelab::channels::{random_mixed_unitary, KrausChannel};
use tracelab::functionals::{
    lambda_abp, phi_triple, psi_pqs, psi_ps, two_var, LambdaParams, TripleParams,
};
use tracelab::linalg::{rel_scale, ComplexMatrix, HermitianMatrix, PsdMatrix};
use tracelab::metrics::{
    hessian_trace, hessian_trace_fd, j_f, kernel_monotonicity_gap, log_mean_quadrature_error,
    norm_metric_mismatch, petz_monotonicity_check, q_f, q_inverse_identity, AtomicMeasure,
    ScalarFn,
};
use tracelab::sample;
use tracelab::Error;

use crate::config::RunConfig;
use crate::{CmdResult, Failure, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_VIOLATED};

fn schema(msg: String) -> Failure {
    Failure::Schema(msg)
}

fn wrap<T: Serialize>(cfg: &RunConfig, kind: &str, report: &T) -> Value {
    json!({
        "config": cfg,
        "kind": kind,
        "report": report,
    })
}

fn psd(cfg: &RunConfig, name: &str) -> Result<PsdMatrix, Failure> {
    let m = cfg.matrix(name).map_err(schema)?;
    PsdMatrix::new(m.clone()).map_err(Failure::Domain)
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

pub fn eval(cfg: &RunConfig, target: &str) -> CmdResult {
    let value = match target {
        "psi-pqs" => {
            let a = cfg.matrix("a").map_err(schema)?.clone();
            let b = psd(cfg, "b")?;
            let c = psd(cfg, "c")?;
            let n = b.dim();
            let mut params = TripleParams::with_identity(
                cfg.scalar("p", cfg.p).map_err(schema)?,
                cfg.scalar("q", cfg.q).map_err(schema)?,
                cfg.scalar("s", cfg.s).map_err(schema)?,
                n,
            );
            if let Ok(k1) = cfg.matrix("k1") {
                params.k1 = k1.clone();
            }
            if let Ok(k2) = cfg.matrix("k2") {
                params.k2 = k2.clone();
            }
            psi_pqs(&a, &b, &c, &params)?
        }
        "lambda" => {
            let p_mat = psd(cfg, "p")?;
            let x = cfg.matrix("x").map_err(schema)?.clone();
            let params = LambdaParams {
                alpha: cfg.scalar("alpha", cfg.alpha).map_err(schema)?,
                beta: cfg.scalar("beta", cfg.beta).map_err(schema)?,
                p: cfg.scalar("p", cfg.p).map_err(schema)?,
            };
            lambda_abp(&p_mat, &x, &params)?
        }
        "psi-ps" => {
            let a = psd(cfg, "a")?;
            let k1 = cfg.matrix("k1").map_err(schema)?;
            let k2 = cfg.matrix("k2").map_err(schema)?;
            psi_ps(
                &a,
                k1,
                k2,
                cfg.scalar("p", cfg.p).map_err(schema)?,
                cfg.scalar("s", cfg.s).map_err(schema)?,
            )?
        }
        "phi-triple" => {
            let a = psd(cfg, "a")?;
            let b = psd(cfg, "b")?;
            let c = psd(cfg, "c")?;
            phi_triple(
                &a,
                &b,
                &c,
                cfg.scalar("p", cfg.p).map_err(schema)?,
                cfg.scalar("q2", cfg.q2).map_err(schema)?,
                cfg.scalar("r2", cfg.r2).map_err(schema)?,
            )?
        }
        "two-var" => {
            let a = psd(cfg, "a")?;
            let b = psd(cfg, "b")?;
            two_var(
                &a,
                &b,
                cfg.scalar("p", cfg.p).map_err(schema)?,
                cfg.scalar("q", cfg.q).map_err(schema)?,
                cfg.scalar("s", cfg.s).map_err(schema)?,
            )?
        }
        other => return Err(schema(format!("unknown eval target '{other}'"))),
    };
    // 17 significant digits round-trips every f64.
    let report = json!({
        "functional": target,
        "value": format!("{value:.16e}"),
        "value_float": value,
    });
    Ok((wrap(cfg, "eval", &report), EXIT_OK))
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

fn apply_tol_override(report: &mut CertReport, tol: Option<f64>) {
    if let Some(t) = tol {
        report.tol = t;
        report.verdict = if report.min_gap < -t {
            Verdict::Violated
        } else {
            Verdict::HoldsWithinTol
        };
    }
}

fn write_csv(cfg: &RunConfig, records: &[TrialRecord]) -> Result<(), Failure> {
    let Some(path) = &cfg.csv else {
        return Ok(());
    };
    let mut text = String::from("trial,gap,scale\n");
    for r in records {
        text.push_str(&format!("{},{},{}\n", r.trial, r.gap, r.scale));
    }
    std::fs::write(path, text.as_bytes())
        .map_err(|e| schema(format!("cannot write {}: {e}", path.display())))
}

fn triple_params_from(cfg: &RunConfig) -> Result<TripleParams, Failure> {
    let p = cfg.scalar("p", cfg.p).map_err(schema)?;
    let q = cfg.scalar("q", cfg.q).map_err(schema)?;
    let s = cfg.scalar("s", cfg.s).map_err(schema)?;
    let mut params = TripleParams::with_identity(p, q, s, cfg.dim);
    // Random contraction pair drawn from a dedicated sub-stream, so the
    // suite exercises nontrivial K1, K2 while staying reproducible.
    let mut rng = sample::stream_rng(cfg.seed, u64::MAX);
    params.k1 = sample::ginibre(cfg.dim, &mut rng);
    params.k2 = sample::ginibre(cfg.dim, &mut rng);
    Ok(params)
}

pub fn certify(cfg: &RunConfig, target: &str) -> CmdResult {
    match target {
        "joint-convexity" => {
            let params = triple_params_from(cfg)?;
            let mut report = certify_joint_convexity(&params, cfg.dim, cfg.trials, cfg.seed)?;
            apply_tol_override(&mut report, cfg.tol);
            let records =
                certify::joint_convexity_records(&params, cfg.dim, cfg.trials, cfg.seed)?;
            write_csv(cfg, &records)?;
            let code = verdict_code(&report);
            Ok((wrap(cfg, "cert-report", &report), code))
        }
        "channel-monotonicity" => {
            let p = cfg.scalar("p", cfg.p).map_err(schema)?;
            let q = cfg.scalar("q", cfg.q).map_err(schema)?;
            let s = cfg.scalar("s", cfg.s).map_err(schema)?;
            let params = TripleParams::with_identity(p, q, s, cfg.dim);
            let sampler = cfg.sampler().map_err(schema)?;
            let mut report =
                certify_channel_monotonicity(&params, &sampler, cfg.dim, cfg.trials, cfg.seed)?;
            apply_tol_override(&mut report, cfg.tol);
            let records = certify::channel_monotonicity_records(
                &params, &sampler, cfg.dim, cfg.trials, cfg.seed,
            )?;
            write_csv(cfg, &records)?;
            let code = verdict_code(&report);
            Ok((wrap(cfg, "cert-report", &report), code))
        }
        "lambda-monotonicity" => {
            let params = LambdaParams {
                alpha: cfg.scalar("alpha", cfg.alpha).map_err(schema)?,
                beta: cfg.scalar("beta", cfg.beta).map_err(schema)?,
                p: cfg.scalar("p", cfg.p).map_err(schema)?,
            };
            let sampler = cfg.sampler().map_err(schema)?;
            let mut report =
                certify_lambda_monotonicity(&params, &sampler, cfg.dim, cfg.trials, cfg.seed)?;
            apply_tol_override(&mut report, cfg.tol);
            let code = verdict_code(&report);
            Ok((wrap(cfg, "cert-report", &report), code))
        }
        "quadratic-monotonicity" => {
            let alpha = cfg.scalar("alpha", cfg.alpha).map_err(schema)?;
            let beta = cfg.scalar("beta", cfg.beta).map_err(schema)?;
            let sampler = cfg.sampler().map_err(schema)?;
            let mut report = certify_quadratic_monotonicity(
                alpha, beta, &sampler, cfg.dim, cfg.trials, cfg.seed,
            )?;
            apply_tol_override(&mut report, cfg.tol);
            let records = certify::quadratic_monotonicity_records(
                alpha, beta, &sampler, cfg.dim, cfg.trials, cfg.seed,
            )?;
            write_csv(cfg, &records)?;
            let code = verdict_code(&report);
            Ok((wrap(cfg, "cert-report", &report), code))
        }
        "scalar-boundary" => {
            let p = cfg.scalar("p", cfg.p).map_err(schema)?;
            let report = scalar_convexity_boundary(p);
            let code = if report.consistent() {
                EXIT_OK
            } else {
                EXIT_VIOLATED
            };
            Ok((wrap(cfg, "scalar-boundary", &report), code))
        }
        other => Err(schema(format!("unknown certify target '{other}'"))),
    }
}

fn verdict_code(report: &CertReport) -> u8 {
    match report.verdict {
        Verdict::HoldsWithinTol => EXIT_OK,
        Verdict::Violated => EXIT_VIOLATED,
    }
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

pub fn search(cfg: &RunConfig, target: &str) -> CmdResult {
    let outcome = match target {
        "nonconcavity" => certify::search_nonconcavity(
            cfg.scalar("p", cfg.p).map_err(schema)?,
            cfg.scalar("s", cfg.s).map_err(schema)?,
            &cfg.search_dims(),
            cfg.budget,
            cfg.seed,
        ),
        "nonconvexity" => certify::search_nonconvexity(
            cfg.scalar("p", cfg.p).map_err(schema)?,
            cfg.scalar("s", cfg.s).map_err(schema)?,
            &cfg.search_dims(),
            cfg.budget,
            cfg.seed,
        ),
        "nonconcavity-congruent" => certify::search_nonconcavity_congruent(
            cfg.scalar("p", cfg.p).map_err(schema)?,
            cfg.scalar("s", cfg.s).map_err(schema)?,
            &cfg.search_dims(),
            cfg.budget,
            cfg.seed,
        ),
        "triple-nonconcavity" => certify::search_triple_nonconcavity(
            cfg.scalar("p", cfg.p).map_err(schema)?,
            cfg.scalar("q2", cfg.q2).map_err(schema)?,
            cfg.scalar("r2", cfg.r2).map_err(schema)?,
            cfg.dim.min(3),
            cfg.budget,
            cfg.seed,
        ),
        "lambda-violation" => certify::search_lambda_violation(
            cfg.scalar("p", cfg.p).map_err(schema)?,
            cfg.alpha.unwrap_or(-0.5),
            cfg.beta.unwrap_or(-0.5),
            cfg.dim,
            cfg.seed,
        ),
        "specialization-violation" => certify::search_specialization_violation(
            cfg.alpha.unwrap_or(-0.5),
            cfg.beta.unwrap_or(-0.5),
            cfg.dim,
            cfg.budget,
            cfg.seed,
        ),
        other => return Err(schema(format!("unknown search target '{other}'"))),
    };
    match outcome {
        Ok(witness) => Ok((wrap(cfg, "search-witness", &witness), EXIT_OK)),
        Err(Error::SearchExhausted { best_margin }) => {
            let report = json!({
                "status": "exhausted",
                "best_margin": best_margin,
            });
            Ok((wrap(cfg, "search-exhausted", &report), EXIT_INCONCLUSIVE))
        }
        Err(e) => Err(Failure::Domain(e)),
    }
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

fn metric_trials(cfg: &RunConfig) -> u64 {
    cfg.trials.clamp(1, 1000)
}

pub fn metrics(cfg: &RunConfig, target: &str) -> CmdResult {
    let n = cfg.dim;
    let trials = metric_trials(cfg);
    match target {
        "kernel-agreement" => {
            let functions: Vec<ScalarFn> = match &cfg.function {
                Some(id) => vec![ScalarFn::parse(id)?],
                None => vec![ScalarFn::Power(0.5), ScalarFn::LogMean, ScalarFn::Power(1.0)],
            };
            let mut deviations = Vec::new();
            let mut max_dev: f64 = 0.0;
            for t in 0..trials {
                let mut rng = sample::stream_rng(cfg.seed, t);
                let a = sample::conditioned_psd(n, 100.0, &mut rng);
                let b = sample::conditioned_psd(n, 100.0, &mut rng);
                for f in &functions {
                    let jf = j_f(&a, &b, *f)?;
                    let qf = q_f(&a, &b, |x, y| f.eval(x / y) * y)?;
                    let dev = jf.matrix().max_abs_diff(qf.matrix());
                    max_dev = max_dev.max(dev);
                    deviations.push(dev);
                }
            }
            let pass = max_dev <= 1e-10;
            let report = json!({
                "suite": target,
                "trials": trials,
                "max_deviation": max_dev,
                "threshold": 1e-10,
                "deviations": deviations,
            });
            Ok((wrap(cfg, "metrics", &report), if pass { EXIT_OK } else { EXIT_VIOLATED }))
        }
        "hessian-fd" => {
            let functions: Vec<ScalarFn> = match &cfg.function {
                Some(id) => vec![ScalarFn::parse(id)?],
                None => vec![ScalarFn::Power(2.0), ScalarFn::XLogX, ScalarFn::Power(4.0)],
            };
            let mut errors = Vec::new();
            let mut max_err: f64 = 0.0;
            for t in 0..trials {
                let mut rng = sample::stream_rng(cfg.seed, t);
                let d = sample::conditioned_psd(n, 100.0, &mut rng);
                let g = sample::ginibre(n, &mut rng);
                let a = HermitianMatrix::symmetrized(&(&g + &g.conj_transpose()))
                    .map_err(Failure::Domain)?;
                for f in &functions {
                    let exact = hessian_trace(*f, &d, &a)?;
                    let fd = hessian_trace_fd(*f, &d, &a)?;
                    let err = (exact - fd).abs() / rel_scale(exact);
                    max_err = max_err.max(err);
                    errors.push(err);
                }
            }
            let pass = max_err < 1e-5;
            let report = json!({
                "suite": target,
                "trials": trials,
                "max_relative_error": max_err,
                "threshold": 1e-5,
                "errors": errors,
            });
            Ok((wrap(cfg, "metrics", &report), if pass { EXIT_OK } else { EXIT_VIOLATED }))
        }
        "metric-monotonicity" => {
            let functions: Vec<ScalarFn> = match &cfg.function {
                Some(id) => vec![ScalarFn::parse(id)?],
                None => vec![ScalarFn::Power(0.5), ScalarFn::LogMean],
            };
            let mut lam_mins = Vec::new();
            let mut worst = f64::INFINITY;
            for t in 0..trials {
                let mut rng = sample::stream_rng(cfg.seed, t);
                let a = sample::conditioned_psd(n, 100.0, &mut rng);
                let b = sample::conditioned_psd(n, 100.0, &mut rng);
                let ch = random_mixed_unitary(n, 2 + (t as usize % 5), &mut rng);
                for f in &functions {
                    let min = petz_monotonicity_check(*f, &ch, &a, &b)?;
                    worst = worst.min(min);
                    lam_mins.push(min);
                }
            }
            let pass = worst >= -1e-9;
            let report = json!({
                "suite": target,
                "trials": trials,
                "min_lambda": worst,
                "threshold": -1e-9,
                "lambda_mins": lam_mins,
            });
            Ok((wrap(cfg, "metrics", &report), if pass { EXIT_OK } else { EXIT_VIOLATED }))
        }
        "kernel-monotonicity" => {
            let mu = cfg.measure.clone().unwrap_or_else(AtomicMeasure::x_log_x);
            let mu = AtomicMeasure::new(mu.c, mu.atoms)?;
            let mut gaps = Vec::new();
            let mut worst = f64::INFINITY;
            for t in 0..trials {
                let mut rng = sample::stream_rng(cfg.seed, t);
                let a = sample::conditioned_psd(n, 100.0, &mut rng);
                let b = sample::conditioned_psd(n, 100.0, &mut rng);
                let x = sample::ginibre(n, &mut rng);
                let ch = random_mixed_unitary(n, 2 + (t as usize % 5), &mut rng);
                let (gap, scale) = kernel_monotonicity_gap(&mu, &ch, &a, &b, &x)?;
                worst = worst.min(gap / scale);
                gaps.push(gap);
            }
            let pass = worst >= -1e-9;
            let report = json!({
                "suite": target,
                "trials": trials,
                "min_relative_gap": worst,
                "threshold": -1e-9,
                "gaps": gaps,
            });
            Ok((wrap(cfg, "metrics", &report), if pass { EXIT_OK } else { EXIT_VIOLATED }))
        }
        "norm-metric-mismatch" => {
            let p = cfg.p.unwrap_or(2.0);
            let report_p = norm_metric_mismatch(p)?;
            let report_one = norm_metric_mismatch(1.0)?;
            let demonstrated = report_p.difference > 1e-3
                && report_one.degenerate_value == Some(0.0);
            let report = json!({
                "suite": target,
                "power_branch": report_p,
                "degenerate_branch": report_one,
                "demonstrated": demonstrated,
            });
            Ok((
                wrap(cfg, "metrics", &report),
                if demonstrated { EXIT_OK } else { EXIT_VIOLATED },
            ))
        }
        "quadrature" => {
            let grid: Vec<f64> = (0..=60)
                .map(|k| 10f64.powf(-3.0 + 6.0 * (k as f64) / 60.0))
                .collect();
            let err = log_mean_quadrature_error(&grid);
            let pass = err < 1e-12;
            let report = json!({
                "suite": target,
                "grid_points": grid.len(),
                "max_error": err,
                "threshold": 1e-12,
            });
            Ok((wrap(cfg, "metrics", &report), if pass { EXIT_OK } else { EXIT_VIOLATED }))
        }
        "q-inverse" => {
            let mut max_dev: f64 = 0.0;
            let mut devs = Vec::new();
            for t in 0..trials {
                let mut rng = sample::stream_rng(cfg.seed, t);
                let a = sample::conditioned_psd(n, 100.0, &mut rng);
                let b = sample::conditioned_psd(n, 100.0, &mut rng);
                let dq = tracelab::metrics::diff_quotient(ScalarFn::Log);
                let dev = q_inverse_identity(&a, &b, dq)?;
                max_dev = max_dev.max(dev);
                devs.push(dev);
            }
            let pass = max_dev <= 1e-9;
            let report = json!({
                "suite": target,
                "trials": trials,
                "max_deviation": max_dev,
                "threshold": 1e-9,
                "deviations": devs,
            });
            Ok((wrap(cfg, "metrics", &report), if pass { EXIT_OK } else { EXIT_VIOLATED }))
        }
        other => Err(schema(format!("unknown metrics target '{other}'"))),
    }
}

// ---------------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------------

fn demo_trace_doubling(cfg: &RunConfig) -> Result<(Value, bool), Failure> {
    let n = cfg.dim.clamp(1, 3);
    let mut cases = Vec::new();
    let mut pass = true;
    for p in [2.0, 3.0] {
        let params = LambdaParams {
            alpha: -0.5,
            beta: -0.5,
            p,
        };
        let mut rng = sample::stream_rng(cfg.seed, p as u64);
        let p_mat = sample::conditioned_psd(n, 100.0, &mut rng);
        let x = sample::ginibre(n, &mut rng);
        let before = lambda_abp(&p_mat, &x, &params)?;

        let ch = KrausChannel::partial_trace(n);
        let p2 = ComplexMatrix::kron_fused(p_mat.as_matrix(), &ComplexMatrix::identity(2));
        let x2 = ComplexMatrix::kron_fused(&x, &ComplexMatrix::identity(2));
        let fp = PsdMatrix::new(ch.apply(&p2)?)?;
        let fx = ch.apply(&x2)?;
        let after = lambda_abp(&fp, &fx, &params)?;

        let measured = after / before;
        let predicted = 2f64.powf(params.alpha + params.beta + p);
        let err = (measured - predicted).abs();
        pass &= err < 1e-10;
        cases.push(json!({
            "p": p,
            "measured_factor": measured,
            "predicted_factor": predicted,
            "abs_error": err,
        }));
    }
    Ok((json!({"demo": "trace-doubling", "cases": cases, "pass": pass}), pass))
}

fn demo_block_swap(cfg: &RunConfig) -> Result<(Value, bool), Failure> {
    let n = cfg.dim.clamp(1, 4);
    let mut rng = sample::stream_rng(cfg.seed, 0);
    let x1 = sample::ginibre(n, &mut rng);
    let x2 = sample::ginibre(n, &mut rng);
    let x = ComplexMatrix::block_diag(&[&x1, &x2]);
    let ch = KrausChannel::block_swap(n);
    let out = ch.apply(&x)?;
    let avg = (&x1 + &x2).scale_re(0.5);
    let expect = ComplexMatrix::block_diag(&[&avg, &avg]);
    let err = out.max_abs_diff(&expect);
    let scale = x.max_abs().max(1.0);
    let pass = err < 1e-13 * scale;
    Ok((
        json!({
            "demo": "block-swap-midpoint",
            "max_abs_error": err,
            "unital": ch.is_unital(),
            "pass": pass,
        }),
        pass,
    ))
}

fn demo_lambda_violation(cfg: &RunConfig) -> Result<(Value, bool), Failure> {
    let p = cfg.p.unwrap_or(1.5);
    match certify::search_lambda_violation(
        p,
        cfg.alpha.unwrap_or(-0.5),
        cfg.beta.unwrap_or(-0.5),
        1,
        cfg.seed,
    ) {
        Ok(witness) => Ok((
            json!({"demo": "lambda-violation", "witness": witness, "pass": true}),
            true,
        )),
        Err(Error::SearchExhausted { best_margin }) => Ok((
            json!({"demo": "lambda-violation", "status": "exhausted", "best_margin": best_margin, "pass": false}),
            false,
        )),
        Err(e) => Err(Failure::Domain(e)),
    }
}

pub fn demo(cfg: &RunConfig, target: &str) -> CmdResult {
    let (value, pass) = match target {
        "trace-doubling" => demo_trace_doubling(cfg)?,
        "block-swap-midpoint" => demo_block_swap(cfg)?,
        "lambda-violation" => demo_lambda_violation(cfg)?,
        "all" => {
            let (a, pa) = demo_trace_doubling(cfg)?;
            let (b, pb) = demo_block_swap(cfg)?;
            let (c, pc) = demo_lambda_violation(cfg)?;
            (
                json!({"demos": [a, b, c], "pass": pa && pb && pc}),
                pa && pb && pc,
            )
        }
        other => return Err(schema(format!("unknown demo target '{other}'"))),
    };
    Ok((
        wrap(cfg, "demo", &value),
        if pass { EXIT_OK } else { EXIT_VIOLATED },
    ))
}
