//! Acceptance suite: one test per gate, each printing a pass/fail line.
//!
//! Every tolerance and threshold is pinned here; run with
//! `cargo test --test acceptance -- --nocapture` to see the per-gate lines.

use std::time::Instant;

use tracelab::certify::{
    self, certify_channel_monotonicity, certify_joint_convexity, channel_monotonicity_records,
    quadratic_monotonicity_records, ChannelSampler, Verdict,
};
use tracelab::channels::{random_mixed_unitary, KrausChannel};
use tracelab::functionals::{lambda_abp, LambdaParams, TripleParams};
use tracelab::linalg::{ComplexMatrix, HermitianMatrix, PsdMatrix};
use tracelab::metrics::{
    self, hessian_trace, hessian_trace_fd, j_f, kernel_monotonicity_gap, kprime_commutative,
    norm_metric_mismatch, petz_monotonicity_check, q_f, AtomicMeasure, ScalarFn,
};
use tracelab::sample;
use tracelab::variational::{variational_max_check, variational_min_check, ExponentQuad};

fn gate(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id:2} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance gate {id} ({name}) failed: {detail}");
}

#[test]
fn gate_01_variational_saturation() {
    let started = Instant::now();
    let quads = [
        ExponentQuad::from_convexity_params(0.25, 0.25, 2.0).unwrap(), // (1, 4, 2, 4)
        ExponentQuad::new(2.0, 4.0, 8.0, 8.0).unwrap(),
        ExponentQuad::new(2.0, 12.0, 3.0, 12.0).unwrap(),
    ];
    let dims = [2usize, 3, 4];
    let trials = 1000u64;
    let mut worst_gap: f64 = 0.0;
    let mut worst_probe = f64::NEG_INFINITY;
    for t in 0..trials {
        let n = dims[(t % 3) as usize];
        let quad = quads[((t / 3) % quads.len() as u64) as usize];
        let mut rng = sample::stream_rng(2024, t);
        let x = sample::conditioned_invertible(n, 100.0, &mut rng);
        let b = sample::conditioned_invertible(n, 100.0, &mut rng);
        let y = sample::conditioned_invertible(n, 100.0, &mut rng);

        let max_report = variational_max_check(&b, &x, &y, &quad, 100, t).unwrap();
        worst_gap = worst_gap.max(max_report.gap.abs());
        worst_probe = worst_probe.max(max_report.probe_excess);

        let min_report = variational_min_check(&x, &b, &y, &quad, 100, t).unwrap();
        worst_gap = worst_gap.max(min_report.gap.abs());
        worst_probe = worst_probe.max(min_report.probe_excess);
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = worst_gap < 1e-8 && worst_probe < 1e-9 && elapsed < 60.0;
    gate(
        1,
        "variational saturation",
        pass,
        &format!(
            "1000 instances, worst |gap| {worst_gap:.3e} (< 1e-8), worst probe excess \
             {worst_probe:.3e} (< 1e-9), {elapsed:.1}s (< 60s)"
        ),
    );
}

#[test]
fn gate_02_joint_convexity_suite() {
    let started = Instant::now();
    let mut worst = f64::INFINITY;
    for (i, (p, q, s)) in [(0.25, 0.25, 2.0), (0.5, 0.25, 4.0), (0.3, 0.2, 2.0)]
        .into_iter()
        .enumerate()
    {
        let mut params = TripleParams::with_identity(p, q, s, 3);
        assert!(params.convexity_admissible());
        let mut rng = sample::stream_rng(77, i as u64);
        params.k1 = sample::ginibre(3, &mut rng);
        params.k2 = sample::ginibre(3, &mut rng);
        let report = certify_joint_convexity(&params, 3, 1000, 100 + i as u64).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsWithinTol, "({p},{q},{s})");
        worst = worst.min(report.min_gap);
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = worst >= -1e-7 && elapsed < 120.0;
    gate(
        2,
        "triple joint convexity",
        pass,
        &format!(
            "3 exponent sets x 1000 trials x 16 lambdas, min relative gap {worst:.3e} \
             (>= -1e-7), {elapsed:.1}s (< 120s)"
        ),
    );
}

#[test]
fn gate_03_subthreshold_specialization() {
    let w = certify::search_specialization_violation(-0.5, -0.5, 2, 100_000, 303).unwrap();
    let pass = w.margin > 1e-6;
    gate(
        3,
        "sub-threshold specialization violation",
        pass,
        &format!("margin {:.3e} (> 1e-6), dim {} (<= 3)", w.margin, w.dim),
    );
}

#[test]
fn gate_04_nonconcavity_witness() {
    let w = certify::search_nonconcavity(0.3, 3.0, &[2, 3, 4], 100_000, 404).unwrap();
    let verified = w.margin_compensated >= 0.5 * w.margin;
    let pass = w.margin > 1e-6 && verified;
    gate(
        4,
        "nonconcavity witness (p=0.3, s=3)",
        pass,
        &format!(
            "margin {:.3e} (> 1e-6), compensated {:.3e} (>= half), dim {}",
            w.margin, w.margin_compensated, w.dim
        ),
    );

    // Independent gate: the triple-product midpoint search at (1, 1, 1).
    let t = certify::search_triple_nonconcavity(1.0, 1.0, 1.0, 2, 100_000, 405).unwrap();
    gate(
        4,
        "triple-product nonconcavity (1,1,1)",
        t.margin > 1e-6,
        &format!("margin {:.3e} (> 1e-6)", t.margin),
    );
}

#[test]
fn gate_05_nonconvexity_witness() {
    let w = certify::search_nonconvexity(0.6, 1.8, &[2, 3, 4], 100_000, 505).unwrap();
    let verified = w.margin_compensated >= 0.5 * w.margin;
    let pass = w.margin > 1e-6 && verified;
    gate(
        5,
        "nonconvexity witness (p=0.6, s=1.8)",
        pass,
        &format!(
            "margin {:.3e} (> 1e-6), compensated {:.3e} (>= half), dim {}",
            w.margin, w.margin_compensated, w.dim
        ),
    );
}

#[test]
fn gate_06_channel_monotonicity() {
    let sampler = ChannelSampler::MixedUnitary {
        min_terms: 2,
        max_terms: 6,
    };
    let mut worst = f64::INFINITY;
    for (i, (p, q, s)) in [(0.25, 0.25, 2.0), (0.2, 0.2, 2.5)].into_iter().enumerate() {
        let params = TripleParams::with_identity(p, q, s, 3);
        assert!(params.monotonicity_admissible());
        let report =
            certify_channel_monotonicity(&params, &sampler, 3, 1000, 600 + i as u64).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsWithinTol);
        worst = worst.min(report.min_gap);
    }

    // Identity and unitary conjugation leave the gap at zero.
    let params = TripleParams::with_identity(0.25, 0.25, 2.0, 3);
    let mut max_abs: f64 = 0.0;
    for sampler in [ChannelSampler::Identity, ChannelSampler::UnitaryConjugation] {
        let records = channel_monotonicity_records(&params, &sampler, 3, 200, 606).unwrap();
        for r in &records {
            max_abs = max_abs.max(r.gap.abs());
        }
    }
    let pass = worst >= -1e-7 && max_abs < 1e-12;
    gate(
        6,
        "channel monotonicity",
        pass,
        &format!(
            "min relative gap {worst:.3e} (>= -1e-7) over 2x1000 mixed-unitary trials; \
             identity/conjugation |gap| {max_abs:.3e} (< 1e-12)"
        ),
    );
}

#[test]
fn gate_07_quadratic_monotonicity() {
    let sampler = ChannelSampler::MixedUnitary {
        min_terms: 2,
        max_terms: 6,
    };
    let mut worst = f64::INFINITY;
    for (i, (alpha, beta)) in [(0.5, 0.5), (0.5, 0.3)].into_iter().enumerate() {
        let records =
            quadratic_monotonicity_records(alpha, beta, &sampler, 3, 1000, 700 + i as u64)
                .unwrap();
        for r in &records {
            worst = worst.min(r.gap);
        }
    }
    let pass = worst >= -1e-7;
    gate(
        7,
        "quadratic-form monotonicity",
        pass,
        &format!("min relative gap {worst:.3e} (>= -1e-7) over 2x1000 trials, alpha+beta in {{1, 0.8}}"),
    );
}

#[test]
fn gate_08_doubling_and_block_swap() {
    // Partial-trace scaling factor 2^{alpha+beta+p} for p in {2, 3}.
    let n = 2;
    let mut worst = 0.0f64;
    for p in [2.0, 3.0] {
        let params = LambdaParams {
            alpha: -0.5,
            beta: -0.5,
            p,
        };
        let mut rng = sample::stream_rng(808, p as u64);
        let p_mat = sample::conditioned_psd(n, 100.0, &mut rng);
        let x = sample::ginibre(n, &mut rng);
        let before = lambda_abp(&p_mat, &x, &params).unwrap();
        let ch = KrausChannel::partial_trace(n);
        let fp = PsdMatrix::new(
            ch.apply(&ComplexMatrix::kron_fused(
                p_mat.as_matrix(),
                &ComplexMatrix::identity(2),
            ))
            .unwrap(),
        )
        .unwrap();
        let fx = ch
            .apply(&ComplexMatrix::kron_fused(&x, &ComplexMatrix::identity(2)))
            .unwrap();
        let after = lambda_abp(&fp, &fx, &params).unwrap();
        let err = (after / before - 2f64.powf(p - 1.0)).abs();
        worst = worst.max(err);
    }

    let w = certify::search_lambda_violation(1.5, -0.5, -0.5, 1, 808).unwrap();
    let pass = worst < 1e-10 && w.margin > 0.0;
    gate(
        8,
        "doubling scale and block-swap violation",
        pass,
        &format!(
            "max |factor - 2^(p-1)| {worst:.3e} (< 1e-10); p=1.5 violation margin {:.3e}",
            w.margin
        ),
    );
}

#[test]
fn gate_09_superoperator_suite() {
    let n = 3;
    // q_f / j_f agreement over 100 random strictly positive pairs.
    let mut max_dev: f64 = 0.0;
    for t in 0..100u64 {
        let mut rng = sample::stream_rng(909, t);
        let a = sample::conditioned_psd(n, 100.0, &mut rng);
        let b = sample::conditioned_psd(n, 100.0, &mut rng);
        for f in [ScalarFn::Power(0.5), ScalarFn::LogMean] {
            let jf = j_f(&a, &b, f).unwrap();
            let qf = q_f(&a, &b, |x, y| f.eval(x / y) * y).unwrap();
            max_dev = max_dev.max(jf.matrix().max_abs_diff(qf.matrix()));
        }
    }

    // Trace Hessian against finite differences over 100 instances.
    let mut max_fd_err: f64 = 0.0;
    for t in 0..100u64 {
        let mut rng = sample::stream_rng(910, t);
        let d = sample::conditioned_psd(n, 100.0, &mut rng);
        let g = sample::ginibre(n, &mut rng);
        let a = HermitianMatrix::symmetrized(&(&g + &g.conj_transpose())).unwrap();
        for f in [ScalarFn::Power(2.0), ScalarFn::XLogX] {
            let exact = hessian_trace(f, &d, &a).unwrap();
            let fd = hessian_trace_fd(f, &d, &a).unwrap();
            max_fd_err = max_fd_err.max((exact - fd).abs() / exact.abs().max(1.0));
        }
    }

    // Metric monotonicity over 100 channel trials for both catalog entries.
    let mut min_lambda = f64::INFINITY;
    for t in 0..100u64 {
        let mut rng = sample::stream_rng(911, t);
        let a = sample::conditioned_psd(n, 100.0, &mut rng);
        let b = sample::conditioned_psd(n, 100.0, &mut rng);
        let ch = random_mixed_unitary(n, 2 + (t as usize % 5), &mut rng);
        for f in [ScalarFn::Power(0.5), ScalarFn::LogMean] {
            min_lambda = min_lambda.min(petz_monotonicity_check(f, &ch, &a, &b).unwrap());
        }
    }

    // Kernel monotonicity for f = x log x over 100 trials.
    let mu = AtomicMeasure::x_log_x();
    let mut min_rel_gap = f64::INFINITY;
    for t in 0..100u64 {
        let mut rng = sample::stream_rng(912, t);
        let a = sample::conditioned_psd(n, 100.0, &mut rng);
        let b = sample::conditioned_psd(n, 100.0, &mut rng);
        let x = sample::ginibre(n, &mut rng);
        let ch = random_mixed_unitary(n, 2 + (t as usize % 5), &mut rng);
        let (gap, scale) = kernel_monotonicity_gap(&mu, &ch, &a, &b, &x).unwrap();
        min_rel_gap = min_rel_gap.min(gap / scale);
    }

    let pass = max_dev <= 1e-10 && max_fd_err < 1e-5 && min_lambda >= -1e-9 && min_rel_gap >= -1e-9;
    gate(
        9,
        "superoperator suite",
        pass,
        &format!(
            "kernel agreement {max_dev:.3e} (<= 1e-10); hessian-vs-fd {max_fd_err:.3e} (< 1e-5); \
             metric lambda_min {min_lambda:.3e} (>= -1e-9); kernel gap {min_rel_gap:.3e} (>= -1e-9)"
        ),
    );
}

#[test]
fn gate_10_norm_metric_mismatch() {
    let r = norm_metric_mismatch(2.0).unwrap();
    let exact = (r.kprime_d1 - 1.0).abs() < 1e-12 && (r.kprime_d2 - 1.25).abs() < 1e-12;

    let d = [0.5, 0.5];
    let a = [1.0, -1.0];
    let degenerate = kprime_commutative(&d, &a, &a, 1.0).unwrap();
    let pass = exact && degenerate == 0.0;
    gate(
        10,
        "norm-derived form is not a monotone metric",
        pass,
        &format!(
            "K'(D1,D1) = {} vs 1, K'(D2,D2) = {} vs 5/4 (to 1e-12); p=1 degeneracy K'(A,A) = \
             {degenerate} at A = diag(1,-1)",
            r.kprime_d1, r.kprime_d2
        ),
    );
}

#[test]
fn gate_11_determinism() {
    // Identical seeds and configuration reproduce reports byte for byte.
    let mut params = TripleParams::with_identity(0.25, 0.25, 2.0, 3);
    let mut rng = sample::stream_rng(42, u64::MAX);
    params.k1 = sample::ginibre(3, &mut rng);
    params.k2 = sample::ginibre(3, &mut rng);
    let r1 = certify_joint_convexity(&params, 3, 100, 1111).unwrap();
    let r2 = certify_joint_convexity(&params, 3, 100, 1111).unwrap();
    let cert_equal =
        serde_json::to_string(&r1).unwrap() == serde_json::to_string(&r2).unwrap();

    let w1 = certify::search_nonconcavity(0.3, 3.0, &[2], 20_000, 1111).unwrap();
    let w2 = certify::search_nonconcavity(0.3, 3.0, &[2], 20_000, 1111).unwrap();
    let search_equal =
        serde_json::to_string(&w1).unwrap() == serde_json::to_string(&w2).unwrap();

    let m1 = metrics::norm_metric_mismatch(2.0).unwrap();
    let m2 = metrics::norm_metric_mismatch(2.0).unwrap();
    let metrics_equal =
        serde_json::to_string(&m1).unwrap() == serde_json::to_string(&m2).unwrap();

    let pass = cert_equal && search_equal && metrics_equal;
    gate(
        11,
        "byte-identical reports",
        pass,
        &format!("cert {cert_equal}, search {search_equal}, metrics {metrics_equal}"),
    );
}
