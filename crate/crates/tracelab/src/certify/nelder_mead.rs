//! Minimal downhill-simplex (Nelder-Mead) minimizer over flat real parameter
//! vectors. Derivative-free, which keeps it robust to the |.|^s kinks of the
//! objectives searched here.

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fmin: f64,
    pub evaluations: u64,
    pub converged: bool,
}

/// Minimize `f` starting from `x0` with initial simplex step `step`.
///
/// Stops on simplex collapse, after `max_iters` iterations, when the
/// evaluation budget runs out, or as soon as `fmin <= target`.
pub fn minimize(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_iters: usize,
    max_evals: u64,
    target: Option<f64>,
) -> NelderMeadResult {
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink
    const F_TOL: f64 = 1e-12;

    let dim = x0.len();
    let mut evals: u64 = 0;
    let mut eval = |x: &[f64], evals: &mut u64| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += if v[i].abs() > 1e-8 { step * v[i].abs() } else { step };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let hit_target = |v: f64| target.is_some_and(|t| v <= t);

    let mut iters = 0;
    let mut converged = false;
    loop {
        // Order ascending by value.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
        let reorder: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reorder;
        values = revalues;

        if hit_target(values[0]) {
            converged = true;
            break;
        }
        let spread = values[dim] - values[0];
        if spread <= F_TOL * (values[0].abs() + 1e-12) {
            converged = true;
            break;
        }
        if iters >= max_iters || evals >= max_evals {
            break;
        }
        iters += 1;

        // Centroid of all but the worst.
        let mut centroid = vec![0.0; dim];
        for v in simplex.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }

        let worst = simplex[dim].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let f_reflect = eval(&reflect, &mut evals);

        if f_reflect < values[0] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + GAMMA * ALPHA * (c - w))
                .collect();
            let f_expand = eval(&expand, &mut evals);
            if f_expand < f_reflect {
                simplex[dim] = expand;
                values[dim] = f_expand;
            } else {
                simplex[dim] = reflect;
                values[dim] = f_reflect;
            }
        } else if f_reflect < values[dim - 1] {
            simplex[dim] = reflect;
            values[dim] = f_reflect;
        } else {
            // Contraction toward the better of worst/reflected.
            let (base, f_base) = if f_reflect < values[dim] {
                (&reflect, f_reflect)
            } else {
                (&worst, values[dim])
            };
            let contract: Vec<f64> = centroid
                .iter()
                .zip(base)
                .map(|(c, b)| c + RHO * (b - c))
                .collect();
            let f_contract = eval(&contract, &mut evals);
            if f_contract < f_base {
                simplex[dim] = contract;
                values[dim] = f_contract;
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].clone();
                for i in 1..=dim {
                    for (x, b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + SIGMA * (*x - b);
                    }
                    values[i] = eval(&simplex[i].clone(), &mut evals);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if values[i] < values[best] {
            best = i;
        }
    }
    NelderMeadResult {
        x: simplex[best].clone(),
        fmin: values[best],
        evaluations: evals,
        converged,
    }
}
