//! Finite atomic measures representing `f''` through
//! `f''(x) = c + sum_i w_i (t_i + 1)/(t_i + x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Atomic representation of a positive measure on [0, infinity) plus a
/// constant part. Atoms are pairs `(t_i, w_i)` with `t_i >= 0`, `w_i > 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomicMeasure {
    pub c: f64,
    pub atoms: Vec<(f64, f64)>,
}

impl AtomicMeasure {
    pub fn new(c: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        if c < 0.0 {
            return Err(Error::BadFunction("constant part must be >= 0".into()));
        }
        for &(t, w) in &atoms {
            if t < 0.0 || w <= 0.0 {
                return Err(Error::BadFunction(format!("bad atom ({t}, {w})")));
            }
        }
        let m = Self { c, atoms };
        // Represented g must be positive and non-increasing on (0, inf);
        // true by construction, confirmed on a log grid.
        let mut prev = f64::INFINITY;
        for k in 0..=60 {
            let x = 10f64.powf(-3.0 + 6.0 * (k as f64) / 60.0);
            let g = m.f_second(x);
            if g <= 0.0 && !(m.c == 0.0 && m.atoms.is_empty()) {
                return Err(Error::BadFunction(format!("g({x}) = {g} not positive")));
            }
            if g > prev * (1.0 + 1e-12) {
                return Err(Error::BadFunction(format!("g not decreasing at {x}")));
            }
            prev = g;
        }
        Ok(m)
    }

    /// The measure whose represented second derivative is 1/x, i.e.
    /// f(x) = x ln x: a single atom at t = 0 with weight 1.
    pub fn x_log_x() -> Self {
        Self {
            c: 0.0,
            atoms: vec![(0.0, 1.0)],
        }
    }

    /// Represented second derivative `c + sum w (t+1)/(t+x)`.
    pub fn f_second(&self, x: f64) -> f64 {
        self.c
            + self
                .atoms
                .iter()
                .map(|&(t, w)| w * (t + 1.0) / (t + x))
                .sum::<f64>()
    }

    /// The kernel `f'^[1](x, y) = c + sum w (t+1) g_t^[1](x, y)` with
    /// `g_t(x, y) = ln(x+t) - ln(y+t)`.
    pub fn deriv_diff_quotient(&self) -> impl Fn(f64, f64) -> f64 + '_ {
        move |x: f64, y: f64| -> f64 {
            let mut total = self.c;
            for &(t, w) in &self.atoms {
                let dq = if (x - y).abs() <= 1e-6 * x.abs().max(y.abs()).max(1.0) {
                    1.0 / (0.5 * (x + y) + t)
                } else {
                    ((x - y) / (y + t)).ln_1p() / (x - y)
                };
                total += w * (t + 1.0) * dq;
            }
            total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_log_x_second_derivative() {
        let m = AtomicMeasure::x_log_x();
        for &x in &[0.01, 0.5, 1.0, 7.0, 500.0] {
            assert!((m.f_second(x) - 1.0 / x).abs() < 1e-12 / x);
        }
    }

    #[test]
    fn kernel_matches_log_difference() {
        let m = AtomicMeasure::x_log_x();
        let k = m.deriv_diff_quotient();
        // For f = x ln x: f'^[1](x,y) = (ln x - ln y)/(x - y).
        let (x, y) = (3.0f64, 0.7f64);
        let expect = (x.ln() - y.ln()) / (x - y);
        assert!((k(x, y) - expect).abs() < 1e-12);
        assert!((k(2.0, 2.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_atoms() {
        assert!(AtomicMeasure::new(-1.0, vec![]).is_err());
        assert!(AtomicMeasure::new(0.0, vec![(-1.0, 1.0)]).is_err());
        assert!(AtomicMeasure::new(0.0, vec![(1.0, 0.0)]).is_err());
        assert!(AtomicMeasure::new(0.5, vec![(2.0, 1.5), (0.0, 0.1)]).is_ok());
    }
}
