//! Catalog of scalar functions with first and second derivatives, used as
//! kernels of the superoperator calculus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar functions addressable by string id in run configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarFn {
    /// x^a
    Power(f64),
    /// ln x
    Log,
    /// e^x
    Exp,
    /// x ln x
    XLogX,
    /// (x - 1)/ln x with value 1 at x = 1; the logarithmic mean of (x, 1).
    LogMean,
}

impl ScalarFn {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ScalarFn::Power(a) => x.powf(*a),
            ScalarFn::Log => x.ln(),
            ScalarFn::Exp => x.exp(),
            ScalarFn::XLogX => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            ScalarFn::LogMean => {
                let u = x - 1.0;
                if u == 0.0 {
                    1.0
                } else {
                    // u / ln(1+u) is cancellation-free.
                    u / u.ln_1p()
                }
            }
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            ScalarFn::Power(a) => a * x.powf(a - 1.0),
            ScalarFn::Log => 1.0 / x,
            ScalarFn::Exp => x.exp(),
            ScalarFn::XLogX => x.ln() + 1.0,
            ScalarFn::LogMean => {
                let u = x - 1.0;
                if u.abs() < 1e-4 {
                    // Series of ((x-1)/ln x)' around 1.
                    0.5 - u / 6.0 + u * u / 8.0 - 19.0 * u * u * u / 180.0
                } else {
                    let l = u.ln_1p();
                    (l - u / x) / (l * l)
                }
            }
        }
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        match self {
            ScalarFn::Power(a) => a * (a - 1.0) * x.powf(a - 2.0),
            ScalarFn::Log => -1.0 / (x * x),
            ScalarFn::Exp => x.exp(),
            ScalarFn::XLogX => 1.0 / x,
            ScalarFn::LogMean => {
                let u = x - 1.0;
                if u.abs() < 1e-4 {
                    -1.0 / 6.0 + u / 4.0 - 19.0 * u * u / 60.0
                } else {
                    // h' = n / l^2 with n = l - u/x, l = ln x; quotient rule
                    // with n' = 1/x - 1/x^2 and l' = 1/x gives
                    // h'' = (n' l - 2 n / x) / l^3.
                    let l = u.ln_1p();
                    let n = l - u / x;
                    let np = 1.0 / x - 1.0 / (x * x);
                    (np * l - 2.0 * n / x) / (l * l * l)
                }
            }
        }
    }

    /// Membership in the operator-monotone catalog used by metric
    /// monotonicity checks: x^a for a in (0, 1], and the logarithmic mean.
    pub fn is_operator_monotone(&self) -> bool {
        match self {
            ScalarFn::Power(a) => *a > 0.0 && *a <= 1.0,
            ScalarFn::LogMean => true,
            _ => false,
        }
    }

    pub fn id(&self) -> String {
        match self {
            ScalarFn::Power(a) => format!("power:{a}"),
            ScalarFn::Log => "log".into(),
            ScalarFn::Exp => "exp".into(),
            ScalarFn::XLogX => "xlogx".into(),
            ScalarFn::LogMean => "logmean".into(),
        }
    }

    pub fn parse(id: &str) -> Result<Self> {
        if let Some(rest) = id.strip_prefix("power:") {
            let a: f64 = rest
                .parse()
                .map_err(|_| Error::BadFunction(format!("bad exponent in {id}")))?;
            return Ok(ScalarFn::Power(a));
        }
        match id {
            "log" => Ok(ScalarFn::Log),
            "exp" => Ok(ScalarFn::Exp),
            "xlogx" => Ok(ScalarFn::XLogX),
            "logmean" | "h" => Ok(ScalarFn::LogMean),
            _ => Err(Error::BadFunction(format!("unknown scalar function {id}"))),
        }
    }
}

/// Difference quotient `g^[1](s,t) = (g(s)-g(t))/(s-t)`, with the derivative
/// branch below a relative gap of 1e-6 and `g'(s)` exactly on the diagonal.
pub fn diff_quotient(g: ScalarFn) -> impl Fn(f64, f64) -> f64 {
    move |s: f64, t: f64| -> f64 {
        if s == t {
            g.deriv(s)
        } else if (s - t).abs() <= 1e-6 * s.abs().max(t.abs()).max(1.0) {
            g.deriv(0.5 * (s + t))
        } else {
            (g.eval(s) - g.eval(t)) / (s - t)
        }
    }
}

/// Difference quotient of the derivative, `f'^[1]`; the kernel of the trace
/// Hessian.
pub fn deriv_diff_quotient(f: ScalarFn) -> impl Fn(f64, f64) -> f64 {
    move |s: f64, t: f64| -> f64 {
        if s == t {
            f.second_deriv(s)
        } else if (s - t).abs() <= 1e-6 * s.abs().max(t.abs()).max(1.0) {
            f.second_deriv(0.5 * (s + t))
        } else {
            (f.deriv(s) - f.deriv(t)) / (s - t)
        }
    }
}
