//! Numerical laboratory for trace functionals of the form
//! `Tr |B^{-p} K1 A K2 C^{-q}|^s`: evaluation, variational formulas with
//! exact saturators, quantum-channel monotonicity certification,
//! derivative-free counterexample search, and the superoperator calculus of
//! monotone metrics.
//!
//! The crate is organized as:
//!
//! - [`linalg`]: self-contained dense complex linear algebra,
//! - [`functionals`]: the trace functionals as pure functions,
//! - [`variational`]: max/min variational formulas and their saturators,
//! - [`channels`]: Kraus channels (unital and not),
//! - [`certify`]: randomized certification and counterexample search,
//! - [`metrics`]: superoperators, monotone metrics, integral representations.

#![forbid(unsafe_code)]

pub mod channels;
pub mod certify;
pub mod error;
pub mod functionals;
pub mod linalg;
pub mod metrics;
pub mod sample;
pub mod variational;

pub use error::{Error, Result};
