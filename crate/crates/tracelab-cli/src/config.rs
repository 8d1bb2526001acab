//! Run configuration: everything a command needs, fully serializable so that
//! replaying a config reproduces every report byte for byte.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use tracelab::certify::ChannelSampler;
use tracelab::linalg::ComplexMatrix;
use tracelab::metrics::AtomicMeasure;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Target of the subcommand: functional, claim, search, suite or demo id.
    pub target: Option<String>,
    pub seed: u64,
    pub trials: u64,
    pub budget: u64,
    pub dim: usize,
    /// Dimension escalation list for searches; defaults to [2, 3, 4].
    pub dims: Option<Vec<usize>>,
    /// Verdict tolerance override (relative); defaults to the built-in 1e-7.
    pub tol: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub s: Option<f64>,
    pub q2: Option<f64>,
    pub r2: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Scalar function id ("power:0.5", "logmean", "xlogx", ...).
    pub function: Option<String>,
    /// Channel sampler: "identity", "unitary", or "mixed".
    pub channel: Option<String>,
    pub measure: Option<AtomicMeasure>,
    /// Named matrix inputs for eval commands.
    pub matrices: BTreeMap<String, ComplexMatrix>,
    /// Report destination; stdout when absent.
    pub out: Option<PathBuf>,
    /// Optional CSV destination for per-trial gap histograms.
    pub csv: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            target: None,
            seed: 0,
            trials: 1000,
            budget: 100_000,
            dim: 3,
            dims: None,
            tol: None,
            p: None,
            q: None,
            s: None,
            q2: None,
            r2: None,
            alpha: None,
            beta: None,
            function: None,
            channel: None,
            measure: None,
            matrices: BTreeMap::new(),
            out: None,
            csv: None,
        }
    }
}

impl RunConfig {
    pub fn sampler(&self) -> Result<ChannelSampler, String> {
        match self.channel.as_deref() {
            None | Some("mixed") => Ok(ChannelSampler::MixedUnitary {
                min_terms: 2,
                max_terms: 6,
            }),
            Some("identity") => Ok(ChannelSampler::Identity),
            Some("unitary") => Ok(ChannelSampler::UnitaryConjugation),
            Some(other) => Err(format!("unknown channel sampler '{other}'")),
        }
    }

    pub fn matrix(&self, name: &str) -> Result<&ComplexMatrix, String> {
        self.matrices
            .get(name)
            .ok_or_else(|| format!("missing matrix '{name}' in config"))
    }

    pub fn scalar(&self, name: &str, v: Option<f64>) -> Result<f64, String> {
        v.ok_or_else(|| format!("missing parameter '{name}'"))
    }

    pub fn search_dims(&self) -> Vec<usize> {
        self.dims.clone().unwrap_or_else(|| vec![2, 3, 4])
    }
}
