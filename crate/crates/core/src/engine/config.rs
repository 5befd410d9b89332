use serde::{Deserialize, Serialize};

use super::optimizer::Optimizer;
use crate::diffopt::JacobianMode;
use crate::error::{Error, Result};
use crate::losses::LossWeights;
use crate::model::DEFAULT_TOL;

pub const PRESET_NAMES: [&str; 5] = ["FP", "DP1", "DP2", "DP3", "DP4"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestartPolicy {
    /// Flips draw uniformly from `[T/2, 3T/2]` coordinates.
    pub flip_t: usize,
    pub perturb_lo: f64,
    pub perturb_hi: f64,
    /// How many previous rounded points are searched for a revisit.
    pub history_window: usize,
}

impl Default for RestartPolicy {
    fn default() -> Self {
        Self {
            flip_t: 20,
            perturb_lo: -0.3,
            perturb_hi: 0.7,
            history_window: 100,
        }
    }
}

impl RestartPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.flip_t == 0 {
            return Err(Error::Config("flip_T must be >= 1".into()));
        }
        if self.perturb_lo >= self.perturb_hi
            || !self.perturb_lo.is_finite()
            || !self.perturb_hi.is_finite()
        {
            return Err(Error::Config(format!(
                "perturbation range [{}, {}] is empty",
                self.perturb_lo, self.perturb_hi
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpConfig {
    pub weights: LossWeights,
    pub eta: f64,
    pub jacobian: JacobianMode,
    pub optimizer: Optimizer,
    pub n_max: usize,
    pub seed: u64,
    pub restart: RestartPolicy,
    pub tol: f64,
    pub preset_name: Option<String>,
    /// Keep a per-iteration trace in the result.
    pub record_trace: bool,
}

impl Default for PumpConfig {
    /// The `FP` preset.
    fn default() -> Self {
        Self {
            weights: LossWeights::default(),
            eta: 1.0,
            jacobian: JacobianMode::MinusIdentity,
            optimizer: Optimizer::Plain,
            n_max: 1000,
            seed: 0,
            restart: RestartPolicy::default(),
            tol: DEFAULT_TOL,
            preset_name: None,
            record_trace: false,
        }
    }
}

impl PumpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::Config(format!("eta must be > 0, got {}", self.eta)));
        }
        if self.n_max == 0 {
            return Err(Error::Config("n_max must be >= 1".into()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::Config(format!("tol must be >= 0, got {}", self.tol)));
        }
        self.weights.validate()?;
        self.jacobian.validate()?;
        self.optimizer.validate()?;
        self.restart.validate()
    }
}

/// Hyperparameters of the named preset: `FP`, `DP1`, `DP2`, `DP3` or `DP4` (case-insensitive).
pub fn make_preset(name: &str) -> Result<PumpConfig> {
    // (eta, beta, lambda, gamma, p)
    let (eta, beta, lambda, gamma, p) = match name.to_ascii_uppercase().as_str() {
        "FP" => (1.0, 1.0, 0.0, 1.0, 1.0),
        "DP1" => (1.0, 1.0, 0.0, 0.95, 1.0),
        "DP2" => (0.8, 1.0, 0.0, 0.1, 2.0),
        // No integrality term; p is irrelevant and kept at 1.
        "DP3" => (0.3, 0.0, 1.0, 1.0, 1.0),
        "DP4" => (0.6, 10.0, 1e-3, 0.1, 2.0),
        _ => {
            return Err(Error::Config(format!(
                "unknown preset '{name}' (valid: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    let base = PumpConfig::default();
    Ok(PumpConfig {
        weights: LossWeights {
            alpha: 0.0,
            beta,
            lambda,
            gamma,
            p,
            ..base.weights
        },
        eta,
        preset_name: Some(name.to_ascii_uppercase()),
        ..base
    })
}
