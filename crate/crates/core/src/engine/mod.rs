//! The pump loops: the original feasibility pump and the differentiable pump.

mod config;
mod optimizer;
mod original;
mod pump;
mod restart;

pub use config::{make_preset, PumpConfig, RestartPolicy, PRESET_NAMES};
pub use optimizer::{optimizer_step, Optimizer, OptimizerState};
pub use original::{run_original_fp, run_original_fp_with};
pub use pump::run_differentiable_pump;
pub use restart::{apply_restart, detect_cycle, CycleKind};

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::losses::LossBreakdown;
use crate::model::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RestartEvent {
    None,
    /// Number of negated coordinates.
    Flip(usize),
    Perturb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    /// Cost vector the relaxation was solved with.
    pub theta: Vec<f64>,
    pub x_hat: Point,
    pub x_round: Point,
    pub loss: Option<LossBreakdown>,
    pub restart: RestartEvent,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PumpTrace {
    pub records: Vec<IterationRecord>,
}

impl PumpTrace {
    pub fn restarts(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.restart != RestartEvent::None)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PumpStatus {
    Found { solution: Point, objective: f64 },
    IterationLimit,
    LpInfeasible,
}

impl PumpStatus {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Found { .. } => "Found",
            Self::IterationLimit => "IterationLimit",
            Self::LpInfeasible => "LpInfeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PumpResult {
    pub status: PumpStatus,
    /// Number of LP relaxation solves on the main path (perturbed Jacobian solves excluded).
    pub iterations: usize,
    pub restarts: usize,
    pub wall_time: Duration,
    pub trace: Option<PumpTrace>,
}

impl PumpResult {
    /// Fraction of iterations that ended with a restart.
    pub fn restart_ratio(&self) -> f64 {
        if self.iterations == 0 {
            0.0
        } else {
            self.restarts as f64 / self.iterations as f64
        }
    }
}
