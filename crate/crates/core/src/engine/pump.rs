use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::PumpConfig;
use super::optimizer::{optimizer_step, Optimizer, OptimizerState};
use super::restart::{apply_restart, detect_cycle};
use super::{IterationRecord, PumpResult, PumpStatus, PumpTrace, RestartEvent};
use crate::diffopt::{full_gradient, GradReport};
use crate::error::{Error, Result};
use crate::losses::{evaluate_loss, hard_round_point, soft_round_point};
use crate::model::MilpInstance;
use crate::simplex::{solve_relaxation, CostVector, LpStatus};

/// Stream of the ChaCha generator reserved for Jacobian sampling; restarts use stream 0.
pub(super) const JACOBIAN_STREAM: u64 = 1;

pub(super) fn at_iteration(k: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::SolverNumeric(msg) => Error::SolverNumeric(format!("iteration {k}: {msg}")),
        other => other,
    }
}

/// Plain gradient step with the regularization term applied multiplicatively:
/// `theta' = (1 - eta*gamma) theta - eta * (data gradient)`.
///
/// Equal to `theta - eta * grad` in exact arithmetic; with `eta*gamma = 1` the
/// old cost vector cancels exactly in floating point too.
fn plain_step(
    theta: &[f64],
    report: &GradReport,
    eta: f64,
    gamma: f64,
    active: &[usize],
) -> Vec<f64> {
    let t = &report.term_grads;
    let keep = 1.0 - eta * gamma;
    let mut next = theta.to_vec();
    for &i in active {
        let data = t.cost[i] + t.integrality[i] + t.feasibility[i];
        next[i] = keep * theta[i] - eta * data;
    }
    next
}

/// The differentiable pump: LP solve, hard rounding, gradient step on `theta`,
/// and a restart whenever the rounded point cycles.
///
/// Deterministic for a fixed `(inst, cfg)`.
pub fn run_differentiable_pump(inst: &MilpInstance, cfg: &PumpConfig) -> Result<PumpResult> {
    cfg.validate()?;
    let start = Instant::now();
    let w = &cfg.weights;
    let binaries = inst.binaries();
    let mut restart_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut jacobian_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    jacobian_rng.set_stream(JACOBIAN_STREAM);
    let mut optimizer = OptimizerState::new(cfg.optimizer, inst.num_vars());

    let mut theta = inst.objective().to_vec();
    let mut basis = None;
    let mut history: Vec<Vec<bool>> = Vec::new();
    let mut trace = PumpTrace::default();
    let mut restarts = 0;
    let mut iterations = 0;

    let finish = |status, iterations, restarts, trace: PumpTrace| PumpResult {
        status,
        iterations,
        restarts,
        wall_time: start.elapsed(),
        trace: cfg.record_trace.then_some(trace),
    };

    for k in 0..cfg.n_max {
        let cost = CostVector::new(theta.clone())?;
        let sol = solve_relaxation(inst, &cost, basis.as_ref()).map_err(at_iteration(k))?;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => {
                return Ok(finish(
                    PumpStatus::LpInfeasible,
                    iterations,
                    restarts,
                    trace,
                ))
            }
            LpStatus::Unbounded => {
                return Err(Error::SolverNumeric(format!(
                    "iteration {k}: unbounded relaxation"
                )))
            }
        }
        iterations += 1;
        basis = sol.basis.clone();
        let x_hat = sol.x_hat.values();
        let x_round = hard_round_point(inst, x_hat)?;
        let soft = soft_round_point(inst, x_hat, w.eps_round)?;
        let loss = evaluate_loss(inst, &theta, x_hat, &soft, w)?;
        let mut record = IterationRecord {
            k,
            theta: theta.clone(),
            x_hat: sol.x_hat.clone(),
            x_round: x_round.clone(),
            loss: Some(loss),
            restart: RestartEvent::None,
        };

        if inst.is_feasible(&x_round, cfg.tol)? && inst.is_integral(&x_round, cfg.tol)? {
            let objective = inst.objective_value(&x_round);
            if cfg.record_trace {
                trace.records.push(record);
            }
            let status = PumpStatus::Found {
                solution: x_round,
                objective,
            };
            return Ok(finish(status, iterations, restarts, trace));
        }
        if k + 1 == cfg.n_max {
            if cfg.record_trace {
                trace.records.push(record);
            }
            break;
        }

        let report = full_gradient(inst, &cost, &sol, w, cfg.jacobian, &mut jacobian_rng)
            .map_err(at_iteration(k))?;
        let next = match cfg.optimizer {
            Optimizer::Plain => plain_step(&theta, &report, cfg.eta, w.gamma, binaries),
            _ => optimizer_step(&mut optimizer, &theta, &report.grad, cfg.eta, binaries),
        };

        history.push(binaries.iter().map(|&i| x_round[i] == 1.0).collect());
        let cycle = detect_cycle(&history, cfg.restart.history_window);
        let (next, event) = apply_restart(
            inst,
            cycle,
            &next,
            x_hat,
            &x_round,
            &cfg.restart,
            &mut restart_rng,
        );
        if event != RestartEvent::None {
            restarts += 1;
        }
        record.restart = event;
        if cfg.record_trace {
            trace.records.push(record);
        }
        theta = next;
    }
    Ok(finish(
        PumpStatus::IterationLimit,
        iterations,
        restarts,
        trace,
    ))
}
