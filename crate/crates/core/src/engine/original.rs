//! The original feasibility pump, written against `x_round` rather than `theta`.
//!
//! This is the reference the differentiable pump is checked against, so it
//! deliberately avoids the loss and gradient machinery: the LP objective is the
//! Hamming distance to the current target, and restarts flip target entries.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::RestartPolicy;
use super::pump::at_iteration;
use super::restart::{by_fractionality, detect_cycle, draw_flip_count, CycleKind};
use super::{IterationRecord, PumpResult, PumpStatus, PumpTrace, RestartEvent};
use crate::error::{Error, Result};
use crate::model::{MilpInstance, Point};
use crate::simplex::{solve_relaxation, CostVector, LpStatus};

/// [`run_original_fp_with`] under the default restart policy.
pub fn run_original_fp(
    inst: &MilpInstance,
    n_max: usize,
    seed: u64,
    tol: f64,
) -> Result<PumpResult> {
    run_original_fp_with(inst, n_max, seed, tol, &RestartPolicy::default())
}

/// Runs the original pump for at most `n_max` LP solves. Always records a trace.
///
/// The random draws (one per flip, one per binary coordinate per perturbation)
/// are taken in the same order as in the differentiable pump, so both produce
/// identical iterates under the `FP` preset and the same seed.
pub fn run_original_fp_with(
    inst: &MilpInstance,
    n_max: usize,
    seed: u64,
    tol: f64,
    policy: &RestartPolicy,
) -> Result<PumpResult> {
    if n_max == 0 {
        return Err(Error::Config("n_max must be >= 1".into()));
    }
    policy.validate()?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let binaries = inst.binaries();
    let mut theta = inst.objective().to_vec();
    let mut basis = None;
    let mut history: Vec<Vec<bool>> = Vec::new();
    let mut trace = PumpTrace::default();
    let mut restarts = 0;

    let done = |status, trace: PumpTrace, restarts| PumpResult {
        status,
        iterations: trace.records.len(),
        restarts,
        wall_time: start.elapsed(),
        trace: Some(trace),
    };

    for k in 0..n_max {
        let sol = solve_relaxation(inst, &CostVector::new(theta.clone())?, basis.as_ref())
            .map_err(at_iteration(k))?;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Ok(done(PumpStatus::LpInfeasible, trace, restarts)),
            LpStatus::Unbounded => {
                return Err(Error::SolverNumeric(format!(
                    "iteration {k}: unbounded relaxation"
                )))
            }
        }
        basis = sol.basis.clone();
        let x_hat = sol.x_hat.values();

        // An integral x_hat rounds to itself, so the integrality exit is
        // subsumed by the feasibility test on the rounded point.
        let mut x_round = x_hat.to_vec();
        for &i in binaries {
            x_round[i] = if x_hat[i] > 0.5 { 1.0 } else { 0.0 };
        }
        let mut record = IterationRecord {
            k,
            theta: theta.clone(),
            x_hat: sol.x_hat.clone(),
            x_round: Point::new(x_round.clone())?,
            loss: None,
            restart: RestartEvent::None,
        };
        if inst.is_feasible(&x_round, tol)? {
            trace.records.push(record);
            let objective = inst.objective_value(&x_round);
            let status = PumpStatus::Found {
                solution: Point::new(x_round)?,
                objective,
            };
            return Ok(done(status, trace, restarts));
        }
        if k + 1 == n_max {
            trace.records.push(record);
            break;
        }

        let mut target: Vec<bool> = binaries.iter().map(|&i| x_round[i] == 1.0).collect();
        history.push(target.clone());
        match detect_cycle(&history, policy.history_window) {
            CycleKind::None => {}
            CycleKind::LengthOne => {
                let t = draw_flip_count(policy, &mut rng);
                let order = by_fractionality(inst, x_hat, &x_round);
                let count = t.min(order.len());
                for &i in &order[..count] {
                    let pos = binaries.binary_search(&i).expect("binary index");
                    target[pos] = !target[pos];
                }
                record.restart = RestartEvent::Flip(count);
            }
            CycleKind::LongCycle => {
                for (pos, &i) in binaries.iter().enumerate() {
                    let rho: f64 =
                        rand::Rng::random_range(&mut rng, policy.perturb_lo..policy.perturb_hi);
                    if (x_hat[i] - x_round[i]).abs() + rho.max(0.0) > 0.5 {
                        target[pos] = !target[pos];
                    }
                }
                record.restart = RestartEvent::Perturb;
            }
        }
        if record.restart != RestartEvent::None {
            restarts += 1;
        }
        trace.records.push(record);

        // Hamming distance to the target: +x_i where the target is 0, (1 - x_i) where it is 1.
        for (pos, &i) in binaries.iter().enumerate() {
            theta[i] = if target[pos] { -1.0 } else { 1.0 };
        }
    }
    Ok(done(PumpStatus::IterationLimit, trace, restarts))
}
