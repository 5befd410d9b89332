//! Loss terms of the pump objective and their gradients.
//!
//! The total loss is `alpha*C + beta*f + lambda*g + gamma*Omega` with
//! `C = c'x`, `f = sum min(x, 1-x)^p` over binaries, `g` the averaged
//! row-normalized violation of the (soft-)rounded point and
//! `Omega = ||theta||^2 / 2` over binary coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::model::{MilpInstance, Point, DEFAULT_TOL};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub gamma: f64,
    /// Integrality loss order.
    pub p: f64,
    /// Soft-rounding scale.
    pub eps_round: f64,
    /// Slack deadband of the feasibility loss.
    pub eps_feas: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            beta: 1.0,
            lambda: 0.0,
            gamma: 1.0,
            p: 1.0,
            eps_round: 0.15,
            eps_feas: DEFAULT_TOL,
        }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("lambda", self.lambda),
            ("gamma", self.gamma),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("p", self.p),
            ("eps_round", self.eps_round),
            ("eps_feas", self.eps_feas),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub cost_term: f64,
    pub integrality_term: f64,
    pub feasibility_term: f64,
    pub regularization_term: f64,
    pub total: f64,
}

/// Standard normal CDF.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * std::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// `1` iff `x > 0.5`; exactly `0.5` rounds down.
pub fn hard_round(x: f64) -> f64 {
    if x > 0.5 {
        1.0
    } else {
        0.0
    }
}

/// `Phi((x - 0.5) / eps)`, the expectation of `hard_round(x + eps*Z)`.
pub fn soft_round(x: f64, eps_round: f64) -> f64 {
    std_normal_cdf((x - 0.5) / eps_round)
}

pub fn soft_round_grad(x: f64, eps_round: f64) -> f64 {
    std_normal_pdf((0.5 - x) / eps_round) / eps_round
}

/// Hard-rounds binary coordinates; continuous ones are copied.
pub fn hard_round_point(inst: &MilpInstance, x: &[f64]) -> Result<Point> {
    check_len(inst.num_vars(), x.len())?;
    let mut out = x.to_vec();
    for &i in inst.binaries() {
        out[i] = hard_round(x[i]);
    }
    Point::new(out)
}

/// Soft-rounds binary coordinates; continuous ones are copied.
pub fn soft_round_point(inst: &MilpInstance, x: &[f64], eps_round: f64) -> Result<Point> {
    check_len(inst.num_vars(), x.len())?;
    let mut out = x.to_vec();
    for &i in inst.binaries() {
        out[i] = soft_round(x[i], eps_round);
    }
    Point::new(out)
}

pub fn integrality_loss(inst: &MilpInstance, x: &[f64], p: f64) -> Result<f64> {
    check_len(inst.num_vars(), x.len())?;
    Ok(inst
        .binaries()
        .iter()
        .map(|&i| {
            let v = x[i].clamp(0.0, 1.0);
            v.min(1.0 - v).powf(p)
        })
        .sum())
}

/// Termwise derivative of [`integrality_loss`]; `x = 0.5` takes the lower branch.
///
/// For `p < 1` the derivative is infinite at `0` and `1`; 0 is returned there.
pub fn integrality_grad(inst: &MilpInstance, x: &[f64], p: f64) -> Result<Point> {
    check_len(inst.num_vars(), x.len())?;
    let mut g = vec![0.0; x.len()];
    for &i in inst.binaries() {
        let v = x[i].clamp(0.0, 1.0);
        let (dist, sign) = if v > 0.5 { (1.0 - v, -1.0) } else { (v, 1.0) };
        g[i] = if p == 1.0 {
            sign
        } else if dist == 0.0 && p < 1.0 {
            0.0
        } else {
            sign * p * dist.powf(p - 1.0)
        };
    }
    Ok(Point::from_vec_unchecked(g))
}

/// `(b_j - A_j x) / ||[A_j b_j]||`; positive iff row `j` is violated.
pub fn slack(inst: &MilpInstance, x: &[f64], j: usize) -> f64 {
    inst.normalized_slack(j, x)
}

/// `(1/m) sum_j max(s_j(x) - eps_feas, 0)`; 0 when there are no rows.
pub fn feasibility_loss(inst: &MilpInstance, x_round: &[f64], eps_feas: f64) -> Result<f64> {
    check_len(inst.num_vars(), x_round.len())?;
    let m = inst.num_cons();
    if m == 0 {
        return Ok(0.0);
    }
    let sum: f64 = (0..m)
        .map(|j| (slack(inst, x_round, j) - eps_feas).max(0.0))
        .sum();
    Ok(sum / m as f64)
}

/// Gradient of [`feasibility_loss`] with respect to the rounded point.
pub fn feasibility_grad_wrt_round(
    inst: &MilpInstance,
    x_round: &[f64],
    eps_feas: f64,
) -> Result<Point> {
    check_len(inst.num_vars(), x_round.len())?;
    let m = inst.num_cons();
    let mut g = vec![0.0; x_round.len()];
    for j in 0..m {
        if slack(inst, x_round, j) > eps_feas {
            let scale = 1.0 / (inst.row_norms()[j] * m as f64);
            for (i, a) in inst.row(j).iter() {
                g[i] -= a * scale;
            }
        }
    }
    Ok(Point::from_vec_unchecked(g))
}

pub fn cost_term(inst: &MilpInstance, x_hat: &[f64]) -> Result<f64> {
    check_len(inst.num_vars(), x_hat.len())?;
    Ok(inst.objective_value(x_hat))
}

/// `||theta||^2 / 2` and its gradient `theta`.
pub fn regularization(theta: &[f64]) -> (f64, Point) {
    let value = 0.5 * theta.iter().map(|t| t * t).sum::<f64>();
    (value, Point::from_vec_unchecked(theta.to_vec()))
}

/// [`regularization`] restricted to binary coordinates, the only ones the pump moves.
pub fn binary_regularization(inst: &MilpInstance, theta: &[f64]) -> Result<(f64, Point)> {
    check_len(inst.num_vars(), theta.len())?;
    let mut masked = vec![0.0; theta.len()];
    for &i in inst.binaries() {
        masked[i] = theta[i];
    }
    Ok(regularization(&masked))
}

/// All four terms of the loss. The feasibility term is evaluated at the soft-rounded point.
pub fn evaluate_loss(
    inst: &MilpInstance,
    theta: &[f64],
    x_hat: &[f64],
    x_round_soft: &[f64],
    w: &LossWeights,
) -> Result<LossBreakdown> {
    let cost_term = cost_term(inst, x_hat)?;
    let integrality_term = integrality_loss(inst, x_hat, w.p)?;
    let feasibility_term = feasibility_loss(inst, x_round_soft, w.eps_feas)?;
    let (regularization_term, _) = binary_regularization(inst, theta)?;
    let total = w.alpha * cost_term
        + w.beta * integrality_term
        + w.lambda * feasibility_term
        + w.gamma * regularization_term;
    Ok(LossBreakdown {
        cost_term,
        integrality_term,
        feasibility_term,
        regularization_term,
        total,
    })
}
