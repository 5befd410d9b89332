//! Surrogate Jacobians of the LP argmin and the chain-rule gradient of the loss.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::losses::{
    feasibility_grad_wrt_round, integrality_grad, soft_round_grad, soft_round_point, LossWeights,
};
use crate::model::{MilpInstance, Point};
use crate::simplex::{solve_relaxation, Basis, CostVector, LpSolution, LpStatus};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum JacobianMode {
    /// `J = -I`.
    MinusIdentity,
    /// `J = (1/(M eps)) sum_s x*(theta + eps Z_s) Z_s'`, Gaussian `Z_s` on binary coordinates.
    Perturbation { eps: f64, samples: usize },
}

impl JacobianMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::MinusIdentity => Ok(()),
            Self::Perturbation { eps, samples } => {
                if !(eps.is_finite() && eps > 0.0) {
                    Err(Error::Config(format!(
                        "perturbation eps must be > 0, got {eps}"
                    )))
                } else if samples == 0 {
                    Err(Error::Config(
                        "perturbation needs at least one sample".into(),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Weighted contribution of each loss term to the gradient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermGrads {
    pub cost: Point,
    pub integrality: Point,
    pub feasibility: Point,
    pub regularization: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradReport {
    pub grad: Point,
    pub term_grads: TermGrads,
    pub lp_solves_used: usize,
}

/// A drawn surrogate Jacobian, applied to any number of vectors.
enum Surrogate {
    MinusIdentity,
    Sampled {
        scale: f64,
        // (Z_s, x*(theta + eps Z_s)) per sample.
        samples: Vec<(Vec<f64>, Vec<f64>)>,
    },
}

impl Surrogate {
    fn draw<R: Rng + ?Sized>(
        mode: JacobianMode,
        inst: &MilpInstance,
        theta: &[f64],
        warm: Option<&Basis>,
        rng: &mut R,
    ) -> Result<Self> {
        let (eps, m) = match mode {
            JacobianMode::MinusIdentity => return Ok(Self::MinusIdentity),
            JacobianMode::Perturbation { eps, samples } => (eps, samples),
        };
        let n = theta.len();
        let mut samples = Vec::with_capacity(m);
        for _ in 0..m {
            let mut z = vec![0.0; n];
            for &i in inst.binaries() {
                z[i] = rng.sample(StandardNormal);
            }
            let perturbed: Vec<f64> = theta.iter().zip(&z).map(|(t, zi)| t + eps * zi).collect();
            let sol = solve_relaxation(inst, &CostVector::new(perturbed)?, warm)?;
            samples.push((z, optimal_point(sol)?.into_vec()));
        }
        Ok(Self::Sampled {
            scale: 1.0 / (m as f64 * eps),
            samples,
        })
    }

    fn solves(&self) -> usize {
        match self {
            Self::MinusIdentity => 0,
            Self::Sampled { samples, .. } => samples.len(),
        }
    }

    fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        match self {
            Self::MinusIdentity => v.iter().map(|x| -x).collect(),
            Self::Sampled { scale, samples } => {
                let mut out = vec![0.0; v.len()];
                for (z, x) in samples {
                    let dot: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
                    for (o, zi) in out.iter_mut().zip(z) {
                        *o += zi * dot;
                    }
                }
                out.iter_mut().for_each(|o| *o *= scale);
                out
            }
        }
    }
}

fn optimal_point(sol: LpSolution) -> Result<Point> {
    match sol.status {
        LpStatus::Optimal => Ok(sol.x_hat),
        LpStatus::Infeasible => Err(Error::InstanceLpInfeasible),
        LpStatus::Unbounded => Err(Error::SolverNumeric("unbounded relaxation".into())),
    }
}

/// `J' v` for the chosen surrogate. Perturbation consumes `M` LP solves and
/// `M * #binaries` Gaussian draws from `rng`.
pub fn apply_jacobian_transpose<R: Rng + ?Sized>(
    mode: JacobianMode,
    inst: &MilpInstance,
    theta: &CostVector,
    v: &[f64],
    rng: &mut R,
) -> Result<Point> {
    check_len(inst.num_vars(), theta.len())?;
    check_len(inst.num_vars(), v.len())?;
    mode.validate()?;
    let j = Surrogate::draw(mode, inst, theta, None, rng)?;
    Ok(Point::from_vec_unchecked(j.apply_transpose(v)))
}

fn mask_binaries(inst: &MilpInstance, v: Vec<f64>) -> Point {
    let mut out = vec![0.0; v.len()];
    for &i in inst.binaries() {
        out[i] = v[i];
    }
    Point::from_vec_unchecked(out)
}

/// Full gradient `alpha J'c + beta J' grad f(x_hat) + lambda J' (D grad g(soft(x_hat))) + gamma theta`,
/// restricted to binary coordinates. Terms with zero weight are skipped and contribute exact zeros.
///
/// Perturbed solves are warm-started from the basis of `x_hat`.
pub fn full_gradient<R: Rng + ?Sized>(
    inst: &MilpInstance,
    theta: &CostVector,
    x_hat: &LpSolution,
    w: &LossWeights,
    mode: JacobianMode,
    rng: &mut R,
) -> Result<GradReport> {
    let n = inst.num_vars();
    check_len(n, theta.len())?;
    if x_hat.status != LpStatus::Optimal {
        return Err(Error::Config(
            "gradient requires an optimal LP solution".into(),
        ));
    }
    let x = x_hat.x_hat.values();
    check_len(n, x.len())?;

    let needs_jacobian = w.alpha != 0.0 || w.beta != 0.0 || w.lambda != 0.0;
    let jac = if needs_jacobian {
        Surrogate::draw(mode, inst, theta, x_hat.basis.as_ref(), rng)?
    } else {
        Surrogate::MinusIdentity
    };
    let zero = || Point::zeros(n);
    let weighted = |weight: f64, v: Vec<f64>| {
        let jv = jac.apply_transpose(&v);
        mask_binaries(inst, jv.into_iter().map(|g| weight * g).collect())
    };

    let cost = if w.alpha != 0.0 {
        weighted(w.alpha, inst.objective().to_vec())
    } else {
        zero()
    };
    let integrality = if w.beta != 0.0 {
        weighted(w.beta, integrality_grad(inst, x, w.p)?.into_vec())
    } else {
        zero()
    };
    let feasibility = if w.lambda != 0.0 {
        let soft = soft_round_point(inst, x, w.eps_round)?;
        let mut v = feasibility_grad_wrt_round(inst, &soft, w.eps_feas)?.into_vec();
        let mut d = vec![0.0; n];
        for &i in inst.binaries() {
            d[i] = soft_round_grad(x[i], w.eps_round);
        }
        v.iter_mut().zip(&d).for_each(|(a, di)| *a *= di);
        weighted(w.lambda, v)
    } else {
        zero()
    };
    let regularization = if w.gamma != 0.0 {
        mask_binaries(inst, theta.iter().map(|t| w.gamma * t).collect())
    } else {
        zero()
    };

    let grad: Vec<f64> = (0..n)
        .map(|i| cost[i] + integrality[i] + feasibility[i] + regularization[i])
        .collect();
    Ok(GradReport {
        grad: Point::new(grad)?,
        term_grads: TermGrads {
            cost,
            integrality,
            feasibility,
            regularization,
        },
        lp_solves_used: jac.solves(),
    })
}
