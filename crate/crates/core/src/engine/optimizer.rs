use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Optimizer {
    Plain,
    /// Heavy ball: `v <- mu v + g`, `theta <- theta - eta v`.
    Momentum {
        mu: f64,
    },
    Adam {
        b1: f64,
        b2: f64,
        eps: f64,
    },
}

impl Optimizer {
    pub const ADAM_DEFAULT: Optimizer = Optimizer::Adam {
        b1: 0.9,
        b2: 0.999,
        eps: 1e-8,
    };

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Plain => Ok(()),
            Self::Momentum { mu } if (0.0..1.0).contains(&mu) => Ok(()),
            Self::Momentum { mu } => Err(Error::Config(format!(
                "momentum must be in [0, 1), got {mu}"
            ))),
            Self::Adam { b1, b2, eps } => {
                if (0.0..1.0).contains(&b1) && (0.0..1.0).contains(&b2) && eps > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!(
                        "invalid Adam parameters ({b1}, {b2}, {eps})"
                    )))
                }
            }
        }
    }
}

/// Per-run optimizer memory.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    kind: Optimizer,
    first: Vec<f64>,
    second: Vec<f64>,
    t: i32,
}

impl OptimizerState {
    pub fn new(kind: Optimizer, n: usize) -> Self {
        Self {
            kind,
            first: vec![0.0; n],
            second: vec![0.0; n],
            t: 0,
        }
    }

    pub fn kind(&self) -> Optimizer {
        self.kind
    }
}

/// One update of the coordinates listed in `active`; all others are copied unchanged.
pub fn optimizer_step(
    state: &mut OptimizerState,
    theta: &[f64],
    grad: &[f64],
    eta: f64,
    active: &[usize],
) -> Vec<f64> {
    let mut next = theta.to_vec();
    match state.kind {
        Optimizer::Plain => {
            for &i in active {
                next[i] = theta[i] - eta * grad[i];
            }
        }
        Optimizer::Momentum { mu } => {
            for &i in active {
                state.first[i] = mu * state.first[i] + grad[i];
                next[i] = theta[i] - eta * state.first[i];
            }
        }
        Optimizer::Adam { b1, b2, eps } => {
            state.t += 1;
            let c1 = 1.0 - b1.powi(state.t);
            let c2 = 1.0 - b2.powi(state.t);
            for &i in active {
                let g = grad[i];
                state.first[i] = b1 * state.first[i] + (1.0 - b1) * g;
                state.second[i] = b2 * state.second[i] + (1.0 - b2) * g * g;
                let m_hat = state.first[i] / c1;
                let v_hat = state.second[i] / c2;
                next[i] = theta[i] - eta * m_hat / (v_hat.sqrt() + eps);
            }
        }
    }
    next
}
