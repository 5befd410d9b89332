use rand::Rng;

use super::config::RestartPolicy;
use super::RestartEvent;
use crate::model::MilpInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    None,
    /// The current rounded point equals the previous one.
    LengthOne,
    /// The current rounded point revisits an older one within the window.
    LongCycle,
}

/// Classifies the last entry of `history` against the entries before it.
pub fn detect_cycle<T: PartialEq>(history: &[T], window: usize) -> CycleKind {
    let Some((current, before)) = history.split_last() else {
        return CycleKind::None;
    };
    match before.last() {
        None => CycleKind::None,
        Some(prev) if prev == current => CycleKind::LengthOne,
        Some(_) => {
            let start = before.len().saturating_sub(window);
            if before[start..before.len() - 1].iter().any(|h| h == current) {
                CycleKind::LongCycle
            } else {
                CycleKind::None
            }
        }
    }
}

/// Number of coordinates a flip negates, drawn from `[T/2, 3T/2]`. One draw.
pub(super) fn draw_flip_count<R: Rng + ?Sized>(policy: &RestartPolicy, rng: &mut R) -> usize {
    rng.random_range(policy.flip_t / 2..=3 * policy.flip_t / 2)
}

/// Binary coordinates ordered by decreasing `|x_hat - x_round|`, ties by index.
pub(super) fn by_fractionality(inst: &MilpInstance, x_hat: &[f64], x_round: &[f64]) -> Vec<usize> {
    let mut order = inst.binaries().to_vec();
    order.sort_by(|&a, &b| {
        let fa = (x_hat[a] - x_round[a]).abs();
        let fb = (x_hat[b] - x_round[b]).abs();
        fb.total_cmp(&fa)
    });
    order
}

/// Negates cost coordinates to escape a cycle.
///
/// `LengthOne` flips the `T'` most fractional binary coordinates; `LongCycle`
/// draws `rho_i` per binary coordinate and negates `theta_i` iff
/// `|x_hat_i - x_round_i| + max(rho_i, 0) > 0.5`.
pub fn apply_restart<R: Rng + ?Sized>(
    inst: &MilpInstance,
    kind: CycleKind,
    theta: &[f64],
    x_hat: &[f64],
    x_round: &[f64],
    policy: &RestartPolicy,
    rng: &mut R,
) -> (Vec<f64>, RestartEvent) {
    let mut next = theta.to_vec();
    match kind {
        CycleKind::None => (next, RestartEvent::None),
        CycleKind::LengthOne => {
            let t = draw_flip_count(policy, rng);
            let order = by_fractionality(inst, x_hat, x_round);
            let count = t.min(order.len());
            for &i in &order[..count] {
                next[i] = -next[i];
            }
            (next, RestartEvent::Flip(count))
        }
        CycleKind::LongCycle => {
            for &i in inst.binaries() {
                let rho: f64 = rng.random_range(policy.perturb_lo..policy.perturb_hi);
                if (x_hat[i] - x_round[i]).abs() + rho.max(0.0) > 0.5 {
                    next[i] = -next[i];
                }
            }
            (next, RestartEvent::Perturb)
        }
    }
}
