//! Instance generators for tests and the bundled benchmark suite.
//!
//! The structured generators plant a binary point and build constraints it
//! satisfies, so every generated instance is known to be feasible.

use rand::Rng;

use crate::ingest::{canonicalize, MpsModel, RowSense};
use crate::model::MilpInstance;
use crate::simplex::{solve_relaxation, CostVector, LpStatus};

/// A generated model together with a binary point known to satisfy it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub model: MpsModel,
    pub planted: Vec<f64>,
}

impl Generated {
    pub fn instance(&self) -> MilpInstance {
        canonicalize(&self.model).expect("generated models are canonicalizable")
    }
}

/// Pure-binary `min c'x, Ax >= b` with integer data in `[-5, 5]` and a
/// feasible LP relaxation. Rows that come out all-zero are redrawn.
pub fn random_binary_instance<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> MilpInstance {
    loop {
        let objective: Vec<f64> = (0..n).map(|_| rng.random_range(-5..=5) as f64).collect();
        let mut rows = Vec::with_capacity(m);
        while rows.len() < m {
            let row: Vec<f64> = (0..n).map(|_| rng.random_range(-5..=5) as f64).collect();
            if row.iter().any(|&a| a != 0.0) {
                rows.push(row);
            }
        }
        let rhs: Vec<f64> = (0..m).map(|_| rng.random_range(-5..=5) as f64).collect();
        let inst = MilpInstance::binary("random", objective, &rows, rhs)
            .expect("nonzero rows give a valid instance");
        let zero = CostVector::new(vec![0.0; n]).expect("finite");
        if let Ok(sol) = solve_relaxation(&inst, &zero, None) {
            if sol.status == LpStatus::Optimal {
                return inst;
            }
        }
    }
}

fn subset<R: Rng + ?Sized>(rng: &mut R, n: usize, size: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(size);
    idx.sort_unstable();
    idx
}

/// Set cover: each row requires one of 2 to `max(2, n/3)` columns; costs in `[1, 10]`.
/// The all-ones point is feasible.
pub fn set_cover<R: Rng + ?Sized>(rng: &mut R, name: &str, n: usize, m: usize) -> Generated {
    let objective = (0..n).map(|_| rng.random_range(1..=10) as f64).collect();
    let max_size = (n / 3).max(2).min(n);
    let rows: Vec<_> = (0..m)
        .map(|_| {
            let size = rng.random_range(2.min(n)..=max_size);
            let mut a = vec![0.0; n];
            for i in subset(rng, n, size) {
                a[i] = 1.0;
            }
            (RowSense::G, a, 1.0)
        })
        .collect();
    Generated {
        model: MpsModel::from_dense(name, objective, &rows, &vec![true; n]),
        planted: vec![1.0; n],
    }
}

/// Knapsack covers `w'x >= W` plus a cardinality budget, built around a
/// planted point with about 60% ones.
pub fn knapsack_cover<R: Rng + ?Sized>(rng: &mut R, name: &str, n: usize, m: usize) -> Generated {
    let mut planted: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.6) { 1.0 } else { 0.0 })
        .collect();
    if planted.iter().all(|&x| x == 0.0) {
        planted[0] = 1.0;
    }
    let ones = planted.iter().sum::<f64>().max(1.0);
    let objective = (0..n).map(|_| rng.random_range(1..=10) as f64).collect();
    let mut rows: Vec<_> = (0..m)
        .map(|_| {
            let w: Vec<f64> = (0..n).map(|_| rng.random_range(1..=20) as f64).collect();
            let at_planted: f64 = w.iter().zip(&planted).map(|(a, x)| a * x).sum();
            (RowSense::G, w, (0.8 * at_planted).floor().max(1.0))
        })
        .collect();
    rows.push((RowSense::L, vec![1.0; n], ones));
    Generated {
        model: MpsModel::from_dense(name, objective, &rows, &vec![true; n]),
        planted,
    }
}

/// Assignment-style instance: columns are split into groups of 2 to 4 with
/// `sum = 1` per group, plus `extra` random `>=` rows that the planted
/// one-per-group point satisfies.
pub fn equality_split<R: Rng + ?Sized>(
    rng: &mut R,
    name: &str,
    groups: usize,
    extra: usize,
) -> Generated {
    let sizes: Vec<usize> = (0..groups).map(|_| rng.random_range(2..=4)).collect();
    let n: usize = sizes.iter().sum();
    let mut planted = vec![0.0; n];
    let mut rows = Vec::new();
    let mut offset = 0;
    for &size in &sizes {
        let mut a = vec![0.0; n];
        a[offset..offset + size].fill(1.0);
        rows.push((RowSense::E, a, 1.0));
        planted[offset + rng.random_range(0..size)] = 1.0;
        offset += size;
    }
    for _ in 0..extra {
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(-3..=3) as f64).collect();
        if a.iter().all(|&v| v == 0.0) {
            continue;
        }
        let at_planted: f64 = a.iter().zip(&planted).map(|(x, y)| x * y).sum();
        rows.push((RowSense::G, a, at_planted - rng.random_range(0..=2) as f64));
    }
    let objective = (0..n).map(|_| rng.random_range(-5..=5) as f64).collect();
    Generated {
        model: MpsModel::from_dense(name, objective, &rows, &vec![true; n]),
        planted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planted_points_are_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..30 {
            let g = match k % 3 {
                0 => set_cover(&mut rng, "sc", 12, 8),
                1 => knapsack_cover(&mut rng, "kc", 10, 3),
                _ => equality_split(&mut rng, "eq", 4, 3),
            };
            let inst = g.instance();
            assert!(inst.is_feasible(&g.planted, 0.0).unwrap(), "{k}");
            assert!(inst.is_integral(&g.planted, 0.0).unwrap());
        }
    }

    #[test]
    fn random_instances_have_feasible_relaxations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let inst = random_binary_instance(&mut rng, 5, 4);
            let sol =
                solve_relaxation(&inst, &CostVector::new(vec![1.0; 5]).unwrap(), None).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal);
        }
    }
}
