//! Brute-force vertex enumeration, used to cross-check the simplex in tests.

use crate::error::{Error, Result};
use crate::model::{MilpInstance, Point};

pub const ORACLE_MAX_VARS: usize = 12;
pub const ORACLE_MAX_ROWS: usize = 12;

const ORACLE_TOL: f64 = 1e-9;

/// All basic feasible solutions of the relaxation of `inst`, deduplicated.
///
/// A basic solution fixes every variable not in a chosen "free" set `F` at
/// one of its finite bounds and makes `|F|` chosen rows tight; it is kept when
/// that square system is nonsingular and the solution is feasible.
pub fn enumerate_vertices_oracle(inst: &MilpInstance) -> Result<Vec<Point>> {
    let n = inst.num_vars();
    let m = inst.num_cons();
    if n > ORACLE_MAX_VARS || m > ORACLE_MAX_ROWS {
        return Err(Error::OracleTooLarge {
            max_vars: ORACLE_MAX_VARS,
            max_rows: ORACLE_MAX_ROWS,
        });
    }
    let dense: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let mut row = vec![0.0; n];
            for (i, v) in inst.row(j).iter() {
                row[i] = v;
            }
            row
        })
        .collect();

    let mut found: Vec<Vec<f64>> = Vec::new();
    // choice[i]: 0 = lower, 1 = upper, 2 = free.
    let mut choice = vec![0u8; n];
    enumerate(inst, &dense, 0, &mut choice, &mut found);
    Ok(found.into_iter().map(Point::from_vec_unchecked).collect())
}

fn enumerate(
    inst: &MilpInstance,
    dense: &[Vec<f64>],
    i: usize,
    choice: &mut Vec<u8>,
    found: &mut Vec<Vec<f64>>,
) {
    let n = choice.len();
    if i == n {
        evaluate(inst, dense, choice, found);
        return;
    }
    let (lo, hi) = inst.bounds()[i];
    let free_count = choice[..i].iter().filter(|&&c| c == 2).count();
    for c in 0..3u8 {
        let allowed = match c {
            0 => lo.is_finite(),
            1 => hi.is_finite() && hi != lo,
            _ => free_count < dense.len(),
        };
        if allowed {
            choice[i] = c;
            enumerate(inst, dense, i + 1, choice, found);
        }
    }
}

fn evaluate(inst: &MilpInstance, dense: &[Vec<f64>], choice: &[u8], found: &mut Vec<Vec<f64>>) {
    let n = choice.len();
    let mut x = vec![0.0; n];
    let mut free = Vec::new();
    for i in 0..n {
        let (lo, hi) = inst.bounds()[i];
        match choice[i] {
            0 => x[i] = lo,
            1 => x[i] = hi,
            _ => free.push(i),
        }
    }
    let k = free.len();
    if k == 0 {
        keep_if_feasible(inst, x, found);
        return;
    }
    let mut rows = Vec::with_capacity(k);
    for_each_subset(dense.len(), k, 0, &mut rows, &mut |rows| {
        let mut a = vec![0.0; k * k];
        let mut b = vec![0.0; k];
        for (r, &j) in rows.iter().enumerate() {
            let mut rhs = inst.rhs()[j];
            for i in 0..n {
                if choice[i] != 2 {
                    rhs -= dense[j][i] * x[i];
                }
            }
            for (c, &i) in free.iter().enumerate() {
                a[r * k + c] = dense[j][i];
            }
            b[r] = rhs;
        }
        if let Some(sol) = gauss_solve(a, b, k) {
            let mut y = x.clone();
            for (c, &i) in free.iter().enumerate() {
                y[i] = sol[c];
            }
            keep_if_feasible(inst, y, found);
        }
    });
}

fn for_each_subset(
    m: usize,
    k: usize,
    start: usize,
    current: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if current.len() == k {
        f(current);
        return;
    }
    for j in start..m {
        if m - j < k - current.len() {
            break;
        }
        current.push(j);
        for_each_subset(m, k, j + 1, current, f);
        current.pop();
    }
}

/// Plain Gaussian elimination with partial pivoting; `None` when (near) singular.
fn gauss_solve(mut a: Vec<f64>, mut b: Vec<f64>, k: usize) -> Option<Vec<f64>> {
    for col in 0..k {
        let p = (col..k).max_by(|&r, &s| a[r * k + col].abs().total_cmp(&a[s * k + col].abs()))?;
        if a[p * k + col].abs() < 1e-9 {
            return None;
        }
        if p != col {
            for c in 0..k {
                a.swap(p * k + c, col * k + c);
            }
            b.swap(p, col);
        }
        for r in col + 1..k {
            let f = a[r * k + col] / a[col * k + col];
            for c in col..k {
                a[r * k + c] -= f * a[col * k + c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| a[r * k + c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r * k + r];
    }
    Some(x)
}

fn keep_if_feasible(inst: &MilpInstance, x: Vec<f64>, found: &mut Vec<Vec<f64>>) {
    let in_bounds = x
        .iter()
        .zip(inst.bounds())
        .all(|(&v, &(lo, hi))| v >= lo - ORACLE_TOL && v <= hi + ORACLE_TOL);
    let rows_ok = (0..inst.num_cons()).all(|j| inst.normalized_slack(j, &x) <= ORACLE_TOL);
    if !in_bounds || !rows_ok {
        return;
    }
    let duplicate = found
        .iter()
        .any(|y| y.iter().zip(&x).all(|(a, b)| (a - b).abs() <= ORACLE_TOL));
    if !duplicate {
        found.push(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(points: Vec<Point>) -> Vec<Vec<f64>> {
        let mut v: Vec<Vec<f64>> = points.into_iter().map(Point::into_vec).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn unit_box_corners() {
        let inst = MilpInstance::binary("box", vec![0.0; 2], &[], vec![]).unwrap();
        assert_eq!(
            sorted(enumerate_vertices_oracle(&inst).unwrap()),
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0]
            ]
        );
    }

    #[test]
    fn cover_row_cuts_origin() {
        let inst = MilpInstance::binary("c", vec![0.0; 2], &[vec![1.0, 1.0]], vec![1.0]).unwrap();
        assert_eq!(
            sorted(enumerate_vertices_oracle(&inst).unwrap()),
            vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]
        );
    }

    #[test]
    fn fractional_vertex_is_found() {
        // 2x0 + 2x1 >= 1 has vertices (0.5, 0) and (0, 0.5).
        let inst = MilpInstance::binary("f", vec![0.0; 2], &[vec![2.0, 2.0]], vec![1.0]).unwrap();
        let v = sorted(enumerate_vertices_oracle(&inst).unwrap());
        assert!(v.contains(&vec![0.5, 0.0]));
        assert!(v.contains(&vec![0.0, 0.5]));
        assert!(!v.contains(&vec![0.0, 0.0]));
    }

    #[test]
    fn empty_polytope() {
        let inst = MilpInstance::binary("inf", vec![0.0], &[vec![1.0], vec![-1.0]], vec![1.0, 0.0])
            .unwrap();
        assert!(enumerate_vertices_oracle(&inst).unwrap().is_empty());
    }

    #[test]
    fn size_guard() {
        let inst = MilpInstance::binary("big", vec![0.0; 13], &[], vec![]).unwrap();
        assert!(matches!(
            enumerate_vertices_oracle(&inst),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
