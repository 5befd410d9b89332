//! Deterministic LP solver for the relaxation `min theta'x s.t. Ax >= b, lo <= x <= hi`.
//!
//! Bounded-variable primal simplex on a dense tableau, two phases with
//! explicit artificial variables, Bland's rule for both pricing and the ratio
//! test. Identical inputs (including the warm basis) give bit-identical output.

mod lu;
mod oracle;

pub use oracle::{enumerate_vertices_oracle, ORACLE_MAX_ROWS, ORACLE_MAX_VARS};

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::model::{MilpInstance, Point};
use lu::Lu;

/// Reduced-cost tolerance, applied to costs scaled to unit max-norm.
pub const OPTIMALITY_TOL: f64 = 1e-8;
/// Normalized-slack tolerance for the returned point.
pub const FEASIBILITY_TOL: f64 = 1e-8;
const PIVOT_TOL: f64 = 1e-10;
const TINY_PIVOT: f64 = 1e-13;
const RATIO_TIE: f64 = 1e-12;
const SNAP_TOL: f64 = 1e-12;

/// LP cost vector `theta`; finite entries only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostVector(Vec<f64>);

impl CostVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.iter().all(|v| v.is_finite()) {
            Ok(Self(theta))
        } else {
            Err(Error::NonFinite("cost vector"))
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Deref for CostVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Identifies a column of the internal standard form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisVar {
    /// Variable `i` (or the positive part of a free variable).
    Structural(usize),
    /// Negative part of free variable `i`.
    FreeNegative(usize),
    /// Surplus of row `j`.
    Surplus(usize),
    /// Artificial of row `j`; only basic at zero on redundant rows.
    Artificial(usize),
}

/// Vertex certificate: basic variables (one per row) and nonbasic variables at their upper bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basis {
    pub basic: Vec<BasisVar>,
    pub at_upper: Vec<BasisVar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x_hat: Point,
    pub objective: f64,
    pub status: LpStatus,
    /// Present iff `status == Optimal`.
    pub basis: Option<Basis>,
    /// Pivots plus bound flips over both phases.
    pub iterations: usize,
}

// Internal column `y >= 0` standing for `x_orig = shift + sign * y`.
#[derive(Debug, Clone, Copy)]
struct StructCol {
    orig: usize,
    sign: f64,
    upper: f64,
}

/// Problem data in internal standard form:
/// `A y - s + a = b`, `0 <= y <= u`, `s >= 0`, artificials `a` fixed at 0 outside phase 1.
/// Rows are divided by their norm `||[A_j b_j]||`.
struct StandardForm {
    m: usize,
    cols: Vec<StructCol>,
    // m × n_struct, row-major.
    a: Vec<f64>,
    b: Vec<f64>,
    // Variable shift per original variable.
    shift: Vec<f64>,
    // Internal column index of each original variable (and of its negative part).
    first_col: Vec<usize>,
    neg_col: Vec<Option<usize>>,
}

impl StandardForm {
    fn build(inst: &MilpInstance) -> Option<Self> {
        let n = inst.num_vars();
        let m = inst.num_cons();
        let mut cols = Vec::with_capacity(n);
        let mut shift = vec![0.0; n];
        let mut first_col = vec![0; n];
        let mut neg_col = vec![None; n];
        for (i, &(lo, hi)) in inst.bounds().iter().enumerate() {
            if lo > hi {
                return None;
            }
            first_col[i] = cols.len();
            if lo.is_finite() {
                shift[i] = lo;
                cols.push(StructCol {
                    orig: i,
                    sign: 1.0,
                    upper: hi - lo,
                });
            } else if hi.is_finite() {
                shift[i] = hi;
                cols.push(StructCol {
                    orig: i,
                    sign: -1.0,
                    upper: f64::INFINITY,
                });
            } else {
                cols.push(StructCol {
                    orig: i,
                    sign: 1.0,
                    upper: f64::INFINITY,
                });
                neg_col[i] = Some(cols.len());
                cols.push(StructCol {
                    orig: i,
                    sign: -1.0,
                    upper: f64::INFINITY,
                });
            }
        }
        let ns = cols.len();
        let mut a = vec![0.0; m * ns];
        let mut b = vec![0.0; m];
        for j in 0..m {
            let norm = inst.row_norms()[j];
            let mut rhs = inst.rhs()[j];
            for (i, v) in inst.row(j).iter() {
                rhs -= v * shift[i];
                a[j * ns + first_col[i]] = v * cols[first_col[i]].sign / norm;
                if let Some(k) = neg_col[i] {
                    a[j * ns + k] = v * cols[k].sign / norm;
                }
            }
            b[j] = rhs / norm;
        }
        Some(Self {
            m,
            cols,
            a,
            b,
            shift,
            first_col,
            neg_col,
        })
    }

    fn n_struct(&self) -> usize {
        self.cols.len()
    }

    fn n_total(&self) -> usize {
        self.n_struct() + 2 * self.m
    }

    fn surplus(&self, j: usize) -> usize {
        self.n_struct() + j
    }

    fn artificial(&self, j: usize) -> usize {
        self.n_struct() + self.m + j
    }

    /// Dense column `k` of `[A | -I | I]`.
    fn column(&self, k: usize, out: &mut [f64]) {
        out.fill(0.0);
        let ns = self.n_struct();
        if k < ns {
            for (j, o) in out.iter_mut().enumerate().take(self.m) {
                *o = self.a[j * ns + k];
            }
        } else if k < ns + self.m {
            out[k - ns] = -1.0;
        } else {
            out[k - ns - self.m] = 1.0;
        }
    }

    fn to_var(&self, k: usize) -> BasisVar {
        let ns = self.n_struct();
        if k < ns {
            let c = self.cols[k];
            if self.neg_col[c.orig] == Some(k) {
                BasisVar::FreeNegative(c.orig)
            } else {
                BasisVar::Structural(c.orig)
            }
        } else if k < ns + self.m {
            BasisVar::Surplus(k - ns)
        } else {
            BasisVar::Artificial(k - ns - self.m)
        }
    }

    fn column_of(&self, v: BasisVar) -> Option<usize> {
        let n = self.first_col.len();
        match v {
            BasisVar::Structural(i) if i < n => Some(self.first_col[i]),
            BasisVar::FreeNegative(i) if i < n => self.neg_col[i],
            BasisVar::Surplus(j) if j < self.m => Some(self.surplus(j)),
            BasisVar::Artificial(j) if j < self.m => Some(self.artificial(j)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColStatus {
    Basic,
    Lower,
    Upper,
}

struct Tableau<'a> {
    sf: &'a StandardForm,
    width: usize,
    // m × width, B^{-1} [A | -I | I].
    t: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<ColStatus>,
    upper: Vec<f64>,
    iterations: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl<'a> Tableau<'a> {
    /// Factorizes the basis and recomputes the full tableau and basic values.
    fn from_basis(
        sf: &'a StandardForm,
        basis: Vec<usize>,
        status: Vec<ColStatus>,
        upper: Vec<f64>,
    ) -> Option<Self> {
        let m = sf.m;
        let width = sf.n_total();
        let mut bmat = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for (r, &k) in basis.iter().enumerate() {
            sf.column(k, &mut col);
            for i in 0..m {
                bmat[i * m + r] = col[i];
            }
        }
        let lu = Lu::factor(bmat, m)?;
        let mut t = vec![0.0; m * width];
        for k in 0..width {
            sf.column(k, &mut col);
            lu.solve(&mut col);
            for i in 0..m {
                t[i * width + k] = col[i];
            }
        }
        let mut rhs = sf.b.clone();
        for k in 0..width {
            if status[k] == ColStatus::Upper && upper[k] != 0.0 {
                sf.column(k, &mut col);
                for i in 0..m {
                    rhs[i] -= upper[k] * col[i];
                }
            }
        }
        lu.solve(&mut rhs);
        Some(Self {
            sf,
            width,
            t,
            beta: rhs,
            basis,
            status,
            upper,
            iterations: 0,
        })
    }

    fn basic_values_within_bounds(&self, tol: f64) -> bool {
        self.basis
            .iter()
            .zip(&self.beta)
            .all(|(&k, &v)| v >= -tol && v <= self.upper[k] + tol)
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (i, &k) in self.basis.iter().enumerate() {
            let cb = cost[k];
            if cb != 0.0 {
                let row = &self.t[i * self.width..(i + 1) * self.width];
                for (dj, tij) in d.iter_mut().zip(row) {
                    *dj -= cb * tij;
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, q: usize, d: &mut [f64]) {
        let w = self.width;
        let p = self.t[r * w + q];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        self.t[r * w + q] = 1.0;
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[q];
            if f != 0.0 {
                for (x, &pv) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * pv;
                }
                row[q] = 0.0;
            }
        }
        let f = d[q];
        if f != 0.0 {
            for (x, &pv) in d.iter_mut().zip(prow.iter()) {
                *x -= f * pv;
            }
            d[q] = 0.0;
        }
    }

    /// Primal simplex with Bland's rule from the current (primal feasible) basis.
    fn run(&mut self, cost: &[f64], max_iter: usize) -> Result<PhaseOutcome> {
        let m = self.sf.m;
        let w = self.width;
        let mut d = self.reduced_costs(cost);
        loop {
            let entering = (0..w).find(|&j| match self.status[j] {
                ColStatus::Basic => false,
                ColStatus::Lower => self.upper[j] > 0.0 && d[j] < -OPTIMALITY_TOL,
                ColStatus::Upper => self.upper[j] > 0.0 && d[j] > OPTIMALITY_TOL,
            });
            let Some(q) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };
            if self.iterations >= max_iter {
                return Err(Error::SolverNumeric(format!(
                    "iteration limit {max_iter} reached (cycling?)"
                )));
            }
            let dir = if self.status[q] == ColStatus::Lower {
                1.0
            } else {
                -1.0
            };

            let mut best: Option<(usize, f64, bool)> = None;
            let mut saw_tiny = false;
            for i in 0..m {
                let alpha = dir * self.t[i * w + q];
                let k = self.basis[i];
                let (ratio, to_upper) = if alpha > PIVOT_TOL {
                    ((self.beta[i] / alpha).max(0.0), false)
                } else if alpha < -PIVOT_TOL && self.upper[k].is_finite() {
                    (((self.upper[k] - self.beta[i]) / -alpha).max(0.0), true)
                } else {
                    if alpha.abs() > TINY_PIVOT && alpha.abs() <= PIVOT_TOL {
                        saw_tiny = true;
                    }
                    continue;
                };
                let better = match best {
                    None => true,
                    Some((bi, br, _)) => {
                        ratio < br - RATIO_TIE || (ratio <= br + RATIO_TIE && k < self.basis[bi])
                    }
                };
                if better {
                    best = Some((i, ratio, to_upper));
                }
            }

            let flip = self.upper[q];
            let step = match best {
                Some((_, r, _)) if r < flip => r,
                _ if flip.is_finite() => flip,
                _ if saw_tiny => {
                    return Err(Error::SolverNumeric(
                        "no acceptable pivot element above 1e-10".into(),
                    ))
                }
                _ => return Ok(PhaseOutcome::Unbounded),
            };

            if step != 0.0 {
                for i in 0..m {
                    self.beta[i] -= dir * step * self.t[i * w + q];
                }
            }
            self.iterations += 1;

            match best {
                Some((r, ratio, to_upper)) if ratio < flip => {
                    let leaving = self.basis[r];
                    let entering_value = if dir > 0.0 {
                        step
                    } else {
                        self.upper[q] - step
                    };
                    self.pivot(r, q, &mut d);
                    self.beta[r] = entering_value;
                    self.basis[r] = q;
                    self.status[q] = ColStatus::Basic;
                    self.status[leaving] = if to_upper && self.upper[leaving] > 0.0 {
                        ColStatus::Upper
                    } else {
                        ColStatus::Lower
                    };
                }
                _ => {
                    self.status[q] = if dir > 0.0 {
                        ColStatus::Upper
                    } else {
                        ColStatus::Lower
                    };
                }
            }
        }
    }

    fn export_basis(&self) -> Basis {
        Basis {
            basic: self.basis.iter().map(|&k| self.sf.to_var(k)).collect(),
            at_upper: (0..self.width)
                .filter(|&k| self.status[k] == ColStatus::Upper)
                .map(|k| self.sf.to_var(k))
                .collect(),
        }
    }

    fn structural_values(&self) -> Vec<f64> {
        let ns = self.sf.n_struct();
        let mut y: Vec<f64> = (0..ns)
            .map(|k| match self.status[k] {
                ColStatus::Upper => self.upper[k],
                _ => 0.0,
            })
            .collect();
        for (i, &k) in self.basis.iter().enumerate() {
            if k < ns {
                let u = self.upper[k];
                let mut v = self.beta[i].max(0.0).min(u);
                if v.abs() <= SNAP_TOL {
                    v = 0.0;
                } else if u.is_finite() && (u - v).abs() <= SNAP_TOL * (1.0 + u.abs()) {
                    v = u;
                }
                y[k] = v;
            }
        }
        y
    }
}

fn iteration_cap(sf: &StandardForm) -> usize {
    50 * (sf.m + sf.n_total()) + 10_000
}

fn cold_start(sf: &StandardForm) -> Result<Option<Tableau<'_>>> {
    let m = sf.m;
    let ns = sf.n_struct();
    let width = sf.n_total();
    let mut upper: Vec<f64> = sf.cols.iter().map(|c| c.upper).collect();
    upper.extend(std::iter::repeat_n(f64::INFINITY, m));
    upper.extend(std::iter::repeat_n(0.0, m));
    let mut status = vec![ColStatus::Lower; width];
    let mut basis = Vec::with_capacity(m);
    let mut phase1_cost = vec![0.0; width];
    for j in 0..m {
        if sf.b[j] <= 0.0 {
            basis.push(sf.surplus(j));
        } else {
            let a = sf.artificial(j);
            basis.push(a);
            upper[a] = f64::INFINITY;
            phase1_cost[a] = 1.0;
        }
    }
    for &k in &basis {
        status[k] = ColStatus::Basic;
    }
    let mut tab = Tableau::from_basis(sf, basis, status, upper)
        .ok_or_else(|| Error::SolverNumeric("singular initial basis".into()))?;
    if phase1_cost.iter().any(|&c| c != 0.0) {
        let cap = iteration_cap(sf);
        tab.run(&phase1_cost, cap)?;
        let infeasibility: f64 = tab
            .basis
            .iter()
            .zip(&tab.beta)
            .filter(|(&k, _)| k >= ns + m)
            .map(|(_, &v)| v.max(0.0))
            .sum();
        if infeasibility > FEASIBILITY_TOL {
            return Ok(None);
        }
        // Drive basic artificials out where some non-artificial column can replace them.
        let w = tab.width;
        for r in 0..m {
            if tab.basis[r] < ns + m {
                continue;
            }
            let mut pick: Option<(usize, f64)> = None;
            for k in 0..ns + m {
                if tab.status[k] == ColStatus::Basic {
                    continue;
                }
                let v = tab.t[r * w + k].abs();
                if v > 1e-7 && pick.is_none_or(|(_, bv)| v > bv) {
                    pick = Some((k, v));
                }
            }
            if let Some((k, _)) = pick {
                let mut scratch = vec![0.0; w];
                let leaving = tab.basis[r];
                tab.pivot(r, k, &mut scratch);
                tab.basis[r] = k;
                tab.status[k] = ColStatus::Basic;
                tab.status[leaving] = ColStatus::Lower;
            }
        }
        let iterations = tab.iterations;
        let mut upper = tab.upper.clone();
        for u in &mut upper[ns + m..] {
            *u = 0.0;
        }
        tab = Tableau::from_basis(sf, tab.basis.clone(), tab.status.clone(), upper)
            .ok_or_else(|| Error::SolverNumeric("singular basis after phase 1".into()))?;
        tab.iterations = iterations;
    }
    Ok(Some(tab))
}

fn warm_start<'a>(sf: &'a StandardForm, warm: &Basis) -> Option<Tableau<'a>> {
    let m = sf.m;
    let ns = sf.n_struct();
    let width = sf.n_total();
    if warm.basic.len() != m {
        return None;
    }
    let mut upper: Vec<f64> = sf.cols.iter().map(|c| c.upper).collect();
    upper.extend(std::iter::repeat_n(f64::INFINITY, m));
    upper.extend(std::iter::repeat_n(0.0, m));
    let mut status = vec![ColStatus::Lower; width];
    let mut basis = Vec::with_capacity(m);
    for &v in &warm.basic {
        let k = sf.column_of(v)?;
        if status[k] == ColStatus::Basic {
            return None;
        }
        status[k] = ColStatus::Basic;
        basis.push(k);
    }
    for &v in &warm.at_upper {
        let k = sf.column_of(v)?;
        if status[k] != ColStatus::Lower || !upper[k].is_finite() || k >= ns + m {
            return None;
        }
        status[k] = ColStatus::Upper;
    }
    let tab = Tableau::from_basis(sf, basis, status, upper)?;
    tab.basic_values_within_bounds(1e-9).then_some(tab)
}

fn normalized_cost(sf: &StandardForm, theta: &[f64]) -> Vec<f64> {
    let scale = theta.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut cost = vec![0.0; sf.n_total()];
    if scale > 0.0 {
        for (k, c) in sf.cols.iter().enumerate() {
            cost[k] = theta[c.orig] * c.sign / scale;
        }
    }
    cost
}

fn infeasible(n: usize, iterations: usize) -> LpSolution {
    LpSolution {
        x_hat: Point::zeros(n),
        objective: f64::INFINITY,
        status: LpStatus::Infeasible,
        basis: None,
        iterations,
    }
}

/// Solves `min theta'x` over the LP relaxation of `inst`.
///
/// With a warm basis the solve starts from it (falling back to a cold
/// two-phase start if it is not a valid primal-feasible basis for `inst`);
/// an unchanged `theta` then returns after zero iterations.
pub fn solve_relaxation(
    inst: &MilpInstance,
    theta: &CostVector,
    warm: Option<&Basis>,
) -> Result<LpSolution> {
    let n = inst.num_vars();
    check_len(n, theta.len())?;
    let Some(sf) = StandardForm::build(inst) else {
        return Ok(infeasible(n, 0));
    };
    let cost = normalized_cost(&sf, theta);

    let mut tab = match warm.and_then(|b| warm_start(&sf, b)) {
        Some(t) => t,
        None => match cold_start(&sf)? {
            Some(t) => t,
            None => return Ok(infeasible(n, 0)),
        },
    };
    let outcome = tab.run(&cost, iteration_cap(&sf))?;
    let iterations = tab.iterations;
    if let PhaseOutcome::Unbounded = outcome {
        return Ok(LpSolution {
            x_hat: Point::zeros(n),
            objective: f64::NEG_INFINITY,
            status: LpStatus::Unbounded,
            basis: None,
            iterations,
        });
    }

    // Refactor the final basis for clean basic values.
    let clean = Tableau::from_basis(
        &sf,
        tab.basis.clone(),
        tab.status.clone(),
        tab.upper.clone(),
    )
    .ok_or_else(|| Error::SolverNumeric("singular optimal basis".into()))?;
    let y = clean.structural_values();
    let mut x = sf.shift.clone();
    for (k, c) in sf.cols.iter().enumerate() {
        x[c.orig] += c.sign * y[k];
    }
    for (v, &(lo, hi)) in x.iter_mut().zip(inst.bounds()) {
        *v = v.clamp(lo, hi);
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SolverNumeric("non-finite primal values".into()));
    }
    let worst = (0..inst.num_cons())
        .map(|j| inst.normalized_slack(j, &x))
        .fold(f64::NEG_INFINITY, f64::max);
    if worst > FEASIBILITY_TOL {
        return Err(Error::SolverNumeric(format!(
            "returned point violates a row by normalized slack {worst:e}"
        )));
    }
    let objective = theta.iter().zip(&x).map(|(t, v)| t * v).sum();
    Ok(LpSolution {
        x_hat: Point::from_vec_unchecked(x),
        objective,
        status: LpStatus::Optimal,
        basis: Some(clean.export_basis()),
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SparseRow, VarKind};

    fn theta(v: &[f64]) -> CostVector {
        CostVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn box_only_instance() {
        let inst = MilpInstance::binary("box", vec![0.0; 2], &[], vec![]).unwrap();
        let sol = solve_relaxation(&inst, &theta(&[1.0, -1.0]), None).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.x_hat.values(), &[0.0, 1.0]);
        assert_eq!(sol.objective, -1.0);
    }

    #[test]
    fn single_cover_row() {
        let inst = MilpInstance::binary("c", vec![0.0; 2], &[vec![1.0, 1.0]], vec![1.0]).unwrap();
        let sol = solve_relaxation(&inst, &theta(&[2.0, 1.0]), None).unwrap();
        assert_eq!(sol.x_hat.values(), &[0.0, 1.0]);
        assert_eq!(sol.objective, 1.0);
    }

    #[test]
    fn zero_objective_is_deterministic() {
        let inst = MilpInstance::binary(
            "z",
            vec![0.0; 3],
            &[vec![1.0, 2.0, -1.0], vec![0.0, 1.0, 1.0]],
            vec![1.0, 1.0],
        )
        .unwrap();
        let a = solve_relaxation(&inst, &theta(&[0.0; 3]), None).unwrap();
        let b = solve_relaxation(&inst, &theta(&[0.0; 3]), None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.objective, 0.0);
        assert!(inst.is_feasible(&a.x_hat, 1e-8).unwrap());
    }

    #[test]
    fn infeasible_relaxation() {
        // x >= 1 and -x >= 0 on a binary.
        let inst = MilpInstance::binary("inf", vec![0.0], &[vec![1.0], vec![-1.0]], vec![1.0, 0.0])
            .unwrap();
        let sol = solve_relaxation(&inst, &theta(&[1.0]), None).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        assert!(sol.basis.is_none());
    }

    #[test]
    fn warm_restart_takes_zero_iterations() {
        let inst = MilpInstance::binary(
            "w",
            vec![0.0; 3],
            &[vec![1.0, 1.0, 1.0], vec![2.0, -1.0, 1.0]],
            vec![1.5, 0.5],
        )
        .unwrap();
        let th = theta(&[1.0, 2.0, 3.0]);
        let cold = solve_relaxation(&inst, &th, None).unwrap();
        assert!(cold.iterations > 0);
        let warm = solve_relaxation(&inst, &th, cold.basis.as_ref()).unwrap();
        assert_eq!(warm.iterations, 0);
        assert_eq!(warm.x_hat, cold.x_hat);
    }

    #[test]
    fn invalid_warm_basis_falls_back_to_cold_start() {
        let inst = MilpInstance::binary("w", vec![0.0; 2], &[vec![1.0, 1.0]], vec![1.0]).unwrap();
        let bogus = Basis {
            basic: vec![BasisVar::Structural(7)],
            at_upper: vec![],
        };
        let th = theta(&[1.0, 2.0]);
        let a = solve_relaxation(&inst, &th, Some(&bogus)).unwrap();
        let b = solve_relaxation(&inst, &th, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn continuous_bounds_and_unbounded() {
        // min -y with y free above and x + y >= 1: unbounded.
        let rows = vec![SparseRow::from_dense(&[1.0, 1.0]).unwrap()];
        let inst = MilpInstance::new(
            "u",
            vec![0.0, 0.0],
            rows.clone(),
            vec![1.0],
            vec![VarKind::Binary, VarKind::Continuous],
            vec![(0.0, 1.0), (0.0, f64::INFINITY)],
        )
        .unwrap();
        let sol = solve_relaxation(&inst, &theta(&[0.0, -1.0]), None).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);

        // Free continuous variable with a lower-bounding row: min y s.t. y - x >= -2.5.
        let rows = vec![SparseRow::from_dense(&[-1.0, 1.0]).unwrap()];
        let inst = MilpInstance::new(
            "f",
            vec![0.0, 0.0],
            rows,
            vec![-2.5],
            vec![VarKind::Binary, VarKind::Continuous],
            vec![(0.0, 1.0), (f64::NEG_INFINITY, f64::INFINITY)],
        )
        .unwrap();
        let sol = solve_relaxation(&inst, &theta(&[0.0, 1.0]), None).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 2.5).abs() < 1e-12);

        // Upper-bounded only: x <= 3, min -x.
        let inst = MilpInstance::new(
            "h",
            vec![0.0],
            vec![],
            vec![],
            vec![VarKind::Continuous],
            vec![(f64::NEG_INFINITY, 3.0)],
        )
        .unwrap();
        let sol = solve_relaxation(&inst, &theta(&[-1.0]), None).unwrap();
        assert_eq!(sol.x_hat.values(), &[3.0]);
    }

    #[test]
    fn equality_rows_with_redundancy() {
        // x0 + x1 = 1 twice (redundant), min x0.
        let inst = MilpInstance::binary(
            "eq",
            vec![0.0; 2],
            &[
                vec![1.0, 1.0],
                vec![-1.0, -1.0],
                vec![1.0, 1.0],
                vec![-1.0, -1.0],
            ],
            vec![1.0, -1.0, 1.0, -1.0],
        )
        .unwrap();
        let sol = solve_relaxation(&inst, &theta(&[1.0, 0.0]), None).unwrap();
        assert_eq!(sol.x_hat.values(), &[0.0, 1.0]);
        let again = solve_relaxation(&inst, &theta(&[1.0, 0.0]), sol.basis.as_ref()).unwrap();
        assert_eq!(again.iterations, 0);
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let inst = MilpInstance::binary("d", vec![0.0; 2], &[], vec![]).unwrap();
        assert!(solve_relaxation(&inst, &theta(&[1.0]), None).is_err());
        assert!(CostVector::new(vec![f64::NAN]).is_err());
    }
}
