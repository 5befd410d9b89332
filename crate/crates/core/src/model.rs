//! In-memory binary MILP in the normal form `min c'x  s.t.  Ax >= b`,
//! with binary variables in `{0,1}` and optional continuous variables.

use serde::{Deserialize, Serialize};
use std::ops::Deref;

use crate::error::{check_len, Error, Result};

/// Default tolerance for integrality and feasibility tests.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Binary,
    Continuous,
}

/// One constraint row in sparse form. Indices are strictly increasing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseRow {
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseRow {
    /// Builds a row from `(column, coefficient)` pairs in any order.
    /// Explicit zeros are dropped; repeated columns are an error.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.retain(|&(_, v)| v != 0.0);
        pairs.sort_by_key(|&(i, _)| i);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInstance(
                "duplicate column index in row".into(),
            ));
        }
        if pairs.iter().any(|&(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite("constraint coefficient"));
        }
        let (indices, values) = pairs.into_iter().unzip();
        Ok(Self { indices, values })
    }

    pub fn from_dense(coeffs: &[f64]) -> Result<Self> {
        Self::from_pairs(coeffs.iter().copied().enumerate().collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.iter().map(|(i, a)| a * x[i]).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            indices: self.indices.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// A dense real vector with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().all(|v| v.is_finite()) {
            Ok(Self(values))
        } else {
            Err(Error::NonFinite("point"))
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Caller guarantees finiteness.
    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// Canonical binary MILP: `min c'x` subject to `A x >= b` and variable bounds.
///
/// Immutable after construction. Every binary variable has bounds exactly
/// `[0, 1]` and every row carries its cached norm `||[A_j b_j]||_2 > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpInstance {
    name: String,
    objective: Vec<f64>,
    rows: Vec<SparseRow>,
    rhs: Vec<f64>,
    var_kind: Vec<VarKind>,
    bounds: Vec<(f64, f64)>,
    row_norms: Vec<f64>,
    binaries: Vec<usize>,
}

impl MilpInstance {
    pub fn new(
        name: impl Into<String>,
        objective: Vec<f64>,
        rows: Vec<SparseRow>,
        rhs: Vec<f64>,
        var_kind: Vec<VarKind>,
        bounds: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let n = objective.len();
        check_len(n, var_kind.len())?;
        check_len(n, bounds.len())?;
        check_len(rows.len(), rhs.len())?;
        if objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("objective"));
        }
        if rhs.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("right-hand side"));
        }
        for (i, (&kind, &(lo, hi))) in var_kind.iter().zip(&bounds).enumerate() {
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::InvalidInstance(format!(
                    "bad bounds on variable {i}"
                )));
            }
            if kind == VarKind::Binary && (lo != 0.0 || hi != 1.0) {
                return Err(Error::InvalidInstance(format!(
                    "binary variable {i} must have bounds [0, 1], got [{lo}, {hi}]"
                )));
            }
        }
        let mut row_norms = Vec::with_capacity(rows.len());
        for (j, (row, &b)) in rows.iter().zip(&rhs).enumerate() {
            if let Some(&last) = row.indices().last() {
                if last >= n {
                    return Err(Error::InvalidInstance(format!(
                        "row {j} references column {last} but n = {n}"
                    )));
                }
            }
            let norm = (row.values().iter().map(|a| a * a).sum::<f64>() + b * b).sqrt();
            if norm == 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "row {j} has no coefficients and zero right-hand side"
                )));
            }
            row_norms.push(norm);
        }
        let binaries = var_kind
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == VarKind::Binary)
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            name: name.into(),
            objective,
            rows,
            rhs,
            var_kind,
            bounds,
            row_norms,
            binaries,
        })
    }

    /// Pure binary instance from dense rows.
    pub fn binary(
        name: impl Into<String>,
        objective: Vec<f64>,
        dense_rows: &[Vec<f64>],
        rhs: Vec<f64>,
    ) -> Result<Self> {
        let n = objective.len();
        let rows = dense_rows
            .iter()
            .map(|r| {
                check_len(n, r.len())?;
                SparseRow::from_dense(r)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            name,
            objective,
            rows,
            rhs,
            vec![VarKind::Binary; n],
            vec![(0.0, 1.0); n],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_cons(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &SparseRow {
        &self.rows[j]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn var_kind(&self) -> &[VarKind] {
        &self.var_kind
    }

    pub fn is_binary(&self, i: usize) -> bool {
        self.var_kind[i] == VarKind::Binary
    }

    /// Indices of binary variables, ascending.
    pub fn binaries(&self) -> &[usize] {
        &self.binaries
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn row_norms(&self) -> &[f64] {
        &self.row_norms
    }

    /// Normalized slack `(b_j - A_j x) / ||[A_j b_j]||`; positive iff row `j` is violated.
    pub fn normalized_slack(&self, j: usize, x: &[f64]) -> f64 {
        (self.rhs[j] - self.rows[j].dot(x)) / self.row_norms[j]
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// True iff every binary coordinate is within `tol` of 0 or 1.
    pub fn is_integral(&self, x: &[f64], tol: f64) -> Result<bool> {
        check_len(self.num_vars(), x.len())?;
        Ok(self
            .binaries
            .iter()
            .all(|&i| x[i].abs() <= tol || (1.0 - x[i]).abs() <= tol))
    }

    /// Row-normalized feasibility test, plus variable bounds within `tol`.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> Result<bool> {
        check_len(self.num_vars(), x.len())?;
        Ok(self.within_bounds(x, tol)
            && (0..self.num_cons()).all(|j| self.normalized_slack(j, x) <= tol))
    }

    /// Rows failing the normalized feasibility test, ascending.
    pub fn violated_rows(&self, x: &[f64], tol: f64) -> Result<Vec<usize>> {
        check_len(self.num_vars(), x.len())?;
        Ok((0..self.num_cons())
            .filter(|&j| self.normalized_slack(j, x) > tol)
            .collect())
    }

    fn within_bounds(&self, x: &[f64], tol: f64) -> bool {
        x.iter()
            .zip(&self.bounds)
            .all(|(&v, &(lo, hi))| v >= lo - tol && v <= hi + tol)
    }
}
