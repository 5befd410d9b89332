//! Instance ingestion: MPS parsing, a small native fixture format, and
//! canonicalization into [`MilpInstance`](crate::model::MilpInstance).

mod canonical;
mod fixture;
mod mps;

pub use canonical::canonicalize;
pub use fixture::{parse_fixture, write_fixture};
pub use mps::{parse_mps, write_mps};

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::MilpInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjSense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSense {
    /// `>=`
    G,
    /// `<=`
    L,
    /// `=`
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    Up,
    Lo,
    Fx,
    Bv,
    Mi,
    Pl,
}

impl BoundKind {
    fn parse(token: &str) -> Option<Self> {
        Some(match token.to_ascii_uppercase().as_str() {
            "UP" => BoundKind::Up,
            "LO" => BoundKind::Lo,
            "FX" => BoundKind::Fx,
            "BV" => BoundKind::Bv,
            "MI" => BoundKind::Mi,
            "PL" => BoundKind::Pl,
            _ => return None,
        })
    }

    fn as_str(self) -> &'static str {
        match self {
            BoundKind::Up => "UP",
            BoundKind::Lo => "LO",
            BoundKind::Fx => "FX",
            BoundKind::Bv => "BV",
            BoundKind::Mi => "MI",
            BoundKind::Pl => "PL",
        }
    }

    fn needs_value(self) -> bool {
        matches!(self, BoundKind::Up | BoundKind::Lo | BoundKind::Fx)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpsRow {
    pub name: String,
    pub sense: RowSense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpsColumn {
    pub name: String,
    /// Declared inside an `INTORG`/`INTEND` marker block.
    pub integer: bool,
    /// `(constraint row index, coefficient)`, ascending by row, duplicates summed.
    pub entries: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpsBound {
    pub kind: BoundKind,
    pub column: usize,
    pub value: Option<f64>,
}

/// Structural image of an MPS file, before any normal-form conversion.
///
/// Only the first `N` row is kept as the objective; other free rows are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpsModel {
    pub name: String,
    pub sense: ObjSense,
    pub objective_name: String,
    pub rows: Vec<MpsRow>,
    pub columns: Vec<MpsColumn>,
    /// Objective coefficient per column.
    pub objective: Vec<f64>,
    /// Right-hand side per constraint row.
    pub rhs: Vec<f64>,
    /// Negated RHS entry of the objective row, if any (not used by the pump).
    pub objective_constant: f64,
    /// Bounds in file order.
    pub bounds: Vec<MpsBound>,
    /// Column ranges enclosed by integer markers, in file order.
    pub marker_ranges: Vec<Range<usize>>,
}

impl MpsModel {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    /// Builds a minimization model from dense rows `(sense, coefficients, rhs)`.
    /// Columns are `x0, x1, ...`, rows `r0, r1, ...`; `binary[j]` puts column `j`
    /// under an integer marker.
    pub fn from_dense(
        name: impl Into<String>,
        objective: Vec<f64>,
        rows: &[(RowSense, Vec<f64>, f64)],
        binary: &[bool],
    ) -> Self {
        let n = objective.len();
        let columns = (0..n)
            .map(|j| MpsColumn {
                name: format!("x{j}"),
                integer: binary[j],
                entries: rows
                    .iter()
                    .enumerate()
                    .filter(|(_, (_, a, _))| a[j] != 0.0)
                    .map(|(r, (_, a, _))| (r, a[j]))
                    .collect(),
            })
            .collect();
        let mut marker_ranges = Vec::new();
        let mut j = 0;
        while j < n {
            if binary[j] {
                let start = j;
                while j < n && binary[j] {
                    j += 1;
                }
                marker_ranges.push(start..j);
            } else {
                j += 1;
            }
        }
        Self {
            name: name.into(),
            sense: ObjSense::Min,
            objective_name: "obj".into(),
            rows: rows
                .iter()
                .enumerate()
                .map(|(r, (sense, _, _))| MpsRow {
                    name: format!("r{r}"),
                    sense: *sense,
                })
                .collect(),
            columns,
            objective,
            rhs: rows.iter().map(|(_, _, b)| *b).collect(),
            objective_constant: 0.0,
            bounds: Vec::new(),
            marker_ranges,
        }
    }
}

/// Reads an instance file, choosing the parser by extension:
/// `.fixture` uses the native fixture format, everything else is MPS.
pub fn read_instance(path: &std::path::Path) -> std::result::Result<MilpInstance, ReadError> {
    let text = std::fs::read_to_string(path)?;
    let model = if path.extension().is_some_and(|e| e == "fixture") {
        parse_fixture(&text)?
    } else {
        parse_mps(text.as_bytes())?
    };
    let mut inst = canonicalize(&model)?;
    if inst.name().is_empty() {
        if let Some(stem) = path.file_stem() {
            inst = inst.renamed(stem.to_string_lossy().into_owned());
        }
    }
    Ok(inst)
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Format(#[from] crate::error::Error),
}

pub(crate) fn parse_number(token: &str, line: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| crate::error::Error::parse(line, format!("invalid number '{token}'")))
}
