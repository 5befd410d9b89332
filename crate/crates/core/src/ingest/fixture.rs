//! Line-oriented fixture format for small hand-written instances.
//!
//! ```text
//! # comment
//! name <identifier>                      optional
//! min|max <c_0> ... <c_{n-1}>            exactly once, before anything else
//! row >=|<=|= <a_0> ... <a_{n-1}> <rhs>  dense coefficients, then rhs
//! bin <i> <j> ...                        0-based binary column indices
//! bound UP|LO|FX|BV|MI|PL <col> [value]  MPS bound semantics
//! ```
//!
//! Columns are named `x0, x1, ...`, rows `r0, r1, ...`, the objective `obj`.
//! Binary columns form maximal contiguous marker ranges.

use std::fmt::Write as _;

use super::{parse_number, BoundKind, MpsBound, MpsColumn, MpsModel, MpsRow, ObjSense, RowSense};
use crate::error::{Error, Result};

pub fn parse_fixture(text: &str) -> Result<MpsModel> {
    let mut name = String::new();
    let mut sense = None;
    let mut objective: Vec<f64> = Vec::new();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut dense_rows: Vec<Vec<f64>> = Vec::new();
    let mut integer: Vec<bool> = Vec::new();
    let mut bounds = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let keyword = tokens[0];
        let args = &tokens[1..];
        if sense.is_none() && !matches!(keyword, "min" | "max" | "name") {
            return Err(Error::parse(line_no, "objective line must come first"));
        }
        let n = objective.len();
        match keyword {
            "name" => {
                name = args.join(" ");
            }
            "min" | "max" => {
                if sense.is_some() {
                    return Err(Error::parse(line_no, "duplicate objective line"));
                }
                sense = Some(if keyword == "min" {
                    ObjSense::Min
                } else {
                    ObjSense::Max
                });
                objective = args
                    .iter()
                    .map(|t| parse_number(t, line_no))
                    .collect::<Result<_>>()?;
                integer = vec![false; objective.len()];
            }
            "row" => {
                if args.len() != n + 2 {
                    return Err(Error::parse(
                        line_no,
                        format!("row needs a sense, {n} coefficients and a rhs"),
                    ));
                }
                let row_sense = match args[0] {
                    ">=" => RowSense::G,
                    "<=" => RowSense::L,
                    "=" | "==" => RowSense::E,
                    other => return Err(Error::parse(line_no, format!("unknown sense '{other}'"))),
                };
                let values = args[1..]
                    .iter()
                    .map(|t| parse_number(t, line_no))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(MpsRow {
                    name: format!("r{}", rows.len()),
                    sense: row_sense,
                });
                rhs.push(values[n]);
                dense_rows.push(values[..n].to_vec());
            }
            "bin" => {
                for t in args {
                    let i = column_index(t, n, line_no)?;
                    integer[i] = true;
                }
            }
            "bound" => {
                let kind = args
                    .first()
                    .and_then(|k| BoundKind::parse(k))
                    .ok_or_else(|| Error::parse(line_no, "bound needs a known type"))?;
                let column = column_index(
                    args.get(1)
                        .ok_or_else(|| Error::parse(line_no, "bound needs a column"))?,
                    n,
                    line_no,
                )?;
                let value = args.get(2).map(|v| parse_number(v, line_no)).transpose()?;
                if kind.needs_value() && value.is_none() {
                    return Err(Error::parse(line_no, "bound type requires a value"));
                }
                bounds.push(MpsBound {
                    kind,
                    column,
                    value,
                });
            }
            other => return Err(Error::parse(line_no, format!("unknown keyword '{other}'"))),
        }
    }

    let sense = sense.ok_or_else(|| Error::parse(0, "missing objective line"))?;
    let columns = (0..objective.len())
        .map(|j| MpsColumn {
            name: format!("x{j}"),
            integer: integer[j],
            entries: dense_rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[j] != 0.0)
                .map(|(r, row)| (r, row[j]))
                .collect(),
        })
        .collect();
    let mut marker_ranges = Vec::new();
    let mut j = 0;
    while j < integer.len() {
        if integer[j] {
            let start = j;
            while j < integer.len() && integer[j] {
                j += 1;
            }
            marker_ranges.push(start..j);
        } else {
            j += 1;
        }
    }

    Ok(MpsModel {
        name,
        sense,
        objective_name: "obj".into(),
        rows,
        columns,
        objective,
        rhs,
        objective_constant: 0.0,
        bounds,
        marker_ranges,
    })
}

fn column_index(token: &str, n: usize, line: usize) -> Result<usize> {
    token
        .parse::<usize>()
        .ok()
        .filter(|&i| i < n)
        .ok_or_else(|| Error::parse(line, format!("invalid column index '{token}'")))
}

/// Serializes a model to the fixture format. Row and column names, the
/// objective constant and marker boundaries other than maximal runs are not
/// representable and are lost.
pub fn write_fixture(model: &MpsModel) -> String {
    let mut out = String::new();
    if !model.name.is_empty() {
        let _ = writeln!(out, "name {}", model.name);
    }
    out.push_str(match model.sense {
        ObjSense::Min => "min",
        ObjSense::Max => "max",
    });
    for c in &model.objective {
        let _ = write!(out, " {c}");
    }
    out.push('\n');
    let n = model.num_columns();
    let mut dense = vec![vec![0.0; n]; model.num_rows()];
    for (j, col) in model.columns.iter().enumerate() {
        for &(r, v) in &col.entries {
            dense[r][j] = v;
        }
    }
    for ((row, coeffs), b) in model.rows.iter().zip(&dense).zip(&model.rhs) {
        out.push_str(match row.sense {
            RowSense::G => "row >=",
            RowSense::L => "row <=",
            RowSense::E => "row =",
        });
        for a in coeffs {
            let _ = write!(out, " {a}");
        }
        let _ = writeln!(out, " {b}");
    }
    let bins: Vec<String> = model
        .columns
        .iter()
        .enumerate()
        .filter(|(_, c)| c.integer)
        .map(|(j, _)| j.to_string())
        .collect();
    if !bins.is_empty() {
        let _ = writeln!(out, "bin {}", bins.join(" "));
    }
    for b in &model.bounds {
        let _ = write!(out, "bound {} {}", b.kind.as_str(), b.column);
        if let Some(v) = b.value {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}
