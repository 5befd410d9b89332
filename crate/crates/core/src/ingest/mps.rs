use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use super::{parse_number, BoundKind, MpsBound, MpsColumn, MpsModel, MpsRow, ObjSense, RowSense};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Bounds,
    End,
}

const UNSUPPORTED: &[&str] = &[
    "RANGES",
    "SOS",
    "QUADOBJ",
    "QMATRIX",
    "QSECTION",
    "QCMATRIX",
    "CSECTION",
    "INDICATORS",
    "LAZYCONS",
    "USERCUTS",
];

// 1-based inclusive column spans of the six fixed-format fields.
const FIXED_FIELDS: [(usize, usize); 6] = [(2, 3), (5, 12), (15, 22), (25, 36), (40, 47), (50, 61)];

fn is_num(s: &str) -> bool {
    s.parse::<f64>().is_ok()
}

fn columns_shape(f: &[&str]) -> bool {
    (f.len() == 3 || f.len() == 5) && f[2..].iter().step_by(2).all(|t| is_num(t))
}

fn rhs_shape(f: &[&str]) -> bool {
    match f.len() {
        2 | 4 => f[1..].iter().step_by(2).all(|t| is_num(t)),
        3 | 5 => f[2..].iter().step_by(2).all(|t| is_num(t)),
        _ => false,
    }
}

fn bounds_shape(f: &[&str]) -> bool {
    match f.len() {
        2 => true,
        3 => true,
        4 => is_num(f[3]),
        _ => false,
    }
}

fn fixed_fields(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for &(start, end) in &FIXED_FIELDS {
        if line.len() < start {
            break;
        }
        let stop = end.min(line.len());
        match line.get(start - 1..stop) {
            Some(field) => {
                let field = field.trim();
                if !field.is_empty() {
                    out.push(field);
                }
            }
            None => break,
        }
    }
    out
}

#[derive(Default)]
struct Builder {
    name: String,
    sense: Option<ObjSense>,
    objective_name: Option<String>,
    free_rows: Vec<String>,
    rows: Vec<MpsRow>,
    row_index: HashMap<String, usize>,
    columns: Vec<MpsColumn>,
    column_index: HashMap<String, usize>,
    // Per column: row -> position in `entries`, for duplicate summation.
    entry_slots: Vec<HashMap<usize, usize>>,
    objective: Vec<f64>,
    rhs: Vec<f64>,
    rhs_set: Option<String>,
    objective_constant: f64,
    bounds: Vec<MpsBound>,
    bound_set: Option<String>,
    marker_ranges: Vec<Range<usize>>,
    marker_open: Option<usize>,
}

enum RowTarget {
    Objective,
    Ignored,
    Constraint(usize),
}

impl Builder {
    fn row_target(&self, name: &str, line: usize) -> Result<RowTarget> {
        if self.objective_name.as_deref() == Some(name) {
            Ok(RowTarget::Objective)
        } else if let Some(&j) = self.row_index.get(name) {
            Ok(RowTarget::Constraint(j))
        } else if self.free_rows.iter().any(|r| r == name) {
            Ok(RowTarget::Ignored)
        } else {
            Err(Error::parse(line, format!("undeclared row '{name}'")))
        }
    }

    fn column(&mut self, name: &str) -> usize {
        if let Some(&j) = self.column_index.get(name) {
            return j;
        }
        let j = self.columns.len();
        self.columns.push(MpsColumn {
            name: name.to_string(),
            integer: self.marker_open.is_some(),
            entries: Vec::new(),
        });
        self.entry_slots.push(HashMap::new());
        self.objective.push(0.0);
        self.column_index.insert(name.to_string(), j);
        j
    }

    fn add_entry(&mut self, col: usize, row: &str, value: f64, line: usize) -> Result<()> {
        match self.row_target(row, line)? {
            RowTarget::Objective => self.objective[col] += value,
            RowTarget::Ignored => {}
            RowTarget::Constraint(r) => match self.entry_slots[col].get(&r) {
                Some(&slot) => self.columns[col].entries[slot].1 += value,
                None => {
                    self.entry_slots[col].insert(r, self.columns[col].entries.len());
                    self.columns[col].entries.push((r, value));
                }
            },
        }
        Ok(())
    }

    fn add_rhs(&mut self, row: &str, value: f64, line: usize) -> Result<()> {
        match self.row_target(row, line)? {
            RowTarget::Objective => self.objective_constant = -value,
            RowTarget::Ignored => {}
            RowTarget::Constraint(r) => self.rhs[r] = value,
        }
        Ok(())
    }

    fn finish(mut self) -> Result<MpsModel> {
        if let Some(start) = self.marker_open.take() {
            self.marker_ranges.push(start..self.columns.len());
        }
        let objective_name = self
            .objective_name
            .ok_or_else(|| Error::parse(0, "no objective (N) row"))?;
        for col in &mut self.columns {
            col.entries.sort_by_key(|&(r, _)| r);
        }
        Ok(MpsModel {
            name: self.name,
            sense: self.sense.unwrap_or(ObjSense::Min),
            objective_name,
            rows: self.rows,
            columns: self.columns,
            objective: self.objective,
            rhs: self.rhs,
            objective_constant: self.objective_constant,
            bounds: self.bounds,
            marker_ranges: self.marker_ranges,
        })
    }
}

fn parse_objsense(token: &str, line: usize) -> Result<ObjSense> {
    match token.to_ascii_uppercase().as_str() {
        "MIN" | "MINIMIZE" => Ok(ObjSense::Min),
        "MAX" | "MAXIMIZE" => Ok(ObjSense::Max),
        other => Err(Error::parse(line, format!("invalid OBJSENSE '{other}'"))),
    }
}

/// Parses fixed- or free-format MPS.
///
/// Data lines are split on whitespace; when that yields a field count the
/// section cannot accept and the file is not marked free-format, the fixed
/// column positions are used instead.
pub fn parse_mps(text: &[u8]) -> Result<MpsModel> {
    let text = std::str::from_utf8(text).map_err(|_| Error::parse(0, "input is not UTF-8"))?;
    let mut b = Builder::default();
    let mut section: Option<Section> = None;
    let mut free_format = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }

        if !line.starts_with(char::is_whitespace) {
            let mut tokens = line.split_whitespace();
            let head = tokens.next().unwrap_or_default().to_ascii_uppercase();
            section = Some(match head.as_str() {
                "NAME" => {
                    let rest: Vec<&str> = tokens.collect();
                    free_format = rest.iter().any(|t| t.eq_ignore_ascii_case("FREE"));
                    b.name = rest
                        .iter()
                        .find(|t| !t.eq_ignore_ascii_case("FREE"))
                        .map(|s| s.to_string())
                        .unwrap_or_default();
                    Section::Name
                }
                "OBJSENSE" => {
                    if let Some(tok) = tokens.next() {
                        b.sense = Some(parse_objsense(tok, line_no)?);
                    }
                    Section::ObjSense
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other if UNSUPPORTED.contains(&other) => {
                    return Err(Error::UnsupportedFeature(other.to_string()));
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        format!("malformed section header '{other}'"),
                    ))
                }
            });
            if section == Some(Section::End) {
                break;
            }
            continue;
        }

        let ws: Vec<&str> = line.split_whitespace().collect();
        let pick = |ok: fn(&[&str]) -> bool| -> Vec<&str> {
            if ok(&ws) || free_format {
                ws.clone()
            } else {
                let fixed = fixed_fields(line);
                if ok(&fixed) {
                    fixed
                } else {
                    ws.clone()
                }
            }
        };

        match section {
            None | Some(Section::Name) | Some(Section::End) => {
                return Err(Error::parse(line_no, "data line outside of a section"));
            }
            Some(Section::ObjSense) => {
                b.sense = Some(parse_objsense(ws[0], line_no)?);
            }
            Some(Section::Rows) => {
                let f = pick(|f| f.len() == 2);
                if f.len() != 2 {
                    return Err(Error::parse(line_no, "ROWS entry needs sense and name"));
                }
                let name = f[1].to_string();
                if b.row_index.contains_key(&name) || b.objective_name.as_ref() == Some(&name) {
                    return Err(Error::parse(line_no, format!("duplicate row '{name}'")));
                }
                let sense = match f[0].to_ascii_uppercase().as_str() {
                    "N" => {
                        if b.objective_name.is_none() {
                            b.objective_name = Some(name);
                        } else {
                            b.free_rows.push(name);
                        }
                        continue;
                    }
                    "G" => RowSense::G,
                    "L" => RowSense::L,
                    "E" => RowSense::E,
                    other => {
                        return Err(Error::parse(
                            line_no,
                            format!("unknown row sense '{other}'"),
                        ))
                    }
                };
                b.row_index.insert(name.clone(), b.rows.len());
                b.rows.push(MpsRow { name, sense });
                b.rhs.push(0.0);
            }
            Some(Section::Columns) => {
                if ws.len() >= 3 && ws[1].trim_matches('\'').eq_ignore_ascii_case("MARKER") {
                    match ws[2].trim_matches('\'').to_ascii_uppercase().as_str() {
                        "INTORG" => {
                            if b.marker_open.is_some() {
                                return Err(Error::parse(line_no, "nested INTORG marker"));
                            }
                            b.marker_open = Some(b.columns.len());
                        }
                        "INTEND" => {
                            let start = b
                                .marker_open
                                .take()
                                .ok_or_else(|| Error::parse(line_no, "INTEND without INTORG"))?;
                            b.marker_ranges.push(start..b.columns.len());
                        }
                        other => {
                            return Err(Error::parse(line_no, format!("unknown marker '{other}'")))
                        }
                    }
                    continue;
                }
                let f = pick(columns_shape);
                if f.len() != 3 && f.len() != 5 {
                    return Err(Error::parse(line_no, "COLUMNS entry needs 3 or 5 fields"));
                }
                let col = b.column(f[0]);
                for pair in f[1..].chunks(2) {
                    let value = parse_number(pair[1], line_no)?;
                    b.add_entry(col, pair[0], value, line_no)?;
                }
            }
            Some(Section::Rhs) => {
                let f = pick(rhs_shape);
                let pairs = match f.len() {
                    2 | 4 => &f[..],
                    3 | 5 => {
                        let set = f[0].to_string();
                        match &b.rhs_set {
                            None => b.rhs_set = Some(set),
                            Some(s) if *s != set => continue,
                            Some(_) => {}
                        }
                        &f[1..]
                    }
                    _ => return Err(Error::parse(line_no, "RHS entry needs 2 to 5 fields")),
                };
                for pair in pairs.chunks(2) {
                    let value = parse_number(pair[1], line_no)?;
                    b.add_rhs(pair[0], value, line_no)?;
                }
            }
            Some(Section::Bounds) => {
                let f = pick(bounds_shape);
                let kind = BoundKind::parse(f[0]).ok_or_else(|| {
                    Error::UnsupportedFeature(format!("bound type {}", f[0].to_ascii_uppercase()))
                })?;
                let is_column = |s: &str| b.column_index.contains_key(s);
                let is_number = |s: &str| s.parse::<f64>().is_ok();
                // Resolve the optional set name: [kind, set?, column, value?].
                let (set, col, value) = match f.len() {
                    4 => (Some(f[1]), f[2], Some(f[3])),
                    3 if kind.needs_value() => (None, f[1], Some(f[2])),
                    3 if is_column(f[1]) && is_number(f[2]) && !is_column(f[2]) => {
                        (None, f[1], Some(f[2]))
                    }
                    3 => (Some(f[1]), f[2], None),
                    2 if !kind.needs_value() => (None, f[1], None),
                    _ => return Err(Error::parse(line_no, "malformed BOUNDS entry")),
                };
                if let Some(set) = set {
                    match &b.bound_set {
                        None => b.bound_set = Some(set.to_string()),
                        Some(s) if s != set => continue,
                        Some(_) => {}
                    }
                }
                let column = *b.column_index.get(col).ok_or_else(|| {
                    Error::parse(line_no, format!("bound on unknown column '{col}'"))
                })?;
                let value = value.map(|v| parse_number(v, line_no)).transpose()?;
                b.bounds.push(MpsBound {
                    kind,
                    column,
                    value,
                });
            }
        }
    }
    b.finish()
}

/// Writes a model as whitespace-separated MPS that [`parse_mps`] reads back
/// to the same [`MpsModel`].
pub fn write_mps(model: &MpsModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", model.name);
    if model.sense == ObjSense::Max {
        out.push_str("OBJSENSE\n    MAX\n");
    }
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {}", model.objective_name);
    for row in &model.rows {
        let s = match row.sense {
            RowSense::G => "G",
            RowSense::L => "L",
            RowSense::E => "E",
        };
        let _ = writeln!(out, " {s}  {}", row.name);
    }
    out.push_str("COLUMNS\n");
    let mut marker = 0usize;
    let mut open_at: Option<usize> = None;
    for (j, col) in model.columns.iter().enumerate() {
        if let Some(r) = open_at {
            if model.marker_ranges[r].end == j {
                let _ = writeln!(out, "    MARKER{r}END  'MARKER'  'INTEND'");
                open_at = None;
            }
        }
        while open_at.is_none()
            && marker < model.marker_ranges.len()
            && model.marker_ranges[marker].start == j
        {
            let r = marker;
            marker += 1;
            let _ = writeln!(out, "    MARKER{r}  'MARKER'  'INTORG'");
            if model.marker_ranges[r].is_empty() {
                let _ = writeln!(out, "    MARKER{r}END  'MARKER'  'INTEND'");
            } else {
                open_at = Some(r);
            }
        }
        let _ = writeln!(
            out,
            "    {}  {}  {}",
            col.name, model.objective_name, model.objective[j]
        );
        for &(r, v) in &col.entries {
            let _ = writeln!(out, "    {}  {}  {}", col.name, model.rows[r].name, v);
        }
    }
    if let Some(r) = open_at {
        let _ = writeln!(out, "    MARKER{r}END  'MARKER'  'INTEND'");
    }
    while marker < model.marker_ranges.len() {
        let _ = writeln!(out, "    MARKER{marker}  'MARKER'  'INTORG'");
        let _ = writeln!(out, "    MARKER{marker}END  'MARKER'  'INTEND'");
        marker += 1;
    }
    out.push_str("RHS\n");
    if model.objective_constant != 0.0 {
        let _ = writeln!(
            out,
            "    RHS  {}  {}",
            model.objective_name, -model.objective_constant
        );
    }
    for (row, &v) in model.rows.iter().zip(&model.rhs) {
        if v != 0.0 {
            let _ = writeln!(out, "    RHS  {}  {}", row.name, v);
        }
    }
    if !model.bounds.is_empty() {
        out.push_str("BOUNDS\n");
        for bound in &model.bounds {
            let name = &model.columns[bound.column].name;
            match bound.value {
                Some(v) => {
                    let _ = writeln!(out, " {} BND  {}  {}", bound.kind.as_str(), name, v);
                }
                None => {
                    let _ = writeln!(out, " {} BND  {}", bound.kind.as_str(), name);
                }
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}
