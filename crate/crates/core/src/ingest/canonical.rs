use super::{BoundKind, MpsModel, ObjSense, RowSense};
use crate::error::{Error, Result};
use crate::model::{MilpInstance, SparseRow, VarKind};

/// Converts a parsed model to `min c'x, Ax >= b` form.
///
/// `L` rows are negated, `E` rows become an adjacent `(>=, negated >=)` pair,
/// and a maximization objective is negated. Columns under an integer marker
/// (or with a `BV` bound) become binary and must end up with bounds `[0, 1]`;
/// an integer column without an explicit upper bound defaults to `[0, 1]`.
/// Rows with no coefficients and a zero right-hand side are dropped.
pub fn canonicalize(model: &MpsModel) -> Result<MilpInstance> {
    let n = model.num_columns();
    let mut kinds = Vec::with_capacity(n);
    let mut bounds = Vec::with_capacity(n);
    let mut col_bounds: Vec<(f64, Option<f64>, bool)> = model
        .columns
        .iter()
        .map(|c| (0.0, None, c.integer))
        .collect();
    for b in &model.bounds {
        let (lo, hi, binary) = &mut col_bounds[b.column];
        let v = b.value;
        match b.kind {
            BoundKind::Up => *hi = v,
            BoundKind::Lo => *lo = v.unwrap_or(0.0),
            BoundKind::Fx => {
                *lo = v.unwrap_or(0.0);
                *hi = v;
            }
            BoundKind::Bv => {
                *lo = 0.0;
                *hi = Some(1.0);
                *binary = true;
            }
            BoundKind::Mi => *lo = f64::NEG_INFINITY,
            BoundKind::Pl => *hi = Some(f64::INFINITY),
        }
    }
    for (col, &(lo, hi, binary)) in model.columns.iter().zip(&col_bounds) {
        if binary {
            let hi = hi.unwrap_or(1.0);
            if lo != 0.0 || hi != 1.0 {
                return Err(Error::UnsupportedFeature(format!(
                    "integer column '{}' with bounds [{lo}, {hi}] (only binaries supported)",
                    col.name
                )));
            }
            kinds.push(VarKind::Binary);
            bounds.push((0.0, 1.0));
        } else {
            kinds.push(VarKind::Continuous);
            bounds.push((lo, hi.unwrap_or(f64::INFINITY)));
        }
    }

    let mut by_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.num_rows()];
    for (j, col) in model.columns.iter().enumerate() {
        for &(r, v) in &col.entries {
            by_row[r].push((j, v));
        }
    }

    let mut rows = Vec::with_capacity(model.num_rows());
    let mut rhs = Vec::with_capacity(model.num_rows());
    for ((row, pairs), &b) in model.rows.iter().zip(by_row).zip(&model.rhs) {
        let sparse = SparseRow::from_pairs(pairs)?;
        if sparse.is_empty() && b == 0.0 {
            continue;
        }
        match row.sense {
            RowSense::G => {
                rows.push(sparse);
                rhs.push(b);
            }
            RowSense::L => {
                rows.push(sparse.scaled(-1.0));
                rhs.push(-b);
            }
            RowSense::E => {
                rows.push(sparse.scaled(-1.0));
                rows.insert(rows.len() - 1, sparse);
                rhs.push(b);
                rhs.push(-b);
            }
        }
    }

    let objective = match model.sense {
        ObjSense::Min => model.objective.clone(),
        ObjSense::Max => model.objective.iter().map(|c| -c).collect(),
    };
    MilpInstance::new(model.name.clone(), objective, rows, rhs, kinds, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_fixture;

    #[test]
    fn less_equal_is_negated() {
        let m = parse_fixture("min 1\nrow <= 1 3\n").unwrap();
        let inst = canonicalize(&m).unwrap();
        assert_eq!(inst.row(0).values(), &[-1.0]);
        assert_eq!(inst.rhs(), &[-3.0]);
    }

    #[test]
    fn equality_is_split_into_adjacent_pair() {
        let m =
            parse_fixture("min 0 0\nrow >= 1 0 0\nrow = 1 1 1\nrow >= 0 1 0\nbin 0 1\n").unwrap();
        let inst = canonicalize(&m).unwrap();
        assert_eq!(inst.num_cons(), 4);
        assert_eq!(inst.row(1).values(), &[1.0, 1.0]);
        assert_eq!(inst.row(2).values(), &[-1.0, -1.0]);
        assert_eq!(inst.rhs(), &[0.0, 1.0, -1.0, 0.0]);
        assert_eq!(inst.row(3).indices(), &[1]);
    }

    #[test]
    fn maximization_is_negated() {
        let m = parse_fixture("max 1 -2\nbin 0 1\n").unwrap();
        let inst = canonicalize(&m).unwrap();
        assert_eq!(inst.objective(), &[-1.0, 2.0]);
    }

    #[test]
    fn general_integers_are_rejected() {
        let m = parse_fixture("min 1\nbin 0\nbound UP 0 5\n").unwrap();
        assert!(matches!(
            canonicalize(&m),
            Err(Error::UnsupportedFeature(_))
        ));
    }

    #[test]
    fn binary_marker_and_bv_map_to_binary() {
        let m = parse_fixture("min 1 1 1\nbin 0\nbound BV 1\nbound UP 2 4\n").unwrap();
        let inst = canonicalize(&m).unwrap();
        assert_eq!(
            inst.var_kind(),
            &[VarKind::Binary, VarKind::Binary, VarKind::Continuous]
        );
        assert_eq!(inst.bounds()[2], (0.0, 4.0));
    }

    #[test]
    fn trivial_zero_rows_are_dropped() {
        let m = parse_fixture("min 1\nrow >= 0 0\nrow >= 1 1\n").unwrap();
        let inst = canonicalize(&m).unwrap();
        assert_eq!(inst.num_cons(), 1);
    }
}
