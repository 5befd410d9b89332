//! Hyperparameter grids.
//!
//! A grid file lists candidate values per axis, one axis per line:
//!
//! ```text
//! # comment
//! eta = 0.5, 0.8, 1
//! gamma = 0.1, 1
//! ```
//!
//! Axes are `eta`, `gamma`, `p`, `lambda`, `beta` and `momentum`. Missing axes
//! keep the base configuration. Points are enumerated with `eta` outermost and
//! `momentum` innermost, values in file order. A momentum of 0 means plain
//! gradient descent.

use std::path::PathBuf;

use diffpump::engine::{Optimizer, PumpConfig};
use serde::{Deserialize, Serialize};

use crate::report::SuiteReport;
use crate::suite::run_suite;
use crate::CliError;

pub const AXES: [&str; 6] = ["eta", "gamma", "p", "lambda", "beta", "momentum"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridSpec {
    /// Candidate values per entry of [`AXES`]; empty means "not varied".
    pub axes: [Vec<f64>; 6],
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut spec = GridSpec::default();
        let mut seen = [false; 6];
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| CliError::Grid {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (key, values) = line
                .split_once('=')
                .ok_or_else(|| err("expected 'axis = v1, v2, ...'".into()))?;
            let key = key.trim();
            let axis = AXES
                .iter()
                .position(|a| a.eq_ignore_ascii_case(key))
                .ok_or_else(|| err(format!("unknown axis '{key}' (valid: {})", AXES.join(", "))))?;
            if seen[axis] {
                return Err(err(format!("axis '{key}' given twice")));
            }
            seen[axis] = true;
            let parsed = values
                .split(',')
                .map(str::trim)
                .map(|v| {
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| err(format!("invalid value '{v}'")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if parsed.is_empty() {
                return Err(err(format!("axis '{key}' has no values")));
            }
            spec.axes[axis] = parsed;
        }
        if spec.axes.iter().all(Vec::is_empty) {
            return Err(CliError::Grid {
                line: text.lines().count(),
                message: "grid defines no axes".into(),
            });
        }
        Ok(spec)
    }

    /// All configurations of the grid, in enumeration order.
    pub fn points(&self, base: &PumpConfig) -> Vec<PumpConfig> {
        let mut points = vec![base.clone()];
        for (axis, values) in self.axes.iter().enumerate() {
            if values.is_empty() {
                continue;
            }
            points = points
                .into_iter()
                .flat_map(|cfg| values.iter().map(move |&v| with_axis(cfg.clone(), axis, v)))
                .collect();
        }
        points
    }
}

fn with_axis(mut cfg: PumpConfig, axis: usize, v: f64) -> PumpConfig {
    match AXES[axis] {
        "eta" => cfg.eta = v,
        "gamma" => cfg.weights.gamma = v,
        "p" => cfg.weights.p = v,
        "lambda" => cfg.weights.lambda = v,
        "beta" => cfg.weights.beta = v,
        _ => {
            cfg.optimizer = if v == 0.0 {
                Optimizer::Plain
            } else {
                Optimizer::Momentum { mu: v }
            }
        }
    }
    cfg
}

fn momentum_of(cfg: &PumpConfig) -> f64 {
    match cfg.optimizer {
        Optimizer::Momentum { mu } => mu,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub point: usize,
    pub eta: f64,
    pub gamma: f64,
    pub p: f64,
    pub lambda: f64,
    pub beta: f64,
    pub momentum: f64,
    pub fails: usize,
    pub iterations: usize,
    pub restart_ratio: f64,
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    /// One suite per grid point, in enumeration order.
    pub suites: Vec<SuiteReport>,
    /// Sorted by `(fails, iterations)`; the first row is marked best.
    pub summary: Vec<SummaryRow>,
}

pub fn run_grid(
    spec: &GridSpec,
    base: &PumpConfig,
    files: &[PathBuf],
    jobs: usize,
    timing: bool,
) -> Result<GridReport, CliError> {
    let points = spec.points(base);
    let mut suites = Vec::with_capacity(points.len());
    for cfg in &points {
        cfg.validate()?;
        suites.push(run_suite(files, cfg, jobs, timing)?);
    }
    Ok(GridReport {
        summary: summarize(&points, &suites),
        suites,
    })
}

pub fn summarize(points: &[PumpConfig], suites: &[SuiteReport]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = points
        .iter()
        .zip(suites)
        .enumerate()
        .map(|(point, (cfg, suite))| SummaryRow {
            point,
            eta: cfg.eta,
            gamma: cfg.weights.gamma,
            p: cfg.weights.p,
            lambda: cfg.weights.lambda,
            beta: cfg.weights.beta,
            momentum: momentum_of(cfg),
            fails: suite.aggregates.fails,
            iterations: suite.aggregates.total_iterations,
            restart_ratio: suite.aggregates.restart_ratio_overall,
            best: false,
        })
        .collect();
    rows.sort_by_key(|r| (r.fails, r.iterations));
    if let Some(first) = rows.first_mut() {
        first.best = true;
    }
    rows
}

impl GridReport {
    /// Summary table as CSV; the best row has `best = *`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from(
            "point,eta,gamma,p,lambda,beta,momentum,fails,iterations,restart_ratio,best\n",
        );
        for r in &self.summary {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.point,
                r.eta,
                r.gamma,
                r.p,
                r.lambda,
                r.beta,
                r.momentum,
                r.fails,
                r.iterations,
                r.restart_ratio,
                if r.best { "*" } else { "" }
            ));
        }
        out
    }

    /// Every per-instance row of every grid point as one CSV report.
    pub fn rows_report(&self) -> SuiteReport {
        SuiteReport::new(
            self.suites
                .iter()
                .flat_map(|s| s.rows.iter().cloned())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_enumerates_in_axis_order() {
        let spec = GridSpec::parse("# sweep\ngamma = 0.95, 1\neta = 1, 0.5\n").unwrap();
        let points = spec.points(&PumpConfig::default());
        let pairs: Vec<(f64, f64)> = points.iter().map(|c| (c.eta, c.weights.gamma)).collect();
        assert_eq!(
            pairs,
            vec![(1.0, 0.95), (1.0, 1.0), (0.5, 0.95), (0.5, 1.0)]
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        for (text, line) in [
            ("eta = 1\nbogus = 2\n", 2),
            ("\n\neta = 1, x\n", 3),
            ("eta = 1\neta = 2\n", 2),
            ("eta 1\n", 1),
        ] {
            match GridSpec::parse(text) {
                Err(CliError::Grid { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(GridSpec::parse("# nothing\n").is_err());
    }

    #[test]
    fn momentum_axis_sets_optimizer() {
        let spec = GridSpec::parse("momentum = 0, 0.5").unwrap();
        let points = spec.points(&PumpConfig::default());
        assert_eq!(points[0].optimizer, Optimizer::Plain);
        assert_eq!(points[1].optimizer, Optimizer::Momentum { mu: 0.5 });
    }

    #[test]
    fn ties_on_fails_prefer_fewer_iterations() {
        let points = vec![PumpConfig::default(); 3];
        let mut suites = vec![SuiteReport::default(); 3];
        suites[0].aggregates.fails = 1;
        suites[0].aggregates.total_iterations = 5;
        suites[1].aggregates.fails = 0;
        suites[1].aggregates.total_iterations = 90;
        suites[2].aggregates.fails = 0;
        suites[2].aggregates.total_iterations = 40;
        let summary = summarize(&points, &suites);
        assert_eq!(
            summary.iter().map(|r| r.point).collect::<Vec<_>>(),
            vec![2, 1, 0]
        );
        assert!(summary[0].best && !summary[1].best);
    }
}
