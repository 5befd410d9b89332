//! Report rows, aggregates, and their CSV/JSON encodings.
//!
//! CSV layout: a header with the columns of [`CSV_COLUMNS`], one row per
//! instance, then one `# key=value` comment line per aggregate.

use std::io::Write;

use diffpump::diffopt::JacobianMode;
use diffpump::engine::{Optimizer, PumpConfig, PumpResult, PumpStatus};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CSV_COLUMNS: [&str; 17] = [
    "instance",
    "preset",
    "eta",
    "gamma",
    "alpha",
    "beta",
    "lambda",
    "p",
    "jacobian",
    "optimizer",
    "seed",
    "status",
    "iterations",
    "restarts",
    "restart_ratio",
    "objective",
    "wall_ms",
];

pub const STATUS_PARSE_ERROR: &str = "ParseError";
pub const STATUS_SOLVER_ERROR: &str = "SolverError";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub preset: String,
    pub eta: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub p: f64,
    pub jacobian: String,
    pub optimizer: String,
    pub seed: u64,
    pub status: String,
    pub iterations: usize,
    pub restarts: usize,
    /// Restarts per iteration, as a fraction.
    pub restart_ratio: f64,
    pub objective: Option<f64>,
    pub wall_ms: f64,
}

pub fn jacobian_label(mode: JacobianMode) -> String {
    match mode {
        JacobianMode::MinusIdentity => "identity".into(),
        JacobianMode::Perturbation { eps, samples } => {
            format!("perturbation(eps={eps};M={samples})")
        }
    }
}

pub fn optimizer_label(opt: Optimizer) -> String {
    match opt {
        Optimizer::Plain => "gd".into(),
        Optimizer::Momentum { mu } => format!("momentum({mu})"),
        Optimizer::Adam { .. } => "adam".into(),
    }
}

impl ReportRow {
    fn base(instance: &str, cfg: &PumpConfig, status: &str) -> Self {
        let w = &cfg.weights;
        Self {
            instance: instance.to_string(),
            preset: cfg.preset_name.clone().unwrap_or_else(|| "custom".into()),
            eta: cfg.eta,
            gamma: w.gamma,
            alpha: w.alpha,
            beta: w.beta,
            lambda: w.lambda,
            p: w.p,
            jacobian: jacobian_label(cfg.jacobian),
            optimizer: optimizer_label(cfg.optimizer),
            seed: cfg.seed,
            status: status.to_string(),
            iterations: 0,
            restarts: 0,
            restart_ratio: 0.0,
            objective: None,
            wall_ms: 0.0,
        }
    }

    pub fn from_result(
        instance: &str,
        cfg: &PumpConfig,
        result: &PumpResult,
        timing: bool,
    ) -> Self {
        let objective = match &result.status {
            PumpStatus::Found { objective, .. } => Some(*objective),
            _ => None,
        };
        Self {
            iterations: result.iterations,
            restarts: result.restarts,
            restart_ratio: result.restart_ratio(),
            objective,
            wall_ms: if timing {
                result.wall_time.as_secs_f64() * 1e3
            } else {
                0.0
            },
            ..Self::base(instance, cfg, result.status.label())
        }
    }

    pub fn failed(instance: &str, cfg: &PumpConfig, status: &str) -> Self {
        Self::base(instance, cfg, status)
    }

    fn excluded(&self) -> bool {
        self.status == STATUS_PARSE_ERROR
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    /// Instances without a solution: iteration limit, infeasible relaxation or solver error.
    pub fails: usize,
    pub iteration_limit: usize,
    pub lp_infeasible: usize,
    pub solver_errors: usize,
    pub parse_errors: usize,
    pub total_iterations: usize,
    pub total_restarts: usize,
    /// `total_restarts / total_iterations`, as a fraction.
    pub restart_ratio_overall: f64,
}

impl Aggregates {
    pub fn from_rows(rows: &[ReportRow]) -> Self {
        let mut a = Aggregates::default();
        for row in rows {
            match row.status.as_str() {
                "IterationLimit" => a.iteration_limit += 1,
                "LpInfeasible" => a.lp_infeasible += 1,
                STATUS_SOLVER_ERROR => a.solver_errors += 1,
                STATUS_PARSE_ERROR => a.parse_errors += 1,
                _ => {}
            }
            if !row.excluded() {
                a.total_iterations += row.iterations;
                a.total_restarts += row.restarts;
            }
        }
        a.fails = a.iteration_limit + a.lp_infeasible + a.solver_errors;
        a.restart_ratio_overall = if a.total_iterations == 0 {
            0.0
        } else {
            a.total_restarts as f64 / a.total_iterations as f64
        };
        a
    }

    fn lines(&self) -> Vec<(&'static str, String)> {
        vec![
            ("fails", self.fails.to_string()),
            ("iteration_limit", self.iteration_limit.to_string()),
            ("lp_infeasible", self.lp_infeasible.to_string()),
            ("solver_errors", self.solver_errors.to_string()),
            ("parse_errors", self.parse_errors.to_string()),
            ("total_iterations", self.total_iterations.to_string()),
            ("total_restarts", self.total_restarts.to_string()),
            (
                "restart_ratio_overall",
                self.restart_ratio_overall.to_string(),
            ),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub rows: Vec<ReportRow>,
    pub aggregates: Aggregates,
}

impl SuiteReport {
    pub fn new(rows: Vec<ReportRow>) -> Self {
        let aggregates = Aggregates::from_rows(&rows);
        Self { rows, aggregates }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        let mut out = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        for (key, value) in self.aggregates.lines() {
            writeln!(out, "# {key}={value}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Parses a CSV report, including its aggregate comment lines.
    pub fn parse_csv(text: &str) -> Result<Self, CliError> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if header != CSV_COLUMNS {
            return Err(CliError::Usage(format!("unexpected CSV header {header:?}")));
        }
        let rows = reader
            .deserialize()
            .collect::<Result<Vec<ReportRow>, _>>()?;
        let mut aggregates = Aggregates::default();
        for line in text.lines().filter_map(|l| l.strip_prefix("# ")) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("bad aggregate line '{line}'")))?;
            let bad = || CliError::Usage(format!("bad aggregate value '{line}'"));
            let count = || value.parse::<usize>().map_err(|_| bad());
            match key {
                "fails" => aggregates.fails = count()?,
                "iteration_limit" => aggregates.iteration_limit = count()?,
                "lp_infeasible" => aggregates.lp_infeasible = count()?,
                "solver_errors" => aggregates.solver_errors = count()?,
                "parse_errors" => aggregates.parse_errors = count()?,
                "total_iterations" => aggregates.total_iterations = count()?,
                "total_restarts" => aggregates.total_restarts = count()?,
                "restart_ratio_overall" => {
                    aggregates.restart_ratio_overall = value.parse().map_err(|_| bad())?
                }
                _ => return Err(CliError::Usage(format!("unknown aggregate '{key}'"))),
            }
        }
        Ok(Self { rows, aggregates })
    }
}
