//! Command-line harness for the `diffpump` library: single runs, suites and grids.

pub mod args;
pub mod grid;
pub mod report;
pub mod suite;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::Parser;
use diffpump::engine::{run_differentiable_pump, PumpConfig, PumpStatus};
use diffpump::ingest::{read_instance, ReadError};

use args::{build_config, Cli, Command, Format, OutputArgs};
use grid::{run_grid, GridSpec};
use report::{ReportRow, SuiteReport};
use suite::{list_instances, run_suite};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ITERATION_LIMIT: i32 = 2;
pub const EXIT_LP_INFEASIBLE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] diffpump::Error),
    #[error("grid line {line}: {message}")]
    Grid { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: ReadError },
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_FOUND
            };
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(&a, stdout),
        Command::Suite(a) => cmd_suite(&a, stdout),
        Command::Grid(a) => cmd_grid(&a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

enum Sink {
    Stdout,
    File(String),
}

fn resolve_output(out: &OutputArgs) -> (Sink, Format) {
    match out.out.as_deref() {
        None => (Sink::Stdout, out.format.unwrap_or(Format::Csv)),
        Some(s) if s.eq_ignore_ascii_case("csv") => (Sink::Stdout, Format::Csv),
        Some(s) if s.eq_ignore_ascii_case("json") => (Sink::Stdout, Format::Json),
        Some(path) => {
            let by_ext = Path::new(path)
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("json"))
                .then_some(Format::Json);
            let format = out.format.or(by_ext).unwrap_or(Format::Csv);
            (Sink::File(path.to_string()), format)
        }
    }
}

fn emit(out: &OutputArgs, report: &SuiteReport, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (sink, format) = resolve_output(out);
    let text = match format {
        Format::Csv => report.to_csv_string(),
        Format::Json => report.to_json_string(),
    };
    match sink {
        Sink::Stdout => stdout.write_all(text.as_bytes())?,
        Sink::File(path) => std::fs::write(path, text)?,
    }
    Ok(())
}

fn load(path: &Path) -> Result<diffpump::MilpInstance, CliError> {
    read_instance(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_run(a: &args::RunArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = PumpConfig {
        record_trace: a.trace.is_some(),
        ..build_config(&a.pump)?
    };
    let inst = load(&a.instance)?;
    let name = a
        .instance
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let timing = !a.output.omit_timing;
    let (row, code) = match run_differentiable_pump(&inst, &cfg) {
        Ok(result) => {
            if let (Some(path), Some(trace)) = (&a.trace, &result.trace) {
                let mut w = BufWriter::new(File::create(path)?);
                for record in &trace.records {
                    serde_json::to_writer(&mut w, record).map_err(std::io::Error::from)?;
                    writeln!(w)?;
                }
                w.flush()?;
            }
            let code = match result.status {
                PumpStatus::Found { .. } => EXIT_FOUND,
                PumpStatus::IterationLimit => EXIT_ITERATION_LIMIT,
                PumpStatus::LpInfeasible => EXIT_LP_INFEASIBLE,
            };
            (ReportRow::from_result(&name, &cfg, &result, timing), code)
        }
        Err(diffpump::Error::InstanceLpInfeasible) => (
            ReportRow::failed(&name, &cfg, "LpInfeasible"),
            EXIT_LP_INFEASIBLE,
        ),
        Err(e) => return Err(e.into()),
    };
    let (sink, format) = resolve_output(&a.output);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&row).map_err(std::io::Error::from)? + "\n",
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(report::CSV_COLUMNS)?;
            w.serialize(&row)?;
            String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?)
                .expect("csv output is UTF-8")
        }
    };
    match sink {
        Sink::Stdout => stdout.write_all(text.as_bytes())?,
        Sink::File(path) => std::fs::write(path, text)?,
    }
    Ok(code)
}

fn check_jobs(jobs: usize) -> Result<(), CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(())
}

fn cmd_suite(a: &args::SuiteArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    check_jobs(a.jobs)?;
    let cfg = build_config(&a.pump)?;
    let files = list_instances(&a.dir)?;
    let report = run_suite(&files, &cfg, a.jobs, !a.output.omit_timing)?;
    emit(&a.output, &report, stdout)?;
    Ok(EXIT_FOUND)
}

fn cmd_grid(a: &args::GridArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    check_jobs(a.jobs)?;
    let base = build_config(&a.pump)?;
    let spec = GridSpec::parse(&std::fs::read_to_string(&a.spec)?)?;
    let files = list_instances(&a.dir)?;
    let report = run_grid(&spec, &base, &files, a.jobs, !a.output.omit_timing)?;
    stdout.write_all(report.summary_csv().as_bytes())?;
    if let (Sink::File(path), format) = resolve_output(&a.output) {
        let rows = report.rows_report();
        let text = match format {
            Format::Csv => rows.to_csv_string(),
            Format::Json => rows.to_json_string(),
        };
        std::fs::write(path, text)?;
    }
    Ok(EXIT_FOUND)
}
