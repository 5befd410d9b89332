use std::path::{Path, PathBuf};

use diffpump::engine::{run_differentiable_pump, PumpConfig};
use diffpump::ingest::{read_instance, ReadError};
use diffpump::Error;
use rayon::prelude::*;

use crate::report::{ReportRow, SuiteReport, STATUS_PARSE_ERROR, STATUS_SOLVER_ERROR};
use crate::CliError;

/// Instance files of `dir` (`.mps`, `.fixture`, any case), sorted by file name.
pub fn list_instances(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        let known = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("mps") || e.eq_ignore_ascii_case("fixture"));
        if path.is_file() && known {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.is_empty() {
        return Err(CliError::Usage(format!(
            "no .mps or .fixture instances in {}",
            dir.display()
        )));
    }
    Ok(files)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Per-instance seed: a SplitMix64 finalizer over the base seed and a hash of the file name.
/// Depends on nothing else, so adding or removing files never changes other runs.
pub fn instance_seed(base: u64, file_name: &str) -> u64 {
    let mut z = base ^ fnv1a(file_name.as_bytes());
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Runs `cfg` on one file. Unreadable or unsupported files become `ParseError` rows.
pub fn run_one(path: &Path, cfg: &PumpConfig, timing: bool) -> ReportRow {
    let name = file_name(path);
    let cfg = PumpConfig {
        seed: instance_seed(cfg.seed, &name),
        ..cfg.clone()
    };
    let inst = match read_instance(path) {
        Ok(inst) => inst,
        Err(ReadError::Io(_)) | Err(ReadError::Format(_)) => {
            return ReportRow::failed(&name, &cfg, STATUS_PARSE_ERROR)
        }
    };
    match run_differentiable_pump(&inst, &cfg) {
        Ok(result) => ReportRow::from_result(&name, &cfg, &result, timing),
        Err(Error::InstanceLpInfeasible) => ReportRow::failed(&name, &cfg, "LpInfeasible"),
        Err(_) => ReportRow::failed(&name, &cfg, STATUS_SOLVER_ERROR),
    }
}

/// Runs `cfg` over `files` on `jobs` threads; rows keep the order of `files`.
pub fn run_suite(
    files: &[PathBuf],
    cfg: &PumpConfig,
    jobs: usize,
    timing: bool,
) -> Result<SuiteReport, CliError> {
    let rows = if jobs <= 1 {
        files.iter().map(|f| run_one(f, cfg, timing)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
        pool.install(|| files.par_iter().map(|f| run_one(f, cfg, timing)).collect())
    };
    Ok(SuiteReport::new(rows))
}
