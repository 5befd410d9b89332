use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffpump::diffopt::JacobianMode;
use diffpump::engine::{make_preset, Optimizer, PumpConfig};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "diffpump",
    version,
    about = "Differentiable feasibility pump for binary MILPs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one pump on a single instance.
    Run(RunArgs),
    /// Run one configuration over every instance in a directory.
    Suite(SuiteArgs),
    /// Run a hyperparameter grid over a directory of instances.
    Grid(GridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
pub enum Preset {
    Fp,
    Dp1,
    Dp2,
    Dp3,
    Dp4,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fp => "FP",
            Preset::Dp1 => "DP1",
            Preset::Dp2 => "DP2",
            Preset::Dp3 => "DP3",
            Preset::Dp4 => "DP4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum JacobianArg {
    Identity,
    Perturbation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerArg {
    Gd,
    Momentum,
    Adam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Pump hyperparameters. Without `--preset` the FP values are the base; every flag overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct PumpArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub eps_round: Option<f64>,
    #[arg(long)]
    pub eps_feas: Option<f64>,
    #[arg(long, value_enum)]
    pub jacobian: Option<JacobianArg>,
    #[arg(long, default_value_t = 1.0)]
    pub pert_eps: f64,
    #[arg(long, default_value_t = 1)]
    pub pert_samples: usize,
    #[arg(long, value_enum)]
    pub optimizer: Option<OptimizerArg>,
    /// Momentum coefficient; implies `--optimizer momentum` when given alone.
    #[arg(long)]
    pub momentum: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output file, or `csv` / `json` for standard output in that format.
    #[arg(long)]
    pub out: Option<String>,
    /// Report format; defaults to the `--out` extension, else CSV.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write `wall_ms = 0` so reruns produce byte-identical reports.
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[command(flatten)]
    pub pump: PumpArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Write the per-iteration trace as JSON lines.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long)]
    pub dir: PathBuf,
    #[command(flatten)]
    pub pump: PumpArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Worker threads; rows are reported in filename order regardless.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Grid file with lines like `eta = 0.5, 1`.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub dir: PathBuf,
    #[command(flatten)]
    pub pump: PumpArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Resolves flags into a validated config, starting from the preset (or FP).
pub fn build_config(args: &PumpArgs) -> Result<PumpConfig, CliError> {
    let mut cfg = match args.preset {
        Some(p) => make_preset(p.name())?,
        None => PumpConfig::default(),
    };
    let w = &mut cfg.weights;
    let overrides = [
        (&mut cfg.eta, args.eta),
        (&mut w.gamma, args.gamma),
        (&mut w.alpha, args.alpha),
        (&mut w.beta, args.beta),
        (&mut w.lambda, args.lambda),
        (&mut w.p, args.p),
        (&mut w.eps_round, args.eps_round),
        (&mut w.eps_feas, args.eps_feas),
    ];
    for (slot, value) in overrides {
        if let Some(v) = value {
            *slot = v;
        }
    }
    if let Some(tol) = args.tol {
        cfg.tol = tol;
    }
    cfg.jacobian = match args.jacobian {
        None | Some(JacobianArg::Identity) => JacobianMode::MinusIdentity,
        Some(JacobianArg::Perturbation) => JacobianMode::Perturbation {
            eps: args.pert_eps,
            samples: args.pert_samples,
        },
    };
    let optimizer = match (args.optimizer, args.momentum) {
        (None, None) | (Some(OptimizerArg::Gd), None) => Optimizer::Plain,
        (None, Some(mu)) | (Some(OptimizerArg::Momentum), Some(mu)) => Optimizer::Momentum { mu },
        (Some(OptimizerArg::Momentum), None) => Optimizer::Momentum { mu: 0.9 },
        (Some(OptimizerArg::Adam), None) => Optimizer::ADAM_DEFAULT,
        (Some(other), Some(_)) => {
            return Err(CliError::Usage(format!(
                "--momentum cannot be combined with --optimizer {}",
                other
                    .to_possible_value()
                    .expect("no skipped variants")
                    .get_name()
            )))
        }
    };
    cfg.optimizer = optimizer;
    cfg.n_max = args.max_iters;
    cfg.seed = args.seed;
    cfg.validate()?;
    Ok(cfg)
}
