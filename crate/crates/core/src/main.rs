// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use osc_entanglement::bath::ResponseConvention;
use osc_entanglement::sweeps::{
    evaluate, run_gmin, run_sweep, run_validation, Flag, Method, PointReport, RunConfig,
    ValidationOptions,
};
use osc_entanglement::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    version,
    about = "Steady-state entanglement of two coupled oscillators in linear baths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the method named in the config.
    #[arg(long, global = true)]
    method: Option<Method>,

    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid runs (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Relative quadrature tolerance for the exact solver.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one configuration.
    Point,
    /// Evaluate every point of a 1-D or 2-D grid.
    Sweep,
    /// Locate the smallest entangling coupling rate along the sweep axes.
    Gmin,
    /// Run the built-in self-check battery.
    Validate {
        /// Sign convention of the bath response (for fault injection).
        #[arg(long, value_enum, default_value = "retarded")]
        response: Convention,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Convention {
    Retarded,
    AsPrinted,
}

enum Failure {
    Config(String),
    Solver(String),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Self::Config(e.to_string())
        } else {
            Self::Solver(e.to_string())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Failure::Config("--config <path> is required".into()))?;
    let mut cfg = RunConfig::from_file(path)?;
    if let Some(tol) = cli.rel_tol {
        cfg.quadrature.rel_tol = Some(tol);
        cfg.validate()?;
    }
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn point_text(r: &PointReport) -> String {
    let g = r.covariance.matrix();
    let mv = &r.mode_variances;
    let mut s = String::new();
    let _ = writeln!(s, "coupling_rate = {}", r.coupling_rate);
    s.push_str("gamma =\n");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| format!("{:>15.8e}", g[(i, j)])).collect();
        let _ = writeln!(s, "  {}", row.join(" "));
    }
    let _ = writeln!(
        s,
        "eta_plus_sq = {}\neta_minus_sq = {}",
        mv.eta_plus_sq, mv.eta_minus_sq
    );
    let _ = writeln!(
        s,
        "pi_plus_sq = {}\npi_minus_sq = {}",
        mv.pi_plus_sq, mv.pi_minus_sq
    );
    let _ = writeln!(
        s,
        "c1 = {}\nc2 = {}",
        r.pt_eigenvalues.0, r.pt_eigenvalues.1
    );
    let _ = writeln!(s, "E_N = {}", r.log_negativity);
    if let Some(e) = r.error_estimate {
        let _ = writeln!(s, "E_N_error = {e}");
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Point => {
            let cfg = load_config(cli)?;
            let method = cli.method.unwrap_or(cfg.method());
            let report = evaluate(&cfg, method)?;
            emit(cli.out.as_deref(), &point_text(&report))
        }
        Command::Sweep => {
            let cfg = load_config(cli)?;
            if cfg.sweep.is_empty() {
                return Err(Failure::Config(
                    "sweep: at least one axis is required".into(),
                ));
            }
            let table = run_sweep(&cfg, cli.method.unwrap_or(cfg.method()), cli.workers)?;
            for row in table.rows.iter().filter(|r| r.flag != Flag::Ok) {
                eprintln!(
                    "{:?}: {}",
                    row.coords,
                    row.message.as_deref().unwrap_or(row.flag.as_str())
                );
            }
            emit(cli.out.as_deref(), &table.to_csv())
        }
        Command::Gmin => {
            let cfg = load_config(cli)?;
            if cfg.sweep.iter().any(|a| a.param == "G" || a.param == "k") {
                return Err(Failure::Config(
                    "gmin: the coupling cannot be a sweep axis".into(),
                ));
            }
            let curve = run_gmin(&cfg, cli.method.unwrap_or(cfg.method()), cli.workers)?;
            for p in curve.points.iter().filter(|p| p.flag != Flag::Ok) {
                eprintln!(
                    "{:?}: {}",
                    p.coords,
                    p.message.as_deref().unwrap_or(p.flag.as_str())
                );
            }
            emit(cli.out.as_deref(), &curve.to_csv())
        }
        Command::Validate { response } => {
            let mut opts = ValidationOptions::default();
            if let Some(tol) = cli.rel_tol {
                if !(tol > 0.0 && tol <= 1e-2) {
                    return Err(Failure::Config(format!(
                        "--rel-tol must lie in (0, 1e-2], got {tol}"
                    )));
                }
                opts.rel_tol = tol;
            }
            opts.convention = match response {
                Convention::Retarded => ResponseConvention::Retarded,
                Convention::AsPrinted => ResponseConvention::AsPrinted,
            };
            let report = run_validation(opts);
            print!("{}", report.to_table());
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Validation)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Solver(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_SOLVER)
        }
        Err(Failure::Validation) => {
            eprintln!("validation failed");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
