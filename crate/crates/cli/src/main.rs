//! `extremal-copula`: solve, certify and cross-check extremal copula
//! problems from the command line. Results go to stdout as JSON, traces to
//! CSV files under `--out`.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use extremal_copula::quadrature::Scheme;

use config::{Route, RunConfig};
use output::{to_json, Envelope};

#[derive(Parser)]
#[command(name = "extremal-copula", version, about = "Extremal copulas and optimal couplings on the unit square")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the breakpoint equation for a cost φ(x + y).
    Beta(Opts),
    /// Run one route (or all of them) for a cost.
    Solve(Opts),
    /// Check the potential-based optimality certificate on a grid.
    Certify(Opts),
    /// Run the acceptance checks and report pass/fail per item.
    Reproduce(Opts),
}

#[derive(Args, Default)]
pub struct Opts {
    /// JSON file with default settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// sine | bilinear | piecewise_linear[:x1,x2] | phi_table:<csv>
    #[arg(long)]
    cost: Option<String>,
    #[arg(long)]
    x1: Option<f64>,
    #[arg(long)]
    x2: Option<f64>,
    /// analytic | variational | discrete | cesaro | certify | all
    #[arg(long)]
    route: Option<Route>,
    /// Assignment size, or quadrature cells for the variational route.
    #[arg(long)]
    n: Option<usize>,
    /// Number of sequence points for Cesàro means.
    #[arg(long = "N")]
    samples: Option<usize>,
    /// Points per axis for grid integrals and certificates.
    #[arg(long)]
    grid_n: Option<usize>,
    /// midpoint | simpson
    #[arg(long)]
    scheme: Option<Scheme>,
    /// Agreement tolerance (solve) or certificate tolerance (certify).
    #[arg(long)]
    tol: Option<f64>,
    /// Candidate breakpoint to certify instead of the computed one.
    #[arg(long)]
    beta: Option<f64>,
    /// Directory for CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Acceptance item to run (key or number).
    #[arg(long)]
    item: Option<String>,
    /// Leave out the runtime sidecar so identical runs are byte-identical.
    #[arg(long)]
    deterministic: bool,
}

/// Invalid invocation; exit status 64.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Ambiguity or numerical failure.
    Failure,
    /// A defined fallback regime.
    Fallback,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failure => 1,
            Status::Fallback => 2,
        }
    }
}

pub const EXIT_USAGE: u8 = 64;

/// Flags merged over the config file.
pub struct Settings {
    pub config: RunConfig,
}

fn merge(opts: Opts) -> Result<Settings, UsageError> {
    let mut c = match &opts.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = opts.cost {
        c.cost = Some(config::CostArg::Text(v));
    }
    c.x1 = opts.x1.or(c.x1);
    c.x2 = opts.x2.or(c.x2);
    c.route = opts.route.or(c.route);
    c.n = opts.n.or(c.n);
    c.samples = opts.samples.or(c.samples);
    c.grid_n = opts.grid_n.or(c.grid_n);
    c.scheme = opts.scheme.or(c.scheme);
    c.tol = opts.tol.or(c.tol);
    c.beta = opts.beta.or(c.beta);
    c.out = opts.out.or(c.out);
    c.item = opts.item.or(c.item);
    if opts.deterministic {
        c.deterministic = Some(true);
    }
    if let Some(g) = c.grid_n {
        if g < 2 {
            return Err(UsageError(format!("--grid-n must be at least 2, got {g}")));
        }
    }
    if c.n == Some(0) || c.samples == Some(0) {
        return Err(UsageError("--n and --N must be positive".into()));
    }
    if let Some(dir) = &c.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| UsageError(format!("output directory {} is not writable: {e}", dir.display())))?;
    }
    Ok(Settings { config: c })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE } else { 0 });
        }
    };
    let (name, opts) = match cli.command {
        Command::Beta(o) => ("beta", o),
        Command::Solve(o) => ("solve", o),
        Command::Certify(o) => ("certify", o),
        Command::Reproduce(o) => ("reproduce", o),
    };
    let settings = match merge(opts) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let start = Instant::now();
    let outcome = match name {
        "beta" => commands::beta(&settings),
        "solve" => commands::solve(&settings),
        "certify" => commands::certify_cmd(&settings),
        _ => commands::reproduce(&settings),
    };
    match outcome {
        Ok(out) => {
            let sidecar = (settings.config.deterministic != Some(true)).then(|| {
                let mut s = serde_json::json!({ "runtime_ms": start.elapsed().as_secs_f64() * 1e3 });
                if let Some(extra) = out.sidecar {
                    s["details"] = extra;
                }
                s
            });
            println!("{}", to_json(&Envelope { command: name, result: out.result, sidecar }));
            if let Some(msg) = out.message {
                eprintln!("{msg}");
            }
            ExitCode::from(out.status.code())
        }
        Err(commands::Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(commands::Failure::Numerical(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Failure.code())
        }
    }
}
