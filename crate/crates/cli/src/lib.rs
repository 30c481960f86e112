//! Command-line front end: one subcommand per experiment, each writing its
//! outputs and a [`RunManifest`] into `--out DIR`.

pub mod commands;
mod manifest;
mod params;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

pub use manifest::{sha256_hex, OutDir, RunManifest, MANIFEST};
pub use params::Params;

/// Environment fallback for `--threads`.
pub const THREADS_ENV: &str = "CATENOID_TAILS_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Run(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Outcome of a subcommand: text for stdout and the failed assertions, if any.
#[derive(Debug, Default)]
pub struct Report {
    pub stdout: String,
    pub failures: Vec<String>,
}

impl Report {
    pub fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }

    pub fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }
}

/// Everything a subcommand sees.
pub struct Ctx {
    pub params: Params,
    pub out: OutDir,
    pub json: bool,
    pub seed: u64,
}

#[derive(Debug, Parser)]
#[command(name = "catenoid-tails", version, about = "Numerical experiments on catenoid stability and late-time tails")]
struct Cli {
    /// flat key = value configuration file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// output directory (outputs and manifest.json)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// machine-readable stdout
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, value_name = "N", default_value_t = 1)]
    seed: u64,
    /// worker threads (falls back to CATENOID_TAILS_THREADS, then all cores)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// configuration override, repeatable
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// exact operator identities
    Verify {
        /// replace Q1 by a copy with a wrong potential (self-test, must fail)
        #[arg(long)]
        corrupt_q1: bool,
    },
    /// catenoid profile samples
    Profile {
        #[arg(long)]
        n: Option<usize>,
        /// rho_min:rho_max:nodes
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// top of the sector spectra and the Morse index
    Spectrum {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        lmax: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// radial decay of the graph source term
    F0Decay,
    /// mode evolution with energies and tails (requires --config)
    Evolve,
    /// Hardy inequalities
    Hardy,
    /// trapping of the unstable mode by bisection
    Shoot,
    /// smoothing operators
    Smooth,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Profile { .. } => "profile",
            Command::Spectrum { .. } => "spectrum",
            Command::F0Decay => "f0-decay",
            Command::Evolve => "evolve",
            Command::Hardy => "hardy",
            Command::Shoot => "shoot",
            Command::Smooth => "smooth",
        }
    }

    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Verify { .. } => commands::verify::DEFAULTS,
            Command::Profile { .. } => commands::profile::DEFAULTS,
            Command::Spectrum { .. } => commands::spectrum::DEFAULTS,
            Command::F0Decay => commands::f0::DEFAULTS,
            Command::Evolve => commands::evolve::DEFAULTS,
            Command::Hardy => commands::hardy::DEFAULTS,
            Command::Shoot => commands::shoot::DEFAULTS,
            Command::Smooth => commands::smooth::DEFAULTS,
        }
    }

    fn flag_overrides(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut push = |k: &str, x: Option<String>| {
            if let Some(x) = x {
                v.push(format!("{k}={x}"));
            }
        };
        match self {
            Command::Verify { corrupt_q1 } => push("corrupt_q1", corrupt_q1.then(|| "true".into())),
            Command::Profile { n, grid } => {
                push("n", n.map(|x| x.to_string()));
                push("grid", grid.clone());
            }
            Command::Spectrum { n, lmax, nodes } => {
                push("n", n.map(|x| x.to_string()));
                push("lmax", lmax.map(|x| x.to_string()));
                push("nodes", nodes.map(|x| x.to_string()));
            }
            _ => {}
        }
        v
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => {
            v.trim().parse().map_err(|_| CliError::Usage(format!("{THREADS_ENV} = {v:?} is not a thread count")))
        }
        _ => Ok(0),
    }
}

/// Parses `argv`, runs the subcommand and returns the process exit code:
/// 0 on success, 1 when an assertion or computation fails, 2 on usage errors.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.stdout.as_bytes());
            if report.failures.is_empty() {
                0
            } else {
                for f in &report.failures {
                    eprintln!("FAILED: {f}");
                }
                1
            }
        }
        Err(e) => {
            eprintln!("catenoid-tails: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `catenoid-tails --help` for usage");
            }
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let name = cli.command.name();
    let mut params = Params::with_defaults(cli.command.defaults());
    match &cli.config {
        Some(p) => params.load(p)?,
        None if matches!(cli.command, Command::Evolve) => {
            return Err(CliError::Usage("evolve needs --config PATH".into()));
        }
        None => {}
    }
    params.apply(&cli.command.flag_overrides())?;
    params.apply(&cli.set)?;
    let threads = resolve_threads(cli.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Run(format!("thread pool: {e}")))?;

    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let clock = Instant::now();
    let config = params.resolved().clone();
    let mut ctx = Ctx { params, out: OutDir::new(cli.out)?, json: cli.json, seed: cli.seed };
    let report = pool.install(|| match cli.command {
        Command::Verify { .. } => commands::verify::run(&mut ctx),
        Command::Profile { .. } => commands::profile::run(&mut ctx),
        Command::Spectrum { .. } => commands::spectrum::run(&mut ctx),
        Command::F0Decay => commands::f0::run(&mut ctx),
        Command::Evolve => commands::evolve::run(&mut ctx),
        Command::Hardy => commands::hardy::run(&mut ctx),
        Command::Shoot => commands::shoot::run(&mut ctx),
        Command::Smooth => commands::smooth::run(&mut ctx),
    })?;
    let manifest = RunManifest {
        subcommand: name.to_string(),
        config,
        seed: ctx.seed,
        threads: pool.current_num_threads(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
        passed: report.failures.is_empty(),
        outputs: Default::default(),
    };
    ctx.out.finish(manifest)?;
    Ok(report)
}

/// Shortest round-trip text for a float.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}
