//! Command-line driver: argument parsing, subcommand dispatch and the run
//! manifest. The numerical work lives in the `sectionzeros` crate.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{ConfigFile, Target, TargetOptions};

pub const TOOL: &str = "sectionzeros";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e:#}"),
        }
    }
}

impl From<sectionzeros::error::Error> for CliError {
    fn from(e: sectionzeros::error::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sectionzeros", version, about = "Zeros of sections of exponential-integral functions")]
pub struct Cli {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for `analyze` (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Leave the timestamp comment out of SVG output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Where to write the run manifest (default: next to the first output).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TargetArgs {
    /// Built-in integrand: fig2, fig3 or custom.
    #[arg(long)]
    pub spec: Option<String>,
    /// integral, exp, hyp1f1 or bessel.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Coefficients of g, lowest degree first, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Lower parameter b of 1F1(1; b; z).
    #[arg(long, allow_hyphen_values = true)]
    pub bparam: Option<String>,
}

impl From<TargetArgs> for TargetOptions {
    fn from(t: TargetArgs) -> Self {
        TargetOptions {
            spec: t.spec,
            family: t.family,
            a: t.a,
            b: t.b,
            mu: t.mu,
            nu: t.nu,
            g: t.g,
            alpha: t.alpha,
            bparam: t.bparam,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// JSON report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments m_k by quadrature, with closed forms where available.
    Moments {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        kmax: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Normalized section coefficients.
    Section {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Zeros of s_n[F](nz), classified against the limit curve.
    Zeros {
        #[command(flatten)]
        target: TargetArgs,
        /// Degree, list `40,80` or range `40:160:20`.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sampled limit curve.
    Curve {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Deviation rates over a range of degrees.
    Analyze {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        n: Option<String>,
        /// Threshold for the index-selection rule.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bessel sections: distance to D(J) and the Enestrom-Kakeya bound.
    Bessel {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// n sup |eps_n| on a fixed grid in U.
    Szego {
        #[arg(long)]
        n: Option<String>,
        /// Extra points, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// First zero of erfc in the upper half-plane and Re t1 + Im t1.
    CvwConstant {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Watson's lemma: scaled error of the leading term.
    Watson {
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long)]
        t_max: Option<f64>,
        /// Coefficients of h, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
        /// left or right.
        #[arg(long)]
        side: Option<String>,
        #[arg(long)]
        lambdas: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Zeros that stay away from the curve across degrees.
    Stray {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        tol_curve: Option<f64>,
        #[arg(long)]
        tol_cluster: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// The configuration a command actually ran with.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub target: Option<Target>,
    pub degrees: Vec<usize>,
    pub epsilon_ncond: Option<f64>,
    pub delta_margin: Option<f64>,
    pub curve_samples: Option<usize>,
    pub threads: Option<usize>,
    /// Command-specific settings.
    pub params: serde_json::Value,
    pub outputs: Vec<PathBuf>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            target: None,
            degrees: vec![],
            epsilon_ncond: None,
            delta_margin: None,
            curve_samples: None,
            threads: None,
            params: serde_json::Value::Null,
            outputs: vec![],
        }
    }
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    argv: Vec<String>,
    config: &'a RunConfig,
}

/// Global settings shared by every command.
#[derive(Debug, Clone)]
pub struct Globals {
    pub cfg: ConfigFile,
    pub threads: Option<usize>,
    pub timestamp: bool,
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("sectionzeros: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, argv: &[OsString]) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let threads = cfg.pick("threads", cli.threads, config::parse_usize)?;
    if threads == Some(0) {
        return Err(CliError::Config("threads: must be positive".into()));
    }
    let globals = Globals { cfg, threads, timestamp: !cli.no_timestamp };
    let rc = commands::dispatch(cli.command, &globals)?;
    let path = match (&cli.manifest, rc.outputs.first()) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(first)) => Some(output::manifest_path_for(first)),
        (None, None) => None,
    };
    if let Some(path) = path {
        let m = Manifest {
            tool: TOOL,
            version: VERSION,
            argv: argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect(),
            config: &rc,
        };
        output::emit_json(&path, &m)?;
    }
    Ok(())
}
