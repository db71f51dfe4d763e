//! `qcayley`: reports and self-checks for quasi-classical quantum Cayley
//! trees.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error.

mod commands;
mod config;
mod report;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, Mode, Profile, RunConfig, Weights};
use report::{emit, Output};

#[derive(Debug)]
pub struct UsageError(pub String);

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qcayley_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e.0)
    }
}

#[derive(Parser, Debug)]
#[command(name = "qcayley", version, about = "Exact and certified computations on quantum Cayley trees")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GlobalArgs {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// `float` trades certificates for speed; `verify` ignores it.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Width of the growth-parameter enclosure.
    #[arg(long, global = true)]
    tolerance: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Default)]
struct SpecArgs {
    /// Free product such as `Ao(3)*Au(3)`.
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum dimensions along the canonical geodesic.
    Dims {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Vertices and edges of the Cayley tree.
    Tree {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Squared norms of the path vectors and the telescoping check.
    Paths {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum)]
        weights: Option<Weights>,
    },
    /// Truncated fixed vector along the canonical geodesic.
    FixedVector {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Gram window of the A_o inverse, its decay constant and positivity.
    Gram {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Exact lower bounds for the A_u(N) cocycle norms.
    Growth {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Certified weighted Sobolev series; `--r` selects the weighted variant.
    RdNorm {
        #[arg(long)]
        dimq: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Schur bound and truncated norm of (a^-|k-l|).
    Schur {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        dimq: Option<String>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Summation-chain inequality on seeded random inputs.
    ChainCheck {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        dimq: Option<String>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(long, value_enum)]
        profile: Option<Profile>,
    },
}

fn flags_config(cli: &Cli) -> RunConfig {
    let g = &cli.global;
    let mut c = RunConfig {
        format: g.format,
        output: g.output.clone(),
        mode: g.mode,
        tolerance: g.tolerance.clone(),
        seed: g.seed,
        ..Default::default()
    };
    match &cli.command {
        Command::Dims { spec, count } => {
            c.spec = spec.spec.clone();
            c.count = *count;
        }
        Command::Tree { spec, radius, cap } => {
            c.spec = spec.spec.clone();
            c.radius = *radius;
            c.cap = *cap;
        }
        Command::Paths { spec, radius, cap, weights } => {
            c.spec = spec.spec.clone();
            c.radius = *radius;
            c.cap = *cap;
            c.weights = *weights;
        }
        Command::FixedVector { spec, radius } => {
            c.spec = spec.spec.clone();
            c.radius = *radius;
        }
        Command::Gram { spec, kmax, radius } => {
            c.spec = spec.spec.clone();
            c.kmax = *kmax;
            c.radius = *radius;
        }
        Command::Growth { spec, n_max } => {
            c.spec = spec.spec.clone();
            c.n_max = *n_max;
        }
        Command::RdNorm { dimq, s, r, radius } => {
            c.dimq = dimq.clone();
            c.s = s.clone();
            c.r = r.clone();
            c.radius = *radius;
        }
        Command::Schur { a, dimq, size } => {
            c.a = a.clone();
            c.dimq = dimq.clone();
            c.size = *size;
        }
        Command::ChainCheck { a, dimq, count, max_len } => {
            c.a = a.clone();
            c.dimq = dimq.clone();
            c.count = *count;
            c.max_len = *max_len;
        }
        Command::Verify { profile } => c.profile = *profile,
    }
    c
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let file = match &cli.global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let cfg = RunConfig::merge(flags_config(cli), file);
    let result = match &cli.command {
        Command::Dims { .. } => commands::dims(&cfg)?,
        Command::Tree { .. } => commands::tree(&cfg)?,
        Command::Paths { .. } => commands::paths(&cfg)?,
        Command::FixedVector { .. } => commands::fixed_vector_cmd(&cfg)?,
        Command::Gram { .. } => commands::gram_cmd(&cfg)?,
        Command::Growth { .. } => commands::growth_cmd(&cfg)?,
        Command::RdNorm { .. } => commands::rd_norm_cmd(&cfg)?,
        Command::Schur { .. } => commands::schur_cmd(&cfg)?,
        Command::ChainCheck { .. } => commands::chain_check_cmd(&cfg)?,
        Command::Verify { .. } => verify_cmd(&cfg),
    };
    let mut out: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    emit(&mut out, cfg.format(), &result.output)?;
    out.flush()?;
    Ok(result.passed)
}

fn verify_cmd(cfg: &RunConfig) -> commands::CmdResult {
    let profile = cfg.profile.unwrap_or_default();
    let seed = cfg.seed();
    let outcomes = verify::run(profile, seed);
    let passed = outcomes.iter().all(|o| o.passed);
    for o in outcomes.iter().filter(|o| !o.passed) {
        eprintln!("FAIL {} {} [{}]: {}", o.id, o.name, o.anchor, o.detail);
    }
    let output = match cfg.format() {
        Format::Json => Output::Records(outcomes.iter().map(|o| o.record(profile, seed)).collect()),
        Format::Csv => Output::Table {
            json: Vec::new(),
            header: ["status", "check", "name", "anchor", "detail"].map(String::from).to_vec(),
            rows: outcomes
                .iter()
                .map(|o| {
                    vec![
                        if o.passed { "pass" } else { "fail" }.to_string(),
                        o.id.to_string(),
                        o.name.to_string(),
                        o.anchor.to_string(),
                        o.detail.clone(),
                    ]
                })
                .collect(),
        },
    };
    commands::CmdResult { output, passed }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
