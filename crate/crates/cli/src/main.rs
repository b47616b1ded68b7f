//! `qkverify`: seeded verification runs over the metric zoo.
//!
//! Exit status is 0 when every evaluated identity passes, 1 when at least
//! one fails and 2 for configuration or I/O errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qk_core::verify::{self, RunConfig, DEFAULT_POINTS};
use serde::Deserialize;

#[derive(Parser)]
#[command(
    name = "qkverify",
    version,
    about = "Numerical checks of hypercomplex quaternionic-Kähler geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites on a chart of the zoo
    Verify(VerifyArgs),
    /// List the suites and the identities they evaluate
    List {
        /// Print the catalogue as JSON
        #[arg(long)]
        json: bool,
    },
    /// Measure the sign conventions on the model spaces
    Calibrate {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// TOML file with run settings; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Chart name: flat, hp, hh, cone, gp
    #[arg(long)]
    chart: Option<String>,
    /// Quaternionic dimension
    #[arg(long)]
    n: Option<usize>,
    /// Parameter of the gp family, or the round-trip parameter on hyper-Kähler charts
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    /// Reduced scalar curvature of the cone chart
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    /// Sampling seed (default: $QKVERIFY_SEED, then 20240611)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    points: Option<usize>,
    /// Random cases of the algebra suite
    #[arg(long)]
    cases: Option<usize>,
    /// Tolerance for every identity (`1e-6`) or for one identity (`nu=1e-6`); repeatable
    #[arg(long = "tol", value_name = "[IDENTITY=]VALUE")]
    tol: Vec<String>,
    /// Suite to run; repeatable (default: every chart suite)
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Write the JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary
    #[arg(long)]
    json: bool,
}

/// Settings read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    chart: Option<String>,
    n: Option<usize>,
    p: Option<f64>,
    nu: Option<f64>,
    seed: Option<u64>,
    points: Option<usize>,
    cases: Option<usize>,
    tolerance: Option<f64>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    suites: Vec<String>,
    out: Option<PathBuf>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

fn parse_tol(s: &str) -> Result<(Option<String>, f64)> {
    let (name, value) = match s.split_once('=') {
        Some((k, v)) => (Some(k.trim().to_string()), v),
        None => (None, s),
    };
    let v: f64 = value.trim().parse().with_context(|| format!("bad tolerance `{s}`"))?;
    Ok((name, v))
}

/// Merge flags over the file over the defaults.
fn resolve(args: &VerifyArgs) -> Result<(RunConfig, Option<PathBuf>)> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let base = RunConfig::default();
    let seed = match args.seed.or(file.seed) {
        Some(s) => s,
        None => verify::default_seed()?,
    };
    let mut config = RunConfig {
        chart: args.chart.clone().or(file.chart).unwrap_or(base.chart),
        n: args.n.or(file.n).unwrap_or(base.n),
        p: args.p.or(file.p),
        nu: args.nu.or(file.nu),
        seed,
        points: args.points.or(file.points).unwrap_or(DEFAULT_POINTS),
        cases: args.cases.or(file.cases).unwrap_or(base.cases),
        tolerance: file.tolerance,
        tolerances: file.tolerances,
        suites: if args.suites.is_empty() {
            file.suites
        } else {
            args.suites.clone()
        },
    };
    for t in &args.tol {
        match parse_tol(t)? {
            (Some(name), v) => {
                config.tolerances.insert(name, v);
            }
            (None, v) => config.tolerance = Some(v),
        }
    }
    Ok((config, args.out.clone().or(file.out)))
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let (config, out) = resolve(args)?;
    let report = verify::run(&config)?;
    if let Some(path) = &out {
        report
            .write(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if args.json {
        println!("{}", report.to_json()?);
    } else {
        print!("{}", report.render_text());
    }
    Ok(report.overall_pass)
}

fn cmd_list(json: bool) -> Result<bool> {
    let suites = verify::list_suites();
    if json {
        println!("{}", serde_json::to_string_pretty(&suites)?);
        return Ok(true);
    }
    let mut text = String::new();
    for s in suites {
        text.push_str(&format!(
            "{}\n    {}\n    identities: {}\n",
            s.name,
            s.summary,
            s.identities.join(", ")
        ));
    }
    // a closed pipe (`qkverify list | head`) is not an error
    let _ = std::io::stdout().write_all(text.as_bytes());
    Ok(true)
}

fn cmd_calibrate(n: usize, seed: Option<u64>) -> Result<bool> {
    let seed = match seed {
        Some(s) => s,
        None => verify::default_seed()?,
    };
    if n == 0 {
        bail!("n must be positive");
    }
    let report = verify::calibrate(n, seed)?;
    print!("{}", report.render_text());
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::List { json } => cmd_list(*json),
        Command::Calibrate { n, seed } => cmd_calibrate(*n, *seed),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
