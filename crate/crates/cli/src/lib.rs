//! `stabforge`: run scenario configs and emit line-delimited JSON reports.
//!
//! Exit codes: 0 when every non-skipped check passes, 1 when some check
//! fails, 2 for invalid configs or arguments, 3 for runtime and I/O failures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod paths;
pub mod report;
pub mod scenario;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;
use stabforge_core::mirror::{circle_charge, circle_closed_form};
use stabforge_core::{Complex64, LGModel};

use config::Config;
use error::{CliError, CliResult};
use report::{exit_code, sort_records, write_stream, ReportRecord};
use scenario::{Scenario, SlagScenario, Tolerances, VerifyAll};

#[derive(Debug, Parser)]
#[command(name = "stabforge", version, about = "Product stability conditions and their mirror periods, checked")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the scenario described by a TOML config.
    Run {
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every scenario at its defaults plus the randomized suites.
    VerifyAll {
        /// Line-bundle window half-width.
        #[arg(long)]
        window: Option<i64>,
        /// Override every agreement tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Optional `verify-all` config (`verify.*` and `tol.*` keys).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Special Lagrangian tracing.
    Slag {
        #[command(subcommand)]
        command: SlagCommand,
    },
    /// Mirror periods.
    Mirror {
        #[command(subcommand)]
        command: MirrorCommand,
    },
}

#[derive(Debug, Subcommand)]
enum SlagCommand {
    /// Trace one phase-φ curve through a seed.
    Trace {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        a: Complex64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0,0")]
        c: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        seed: Complex64,
        /// Directory for the path CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum MirrorCommand {
    /// Weight-k circle period, compared with its Bessel closed form.
    Circle {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        a: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "0,0")]
        c: Complex64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `re,im` or a bare real number.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let z = match s.split_once(',') {
        Some((re, im)) => Complex64::new(num(re)?, num(im)?),
        None => Complex64::new(num(s)?, 0.0),
    };
    if z.is_finite() {
        Ok(z)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn read_config(path: &Path) -> CliResult<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
    Config::parse(&text)
}

fn verify_all(window: Option<i64>, tol: Option<f64>, config: Option<&Path>) -> CliResult<VerifyAll> {
    let cfg = match config {
        Some(p) => read_config(p)?,
        None => Config::empty(),
    };
    if let Some(kind) = cfg.string("kind")? {
        if kind != "verify-all" {
            return Err(CliError::ConfigInvalid(format!("expected kind = \"verify-all\", got {kind}")));
        }
    }
    let mut tolerances = Tolerances::from_config(&cfg)?;
    if let Some(t) = tol {
        tolerances.override_all(t)?;
    }
    let mut v = VerifyAll::parse(&cfg, tolerances)?;
    cfg.finish()?;
    if let Some(w) = window {
        if !(0..=64).contains(&w) {
            return Err(CliError::ConfigInvalid(format!("--window must be in 0..=64, got {w}")));
        }
        v.window = w;
    }
    Ok(v)
}

fn mirror_circle(a: Complex64, k: i64, radius: f64, c: Complex64) -> CliResult<Vec<ReportRecord>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(CliError::ConfigInvalid(format!("--radius must be positive, got {radius}")));
    }
    let tol = Tolerances::default();
    let m = LGModel::single(a, c);
    let value = circle_charge(&m, k, radius)?;
    let closed = circle_closed_form(&m, k)?;
    let err = scenario::rel(value, closed);
    let params = json!({ "a": a, "c": c, "k": k, "radius": radius });
    Ok(vec![ReportRecord::new("mirror.circle", "mirror_numeric", "circle_charge", params)
        .value("value", value)
        .value("closed_form", closed)
        .value("rel_error", err)
        .tol("circle", tol.circle)
        .expect(err <= tol.circle, || format!("quadrature {value} vs closed form {closed}"))])
}

/// Records and where to write them.
fn execute(cli: Cli) -> CliResult<(Vec<ReportRecord>, Option<PathBuf>)> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = read_config(&config)?;
            let s = Scenario::from_config(&cfg)?;
            Ok((s.run()?, out))
        }
        Command::VerifyAll {
            window,
            tol,
            config,
            out,
        } => Ok((verify_all(window, tol, config.as_deref())?.run()?, out)),
        Command::Slag {
            command:
                SlagCommand::Trace {
                    a,
                    c,
                    phi,
                    seed,
                    csv,
                    out,
                },
        } => {
            if !phi.is_finite() {
                return Err(CliError::ConfigInvalid(format!("--phi must be finite, got {phi}")));
            }
            let s = SlagScenario::single(a, c, phi, seed, csv, &Tolerances::default())?;
            Ok((s.run()?, out))
        }
        Command::Mirror {
            command: MirrorCommand::Circle { a, k, radius, c, out },
        } => Ok((mirror_circle(a, k, radius, c)?, out)),
    }
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("STABFORGE_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::ConfigInvalid(format!("STABFORGE_THREADS must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Io(std::io::Error::other(e)))
}

fn run_parsed(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    let (mut records, target) = thread_pool()?.install(|| execute(cli))?;
    sort_records(&mut records);
    match target {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_stream(&records, &mut f)?;
        }
        None => write_stream(&records, out)?,
    }
    Ok(exit_code(&records))
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match run_parsed(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "stabforge: {e}");
            e.exit_code()
        }
    }
}
