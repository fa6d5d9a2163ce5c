//! `snc` command line.
//!
//! ```text
//! snc verify <n> [--progress k] [--topk m] [--workers t] [--range a b]
//!                [--checkpoint path] [--stride s] [--fail-fast] [--format text|lines]
//! snc family <seed-file | n:code> --steps s [--policy first|random] [--seed r]
//! snc decode <n> <code>
//! ```
//!
//! Exit status: 0 on success, 1 when a counterexample or a failed
//! certificate is found, 2 on usage or input errors. Summaries go to
//! standard output, progress lines to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use crate::enumerate::{
    verify_codes, write_lines, write_text, Checkpoint, EnumerationRange, OutputFormat, ProgressEvent,
    ScanOptions, VerificationReport,
};
use crate::graph::{code_space, GraphCode, OrientedGraph};
use crate::split_twin::{generate_family, write_family, FamilyStatus, SplitPolicy, SplitTwinError};
use crate::text::{format_graph, parse_graph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default checkpoint stride in codes.
pub const DEFAULT_STRIDE: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "snc", version, about = "Second neighborhood verifier for oriented graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check delta >= 0 for every labeled oriented graph on n vertices.
    Verify(VerifyArgs),
    /// Grow a certified family of graphs by repeated split-twin extensions.
    Family(FamilyArgs),
    /// Print the canonical text form of a graph code.
    Decode {
        #[arg(value_parser = clap::value_parser!(u8).range(2..=9))]
        n: u8,
        code: u64,
    },
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(2..=9))]
    pub n: u8,
    /// Print a progress line after every k processed codes (0 = never).
    #[arg(long, value_name = "k", default_value_t = 0)]
    pub progress: u64,
    /// Keep the m graphs with the smallest (delta, ratio, code).
    #[arg(long, value_name = "m", default_value_t = 0)]
    pub topk: usize,
    #[arg(long, value_name = "t", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: u32,
    /// Only scan codes in [a, b).
    #[arg(long, num_args = 2, value_names = ["a", "b"])]
    pub range: Option<Vec<u64>>,
    /// Resume from and save progress to this file.
    #[arg(long, value_name = "path")]
    pub checkpoint: Option<PathBuf>,
    /// Codes between checkpoint saves.
    #[arg(long, value_name = "s", default_value_t = DEFAULT_STRIDE, requires = "checkpoint")]
    pub stride: u64,
    /// Stop at the first counterexample.
    #[arg(long)]
    pub fail_fast: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    First,
    Random,
}

#[derive(Debug, clap::Args)]
pub struct FamilyArgs {
    /// A file in canonical text form, or `n:code`.
    pub seed_graph: String,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = PolicyArg::First)]
    pub policy: PolicyArg,
    /// Random policy seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().ansi().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Verify(args) => run_verify(&args, stdout, stderr),
        Command::Family(args) => run_family(&args, stdout, stderr),
        Command::Decode { n, code } => GraphCode::new(n.into(), code)
            .map_err(|e| Failure::Usage(e.to_string()))
            .and_then(|c| write_out(stdout, format_graph(&c.decode()).as_bytes()).map(|_| EXIT_OK)),
    };
    match outcome {
        Ok(status) => status,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Found(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            EXIT_FOUND
        }
    }
}

enum Failure {
    Usage(String),
    Found(String),
}

fn write_out(w: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    w.write_all(bytes).map_err(|e| Failure::Usage(format!("writing output: {e}")))
}

fn run_verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let n = usize::from(args.n);
    let usage = |e: &dyn std::fmt::Display| Failure::Usage(e.to_string());
    let range = match &args.range {
        Some(bounds) => EnumerationRange::new(n, bounds[0], bounds[1]).map_err(|e| usage(&e))?,
        None => EnumerationRange::full(n).map_err(|e| usage(&e))?,
    };
    let options = ScanOptions { topk: args.topk, progress_interval: args.progress, fail_fast: args.fail_fast };
    let workers = args.workers as usize;

    let started = Instant::now();
    let processed = AtomicU64::new(0);
    let err = Mutex::new(stderr);
    let sink = |_: &ProgressEvent| {
        let count = processed.fetch_add(options.progress_interval, Ordering::Relaxed) + options.progress_interval;
        let mut err = err.lock().expect("stderr lock");
        let _ = writeln!(
            err,
            "progress n={n} processed={count} of={} elapsed={:.3}",
            range.len(),
            started.elapsed().as_secs_f64()
        );
    };

    let report = match &args.checkpoint {
        None => verify_codes(range, &options, workers, &sink).map_err(|e| usage(&e))?,
        Some(path) => {
            if args.stride == 0 {
                return Err(Failure::Usage("--stride must be positive".into()));
            }
            let mut ckpt = Checkpoint::resume_or_new(path, range, args.stride, &options)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            processed.store(ckpt.next() - range.start(), Ordering::Relaxed);
            ckpt.advance(None, workers, args.progress, &sink, Some(path))
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            checkpoint_report(ckpt, range, started.elapsed()).map_err(|e| usage(&e))?
        }
    };

    let mut buf = Vec::new();
    match args.format {
        OutputFormat::Text => write_text(&report, &mut buf),
        OutputFormat::Lines => write_lines(&report, &mut buf),
    }
    .map_err(|e| usage(&e))?;
    write_out(stdout, &buf)?;

    if report.found_counterexample() {
        Ok(EXIT_FOUND)
    } else {
        Ok(EXIT_OK)
    }
}

fn checkpoint_report(
    ckpt: Checkpoint,
    range: EnumerationRange,
    elapsed: Duration,
) -> Result<VerificationReport, crate::graph::GraphError> {
    Ok(VerificationReport {
        n: range.n(),
        total: code_space(range.n())?,
        range,
        aggregate: ckpt.into_result(),
        elapsed,
    })
}

fn load_seed(spec: &str) -> Result<OrientedGraph, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return parse_graph(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    let (n, code) = spec
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("seed `{spec}` is neither a file nor `n:code`")))?;
    let n: usize = n.parse().map_err(|e| Failure::Usage(format!("seed order `{n}`: {e}")))?;
    let code: u64 = code.parse().map_err(|e| Failure::Usage(format!("seed code `{code}`: {e}")))?;
    GraphCode::new(n, code)
        .map(GraphCode::decode)
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run_family(args: &FamilyArgs, stdout: &mut dyn Write, stderr: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let seed = load_seed(&args.seed_graph)?;
    let policy = match args.policy {
        PolicyArg::First => SplitPolicy::FirstEligible,
        PolicyArg::Random => SplitPolicy::Random { seed: args.seed },
    };
    let family = match generate_family(&seed, args.steps, policy) {
        Ok(family) => family,
        Err(e @ (SplitTwinError::CertificateFailure { .. } | SplitTwinError::SeedWithoutSeymourVertex(_))) => {
            return Err(Failure::Found(e.to_string()))
        }
        Err(e) => return Err(Failure::Usage(e.to_string())),
    };
    let mut buf = Vec::new();
    write_family(&family, &mut buf).map_err(|e| Failure::Usage(e.to_string()))?;
    write_out(stdout, &buf)?;
    match family.status {
        FamilyStatus::Complete => {}
        FamilyStatus::Exhausted { at_step } => {
            let _ = writeln!(stderr, "family stopped at step {at_step}: no eligible split vertex");
        }
        FamilyStatus::Truncated { at_step } => {
            let _ = writeln!(stderr, "family stopped at step {at_step}: maximum order reached");
        }
    }
    Ok(EXIT_OK)
}
