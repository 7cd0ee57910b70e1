//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 I/O error. Results go to
//! standard output as CSV; diagnostics go to standard error.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thd_core::{beta_hdi, BetaParams, QuantileEstimator, Sample, TrimWidth};

use crate::config;
use crate::error::SimError;
use crate::estimator::EstimatorId;
use crate::output;
use crate::simulation::{run_sim1, run_sim2, with_threads};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "thd", version, about = "Trimmed Harrell-Davis quantile estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate quantiles of whitespace-separated numbers; prints `p,estimate` rows.
    Estimate {
        #[arg(long, value_enum, default_value_t = Method::Thd)]
        method: Method,
        /// Comma-separated probabilities.
        #[arg(long = "p", default_value = "0.5", value_delimiter = ',')]
        p: Vec<f64>,
        /// HDI width for `thd`: a number in (0, 1] or `auto` (1/sqrt(n)).
        #[arg(long)]
        width: Option<String>,
        /// Input file; standard input when omitted.
        input: Option<PathBuf>,
    },
    /// Highest-density interval of Beta(alpha, beta); prints `L,R,case`.
    Hdi {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        width: f64,
    },
    /// Run a simulation from a JSON config and write CSV.
    Simulate {
        #[arg(long, value_enum)]
        kind: SimKind,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Hf7,
    Hd,
    Thd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimKind {
    Sim1,
    Sim2,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(
    command: Command,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Estimate { method, p, width, input } => {
            let estimator = estimator_for(method, width.as_deref())?;
            let values = match input {
                Some(path) => {
                    let file = std::fs::File::open(&path)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    read_numbers(&mut std::io::BufReader::new(file))?
                }
                None => read_numbers(stdin)?,
            };
            cmd_estimate(estimator, &p, values, stdout)
        }
        Command::Hdi { alpha, beta, width } => cmd_hdi(alpha, beta, width, stdout),
        Command::Simulate { kind, config, out, seed, threads } => {
            cmd_simulate(kind, &config, &out, seed, threads, stderr)
        }
    }
}

fn estimator_for(method: Method, width: Option<&str>) -> Result<EstimatorId, CliError> {
    match (method, width) {
        (Method::Hf7, None) => Ok(EstimatorId::Hf7),
        (Method::Hd, None) => Ok(EstimatorId::Hd),
        (Method::Hf7 | Method::Hd, Some(_)) => {
            Err(CliError::Usage("--width applies only to --method thd".into()))
        }
        (Method::Thd, None) => Ok(EstimatorId::Thd(TrimWidth::Auto)),
        (Method::Thd, Some(w)) if w.eq_ignore_ascii_case("auto") => {
            Ok(EstimatorId::Thd(TrimWidth::Auto))
        }
        (Method::Thd, Some(w)) => {
            let width: f64 = w
                .parse()
                .map_err(|_| CliError::Usage(format!("--width: `{w}` is neither a number nor `auto`")))?;
            TrimWidth::Fixed(width)
                .resolve(1)
                .map_err(|_| CliError::Usage(format!("--width must lie in (0, 1], got {w}")))?;
            Ok(EstimatorId::Thd(TrimWidth::Fixed(width)))
        }
    }
}

/// Reads whitespace-separated decimal numbers. Errors name the 1-based line.
pub fn read_numbers(input: &mut dyn BufRead) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    let mut line = String::new();
    let mut line_no = 0;
    loop {
        line.clear();
        let read = input.read_line(&mut line).map_err(|e| CliError::Io(format!("reading input: {e}")))?;
        if read == 0 {
            break;
        }
        line_no += 1;
        for token in line.split_whitespace() {
            match token.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(CliError::Usage(format!("line {line_no}: `{token}` is not a finite number")))
                }
            }
        }
    }
    Ok(values)
}

pub fn cmd_estimate(
    estimator: EstimatorId,
    probabilities: &[f64],
    values: Vec<f64>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Usage("input contains no numbers".into()));
    }
    if let Some(p) = probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(CliError::Usage(format!("--p: {p} is outside [0, 1]")));
    }
    let sample = Sample::new(values).map_err(|e| CliError::Usage(e.to_string()))?;
    let io = |e: std::io::Error| CliError::Io(format!("writing output: {e}"));
    for &p in probabilities {
        let q = estimator
            .estimate_sorted(sample.as_slice(), p)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        writeln!(stdout, "{p},{q}").map_err(io)?;
    }
    Ok(())
}

pub fn cmd_hdi(alpha: f64, beta: f64, width: f64, stdout: &mut dyn Write) -> Result<(), CliError> {
    let params = BetaParams::new(alpha, beta).map_err(|e| CliError::Usage(e.to_string()))?;
    let hdi = beta_hdi(params, width).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(stdout, "{},{},{}", hdi.lower, hdi.upper, hdi.case)
        .map_err(|e| CliError::Io(format!("writing output: {e}")))
}

pub fn cmd_simulate(
    kind: SimKind,
    config_path: &std::path::Path,
    out: &std::path::Path,
    seed: Option<u64>,
    threads: Option<usize>,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let started = Instant::now();
    let text = config::read_text(config_path)?;
    let threads = threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let csv = match kind {
        SimKind::Sim1 => {
            let mut cfg = config::parse_sim1(&text)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let table = with_threads(threads, || run_sim1(&cfg))??;
            output::sim1_csv(&table)?
        }
        SimKind::Sim2 => {
            let mut cfg = config::parse_sim2(&text)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = with_threads(threads, || run_sim2(&cfg))??;
            output::sim2_csv(&report)?
        }
    };
    std::fs::write(out, &csv).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let rows = csv.iter().filter(|&&b| b == b'\n').count().saturating_sub(1);
    let _ = writeln!(
        stderr,
        "wrote {rows} rows to {} in {:.2}s",
        out.display(),
        started.elapsed().as_secs_f64()
    );
    Ok(())
}
