//! Command-line front end: argument parsing, configuration, worker pool and
//! report emission. `run` is the whole program minus the process exit.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use goldlab_core::comb::ScanMode;
use goldlab_core::report::{emit, OutputFormat};
use goldlab_core::sums::{GridFormat, TableKind};

use commands::CommandOutput;
use config::{load_config_file, parse_format, RunConfig, WORKERS_ENV};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("odd input: {0}")]
    OddInput(String),
    #[error("guard violation: {0}")]
    Guard(String),
    #[error("{0}")]
    Resource(String),
}

impl From<goldlab_core::Error> for CliError {
    fn from(e: goldlab_core::Error) -> Self {
        use goldlab_core::Error as E;
        match e {
            E::OddTarget(_) => CliError::OddInput(e.to_string()),
            E::GuardExceeded { .. } | E::GridTooLarge { .. } | E::SieveTooSmall { .. } => {
                CliError::Guard(e.to_string())
            }
            E::Io(_) | E::Csv(_) | E::Json(_) | E::CacheFormat(_) => {
                CliError::Resource(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// Accepts plain integers and integral scientific notation such as `1e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(f) if f >= 0.0 && f.fract() == 0.0 && f <= 2f64.powi(53) => Ok(f as u64),
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "goldlab",
    version,
    about = "Exact verification battery for fantom systems and Goldbach claims"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Report format: json, csv or text
    #[arg(long, global = true, value_parser = ["json", "csv", "text"])]
    format: Option<String>,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel scans
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Largest primorial that may be materialized
    #[arg(long, global = true, value_parser = parse_count)]
    max_l: Option<u64>,
    /// Largest prime sieve limit
    #[arg(long, global = true, value_parser = parse_count)]
    max_sieve: Option<u64>,
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Attach wall-clock milliseconds to every report
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScanArg {
    Cyclic,
    Linear,
    Both,
}

impl ScanArg {
    fn modes(self) -> Vec<ScanMode> {
        match self {
            ScanArg::Cyclic => vec![ScanMode::Cyclic],
            ScanArg::Linear => vec![ScanMode::Linear],
            ScanArg::Both => vec![ScanMode::Cyclic, ScanMode::Linear],
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Rs,
    Prs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fantom system F(p_x): constructions, unit count, symmetry, permutations
    Fantom {
        #[arg(long)]
        x: usize,
        /// Decompose the products of F with this unit
        #[arg(long)]
        multiplier: Option<u64>,
    },
    /// Representation counts over F(p_x)
    Rs {
        #[arg(long)]
        x: usize,
        /// Print the full e -> r(e) table
        #[arg(long)]
        table: bool,
    },
    /// Representation counts over the presystem, lifting and balance
    Prs {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        table: bool,
    },
    /// Per-sum cancellation ledger
    Epsilon {
        #[arg(long)]
        x: usize,
    },
    /// r_RS(x)(e) >= (p_x - 2) r_RS(x-1)(e)
    Induction {
        #[arg(long)]
        x: usize,
    },
    /// Per-block cancellation audit
    Blocks {
        #[arg(long)]
        x: usize,
    },
    /// Comb window spread battery
    Combs {
        #[arg(long)]
        x: usize,
        /// Windows to scan; defaults to every window up to L
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value = "both")]
        scan: ScanArg,
    },
    /// Exact lower-bound value C(e, x)
    Bound {
        #[arg(long)]
        x: usize,
        /// Even target; defaults to p_x^2 + 1
        #[arg(long, value_parser = parse_count)]
        e: Option<u64>,
    },
    /// First x with C(p_x^2 + 1, x) > 1
    Crossover {
        #[arg(long, default_value_t = 20)]
        x_max: usize,
    },
    /// Units in (p_x, p_{x+1}^2) are exactly the primes there
    Window {
        #[arg(long)]
        x: usize,
        /// Binary prime cache to read or create
        #[arg(long)]
        prime_cache: Option<PathBuf>,
    },
    /// Evens in (p_x^2, p_{x+1}^2) as sums of primes above p_x
    Stringent {
        /// A single window; otherwise every window below --max
        #[arg(long)]
        x: Option<usize>,
        #[arg(long, default_value = "1000000", value_parser = parse_count)]
        max: u64,
        /// With --x, list every witness pair
        #[arg(long)]
        all: bool,
        #[arg(long)]
        prime_cache: Option<PathBuf>,
    },
    /// Every even up to --max as a sum of two primes above its threshold
    Scan {
        #[arg(long, default_value = "1000000", value_parser = parse_count)]
        max: u64,
        #[arg(long)]
        prime_cache: Option<PathBuf>,
    },
    /// Compares C(e, x) with the empirical unit-pair counts
    Audit {
        #[arg(long)]
        x: usize,
        #[arg(long, value_parser = parse_count)]
        e: Option<u64>,
        #[arg(long)]
        prime_cache: Option<PathBuf>,
    },
    /// Addition grid of F or PF (text or csv)
    Grid {
        #[arg(long)]
        x: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Runs the whole battery at one x
    All {
        #[arg(long, default_value_t = 3)]
        x: usize,
        #[arg(long, default_value = "100000", value_parser = parse_count)]
        max: u64,
    },
}

impl Command {
    fn supports_fault(&self) -> bool {
        matches!(
            self,
            Command::Fantom { .. }
                | Command::Rs { .. }
                | Command::Prs { .. }
                | Command::Window { .. }
                | Command::Stringent { .. }
                | Command::Scan { .. }
        )
    }
}

fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &g.config {
        let file = load_config_file(path)?;
        if let Some(f) = file.format {
            cfg.format = f;
        }
        cfg.output = file.output.or(cfg.output);
        if let Some(w) = file.workers {
            cfg.workers = w;
        }
        if let Some(v) = file.max_l {
            cfg.limits.max_l = v;
        }
        if let Some(v) = file.max_sieve {
            cfg.limits.max_sieve = v;
        }
        if let Some(t) = file.timing {
            cfg.timing = t;
        }
    }
    if let Some(f) = &g.format {
        cfg.format = parse_format(f)?;
    }
    if let Some(o) = &g.output {
        cfg.output = Some(o.clone());
    }
    if let Some(w) = g.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        cfg.workers = w;
    }
    if let Some(v) = g.max_l {
        cfg.limits.max_l = v;
    }
    if let Some(v) = g.max_sieve {
        cfg.limits.max_sieve = v;
    }
    cfg.timing |= g.timing;
    cfg.inject_fault = g.inject_fault;
    Ok(cfg)
}

/// The full battery at `x`; the comb battery only runs while L stays small.
fn run_all(x: usize, max: u64, cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let l = &cfg.limits;
    let mut out = CommandOutput::default();
    let mut add = |o: CommandOutput| out.reports.extend(o.reports);
    add(commands::fantom(x, None, l, false)?);
    add(commands::rs(x, false, l, false)?);
    if x >= 2 {
        add(commands::prs(x, false, l, false)?);
        add(commands::epsilon(x, l)?);
        add(commands::induction(x, l)?);
        add(commands::blocks(x, l)?);
        add(commands::bound_cmd(x, None)?);
        add(commands::audit(x, None, None, l)?);
    }
    if x <= 5 {
        add(commands::combs(
            x,
            None,
            &[ScanMode::Cyclic, ScanMode::Linear],
            l,
        )?);
    }
    add(commands::crossover(20)?);
    add(commands::window(x, None, l, false)?);
    add(commands::stringent(None, max, false, None, l, false)?);
    add(commands::scan(max, None, l, false)?);
    Ok(out)
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let l = &cfg.limits;
    let fault = cfg.inject_fault;
    match cmd {
        Command::Fantom { x, multiplier } => commands::fantom(*x, *multiplier, l, fault),
        Command::Rs { x, table } => commands::rs(*x, *table, l, fault),
        Command::Prs { x, table } => commands::prs(*x, *table, l, fault),
        Command::Epsilon { x } => commands::epsilon(*x, l),
        Command::Induction { x } => commands::induction(*x, l),
        Command::Blocks { x } => commands::blocks(*x, l),
        Command::Combs { x, window, scan } => {
            commands::combs(*x, window.as_deref(), &scan.modes(), l)
        }
        Command::Bound { x, e } => commands::bound_cmd(*x, *e),
        Command::Crossover { x_max } => commands::crossover(*x_max),
        Command::Window { x, prime_cache } => {
            commands::window(*x, prime_cache.as_deref(), l, fault)
        }
        Command::Stringent {
            x,
            max,
            all,
            prime_cache,
        } => commands::stringent(*x, *max, *all, prime_cache.as_deref(), l, fault),
        Command::Scan { max, prime_cache } => {
            commands::scan(*max, prime_cache.as_deref(), l, fault)
        }
        Command::Audit { x, e, prime_cache } => commands::audit(*x, *e, prime_cache.as_deref(), l),
        Command::Grid { x, kind } => {
            let format = match cfg.format {
                OutputFormat::Text => GridFormat::Text,
                OutputFormat::Csv => GridFormat::Csv,
                OutputFormat::Json => {
                    return Err(CliError::Usage("grid supports --format text or csv".into()))
                }
            };
            let kind = match kind {
                KindArg::Rs => TableKind::Rs,
                KindArg::Prs => TableKind::Prs,
            };
            commands::grid(*x, kind, format, l)
        }
        Command::All { x, max } => run_all(*x, *max, cfg),
    }
}

/// Renders the document: payload (text format only, or the grid itself)
/// followed by the reports.
fn render(cmd: &Command, out: &CommandOutput, cfg: &RunConfig) -> Result<String, CliError> {
    if let Command::Grid { .. } = cmd {
        return Ok(out.payload.clone().unwrap_or_default());
    }
    let mut doc = String::new();
    if cfg.format == OutputFormat::Text {
        if let Some(p) = &out.payload {
            doc.push_str(p);
        }
    }
    doc.push_str(&emit(&out.reports, cfg.format)?);
    Ok(doc)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = resolve_config(&cli.global)?;
    if cfg.inject_fault && !cli.command.supports_fault() {
        return Err(CliError::Usage(
            "--inject-fault applies to fantom, rs, prs, window, stringent and scan".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Resource(format!("cannot start worker pool: {e}")))?;
    let start = Instant::now();
    let mut result = pool.install(|| dispatch(&cli.command, &cfg))?;
    if cfg.timing {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut result.reports {
            r.timing_ms = Some(ms);
        }
    }
    let doc = render(&cli.command, &result, &cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, doc.as_bytes())
            .map_err(|e| CliError::Resource(format!("cannot write {}: {e}", path.display())))?,
        None => out
            .write_all(doc.as_bytes())
            .map_err(|e| CliError::Resource(format!("cannot write output: {e}")))?,
    }
    let failed = result.reports.iter().any(|r| r.status.is_failure());
    Ok(if failed { EXIT_VIOLATION } else { EXIT_OK })
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code: 0 all verified or audited-pass, 2 any violation or
/// audited-fail, 1 usage and resource errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_ERROR
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "goldlab: {e}");
            EXIT_ERROR
        }
    }
}
