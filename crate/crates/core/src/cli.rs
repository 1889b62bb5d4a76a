//! The `collatz-lab` command line.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage error, 3 cap violation,
//! 4 a label in a proven-empty category.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::classify::{classify_seed_with, classify_unit_with, conjecture_watchlist, WatchFlag};
use crate::coeffs::{coeffs_of_seed, evaluate};
use crate::collatz::{detect_cycle, trajectory, Seed};
use crate::config::{ClassifyOptions, Config, OutputFormat, SReference, CAP_ENV};
use crate::error::Error;
use crate::matrix::build_matrix;
use crate::parity::{
    convertibility_probe, minimal_seed, parity_vector, prefixes, solve_parity, ParityVector,
};
use crate::periodic::{alpha_cycle_limit, is_alpha_vs_beta, unit_limit, PeriodicUnit};
use crate::proportions::{
    self, convergence_sweep, proportion_a_in, proportion_s, Mode, Population, SweepTarget,
};
use crate::series::{build_series, series_limits, Family};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_EMPTY_CATEGORY: i32 = 4;

const RANGE_CHUNK: u64 = 8192;

#[derive(Debug, Parser)]
#[command(name = "collatz-lab", version, about = "Exact coefficient calculus for the shortcut Collatz map")]
struct Cli {
    /// Output format; csv and table apply to matrix, series and proportions.
    #[arg(long, global = true, default_value = "json")]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterates T^0(P) .. T^N(P).
    Traj {
        p: Seed,
        #[arg(long)]
        steps: usize,
    },
    /// A_N(P), B_N(P) and the check T^N(P) = A·P + B.
    Coeffs { p: Seed, n: usize },
    /// Parity vectors and the inverse problem.
    #[command(subcommand)]
    Parity(ParityCommand),
    /// Complete matrix of generator 1 (odd seeds) or 2 (even seeds).
    Matrix {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        generator: u8,
        #[arg(long)]
        order: usize,
        /// Destination file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limit, periodicity and label of a repeating parity unit.
    Unit {
        bits: ParityVector,
        /// Analyze the smallest rotation instead.
        #[arg(long)]
        canonical: bool,
    },
    /// Cycle search and cycle limits.
    Cycle {
        p: Seed,
        #[command(flatten)]
        budget: Budget,
    },
    /// Classify one seed, or a range as line-delimited JSON.
    Classify {
        #[arg(required_unless_present = "range", conflicts_with = "range")]
        p: Option<Seed>,
        /// Inclusive seed range `A..B`.
        #[arg(long, value_parser = parse_range)]
        range: Option<RangeInclusive<u64>>,
        #[command(flatten)]
        budget: Budget,
        /// Compare T^∞ against T^1(P) (default) or against P.
        #[arg(long, value_enum, default_value = "first-image")]
        s_reference: SRefArg,
    },
    /// A named sequential series and its limits.
    Series {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        max: usize,
    },
    /// Class proportions at one order, or a sweep over orders.
    Proportions(ProportionsArgs),
}

#[derive(Debug, Subcommand)]
enum ParityCommand {
    /// v(P, N).
    Encode { p: Seed, n: usize },
    /// Residue class and minimal seed of a parity vector.
    Solve { bits: ParityVector },
    /// Minimal seeds of nested vectors; a single vector is expanded to its prefixes.
    Probe {
        #[arg(required = true)]
        bits: Vec<ParityVector>,
    },
}

#[derive(Debug, Args)]
struct Budget {
    #[arg(long)]
    max_steps: Option<usize>,
    /// Abandon a trajectory once a term exceeds this value.
    #[arg(long)]
    bound: Option<BigUint>,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ProportionsArgs {
    #[command(subcommand)]
    sweep: Option<SweepCommand>,
    #[arg(long, required = false)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Which class dichotomy to count.
    #[arg(long, value_enum, default_value = "a")]
    class: ClassArg,
    #[arg(long, value_enum, default_value = "all")]
    population: PopulationArg,
}

#[derive(Debug, Subcommand)]
enum SweepCommand {
    /// Tabulate a target across orders.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
        #[arg(long, value_enum)]
        target: TargetArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SRefArg {
    FirstImage,
    Seed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    OnesZeros,
    ZerosOnes,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Enum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    A,
    S,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PopulationArg {
    All,
    Odd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    A,
    SGap,
    OddFraction,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("range must satisfy 1 <= A <= B, got {a}..{b}"));
    }
    Ok(a..=b)
}

enum Failure {
    Lib(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_cap_violation() => EXIT_CAP,
        Error::EmptyCategoryViolation(_) => EXIT_EMPTY_CATEGORY,
        Error::InvalidSeed(_)
        | Error::ParseParity(_)
        | Error::ParseDyadic(_)
        | Error::ParseLabel(_)
        | Error::EmptyUnit
        | Error::InvalidGenerator(_)
        | Error::NotNested { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    let mut cfg = Config::from_env();
    cfg.output_format = cli.format;
    match dispatch(&cli.command, &cfg, out, err) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::OrderTooLarge { cap_name: "matrix order", .. }) {
                let _ = writeln!(err, "hint: raise the cap with {CAP_ENV}");
            }
            exit_code(&e)
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn json_only(cfg: &Config, command: &str) -> Result<(), Failure> {
    if cfg.output_format == OutputFormat::Json {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--format {} is not supported by `{command}`; use json",
            format!("{:?}", cfg.output_format).to_lowercase()
        )))
    }
}

fn classify_options(cfg: &Config, budget: &Budget) -> ClassifyOptions {
    let mut opts = cfg.classify_options();
    if let Some(s) = budget.max_steps {
        opts.max_steps = s;
    }
    if let Some(b) = &budget.bound {
        opts.bound = b.clone();
    }
    opts
}

fn dispatch(
    command: &Command,
    cfg: &Config,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    match command {
        Command::Traj { p, steps } => {
            json_only(cfg, "traj")?;
            emit(out, &trajectory(p, *steps))?;
        }
        Command::Coeffs { p, n } => {
            json_only(cfg, "coeffs")?;
            let c = coeffs_of_seed(p, *n);
            let terminal = evaluate(&c, p).expect("seed realizes its own parities");
            emit(
                out,
                &json!({
                    "seed": p.to_string(),
                    "n": n,
                    "vector": parity_vector(p, *n),
                    "a": c.a,
                    "b": c.b,
                    "terminal": terminal.to_string(),
                }),
            )?;
        }
        Command::Parity(pc) => {
            json_only(cfg, "parity")?;
            parity(pc, out)?;
        }
        Command::Matrix {
            generator,
            order,
            out: path,
        } => {
            let m = build_matrix(*generator, *order, cfg.matrix_order_cap)?;
            let sink: Box<dyn Write + '_> = match path {
                Some(p) => Box::new(BufWriter::new(File::create(p)?)),
                None => Box::new(BufWriter::new(&mut *out)),
            };
            match cfg.output_format {
                OutputFormat::Json => m.write_json(sink)?,
                OutputFormat::Csv => m.write_csv(sink)?,
                OutputFormat::Table => m.write_table(sink)?,
            }
        }
        Command::Unit { bits, canonical } => {
            json_only(cfg, "unit")?;
            let mut u = PeriodicUnit::new(bits.clone())?;
            if *canonical {
                u = u.canonical();
            }
            let verdict = classify_unit_with(&u, &cfg.classify_options())?;
            let limit = unit_limit(&u);
            emit(
                out,
                &json!({
                    "unit": u.to_string(),
                    "a_s": u.a_s(),
                    "b_s": u.b_s(),
                    "verdict": if limit.converges() { "Converges" } else { "Diverges" },
                    "limit": limit,
                    "periodicity": is_alpha_vs_beta(&u),
                    "label": verdict.label,
                    "classification": verdict,
                }),
            )?;
        }
        Command::Cycle { p, budget } => {
            json_only(cfg, "cycle")?;
            let opts = classify_options(cfg, budget);
            let search = detect_cycle(p, opts.max_steps, &opts.bound);
            let alpha = alpha_cycle_limit(p, opts.max_steps, &opts.bound).ok();
            emit(
                out,
                &json!({ "seed": p.to_string(), "search": search, "alpha": alpha }),
            )?;
        }
        Command::Classify {
            p,
            range,
            budget,
            s_reference,
        } => {
            json_only(cfg, "classify")?;
            let mut opts = classify_options(cfg, budget);
            opts.s_reference = match s_reference {
                SRefArg::FirstImage => SReference::FirstImage,
                SRefArg::Seed => SReference::Seed,
            };
            return match (p, range) {
                (Some(p), _) => {
                    let v = classify_seed_with(p, &opts)?;
                    if let WatchFlag::Flag(why) = conjecture_watchlist(&v) {
                        writeln!(err, "watch: seed {p}: {why}")?;
                    }
                    emit(out, &v)?;
                    Ok(EXIT_OK)
                }
                (None, Some(r)) => classify_range_stream(r.clone(), &opts, out, err),
                (None, None) => unreachable!("clap requires one of them"),
            };
        }
        Command::Series { family, max } => {
            let family = match family {
                FamilyArg::OnesZeros => Family::OnesThenZeros,
                FamilyArg::ZerosOnes => Family::ZerosThenOnes,
            };
            let report = build_series(&family, *max)?;
            match cfg.output_format {
                OutputFormat::Table => write!(out, "{}", report.table())?,
                OutputFormat::Json => {
                    let limits = series_limits(&report).ok();
                    emit(out, &json!({ "series": report, "limits": limits }))?;
                }
                OutputFormat::Csv => {
                    return Err(Failure::Usage(
                        "--format csv is not supported by `series`; use json or table".into(),
                    ))
                }
            }
        }
        Command::Proportions(args) => proportions_cmd(args, cfg, out)?,
    }
    Ok(EXIT_OK)
}

fn parity(pc: &ParityCommand, out: &mut dyn Write) -> Result<(), Failure> {
    match pc {
        ParityCommand::Encode { p, n } => emit(
            out,
            &json!({ "seed": p.to_string(), "n": n, "vector": parity_vector(p, *n) }),
        ),
        ParityCommand::Solve { bits } => {
            let class = solve_parity(bits);
            let min = minimal_seed(bits);
            emit(
                out,
                &json!({
                    "vector": bits,
                    "class": class,
                    "text": class.to_string(),
                    "minimal_seed": min.seed.to_string(),
                    "zero_residue": min.zero_residue,
                }),
            )
        }
        ParityCommand::Probe { bits } => {
            let chain = if bits.len() == 1 {
                prefixes(&bits[0])
            } else {
                bits.clone()
            };
            emit(out, &convertibility_probe(&chain)?)
        }
    }
}

fn classify_range_stream(
    range: RangeInclusive<u64>,
    opts: &ClassifyOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let mut out = BufWriter::new(out);
    let mut code = EXIT_OK;
    let (lo, hi) = (*range.start(), *range.end());
    let mut start = lo;
    while start <= hi {
        let end = hi.min(start.saturating_add(RANGE_CHUNK - 1));
        let verdicts: Vec<_> = (start..=end)
            .into_par_iter()
            .map(|p| classify_seed_with(&Seed::try_from(p).expect("range starts at 1"), opts))
            .collect();
        for (p, v) in (start..=end).zip(verdicts) {
            match v {
                Ok(v) => {
                    if let WatchFlag::Flag(why) = conjecture_watchlist(&v) {
                        writeln!(err, "watch: seed {p}: {why}")?;
                    }
                    serde_json::to_writer(&mut out, &v)?;
                    out.write_all(b"\n")?;
                }
                Err(e @ Error::EmptyCategoryViolation(_)) => {
                    writeln!(err, "VIOLATION at seed {p}: {e}")?;
                    code = EXIT_EMPTY_CATEGORY;
                }
                Err(e) => return Err(e.into()),
            }
        }
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out.flush()?;
    Ok(code)
}

fn proportions_cmd(args: &ProportionsArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), Failure> {
    if let Some(SweepCommand::Sweep { orders, target }) = &args.sweep {
        let target = match target {
            TargetArg::A => SweepTarget::AProportion,
            TargetArg::SGap => SweepTarget::SGap,
            TargetArg::OddFraction => SweepTarget::OddFraction,
        };
        let report = convergence_sweep(orders, target)?;
        match cfg.output_format {
            OutputFormat::Json => emit(out, &report)?,
            _ => {
                writeln!(out, "{:>6}  {:>40}", "order", "value")?;
                for row in &report.rows {
                    writeln!(
                        out,
                        "{:>6}  {:>40}",
                        row.order,
                        crate::report::rational_string(&row.value)
                    )?;
                }
                writeln!(out, "verdict: {:?}", report.verdict)?;
            }
        }
        return Ok(());
    }

    let order = args
        .order
        .ok_or_else(|| Failure::Usage("proportions needs --order N or the sweep subcommand".into()))?;
    let report = match args.class {
        ClassArg::S => proportion_s(order)?,
        ClassArg::A => {
            let mode = match args.mode {
                ModeArg::Exact => Mode::ExactBinomial,
                ModeArg::Enum => Mode::Enumeration,
            };
            let population = match args.population {
                PopulationArg::All => Population::AllVectors,
                PopulationArg::Odd => Population::OddSeeds,
            };
            proportion_a_in(order, mode, population)?
        }
    };
    match cfg.output_format {
        OutputFormat::Json => emit(out, &report)?,
        OutputFormat::Csv => proportions::write_csv(std::slice::from_ref(&report), out)?,
        OutputFormat::Table => {
            for (tag, count) in &report.counts {
                writeln!(
                    out,
                    "{:<8} {:>24} {:>40}",
                    tag.to_string(),
                    count.to_string(),
                    crate::report::rational_string(&report.ratios[tag])
                )?;
            }
        }
    }
    Ok(())
}
