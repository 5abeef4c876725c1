//! Command-line front end. Every command writes one JSON object per line;
//! big integers are decimal strings.

use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::bounds;
use crate::conjectures::{self, FindingKind};
use crate::engine::{self, SearchConfig};
use crate::error::Error;
use crate::reference::{self, CheckMode, VerifyConfig};
use crate::spectral::Alphabet;
use crate::words;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "circmax",
    version,
    about = "Maximal determinants of binary circulant matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive search over necklaces of one order.
    Search(SearchArgs),
    /// Compare searches and table words against the published tables.
    Verify(VerifyArgs),
    /// Reports on the circulant-core and extreme-point conjectures.
    #[command(subcommand)]
    Conjectures(ConjectureCommand),
    /// Upper bounds for one order.
    Bounds(BoundsArgs),
}

#[derive(Args, Debug, Clone)]
struct EngineArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Sample size for the partition (default 4000 per worker).
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl EngineArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            workers: self.workers as usize,
            sample_size: self.sample_size,
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    order: u32,
    #[arg(long, default_value = "01", value_parser = parse_alphabet)]
    alphabet: Alphabet,
    #[command(flatten)]
    engine: EngineArgs,
    /// Append the record to this file instead of printing it.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Segment checkpoint file; completed segments are skipped on rerun.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Also list every maximizing necklace.
    #[arg(long)]
    keep_all: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Table to check; both when omitted.
    #[arg(long, value_parser = parse_alphabet)]
    alphabet: Option<Alphabet>,
    #[arg(long, default_value_t = 1)]
    from: usize,
    /// Last order (default: end of the table).
    #[arg(long)]
    to: Option<usize>,
    /// Rows whose estimated search time exceeds this get word checks only.
    #[arg(long, default_value_t = 300.0)]
    budget_seconds: f64,
    /// Skip searches; re-evaluate every table word instead.
    #[arg(long)]
    words_only: bool,
    /// Table resource to check against instead of the built-in one.
    #[arg(long)]
    table: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ConjectureCommand {
    /// Which orders attain the bound, against the circulant-core constructions.
    A(ConjectureAArgs),
    /// Maxima that improve when one entry moves into the interior.
    B(ConjectureBArgs),
    /// The quadratic-residue family with a free diagonal entry.
    Ura(UraArgs),
}

#[derive(Args, Debug)]
struct ConjectureAArgs {
    #[arg(long, default_value_t = 1)]
    from: u64,
    #[arg(long, default_value_t = 30)]
    to: u64,
    /// Orders whose search would exceed this use the table value.
    #[arg(long, default_value_t = 60.0)]
    budget_seconds: f64,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConjectureBArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=32))]
    order: u32,
    #[arg(long, default_value = "01", value_parser = parse_alphabet)]
    alphabet: Alphabet,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct UraArgs {
    #[arg(long)]
    order: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    /// Both alphabets when omitted.
    #[arg(long, value_parser = parse_alphabet)]
    alphabet: Option<Alphabet>,
}

fn parse_alphabet(s: &str) -> Result<Alphabet, String> {
    s.parse()
        .map_err(|_| format!("expected 01 or pm1, got {s:?}"))
}

/// What a command failure means for the exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Verify(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BadLength(_)
            | Error::BadSymbol(_)
            | Error::DecimalOutOfRange { .. }
            | Error::NotOddPrime(_)
            | Error::NotUraOrder(_)
            | Error::BadPartition { .. }
            | Error::BadPosition { .. }
            | Error::Table(_) => Failure::Usage(e.to_string()),
            _ => Failure::Inconsistent(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Inconsistent(format!("i/o: {e}"))
    }
}

struct Sink<'a> {
    file: Option<std::fs::File>,
    stdout: &'a mut dyn Write,
}

impl<'a> Sink<'a> {
    fn new(path: Option<&PathBuf>, stdout: &'a mut dyn Write) -> Result<Self, Failure> {
        let file = match path {
            Some(p) => Some(
                OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(p)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
            ),
            None => None,
        };
        Ok(Sink { file, stdout })
    }

    fn emit(&mut self, record: &Value) -> Result<(), Failure> {
        let line = record.to_string();
        match &mut self.file {
            Some(f) => writeln!(f, "{line}")?,
            None => writeln!(self.stdout, "{line}")?,
        }
        Ok(())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let outcome = match cli.command {
        Command::Search(a) => cmd_search(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
        Command::Conjectures(ConjectureCommand::A(a)) => cmd_conjecture_a(a, stdout),
        Command::Conjectures(ConjectureCommand::B(a)) => cmd_conjecture_b(a, stdout),
        Command::Conjectures(ConjectureCommand::Ura(a)) => cmd_ura(a, stdout),
        Command::Bounds(a) => cmd_bounds(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Verify(m)) => {
            let _ = writeln!(stderr, "verification failed: {m}");
            EXIT_VERIFY_FAILED
        }
        Err(Failure::Inconsistent(m)) => {
            let _ = writeln!(stderr, "internal inconsistency: {m}");
            EXIT_INCONSISTENT
        }
    }
}

fn s<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

fn rational_record(x: &BigRational) -> Value {
    json!({
        "exact": s(x),
        "approx": x.to_f64().unwrap_or(f64::NAN),
    })
}

fn cmd_search(a: SearchArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let n = a.order as usize;
    let config = SearchConfig {
        checkpoint: a.checkpoint.clone(),
        keep_all_maximizers: a.keep_all,
        ..a.engine.config()
    };
    let started = Instant::now();
    let r = engine::search(n, a.alphabet, &config)?;
    let elapsed = started.elapsed().as_secs_f64();
    let mut record = json!({
        "n": n,
        "alphabet": a.alphabet.flag(),
        "max_abs_det": s(&r.max_abs_det),
        "upper_bound": s(&r.upper_bound),
        "ratio": r.ratio,
        "lex_least_decimal": s(words::word_to_decimal(&r.lex_least_word)),
        "lex_least_word": a.alphabet.render(&r.lex_least_word),
        "candidates": s(r.candidates_examined),
        "elapsed_seconds": elapsed,
        "prime_used": r.prime_used.as_ref().map(s),
        "seed": s(a.engine.seed),
        "workers": a.engine.workers,
        "sample_size": config.effective_sample_size(),
    });
    if let Some(scaled) = r.scaled() {
        record["scaled_det"] = s(scaled);
    }
    if a.keep_all {
        record["maximizers"] = r
            .maximizers
            .iter()
            .map(|w| s(words::word_to_decimal(w)))
            .collect();
    }
    Sink::new(a.output.as_ref(), stdout)?.emit(&record)
}

fn cmd_verify(
    a: VerifyArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let alphabets = match a.alphabet {
        Some(x) => vec![x],
        None => vec![Alphabet::Binary01, Alphabet::BinaryPM1],
    };
    let table = match &a.table {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Some(reference::parse_tables(&text)?)
        }
        None => None,
    };
    let config = VerifyConfig {
        search: a.engine.config(),
        budget_seconds: Some(a.budget_seconds),
        words_only: a.words_only,
        table,
    };
    let mut sink = Sink::new(a.output.as_ref(), stdout)?;
    let (mut passed, mut failed) = (0usize, Vec::new());
    for alphabet in alphabets {
        let hi = a.to.unwrap_or(*reference::table_range(alphabet).end());
        let hi = if a.alphabet.is_none() {
            hi.min(*reference::table_range(alphabet).end())
        } else {
            hi
        };
        let range = reference::table_range(alphabet);
        if a.from < *range.start() || hi > *range.end() || a.from > hi {
            return Err(Failure::Usage(format!(
                "orders {}..={hi} are outside the {alphabet} table ({}..={})",
                a.from,
                range.start(),
                range.end()
            )));
        }
        for n in a.from..=hi {
            let started = Instant::now();
            let row = reference::verify_row(n, alphabet, &config)?;
            let status = if row.pass() { "PASS" } else { "FAIL" };
            let mut record = json!({
                "n": n,
                "alphabet": alphabet.flag(),
                "status": status,
                "mode": match row.mode {
                    CheckMode::FullSearch => "search",
                    CheckMode::WordOnly => "word",
                },
                "table_value": s(&row.expected.value),
                "table_ratio": row.expected.ratio,
                "table_decimal": s(row.expected.decimal),
                "word_value": s(&row.word.computed),
                "mismatches": row.mismatches,
                "elapsed_seconds": started.elapsed().as_secs_f64(),
            });
            if let Some(r) = &row.search {
                record["search_value"] = s(r.scaled().unwrap_or_else(|| r.max_abs_det.clone()));
                record["search_ratio"] = s(&r.ratio);
                record["search_decimal"] = s(words::word_to_decimal(&r.lex_least_word));
            }
            sink.emit(&record)?;
            let _ = writeln!(
                stderr,
                "{status} {alphabet} n={n} ({})",
                record["mode"].as_str().unwrap_or("")
            );
            if row.pass() {
                passed += 1;
            } else {
                failed.push(format!("{alphabet} n={n}"));
            }
        }
    }
    let _ = writeln!(stderr, "{passed} passed, {} failed", failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(failed.join(", ")))
    }
}

fn cmd_conjecture_a(a: ConjectureAArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if a.from == 0 || a.from > a.to {
        return Err(Failure::Usage(format!(
            "empty order range {}..={}",
            a.from, a.to
        )));
    }
    let config = a.engine.config();
    let mut sink = Sink::new(a.output.as_ref(), stdout)?;
    let mut equality = Vec::new();
    let mut inconsistent = Vec::new();
    for n in a.from..=a.to {
        let nn = n as usize;
        let bound = bounds::u01_bound(nn);
        let row = reference::table_lookup(nn, Alphabet::Binary01);
        let within_budget = reference::estimated_seconds(nn, config.workers) <= a.budget_seconds;
        let (d, source): (BigUint, &str) = match (within_budget, row) {
            (true, _) => (
                engine::search(nn, Alphabet::Binary01, &config)?.max_abs_det,
                "search",
            ),
            (false, Some(r)) => (r.value.clone(), "table"),
            (false, None) => {
                return Err(Failure::Usage(format!(
                    "n = {n} is beyond both the search budget and the table"
                )))
            }
        };
        let rep = conjectures::conjecture_a_status(n, &d, &bound);
        if rep.attains_bound {
            equality.push(n);
        }
        if !rep.consistent {
            inconsistent.push(n);
        }
        sink.emit(&json!({
            "n": n,
            "max_abs_det": s(&rep.max_abs_det),
            "bound": s(&rep.bound),
            "attains_bound": rep.attains_bound,
            "below_half_bound": &rep.max_abs_det * 2u32 < rep.bound,
            "classes": rep.classes.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>(),
            "consistent": rep.consistent,
            "source": source,
        }))?;
    }
    sink.emit(&json!({
        "summary": "conjecture_a",
        "from": a.from,
        "to": a.to,
        "equality_cases": equality,
        "inconsistent": inconsistent,
    }))?;
    if inconsistent.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "classification disagrees at {inconsistent:?}"
        )))
    }
}

fn cmd_conjecture_b(a: ConjectureBArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let report = conjectures::scan_order(a.order as usize, a.alphabet, &a.engine.config())?;
    let mut sink = Sink::new(a.output.as_ref(), stdout)?;
    for f in &report.findings {
        let mut record = json!({
            "n": f.n,
            "alphabet": f.alphabet.flag(),
            "base_word": f.alphabet.render(&f.base_word),
            "base_decimal": s(words::word_to_decimal(&f.base_word)),
            "position": f.position,
            "endpoint": f.endpoint,
            "det_at_extreme": s(&f.det_at_extreme),
            "derivative": s(&f.derivative),
            "inward_slope": s(&f.inward_slope),
            "kind": match f.kind {
                FindingKind::FirstOrder => "first_order",
                FindingKind::Interior => "interior",
            },
            "even_polynomial": f.polynomial.is_even(),
            "class_size": f.class_size,
        });
        if let Some(w) = &f.witness {
            record["witness_x"] = rational_record(&w.x);
            record["witness_abs_det"] = rational_record(&w.abs_det);
        }
        sink.emit(&record)?;
    }
    sink.emit(&json!({
        "summary": "conjecture_b",
        "n": report.n,
        "alphabet": report.alphabet.flag(),
        "max_abs_det": s(&report.max_abs_det),
        "rotations_checked": report.rotations_checked,
        "classes_checked": report.classes_checked,
        "findings": report.findings.len(),
        "exhaustive": report.exhaustive,
    }))
}

fn cmd_ura(a: UraArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let d = reference::table_lookup(a.order as usize, Alphabet::Binary01).map(|r| &r.value);
    let c = conjectures::ura_chain(a.order, d)?;
    let record = json!({
        "n": c.n,
        "k": c.k,
        "bound": s(&c.bound),
        "x_k": c.x_k,
        "det_at_x_k": c.det_at_x_k,
        "det_at_half": rational_record(&c.det_at_half),
        "max_abs_det": c.max_abs_det.as_ref().map(s),
        "det_at_one": s(&c.det_at_one),
        "det_at_zero": s(&c.det_at_zero),
        "closed_form_matches": c.closed_form_matches,
        "chain_holds": c.holds,
    });
    Sink::new(a.output.as_ref(), stdout)?.emit(&record)?;
    if !c.closed_form_matches {
        return Err(Failure::Inconsistent(format!(
            "interpolated determinant polynomial differs from the closed form at n = {}",
            c.n
        )));
    }
    Ok(())
}

fn cmd_bounds(a: BoundsArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let n = a.order as usize;
    let alphabets = match a.alphabet {
        Some(x) => vec![x],
        None => vec![Alphabet::Binary01, Alphabet::BinaryPM1],
    };
    let mut sink = Sink::new(None, stdout)?;
    for alphabet in alphabets {
        let mut record = json!({
            "n": n,
            "alphabet": alphabet.flag(),
            "bound": s(engine::upper_bound(n, alphabet)),
            "hbe_floor": s(bounds::hbe_floor_scaled(n, 0)),
        });
        if alphabet == Alphabet::BinaryPM1 {
            record["scaled_bound"] = s(bounds::hbe_floor_scaled(n, n - 1));
        }
        sink.emit(&record)?;
    }
    Ok(())
}
