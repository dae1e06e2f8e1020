//! The `rainbow-zn` command line.
//!
//! Exit codes: 0 success, 1 usage or malformed input, 2 not covered / nothing exists /
//! bad witness, 3 search cap exceeded, 4 inconsistency (a formula/search mismatch).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::characterize::{thm3_rainbow_free, thm5_rainbow_free, thm6_singleton_necessary};
use crate::coloring::{Coloring, RainbowReport};
use crate::constructions::{product_coloring, symmetric_interval_coloring, two_power_coloring, z9_coloring};
use crate::equation::{parse_coeffs, Equation};
use crate::error::{Error, Result};
use crate::formulas::{rb_zn, RbResult};
use crate::modring::Modulus;
use crate::search::{exists_rainbow_free, rainbow_number_brute, SearchConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_COVERED: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

/// Signature of the closed-form evaluator, swappable so the verdict logic can be tested
/// against a corrupted formula.
pub type FormulaFn = fn(&Equation) -> Result<RbResult>;

#[derive(Debug, Parser)]
#[command(name = "rainbow-zn", version, about = "Rainbow numbers of Z_n for a1 x1 + a2 x2 + a3 x3 = b")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute rb(Z_n, eq) by closed form, by search, or both.
    Rb(RbArgs),
    /// Search for a rainbow-free exact coloring with a given number of colors.
    Witness(WitnessArgs),
    /// Check a coloring file for rainbow solutions.
    CheckColoring(CheckArgs),
    /// Write one of the explicit rainbow-free colorings.
    Construct(ConstructArgs),
    /// Compare formula and search over a range of moduli, as CSV.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
struct EqArgs {
    /// Coefficients `a1,a2,a3`; negatives are reduced mod n.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    rhs: i64,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Refuse brute-force search above this modulus.
    #[arg(long, default_value_t = SearchConfig::default().n_cap)]
    n_cap: u64,
    /// Worker threads for the search; more than one enables parallel search.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Brute,
    Both,
}

#[derive(Debug, Args)]
struct RbArgs {
    #[arg(long)]
    modulus: u64,
    #[command(flatten)]
    eq: EqArgs,
    #[arg(long, value_enum, default_value_t = Method::Formula)]
    method: Method,
    /// One JSON record per line instead of text.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    search: SearchArgs,
    /// Write the witness coloring (a rainbow-free exact (rb-1)-coloring), when known.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long)]
    modulus: u64,
    #[command(flatten)]
    eq: EqArgs,
    #[arg(long)]
    num_colors: u32,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    file: PathBuf,
    #[command(flatten)]
    eq: EqArgs,
    /// `thm3:<c>`, `thm5` or `thm6`.
    #[arg(long)]
    characterize: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    SymmetricInterval,
    TwoPower,
    Product,
    Z9,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    t: Option<u64>,
    /// Coloring of Z_p for `product`.
    #[arg(long)]
    cp: Option<PathBuf>,
    /// Coloring of Z_t for `product`.
    #[arg(long)]
    ct: Option<PathBuf>,
    /// Coefficients the `product` inputs are rainbow-free for.
    #[arg(long, default_value = "1,1,1", allow_hyphen_values = true)]
    coeffs: String,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    modulus_min: u64,
    #[arg(long)]
    modulus_max: u64,
    #[command(flatten)]
    eq: EqArgs,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
}

/// One rb computation, as emitted by `rb --json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub n: u64,
    pub coefficients: [u64; 3],
    pub rhs: u64,
    pub method: String,
    pub rb_value: Option<u64>,
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_covered: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub witness_path: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
    /// One side produced no value.
    Incomplete,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
            Verdict::Incomplete => "INCOMPLETE",
        }
    }
}

pub fn verdict(formula: Option<u64>, brute: Option<u64>) -> Verdict {
    match (formula, brute) {
        (Some(f), Some(b)) if f == b => Verdict::Match,
        (Some(_), Some(_)) => Verdict::Mismatch,
        _ => Verdict::Incomplete,
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotCovered(_) | Error::NotApplicable(_) | Error::BadWitness(_) | Error::BadModulus(_) => {
            EXIT_NOT_COVERED
        }
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Inconsistency(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// Run the CLI on `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_formula(args, out, err, rb_zn)
}

/// [`run`] with the closed-form evaluator replaced.
pub fn run_with_formula<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, formula: FormulaFn) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Rb(a) => cmd_rb(a, out, formula),
        Command::Witness(a) => cmd_witness(a, out),
        Command::CheckColoring(a) => cmd_check_coloring(a, out),
        Command::Construct(a) => cmd_construct(a, out),
        Command::Scan(a) => cmd_scan(a, out, formula),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn build_eq(n: u64, eq: &EqArgs) -> Result<Equation> {
    let n = Modulus::new(n)?;
    Ok(Equation::reduced(n, parse_coeffs(&eq.coeffs)?, eq.rhs))
}

fn search_config(args: &SearchArgs) -> SearchConfig {
    SearchConfig { n_cap: args.n_cap, parallel: args.threads > 1, ..SearchConfig::default() }
}

fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if threads <= 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(io_err)?;
    Ok(pool.install(f))
}

fn write_coloring(path: &Path, c: &Coloring) -> Result<()> {
    fs::write(path, c.to_json() + "\n").map_err(io_err)
}

fn read_coloring(path: &Path) -> Result<Coloring> {
    let text = fs::read_to_string(path).map_err(io_err)?;
    Coloring::from_json(&text)
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn record(eq: &Equation, method: &str, outcome: &Result<RbResult>, elapsed_ms: u64) -> RunRecord {
    let (rb_value, provenance) = match outcome {
        Ok(r) => (Some(r.value), Some(r.provenance.to_string())),
        Err(_) => (None, None),
    };
    RunRecord {
        n: eq.modulus().get(),
        coefficients: eq.coeffs(),
        rhs: eq.rhs(),
        method: method.to_string(),
        rb_value,
        provenance,
        not_covered: match outcome {
            Err(Error::NotCovered(m)) => Some(m.clone()),
            _ => None,
        },
        error: match outcome {
            Ok(_) | Err(Error::NotCovered(_)) => None,
            Err(e) => Some(e.to_string()),
        },
        witness_path: None,
        elapsed_ms,
    }
}

fn cmd_rb(a: RbArgs, out: &mut dyn Write, formula: FormulaFn) -> Result<i32> {
    let eq = build_eq(a.modulus, &a.eq)?;
    let cfg = search_config(&a.search);
    let mut runs: Vec<(&str, Result<RbResult>, u64)> = Vec::new();
    if matches!(a.method, Method::Formula | Method::Both) {
        let start = Instant::now();
        let r = formula(&eq);
        runs.push(("formula", r, elapsed_ms(start)));
    }
    if matches!(a.method, Method::Brute | Method::Both) {
        let start = Instant::now();
        let r = with_threads(a.search.threads, || rainbow_number_brute(&eq, &cfg))?;
        runs.push(("brute", r, elapsed_ms(start)));
    }
    for (_, r, _) in &runs {
        if let Err(e) = r {
            if !matches!(e, Error::NotCovered(_) | Error::CapExceeded { .. }) {
                return Err(e.clone());
            }
        }
    }

    let mut witness_path = None;
    if let Some(path) = &a.witness_out {
        // prefer the search witness, it is always attached when one exists
        let w = runs.iter().rev().find_map(|(_, r, _)| r.as_ref().ok()?.witness.clone());
        if let Some(w) = w {
            write_coloring(path, &w)?;
            witness_path = Some(path.display().to_string());
        }
    }

    let value = |m: &str| runs.iter().find(|(k, _, _)| *k == m).and_then(|(_, r, _)| r.as_ref().ok().map(|r| r.value));
    let v = (a.method == Method::Both).then(|| verdict(value("formula"), value("brute")));

    for (method, r, ms) in &runs {
        if a.json {
            let mut rec = record(&eq, method, r, *ms);
            if r.as_ref().is_ok_and(|r| r.witness.is_some()) {
                rec.witness_path = witness_path.clone();
            }
            writeln!(out, "{}", serde_json::to_string(&rec).map_err(io_err)?).map_err(io_err)?;
        } else {
            match r {
                Ok(r) => writeln!(out, "{method}: rb = {} ({})", r.value, r.provenance),
                Err(Error::NotCovered(m)) => writeln!(out, "{method}: not covered ({m})"),
                Err(e) => writeln!(out, "{method}: {e}"),
            }
            .map_err(io_err)?;
        }
    }
    if let Some(v) = v {
        if a.json {
            writeln!(out, "{}", serde_json::json!({ "verdict": v.as_str() })).map_err(io_err)?;
        } else {
            writeln!(out, "{}", v.as_str()).map_err(io_err)?;
        }
    }
    if !a.json {
        if let Some(p) = &witness_path {
            writeln!(out, "witness written to {p}").map_err(io_err)?;
        }
    }

    if v == Some(Verdict::Mismatch) {
        return Ok(EXIT_MISMATCH);
    }
    if runs.iter().any(|(_, r, _)| matches!(r, Err(Error::CapExceeded { .. }))) {
        return Ok(EXIT_CAP);
    }
    if runs.iter().any(|(_, r, _)| matches!(r, Err(Error::NotCovered(_)))) {
        return Ok(EXIT_NOT_COVERED);
    }
    Ok(EXIT_OK)
}

fn cmd_witness(a: WitnessArgs, out: &mut dyn Write) -> Result<i32> {
    let eq = build_eq(a.modulus, &a.eq)?;
    let cfg = search_config(&a.search);
    let found = with_threads(a.search.threads, || exists_rainbow_free(&eq, a.num_colors, &cfg))??;
    match found {
        Some(c) => {
            write_coloring(&a.out, &c)?;
            writeln!(out, "wrote rainbow-free exact {}-coloring to {}", a.num_colors, a.out.display()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "no rainbow-free exact {}-coloring of Z_{} for {eq}", a.num_colors, a.modulus)
                .map_err(io_err)?;
            Ok(EXIT_NOT_COVERED)
        }
    }
}

enum Characterization {
    Thm3(i64),
    Thm5,
    Thm6,
}

fn parse_characterization(s: &str) -> Result<Characterization> {
    match s {
        "thm5" => Ok(Characterization::Thm5),
        "thm6" => Ok(Characterization::Thm6),
        _ => {
            let c = s
                .strip_prefix("thm3:")
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::Parse(format!("unknown characterization {s:?}")))?;
            Ok(Characterization::Thm3(c))
        }
    }
}

fn cmd_check_coloring(a: CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let c = read_coloring(&a.file)?;
    let n = c.modulus();
    let eq = build_eq(n.get(), &a.eq)?;
    let report = c.find_rainbow(&eq)?;
    match report {
        RainbowReport::RainbowFree => writeln!(out, "RainbowFree"),
        RainbowReport::RainbowFound([x, y, z]) => writeln!(out, "rainbow ({x}, {y}, {z})"),
    }
    .map_err(io_err)?;

    let Some(which) = &a.characterize else {
        return Ok(EXIT_OK);
    };
    let free = report.is_rainbow_free();
    let (label, agrees) = match parse_characterization(which)? {
        Characterization::Thm3(cp) => {
            let expected = Equation::reduced(n, [1, 1, -cp], 0);
            if expected != eq {
                return Err(Error::Parse(format!("thm3:{cp} characterizes {expected}, not {eq}")));
            }
            let v = thm3_rainbow_free(&c, n.reduce(cp))?;
            (format!("thm3: {}", if v { "rainbow-free" } else { "has rainbow" }), v == free)
        }
        Characterization::Thm5 => {
            if eq.coeffs() != [1, 1, 1] {
                return Err(Error::Parse(format!("thm5 characterizes eq(1,1,1,b), not {eq}")));
            }
            let v = thm5_rainbow_free(&c, eq.rhs())?;
            (format!("thm5: {}", if v { "rainbow-free" } else { "has rainbow" }), v == free)
        }
        Characterization::Thm6 => {
            let v = thm6_singleton_necessary(&c, &eq)?;
            let label = if v { "singleton condition holds" } else { "singleton condition fails, has rainbow" };
            (format!("thm6: {label}"), v || !free)
        }
    };
    writeln!(out, "{label}").map_err(io_err)?;
    writeln!(out, "{}", if agrees { "agrees with search" } else { "DISAGREES with search" }).map_err(io_err)?;
    Ok(if agrees { EXIT_OK } else { EXIT_MISMATCH })
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parse(format!("--{flag} is required for this kind")))
}

fn cmd_construct(a: ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let c = match a.kind {
        Kind::SymmetricInterval => symmetric_interval_coloring(required(a.p, "p")?)?,
        Kind::TwoPower => two_power_coloring(required(a.alpha, "alpha")?)?,
        Kind::Z9 => z9_coloring(),
        Kind::Product => {
            let p = required(a.p, "p")?;
            let t = required(a.t, "t")?;
            let cp = read_coloring(&required(a.cp, "cp")?)?;
            let ct = read_coloring(&required(a.ct, "ct")?)?;
            product_coloring(p, t, &cp, &ct, parse_coeffs(&a.coeffs)?)?
        }
    };
    match &a.out {
        Some(path) => {
            write_coloring(path, &c)?;
            writeln!(out, "wrote exact {}-coloring of Z_{} to {}", c.num_colors(), c.modulus(), path.display())
        }
        None => writeln!(out, "{}", c.to_json()),
    }
    .map_err(io_err)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct ScanRow {
    n: u64,
    a1: u64,
    a2: u64,
    a3: u64,
    b: u64,
    rb_formula: Option<u64>,
    rb_brute: Option<u64>,
    provenance: Option<String>,
    #[serde(rename = "match")]
    matched: Option<bool>,
    elapsed_ms: u64,
    status: String,
}

fn cmd_scan(a: ScanArgs, out: &mut dyn Write, formula: FormulaFn) -> Result<i32> {
    if a.modulus_min < 2 || a.modulus_min > a.modulus_max {
        return Err(Error::Parse(format!("bad modulus range {}..={}", a.modulus_min, a.modulus_max)));
    }
    let coeffs = parse_coeffs(&a.eq.coeffs)?;
    let cfg = search_config(&a.search);
    let file = fs::File::create(&a.out).map_err(io_err)?;
    let mut w = csv::Writer::from_writer(file);
    let mut code = EXIT_OK;
    for n in a.modulus_min..=a.modulus_max {
        let eq = Equation::reduced(Modulus::new(n)?, coeffs, a.eq.rhs);
        let start = Instant::now();
        let mut status = Vec::new();
        let f = if a.method == Method::Brute {
            None
        } else {
            match formula(&eq) {
                Ok(r) => Some(r),
                Err(Error::NotCovered(_)) => {
                    status.push("not-covered");
                    None
                }
                Err(e) => return Err(e),
            }
        };
        let b = if a.method == Method::Formula {
            None
        } else {
            match with_threads(a.search.threads, || rainbow_number_brute(&eq, &cfg))? {
                Ok(r) => Some(r.value),
                Err(Error::CapExceeded { .. }) => {
                    status.push("cap-exceeded");
                    if code == EXIT_OK {
                        code = EXIT_CAP;
                    }
                    None
                }
                Err(e) => return Err(e),
            }
        };
        let fv = f.as_ref().map(|r| r.value);
        let v = verdict(fv, b);
        if v == Verdict::Mismatch {
            status.push("MISMATCH");
            code = EXIT_MISMATCH;
        }
        let row = ScanRow {
            n,
            a1: eq.coeffs()[0],
            a2: eq.coeffs()[1],
            a3: eq.coeffs()[2],
            b: eq.rhs(),
            rb_formula: fv,
            rb_brute: b,
            provenance: f.map(|r| r.provenance.to_string()),
            matched: (v != Verdict::Incomplete).then_some(v == Verdict::Match),
            elapsed_ms: elapsed_ms(start),
            status: if status.is_empty() { "ok".into() } else { status.join(";") },
        };
        w.serialize(&row).map_err(io_err)?;
        w.flush().map_err(io_err)?;
        writeln!(out, "n={n} formula={} brute={} {}", cell(fv), cell(b), row.status).map_err(io_err)?;
    }
    Ok(code)
}

fn cell(v: Option<u64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}
