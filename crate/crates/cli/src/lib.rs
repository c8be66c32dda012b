//! Command-line front end: code files in, `key: value` reports out.
//!
//! Exit codes: 0 success, 1 other failure (I/O, a failing example),
//! 2 hypothesis failure, 3 parse error, 4 enumeration budget exceeded.

pub mod format;
pub mod golden;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use hullcode::constructions::{
    construction1_extend, construction1_search, containment_hull_bound, corollary_lcd_to_one, lemma31_rescale,
    lemma3ab_rescale, rs_code, sum_hull_predict, theorem31_construct, theorem42_construct, theorem42_search,
    ConstructionError, ConstructionReport, Frame, DEFAULT_TRIALS,
};
use hullcode::exec::message_count;
use hullcode::{CodeError, Field, LinearCode, DEFAULT_BUDGET};

use crate::format::{parse_code_file, render_code_file, render_field_header, render_matrix, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hullcode", version, about = "Hulls of linear codes and hull-changing constructions")]
pub struct Cli {
    /// Largest q^k for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameters, hull dimension and hull basis of a code.
    Hull { file: PathBuf },
    /// Exact minimum distance (fails when q^k exceeds the budget).
    Distance { file: PathBuf },
    /// Run a construction and print its report.
    Construct {
        #[command(subcommand)]
        kind: Construction,
        /// Write the output code to this file.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Reed-Solomon code over the default GF(q).
    Rs {
        q: u32,
        /// `all` or a quoted list of distinct nonzero elements.
        points: String,
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the bundled worked examples.
    VerifyPaper {
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construction {
    /// LCD code to a one-dimensional hull, scaling the first frame column.
    Thm31 { file: PathBuf },
    /// Rescale the last frame column so that P1P1^T + a^2 != 0.
    Lemma31 { file: PathBuf },
    /// Raise the hull dimension from l to l + 1.
    Thm42 {
        file: PathBuf,
        /// 1-based column that carries alpha.
        #[arg(long, conflicts_with = "search")]
        pivot: Option<usize>,
        /// Try every admissible alpha column.
        #[arg(long)]
        search: bool,
    },
    /// LCD code to a one-dimensional hull via the beta condition.
    Cor {
        file: PathBuf,
        #[arg(long)]
        pivot: Option<usize>,
    },
    /// Extend an LCD code by a row (alpha | P) and certify a hull-1 equivalent.
    Con1 {
        file: PathBuf,
        /// The prepended row `alpha p_1 .. p_n`; searched when omitted.
        #[arg(long)]
        row: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Prepend (1 | d) for a dual word d with <d,d> = 1.
    Extend {
        file: PathBuf,
        #[arg(long)]
        dual_word: String,
    },
    /// Hull of C1 + C2 against the predicted value.
    Sum { first: PathBuf, second: PathBuf },
    /// Lower bound hull(C1 + C2) >= hull(C1) when C2 lies in C1 + C1-dual.
    Containment { first: PathBuf, second: PathBuf },
    /// Scale one coordinate (1-based) by a value outside {0, 1}.
    Lemma3ab {
        file: PathBuf,
        #[arg(long)]
        coord: usize,
        #[arg(long)]
        value: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome { code, stdout: String::new(), stderr }
    }
}

enum Failure {
    Parse(String),
    Hypothesis(String),
    Budget(String),
    Other(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Hypothesis(e.to_string()),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Code(c) => c.into(),
            ConstructionError::Verification(_) | ConstructionError::TrialsExhausted(_) => Failure::Other(e.to_string()),
            _ => Failure::Hypothesis(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

pub fn run(cli: Cli) -> Outcome {
    match dispatch(&cli) {
        Ok(out) => out,
        Err(Failure::Parse(m)) => Outcome::fail(EXIT_PARSE, format!("parse error: {m}\n")),
        Err(Failure::Hypothesis(m)) => Outcome::fail(EXIT_HYPOTHESIS, format!("error: {m}\n")),
        Err(Failure::Budget(m)) => Outcome::fail(EXIT_BUDGET, format!("error: {m}\n")),
        Err(Failure::Other(m)) => Outcome::fail(EXIT_FAILURE, format!("error: {m}\n")),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            }
        }
    }
}

fn read_code(path: &PathBuf) -> Result<LinearCode, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    let cf = parse_code_file(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    Ok(cf.code()?)
}

fn parse_row(field: &Field, text: &str) -> Result<Vec<hullcode::Felt>, Failure> {
    field.parse_row(text).map_err(|e| Failure::Parse(e.to_string()))
}

fn distance_line(c: &LinearCode, budget: u128) -> String {
    match c.minimum_distance(budget) {
        Ok(d) => format!("d: {d}\n"),
        Err(_) => format!("d: skipped (q^k = {} exceeds budget {budget})\n", message_count(c.field().order(), c.k())),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Hull { file } => {
            let c = read_code(file)?;
            Ok(Outcome::ok(render_hull(&c, cli.budget)))
        }
        Command::Distance { file } => {
            let c = read_code(file)?;
            let d = c.minimum_distance(cli.budget)?;
            Ok(Outcome::ok(format!(
                "n: {}\nk: {}\nd: {d}\nmds: {}\n",
                c.n(),
                c.k(),
                d == c.n() - c.k() + 1
            )))
        }
        Command::Rs { q, points, k, output } => {
            let f = Field::default_for(*q).map_err(|e| Failure::Hypothesis(e.to_string()))?;
            let pts = if points.trim() == "all" { f.nonzero_elements() } else { parse_row(&f, points)? };
            let c = rs_code(&f, &pts, *k)?;
            if let Some(path) = output {
                std::fs::write(path, render_code_file(c.generator()))?;
            }
            let mut s = format!("{}\nn: {}\nk: {}\n", render_field_header(&f), c.n(), c.k());
            s.push_str(&distance_line(&c, cli.budget));
            s.push_str(&format!("hull_dim: {}\ngenerator:\n{}", c.hull().dim, render_matrix(c.generator())));
            Ok(Outcome::ok(s))
        }
        Command::VerifyPaper { only } => {
            let results = golden::run(only.as_deref())
                .ok_or_else(|| Failure::Other(format!("unknown example {}", only.as_deref().unwrap_or(""))))?;
            let table = golden::render(&results);
            let code = if results.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_FAILURE };
            Ok(Outcome { code, stdout: table, stderr: String::new() })
        }
        Command::Construct { kind, output } => {
            let report = construct(kind)?;
            if let Some(path) = output {
                std::fs::write(path, render_code_file(report.output.generator()))?;
            }
            Ok(Outcome::ok(render_report(&report, cli.budget)))
        }
    }
}

fn construct(kind: &Construction) -> Result<ConstructionReport, Failure> {
    let frame = |pivot: &Option<usize>| match pivot {
        Some(j) if *j >= 1 => Ok(Frame::Pivot(j - 1)),
        Some(_) => Err(Failure::Hypothesis("--pivot is 1-based".into())),
        None => Ok(Frame::Default),
    };
    Ok(match kind {
        Construction::Thm31 { file } => theorem31_construct(&read_code(file)?)?,
        Construction::Lemma31 { file } => lemma31_rescale(&read_code(file)?)?,
        Construction::Thm42 { file, pivot, search } => {
            let c = read_code(file)?;
            if *search {
                theorem42_search(&c)?
            } else {
                theorem42_construct(&c, frame(pivot)?)?
            }
        }
        Construction::Cor { file, pivot } => corollary_lcd_to_one(&read_code(file)?, frame(pivot)?)?,
        Construction::Con1 { file, row, seed, trials } => {
            let c = read_code(file)?;
            match row {
                Some(text) => {
                    let r = parse_row(c.field(), text)?;
                    if r.len() != c.n() + 1 {
                        return Err(Failure::Parse(format!("--row needs {} entries, got {}", c.n() + 1, r.len())));
                    }
                    construction1_extend(&c, r[0], &r[1..])?
                }
                None => construction1_search(&c, *trials, *seed)?.2,
            }
        }
        Construction::Extend { file, dual_word } => {
            let c = read_code(file)?;
            let d = parse_row(c.field(), dual_word)?;
            let ext = c.extend_with_dual_word(&d)?;
            extension_report(c, ext)
        }
        Construction::Sum { first, second } => sum_hull_predict(&read_code(first)?, &read_code(second)?)?,
        Construction::Containment { first, second } => {
            containment_hull_bound(&read_code(first)?, &read_code(second)?)?
        }
        Construction::Lemma3ab { file, coord, value } => {
            let c = read_code(file)?;
            let v = c.field().parse(value).map_err(|e| Failure::Parse(e.to_string()))?;
            lemma3ab_rescale(&c, *coord, v)?
        }
    })
}

fn extension_report(input: LinearCode, output: LinearCode) -> ConstructionReport {
    let before = input.hull().dim;
    let after = output.hull().dim;
    let oracle = output.hull_oracle(hullcode::constructions::ORACLE_BUDGET).ok();
    ConstructionReport {
        kind: "extend",
        input,
        intermediate: None,
        output,
        hypotheses: Vec::new(),
        checks: Vec::new(),
        scalars: Vec::new(),
        scaling: None,
        frame: None,
        input_hull: before,
        predicted_hull: Some(before + 1),
        verified_hull: after,
        oracle_hull: oracle,
    }
}

pub fn render_hull(c: &LinearCode, budget: u128) -> String {
    let h = c.hull();
    let mut s = format!("{}\nn: {}\nk: {}\n", render_field_header(c.field()), c.n(), c.k());
    s.push_str(&distance_line(c, budget));
    s.push_str(&format!(
        "hull_dim: {}\nlcd: {}\nself_orthogonal: {}\nself_dual: {}\n",
        h.dim,
        h.dim == 0,
        c.is_self_orthogonal(),
        c.is_self_dual()
    ));
    if c.input_rows() != c.k() {
        s.push_str(&format!("dropped_rows: {}\n", c.input_rows() - c.k()));
    }
    s.push_str(&format!("generator:\n{}", render_matrix(c.generator())));
    s.push_str(&format!("hull_basis:\n{}", render_matrix(&h.basis)));
    s
}

pub fn render_report(r: &ConstructionReport, budget: u128) -> String {
    let f = r.input.field();
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
    let mut s = format!("construction: {}\n{}\n", r.kind, render_field_header(f));
    s.push_str(&format!("input: [{},{}] hull {}\n", r.input.n(), r.input.k(), r.input_hull));
    if let Some(m) = &r.intermediate {
        s.push_str(&format!("intermediate: [{},{}] hull {}\n", m.n(), m.k(), m.hull().dim));
    }
    for h in &r.hypotheses {
        s.push_str(&format!("hypothesis[{}]: {} ({})\n", h.name, h.holds, h.witness));
    }
    for (name, x) in &r.scalars {
        s.push_str(&format!("scalar[{name}]: {}\n", f.render(*x)));
    }
    if let Some(a) = &r.scaling {
        s.push_str(&format!("scaling: {}\n", f.render_row(a.entries())));
    }
    if let Some(p) = &r.frame {
        let one_based: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
        s.push_str(&format!("frame: {}\n", one_based.join(" ")));
    }
    for c in &r.checks {
        s.push_str(&format!("check[{}]: {} ({})\n", c.name, c.holds, c.witness));
    }
    s.push_str(&format!(
        "predicted_hull: {}\nverified_hull: {}\noracle_hull: {}\n",
        opt(r.predicted_hull),
        r.verified_hull,
        opt(r.oracle_hull)
    ));
    s.push_str(&format!("output_n: {}\noutput_k: {}\n", r.output.n(), r.output.k()));
    s.push_str(&distance_line(&r.output, budget).replacen("d:", "output_d:", 1));
    s.push_str(&format!("output:\n{}", render_matrix(r.output.generator())));
    s
}
