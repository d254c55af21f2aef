//! Command-line front end: configuration loading, expression parsing,
//! subcommands and verification suites.
//!
//! Exit status: 0 success, 1 parse error, 2 validation error, 3 suite
//! failure.

pub mod config;
pub mod parse;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::basis::{dim_component, enumerate_basis, eta};
use crate::fock::FockSpace;
use crate::freeva::{fmt_element, fmt_word, product_free, FreeElement};
use crate::rewrite::reduce;
use crate::signature::{fixtures, fmt_scalar, Signature};
use config::{load_config, Config, ConfigError};
use parse::parse_element;
use report::SuiteReport;
use suites::SuiteError;

pub use parse::{parse_expr, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Parse(_) => CliError::Parse(e.to_string()),
            ConfigError::Invalid(_) => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SuiteError> for CliError {
    fn from(e: SuiteError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "vacalc", version, about = "Exact computations in free and lattice vertex algebras")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal form of an expression in the free algebra.
    NormalForm { config: String, expr: String },
    /// Basic words of a homogeneous component with their partitions.
    Basis {
        config: String,
        weight: String,
        #[arg(allow_hyphen_values = true)]
        deg2: i64,
    },
    /// Dimensions of the components of one weight over a range of doubled degrees.
    Dim {
        config: String,
        weight: String,
        #[arg(allow_hyphen_values = true)]
        range: String,
    },
    /// Normal form of `u [n] v`.
    Product {
        config: String,
        left: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        right: String,
    },
    /// Image in the lattice vertex algebra.
    Embed { config: String, expr: String },
    /// Locality of `c` with `b [n] a` against the closed form.
    Dong {
        config: String,
        #[arg(default_value_t = 4)]
        k_max: i64,
    },
    /// Maximal mode sum of nonzero conformal monomials of length `l`.
    Locfun { config: String, l: usize },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
enum Suite {
    /// Basis size, naive count, independence of images and normal forms.
    Basis {
        /// Signature file; defaults to the three built-in signatures.
        #[arg(long)]
        config: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_weight: i64,
        #[arg(long, default_value_t = 12)]
        span: i64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Locality of products of generators against the closed form.
    Dong {
        /// Signature file; defaults to all two-generator signatures with
        /// entries in -2..=3.
        #[arg(long)]
        config: Option<String>,
        #[arg(long, default_value_t = 4)]
        k_max: i64,
    },
    /// Locality function of the conformal subalgebra.
    Locfun {
        /// Signature file; defaults to N = 2 and N = 1 on two generators.
        #[arg(long)]
        config: Option<String>,
        /// Monomial lengths; defaults to 2, 3 and 4.
        #[arg(long, num_args = 1..)]
        l: Vec<usize>,
    },
    /// Pair fields of the one-fermion lattice algebra.
    Bozfer {
        #[arg(long, default_value_t = 4)]
        k_max: i64,
        #[arg(long, default_value_t = 6)]
        d_max: i64,
    },
    /// Presentation of a lattice vertex algebra by generators and relations.
    Presentation {
        /// Lattice or signature file; defaults to Z and the rank-2 lattice
        /// with Gram [[2,-1],[-1,2]].
        #[arg(long)]
        config: Option<String>,
    },
}

fn read_config(path: &str) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {path}: {e}")))?;
    Ok(load_config(&text)?)
}

fn read_signature(path: &str) -> Result<Signature, CliError> {
    Ok(read_config(path)?.signature()?)
}

fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Parse(format!("malformed range `{text}`, expected `lo..hi`"));
    let int = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    match text.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            Ok((int(lo)?, int(hi)?))
        }
        None => {
            let v = int(text)?;
            Ok((v, v))
        }
    }
}

fn element_output(sig: &Signature, x: &FreeElement, format: Format) -> String {
    match format {
        Format::Text => fmt_element(sig, x),
        Format::Machine => {
            let terms: Vec<_> = x
                .canonical_terms(sig)
                .into_iter()
                .map(|(w, c)| json!({"coeff": fmt_scalar(c), "word": fmt_word(sig, w)}))
                .collect();
            json!({"result": fmt_element(sig, x), "terms": terms}).to_string()
        }
    }
}

enum Output {
    Text(String),
    Suite(SuiteReport),
}

fn execute(cli: Cli) -> Result<Output, CliError> {
    let format = cli.format;
    let out = match cli.command {
        Command::NormalForm { config, expr } => {
            let sig = read_signature(&config)?;
            let x = parse_element(&sig, &expr)?.evaluate(&sig);
            Output::Text(element_output(&sig, &reduce(&sig, &x), format))
        }
        Command::Product { config, left, n, right } => {
            let sig = read_signature(&config)?;
            let u = parse_element(&sig, &left)?.evaluate(&sig);
            let v = parse_element(&sig, &right)?.evaluate(&sig);
            Output::Text(element_output(&sig, &reduce(&sig, &product_free(&sig, &u, n, &v)), format))
        }
        Command::Embed { config, expr } => {
            let sig = read_signature(&config)?;
            let x = parse_element(&sig, &expr)?.evaluate(&sig);
            let img = FockSpace::new(&sig).phi(&x);
            let text = img.display(&sig).to_string();
            Output::Text(match format {
                Format::Text => text,
                Format::Machine => json!({"result": text}).to_string(),
            })
        }
        Command::Basis { config, weight, deg2 } => {
            let sig = read_signature(&config)?;
            let lam = sig.parse_weight(&weight).map_err(|e| CliError::Parse(e.to_string()))?;
            if !lam.is_nonnegative() {
                return Err(CliError::Validation(format!("weight `{weight}` has a negative entry")));
            }
            let mut lines = Vec::new();
            for w in enumerate_basis(&sig, &lam, deg2) {
                let word = fmt_word(&sig, &w);
                let part = eta(&sig, &w).expect("enumerated words are basic").display(&sig).to_string();
                lines.push(match format {
                    Format::Text => format!("{word}  {part}"),
                    Format::Machine => json!({"word": word, "partition": part}).to_string(),
                });
            }
            Output::Text(lines.join("\n"))
        }
        Command::Dim { config, weight, range } => {
            let sig = read_signature(&config)?;
            let lam = sig.parse_weight(&weight).map_err(|e| CliError::Parse(e.to_string()))?;
            if !lam.is_nonnegative() {
                return Err(CliError::Validation(format!("weight `{weight}` has a negative entry")));
            }
            let (lo, hi) = parse_range(&range)?;
            if lo > hi {
                return Err(CliError::Validation(format!("empty range `{range}`")));
            }
            let lines: Vec<String> = (lo..=hi)
                .map(|d| {
                    let n = dim_component(&sig, &lam, d);
                    match format {
                        Format::Text => format!("{d} {n}"),
                        Format::Machine => {
                            json!({"weight": sig.fmt_weight(&lam), "deg2": d, "dim": n}).to_string()
                        }
                    }
                })
                .collect();
            Output::Text(lines.join("\n"))
        }
        Command::Dong { config, k_max } => {
            let sig = read_signature(&config)?;
            if k_max < 0 {
                return Err(CliError::Validation("k_max must be nonnegative".into()));
            }
            Output::Suite(suites::verify_dong(&sig, k_max))
        }
        Command::Locfun { config, l } => {
            let sig = read_signature(&config)?;
            Output::Suite(suites::verify_locfun(&sig, l)?)
        }
        Command::Verify { suite } => Output::Suite(run_suite(suite)?),
    };
    Ok(out)
}

fn run_suite(suite: Suite) -> Result<SuiteReport, CliError> {
    match suite {
        Suite::Basis { config, max_weight, span, samples, seed } => {
            let sigs = match config {
                Some(path) => vec![read_signature(&path)?],
                None => vec![fixtures::ferm(), fixtures::free2(), fixtures::neg()],
            };
            let mut rep = SuiteReport::new("basis");
            for s in &sigs {
                rep.extend(suites::verify_basis(s, max_weight, span, samples, seed));
            }
            Ok(rep)
        }
        Suite::Dong { config, k_max } => {
            if k_max < 0 {
                return Err(CliError::Validation("k_max must be nonnegative".into()));
            }
            let sigs = match config {
                Some(path) => vec![read_signature(&path)?],
                None => suites::two_generator_signatures(-2, 3),
            };
            Ok(suites::verify_dong_family(&sigs, k_max))
        }
        Suite::Locfun { config, l } => {
            let sigs = match config {
                Some(path) => vec![read_signature(&path)?],
                None => vec![fixtures::free2(), fixtures::ones2()],
            };
            let lengths = if l.is_empty() { vec![2, 3, 4] } else { l };
            let mut rep = SuiteReport::new("locfun");
            for s in &sigs {
                for &len in &lengths {
                    rep.extend(suites::verify_locfun(s, len)?);
                }
            }
            Ok(rep)
        }
        Suite::Bozfer { k_max, d_max } => Ok(suites::verify_bozfer(k_max, d_max)),
        Suite::Presentation { config } => {
            let lats = match config {
                Some(path) => vec![read_config(&path)?.lattice()],
                None => suites::default_lattices(),
            };
            let mut rep = SuiteReport::new("presentation");
            for l in &lats {
                rep.extend(suites::verify_presentation(l)?);
            }
            Ok(rep)
        }
    }
}

/// Parse the command line, execute it and write the result to `out` and
/// diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let format = cli.format;
    match execute(cli) {
        Ok(Output::Text(text)) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Ok(Output::Suite(rep)) => {
            let _ = match format {
                Format::Text => write!(out, "{}", rep.render_text()),
                Format::Machine => write!(out, "{}", rep.render_machine()),
            };
            if rep.passed() {
                0
            } else {
                3
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
