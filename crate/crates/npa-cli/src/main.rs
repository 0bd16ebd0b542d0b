//! `npa` — evaluate, compare and generate nondeterministic probabilistic
//! automata with exact rational arithmetic.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation error, 3 enumeration
//! cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use npa_core::constructions::{dualize, example_npa, threshold_reduction};
use npa_core::format::{parse_automaton, Automaton};
use npa_core::lrs::{lrs_eval, wfa_to_lrs, zero_set_prefix, Lrs};
use npa_core::metric::{difference_report, word_horizon, MetricQuery, NpaLanguage};
use npa_core::semantics::{
    evaluate, evaluate_wfa, oracle_check, parse_word, Algebra, EvalError, DEFAULT_ORACLE_CAP,
};
use npa_core::{Npa, Rat, SymbolId};

#[derive(Parser)]
#[command(
    name = "npa",
    version,
    about = "Exact min/max language semantics for nondeterministic probabilistic automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the weight of a word in an automaton file
    Eval {
        file: PathBuf,
        /// Space-separated symbol tokens, quoted as one argument
        word: String,
        /// Use the min algebra
        #[arg(long, conflicts_with = "max")]
        min: bool,
        /// Use the max algebra (the default)
        #[arg(long)]
        max: bool,
        /// Also print a decimal rendering with this many digits
        #[arg(long, value_name = "DIGITS")]
        decimal: Option<usize>,
    },
    /// Approximate the discounted distance between two automata languages
    Metric {
        file1: PathBuf,
        file2: PathBuf,
        /// Discount factor in [0,1), as an exact rational
        #[arg(long)]
        c: String,
        /// Precision kappa > 0, as an exact rational
        #[arg(long)]
        kappa: String,
        /// Use the min algebra for both automata
        #[arg(long, conflicts_with = "max")]
        min: bool,
        /// Use the max algebra for both automata (the default)
        #[arg(long)]
        max: bool,
        /// How many difference lines to print
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Also print a decimal rendering of x with this many digits
        #[arg(long, value_name = "DIGITS")]
        decimal: Option<usize>,
    },
    /// Emit a built-in construction in the automaton file format
    Generate {
        #[command(subcommand)]
        which: Generate,
    },
    /// Compare the evaluator against the exhaustive enumeration oracle
    OracleCheck {
        file: PathBuf,
        /// Longest word length to check
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Enumeration cap for the oracle
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: usize,
    },
    /// Linear recurrence sequences
    Lrs {
        #[command(subcommand)]
        which: LrsCommand,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// The four-state automaton whose min language tracks the longest a-run
    Example,
    /// The output-complemented dual of an NPA file
    Dual { file: PathBuf },
    /// The threshold-encoding automaton Y built around a DPA file
    ThresholdY {
        file: PathBuf,
        #[arg(long)]
        kappa: String,
    },
    /// The constant-kappa automaton Z over the DPA file's alphabet
    ThresholdZ {
        file: PathBuf,
        #[arg(long)]
        kappa: String,
    },
}

#[derive(Subcommand)]
enum LrsCommand {
    /// Evaluate a sequence term: npa lrs eval "lrs k=2 init=0,1 coeffs=1,1" 10
    Eval { lrs: String, n: usize },
    /// Convert a unary WFA file to its recurrence
    FromWfa { file: PathBuf },
    /// List the zero indices up to a bound
    Zeros { lrs: String, bound: usize },
}

enum CliError {
    Usage(String),
    Validation(String),
    Cap(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::UnknownSymbol(_) => CliError::Usage(e.to_string()),
            EvalError::CapExceeded { .. } => CliError::Cap(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems exit 1 regardless of clap's default
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn load(path: &Path) -> Result<Automaton, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    parse_automaton(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// NPAs pass through, DPAs embed; WFAs are refused where `[0,1]`-bounded
/// weights are required.
fn as_npa(auto: &Automaton, path: &Path) -> Result<Npa, CliError> {
    match auto {
        Automaton::Npa(a) => Ok(a.clone()),
        Automaton::Dpa(d) => Ok(d.to_npa()),
        Automaton::Wfa(_) => Err(CliError::Validation(format!(
            "{}: expected an npa or dpa file",
            path.display()
        ))),
    }
}

fn algebra(min: bool) -> Algebra {
    if min {
        Algebra::Min
    } else {
        Algebra::Max
    }
}

fn parse_rat(text: &str, what: &str) -> Result<Rat, CliError> {
    text.parse()
        .map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn render_word(alphabet: &[String], word: &[SymbolId]) -> String {
    let tokens: Vec<&str> = word.iter().map(|&s| alphabet[s].as_str()).collect();
    format!("\"{}\"", tokens.join(" "))
}

fn generate_threshold(file: &Path, kappa: &str) -> Result<(Npa, Npa), CliError> {
    let kappa = parse_rat(kappa, "--kappa")?;
    let dpa = match load(file)? {
        Automaton::Dpa(d) => d,
        _ => {
            return Err(CliError::Validation(format!(
                "{}: expected a dpa file",
                file.display()
            )))
        }
    };
    threshold_reduction(&dpa, &kappa).map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval {
            file,
            word,
            min,
            max: _,
            decimal,
        } => {
            let auto = load(&file)?;
            let symbols = parse_word(auto.alphabet(), &word)?;
            let value = match &auto {
                Automaton::Wfa(w) => evaluate_wfa(w, &symbols)?,
                _ => evaluate(&as_npa(&auto, &file)?, &symbols, algebra(min))?,
            };
            println!("{value}");
            if let Some(digits) = decimal {
                println!("{}", value.to_decimal(digits));
            }
            Ok(())
        }
        Command::Metric {
            file1,
            file2,
            c,
            kappa,
            min,
            max: _,
            top,
            decimal,
        } => {
            let c = parse_rat(&c, "--c")?;
            let kappa = parse_rat(&kappa, "--kappa")?;
            let query = MetricQuery::new(c, kappa).map_err(|e| CliError::Usage(e.to_string()))?;
            let a1 = as_npa(&load(&file1)?, &file1)?;
            let a2 = as_npa(&load(&file2)?, &file2)?;
            let alg = algebra(min);
            let l1 = NpaLanguage::new(&a1, alg);
            let l2 = NpaLanguage::new(&a2, alg);
            let rows = difference_report(&l1, &l2, &query)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let x: Rat = rows.iter().map(|r| r.contribution.clone()).sum();
            let horizon = word_horizon(&query);
            let tail = if query.c.is_zero() {
                Rat::zero()
            } else {
                query.c.pow(horizon as u32) / (Rat::one() - &query.c)
            };
            println!("horizon: {horizon}");
            println!("tail-bound: {tail}");
            println!("x: {x}");
            if let Some(digits) = decimal {
                println!("x-decimal: {}", x.to_decimal(digits));
            }
            println!("top differences:");
            for row in rows.iter().take(top) {
                let diff = (&row.value1 - &row.value2).abs();
                println!(
                    "{} {} {} {} {}",
                    render_word(&a1.alphabet, &row.word),
                    row.value1,
                    row.value2,
                    diff,
                    row.contribution
                );
            }
            Ok(())
        }
        Command::Generate { which } => {
            let text = match which {
                Generate::Example => example_npa().to_string(),
                Generate::Dual { file } => {
                    let a = as_npa(&load(&file)?, &file)?;
                    dualize(&a).to_string()
                }
                Generate::ThresholdY { file, kappa } => {
                    let (y, _) = generate_threshold(&file, &kappa)?;
                    y.to_string()
                }
                Generate::ThresholdZ { file, kappa } => {
                    let (_, z) = generate_threshold(&file, &kappa)?;
                    z.to_string()
                }
            };
            print!("{text}");
            Ok(())
        }
        Command::OracleCheck { file, max_len, cap } => {
            let a = as_npa(&load(&file)?, &file)?;
            match oracle_check(&a, max_len, cap)? {
                None => println!("OK"),
                Some(m) => {
                    let alg = match m.algebra {
                        Algebra::Min => "min",
                        Algebra::Max => "max",
                    };
                    println!(
                        "mismatch at {} ({alg}): evaluate={} oracle={}",
                        render_word(&a.alphabet, &m.word),
                        m.left,
                        m.right
                    );
                }
            }
            Ok(())
        }
        Command::Lrs { which } => {
            match which {
                LrsCommand::Eval { lrs, n } => {
                    let l: Lrs = lrs.parse().map_err(|e: npa_core::lrs::LrsError| {
                        CliError::Usage(e.to_string())
                    })?;
                    println!("{}", lrs_eval(&l, n));
                }
                LrsCommand::FromWfa { file } => {
                    let w = match load(&file)? {
                        Automaton::Wfa(w) => w,
                        _ => {
                            return Err(CliError::Validation(format!(
                                "{}: expected a wfa file",
                                file.display()
                            )))
                        }
                    };
                    let l = wfa_to_lrs(&w).map_err(|e| CliError::Validation(e.to_string()))?;
                    println!("{l}");
                }
                LrsCommand::Zeros { lrs, bound } => {
                    let l: Lrs = lrs.parse().map_err(|e: npa_core::lrs::LrsError| {
                        CliError::Usage(e.to_string())
                    })?;
                    let zeros = zero_set_prefix(&l, bound);
                    let rendered: Vec<String> = zeros.iter().map(usize::to_string).collect();
                    println!("{}", rendered.join(" "));
                }
            }
            Ok(())
        }
    }
}
