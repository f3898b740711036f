//! Command-line surface: pricing, table rendering, entropy reports, the
//! oracle-vs-fast verification harness, and series/fit exports.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::auction::{auction_price, buyers_and_benefit, price_2};
use crate::conjecture::{generate_series, polyfit_least_squares, published_leading, CountSeries};
use crate::error::Error;
use crate::leakage::{Engine, LeakageReport};
use crate::oracle::Enumerator;
use crate::three_party;
use crate::two_party;

pub const BUDGET_ENV: &str = "AUCTION_LEAKAGE_BUDGET";

const EXIT_USAGE: i32 = 1;
const EXIT_DOMAIN: i32 = 2;
const EXIT_RESOURCE: i32 = 3;
const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "auction-leakage",
    version,
    about = "Min-entropy leakage of bids in digital goods auctions"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for enumeration and the three-party sum.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Tuple-evaluation budget for the enumeration oracle
    /// (default from AUCTION_LEAKAGE_BUDGET, else 2e9).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Auto,
    Oracle,
    Closed2,
    Fast3,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the sales price for a list of bids.
    Price {
        /// Comma-separated bids, e.g. 1,1,4,1.
        #[arg(long, value_delimiter = ',', required = true)]
        bids: Vec<u64>,
    },
    /// Render the two-party output grid for domain bound m.
    Table {
        #[arg(long)]
        m: u64,
    },
    /// Vulnerability and min-entropy report for an (n, m) instance.
    Entropy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
        engine: EngineChoice,
    },
    /// Differential check of the closed-form engines against the oracle.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_m: u64,
    },
    /// Emit the c_n series as CSV, optionally followed by a fit.
    Series {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_m: u64,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Emit the c_n series and its least-squares polynomial fit.
    Fit {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_m: u64,
        /// Defaults to n.
        #[arg(long)]
        degree: Option<usize>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_RESOURCE,
            _ => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let budget = cli
        .budget
        .or_else(|| std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(crate::oracle::DEFAULT_BUDGET);
    let enumerator = Enumerator::with_budget(budget);

    let body = match cli.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Failure {
                    code: EXIT_USAGE,
                    message: format!("cannot build thread pool: {e}"),
                })?;
            pool.install(|| dispatch(&cli.command, cli.format, &enumerator))?
        }
        None => dispatch(&cli.command, cli.format, &enumerator)?,
    };

    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("cannot write output: {e}"),
        })?,
        None => print!("{body}"),
    }
    Ok(())
}

fn dispatch(cmd: &Command, format: Format, enumerator: &Enumerator) -> Result<String, Failure> {
    match cmd {
        Command::Price { bids } => cmd_price(bids),
        Command::Table { m } => cmd_table(*m, format),
        Command::Entropy { n, m, engine } => cmd_entropy(*n, *m, *engine, format, enumerator),
        Command::Verify { n, max_m } => cmd_verify(*n, *max_m, enumerator),
        Command::Series { n, max_m, degree } => cmd_series_and_fit(*n, *max_m, *degree, enumerator),
        Command::Fit { n, max_m, degree } => {
            cmd_series_and_fit(*n, *max_m, Some(degree.unwrap_or(*n as usize)), enumerator)
        }
    }
}

fn cmd_price(bids: &[u64]) -> Result<String, Failure> {
    let price = auction_price(bids)?;
    let (buyers, benefit) = buyers_and_benefit(bids, price);
    let buyer_list = buyers
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",");
    Ok(format!(
        "price {price}\nbuyers {buyer_list}\nbenefit {benefit}\n"
    ))
}

fn cmd_table(m: u64, format: Format) -> Result<String, Failure> {
    if m < 1 {
        return Err(Error::domain("domain bound m", m).into());
    }
    if format == Format::Human && m > 200 {
        return Err(Error::domain("table size (use --format csv above m = 200)", m).into());
    }
    let mut out = String::new();
    match format {
        Format::Csv | Format::Json => {
            for x in 1..=m {
                let row = (1..=m)
                    .map(|y| price_2(x, y).to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&row);
                out.push('\n');
            }
        }
        Format::Human => {
            let width = m.to_string().len() + 1;
            let _ = write!(out, "{:>width$} |", "x\\y");
            for y in 1..=m {
                let _ = write!(out, "{y:>width$}");
            }
            out.push('\n');
            for x in 1..=m {
                let _ = write!(out, "{x:>width$} |");
                for y in 1..=m {
                    let _ = write!(out, "{:>width$}", price_2(x, y));
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct VulnerabilityJson {
    pub num: String,
    pub den: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct EntropyJson {
    pub n: u32,
    pub m: u64,
    pub engine: String,
    pub vulnerability: VulnerabilityJson,
    pub entropy_bits: f64,
    pub prior_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_to_limit: Option<f64>,
}

pub fn entropy_json(report: &LeakageReport) -> EntropyJson {
    let limit_bits = match report.n {
        2 => Some(two_party::two_party_limit()),
        3 => Some(three_party::three_party_limit()),
        _ => None,
    };
    // the closed two-party form carries a higher-precision gap
    let gap_to_limit = match (report.n, report.engine) {
        (2, Engine::Closed2) => two_party::h2_closed_form(report.m)
            .ok()
            .map(|r| r.gap_to_limit),
        _ => limit_bits.map(|l| l - report.entropy_bits),
    };
    EntropyJson {
        n: report.n,
        m: report.m,
        engine: report.engine.as_str().to_string(),
        vulnerability: VulnerabilityJson {
            num: report.vulnerability.numer().to_string(),
            den: report.vulnerability.denom().to_string(),
        },
        entropy_bits: report.entropy_bits,
        prior_bits: report.prior_bits,
        limit_bits,
        gap_to_limit,
    }
}

/// Produce the leakage report for the requested or auto-selected engine.
pub fn entropy_report(
    n: u32,
    m: u64,
    engine: EngineChoiceLike,
    enumerator: &Enumerator,
) -> Result<LeakageReport, Error> {
    let choice = match engine {
        EngineChoiceLike::Auto => match n {
            2 => EngineChoiceLike::Closed2,
            3 => EngineChoiceLike::Fast3,
            _ => EngineChoiceLike::Oracle,
        },
        other => other,
    };
    match choice {
        EngineChoiceLike::Closed2 => {
            if n != 2 {
                return Err(Error::domain("engine closed2 requires n = 2, got n", n));
            }
            Ok(two_party::h2_closed_form(m)?.report())
        }
        EngineChoiceLike::Fast3 => {
            if n != 3 {
                return Err(Error::domain("engine fast3 requires n = 3, got n", n));
            }
            Ok(three_party::h3_fast(m)?.report())
        }
        _ => enumerator.min_entropy_report(n, m),
    }
}

/// Engine selector usable from both the CLI and library callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoiceLike {
    Auto,
    Oracle,
    Closed2,
    Fast3,
}

impl From<EngineChoice> for EngineChoiceLike {
    fn from(c: EngineChoice) -> Self {
        match c {
            EngineChoice::Auto => EngineChoiceLike::Auto,
            EngineChoice::Oracle => EngineChoiceLike::Oracle,
            EngineChoice::Closed2 => EngineChoiceLike::Closed2,
            EngineChoice::Fast3 => EngineChoiceLike::Fast3,
        }
    }
}

fn cmd_entropy(
    n: u32,
    m: u64,
    engine: EngineChoice,
    format: Format,
    enumerator: &Enumerator,
) -> Result<String, Failure> {
    let report = entropy_report(n, m, engine.into(), enumerator)?;
    let json = entropy_json(&report);
    match format {
        Format::Json | Format::Csv => Ok(format!("{}\n", serde_json::to_string(&json).unwrap())),
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "n {} m {} engine {}", json.n, json.m, json.engine);
            let _ = writeln!(
                out,
                "vulnerability {}/{}",
                json.vulnerability.num, json.vulnerability.den
            );
            let _ = writeln!(out, "entropy_bits {}", sig6(json.entropy_bits));
            let _ = writeln!(out, "prior_bits {}", sig6(json.prior_bits));
            if let Some(l) = json.limit_bits {
                let _ = writeln!(out, "limit_bits {}", sig6(l));
            }
            if let Some(g) = json.gap_to_limit {
                let _ = writeln!(out, "gap_to_limit {}", sig6(g));
            }
            Ok(out)
        }
    }
}

/// Format with 6 significant digits.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn cmd_verify(n: u32, max_m: u64, enumerator: &Enumerator) -> Result<String, Failure> {
    if n != 2 && n != 3 {
        return Err(Error::domain("verify party count n (must be 2 or 3)", n).into());
    }
    let mut out = String::new();
    let mut matches = 0u64;
    let mut mismatches = 0u64;
    for m in 1..=max_m {
        let oracle = enumerator.count_fixpoint_tuples(n, m)?;
        let fast = match n {
            2 => two_party::h2_closed_form(m)?.c2,
            _ => num_bigint::BigUint::from(three_party::c3_fast(m)?),
        };
        if fast == oracle {
            matches += 1;
        } else {
            mismatches += 1;
            let _ = writeln!(out, "MISMATCH m={m}: fast {fast} oracle {oracle}");
            if n == 3 {
                for x in 1..=m {
                    let derived = three_party::case_breakdown(x, m)?;
                    let brute = three_party::case_breakdown_brute(x, m)?;
                    if derived != brute {
                        let _ = writeln!(
                            out,
                            "  x={x}: derived S1={} S2={} S3={} S4={} vs brute S1={} S2={} S3={} S4={}",
                            derived.s1, derived.s2, derived.s3, derived.s4,
                            brute.s1, brute.s2, brute.s3, brute.s4
                        );
                    }
                }
            }
        }
    }
    let _ = writeln!(out, "{matches}/{max_m} exact matches");
    if mismatches > 0 {
        return Err(Failure {
            code: EXIT_MISMATCH,
            message: format!("{mismatches} mismatches\n{out}"),
        });
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct FitJson {
    degree: usize,
    coefficients: Vec<f64>,
    leading: f64,
    residual: f64,
    condition: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    paper_leading: Option<f64>,
}

fn series_csv(series: &CountSeries) -> String {
    let mut out = String::from("m,c_n\n");
    for p in &series.points {
        let _ = writeln!(out, "{},{}", p.m, p.count);
    }
    out
}

fn cmd_series_and_fit(
    n: u32,
    max_m: u64,
    degree: Option<usize>,
    enumerator: &Enumerator,
) -> Result<String, Failure> {
    let series = generate_series(n, max_m, enumerator)?;
    let mut out = series_csv(&series);
    if let Some(degree) = degree {
        let fit = polyfit_least_squares(&series, degree)?;
        let json = FitJson {
            degree: fit.degree,
            leading: fit.leading_coefficient,
            coefficients: fit.coefficients,
            residual: fit.residual_norm,
            condition: fit.condition_diagnostic,
            paper_leading: if degree == n as usize {
                published_leading(n)
            } else {
                None
            },
        };
        let _ = writeln!(out, "{}", serde_json::to_string(&json).unwrap());
    }
    Ok(out)
}
