//! Command line front end: parse matrices, dispatch decompositions and
//! verifications, emit JSON or CSV.
//!
//! Exit codes: 0 on success, 1 on domain errors (singular input, failed
//! verification, ...), 2 on usage errors (bad flags, malformed input,
//! oversized matrices).

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::process::ExitCode;

use iwasawa_core::identities::run_identity_suite;
use iwasawa_core::io::{matrix_from_value, padic_from_value, padic_to_value, real_to_value};
use iwasawa_core::padic::{apply_family, decompose_padic, verify_membership, FamilyParams};
use iwasawa_core::pluecker::{dilaton_norm_unified, pluecker, DilatonNorm};
use iwasawa_core::real::real_decompose;
use iwasawa_core::scalar::{rational_to_string, Place};
use iwasawa_core::{Error, RatMatrix};

const MAX_N_ENV: &str = "IWASAWA_MAX_N";
const MAX_N_DEFAULT: usize = 12;

#[derive(Parser)]
#[command(
    name = "iwasawa",
    version,
    about = "Exact Iwasawa decomposition of special linear matrices over Q_p and R"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose M = N A K at a finite prime or over the reals.
    Decompose {
        /// Finite place: a verified prime.
        #[arg(long, conflicts_with = "real")]
        prime: Option<u64>,
        /// Decompose over the reals instead.
        #[arg(long)]
        real: bool,
        #[arg(long)]
        pretty: bool,
        /// Matrix: inline JSON, a file path, or - for stdin. A JSON array
        /// of matrices is processed as a batch.
        input: Option<String>,
    },
    /// Per-place dilaton norm table of a determinant-one matrix.
    DilatonNorms {
        /// Comma-separated places, e.g. 2,3,inf.
        #[arg(long, value_delimiter = ',', required = true)]
        places: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        pretty: bool,
        input: Option<String>,
    },
    /// Move a decomposition along the non-uniqueness family (X, Y).
    Family {
        /// Unit upper triangular X with p-adic integer entries.
        #[arg(long)]
        x: String,
        /// Diagonal Y with p-adic unit entries and determinant one.
        #[arg(long)]
        y: String,
        #[arg(long)]
        pretty: bool,
        /// Decomposition JSON (as produced by decompose --prime).
        input: Option<String>,
    },
    /// Membership report for a decomposition JSON.
    Verify {
        /// Check reconstruction against this matrix instead of N*A*K.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        pretty: bool,
        input: Option<String>,
    },
    /// Run the minor-identity suite on random matrices.
    VerifyIdentities {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3, 4, 5, 6])]
        sizes: Vec<usize>,
        /// Random matrices per size.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Random index tuples per matrix for sizes above 4.
        #[arg(long, default_value_t = 200)]
        tuple_cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
    /// Generalized Pluecker coordinate vectors.
    Pluecker {
        /// Coordinate order; all of 1..n-1 when omitted.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        pretty: bool,
        input: Option<String>,
    },
}

enum CliError {
    Usage(String),
    Domain(Error),
    /// Successful run whose verification verdict is negative.
    Failed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => CliError::Usage(msg),
            other => CliError::Domain(other),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn max_n() -> CliResult<usize> {
    match std::env::var(MAX_N_ENV) {
        Ok(s) => s
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_N_ENV} must be an integer, got {s:?}"))),
        Err(_) => Ok(MAX_N_DEFAULT),
    }
}

fn read_input(arg: Option<&str>) -> CliResult<String> {
    match arg {
        None | Some("-") => std::io::read_to_string(std::io::stdin())
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}"))),
        Some(s) if s.trim_start().starts_with(['{', '[']) => Ok(s.to_string()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}"))),
    }
}

fn parse_json(text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))
}

fn is_scalar(v: &Value) -> bool {
    matches!(v, Value::String(_) | Value::Number(_))
}

/// A top-level array is a single matrix when its elements are rows of
/// scalars; otherwise it is a batch of matrices.
fn split_batch(v: Value) -> (Vec<Value>, bool) {
    match &v {
        Value::Array(items)
            if !items.is_empty()
                && items.iter().all(|row| {
                    matches!(row, Value::Array(cells)
                        if !cells.is_empty() && cells.iter().all(is_scalar))
                }) =>
        {
            (vec![v], false)
        }
        Value::Array(items) => (items.clone(), true),
        _ => (vec![v], false),
    }
}

fn load_matrix(v: &Value, cap: usize) -> CliResult<RatMatrix> {
    let parsed = matrix_from_value(v)?;
    if parsed.had_decimal {
        eprintln!("warning: decimal entries were converted exactly to rationals");
    }
    if parsed.matrix.rows() > cap || parsed.matrix.cols() > cap {
        return usage(format!(
            "matrix size {}x{} exceeds the limit of {cap} (override with {MAX_N_ENV})",
            parsed.matrix.rows(),
            parsed.matrix.cols()
        ));
    }
    Ok(parsed.matrix)
}

fn emit(value: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    };
    println!("{text}");
}

/// Parses matrix input, runs `op` on each matrix (in parallel for a
/// batch, preserving input order), and emits a single value or an array.
fn run_over_matrices(
    input: Option<&str>,
    pretty: bool,
    op: impl Fn(&RatMatrix) -> Result<Value, Error> + Sync,
) -> CliResult<()> {
    let cap = max_n()?;
    let (items, batch) = split_batch(parse_json(&read_input(input)?)?);
    let matrices: Vec<RatMatrix> = items
        .iter()
        .map(|v| load_matrix(v, cap))
        .collect::<CliResult<_>>()?;
    let outputs: Vec<Result<Value, Error>> = matrices.par_iter().map(&op).collect();
    let mut values = Vec::with_capacity(outputs.len());
    for out in outputs {
        values.push(out?);
    }
    if batch {
        emit(&Value::Array(values), pretty);
    } else {
        emit(&values[0], pretty);
    }
    Ok(())
}

fn parse_places(raw: &[String]) -> CliResult<Vec<Place>> {
    let mut places = Vec::with_capacity(raw.len());
    for s in raw {
        let place = Place::parse(s)
            .map_err(|e| CliError::Usage(format!("--places: {e}")))?;
        places.push(place);
    }
    Ok(places)
}

fn norms_for(m: &RatMatrix, places: &[Place]) -> Result<Vec<Vec<(Place, DilatonNorm)>>, Error> {
    let n = m.rows();
    let mut rows = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let mut row = Vec::with_capacity(places.len());
        for &place in places {
            row.push((place, dilaton_norm_unified(m, k, place)?));
        }
        rows.push(row);
    }
    Ok(rows)
}

fn norm_to_json(place: Place, norm: &DilatonNorm) -> Value {
    match norm {
        DilatonNorm::Finite { valuation } => json!({
            "place": place.to_string(),
            "valuation": serde_json::to_value(valuation).expect("serializable"),
        }),
        DilatonNorm::Infinite { y_squared } => json!({
            "place": place.to_string(),
            "y_squared": rational_to_string(y_squared),
        }),
    }
}

fn norm_to_csv_cell(norm: &DilatonNorm) -> String {
    match norm {
        DilatonNorm::Finite { valuation } => valuation.to_string(),
        DilatonNorm::Infinite { y_squared } => rational_to_string(y_squared),
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Decompose {
            prime,
            real,
            pretty,
            input,
        } => {
            if real {
                run_over_matrices(input.as_deref(), pretty, |m| {
                    Ok(real_to_value(&real_decompose(m)?))
                })
            } else {
                let Some(p) = prime else {
                    return usage("decompose needs --prime <p> or --real");
                };
                Place::finite(p).map_err(|e| CliError::Usage(format!("--prime: {e}")))?;
                run_over_matrices(input.as_deref(), pretty, move |m| {
                    Ok(padic_to_value(&decompose_padic(m, p)?))
                })
            }
        }

        Command::DilatonNorms {
            places,
            format,
            pretty,
            input,
        } => {
            let places = parse_places(&places)?;
            if places.is_empty() {
                return usage("--places needs at least one place");
            }
            match format {
                Format::Json => run_over_matrices(input.as_deref(), pretty, |m| {
                    let rows = norms_for(m, &places)?;
                    let table: Vec<Value> = rows
                        .iter()
                        .enumerate()
                        .map(|(i, row)| {
                            json!({
                                "k": i + 1,
                                "norms": row
                                    .iter()
                                    .map(|(pl, nm)| norm_to_json(*pl, nm))
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    Ok(Value::Array(table))
                }),
                Format::Csv => {
                    let cap = max_n()?;
                    let (items, batch) = split_batch(parse_json(&read_input(input.as_deref())?)?);
                    if batch {
                        return usage("CSV output supports a single matrix, not a batch");
                    }
                    let m = load_matrix(&items[0], cap)?;
                    let rows = norms_for(&m, &places).map_err(CliError::from)?;
                    let header: Vec<String> = std::iter::once("k".to_string())
                        .chain(places.iter().map(|p| p.to_string()))
                        .collect();
                    println!("{}", header.join(","));
                    for (i, row) in rows.iter().enumerate() {
                        let cells: Vec<String> = std::iter::once((i + 1).to_string())
                            .chain(row.iter().map(|(_, nm)| norm_to_csv_cell(nm)))
                            .collect();
                        println!("{}", cells.join(","));
                    }
                    Ok(())
                }
            }
        }

        Command::Family {
            x,
            y,
            pretty,
            input,
        } => {
            let cap = max_n()?;
            let dec = padic_from_value(&parse_json(&read_input(input.as_deref())?)?)?;
            if dec.matrix.rows() > cap {
                return usage(format!("decomposition size exceeds the limit of {cap}"));
            }
            let x = load_matrix(&parse_json(&read_input(Some(&x))?)?, cap)?;
            let y = load_matrix(&parse_json(&read_input(Some(&y))?)?, cap)?;
            let moved = apply_family(&dec, &FamilyParams { x, y })?;
            emit(&padic_to_value(&moved), pretty);
            Ok(())
        }

        Command::Verify {
            matrix,
            pretty,
            input,
        } => {
            let cap = max_n()?;
            let mut dec = padic_from_value(&parse_json(&read_input(input.as_deref())?)?)?;
            if dec.matrix.rows() > cap {
                return usage(format!("decomposition size exceeds the limit of {cap}"));
            }
            if let Some(m) = matrix {
                dec.matrix = load_matrix(&parse_json(&read_input(Some(&m))?)?, cap)?;
            }
            let report = verify_membership(&dec);
            emit(
                &serde_json::to_value(report).expect("serializable"),
                pretty,
            );
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }

        Command::VerifyIdentities {
            sizes,
            trials,
            tuple_cap,
            seed,
            pretty,
        } => {
            let cap = max_n()?;
            if let Some(&n) = sizes.iter().find(|&&n| n < 2 || n > cap) {
                return usage(format!("--sizes entries must lie in 2..={cap}, got {n}"));
            }
            let report = run_identity_suite(&sizes, trials, tuple_cap, seed)?;
            emit(
                &serde_json::to_value(&report).expect("serializable"),
                pretty,
            );
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }

        Command::Pluecker { k, pretty, input } => {
            run_over_matrices(input.as_deref(), pretty, |m| {
                let orders: Vec<usize> = match k {
                    Some(k) => vec![k],
                    None => (1..m.rows()).collect(),
                };
                let mut out = Vec::with_capacity(orders.len());
                for k in orders {
                    let vec = pluecker(m, k)?;
                    let components: Vec<Value> = vec
                        .components
                        .iter()
                        .map(|(subset, value)| {
                            json!({
                                "columns": subset.indices(),
                                "value": rational_to_string(value),
                            })
                        })
                        .collect();
                    out.push(json!({ "k": k, "components": components }));
                }
                Ok(Value::Array(out))
            })
        }
    }
}
