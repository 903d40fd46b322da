//! `qjoin` command line: decide q for joins of unions of cliques, emit
//! witnesses, realize and verify explicit orthogonal symmetric matrices, run
//! batch decisions, reproduce the worked tables, and cross-check the
//! closed-form decision against brute force.
//!
//! Exit codes are part of the interface: 0 success, 1 verification or
//! cross-check failure, 2 parse/usage errors, 3 "q = 3, no realization
//! exists", 4 retry budget exhausted (inconclusive), 5 batch completed with
//! per-line errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qjoin::realization::{
    assemble_join, default_lambda, verify_square, RealizationConfig, RealizationError,
    SupportPattern, VerificationReport,
};
use qjoin::{decision, oracle, DecisionReport, DenseSymMatrix, EigenvalueList, SizeTuple};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_REALIZABLE: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;
const EXIT_BATCH_PARTIAL: u8 = 5;

/// Environment variable holding the default cross-check cache path.
const CACHE_ENV: &str = "QJOIN_CACHE";

#[derive(Parser)]
#[command(name = "qjoin", version, about = "q = 2 vs q = 3 for joins of unions of complete graphs", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide q for the join of two unions of cliques.
    Decide(DecideArgs),
    /// Build an explicit orthogonal symmetric matrix realizing q = 2.
    Realize(RealizeArgs),
    /// Verify a stored matrix against the expected join pattern.
    Verify(VerifyArgs),
    /// Cross-check the closed-form decision against brute force.
    Crosscheck(CrosscheckArgs),
    /// Decide each {"m": [...], "n": [...]} line of a JSONL file.
    Batch(BatchArgs),
    /// Reproduce the worked example tables, one decision per cell.
    Table(TableArgs),
}

fn parse_tuple(text: &str) -> Result<SizeTuple, String> {
    let entries: Result<Vec<usize>, _> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect();
    SizeTuple::new(entries?).map_err(|e| e.to_string())
}

#[derive(Args)]
struct DecideArgs {
    /// Comma-separated clique orders of the first side, e.g. "2,2".
    #[arg(value_parser = parse_tuple)]
    m: SizeTuple,
    /// Comma-separated clique orders of the second side, e.g. "1,1,1".
    #[arg(value_parser = parse_tuple)]
    n: SizeTuple,
    /// Emit the full decision report as JSON.
    #[arg(long)]
    json: bool,
    /// Print the compatible witness pair (q = 2 only).
    #[arg(long)]
    witness: bool,
    /// Print the minimum middle mass and the achievable +1-multiplicity range.
    #[arg(long)]
    mu: bool,
}

#[derive(Args)]
struct RealizeArgs {
    #[arg(value_parser = parse_tuple)]
    m: SizeTuple,
    #[arg(value_parser = parse_tuple)]
    n: SizeTuple,
    /// Seed for the randomized construction.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the eigenvalue list, e.g. "-1,0,1" (length must match the
    /// witness row count).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Max-norm tolerance for X^2 - I.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the matrix to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Matrix file: JSON {"n": ..., "data": [row-major]}.
    file: PathBuf,
    #[arg(value_parser = parse_tuple)]
    m: SizeTuple,
    #[arg(value_parser = parse_tuple)]
    n: SizeTuple,
    /// Expected component shape of the join pattern.
    #[arg(long, value_enum, default_value_t = Pattern::Cliques)]
    pattern: Pattern,
}

#[derive(Args)]
struct CrosscheckArgs {
    /// Check all canonical tuple pairs with totals up to this bound.
    #[arg(long, default_value_t = 6)]
    limit: usize,
    /// Row bound of the brute-force search (4 is complete for cliques).
    #[arg(long, default_value_t = 4)]
    rmax: usize,
    /// Append-only result cache (default taken from QJOIN_CACHE).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Also write the per-pair table to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    /// Input JSONL, one {"m": [...], "n": [...]} object per line.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output JSONL, one decision report (or error object) per line.
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    example: Example,
    /// Ranges like "s=2,a=1..4,b=1..8" (discrete) or "m=4,l=1..6"
    /// (km-connected).
    #[arg(long)]
    params: String,
    /// Entry pattern cycled to build the second side for km-connected.
    #[arg(long, default_value = "2,1")]
    entries: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pattern {
    Cliques,
    Cycles,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    /// One clique joined with any union of cliques: q = 2 iff l <= m.
    KmConnected,
    /// Uniform cliques joined with isolated vertices.
    Discrete,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    data: Vec<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    let code = match cli.command {
        Command::Decide(args) => cmd_decide(&args),
        Command::Realize(args) => cmd_realize(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Crosscheck(args) => cmd_crosscheck(&args),
        Command::Batch(args) => cmd_batch(&args),
        Command::Table(args) => cmd_table(&args),
    };
    ExitCode::from(code)
}

fn print_report_line(report: &DecisionReport, with_mu: bool) {
    let mut line = format!("q={} rule={}", report.q, report.rule);
    if with_mu {
        if let (Some(mu), Some((lo, hi))) = (report.mu, report.iplus_range) {
            line.push_str(&format!(" mu={mu} iplus=[{lo},{hi}]"));
        }
    }
    println!("{line}");
}

fn cmd_decide(args: &DecideArgs) -> u8 {
    let report = decision::decide_q(&args.m, &args.n);
    // self-check: anything printed as a witness must satisfy the predicates
    if let Some(pair) = &report.witness {
        let valid = qjoin::combinatorics::is_multiplicity_matrix_for(&pair.v, &args.m)
            .and_then(|a| {
                Ok(a && qjoin::combinatorics::is_multiplicity_matrix_for(&pair.w, &args.n)?
                    && qjoin::combinatorics::is_compatible(&pair.v, &pair.w)?)
            })
            .unwrap_or(false);
        if !valid {
            eprintln!("internal error: witness failed re-validation");
            return EXIT_FAIL;
        }
    }
    if args.json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
        return EXIT_OK;
    }
    print_report_line(&report, args.mu);
    if args.witness {
        if let Some(pair) = &report.witness {
            println!("V =");
            print!("{}", pair.v);
            println!("W =");
            print!("{}", pair.w);
        } else {
            println!("no witness: q=3");
        }
    }
    EXIT_OK
}

fn matrix_text(x: &DenseSymMatrix) -> String {
    let mut out = String::new();
    for i in 0..x.n() {
        let row: Vec<String> = (0..x.n()).map(|j| format!("{:>12.8}", x.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn report_text(report: &VerificationReport) -> String {
    format!(
        "n={} residual={:.3e} symmetry_defect={:.3e} pattern={} eigen={} i_plus={} i_minus={} pass={}",
        report.n,
        report.residual,
        report.symmetry_defect,
        if report.pattern_ok { "ok" } else { "violated" },
        if report.eigen_ok { "ok" } else { "violated" },
        report.i_plus,
        report.i_minus,
        report.pass
    )
}

fn cmd_realize(args: &RealizeArgs) -> u8 {
    if !args.tol.is_finite() || args.tol <= 0.0 {
        eprintln!("bad --tol: must be a positive number");
        return EXIT_PARSE;
    }
    let report = decision::decide_q(&args.m, &args.n);
    if report.q != 2 {
        eprintln!("q=3: no realization exists");
        return EXIT_NOT_REALIZABLE;
    }
    let pair = report.witness.expect("q = 2 carries a witness");
    let lambda = match &args.lambda {
        None => default_lambda(pair.v.rows()),
        Some(text) => {
            let values: Result<Vec<f64>, _> = text.split(',').map(|p| p.trim().parse::<f64>()).collect();
            let values = match values {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("bad --lambda: {e}");
                    return EXIT_PARSE;
                }
            };
            match EigenvalueList::realization(values) {
                Ok(l) if l.len() == pair.v.rows() => l,
                Ok(l) => {
                    eprintln!("bad --lambda: {} values, witness needs {}", l.len(), pair.v.rows());
                    return EXIT_PARSE;
                }
                Err(e) => {
                    eprintln!("bad --lambda: {e}");
                    return EXIT_PARSE;
                }
            }
        }
    };
    let cfg = RealizationConfig {
        seed: args.seed,
        tol_residual: args.tol,
        ..RealizationConfig::default()
    };
    let result = match assemble_join(&pair.v, &pair.w, &args.m, &args.n, &lambda, &cfg) {
        Ok(r) => r,
        Err(RealizationError::RetryExhausted { seed, attempts }) => {
            eprintln!("inconclusive: retry budget exhausted ({attempts} attempts, seed {seed})");
            return EXIT_INCONCLUSIVE;
        }
        Err(e) => {
            eprintln!("realization failed: {e}");
            return EXIT_FAIL;
        }
    };
    let verification = verify_square(
        &result.x.to_dmatrix(),
        &SupportPattern::clique_join(&args.m, &args.n),
        &cfg,
    )
    .expect("dimensions match by construction");
    if !verification.pass {
        eprintln!("assembled matrix failed verification: {}", report_text(&verification));
        return EXIT_FAIL;
    }

    let matrix_json = serde_json::to_string(&MatrixFile {
        n: result.x.n(),
        data: result.x.data().to_vec(),
    })
    .expect("matrix serializes");
    match (&args.out, args.format) {
        (Some(path), Format::Json) => {
            if let Err(e) = std::fs::write(path, &matrix_json) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_FAIL;
            }
        }
        (Some(path), Format::Text) => {
            if let Err(e) = std::fs::write(path, matrix_text(&result.x)) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_FAIL;
            }
        }
        (None, Format::Json) => println!("{matrix_json}"),
        (None, Format::Text) => print!("{}", matrix_text(&result.x)),
    }
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(&verification).expect("report serializes")
        ),
        Format::Text => println!(
            "{} retries_used={} seed={}",
            report_text(&verification),
            result.retries_used,
            args.seed
        ),
    }
    EXIT_OK
}

fn cmd_verify(args: &VerifyArgs) -> u8 {
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.file.display());
            return EXIT_PARSE;
        }
    };
    let file: MatrixFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("bad matrix file: {e}");
            return EXIT_PARSE;
        }
    };
    if file.data.len() != file.n * file.n {
        eprintln!("bad matrix file: {} entries for n={}", file.data.len(), file.n);
        return EXIT_PARSE;
    }
    let x = nalgebra::DMatrix::from_row_slice(file.n, file.n, &file.data);
    let pattern = match args.pattern {
        Pattern::Cliques => SupportPattern::clique_join(&args.m, &args.n),
        Pattern::Cycles => SupportPattern::cycle_join(&args.m, &args.n),
    };
    let report = match verify_square(&x, &pattern, &RealizationConfig::default()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verification error: {e}");
            return EXIT_PARSE;
        }
    };
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    if report.pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_crosscheck(args: &CrosscheckArgs) -> u8 {
    if args.limit < 2 || args.rmax < 3 {
        eprintln!("crosscheck needs --limit >= 2 and --rmax >= 3");
        return EXIT_PARSE;
    }
    let cache_path = args
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let mut cache = match cache_path {
        Some(path) => match oracle::QCache::open(&path) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("cannot open cache: {e}");
                return EXIT_PARSE;
            }
        },
        None => None,
    };
    let report = match oracle::cross_check(args.limit, args.rmax, cache.as_mut(), true) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cross-check failed: {e}");
            return EXIT_FAIL;
        }
    };
    if let Some(path) = &args.csv {
        if let Err(e) = write_csv(path, &report) {
            eprintln!("cannot write csv: {e}");
            return EXIT_FAIL;
        }
    }
    println!(
        "checked={} disagreements={} limit={} rmax={}",
        report.checked, report.disagreements, report.limit, report.r_max
    );
    for cell in report.counterexamples() {
        println!(
            "counterexample: m={} n={} q_formula={} q_brute={} mu_formula={:?} mu_brute={:?}",
            cell.m, cell.n, cell.q_formula, cell.q_brute, cell.mu_formula, cell.mu_brute
        );
    }
    if report.disagreements == 0 {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn write_csv(path: &std::path::Path, report: &oracle::CrossCheckReport) -> Result<(), Box<dyn std::error::Error>> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["m", "n", "q_formula", "q_brute", "mu_formula", "mu_brute", "agree"])?;
    for cell in &report.cells {
        writer.write_record([
            cell.m.to_string(),
            cell.n.to_string(),
            cell.q_formula.to_string(),
            cell.q_brute.to_string(),
            cell.mu_formula.map_or(String::new(), |v| v.to_string()),
            cell.mu_brute.map_or(String::new(), |v| v.to_string()),
            cell.agree.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct BatchLine {
    m: Vec<usize>,
    n: Vec<usize>,
}

fn cmd_batch(args: &BatchArgs) -> u8 {
    let input = match std::fs::File::open(&args.input) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.input.display());
            return EXIT_PARSE;
        }
    };
    let mut output = match std::fs::File::create(&args.output) {
        Ok(f) => std::io::BufWriter::new(f),
        Err(e) => {
            eprintln!("cannot write {}: {e}", args.output.display());
            return EXIT_PARSE;
        }
    };
    let mut had_errors = false;
    for line in std::io::BufReader::new(input).lines() {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                eprintln!("read error: {e}");
                return EXIT_FAIL;
            }
        };
        let out_line = match decode_batch_line(&line) {
            Ok((m, n)) => serde_json::to_string(&decision::decide_q(&m, &n)).expect("report serializes"),
            Err(message) => {
                had_errors = true;
                serde_json::to_string(&serde_json::json!({ "error": message })).expect("error serializes")
            }
        };
        if let Err(e) = writeln!(output, "{out_line}") {
            eprintln!("write error: {e}");
            return EXIT_FAIL;
        }
    }
    if let Err(e) = output.flush() {
        eprintln!("write error: {e}");
        return EXIT_FAIL;
    }
    if had_errors {
        EXIT_BATCH_PARTIAL
    } else {
        EXIT_OK
    }
}

fn decode_batch_line(line: &str) -> Result<(SizeTuple, SizeTuple), String> {
    let parsed: BatchLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let m = SizeTuple::new(parsed.m).map_err(|e| e.to_string())?;
    let n = SizeTuple::new(parsed.n).map_err(|e| e.to_string())?;
    Ok((m, n))
}

/// Inclusive integer range: "4" or "1..6".
fn parse_range(text: &str) -> Result<(usize, usize), String> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|e| format!("{e}"))?;
        let hi: usize = hi.trim().parse().map_err(|e| format!("{e}"))?;
        if lo > hi {
            return Err(format!("empty range {text}"));
        }
        Ok((lo, hi))
    } else {
        let v: usize = text.trim().parse().map_err(|e| format!("{e}"))?;
        Ok((v, v))
    }
}

fn parse_params(text: &str) -> Result<std::collections::HashMap<String, (usize, usize)>, String> {
    let mut out = std::collections::HashMap::new();
    for piece in text.split(',') {
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {piece}"))?;
        out.insert(key.trim().to_string(), parse_range(value)?);
    }
    Ok(out)
}

fn cmd_table(args: &TableArgs) -> u8 {
    let params = match parse_params(&args.params) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("bad --params: {e}");
            return EXIT_PARSE;
        }
    };
    let get = |key: &str| -> Option<(usize, usize)> { params.get(key).copied() };
    match args.example {
        Example::Discrete => {
            let Some(s_range) = get("s") else {
                eprintln!("discrete needs s=..");
                return EXIT_PARSE;
            };
            let Some(a_range) = get("a") else {
                eprintln!("discrete needs a=..");
                return EXIT_PARSE;
            };
            let Some(b_range) = get("b") else {
                eprintln!("discrete needs b=..");
                return EXIT_PARSE;
            };
            if s_range.0 == 0 || a_range.0 == 0 || b_range.0 == 0 {
                eprintln!("s, a, b must be >= 1");
                return EXIT_PARSE;
            }
            for s in s_range.0..=s_range.1 {
                println!("q(a K_{s} v b K_1):");
                let header: Vec<String> = (b_range.0..=b_range.1).map(|b| format!("{b:>2}")).collect();
                println!("  a\\b {}", header.join(" "));
                for a in a_range.0..=a_range.1 {
                    let m = SizeTuple::new(vec![s; a]).expect("s >= 1");
                    let cells: Vec<String> = (b_range.0..=b_range.1)
                        .map(|b| {
                            let n = SizeTuple::new(vec![1; b]).expect("b >= 1");
                            format!("{:>2}", decision::decide_q(&m, &n).q)
                        })
                        .collect();
                    println!("  {a:>3} {}", cells.join(" "));
                }
            }
        }
        Example::KmConnected => {
            let Some(m_range) = get("m") else {
                eprintln!("km-connected needs m=..");
                return EXIT_PARSE;
            };
            let Some(l_range) = get("l") else {
                eprintln!("km-connected needs l=..");
                return EXIT_PARSE;
            };
            if m_range.0 == 0 || l_range.0 == 0 {
                eprintln!("m and l must be >= 1");
                return EXIT_PARSE;
            }
            let pattern: Result<Vec<usize>, String> = args
                .entries
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|e| e.to_string()))
                .collect();
            let pattern = match pattern {
                Ok(p) if !p.is_empty() && p.iter().all(|&e| e >= 1) => p,
                _ => {
                    eprintln!("bad --entries: need comma-separated orders >= 1");
                    return EXIT_PARSE;
                }
            };
            println!("q(K_m v union of l cliques with orders cycled from {:?}):", pattern);
            let header: Vec<String> = (l_range.0..=l_range.1).map(|l| format!("{l:>2}")).collect();
            println!("  m\\l {}", header.join(" "));
            for m_order in m_range.0..=m_range.1 {
                let m = SizeTuple::new(vec![m_order]).expect("m >= 1");
                let cells: Vec<String> = (l_range.0..=l_range.1)
                    .map(|l| {
                        let entries: Vec<usize> =
                            (0..l).map(|j| pattern[j % pattern.len()]).collect();
                        let n = SizeTuple::new(entries).expect("orders >= 1");
                        format!("{:>2}", decision::decide_q(&m, &n).q)
                    })
                    .collect();
                println!("  {m_order:>3} {}", cells.join(" "));
            }
        }
    }
    EXIT_OK
}
