use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use kdiag::compose::{decompose_k, existence, generate, sweep_with, GenerateError};
use kdiag::construct::construct;
use kdiag::document::{decode_auto, from_csv, from_json, to_ascii, to_csv, to_json};
use kdiag::oracle::{exists_bruteforce_with_budget, search, BruteForce, SearchConfig};
use kdiag::{verify, SparseSquare};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NONEXISTENT: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

/// Build, check and search for k-diagonal magic squares.
#[derive(Parser)]
#[command(name = "kdiag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a k-diagonal magic square of order n
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Shift the band to diagonals 0..k. With `false`, a square built from a
        /// single direct construction keeps its native placement.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        normalize: bool,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Check a square given as JSON or CSV (path, `-` or stdin)
    Verify {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
        format: InputFormat,
    },
    /// Report whether a k-diagonal magic square of order n exists
    Exists {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also decide the question by exhaustive search
        #[arg(long)]
        oracle: bool,
        #[arg(long, env = "KDIAG_NODE_BUDGET", default_value_t = kdiag::oracle::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Exhaustive search over the band on diagonals 0..k
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Stop after this many solutions
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, env = "KDIAG_NODE_BUDGET", default_value_t = kdiag::oracle::DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Generate and verify every 1 <= k <= n <= max-n
    Sweep {
        #[arg(long, default_value_t = 60)]
        max_n: usize,
        /// Print each generated square as a JSON line instead of the table
        #[arg(long)]
        squares: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Auto,
    Json,
    Csv,
}

fn render(s: &SparseSquare, format: Format) -> String {
    match format {
        Format::Ascii => to_ascii(s),
        Format::Json => to_json(s),
        Format::Csv => to_csv(s),
    }
}

fn cmd_generate(
    out: &mut impl Write,
    n: usize,
    k: usize,
    normalize: bool,
    format: Format,
) -> Result<u8> {
    let square = match generate(n, k) {
        Ok(s) => s,
        Err(GenerateError::Nonexistent(cause)) => {
            eprintln!("no {k}-diagonal magic square of order {n}: {cause}");
            return Ok(EXIT_NONEXISTENT);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let square = match decompose_k(n, k)?.parts() {
        [part] if !normalize => construct(*part, n)?,
        _ => square,
    };
    out.write_all(render(&square, format).as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_verify(out: &mut impl Write, input: Option<PathBuf>, format: InputFormat) -> Result<u8> {
    let text = match input {
        Some(path) if path.as_os_str() != "-" => {
            std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?
        }
        _ => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .context("reading stdin")?;
            buf
        }
    };
    let parsed = match format {
        InputFormat::Auto => decode_auto(&text),
        InputFormat::Json => from_json(&text),
        InputFormat::Csv => from_csv(&text),
    };
    let square = match parsed {
        Ok(s) => s,
        Err(e) => {
            eprintln!("parse error: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let report = verify(&square);
    writeln!(
        out,
        "n          {}\nk          {}",
        square.order(),
        square.fill()
    )?;
    writeln!(out, "{report}")?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn cmd_exists(out: &mut impl Write, n: usize, k: usize, oracle: bool, budget: u64) -> Result<u8> {
    let closed_form = match existence(n, k) {
        Ok(()) => {
            writeln!(out, "yes")?;
            true
        }
        Err(GenerateError::Nonexistent(cause)) => {
            writeln!(out, "no ({cause})")?;
            false
        }
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    if oracle {
        if k > n {
            writeln!(out, "oracle: skipped (k > n)")?;
        } else {
            let verdict = exists_bruteforce_with_budget(n, k, Some(budget))?;
            match verdict {
                BruteForce::Exists => writeln!(out, "oracle: yes (solution found)")?,
                BruteForce::Absent => writeln!(out, "oracle: no (search exhausted)")?,
                BruteForce::Inconclusive => {
                    writeln!(out, "oracle: inconclusive (node budget {budget} reached)")?
                }
            }
            if verdict.as_bool().is_some_and(|b| b != closed_form) {
                writeln!(out, "oracle disagrees with the closed form")?;
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(if closed_form {
        EXIT_OK
    } else {
        EXIT_NONEXISTENT
    })
}

fn cmd_search(
    out: &mut impl Write,
    n: usize,
    k: usize,
    limit: Option<usize>,
    budget: u64,
    format: Format,
) -> Result<u8> {
    let mut cfg = SearchConfig::new(n, k).with_budget(Some(budget));
    cfg.solution_limit = limit;
    let outcome = search(&cfg)?;
    for (i, s) in outcome.solutions.iter().enumerate() {
        if i > 0 && matches!(format, Format::Ascii) {
            writeln!(out)?;
        }
        out.write_all(render(s, format).as_bytes())?;
    }
    let stats = format!(
        "solutions: {}, exhausted: {}, nodes: {}",
        outcome.solutions.len(),
        outcome.exhausted,
        outcome.nodes_visited
    );
    match format {
        Format::Ascii => writeln!(out, "{stats}")?,
        _ => eprintln!("{stats}"),
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(out: &mut impl Write, max_n: usize, squares: bool) -> Result<u8> {
    let mut dump = String::new();
    let rows = sweep_with(max_n, |_, _, s| {
        if squares {
            dump.push_str(&to_json(s));
        }
    });
    if squares {
        out.write_all(dump.as_bytes())?;
    } else {
        writeln!(
            out,
            "{:>4} {:>4} {:>7} {:>10} {:>7} {:>6}",
            "n", "k", "exists", "generated", "verify", "status"
        )?;
        for row in &rows {
            let verify = match &row.report {
                Some(r) if r.passed() => "ok",
                Some(_) => "FAIL",
                None => "-",
            };
            writeln!(
                out,
                "{:>4} {:>4} {:>7} {:>10} {:>7} {:>6}",
                row.n,
                row.k,
                if row.exists { "yes" } else { "no" },
                if row.generated { "yes" } else { "no" },
                verify,
                if row.passed() { "PASS" } else { "FAIL" },
            )?;
        }
        let failed = rows.iter().filter(|r| !r.passed()).count();
        let feasible = rows.iter().filter(|r| r.exists).count();
        writeln!(
            out,
            "{} pairs, {} feasible, {} failed",
            rows.len(),
            feasible,
            failed
        )?;
    }
    Ok(if rows.iter().all(|r| r.passed()) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn run(cli: Cli) -> Result<u8> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::Generate {
            n,
            k,
            normalize,
            format,
        } => cmd_generate(&mut out, n, k, normalize, format)?,
        Command::Verify { input, format } => cmd_verify(&mut out, input, format)?,
        Command::Exists {
            n,
            k,
            oracle,
            budget,
        } => cmd_exists(&mut out, n, k, oracle, budget)?,
        Command::Search {
            n,
            k,
            limit,
            budget,
            format,
        } => cmd_search(&mut out, n, k, limit, budget, format)?,
        Command::Sweep { max_n, squares } => cmd_sweep(&mut out, max_n, squares)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
