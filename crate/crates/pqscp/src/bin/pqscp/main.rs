//! Command-line front end: weights, witnesses, frontier tables,
//! continued-fraction data, the boundary sequence, figures, and the
//! cross-validation / timing suites.
//!
//! Exit codes: `0` success, `1` a verification or benchmark found a
//! violation, `2` malformed input or out-of-domain arguments, `3` an
//! internal computation budget was exhausted.

mod figure;
mod suites;
mod tables;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use pqscp::{
    g_frontier_scan, h, heaviest_chain, m_ell, run_fast, y_fast, y_min, z_fast, z_max,
    ConvergentTable, Error, EvalMode, FastRun, LatticePoint, Params, Result, StepKind,
};

#[derive(Parser)]
#[command(
    name = "pqscp",
    version,
    about = "Maximal weights of strictly chained (p,q)-ary partitions",
    long_about = "Exact computations around strictly chained (p,q)-ary partitions: the \
maximal weight G(m), its witness parts z_m and y_m, the frontier set Z_m, the \
continued-fraction machinery behind the log-log-time evaluation, and \
self-checking verification and timing suites."
)]
struct Cli {
    /// Smaller base p (at least 2, multiplicatively independent of q).
    #[arg(short, long, global = true, default_value_t = 2)]
    p: u64,

    /// Larger base q (greater than p).
    #[arg(short, long, global = true, default_value_t = 3)]
    q: u64,

    /// Output format for table-producing commands.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,

    /// Write the output to a file instead of stdout.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    /// Human-readable aligned columns.
    Text,
    /// Comma-separated values with a header row.
    Csv,
    /// A single JSON object; big integers appear as decimal strings.
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Certified dyadic intervals with automatic precision escalation.
    Fixedpoint,
    /// Integer proxies scaled by the best denominator below log_q m.
    Modk,
    /// Frontier-scan oracles and exact big-integer comparisons.
    ExactOracle,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Fixedpoint => "fixedpoint",
            ModeArg::Modk => "modk",
            ModeArg::ExactOracle => "exact-oracle",
        }
    }

    /// Evaluation mode used when a walk (for a value or a trace) is needed.
    fn eval_mode(self) -> EvalMode {
        match self {
            ModeArg::Fixedpoint => EvalMode::FixedPoint,
            ModeArg::Modk => EvalMode::ModK,
            ModeArg::ExactOracle => EvalMode::Exact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Maximal weight G(m) over strictly chained partitions with parts <= m.
    G {
        /// Bound m (decimal digits, or scientific like 5e8).
        m: String,
        /// Also print the smallest opening part y_m and a heaviest chain.
        #[arg(long)]
        witness: bool,
        /// Print the walk trace (d_i and b_i per move, iteration count).
        #[arg(long)]
        trace: bool,
        /// How branch predicates are decided.
        #[arg(long, value_enum, default_value_t = ModeArg::Fixedpoint)]
        mode: ModeArg,
    },
    /// Largest frontier part z_m (the biggest p^a q^b candidate below m).
    Zm {
        /// Bound m.
        m: String,
        /// Print the walk trace.
        #[arg(long)]
        trace: bool,
        /// How branch predicates are decided.
        #[arg(long, value_enum, default_value_t = ModeArg::Fixedpoint)]
        mode: ModeArg,
    },
    /// Smallest part y_m whose heaviest chain attains G(m).
    Ym {
        /// Bound m.
        m: String,
        /// Print the walk trace.
        #[arg(long)]
        trace: bool,
        /// How branch predicates are decided.
        #[arg(long, value_enum, default_value_t = ModeArg::Fixedpoint)]
        mode: ModeArg,
    },
    /// Frontier set Z_m: one row per staircase point (a, b) with part and weight.
    Frontier {
        /// Bound m.
        m: String,
    },
    /// Continued-fraction digits of log_p q and the derived denominator stream.
    Convergents {
        /// Number of convergents to print.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Number of stream terms (K_n, H_n) to print.
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Boundary exponents ell_b for b = 0..=MAX, with jump markers.
    Ell {
        /// Largest b to print.
        #[arg(long, default_value_t = 20)]
        max: u64,
    },
    /// First jump positions of the boundary sequence, with stream witnesses.
    Jumps {
        /// How many jumps to print.
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
    /// SVG figure: frontier points, the cut line, and the ell staircase.
    Plot {
        /// Bound m.
        m: String,
    },
    /// Cross-validate every evaluator against the oracles; exit 1 on violations.
    Verify {
        /// Check every m from 1 to this bound (0 skips the sweep).
        #[arg(long, default_value_t = 2000)]
        dense: u64,
        /// Number of random values to check (0 skips the sample).
        #[arg(long, default_value_t = 200)]
        sample: u64,
        /// Upper bound for sampled m (must fit in 64 bits).
        #[arg(long, default_value = "1e9")]
        max: String,
        /// Seed for the deterministic sample.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Time the evaluators across sizes and check the iteration bound.
    Bench {
        /// Comma-separated sizes (default 1e3 through 1e9).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<String>,
        /// Largest m fed to the O(m)-memory recursive evaluator.
        #[arg(long, default_value = "1e6")]
        recursive_cutoff: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

/// Dispatches one subcommand; the returned flag is `false` exactly when a
/// verification or benchmark completed but found violations.
fn run(cli: &Cli) -> Result<bool> {
    let params = Params::new(cli.p, cli.q)?;
    let prec = display_prec()?;
    let mut passed = true;

    let rendered = match &cli.command {
        Command::G {
            m,
            witness,
            trace,
            mode,
        } => {
            let m = parse_big(m)?;
            cmd_g(&params, &m, *mode, *witness, *trace, cli.format)?
        }
        Command::Zm { m, trace, mode } => {
            let m = parse_big(m)?;
            cmd_extreme(&params, &m, *mode, *trace, cli.format, Extreme::Z)?
        }
        Command::Ym { m, trace, mode } => {
            let m = parse_big(m)?;
            cmd_extreme(&params, &m, *mode, *trace, cli.format, Extreme::Y)?
        }
        Command::Frontier { m } => {
            let m = parse_big(m)?;
            tables::render_frontier(&params, &m, cli.format)?
        }
        Command::Convergents { depth, terms } => {
            tables::render_convergents(&params, *depth, *terms, prec, cli.format)?
        }
        Command::Ell { max } => tables::render_ell(&params, *max, cli.format)?,
        Command::Jumps { count } => tables::render_jumps(&params, *count, cli.format)?,
        Command::Plot { m } => {
            let m = parse_big(m)?;
            figure::render_plot(&params, &m)?
        }
        Command::Verify {
            dense,
            sample,
            max,
            seed,
        } => {
            let max = parse_big(max)?;
            let (report, ok) = suites::run_verify(&params, *dense, *sample, &max, *seed)?;
            passed = ok;
            report
        }
        Command::Bench {
            sizes,
            recursive_cutoff,
        } => {
            let sizes: Vec<BigUint> = if sizes.is_empty() {
                (3..=9).map(|e| BigUint::from(10u64).pow(e)).collect()
            } else {
                sizes.iter().map(|s| parse_big(s)).collect::<Result<_>>()?
            };
            let cutoff = parse_big(recursive_cutoff)?;
            let (report, ok) = suites::run_bench(&params, &sizes, &cutoff)?;
            passed = ok;
            report
        }
    };

    emit(cli.output.as_ref(), &rendered)?;
    Ok(passed)
}

/// Which extreme witness a scalar command reports.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Extreme {
    Z,
    Y,
}

/// The `g` command: the weight itself, plus optional witness and trace.
fn cmd_g(
    params: &Params,
    m: &BigUint,
    mode: ModeArg,
    witness: bool,
    trace: bool,
    format: OutFormat,
) -> Result<String> {
    let mut table = ConvergentTable::new(*params);
    let y = match mode {
        ModeArg::ExactOracle => y_min(params, m)?,
        _ => y_fast(&mut table, m, mode.eval_mode())?,
    };
    let value = match mode {
        ModeArg::ExactOracle => g_frontier_scan(params, m)?.0,
        _ => h(params, y.a, y.b),
    };
    let traced = if trace {
        let budget = m_ell(&mut table, m)?;
        Some((run_fast(&mut table, m, budget, mode.eval_mode())?, budget))
    } else {
        None
    };

    match format {
        OutFormat::Csv => Err(csv_unsupported()),
        OutFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("{value}\n"));
            if witness {
                let chain = heaviest_chain(params, y.a, y.b);
                let parts = chain.parts(params);
                out.push_str(&format!(
                    "witness: y_m = {} = {}\n",
                    parts[0],
                    power_form(params, &y)
                ));
                out.push_str(&format!("heaviest chain ({} parts):", parts.len()));
                for part in &parts {
                    out.push_str(&format!(" {part}"));
                }
                out.push('\n');
            }
            if let Some((run, budget)) = &traced {
                out.push_str(&trace_text(
                    &mut table,
                    run,
                    *budget,
                    "m_ell",
                    walk_bound(params, m),
                )?);
            }
            Ok(out)
        }
        OutFormat::Json => {
            let mut obj = serde_json::json!({
                "m": m.to_string(),
                "p": params.p(),
                "q": params.q(),
                "mode": mode.name(),
                "value": value.to_string(),
            });
            if witness {
                let chain = heaviest_chain(params, y.a, y.b);
                let parts: Vec<String> =
                    chain.parts(params).iter().map(|v| v.to_string()).collect();
                obj["witness"] = serde_json::json!({
                    "a": y.a,
                    "b": y.b,
                    "part": parts[0],
                    "chain": parts,
                });
            }
            if let Some((run, budget)) = &traced {
                obj["trace"] = trace_json(&mut table, run, *budget, walk_bound(params, m))?;
            }
            Ok(pretty(&obj))
        }
    }
}

/// The `zm` and `ym` commands: the extreme part, its exponents, optional trace.
fn cmd_extreme(
    params: &Params,
    m: &BigUint,
    mode: ModeArg,
    trace: bool,
    format: OutFormat,
    which: Extreme,
) -> Result<String> {
    let mut table = ConvergentTable::new(*params);
    let point = match (which, mode) {
        (Extreme::Z, ModeArg::ExactOracle) => z_max(params, m)?,
        (Extreme::Y, ModeArg::ExactOracle) => y_min(params, m)?,
        (Extreme::Z, _) => z_fast(&mut table, m, mode.eval_mode())?,
        (Extreme::Y, _) => y_fast(&mut table, m, mode.eval_mode())?,
    };
    let value = params.part_value(point.a, point.b);
    let traced = if trace {
        let (budget, label) = match which {
            Extreme::Z => (params.floor_log_q(m), "floor(log_q m)"),
            Extreme::Y => (m_ell(&mut table, m)?, "m_ell"),
        };
        Some((
            run_fast(&mut table, m, budget, mode.eval_mode())?,
            budget,
            label,
        ))
    } else {
        None
    };

    match format {
        OutFormat::Csv => Err(csv_unsupported()),
        OutFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("{value}\n"));
            out.push_str(&format!(
                "point: (a, b) = ({}, {}), part {}\n",
                point.a,
                point.b,
                power_form(params, &point)
            ));
            if let Some((run, budget, label)) = &traced {
                out.push_str(&trace_text(
                    &mut table,
                    run,
                    *budget,
                    label,
                    walk_bound(params, m),
                )?);
            }
            Ok(out)
        }
        OutFormat::Json => {
            let key = match which {
                Extreme::Z => "z",
                Extreme::Y => "y",
            };
            let mut obj = serde_json::json!({
                "m": m.to_string(),
                "p": params.p(),
                "q": params.q(),
                "mode": mode.name(),
                "value": value.to_string(),
            });
            obj[key] = serde_json::json!({ "a": point.a, "b": point.b });
            if let Some((run, budget, _)) = &traced {
                obj["trace"] = trace_json(&mut table, run, *budget, walk_bound(params, m))?;
            }
            Ok(pretty(&obj))
        }
    }
}

/// Iteration bound `2 + floor(log2 log_q m)` (one for degenerate inputs).
fn walk_bound(params: &Params, m: &BigUint) -> u64 {
    let cap = params.floor_log_q(m);
    if cap == 0 {
        1
    } else {
        2 + u64::from(cap.ilog2())
    }
}

/// Expands a run's aggregated trace into per-move rows `(i, d_i, b_i, term)`.
fn trace_rows(table: &mut ConvergentTable, run: &FastRun) -> Result<Vec<(u64, u64, u64, String)>> {
    let mut rows = Vec::new();
    let mut b = 0u64;
    let mut i = 0u64;
    for record in &run.trace {
        let term = match record.kind {
            StepKind::EvenConvergent => format!("k_{}", 2 * record.level),
            StepKind::Mediant => {
                let k_even = table.k(2 * record.level)?;
                let k_odd = table.k(2 * record.level + 1)?;
                let t = (record.step - k_even) / k_odd;
                format!("k_{} + {}*k_{}", 2 * record.level, t, 2 * record.level + 1)
            }
        };
        for _ in 0..record.count {
            i += 1;
            b += record.step;
            rows.push((i, record.step, b, term.clone()));
        }
    }
    Ok(rows)
}

fn trace_text(
    table: &mut ConvergentTable,
    run: &FastRun,
    budget: u64,
    budget_label: &str,
    bound: u64,
) -> Result<String> {
    let rows = trace_rows(table, run)?;
    let mut out = String::new();
    out.push_str(&format!(
        "walk to b = {} with budget {budget_label} = {budget}: {} moves, {} iterations (bound {bound})\n",
        run.b,
        rows.len(),
        run.iterations,
    ));
    out.push_str("   i   d_i   b_i  increment\n");
    out.push_str("   0     -     0  -\n");
    for (i, d, b, term) in &rows {
        out.push_str(&format!("{i:>4}  {d:>4}  {b:>4}  {term}\n"));
    }
    Ok(out)
}

fn trace_json(
    table: &mut ConvergentTable,
    run: &FastRun,
    budget: u64,
    bound: u64,
) -> Result<serde_json::Value> {
    let rows = trace_rows(table, run)?;
    let moves: Vec<serde_json::Value> = rows
        .iter()
        .map(|(i, d, b, term)| serde_json::json!({ "i": i, "d": d, "b": b, "increment": term }))
        .collect();
    Ok(serde_json::json!({
        "budget": budget,
        "b": run.b,
        "iterations": run.iterations,
        "bound": bound,
        "moves": moves,
    }))
}

/// `p^a * q^b` in display form.
fn power_form(params: &Params, point: &LatticePoint) -> String {
    format!(
        "{}^{} * {}^{}",
        params.p(),
        point.a,
        params.q(),
        point.b
    )
}

fn csv_unsupported() -> Error {
    Error::InvalidInput(
        "csv output applies to the table commands (frontier, convergents, ell, jumps)".into(),
    )
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializing plain data");
    text.push('\n');
    text
}

/// Parses a positive integer given as decimal digits or as integer-mantissa
/// scientific notation such as `1e9`.
fn parse_big(text: &str) -> Result<BigUint> {
    let trimmed = text.trim();
    let bad = || Error::InvalidInput(format!("cannot parse `{trimmed}` as a positive integer"));
    let (mantissa, exponent) = match trimmed.split_once(['e', 'E']) {
        Some((man, exp)) => (man, exp),
        None => (trimmed, "0"),
    };
    let digits: BigUint = mantissa.parse().map_err(|_| bad())?;
    let exp: u32 = exponent.parse().map_err(|_| bad())?;
    if exp > 100_000 {
        return Err(Error::InvalidInput(format!(
            "exponent {exp} is unreasonably large"
        )));
    }
    Ok(digits * BigUint::from(10u32).pow(exp))
}

/// Display precision in bits for certified decimal columns, overridable
/// through the `PQSCP_PREC` environment variable.
fn display_prec() -> Result<u32> {
    match std::env::var("PQSCP_PREC") {
        Err(_) => Ok(96),
        Ok(text) => {
            let bits: u32 = text.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("PQSCP_PREC must be a bit count, got `{text}`"))
            })?;
            Ok(bits.clamp(32, 16_384))
        }
    }
}

fn emit(path: Option<&PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(file) => std::fs::write(file, content).map_err(|err| {
            Error::InvalidInput(format!("cannot write {}: {err}", file.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|err| Error::InvalidInput(format!("cannot write to stdout: {err}")))
        }
    }
}
