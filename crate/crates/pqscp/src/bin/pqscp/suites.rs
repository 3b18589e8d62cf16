//! The self-checking suites: `verify` cross-validates every evaluator
//! against the oracles and the structural invariants; `bench` times the
//! evaluators and enforces the iteration bound.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pqscp::{
    check_z_recurrences, g_fast, g_frontier_scan, g_recursive, g_recursive_with_cache, run_fast,
    y_fast, y_min, y_set, z_fast, z_max, ConvergentTable, Error, EvalMode, GCache, Params, Result,
};

use crate::walk_bound;

const MAX_REPORTED: usize = 10;

/// Collects violations, keeping only the first few verbatim.
struct Tally {
    checked: u64,
    violations: u64,
    reported: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            violations: 0,
            reported: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.reported.len() < MAX_REPORTED {
                self.reported.push(describe());
            }
        }
    }
}

/// Appends one suite line: a description, dot leaders, and the outcome.
fn suite_line(out: &mut String, label: &str, tally: &Tally) {
    let dots = ".".repeat(58usize.saturating_sub(label.len()).max(2));
    if tally.violations == 0 {
        out.push_str(&format!(
            "    {label} {dots} ok ({} checks)\n",
            tally.checked
        ));
    } else {
        out.push_str(&format!(
            "    {label} {dots} FAIL ({} of {} checks)\n",
            tally.violations, tally.checked
        ));
    }
}

fn flush_reports(out: &mut String, tally: &Tally) {
    for line in &tally.reported {
        out.push_str(&format!("      violation: {line}\n"));
    }
    let hidden = tally.violations as usize - tally.reported.len();
    if hidden > 0 {
        out.push_str(&format!("      ... and {hidden} more\n"));
    }
}

/// Runs the dense sweep and the random sample; returns the report and
/// whether every check passed.
pub fn run_verify(
    params: &Params,
    dense: u64,
    sample: u64,
    max: &BigUint,
    seed: u64,
) -> Result<(String, bool)> {
    let mut out = format!("verify (p, q) = ({}, {})\n", params.p(), params.q());
    let mut table = ConvergentTable::new(*params);
    let mut all_ok = true;

    if dense > 0 {
        out.push_str(&format!("  dense sweep m = 1..={dense}\n"));
        let mut agree = Tally::new();
        let mut witnesses = Tally::new();
        let mut sizes = Tally::new();
        let mut recurrences = Tally::new();
        let mut iterations = Tally::new();
        let mut ratio = Tally::new();
        let mut cache = GCache::new(params);

        for value in 1..=dense {
            let m = BigUint::from(value);
            let g_rec = g_recursive_with_cache(params, &m, &mut cache)?;
            let g_scan = g_frontier_scan(params, &m)?.0;
            let g_fix = g_fast(&mut table, &m, EvalMode::FixedPoint)?;
            let g_modk = g_fast(&mut table, &m, EvalMode::ModK)?;
            let g_exact = g_fast(&mut table, &m, EvalMode::Exact)?;
            agree.check(
                g_rec == g_scan && g_scan == g_fix && g_fix == g_modk && g_modk == g_exact,
                || {
                    format!(
                        "m = {value}: G disagrees \
(recursive {g_rec}, scan {g_scan}, fixedpoint {g_fix}, modk {g_modk}, exact {g_exact})"
                    )
                },
            );

            let z_walk = z_fast(&mut table, &m, EvalMode::FixedPoint)?;
            let z_oracle = z_max(params, &m)?;
            let y_walk = y_fast(&mut table, &m, EvalMode::FixedPoint)?;
            let y_oracle = y_min(params, &m)?;
            witnesses.check(z_walk == z_oracle && y_walk == y_oracle, || {
                format!(
                    "m = {value}: witness mismatch \
(z walk ({}, {}) vs oracle ({}, {}); y walk ({}, {}) vs oracle ({}, {}))",
                    z_walk.a, z_walk.b, z_oracle.a, z_oracle.b, y_walk.a, y_walk.b, y_oracle.a,
                    y_oracle.b
                )
            });

            let y_all = y_set(params, &m)?;
            sizes.check(y_all.len() == 1 || y_all.len() == 2, || {
                format!("m = {value}: argmax set has {} points", y_all.len())
            });

            let report = check_z_recurrences(params, &m)?;
            recurrences.check(report.q_step_holds && report.p_step_holds, || {
                format!(
                    "m = {value}: frontier recurrence broken (q step {}, p step {})",
                    report.q_step_holds, report.p_step_holds
                )
            });

            let cap = params.floor_log_q(&m);
            let run = run_fast(&mut table, &m, cap, EvalMode::FixedPoint)?;
            let bound = walk_bound(params, &m);
            iterations.check(run.iterations <= bound, || {
                format!(
                    "m = {value}: {} iterations exceed the bound {bound}",
                    run.iterations
                )
            });

            let y_value = params.part_value(y_oracle.a, y_oracle.b);
            let lhs = (params.p_big() - BigUint::one()) * &g_rec;
            let rhs = params.p_big() * &y_value;
            ratio.check(lhs < rhs, || {
                format!("m = {value}: (p-1) G = {lhs} is not below p y_m = {rhs}")
            });
        }

        for (label, tally) in [
            ("G agrees across recursive, scan, and all walk modes", &agree),
            ("z_m and y_m walks match the frontier oracles", &witnesses),
            ("argmax witness sets have 1 or 2 points", &sizes),
            ("frontier recurrences under m -> pm and m -> qm hold", &recurrences),
            ("iteration counts within 2 + floor(log2 log_q m)", &iterations),
            ("(p-1) G(m) < p y_m", &ratio),
        ] {
            suite_line(&mut out, label, tally);
            flush_reports(&mut out, tally);
            all_ok &= tally.violations == 0;
        }
    }

    if sample > 0 {
        let max_u64 = u64::try_from(max).map_err(|_| {
            Error::InvalidInput(format!("sample bound {max} does not fit in 64 bits"))
        })?;
        if max_u64 < 2 {
            return Err(Error::InvalidInput(
                "sample bound must be at least 2".into(),
            ));
        }
        out.push_str(&format!(
            "  random sample: {sample} values of m <= {max_u64} (seed {seed})\n"
        ));
        let mut agree = Tally::new();
        let mut iterations = Tally::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        for _ in 0..sample {
            let value = rng.gen_range(2..=max_u64);
            let m = BigUint::from(value);
            let g_scan = g_frontier_scan(params, &m)?.0;
            let g_fix = g_fast(&mut table, &m, EvalMode::FixedPoint)?;
            let g_modk = g_fast(&mut table, &m, EvalMode::ModK)?;
            agree.check(g_scan == g_fix && g_fix == g_modk, || {
                format!(
                    "m = {value}: G disagrees (scan {g_scan}, fixedpoint {g_fix}, modk {g_modk})"
                )
            });

            let cap = params.floor_log_q(&m);
            let run = run_fast(&mut table, &m, cap, EvalMode::FixedPoint)?;
            let bound = walk_bound(params, &m);
            iterations.check(run.iterations <= bound, || {
                format!(
                    "m = {value}: {} iterations exceed the bound {bound}",
                    run.iterations
                )
            });
        }

        for (label, tally) in [
            ("fast walks agree with the frontier scan", &agree),
            ("iteration counts within 2 + floor(log2 log_q m)", &iterations),
        ] {
            suite_line(&mut out, label, tally);
            flush_reports(&mut out, tally);
            all_ok &= tally.violations == 0;
        }
    }

    out.push_str(&format!(
        "verify: {}\n",
        if all_ok { "PASS" } else { "FAIL" }
    ));
    Ok((out, all_ok))
}

fn fmt_duration(d: Duration) -> String {
    let nanos = d.as_nanos();
    if nanos < 1_000 {
        format!("{nanos}ns")
    } else if nanos < 1_000_000 {
        format!("{:.1}us", nanos as f64 / 1e3)
    } else if nanos < 1_000_000_000 {
        format!("{:.2}ms", nanos as f64 / 1e6)
    } else {
        format!("{:.3}s", nanos as f64 / 1e9)
    }
}

/// Times the evaluators for each size; the recursive oracle only runs up
/// to `cutoff` (it keeps a table of every value below m).
pub fn run_bench(params: &Params, sizes: &[BigUint], cutoff: &BigUint) -> Result<(String, bool)> {
    let mut out = format!(
        "bench (p, q) = ({}, {}); single-shot wall-clock times\n",
        params.p(),
        params.q()
    );
    let m_w = sizes
        .iter()
        .map(|m| m.to_string().len())
        .max()
        .unwrap_or(1)
        .max(6);
    out.push_str(&format!(
        "{:>m_w$}  {:>9}  {:>10}  {:>5}  {:>12}  {:>12}  {:>12}\n",
        "m", "digits(G)", "iterations", "bound", "fast walk", "scan", "recursive"
    ));

    let mut table = ConvergentTable::new(*params);
    let mut bound_ok = true;
    let mut agree_ok = true;

    for m in sizes {
        let started = Instant::now();
        let g_walk = g_fast(&mut table, m, EvalMode::FixedPoint)?;
        let t_fast = started.elapsed();

        let started = Instant::now();
        let g_scan = g_frontier_scan(params, m)?.0;
        let t_scan = started.elapsed();

        let recursive_cell;
        if m <= cutoff {
            let started = Instant::now();
            let g_rec = g_recursive(params, m)?;
            recursive_cell = fmt_duration(started.elapsed());
            agree_ok &= g_rec == g_walk;
        } else {
            recursive_cell = "(skipped)".into();
        }
        agree_ok &= g_walk == g_scan;

        let cap = params.floor_log_q(m);
        let run = run_fast(&mut table, m, cap, EvalMode::FixedPoint)?;
        let bound = walk_bound(params, m);
        bound_ok &= run.iterations <= bound;

        out.push_str(&format!(
            "{:>m_w$}  {:>9}  {:>10}  {:>5}  {:>12}  {:>12}  {:>12}\n",
            m.to_string(),
            g_walk.to_string().len(),
            run.iterations,
            bound,
            fmt_duration(t_fast),
            fmt_duration(t_scan),
            recursive_cell,
        ));
    }

    out.push_str(&format!(
        "iteration bound respected: {}\n",
        if bound_ok { "yes" } else { "NO" }
    ));
    out.push_str(&format!(
        "all evaluators agree: {}\n",
        if agree_ok { "yes" } else { "NO" }
    ));
    Ok((out, bound_ok && agree_ok))
}
