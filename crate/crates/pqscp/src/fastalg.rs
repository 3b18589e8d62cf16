//! The fast walk computing `z_m`, `y_m`, and `G(m)` in `O(log log m)` steps.
//!
//! The boundary points `zeta(b)` increase exactly at the indices `b_i` where
//! `{(b - b_i) rho} <= r_i`, with `r_i = {log_p m - b_i rho}`. The increments
//! `d_(i+1) = b_(i+1) - b_i` are non-decreasing, all lie in the
//! best-from-below stream `(K_n)`, and group into at most two moves per
//! convergent level `s`:
//!
//! * a run of `n_s = floor(r / eps_(2s))` copies of `k_(2s)`, and
//! * at most one mediant step `k_(2s) + t_s k_(2s+1)` with
//!   `t_s = ceil((eps_(2s) - r)/eps_(2s+1))`, which fires precisely when the
//!   remainder still clears the smallest interior mediant's fractional part
//!   `eps_(2s+1) + eps_(2s+2)`.
//!
//! Since `k_(2s)` doubles per level, the walk reaches any budget `B <=
//! log_q m` within `2 + floor(log2 log_q m)` outer iterations. With
//! `B = floor(log_q m)` the final point is `z_m`; with `B = m_ell` it is
//! `y_m`, and `G(m) = h` there.
//!
//! Every branch reduces to one predicate: `log_p m >= A + B rho` for
//! integers `A, B` assembled from the state and the convergents. The walk
//! never manipulates `r` numerically; it tracks the exact anchor pair
//! `(a_i, b_i)` with `a_i = floor(log_p(m / q^(b_i)))`, so the predicate has
//! an exact integer form `m p^max(0,-A) q^max(0,-B) >= p^max(0,A) q^max(0,B)`
//! that every evaluation mode falls back on:
//!
//! * [`EvalMode::FixedPoint`] answers by the certified sign of
//!   `ln m - A ln p - B ln q`, escalating precision while the enclosure
//!   straddles zero (exact equalities occur for smooth `m`, so the fallback
//!   is reachable, not theoretical);
//! * [`EvalMode::ModK`] scales the predicate by the best denominator `K <=
//!   log_q m` and tests the integer proxy `floor(K log_p m) - K A - B H`
//!   (`H = floor(K rho)`), falling back only inside the proven slack band
//!   `|proxy| <= B/k'`;
//! * [`EvalMode::Exact`] runs the integer form directly.
//!
//! The modes must agree branch for branch; the differential tests assert it.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Zero};

use crate::certified::{ln_interval, ln_u64_interval, CertifiedSign, FixInterval};
use crate::chain::{h, LatticePoint};
use crate::contfrac::ConvergentTable;
use crate::ell::m_ell;
use crate::error::{Error, Result};
use crate::frontier::zeta;
use crate::params::Params;

/// Starting precision for certified branch comparisons.
const BASE_PREC: u32 = 96;

/// Escalation ceiling before switching to the exact integer predicate.
const MAX_PREC: u32 = 4096;

/// Largest exponent materialized as an exact power.
const MAX_EXACT_EXPONENT: i128 = 1 << 20;

/// How the walk resolves its branch predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Certified dyadic intervals with precision escalation.
    FixedPoint,
    /// Integer proxy scaled by the best denominator `K` below `log_q m`.
    ModK,
    /// Exact big-integer power comparisons everywhere.
    Exact,
}

/// What kind of move a trace record describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// A run of the even convergent `k_(2s)`.
    EvenConvergent,
    /// A single interior mediant `k_(2s) + t k_(2s+1)`.
    Mediant,
}

/// One aggregated move of the walk: `count` copies of the increment `step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    /// Convergent level the move belongs to.
    pub level: usize,
    /// Run or mediant.
    pub kind: StepKind,
    /// The increment `d_i` (a term of the stream).
    pub step: u64,
    /// How many consecutive times it was taken.
    pub count: u64,
}

/// Which guard a branch record reports on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    /// Step-1 guard `r >= eps_(2s)`.
    EvenRun,
    /// Step-2 guard `r >= eps_(2s+1) + eps_(2s+2)`.
    MediantStep,
}

/// Outcome of one guard evaluation, for cross-mode differential checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchRecord {
    /// Convergent level of the guard.
    pub level: usize,
    /// Which guard.
    pub kind: BranchKind,
    /// Whether it fired.
    pub fired: bool,
}

/// Result of one walk: the reached index, the iteration count, and the
/// full decision record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastRun {
    /// The largest reachable `b_i` within the budget.
    pub b: u64,
    /// Outer iterations used (one per convergent level touched).
    pub iterations: u64,
    /// The `d_i` sequence, aggregated per move.
    pub trace: Vec<StepRecord>,
    /// Every guard decision, in evaluation order.
    pub branches: Vec<BranchRecord>,
}

impl FastRun {
    /// The `b_i` prefix realized by the trace (starting at `b_0 = 0`).
    pub fn b_sequence(&self) -> Vec<u64> {
        let mut seq = vec![0u64];
        for record in &self.trace {
            for _ in 0..record.count {
                seq.push(seq.last().unwrap() + record.step);
            }
        }
        seq
    }
}

fn require_positive(m: &BigUint) -> Result<()> {
    if m.is_zero() {
        Err(Error::OutOfRange(
            "m must be at least 1 (weights are defined on positive integers)".into(),
        ))
    } else {
        Ok(())
    }
}

/// The exact predicate `log_p m >= A + B rho`, cleared to an integer
/// comparison. Total: handles any sign of `A` and `B`, and decides
/// equality (smooth `m`) correctly.
fn exact_log_ge(params: &Params, m: &BigUint, a: i128, b: i128) -> bool {
    assert!(
        a.abs() <= MAX_EXACT_EXPONENT && b.abs() <= MAX_EXACT_EXPONENT,
        "branch predicate exponents out of range"
    );
    let lhs = m * params.pow_p((-a).max(0) as u64) * params.pow_q((-b).max(0) as u64);
    let rhs = params.pow_p(a.max(0) as u64) * params.pow_q(b.max(0) as u64);
    lhs >= rhs
}

/// Context for the integer-proxy mode: `rho ~ H/K` with `K` the largest
/// stream term at most `log_q m`, and `w = floor(K log_p m)`.
struct ModKContext {
    k: i128,
    h: i128,
    w: i128,
    /// `k_(2s+1)` at the level of `K`; guarantees `{K rho} < 1/slack`.
    slack: i128,
}

fn modk_context(table: &mut ConvergentTable, m: &BigUint) -> Result<ModKContext> {
    let params = *table.params();
    let cap = params.floor_log_q(m).max(1);
    let term = table.last_below_leq(cap)?;
    let slack = table.k(2 * term.s + 1)?;
    if term.k.saturating_mul(m.bits()) > 1 << 27 {
        return Err(Error::BudgetExceeded(
            "the scaled power for the integer-proxy mode is too large".into(),
        ));
    }
    let scaled: BigUint = Pow::pow(m, term.k);
    Ok(ModKContext {
        k: term.k as i128,
        h: term.h as i128,
        w: params.floor_log_p(&scaled) as i128,
        slack: slack as i128,
    })
}

/// One branch evaluator, fixed to a mode, a parameter pair, and `m`.
struct Comparator<'m> {
    mode: EvalMode,
    params: Params,
    m: &'m BigUint,
    ln_m: HashMap<u32, FixInterval>,
    modk: Option<ModKContext>,
}

impl<'m> Comparator<'m> {
    fn new(
        table: &mut ConvergentTable,
        m: &'m BigUint,
        mode: EvalMode,
    ) -> Result<Comparator<'m>> {
        let modk = if mode == EvalMode::ModK {
            Some(modk_context(table, m)?)
        } else {
            None
        };
        Ok(Comparator {
            mode,
            params: *table.params(),
            m,
            ln_m: HashMap::new(),
            modk,
        })
    }

    /// Does `log_p m >= a + b rho` hold?
    fn ge(&mut self, a: i128, b: i128) -> bool {
        match self.mode {
            EvalMode::Exact => exact_log_ge(&self.params, self.m, a, b),
            EvalMode::FixedPoint => {
                let mut prec = BASE_PREC;
                while prec <= MAX_PREC {
                    let ln_m = self
                        .ln_m
                        .entry(prec)
                        .or_insert_with(|| ln_interval(self.m, prec))
                        .clone();
                    let value = ln_m
                        .sub(&ln_u64_interval(self.params.p(), prec).mul_int(&BigInt::from(a)))
                        .sub(&ln_u64_interval(self.params.q(), prec).mul_int(&BigInt::from(b)));
                    match value.sign() {
                        CertifiedSign::Positive | CertifiedSign::Zero => return true,
                        CertifiedSign::Negative => return false,
                        CertifiedSign::Unknown => prec *= 2,
                    }
                }
                exact_log_ge(&self.params, self.m, a, b)
            }
            EvalMode::ModK => {
                let ctx = self.modk.as_ref().expect("proxy context was built");
                // true value scaled by K differs from the proxy by
                // theta - b {K rho} with theta in [0, 1) and {K rho} < 1/slack.
                let proxy = ctx.w - ctx.k * a - ctx.h * b;
                if proxy >= 0 && proxy * ctx.slack >= b.max(0) {
                    return true;
                }
                if b >= 0 {
                    if proxy <= -1 {
                        return false;
                    }
                } else if proxy <= -1 && (-proxy - 1) * ctx.slack >= -b {
                    return false;
                }
                exact_log_ge(&self.params, self.m, a, b)
            }
        }
    }
}

/// Walks the `b_i` sequence up to `budget` and returns the largest
/// reachable index, with the full move and branch record.
///
/// `budget` is `floor(log_q m)` for the `z`-walk and `m_ell` for the
/// `y`-walk; any value up to `floor(log_q m)` is accepted and yields the
/// largest `b_i` not exceeding it.
pub fn run_fast(
    table: &mut ConvergentTable,
    m: &BigUint,
    budget: u64,
    mode: EvalMode,
) -> Result<FastRun> {
    require_positive(m)?;
    let params = *table.params();
    let cap_b = params.floor_log_q(m);
    if budget > cap_b {
        return Err(Error::OutOfRange(format!(
            "budget {budget} exceeds floor(log_q m) = {cap_b}"
        )));
    }
    let mut cmp = Comparator::new(table, m, mode)?;
    // Exact anchor: a = floor(log_p(m / q^b)), so r = log_p m - a - b rho
    // stays in [0, 1) without ever being evaluated numerically.
    let mut a = params.floor_log_p(m) as i128;
    let mut b = 0u64;
    let mut iterations = 0u64;
    let mut trace: Vec<StepRecord> = Vec::new();
    let mut branches: Vec<BranchRecord> = Vec::new();
    let mut s = 0usize;
    loop {
        iterations += 1;
        let k_even = table.k(2 * s)? as i128;
        let h_even = table.h(2 * s)? as i128;
        // Every remaining move is at least k_(2s); nothing more fits.
        if k_even > (budget - b) as i128 {
            return Ok(FastRun {
                b,
                iterations,
                trace,
                branches,
            });
        }
        // Run of even convergents: fires iff r >= eps_(2s).
        let fired = cmp.ge(a - h_even, b as i128 + k_even);
        branches.push(BranchRecord {
            level: s,
            kind: BranchKind::EvenRun,
            fired,
        });
        if fired {
            // n = floor(r / eps_(2s)): largest n with r >= n eps_(2s),
            // bounded by a_(2s+1) + 1.
            let cap_n = table.quotient(2 * s + 1)? + 1;
            let (mut lo, mut hi) = (1u64, cap_n);
            while lo < hi {
                let mid = lo + (hi - lo + 1) / 2;
                let mid = mid as i128;
                if cmp.ge(a - mid * h_even, b as i128 + mid * k_even) {
                    lo = mid as u64;
                } else {
                    hi = mid as u64 - 1;
                }
            }
            let n = lo;
            if b as i128 + n as i128 * k_even > budget as i128 {
                // Credit the copies that still fit and stop.
                let fit = (budget - b) / k_even as u64;
                debug_assert!(fit >= 1 && fit < n);
                trace.push(StepRecord {
                    level: s,
                    kind: StepKind::EvenConvergent,
                    step: k_even as u64,
                    count: fit,
                });
                return Ok(FastRun {
                    b: b + fit * k_even as u64,
                    iterations,
                    trace,
                    branches,
                });
            }
            b += n * k_even as u64;
            a -= n as i128 * h_even;
            trace.push(StepRecord {
                level: s,
                kind: StepKind::EvenConvergent,
                step: k_even as u64,
                count: n,
            });
        }
        // Interior mediant: fires iff r >= eps_(2s+1) + eps_(2s+2), the
        // fractional part of the largest interior mediant. (Guarding on
        // the smallest mediant gap eps_(2s) - eps_(2s+1) instead would
        // miss every step with t >= 2.)
        let k_odd = table.k(2 * s + 1)? as i128;
        let h_odd = table.h(2 * s + 1)? as i128;
        let k_next = table.k(2 * s + 2)? as i128;
        let h_next = table.h(2 * s + 2)? as i128;
        let a_next = table.quotient(2 * s + 2)?;
        let fired = a_next >= 2
            && cmp.ge(a + h_odd - h_next, b as i128 - k_odd + k_next);
        branches.push(BranchRecord {
            level: s,
            kind: BranchKind::MediantStep,
            fired,
        });
        if fired {
            // Smallest t in [1, a_(2s+2) - 1] with r >= eps_(2s) - t eps_(2s+1).
            let (mut lo, mut hi) = (1u64, a_next - 1);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                let t = mid as i128;
                if cmp.ge(a - h_even - t * h_odd, b as i128 + k_even + t * k_odd) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let t = lo as i128;
            let step = (k_even + t * k_odd) as u64;
            if b + step > budget {
                return Ok(FastRun {
                    b,
                    iterations,
                    trace,
                    branches,
                });
            }
            b += step;
            a -= h_even + t * h_odd;
            trace.push(StepRecord {
                level: s,
                kind: StepKind::Mediant,
                step,
                count: 1,
            });
        }
        s += 1;
    }
}

/// `z_m` by the fast walk: largest boundary point under `m`.
pub fn z_fast(table: &mut ConvergentTable, m: &BigUint, mode: EvalMode) -> Result<LatticePoint> {
    require_positive(m)?;
    let params = *table.params();
    let budget = params.floor_log_q(m);
    let run = run_fast(table, m, budget, mode)?;
    zeta(&params, m, run.b)
}

/// `y_m` by the fast walk: the walk capped at `m_ell` lands on the
/// minimal-value witness of `G(m)`.
pub fn y_fast(table: &mut ConvergentTable, m: &BigUint, mode: EvalMode) -> Result<LatticePoint> {
    let params = *table.params();
    let budget = m_ell(table, m)?;
    let run = run_fast(table, m, budget, mode)?;
    let point = zeta(&params, m, run.b)?;
    #[cfg(debug_assertions)]
    {
        // Factorization cross-check: with abar the boundary exponent at
        // m_ell, y_m = p^abar * z_mbar for mbar = floor(m / p^abar).
        let abar = zeta(&params, m, budget)?.a;
        let mbar = m / params.pow_p(abar);
        let inner = crate::frontier::z_max(&params, &mbar)?;
        debug_assert_eq!(
            point.value(&params),
            params.pow_p(abar) * inner.value(&params),
            "witness factorization failed for m = {m}"
        );
    }
    Ok(point)
}

/// `G(m)` by the fast walk: the weight `h` at `y_m`.
pub fn g_fast(table: &mut ConvergentTable, m: &BigUint, mode: EvalMode) -> Result<BigUint> {
    let params = *table.params();
    let y = y_fast(table, m, mode)?;
    Ok(h(&params, y.a, y.b))
}

/// The canonical representation of `n` as a sum of stream terms: the move
/// sequence of the walk for `m = q^n` with budget `n`, aggregated as
/// `(term, multiplicity)` pairs in increasing term order.
pub fn kn_representation(table: &mut ConvergentTable, n: u64) -> Result<Vec<(u64, u64)>> {
    if n == 0 {
        return Err(Error::OutOfRange(
            "the stream representation is defined for n >= 1".into(),
        ));
    }
    if n as i128 > MAX_EXACT_EXPONENT {
        return Err(Error::BudgetExceeded(format!(
            "representation of {n} exceeds the power materialization cap"
        )));
    }
    let params = *table.params();
    let m = params.pow_q(n);
    let run = run_fast(table, &m, n, EvalMode::Exact)?;
    assert_eq!(
        run.b, n,
        "the walk for q^{n} must exhaust its budget exactly"
    );
    Ok(run.trace.iter().map(|r| (r.step, r.count)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::{y_min, z_max};
    use crate::oracle::g_frontier_scan;

    const MODES: [EvalMode; 3] = [EvalMode::FixedPoint, EvalMode::ModK, EvalMode::Exact];

    fn p23() -> Params {
        Params::new(2, 3).unwrap()
    }

    fn t23() -> ConvergentTable {
        ConvergentTable::new(p23())
    }

    fn big(m: u64) -> BigUint {
        BigUint::from(m)
    }

    #[test]
    fn walk_for_750_under_both_budgets() {
        let mut table = t23();
        let m = big(750);
        // Full budget: reaches b = 6 through three copies of k_2 = 2.
        let run = run_fast(&mut table, &m, 6, EvalMode::Exact).unwrap();
        assert_eq!(run.b, 6);
        assert_eq!(run.b_sequence(), vec![0, 2, 4, 6]);
        assert_eq!(run.trace.len(), 1);
        assert_eq!(
            run.trace[0],
            StepRecord {
                level: 1,
                kind: StepKind::EvenConvergent,
                step: 2,
                count: 3
            }
        );
        assert!(run.iterations <= 4);
        // Witness budget m_ell = 4: the run is clipped to two copies.
        let run = run_fast(&mut table, &m, 4, EvalMode::Exact).unwrap();
        assert_eq!(run.b, 4);
        assert_eq!(run.b_sequence(), vec![0, 2, 4]);
        // Zero budget pins the walk at the origin.
        let run = run_fast(&mut table, &m, 0, EvalMode::Exact).unwrap();
        assert_eq!(run.b, 0);
        assert!(run.trace.is_empty());
        // A budget beyond floor(log_q m) is rejected.
        assert!(matches!(
            run_fast(&mut table, &m, 7, EvalMode::Exact),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            run_fast(&mut table, &BigUint::zero(), 0, EvalMode::Exact),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn z_fast_reference_values() {
        let params = p23();
        let mut table = t23();
        for mode in MODES {
            let z = z_fast(&mut table, &big(750), mode).unwrap();
            assert_eq!(z.value(&params), big(729), "{mode:?}");
        }
        // Smooth inputs are their own maximum (including r = 0 cases).
        for m in [512u64, 576, 648, 729, 486, 1] {
            let z = z_fast(&mut table, &big(m), EvalMode::FixedPoint).unwrap();
            assert_eq!(z.value(&params), big(m), "m = {m}");
        }
        let million = big(1_000_000);
        let expect = z_max(&params, &million).unwrap();
        for mode in MODES {
            assert_eq!(z_fast(&mut table, &million, mode).unwrap(), expect);
        }
    }

    #[test]
    fn y_fast_reference_values() {
        let params = p23();
        let mut table = t23();
        for mode in MODES {
            assert_eq!(
                y_fast(&mut table, &big(750), mode).unwrap().value(&params),
                big(648)
            );
            assert_eq!(
                y_fast(&mut table, &big(729), mode).unwrap().value(&params),
                big(648)
            );
            assert_eq!(
                y_fast(&mut table, &big(486), mode).unwrap().value(&params),
                big(432)
            );
        }
    }

    #[test]
    fn g_fast_reference_values() {
        let params = p23();
        let mut table = t23();
        assert_eq!(
            g_fast(&mut table, &big(750), EvalMode::FixedPoint).unwrap(),
            big(1255)
        );
        assert_eq!(
            g_fast(&mut table, &big(16), EvalMode::FixedPoint).unwrap(),
            big(31)
        );
        let billion = big(1_000_000_000);
        let (expect, _) = g_frontier_scan(&params, &billion).unwrap();
        for mode in MODES {
            assert_eq!(g_fast(&mut table, &billion, mode).unwrap(), expect);
        }
    }

    #[test]
    fn modes_agree_with_oracles_densely() {
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            for m in 1u64..=1200 {
                let m_big = big(m);
                let reference = run_fast(
                    &mut table,
                    &m_big,
                    params.floor_log_q(&m_big),
                    EvalMode::Exact,
                )
                .unwrap();
                for mode in [EvalMode::FixedPoint, EvalMode::ModK] {
                    let run = run_fast(
                        &mut table,
                        &m_big,
                        params.floor_log_q(&m_big),
                        mode,
                    )
                    .unwrap();
                    assert_eq!(run, reference, "({p},{q}) m={m} {mode:?}");
                }
                assert_eq!(
                    z_fast(&mut table, &m_big, EvalMode::FixedPoint).unwrap(),
                    z_max(&params, &m_big).unwrap(),
                    "({p},{q}) m={m} z"
                );
                assert_eq!(
                    y_fast(&mut table, &m_big, EvalMode::FixedPoint).unwrap(),
                    y_min(&params, &m_big).unwrap(),
                    "({p},{q}) m={m} y"
                );
                let (g, _) = g_frontier_scan(&params, &m_big).unwrap();
                assert_eq!(
                    g_fast(&mut table, &m_big, EvalMode::ModK).unwrap(),
                    g,
                    "({p},{q}) m={m} G"
                );
            }
        }
    }

    /// The slow but assumption-free route to the `b_i` sequence: step to
    /// the nearest index whose boundary value strictly grows.
    fn brute_b_sequence(params: &Params, m: &BigUint, cap: u64) -> Vec<u64> {
        let mut seq = vec![0u64];
        let mut current = zeta(params, m, 0).unwrap().value(params);
        loop {
            let last = *seq.last().unwrap();
            let mut next = None;
            for b in last + 1..=cap {
                let value = zeta(params, m, b).unwrap().value(params);
                if value > current {
                    next = Some((b, value));
                    break;
                }
            }
            match next {
                Some((b, value)) => {
                    seq.push(b);
                    current = value;
                }
                None => return seq,
            }
        }
    }

    #[test]
    fn walk_matches_brute_sequence_for_every_budget() {
        for (p, q) in [(2u64, 3u64), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            for m in 1u64..=800 {
                let m_big = big(m);
                let cap = params.floor_log_q(&m_big);
                let want = brute_b_sequence(&params, &m_big, cap);
                let full = run_fast(&mut table, &m_big, cap, EvalMode::Exact).unwrap();
                assert_eq!(full.b_sequence(), want, "({p},{q}) m={m}");
                for budget in 0..=cap {
                    let run = run_fast(&mut table, &m_big, budget, EvalMode::Exact).unwrap();
                    let expect = *want.iter().filter(|&&b| b <= budget).max().unwrap();
                    assert_eq!(run.b, expect, "({p},{q}) m={m} budget={budget}");
                }
            }
        }
    }

    #[test]
    fn trace_structure_matches_the_increment_laws() {
        for (p, q) in [(2u64, 3u64), (2, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            for m in 1u64..=3000 {
                let m_big = big(m);
                let cap = params.floor_log_q(&m_big);
                let run = run_fast(&mut table, &m_big, cap, EvalMode::Exact).unwrap();
                let mut prev: Option<&StepRecord> = None;
                for record in &run.trace {
                    // Steps are strictly increasing stream terms.
                    if let Some(prev) = prev {
                        assert!(record.step > prev.step, "({p},{q}) m={m}");
                    }
                    let term = table.last_below_leq(record.step).unwrap();
                    assert_eq!(term.k, record.step, "({p},{q}) m={m}: step off-stream");
                    match record.kind {
                        StepKind::Mediant => assert_eq!(record.count, 1),
                        StepKind::EvenConvergent => {
                            // Run length cap: a_(2s+1), plus one unless the
                            // run follows an interior mediant of the level
                            // below or sits at level zero.
                            let odd_quot = table.quotient(2 * record.level + 1).unwrap();
                            let tight = record.level == 0
                                || prev.is_some_and(|r| {
                                    r.kind == StepKind::Mediant && r.level + 1 == record.level
                                });
                            let cap_n = if tight { odd_quot } else { odd_quot + 1 };
                            assert!(
                                record.count <= cap_n,
                                "({p},{q}) m={m}: run of {} exceeds {cap_n}",
                                record.count
                            );
                        }
                    }
                    prev = Some(record);
                }
            }
        }
    }

    #[test]
    fn boundary_values_grow_exactly_at_the_b_sequence() {
        let params = p23();
        let mut table = t23();
        for m in 1u64..=2000 {
            let m_big = big(m);
            let cap = params.floor_log_q(&m_big);
            let run = run_fast(&mut table, &m_big, cap, EvalMode::Exact).unwrap();
            let seq = run.b_sequence();
            let value_at =
                |b: u64| zeta(&params, &m_big, b).unwrap().value(&params);
            for window in seq.windows(2) {
                let (lo, hi) = (window[0], window[1]);
                let base = value_at(lo);
                assert!(value_at(hi) > base, "m={m}");
                for b in lo + 1..hi {
                    assert!(value_at(b) <= base, "m={m} b={b}");
                }
            }
            let last = *seq.last().unwrap();
            let final_value = value_at(last);
            for b in last + 1..=cap {
                assert!(value_at(b) <= final_value, "m={m} tail b={b}");
            }
        }
    }

    #[test]
    fn iteration_count_stays_within_the_doubling_bound() {
        let pairs = [(2u64, 3u64), (2, 5), (3, 5)];
        for (p, q) in pairs {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            let mut spots: Vec<BigUint> = (1u64..=5000).map(big).collect();
            for k in 1..=12u32 {
                spots.push(BigUint::from(10u32).pow(k));
            }
            spots.push(BigUint::from(10u32).pow(100u32));
            for m in spots {
                let cap = params.floor_log_q(&m);
                let bound = if cap == 0 { 1 } else { 2 + cap.ilog2() as u64 };
                for mode in MODES {
                    let run = run_fast(&mut table, &m, cap, mode).unwrap();
                    assert!(
                        run.iterations <= bound,
                        "({p},{q}) m={m} {mode:?}: {} > {bound}",
                        run.iterations
                    );
                }
            }
        }
    }

    #[test]
    fn representation_reference_cases() {
        let mut table = t23();
        assert_eq!(kn_representation(&mut table, 6).unwrap(), vec![(2, 3)]);
        assert_eq!(kn_representation(&mut table, 1).unwrap(), vec![(1, 1)]);
        let rep = kn_representation(&mut table, 19).unwrap();
        assert_eq!(rep.iter().map(|(t, c)| t * c).sum::<u64>(), 19);
        for n in 1u64..=400 {
            let rep = kn_representation(&mut table, n).unwrap();
            assert_eq!(
                rep.iter().map(|(t, c)| t * c).sum::<u64>(),
                n,
                "sum for {n}"
            );
            for (term, _) in &rep {
                let below = table.last_below_leq(*term).unwrap();
                assert_eq!(below.k, *term, "{term} not a stream term");
            }
        }
        // A second pair as a smoke check on the aggregation.
        let mut table = ConvergentTable::new(Params::new(2, 5).unwrap());
        let rep = kn_representation(&mut table, 23).unwrap();
        assert_eq!(rep.iter().map(|(t, c)| t * c).sum::<u64>(), 23);
    }

    #[test]
    fn weight_stays_under_the_witness_ratio_bound() {
        // (p-1) G(m) < p y_m, the exact form of G(m)/m < p/(p-1).
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            let spots = (1u64..=2000).chain([59049, 100_000, 999_983]);
            for m in spots {
                let m_big = big(m);
                let y = y_fast(&mut table, &m_big, EvalMode::Exact).unwrap();
                let g = h(&params, y.a, y.b);
                assert!(
                    (params.p() - 1) * &g < params.p() * y.value(&params),
                    "({p},{q}) m={m}"
                );
            }
        }
    }
}
