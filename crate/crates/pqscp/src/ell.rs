//! The boundary sequence `l_b` and its fast evaluation.
//!
//! `l_b` is the least `p`-exponent that makes `p^a q^b` the *unique*
//! witness of its own weight: `Y_(p^a q^b) = {p^a q^b}` iff `a >= l_b`.
//! The sequence starts at `l_0 = 0`, is non-decreasing and unbounded, and
//! changes value only at terms of the best-from-below stream `(K_n)` of
//! `rho = log_p q`.
//!
//! Everything here revolves around four functions:
//!
//! * `phi(a, b)`, the threshold `-log_p(1 - r/p^a (1 - q^-b))` that a
//!   fractional part `{b rho}` must undercut for the witness to split;
//! * `beta(a) = min{j : {j rho} < phi(a, j)}`, the next jump index, scanned
//!   over the `(K_n)` stream only (minimality is attained there);
//! * `alpha(b)`, whose floor is the value `l_b` takes at a stream term,
//!   certified by the cleared integer inequality
//!   `p^f (q-1)(q^b - p^floor(b rho)) <= (q-p)(q^b - 1)`;
//! * `alpha_plus(b)`, a cheap logarithmic proxy for `alpha` whose proven
//!   overshoot window lets most floors be read off without touching the
//!   big powers at all.
//!
//! From these, `ell_value` reads `l_b` by bracketing `b` in the mediant
//! grid, `jump_indices` iterates `beta`, and `m_ell` runs the two-phase
//! search for `max{b : p^(l_b) q^b <= m}` — the quantity the fast witness
//! algorithm needs as its exponent budget.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::certified::{ln_interval, ln_of_interval, ln_u64_interval, CertifiedSign, FixInterval};
use crate::contfrac::{BelowTerm, ConvergentTable};
use crate::error::{Error, Result};
use crate::params::Params;

/// Starting precision for certified comparisons.
const BASE_PREC: u32 = 96;

/// Give up escalating interval precision beyond this and fall back to
/// exact integer arithmetic.
const MAX_PREC: u32 = 4096;

/// Largest exponent we are willing to materialize as an exact power.
const MAX_EXACT_EXPONENT: u64 = 1 << 20;

/// How many terms of the `(K_n)` stream a single `beta` search may scan.
const MAX_BETA_TERMS: usize = 512;

fn require_positive(m: &BigUint) -> Result<()> {
    if m.is_zero() {
        Err(Error::OutOfRange(
            "m must be at least 1 (weights are defined on positive integers)".into(),
        ))
    } else {
        Ok(())
    }
}

/// The splitting threshold `phi_(a,b) = -log_p(1 - r/p^a (1 - q^-b))`,
/// as a certified interval. `phi_(a,0) = 0`; increasing in `b`,
/// decreasing in `a`.
pub fn phi(params: &Params, a: u64, b: u64, prec: u32) -> Result<FixInterval> {
    if b == 0 {
        return Ok(FixInterval::zero(prec));
    }
    if a > MAX_EXACT_EXPONENT {
        return Err(Error::BudgetExceeded(format!(
            "phi exponent a = {a} exceeds the power materialization cap"
        )));
    }
    let work = prec + 16;
    // Enclose q^-b: exact ratio while q^b is near working precision; once
    // q^b > 2^(work+8) the tail is invisible at this precision and [0, ulp]
    // is a valid enclosure (q >= 3 > 2).
    let qinv = if b <= work as u64 + 8 {
        FixInterval::from_ratio(
            &BigInt::one(),
            &BigInt::from(params.pow_q(b)),
            work + 8,
        )
    } else {
        FixInterval::from_scaled(BigInt::zero(), BigInt::one(), work + 8)
    };
    let one = FixInterval::from_bigint(BigInt::one(), work);
    let factor = one.sub(&qinv); // 1 - q^-b, inside (0, 1)
    let scaled_den = BigInt::from(params.r_den()) * BigInt::from(params.pow_p(a));
    let scale = FixInterval::from_ratio(&BigInt::from(params.r_num()), &scaled_den, work);
    // 1 - (r/p^a)(1 - q^-b) stays above 1 - r > 1/2, so the log is safe.
    let inner = one.sub(&scale.mul(&factor));
    let lnp = ln_u64_interval(params.p(), work);
    Ok(ln_of_interval(&inner, work).neg().div(&lnp).round_to(prec))
}

/// Numerator and denominator of the exact rational inside `phi`:
/// `1 - r/p^a (1 - q^-b) = num / den`.
fn phi_fraction(params: &Params, a: u64, b: u64) -> Result<(BigUint, BigUint)> {
    if a > MAX_EXACT_EXPONENT || b > MAX_EXACT_EXPONENT {
        return Err(Error::BudgetExceeded(format!(
            "exact phi comparison at (a, b) = ({a}, {b}) exceeds the power cap"
        )));
    }
    let qb = params.pow_q(b);
    let den = BigUint::from(params.r_den()) * params.pow_p(a) * &qb;
    let num = &den - BigUint::from(params.r_num()) * (&qb - 1u32);
    Ok((num, den))
}

/// Decides `{K rho} < phi_(a,K)` for a stream term, escalating interval
/// precision and finishing with the cleared exact comparison
/// `q^K num < p^H den` if the margins stay too thin.
fn frac_below_phi(table: &mut ConvergentTable, a: u64, term: &BelowTerm) -> Result<bool> {
    let params = *table.params();
    let mut prec = BASE_PREC;
    loop {
        let frac = table.frac_k(term.s, term.t, prec)?;
        let threshold = phi(&params, a, term.k, prec)?;
        match threshold.sub(&frac).sign() {
            CertifiedSign::Positive => return Ok(true),
            CertifiedSign::Negative | CertifiedSign::Zero => return Ok(false),
            CertifiedSign::Unknown => {}
        }
        if prec >= MAX_PREC {
            break;
        }
        prec *= 2;
    }
    if term.h > MAX_EXACT_EXPONENT {
        return Err(Error::BudgetExceeded(format!(
            "exact phi comparison at K = {} exceeds the power cap",
            term.k
        )));
    }
    let (num, den) = phi_fraction(&params, a, term.k)?;
    Ok(params.pow_q(term.k) * num < params.pow_p(term.h) * den)
}

/// The next jump index after the sequence has reached value `a`:
/// `beta(a) = min{j >= 1 : {j rho} < phi_(a,j)}`, scanned over the
/// `(K_n)` stream where the minimum is attained.
pub fn beta(table: &mut ConvergentTable, a: u64) -> Result<u64> {
    for n in 0..MAX_BETA_TERMS {
        let term = table.below_term(n)?;
        if frac_below_phi(table, a, &term)? {
            return Ok(term.k);
        }
    }
    Err(Error::BudgetExceeded(format!(
        "beta({a}) not found within {MAX_BETA_TERMS} stream terms"
    )))
}

/// A certified value of `alpha` together with its exact floor.
#[derive(Debug, Clone)]
pub struct Alpha {
    /// Certified enclosure of `alpha(b)`.
    pub value: FixInterval,
    /// `floor(alpha(b))`, decided by exact integer inequalities
    /// (negative values occur off the stream grid).
    pub floor: i64,
}

/// Exact `floor(log_p(num/den))` for positive integers, by power
/// comparisons only; negative when `num < den`.
fn floor_log_ratio(params: &Params, num: &BigUint, den: &BigUint) -> i64 {
    if num >= den {
        // p^f <= num/den  <=>  p^f <= floor(num/den).
        params.floor_log_p(&(num / den)) as i64
    } else {
        // f = -k with k minimal such that den <= p^k num.
        let mut k = params.floor_log_p(&(den / num));
        while params.pow_p(k) * num < *den {
            k += 1;
        }
        -(k as i64)
    }
}

/// `alpha(b) = log_p((q-p)(q^b - 1) / ((q-1)(q^b - p^floor(b rho))))` for
/// `b >= 1`, with the floor certified exactly.
///
/// This is the direct route: it materializes `q^b`, so it is meant for
/// moderate `b`; the stream-indexed [`alpha_floor_at`] avoids the big
/// powers whenever the proxy window already decides the floor.
pub fn alpha(params: &Params, b: u64, prec: u32) -> Result<Alpha> {
    if b == 0 {
        return Err(Error::OutOfRange("alpha is defined for b >= 1".into()));
    }
    if b > MAX_EXACT_EXPONENT {
        return Err(Error::BudgetExceeded(format!(
            "alpha({b}) exceeds the power materialization cap"
        )));
    }
    let qb = params.pow_q(b);
    let hfloor = params.floor_log_p(&qb);
    let num = BigUint::from(params.q() - params.p()) * (&qb - 1u32);
    let den = BigUint::from(params.q() - 1) * (&qb - params.pow_p(hfloor));
    let floor = floor_log_ratio(params, &num, &den);
    let work = prec + 16;
    let lnp = ln_u64_interval(params.p(), work);
    let value = ln_interval(&num, work)
        .sub(&ln_interval(&den, work))
        .div(&lnp)
        .round_to(prec);
    Ok(Alpha { value, floor })
}

/// `(k, h)` of the mediant `k_(2s) + t k_(2s+1)` with checked arithmetic.
fn mediant_kh(table: &mut ConvergentTable, s: usize, t: u64) -> Result<(u64, u64)> {
    let a_next = table.quotient(2 * s + 2)?;
    if t > a_next {
        return Err(Error::OutOfRange(format!(
            "mediant offset t = {t} exceeds a_(2s+2) = {a_next} at level {s}"
        )));
    }
    let combine = |even: u64, odd: u64| -> Result<u64> {
        t.checked_mul(odd)
            .and_then(|prod| even.checked_add(prod))
            .ok_or_else(|| {
                Error::BudgetExceeded("mediant exponent exceeds the u64 range".into())
            })
    };
    let k = combine(table.k(2 * s)?, table.k(2 * s + 1)?)?;
    let h = combine(table.h(2 * s)?, table.h(2 * s + 1)?)?;
    Ok((k, h))
}

/// Certified `{b rho}` at the mediant `(s, t)`, escalated until the
/// enclosure is strictly positive.
fn positive_frac(table: &mut ConvergentTable, s: usize, t: u64, prec: u32) -> Result<FixInterval> {
    let mut work = prec;
    loop {
        let frac = table.frac_k(s, t, work)?;
        if frac.sign() == CertifiedSign::Positive {
            return Ok(frac);
        }
        if work >= MAX_PREC {
            return Err(Error::BudgetExceeded(
                "could not separate a fractional part from zero".into(),
            ));
        }
        work *= 2;
    }
}

/// The proxy formula given an enclosure of `{b rho}`.
fn alpha_plus_from_frac(params: &Params, frac: &FixInterval, work: u32) -> FixInterval {
    let lnp = ln_u64_interval(params.p(), work);
    let constant = ln_u64_interval(params.q() - params.p(), work)
        .sub(&ln_u64_interval(params.q() - 1, work))
        .sub(&ln_of_interval(&lnp, work));
    let main = constant.sub(&ln_of_interval(frac, work)).div(&lnp);
    main.add(&frac.div_int(&BigInt::from(2)))
}

/// The cheap proxy
/// `alpha_plus(b) = log_p((q-p)/((q-1) ln p)) + log_p(1/{b rho}) + {b rho}/2`,
/// certified. At stream terms it overshoots `alpha(b)` by less than
/// [`alpha_plus_error_bound`].
pub fn alpha_plus(table: &mut ConvergentTable, b: u64, prec: u32) -> Result<FixInterval> {
    if b == 0 {
        return Err(Error::OutOfRange("alpha_plus is defined for b >= 1".into()));
    }
    let params = *table.params();
    let work = prec + 16;
    // Stream terms get their fractional part from the epsilon identities;
    // anything else goes through b * rho with exact floor(b rho).
    let term = table.last_below_leq(b)?;
    if term.k == b {
        let frac = positive_frac(table, term.s, term.t, work)?;
        return Ok(alpha_plus_from_frac(&params, &frac, work).round_to(prec));
    }
    if b > MAX_EXACT_EXPONENT {
        return Err(Error::BudgetExceeded(format!(
            "alpha_plus({b}) off the stream grid exceeds the power cap"
        )));
    }
    let hfloor = params.floor_log_p(&params.pow_q(b));
    let mut work = work + 64 - b.leading_zeros();
    loop {
        let rho = table.rho_certified(work);
        let frac = rho
            .mul_int(&BigInt::from(b))
            .sub(&FixInterval::from_bigint(BigInt::from(hfloor), work));
        if frac.sign() == CertifiedSign::Positive {
            return Ok(alpha_plus_from_frac(&params, &frac, work).round_to(prec));
        }
        if work >= MAX_PREC {
            return Err(Error::BudgetExceeded(
                "could not separate {b rho} from zero".into(),
            ));
        }
        work *= 2;
    }
}

/// Proven upper bound on the overshoot `alpha_plus(K) - alpha(K)` at the
/// stream term `K = k_(2s) + t k_(2s+1)`:
///
/// `(ln p)/6 {K rho}^2 + 1/((q^K - 1) ln p)`.
///
/// Both pieces come from elementary series bounds (`ln(sinh u / u) <
/// 2u^2/3` with `u = {K rho} (ln p)/2`, and `-ln(1-x) < x/(1-x)`); the
/// `1/ln p` factor on the tail matters when `p = 2`, where dropping it
/// already fails at `(2,3), K = 2`.
pub fn alpha_plus_error_bound(
    table: &mut ConvergentTable,
    s: usize,
    t: u64,
    prec: u32,
) -> Result<FixInterval> {
    let params = *table.params();
    let work = prec + 16;
    let (k, _) = mediant_kh(table, s, t)?;
    let frac = positive_frac(table, s, t, work)?;
    let lnp = ln_u64_interval(params.p(), work);
    let quad = lnp.mul(&frac).mul(&frac).div_int(&BigInt::from(6));
    let tail = if k <= 128 {
        let denom = BigInt::from(params.pow_q(k)) - 1;
        FixInterval::from_ratio(&BigInt::one(), &denom, work)
    } else {
        // 1/(q^K - 1) <= 2^-K for q >= 3; clamp the shift to the working
        // precision (the true value only shrinks further).
        let shift = (k - 1).min(work as u64) as u32;
        FixInterval::from_scaled(BigInt::zero(), BigInt::one() << (work - shift), work)
    };
    Ok(quad.add(&tail.div(&lnp)).round_to(prec))
}

/// The floor at a stream term is a pure function of `(p, q, K)`, and the
/// same few terms are hit constantly by `ell_value` and `m_ell`, so the
/// results are memoized process-wide.
static FLOOR_CACHE: Lazy<Mutex<HashMap<(u64, u64, u64), i64>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// `floor(alpha(K))` at the stream term `K = k_(2s) + t k_(2s+1)`.
///
/// First tries to read the floor from the proxy window
/// `(alpha_plus - bound, alpha_plus)` at two precisions — this touches no
/// big powers, so it works for arbitrarily deep stream terms. Only when
/// the window straddles an integer (as it must when `alpha` is exactly
/// integral) does it fall back to the cleared integer inequality.
pub fn alpha_floor_at(table: &mut ConvergentTable, s: usize, t: u64) -> Result<i64> {
    let params = *table.params();
    let key = (params.p(), params.q(), mediant_kh(table, s, t)?.0);
    if let Some(&hit) = FLOOR_CACHE.lock().unwrap().get(&key) {
        return Ok(hit);
    }
    let floor = alpha_floor_at_uncached(table, s, t)?;
    FLOOR_CACHE.lock().unwrap().insert(key, floor);
    Ok(floor)
}

fn alpha_floor_at_uncached(table: &mut ConvergentTable, s: usize, t: u64) -> Result<i64> {
    let params = *table.params();
    for prec in [BASE_PREC, 4 * BASE_PREC] {
        let plus = alpha_plus_at(table, s, t, prec)?;
        let bound = alpha_plus_error_bound(table, s, t, prec)?;
        let lower = plus.sub(&bound);
        let hull = FixInterval::from_scaled(
            lower.lo_scaled().clone(),
            plus.hi_scaled().clone(),
            prec,
        );
        if let Some(f) = hull.floor_if_determined() {
            return Ok(i64::try_from(f).expect("alpha floor fits a machine word"));
        }
    }
    let (k, h) = mediant_kh(table, s, t)?;
    if k > MAX_EXACT_EXPONENT {
        return Err(Error::BudgetExceeded(format!(
            "exact alpha floor at K = {k} exceeds the power cap"
        )));
    }
    let qb = params.pow_q(k);
    let num = BigUint::from(params.q() - params.p()) * (&qb - 1u32);
    let den = BigUint::from(params.q() - 1) * (&qb - params.pow_p(h));
    Ok(floor_log_ratio(&params, &num, &den))
}

/// `alpha_plus` addressed by stream coordinates.
fn alpha_plus_at(table: &mut ConvergentTable, s: usize, t: u64, prec: u32) -> Result<FixInterval> {
    let params = *table.params();
    let work = prec + 16;
    let frac = positive_frac(table, s, t, work)?;
    Ok(alpha_plus_from_frac(&params, &frac, work).round_to(prec))
}

/// `l_b` by the mediant bracketing: locate the largest stream term
/// `K <= b` and return `floor(alpha(K))`.
pub fn ell_value(table: &mut ConvergentTable, b: u64) -> Result<u64> {
    if b == 0 {
        return Ok(0);
    }
    let term = table.last_below_leq(b)?;
    let floor = alpha_floor_at(table, term.s, term.t)?;
    assert!(
        floor >= 0,
        "l_{b} evaluated negative ({floor}) at stream term {}",
        term.k
    );
    Ok(floor as u64)
}

/// One jump of the boundary sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jump {
    /// Index `j_k` where the sequence changes (always a stream term).
    pub index: u64,
    /// The new value `l_(j_k)`.
    pub value: u64,
}

/// The jump after the sequence has reached `current_value`.
fn next_jump(table: &mut ConvergentTable, current_value: u64) -> Result<Jump> {
    let index = beta(table, current_value)?;
    let term = table.last_below_leq(index)?;
    debug_assert_eq!(term.k, index, "beta must return stream terms");
    let floor = alpha_floor_at(table, term.s, term.t)?;
    assert!(floor >= 0, "jump value evaluated negative at {index}");
    Ok(Jump {
        index,
        value: floor as u64,
    })
}

/// The first `count` jumps, by the iteration `j_0 = beta(0)`,
/// `j_(k+1) = beta(l_(j_k))`. Indices and values are checked to be
/// strictly increasing — a violation means the tables are inconsistent
/// and panics rather than returning garbage.
pub fn jump_indices(table: &mut ConvergentTable, count: usize) -> Result<Vec<Jump>> {
    let mut jumps: Vec<Jump> = Vec::with_capacity(count);
    let mut value = 0u64;
    while jumps.len() < count {
        let jump = next_jump(table, value)?;
        if let Some(prev) = jumps.last() {
            assert!(
                jump.index > prev.index && jump.value > prev.value,
                "jump iteration failed to advance: {prev:?} then {jump:?}"
            );
        }
        value = jump.value;
        jumps.push(jump);
    }
    Ok(jumps)
}

/// Cached prefix of the boundary sequence, driven by the jump iteration.
///
/// `l_0 = 0` is the origin; every later value is the value of the last
/// jump at or before `b`. This is the construction-side route; it should
/// (and in tests does) agree with [`ell_value`]'s bracketing route.
#[derive(Debug, Clone)]
pub struct EllTable {
    table: ConvergentTable,
    jumps: Vec<Jump>,
}

impl EllTable {
    /// An empty table for one parameter pair.
    pub fn new(params: Params) -> Self {
        EllTable {
            table: ConvergentTable::new(params),
            jumps: Vec::new(),
        }
    }

    /// The validated base pair.
    pub fn params(&self) -> &Params {
        self.table.params()
    }

    /// The underlying convergent table.
    pub fn convergents(&mut self) -> &mut ConvergentTable {
        &mut self.table
    }

    /// Jumps computed so far.
    pub fn known_jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// Extends the jump list to at least `count` entries.
    pub fn ensure_jumps(&mut self, count: usize) -> Result<&[Jump]> {
        while self.jumps.len() < count {
            let value = self.jumps.last().map_or(0, |j| j.value);
            let jump = next_jump(&mut self.table, value)?;
            if let Some(prev) = self.jumps.last() {
                assert!(
                    jump.index > prev.index && jump.value > prev.value,
                    "jump iteration failed to advance: {prev:?} then {jump:?}"
                );
            }
            self.jumps.push(jump);
        }
        Ok(&self.jumps[..count])
    }

    /// `l_b` via the jump list.
    pub fn ell(&mut self, b: u64) -> Result<u64> {
        while self.jumps.last().map_or(true, |j| j.index <= b) {
            let count = self.jumps.len() + 1;
            self.ensure_jumps(count)?;
        }
        Ok(self
            .jumps
            .iter()
            .rev()
            .find(|j| j.index <= b)
            .map_or(0, |j| j.value))
    }
}

/// `m_ell = max{b : p^(l_b) q^b <= m}` — the exponent budget for the
/// witness search — by the two-phase stream walk.
///
/// Phase 1 steps the even convergents while their boundary point still
/// fits under `m`; phase 2 binary-searches the mediant offset inside the
/// last passing level, clamped so the searched mediants never exceed
/// `floor(log_q m)`. The answer extends past the last passing stream term
/// `K*` through its constant plateau: `min(floor(log_q(m / p^(l*))),
/// K_next - 1)`, both floors exact. The clamp to `K_next - 1` matters: the
/// plateau formula alone overshoots whenever the jump at `K_next` is what
/// actually stops the growth.
pub fn m_ell(table: &mut ConvergentTable, m: &BigUint) -> Result<u64> {
    require_positive(m)?;
    let params = *table.params();
    let cap_b = params.floor_log_q(m);
    if cap_b == 0 {
        return Ok(0);
    }
    if !mell_pred(table, m, 0, 0)? {
        return Ok(0);
    }
    // Phase 1: largest level whose principal convergent still passes.
    let mut s = 0usize;
    loop {
        let k_next = table.k(2 * (s + 1))?;
        if k_next > cap_b || !mell_pred(table, m, s + 1, 0)? {
            break;
        }
        s += 1;
    }
    // Phase 2: binary search of the mediant offset, clamped under cap_b.
    let a_next = table.quotient(2 * s + 2)?;
    let k_even = table.k(2 * s)?;
    let k_odd = table.k(2 * s + 1)?;
    let t_hi = ((cap_b - k_even) / k_odd).min(a_next - 1);
    let (mut lo, mut hi) = (0u64, t_hi);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if mell_pred(table, m, s, mid)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let (k_star, _) = mediant_kh(table, s, lo)?;
    let floor = alpha_floor_at(table, s, lo)?;
    assert!(floor >= 0, "boundary value negative at stream term {k_star}");
    let ell_star = floor as u64;
    let k_next_term = if lo < a_next - 1 {
        k_star + k_odd
    } else {
        table.k(2 * s + 2)?
    };
    let reduced = m / params.pow_p(ell_star);
    let plateau_end = params.floor_log_q(&reduced);
    Ok(plateau_end.min(k_next_term - 1))
}

/// Does the boundary point at the mediant `(s, t)` fit under `m`?
fn mell_pred(table: &mut ConvergentTable, m: &BigUint, s: usize, t: u64) -> Result<bool> {
    let params = *table.params();
    let (k, _) = mediant_kh(table, s, t)?;
    let floor = alpha_floor_at(table, s, t)?;
    assert!(floor >= 0, "boundary value negative at stream term {k}");
    Ok(params.pow_p(floor as u64) * params.pow_q(k) <= *m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::LatticePoint;
    use crate::frontier::y_set;

    fn p23() -> Params {
        Params::new(2, 3).unwrap()
    }

    fn t23() -> ConvergentTable {
        ConvergentTable::new(p23())
    }

    #[test]
    fn phi_reference_values() {
        let params = p23();
        assert_eq!(phi(&params, 0, 0, 96).unwrap().sign(), CertifiedSign::Zero);
        assert_eq!(phi(&params, 5, 0, 96).unwrap().sign(), CertifiedSign::Zero);
        let v = phi(&params, 0, 2, 96).unwrap().to_f64();
        assert!((v - (9f64 / 7.0).log2()).abs() < 1e-9, "phi(0,2) = {v}");
        let v = phi(&params, 2, 1, 96).unwrap().to_f64();
        assert!((v - (24f64 / 23.0).log2()).abs() < 1e-9, "phi(2,1) = {v}");
    }

    #[test]
    fn phi_monotone_in_b_antitone_in_a() {
        let params = p23();
        for a in 0..4 {
            let mut prev = phi(&params, a, 0, 128).unwrap();
            for b in 1..8 {
                let cur = phi(&params, a, b, 128).unwrap();
                assert!(
                    cur.lo_scaled() > prev.hi_scaled(),
                    "phi not strictly increasing at a={a}, b={b}"
                );
                prev = cur;
            }
        }
        for b in 1..6 {
            let shallow = phi(&params, 0, b, 128).unwrap();
            let deep = phi(&params, 3, b, 128).unwrap();
            assert!(deep.hi_scaled() < shallow.lo_scaled(), "b={b}");
        }
    }

    #[test]
    fn beta_values() {
        let mut table = t23();
        assert_eq!(beta(&mut table, 0).unwrap(), 2);
        assert_eq!(beta(&mut table, 2).unwrap(), 12);
        assert_eq!(beta(&mut table, 5).unwrap(), 53);
        assert_eq!(beta(&mut table, 7).unwrap(), 359);
    }

    #[test]
    fn alpha_reference_floors() {
        let params = p23();
        let a2 = alpha(&params, 2, 96).unwrap();
        assert_eq!(a2.floor, 2);
        // alpha(2) = 2 exactly: the enclosure must contain the integer.
        let two = BigInt::from(2) << 96;
        assert!(a2.value.lo_scaled() <= &two && &two <= a2.value.hi_scaled());
        assert_eq!(alpha(&params, 1, 96).unwrap().floor, 0);
        assert_eq!(alpha(&params, 7, 96).unwrap().floor, 2);
        assert_eq!(alpha(&params, 12, 96).unwrap().floor, 5);
        // Off the stream grid the floor can go negative.
        let p35 = Params::new(3, 5).unwrap();
        assert_eq!(alpha(&p35, 2, 96).unwrap().floor, -1);
        assert!(matches!(
            alpha(&params, 0, 96),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn stream_floor_matches_direct_alpha() {
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5), (3, 7), (5, 7)] {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            for n in 0..9 {
                let term = table.below_term(n).unwrap();
                let fast = alpha_floor_at(&mut table, term.s, term.t).unwrap();
                let slow = alpha(&params, term.k, 96).unwrap().floor;
                assert_eq!(fast, slow, "({p},{q}) K = {}", term.k);
            }
        }
    }

    #[test]
    fn alpha_plus_overshoot_is_positive_and_bounded() {
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            for n in 0..8 {
                let term = table.below_term(n).unwrap();
                let direct = alpha(&params, term.k, 256).unwrap();
                let plus = alpha_plus(&mut table, term.k, 256).unwrap();
                let bound = alpha_plus_error_bound(&mut table, term.s, term.t, 256).unwrap();
                let overshoot = plus.sub(&direct.value);
                assert!(
                    overshoot.lo_scaled() > &BigInt::zero(),
                    "({p},{q}) K={}: overshoot not certified positive",
                    term.k
                );
                let slack = bound.sub(&overshoot);
                assert!(
                    slack.lo_scaled() > &BigInt::zero(),
                    "({p},{q}) K={}: overshoot not certified under the bound",
                    term.k
                );
            }
        }
    }

    #[test]
    fn ell_prefix_and_plateaus() {
        let mut table = t23();
        let want = [0u64, 0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 5];
        for (b, &w) in want.iter().enumerate() {
            assert_eq!(ell_value(&mut table, b as u64).unwrap(), w, "b = {b}");
        }
        assert_eq!(ell_value(&mut table, 52).unwrap(), 5);
        assert_eq!(ell_value(&mut table, 53).unwrap(), 7);
        assert_eq!(ell_value(&mut table, 358).unwrap(), 7);
        assert_eq!(ell_value(&mut table, 359).unwrap(), 8);
    }

    #[test]
    fn ell_matches_frontier_witness_oracle() {
        // l_b = min{a : Y_(p^a q^b) = {p^a q^b}}, read off the frontier.
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            for b in 0..=12 {
                let mut a = 0u64;
                let want = loop {
                    let m = params.part_value(a, b);
                    if y_set(&params, &m).unwrap() == vec![LatticePoint::new(a, b)] {
                        break a;
                    }
                    a += 1;
                    assert!(a < 64, "({p},{q}) b={b}: witness never became unique");
                };
                assert_eq!(
                    ell_value(&mut table, b).unwrap(),
                    want,
                    "({p},{q}) b = {b}"
                );
            }
        }
    }

    #[test]
    fn jumps_by_beta_iteration() {
        let mut table = t23();
        let jumps = jump_indices(&mut table, 4).unwrap();
        assert_eq!(jumps[0], Jump { index: 2, value: 2 });
        assert_eq!(jumps[1], Jump { index: 12, value: 5 });
        assert_eq!(jumps[2], Jump { index: 53, value: 7 });
        assert_eq!(jumps[3], Jump { index: 359, value: 8 });
        // Every jump index is a term of the stream.
        for jump in &jumps {
            let term = table.last_below_leq(jump.index).unwrap();
            assert_eq!(term.k, jump.index, "jump at {} off the stream", jump.index);
        }
    }

    #[test]
    fn jump_route_agrees_with_bracketing_route() {
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut by_jumps = EllTable::new(params);
            let mut by_bracket = ConvergentTable::new(params);
            for b in 0..=80 {
                assert_eq!(
                    by_jumps.ell(b).unwrap(),
                    ell_value(&mut by_bracket, b).unwrap(),
                    "({p},{q}) b = {b}"
                );
            }
        }
    }

    #[test]
    fn m_ell_values() {
        let mut table = t23();
        assert_eq!(m_ell(&mut table, &BigUint::from(750u32)).unwrap(), 4);
        assert_eq!(m_ell(&mut table, &BigUint::from(729u32)).unwrap(), 4);
        assert_eq!(m_ell(&mut table, &BigUint::from(1u32)).unwrap(), 0);
        // The plateau formula alone would give 13 here; the clamp to the
        // next stream term is what makes the answer right.
        assert_eq!(
            m_ell(&mut table, &BigUint::from(17_000_000u64)).unwrap(),
            11
        );
        assert!(matches!(
            m_ell(&mut table, &BigUint::zero()),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn m_ell_defining_inequality() {
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut table = ConvergentTable::new(params);
            let spots = (1u64..=2000).chain([5_000, 100_000, 17_000_000, 10_000_000_000]);
            for m in spots {
                let m_big = BigUint::from(m);
                let b = m_ell(&mut table, &m_big).unwrap();
                let at = ell_value(&mut table, b).unwrap();
                assert!(
                    params.pow_p(at) * params.pow_q(b) <= m_big,
                    "({p},{q}) m={m}: boundary point at b={b} does not fit"
                );
                let above = ell_value(&mut table, b + 1).unwrap();
                assert!(
                    params.pow_p(above) * params.pow_q(b + 1) > m_big,
                    "({p},{q}) m={m}: b={b} is not maximal"
                );
            }
        }
    }
}
