//! Continued-fraction expansion of `rho = log_p q`, certified digit by digit.
//!
//! Partial quotients are first guessed from certified interval arithmetic on
//! `rho = ln q / ln p`, then proven correct by exact big-integer power
//! comparisons: `h/k < rho` if and only if `p^h < q^k`, and the digit
//! `a_(i+1) = floor(eps_(i-1)/eps_i)` is the largest `c` for which the
//! semiconvergent `(h_(i-1)+c h_i)/(k_(i-1)+c k_i)` still lies on the far
//! side of `rho`. Two power comparisons (at `c` and `c+1`) therefore certify
//! each digit unconditionally; if the interval guess ever failed, a plain
//! exponential-plus-binary search over the same exact test would take over.
//!
//! Besides the principal convergents `h_i/k_i`, the table serves the merged
//! stream of even convergents and their mediants,
//! `k_(2s,t) = k_(2s) + t k_(2s+1)`, which is exactly the sequence of best
//! rational approximations of `rho` from below.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};

use crate::certified::{ln_u64_interval, CertifiedSign, FixInterval};
use crate::error::{Error, Result};
use crate::params::Params;

/// Largest exponent for which we are willing to materialize `p^h` / `q^k`
/// in a certification comparison (a few megabytes at typical bases).
const MAX_CERT_EXPONENT: u64 = 1 << 22;

/// Below this exponent the power comparison is always used directly; above
/// it we first try an interval certificate (partial quotients can be large —
/// `log_2 5` has 176 as its twelfth quotient, putting semiconvergent
/// exponents in the millions where powering costs seconds).
const POWER_CERT_EXPONENT: u64 = 1 << 14;

/// Hard cap on the number of partial quotients. Convergent denominators grow
/// at least as fast as Fibonacci numbers, so `u64` overflows long before
/// this depth; the cap only guards pathological loops.
const MAX_DEPTH: usize = 256;

/// Starting precision for interval digit guesses.
const GUESS_PREC: u32 = 96;

/// Give up on interval guessing beyond this precision and switch to the
/// exact semiconvergent search.
const MAX_GUESS_PREC: u32 = 4096;

/// One term of the best-from-below stream `(H_n, K_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BelowTerm {
    /// Index in the merged stream.
    pub n: usize,
    /// `H_n = floor(K_n * rho)`.
    pub h: u64,
    /// The denominator `K_n`.
    pub k: u64,
    /// Level: `K_n = k_(2s) + t * k_(2s+1)`.
    pub s: usize,
    /// Mediant offset at that level; `t = 0` is the principal convergent
    /// `k_(2s)` itself.
    pub t: u64,
}

/// Lazily extended table of partial quotients and convergents of
/// `rho = log_p q`, with every digit certified exact.
#[derive(Debug, Clone)]
pub struct ConvergentTable {
    params: Params,
    a: Vec<u64>,
    h: Vec<u64>,
    k: Vec<u64>,
    rho_prec: u32,
    rho_cache: FixInterval,
}

impl ConvergentTable {
    /// Creates an empty table; digits are computed on demand.
    pub fn new(params: Params) -> Self {
        let rho_prec = GUESS_PREC;
        let rho_cache = certified_rho(&params, rho_prec);
        ConvergentTable {
            params,
            a: Vec::new(),
            h: Vec::new(),
            k: Vec::new(),
            rho_prec,
            rho_cache,
        }
    }

    /// Creates a table with at least `depth_budget` certified partial
    /// quotients.
    pub fn expand(params: Params, depth_budget: usize) -> Result<Self> {
        let mut table = ConvergentTable::new(params);
        table.ensure_depth(depth_budget)?;
        Ok(table)
    }

    /// The validated base pair.
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Number of certified partial quotients so far.
    pub fn depth(&self) -> usize {
        self.a.len()
    }

    /// Certified interval for `rho` of width at most `2^-prec`, from the
    /// logarithm intervals (no powering involved).
    pub fn rho_certified(&mut self, prec: u32) -> FixInterval {
        if self.rho_prec < prec {
            let target = prec.max(self.rho_prec * 2);
            self.rho_cache = certified_rho(&self.params, target);
            self.rho_prec = target;
        }
        self.rho_cache.round_to(prec)
    }

    /// Certified interval for `rho` of width at most `2^-bits`, obtained by
    /// bracketing between two consecutive convergents (which are themselves
    /// certified by exact power comparisons).
    pub fn rho_interval(&mut self, bits: u32) -> Result<FixInterval> {
        // |h_i/k_i - h_(i+1)/k_(i+1)| = 1/(k_i k_(i+1)); demand one extra bit
        // so the outward dyadic rounding below stays within 2^-bits.
        let mut i = 0usize;
        loop {
            self.ensure_depth(i + 2)?;
            let product = self.k[i] as u128 * self.k[i + 1] as u128;
            if bits < 127 && product >= (1u128 << (bits + 1)) {
                break;
            }
            if product >= u64::MAX as u128 {
                return Err(Error::BudgetExceeded(format!(
                    "rho bracketing to {bits} bits needs convergents beyond the table's range"
                )));
            }
            i += 1;
        }
        let prec = bits + 2;
        let a = FixInterval::from_ratio(
            &BigInt::from(self.h[i]),
            &BigInt::from(self.k[i]),
            prec,
        );
        let b = FixInterval::from_ratio(
            &BigInt::from(self.h[i + 1]),
            &BigInt::from(self.k[i + 1]),
            prec,
        );
        let lo = a.lo_scaled().min(b.lo_scaled()).clone();
        let hi = a.hi_scaled().max(b.hi_scaled()).clone();
        Ok(FixInterval::from_scaled(lo, hi, prec))
    }

    /// The partial quotient `a_i`.
    pub fn quotient(&mut self, i: usize) -> Result<u64> {
        self.ensure_depth(i + 1)?;
        Ok(self.a[i])
    }

    /// Convergent numerator `h_i`.
    pub fn h(&mut self, i: usize) -> Result<u64> {
        self.ensure_depth(i + 1)?;
        Ok(self.h[i])
    }

    /// Convergent denominator `k_i`.
    pub fn k(&mut self, i: usize) -> Result<u64> {
        self.ensure_depth(i + 1)?;
        Ok(self.k[i])
    }

    /// Certified interval for `eps_i = |k_i rho - h_i|` of width at most
    /// `2^-prec`.
    pub fn eps_interval(&mut self, i: usize, prec: u32) -> Result<FixInterval> {
        self.ensure_depth(i + 1)?;
        let k = self.k[i];
        let h = self.h[i];
        // width(k * rho) = k * width(rho): ask for enough bits of rho.
        let rho_prec = prec + 64 - (k.leading_zeros().min(63)) + 2;
        let rho = self.rho_certified(rho_prec);
        let signed = rho
            .mul_int(&BigInt::from(k))
            .sub(&FixInterval::from_bigint(BigInt::from(h), rho_prec));
        let eps = if i % 2 == 0 { signed } else { signed.neg() };
        Ok(eps.round_to(prec))
    }

    /// Certified `{k_(2s,t) * rho}` for `0 <= t <= a_(2s+2)`, evaluated by
    /// both defining identities
    ///
    /// ```text
    /// {k_(2s,t) rho} = eps_(2s) - t eps_(2s+1)
    ///                = eps_(2s+2) + (a_(2s+2) - t) eps_(2s+1)
    /// ```
    ///
    /// whose certified intervals must overlap; the intersection is returned.
    pub fn frac_k(&mut self, s: usize, t: u64, prec: u32) -> Result<FixInterval> {
        self.ensure_depth(2 * s + 3)?;
        let a_next = self.a[2 * s + 2];
        if t > a_next {
            return Err(Error::OutOfRange(format!(
                "mediant offset t = {t} exceeds a_(2s+2) = {a_next} at level s = {s}"
            )));
        }
        let work = prec + 8;
        let eps0 = self.eps_interval(2 * s, work)?;
        let eps1 = self.eps_interval(2 * s + 1, work)?;
        let eps2 = self.eps_interval(2 * s + 2, work)?;
        let first = eps0.sub(&eps1.mul_int(&BigInt::from(t)));
        let second = eps2.add(&eps1.mul_int(&BigInt::from(a_next - t)));
        let both = first.intersect(&second).ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "fractional-part identities disagree at s = {s}, t = {t} (precision fault)"
            ))
        })?;
        Ok(both.round_to(prec))
    }

    /// The `n`-th term of the best-from-below stream.
    pub fn below_term(&mut self, n: usize) -> Result<BelowTerm> {
        let mut seen = 0usize;
        let mut s = 0usize;
        loop {
            // Level s contributes a_(2s+2) terms: t = 0 .. a_(2s+2)-1.
            let count = self.quotient(2 * s + 2)? as usize;
            if n < seen + count {
                let t = (n - seen) as u64;
                return self.below_term_at(n, s, t);
            }
            seen += count;
            s += 1;
        }
    }

    fn below_term_at(&mut self, n: usize, s: usize, t: u64) -> Result<BelowTerm> {
        self.ensure_depth(2 * s + 2)?;
        let k = self.k[2 * s]
            .checked_add(t.checked_mul(self.k[2 * s + 1]).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        let h = self.h[2 * s]
            .checked_add(t.checked_mul(self.h[2 * s + 1]).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        Ok(BelowTerm { n, h, k, s, t })
    }

    /// The first `count` terms of the best-from-below stream.
    pub fn below_terms(&mut self, count: usize) -> Result<Vec<BelowTerm>> {
        (0..count).map(|n| self.below_term(n)).collect()
    }

    /// The last stream term with `K_n <= bound` (requires `bound >= 1`).
    pub fn last_below_leq(&mut self, bound: u64) -> Result<BelowTerm> {
        if bound == 0 {
            return Err(Error::OutOfRange(
                "no best-from-below denominator is <= 0".into(),
            ));
        }
        let mut n = 0usize;
        let mut last = self.below_term(0)?;
        loop {
            let next = self.below_term(n + 1)?;
            if next.k > bound {
                return Ok(last);
            }
            n += 1;
            last = next;
        }
    }

    /// Smallest level `s` whose even convergent satisfies `k_(2s) > bound`.
    pub fn level_with_k_exceeding(&mut self, bound: u64) -> Result<usize> {
        let mut s = 0usize;
        loop {
            if self.k(2 * s)? > bound {
                return Ok(s);
            }
            s += 1;
        }
    }

    /// Sign of `k * rho - h`: `Greater` iff `q^k > p^h`. Never `Equal` for
    /// `k >= 1` (rho is irrational); `k = h = 0` is Equal.
    ///
    /// Small exponents are decided by the exact power comparison. Large ones
    /// are decided by a certified interval for `k rho - h` at escalating
    /// precision (still a proof — the logarithm intervals are themselves
    /// certified), with the capped power comparison as a last resort.
    pub fn side(&mut self, h: u64, k: u64) -> Result<Ordering> {
        if h.max(k) <= POWER_CERT_EXPONENT {
            return side_sign(&self.params, h, k);
        }
        let mut prec = GUESS_PREC;
        loop {
            let rho = self.rho_certified(prec);
            let diff = rho
                .mul_int(&BigInt::from(k))
                .sub(&FixInterval::from_bigint(BigInt::from(h), prec));
            match diff.sign() {
                CertifiedSign::Positive => return Ok(Ordering::Greater),
                CertifiedSign::Negative => return Ok(Ordering::Less),
                CertifiedSign::Zero | CertifiedSign::Unknown => {}
            }
            if prec >= MAX_GUESS_PREC {
                return side_sign(&self.params, h, k);
            }
            prec = (prec * 2).min(MAX_GUESS_PREC);
        }
    }

    /// Extends the table to at least `upto` partial quotients.
    pub fn ensure_depth(&mut self, upto: usize) -> Result<()> {
        if upto > MAX_DEPTH {
            return Err(Error::BudgetExceeded(format!(
                "continued-fraction depth {upto} exceeds the cap of {MAX_DEPTH}"
            )));
        }
        while self.a.len() < upto {
            self.push_digit()?;
        }
        Ok(())
    }

    fn push_digit(&mut self) -> Result<()> {
        if self.a.is_empty() {
            // a_0 = floor(rho) = the largest a with p^a < q.
            let a0 = Params::floor_log(self.params.p(), &self.params.q_big());
            debug_assert!(a0 >= 1);
            self.a.push(a0);
            self.h.push(a0);
            self.k.push(1);
            return Ok(());
        }
        let i = self.a.len() - 1; // extracting a_(i+1)
        let (h_prev, k_prev) = if i == 0 {
            (1u64, 0u64)
        } else {
            (self.h[i - 1], self.k[i - 1])
        };
        let (h_cur, k_cur) = (self.h[i], self.k[i]);

        // test(c): c * eps_i <= eps_(i-1), decided by the side of rho the
        // semiconvergent falls on. The digit is the largest passing c.
        let digit = match self.guess_digit(i)? {
            Some(c) if self.semiconvergent_passes(i, c)? && !self.semiconvergent_passes(i, c + 1)? => c,
            _ => self.search_digit(i)?,
        };

        let h_next = digit
            .checked_mul(h_cur)
            .and_then(|x| x.checked_add(h_prev))
            .ok_or_else(overflow)?;
        let k_next = digit
            .checked_mul(k_cur)
            .and_then(|x| x.checked_add(k_prev))
            .ok_or_else(overflow)?;
        self.a.push(digit);
        self.h.push(h_next);
        self.k.push(k_next);
        Ok(())
    }

    /// Whether `c * eps_i <= eps_(i-1)`, by one certified side test.
    fn semiconvergent_passes(&mut self, i: usize, c: u64) -> Result<bool> {
        let (h_prev, k_prev) = if i == 0 {
            (1u64, 0u64)
        } else {
            (self.h[i - 1], self.k[i - 1])
        };
        let h = c
            .checked_mul(self.h[i])
            .and_then(|x| x.checked_add(h_prev))
            .ok_or_else(overflow)?;
        let k = c
            .checked_mul(self.k[i])
            .and_then(|x| x.checked_add(k_prev))
            .ok_or_else(overflow)?;
        // eps_(i-1) - c eps_i = (-1)^(i-1) (k rho - h): nonnegative exactly
        // when the sign of (k rho - h) is (-1)^(i+1).
        let side = self.side(h, k)?;
        Ok(if i % 2 == 0 {
            side == Ordering::Less
        } else {
            side == Ordering::Greater
        })
    }

    /// Interval guess for the next digit `floor(eps_(i-1)/eps_i)`, escalating
    /// precision until the floor is pinned or the budget runs out.
    fn guess_digit(&mut self, i: usize) -> Result<Option<u64>> {
        let mut prec = GUESS_PREC;
        loop {
            let eps_prev = if i == 0 {
                FixInterval::from_bigint(BigInt::one(), prec)
            } else {
                self.eps_interval(i - 1, prec)?
            };
            let eps_cur = self.eps_interval(i, prec)?;
            if eps_cur.lo_scaled() > &BigInt::from(0) {
                if let Some(floor) = eps_prev.div(&eps_cur).floor_if_determined() {
                    let c = u64::try_from(floor).map_err(|_| overflow())?;
                    return Ok(Some(c));
                }
            }
            if prec >= MAX_GUESS_PREC {
                return Ok(None);
            }
            prec *= 2;
        }
    }

    /// Exact fallback: exponential then binary search for the largest
    /// passing `c`. Never wrong, merely slower than a pinned guess.
    fn search_digit(&mut self, i: usize) -> Result<u64> {
        debug_assert!(
            self.semiconvergent_passes(i, 1)?,
            "every partial quotient is at least 1"
        );
        let mut hi = 2u64;
        while self.semiconvergent_passes(i, hi)? {
            hi = hi.checked_mul(2).ok_or_else(overflow)?;
        }
        let mut lo = hi / 2; // passes
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.semiconvergent_passes(i, mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

fn overflow() -> Error {
    Error::BudgetExceeded("continued-fraction data exceeds the 64-bit range".into())
}

/// `rho = ln q / ln p` as a certified interval of width well under
/// `2^-prec`.
fn certified_rho(params: &Params, prec: u32) -> FixInterval {
    let work = prec + 16;
    let ln_q = ln_u64_interval(params.q(), work);
    let ln_p = ln_u64_interval(params.p(), work);
    ln_q.div(&ln_p).round_to(prec)
}

/// Sign of `k * rho - h` via the exact equivalence with `q^k` vs `p^h`.
fn side_sign(params: &Params, h: u64, k: u64) -> Result<Ordering> {
    if h.max(k) > MAX_CERT_EXPONENT {
        return Err(Error::BudgetExceeded(format!(
            "certification power with exponent {} exceeds the cap of {MAX_CERT_EXPONENT}",
            h.max(k)
        )));
    }
    let qk: BigUint = Pow::pow(params.q_big(), k);
    let ph: BigUint = Pow::pow(params.p_big(), h);
    Ok(qk.cmp(&ph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::CertifiedSign;

    fn table23() -> ConvergentTable {
        ConvergentTable::new(Params::new(2, 3).unwrap())
    }

    #[test]
    fn partial_quotients_of_log2_3() {
        let mut t = table23();
        t.ensure_depth(7).unwrap();
        assert_eq!(&t.a[..7], &[1, 1, 1, 2, 2, 3, 1]);
        assert_eq!(&t.k[..7], &[1, 1, 2, 5, 12, 41, 53]);
        assert_eq!(&t.h[..7], &[1, 2, 3, 8, 19, 65, 84]);
    }

    #[test]
    fn convergents_alternate_sides() {
        let mut t = table23();
        t.ensure_depth(9).unwrap();
        for i in 0..9 {
            let side = t.side(t.h[i], t.k[i]).unwrap();
            if i % 2 == 0 {
                // p^h < q^k, i.e. h/k < rho.
                assert_eq!(side, Ordering::Greater, "even convergent {i}");
            } else {
                assert_eq!(side, Ordering::Less, "odd convergent {i}");
            }
        }
    }

    #[test]
    fn eps_bounds_against_neighbor_denominators() {
        // 1/(k_i + k_(i+1)) < eps_i < 1/k_(i+1), certified strictly.
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5), (3, 7), (5, 7)] {
            let mut t = ConvergentTable::new(Params::new(p, q).unwrap());
            t.ensure_depth(8).unwrap();
            for i in 0..7 {
                let mut prec = 96;
                loop {
                    let eps = t.eps_interval(i, prec).unwrap();
                    let upper = FixInterval::from_ratio(
                        &BigInt::one(),
                        &BigInt::from(t.k[i + 1]),
                        prec,
                    );
                    let lower = FixInterval::from_ratio(
                        &BigInt::one(),
                        &BigInt::from(t.k[i] + t.k[i + 1]),
                        prec,
                    );
                    let hi_ok = upper.sub(&eps).sign();
                    let lo_ok = eps.sub(&lower).sign();
                    if hi_ok == CertifiedSign::Positive && lo_ok == CertifiedSign::Positive {
                        break;
                    }
                    prec *= 2;
                    assert!(prec <= 4096, "({p},{q}) eps bound not certified at i={i}");
                }
            }
        }
    }

    #[test]
    fn eps_reference_values() {
        let mut t = table23();
        for (i, want) in [
            (0usize, 0.584_962_5f64),
            (1, 0.415_037_5),
            (2, 0.169_925_0),
            (3, 0.075_187_5),
            (4, 0.019_550_0),
        ] {
            let eps = t.eps_interval(i, 64).unwrap();
            let mid = eps.to_f64();
            assert!((mid - want).abs() < 1e-4, "eps_{i}: {mid} vs {want}");
        }
    }

    #[test]
    fn below_stream_prefix() {
        let mut t = table23();
        let terms = t.below_terms(5).unwrap();
        let ks: Vec<u64> = terms.iter().map(|b| b.k).collect();
        let hs: Vec<u64> = terms.iter().map(|b| b.h).collect();
        assert_eq!(ks, vec![1, 2, 7, 12, 53]);
        assert_eq!(hs, vec![1, 3, 11, 19, 84]);
        // H_n = floor(K_n rho), checked exactly: p^H < q^K < p^(H+1).
        for b in &terms {
            assert_eq!(t.side(b.h, b.k).unwrap(), Ordering::Greater);
            assert_eq!(t.side(b.h + 1, b.k).unwrap(), Ordering::Less);
        }
        // The single mediant between k_2 = 2 and k_4 = 12 is 2 + 5 = 7.
        assert_eq!(terms[2].s, 1);
        assert_eq!(terms[2].t, 1);
    }

    #[test]
    fn below_stream_fractional_parts_decrease() {
        // {K_(n+1) rho} < {K_n rho}, exactly: the difference of consecutive
        // terms is (Delta K) rho - (Delta H) and must be negative.
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5), (3, 7), (5, 7)] {
            let mut t = ConvergentTable::new(Params::new(p, q).unwrap());
            let terms = t.below_terms(8).unwrap();
            for w in terms.windows(2) {
                let dk = w[1].k - w[0].k;
                let dh = w[1].h - w[0].h;
                assert_eq!(t.side(dh, dk).unwrap(), Ordering::Less, "({p},{q})");
            }
        }
    }

    #[test]
    fn best_from_below_is_best() {
        // For every stream term with K_n <= 200, no k <= K_n approximates
        // rho better from below: floor(k rho)/k <= H_n/K_n.
        for (p, q) in [(2u64, 3u64), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut t = ConvergentTable::new(params);
            let mut n = 0;
            loop {
                let term = t.below_term(n).unwrap();
                if term.k > 200 {
                    break;
                }
                for k in 1..=term.k {
                    let floor_k_rho = Params::floor_log(p, &Pow::pow(params.q_big(), k));
                    assert!(
                        (floor_k_rho as u128) * (term.k as u128)
                            <= (term.h as u128) * (k as u128),
                        "({p},{q}): k={k} beats K_{n}"
                    );
                }
                n += 1;
            }
        }
    }

    #[test]
    fn even_denominators_double() {
        // k_(2i) >= 2^i.
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5), (3, 7), (5, 7)] {
            let mut t = ConvergentTable::new(Params::new(p, q).unwrap());
            t.ensure_depth(13).unwrap();
            for i in 0..6 {
                assert!(t.k[2 * i] >= 1u64 << i, "({p},{q}) at i={i}");
            }
        }
    }

    #[test]
    fn fractional_part_identities() {
        let mut t = table23();
        // {1 * rho} = eps_0.
        let f = t.frac_k(0, 0, 64).unwrap();
        assert!((f.to_f64() - 0.584_962_5).abs() < 1e-6);
        // {2 * rho} = eps_0 - eps_1 = eps_2.
        let f = t.frac_k(0, 1, 64).unwrap();
        assert!((f.to_f64() - 0.169_925_0).abs() < 1e-6);
        // {7 * rho}: s = 1, t = 1 mediant.
        let f = t.frac_k(1, 1, 64).unwrap();
        assert!((f.to_f64() - 0.094_737_5).abs() < 1e-4);
    }

    #[test]
    fn rho_bracketing_intervals() {
        let mut t = table23();
        let iv = t.rho_interval(10).unwrap();
        // prec is bits + 2, so scaled width <= 4 means width <= 2^-10.
        assert!(iv.width_scaled() <= BigInt::from(4));
        // Contains log2(3) = 1.58496...
        let rho = t.rho_certified(64);
        assert!(iv.overlaps(&rho));
        // Lower bound at least 1 because q > p.
        assert!(iv.lo_scaled() >= &(BigInt::one() << iv.prec()));

        let mut t25 = ConvergentTable::new(Params::new(2, 5).unwrap());
        let iv = t25.rho_interval(10).unwrap();
        let rho25 = t25.rho_certified(64);
        assert!(iv.overlaps(&rho25)); // log2(5) = 2.3219...
        assert_eq!(
            iv.lo_scaled() >> iv.prec(),
            BigInt::from(2),
            "log2 5 is between 2 and 3"
        );
    }

    #[test]
    fn search_digit_agrees_with_guessed_digits() {
        let mut t = table23();
        t.ensure_depth(8).unwrap();
        let reference = t.a.clone();
        // Re-extract each digit with the pure exact search.
        let mut fresh = table23();
        fresh.ensure_depth(1).unwrap();
        for i in 0..7usize {
            let digit = fresh.search_digit(i).unwrap();
            assert_eq!(digit, reference[i + 1], "digit {}", i + 1);
            fresh.ensure_depth(i + 2).unwrap();
        }
    }

    #[test]
    fn last_below_leq_and_levels() {
        let mut t = table23();
        assert_eq!(t.last_below_leq(6).unwrap().k, 2);
        assert_eq!(t.last_below_leq(7).unwrap().k, 7);
        assert_eq!(t.last_below_leq(52).unwrap().k, 12);
        assert_eq!(t.last_below_leq(1).unwrap().k, 1);
        assert!(t.last_below_leq(0).is_err());
        assert_eq!(t.level_with_k_exceeding(11).unwrap(), 2); // k_4 = 12
        assert_eq!(t.level_with_k_exceeding(1).unwrap(), 1); // k_2 = 2
    }
}
