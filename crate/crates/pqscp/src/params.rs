//! Validated base pair `(p, q)`.
//!
//! Everything in this crate is relative to two integers `1 < p < q` that are
//! multiplicatively independent (no relation `p^x = q^y` with `x, y > 0`).
//! Independence is equivalent to `rho = log_p q` being irrational, which is
//! what makes the fractional parts `{b * rho}` equidistribute and the
//! continued-fraction machinery meaningful.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Pow};

/// A validated, multiplicatively independent base pair `(p, q)` with
/// `1 < p < q`.
///
/// Also carries the rational `r = (q - p) / (p(q - 1))` in lowest terms; it
/// appears in the rewritten closed form for chain weights and always lies in
/// `(0, 1/p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    p: u64,
    q: u64,
    r_num: u64,
    r_den: u128,
}

impl Params {
    /// Validates `1 < p < q` and multiplicative independence.
    ///
    /// Two integers are multiplicatively dependent exactly when they are
    /// powers of a common base, so we reduce each to its primitive root
    /// (the smallest integer of which it is a perfect power) and compare.
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::OutOfRange(format!("p must be at least 2, got {p}")));
        }
        if q <= p {
            return Err(Error::OutOfRange(format!(
                "q must be strictly larger than p, got p = {p}, q = {q}"
            )));
        }
        let (p_base, _) = primitive_root(p);
        let (q_base, _) = primitive_root(q);
        if p_base == q_base {
            return Err(Error::Dependent { p, q, base: p_base });
        }
        let den = p as u128 * (q as u128 - 1);
        let g = num_integer::gcd((q - p) as u128, den);
        Ok(Params {
            p,
            q,
            r_num: ((q - p) as u128 / g) as u64,
            r_den: den / g,
        })
    }

    /// The smaller base.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The larger base.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// `p` as a big integer.
    pub fn p_big(&self) -> BigUint {
        BigUint::from(self.p)
    }

    /// `q` as a big integer.
    pub fn q_big(&self) -> BigUint {
        BigUint::from(self.q)
    }

    /// `p^a` exactly.
    pub fn pow_p(&self, a: u64) -> BigUint {
        Pow::pow(self.p_big(), a)
    }

    /// `q^b` exactly.
    pub fn pow_q(&self, b: u64) -> BigUint {
        Pow::pow(self.q_big(), b)
    }

    /// `p^a * q^b` exactly.
    pub fn part_value(&self, a: u64, b: u64) -> BigUint {
        self.pow_p(a) * self.pow_q(b)
    }

    /// Numerator of `r = (q - p) / (p(q - 1))` in lowest terms.
    pub fn r_num(&self) -> u64 {
        self.r_num
    }

    /// Denominator of `r = (q - p) / (p(q - 1))` in lowest terms.
    pub fn r_den(&self) -> u128 {
        self.r_den
    }

    /// `r = (q - p) / (p(q - 1))` as an exact rational.
    pub fn r_rational(&self) -> num_rational::BigRational {
        num_rational::BigRational::new(
            num_bigint::BigInt::from(self.r_num),
            num_bigint::BigInt::from(self.r_den),
        )
    }

    /// Largest `e` with `base^e <= n`, by exact integer powering
    /// (no floating point). Requires `base >= 2` and `n >= 1`.
    pub fn floor_log(base: u64, n: &BigUint) -> u64 {
        debug_assert!(base >= 2);
        debug_assert!(!n.is_zero_ext());
        // `bits` gives a two-sided bracket: base^e <= n implies
        // e * log2(base) < bits(n), so e < bits(n) certainly.
        let hi = n.bits(); // safe overestimate of the exponent + 1
        let big_base = BigUint::from(base);
        let (mut lo, mut hi) = (0u64, hi);
        // Invariant: base^lo <= n < base^hi.
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if Pow::pow(&big_base, mid) <= *n {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Largest `a` with `p^a <= n`.
    pub fn floor_log_p(&self, n: &BigUint) -> u64 {
        Self::floor_log(self.p, n)
    }

    /// Largest `b` with `q^b <= n`.
    pub fn floor_log_q(&self, n: &BigUint) -> u64 {
        Self::floor_log(self.q, n)
    }

    /// If `n = p^a * q^b` for some exponents, returns `(a, b)`.
    ///
    /// Multiplicative independence makes the representation unique when it
    /// exists. `p` and `q` need not be coprime (e.g. `(2, 6)` is a valid
    /// pair), so we cannot greedily strip all `p`-factors first; instead we
    /// peel `p` one factor at a time and test the remainder for being a pure
    /// power of `q`.
    pub fn as_smooth(&self, n: &BigUint) -> Option<(u64, u64)> {
        if n.is_zero_ext() {
            return None;
        }
        let p = self.p_big();
        let mut rest = n.clone();
        let mut a = 0u64;
        loop {
            if let Some(b) = exact_power_exponent(self.q, &rest) {
                return Some((a, b));
            }
            let (quo, rem) = num_integer::div_rem(rest, p.clone());
            if rem.is_zero_ext() && !quo.is_zero_ext() {
                rest = quo;
                a += 1;
            } else {
                return None;
            }
        }
    }
}

/// If `n = base^e` exactly, returns `e` (with `e = 0` for `n = 1`).
fn exact_power_exponent(base: u64, n: &BigUint) -> Option<u64> {
    debug_assert!(base >= 2);
    if n.is_zero_ext() {
        return None;
    }
    let big_base = BigUint::from(base);
    let mut rest = n.clone();
    let mut e = 0u64;
    while !rest.is_one() {
        let (quo, rem) = num_integer::div_rem(rest, big_base.clone());
        if !rem.is_zero_ext() {
            return None;
        }
        rest = quo;
        e += 1;
    }
    Some(e)
}

/// Small extension so `is_zero` reads uniformly on `BigUint` without pulling
/// `num_traits::Zero` into every signature.
trait IsZeroExt {
    fn is_zero_ext(&self) -> bool;
}

impl IsZeroExt for BigUint {
    fn is_zero_ext(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Decomposes `n >= 2` as `base^e` with maximal `e` (so `base` is not itself
/// a perfect power). Returns `(base, e)`.
fn primitive_root(n: u64) -> (u64, u32) {
    debug_assert!(n >= 2);
    // The exponent of a perfect power of n >= 2 is at most log2(n).
    let max_e = 63 - n.leading_zeros();
    for e in (2..=max_e.max(1)).rev() {
        if let Some(root) = integer_root(n, e) {
            // root^e == n with e maximal among the candidates tried so far;
            // recurse in case root is itself a power (cannot happen when e is
            // maximal, but this keeps the function correct on its own).
            let (inner_base, inner_e) = primitive_root(root);
            return (inner_base, inner_e * e);
        }
    }
    (n, 1)
}

/// Exact `e`-th root: returns `r` when `r^e == n`.
fn integer_root(n: u64, e: u32) -> Option<u64> {
    if e == 1 {
        return Some(n);
    }
    let guess = (n as f64).powf(1.0 / e as f64).round() as u64;
    for r in guess.saturating_sub(1)..=guess + 1 {
        if let Some(v) = checked_pow_u64(r, e) {
            if v == n {
                return Some(r);
            }
        }
    }
    None
}

fn checked_pow_u64(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
