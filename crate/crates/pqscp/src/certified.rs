//! Self-validating fixed-point arithmetic.
//!
//! A [`FixInterval`] is a pair of scaled integers `[lo, hi] * 2^-prec` that
//! provably brackets a real number. All operations round outward, so any
//! value computed through this module carries a machine-checkable error
//! bound: if an interval's sign is determined, the sign of the true value is
//! certain; if it is not, the caller must either raise the precision or fall
//! back to exact integer arithmetic.
//!
//! The only transcendental entry point is the natural logarithm, computed by
//! argument reduction to `[1, 2)` followed by the `atanh` series
//! `ln x = 2 atanh((x-1)/(x+1))`, with the series tail bounded explicitly.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

/// A dyadic interval `[lo, hi] * 2^-prec` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixInterval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

/// Sign information an interval can certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifiedSign {
    Negative,
    Zero,
    Positive,
    /// The interval straddles zero: the sign of the underlying value is not
    /// determined at this precision.
    Unknown,
}

impl FixInterval {
    /// The exact point interval for an integer.
    pub fn from_bigint(value: BigInt, prec: u32) -> Self {
        let scaled = value << prec;
        FixInterval {
            lo: scaled.clone(),
            hi: scaled,
            prec,
        }
    }

    /// The exact zero interval.
    pub fn zero(prec: u32) -> Self {
        FixInterval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            prec,
        }
    }

    /// Builds an interval from raw scaled endpoints.
    pub fn from_scaled(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        FixInterval { lo, hi, prec }
    }

    /// The tightest dyadic enclosure of `num/den` at this precision
    /// (requires `den > 0`).
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        debug_assert!(den.is_positive());
        let scaled = num << prec;
        let lo = scaled.div_floor(den);
        let hi = scaled.div_ceil(den);
        FixInterval { lo, hi, prec }
    }

    /// Scaled lower endpoint.
    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    /// Scaled upper endpoint.
    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    /// The precision (bits after the binary point).
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Width in units of `2^-prec`.
    pub fn width_scaled(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Re-represents the interval at precision `prec`, rounding outward if
    /// precision decreases (never loses containment).
    pub fn round_to(&self, prec: u32) -> FixInterval {
        if prec >= self.prec {
            let shift = prec - self.prec;
            FixInterval {
                lo: &self.lo << shift,
                hi: &self.hi << shift,
                prec,
            }
        } else {
            let shift = self.prec - prec;
            FixInterval {
                // Shifting a BigInt right rounds toward negative infinity,
                // which is the outward direction for the lower endpoint.
                lo: &self.lo >> shift,
                hi: ceil_shr(&self.hi, shift),
                prec,
            }
        }
    }

    fn unify(&self, other: &FixInterval) -> (FixInterval, FixInterval) {
        let prec = self.prec.max(other.prec);
        (self.round_to(prec), other.round_to(prec))
    }

    /// Interval sum.
    pub fn add(&self, other: &FixInterval) -> FixInterval {
        let (x, y) = self.unify(other);
        FixInterval {
            lo: x.lo + y.lo,
            hi: x.hi + y.hi,
            prec: x.prec,
        }
    }

    /// Interval difference.
    pub fn sub(&self, other: &FixInterval) -> FixInterval {
        let (x, y) = self.unify(other);
        FixInterval {
            lo: x.lo - y.hi,
            hi: x.hi - y.lo,
            prec: x.prec,
        }
    }

    /// Negation.
    pub fn neg(&self) -> FixInterval {
        FixInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            prec: self.prec,
        }
    }

    /// Exact product with an integer (no rounding).
    pub fn mul_int(&self, c: &BigInt) -> FixInterval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            FixInterval { lo: b, hi: a, prec: self.prec }
        } else {
            FixInterval { lo: a, hi: b, prec: self.prec }
        }
    }

    /// Interval product, rounded outward back to the larger operand
    /// precision.
    pub fn mul(&self, other: &FixInterval) -> FixInterval {
        let target = self.prec.max(other.prec);
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        FixInterval {
            lo,
            hi,
            prec: self.prec + other.prec,
        }
        .round_to(target)
    }

    /// Division by a positive integer, rounded outward.
    pub fn div_int(&self, c: &BigInt) -> FixInterval {
        debug_assert!(c.is_positive());
        FixInterval {
            lo: self.lo.div_floor(c),
            hi: self.hi.div_ceil(c),
            prec: self.prec,
        }
    }

    /// Interval quotient `self / other`; `other` must be strictly positive.
    /// The result is produced at the precision of `self`.
    pub fn div(&self, other: &FixInterval) -> FixInterval {
        assert!(
            other.lo.is_positive(),
            "interval division requires a strictly positive denominator"
        );
        let prec = self.prec;
        // value = (a * 2^-pa) / (b * 2^-pb) = (a / b) * 2^(pb - pa);
        // at output precision t the scaled endpoint is a * 2^(pb - pa + t) / b.
        // Here pa = t = prec, so the shift is just pb.
        let shift = other.prec;
        let lo_num = &self.lo << shift;
        let hi_num = &self.hi << shift;
        // Denominator positive: smallest quotient pairs the lower numerator
        // with whichever endpoint of the denominator stretches it downward.
        let lo = if self.lo.is_negative() {
            lo_num.div_floor(&other.lo)
        } else {
            lo_num.div_floor(&other.hi)
        };
        let hi = if self.hi.is_negative() {
            hi_num.div_ceil(&other.hi)
        } else {
            hi_num.div_ceil(&other.lo)
        };
        FixInterval { lo, hi, prec }
    }

    /// Certified sign of the enclosed value.
    pub fn sign(&self) -> CertifiedSign {
        if self.lo.is_positive() {
            CertifiedSign::Positive
        } else if self.hi.is_negative() {
            CertifiedSign::Negative
        } else if self.lo.is_zero() && self.hi.is_zero() {
            CertifiedSign::Zero
        } else {
            CertifiedSign::Unknown
        }
    }

    /// Whether the two intervals overlap (necessary whenever both enclose
    /// the same true value).
    pub fn overlaps(&self, other: &FixInterval) -> bool {
        let (x, y) = self.unify(other);
        x.lo <= y.hi && y.lo <= x.hi
    }

    /// Intersection; `None` when disjoint.
    pub fn intersect(&self, other: &FixInterval) -> Option<FixInterval> {
        let (x, y) = self.unify(other);
        let lo = x.lo.max(y.lo);
        let hi = x.hi.min(y.hi);
        if lo <= hi {
            Some(FixInterval { lo, hi, prec: x.prec })
        } else {
            None
        }
    }

    /// If both endpoints share an integer floor, that floor.
    pub fn floor_if_determined(&self) -> Option<BigInt> {
        let lo_floor = &self.lo >> self.prec;
        let hi_floor = &self.hi >> self.prec;
        (lo_floor == hi_floor).then_some(lo_floor)
    }

    /// Approximate midpoint for display only; never used for decisions.
    pub fn to_f64(&self) -> f64 {
        let mid: BigInt = (&self.lo + &self.hi) / 2;
        let mantissa_bits = 80u64;
        let bits = mid.bits();
        if bits <= mantissa_bits {
            mid.to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.prec as i32)
        } else {
            let shift = bits - mantissa_bits;
            let reduced = (mid >> shift).to_f64().unwrap_or(f64::NAN);
            reduced * 2f64.powi(shift as i32 - self.prec as i32)
        }
    }
}

fn ceil_shr(x: &BigInt, shift: u32) -> BigInt {
    -((-x) >> shift)
}

/// Certified `atanh(z)` for an interval `0 <= z <= ~0.34`, at the interval's
/// own precision. The Taylor tail after truncation is bounded by
/// `z^(2K+1) / (1 - z^2) <= 2 z^(2K+1)` for `z <= 0.34` and added to the
/// upper endpoint.
fn atanh_interval(z: &FixInterval) -> FixInterval {
    let prec = z.prec();
    assert!(!z.lo_scaled().is_negative());
    // z must stay safely below 1/2 for the tail factor 2 to be valid.
    assert!(z.hi_scaled() < &(BigInt::one() << (prec - 1)));
    let z2 = z.mul(z);
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut odd = BigInt::from(3u32);
    loop {
        term = term.mul(&z2);
        if term.hi_scaled() <= &BigInt::from(16u32) {
            // Remaining tail (including this term) is at most twice the
            // current term bound.
            let pad = term.hi_scaled() * 2;
            return FixInterval {
                lo: sum.lo,
                hi: sum.hi + pad,
                prec,
            };
        }
        sum = sum.add(&term.div_int(&odd));
        odd += 2;
    }
}

static LN2_CACHE: Lazy<Mutex<HashMap<u32, FixInterval>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Certified interval for `ln 2` at `prec` bits, cached per precision.
pub fn ln2_interval(prec: u32) -> FixInterval {
    if let Some(hit) = LN2_CACHE.lock().unwrap().get(&prec) {
        return hit.clone();
    }
    // ln 2 = 2 atanh(1/3).
    let third = FixInterval::from_ratio(&BigInt::one(), &BigInt::from(3u32), prec + 8);
    let value = atanh_interval(&third).mul_int(&BigInt::from(2u32)).round_to(prec);
    LN2_CACHE
        .lock()
        .unwrap()
        .insert(prec, value.clone());
    value
}

/// Certified interval for `ln n`, `n >= 1`, with endpoints at `prec` bits.
pub fn ln_interval(n: &BigUint, prec: u32) -> FixInterval {
    assert!(!n.is_zero(), "ln requires a positive argument");
    if n.is_one() {
        return FixInterval::zero(prec);
    }
    let work = prec + 32;
    // n = mhat * 2^s with mhat in [1, 2):
    // ln n = 2 atanh((n - 2^s)/(n + 2^s)) + s ln 2.
    let s = n.bits() - 1;
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let pow = BigInt::one() << s;
    let num = &n_int - &pow;
    let den = &n_int + &pow;
    // z in [0, 1/3): safely inside the series domain.
    let z = FixInterval::from_ratio(&num, &den, work);
    let ln_mhat = atanh_interval(&z).mul_int(&BigInt::from(2u32));
    let ln2_part = ln2_interval(work).mul_int(&BigInt::from(s));
    ln_mhat.add(&ln2_part).round_to(prec)
}

/// Certified `ln x` for a strictly positive interval `x`.
///
/// Monotonicity gives `ln x ⊆ [ln(lo · 2^-s), ln(hi · 2^-s)]`; each endpoint
/// is `ln(scaled integer) - s · ln 2`, so arguments below 1 (negative
/// logarithms) are handled exactly like the rest.
pub fn ln_of_interval(x: &FixInterval, prec: u32) -> FixInterval {
    assert!(
        x.lo_scaled().sign() == Sign::Plus,
        "ln requires a strictly positive interval"
    );
    let work = prec + 32;
    let shift = ln2_interval(work).mul_int(&BigInt::from(x.prec()));
    let lo = ln_interval(x.lo_scaled().magnitude(), work).sub(&shift);
    let hi = ln_interval(x.hi_scaled().magnitude(), work).sub(&shift);
    FixInterval::from_scaled(lo.lo_scaled().clone(), hi.hi_scaled().clone(), work).round_to(prec)
}

static LN_U64_CACHE: Lazy<Mutex<HashMap<(u64, u32), FixInterval>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached certified `ln n` for machine-word arguments (used heavily for the
/// bases `p` and `q`).
pub fn ln_u64_interval(n: u64, prec: u32) -> FixInterval {
    if let Some(hit) = LN_U64_CACHE.lock().unwrap().get(&(n, prec)) {
        return hit.clone();
    }
    let value = ln_interval(&BigUint::from(n), prec);
    LN_U64_CACHE
        .lock()
        .unwrap()
        .insert((n, prec), value.clone());
    value
}
