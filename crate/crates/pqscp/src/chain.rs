//! Parts, chains, and the weight of the heaviest chain below a given part.
//!
//! A part is `p^a q^b`, identified with the exponent pair `(a, b)` (the map
//! is injective because `p` and `q` are multiplicatively independent). A
//! chain is a strictly decreasing sequence of parts in which every part is
//! divisible by its successor *within the lattice*, i.e. both exponents
//! decrease weakly; for coprime `p, q` this is exactly integer divisibility.
//!
//! The heaviest chain whose greatest part is `p^a q^b` walks down the `p`
//! axis first and then the `q` axis, and its weight has the closed form
//!
//! ```text
//! h(a, b) = (q^b - 1)/(q - 1) + (p^(a+1) - 1)/(p - 1) * q^b .
//! ```

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::params::Params;

/// Default cap on the number of chains `enumerate_max_chains` will produce.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Exponent pair `(a, b)` standing for the part `p^a q^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    /// Exponent of `p`.
    pub a: u64,
    /// Exponent of `q`.
    pub b: u64,
}

impl LatticePoint {
    /// Creates the point `(a, b)`.
    pub fn new(a: u64, b: u64) -> Self {
        LatticePoint { a, b }
    }

    /// The part value `p^a q^b`.
    pub fn value(&self, params: &Params) -> BigUint {
        params.part_value(self.a, self.b)
    }

    /// Componentwise exponent dominance: both exponents of `self` are at
    /// least those of `other`. This is the chain divisibility order.
    pub fn dominates(&self, other: &LatticePoint) -> bool {
        self.a >= other.a && self.b >= other.b
    }
}

impl std::fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A strictly decreasing divisibility chain, stored as exponent pairs in
/// decreasing order of part value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPartition {
    points: Vec<LatticePoint>,
}

impl ChainPartition {
    /// Builds a chain from points listed in decreasing part order,
    /// validating strict decrease and divisibility.
    pub fn new(points: Vec<LatticePoint>) -> Result<Self> {
        for pair in points.windows(2) {
            if pair[0] == pair[1] || !pair[0].dominates(&pair[1]) {
                return Err(Error::InvalidInput(format!(
                    "parts {} and {} do not decrease along the divisibility order",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(ChainPartition { points })
    }

    /// The empty chain.
    pub fn empty() -> Self {
        ChainPartition { points: Vec::new() }
    }

    /// Points in decreasing part order.
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Whether the chain has no parts.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Part values in decreasing order.
    pub fn parts(&self, params: &Params) -> Vec<BigUint> {
        self.points.iter().map(|pt| pt.value(params)).collect()
    }

    /// Sum of the part values.
    pub fn weight(&self, params: &Params) -> BigUint {
        self.points
            .iter()
            .map(|pt| pt.value(params))
            .fold(BigUint::zero(), |acc, v| acc + v)
    }
}

/// Weight `h(a, b)` of the heaviest chain with greatest part `p^a q^b`:
/// `(q^b - 1)/(q - 1) + (p^(a+1) - 1)/(p - 1) * q^b`, computed exactly.
pub fn h(params: &Params, a: u64, b: u64) -> BigUint {
    let one = BigUint::one();
    let qb = params.pow_q(b);
    let geometric_q = (&qb - &one) / BigUint::from(params.q() - 1);
    let geometric_p = (params.pow_p(a + 1) - &one) / BigUint::from(params.p() - 1);
    geometric_q + geometric_p * qb
}

/// The same weight through the rewritten form
/// `h(a, b) = p/(p-1) * (p^a q^b - r q^b) - 1/(q-1)` with
/// `r = (q-p)/(p(q-1))`, evaluated in exact rational arithmetic.
///
/// Always an integer equal to [`h`]; kept as a cross-check because the
/// comparison criterion [`h_compare`] is derived from this form.
pub fn h_alt(params: &Params, a: u64, b: u64) -> BigRational {
    let p = BigInt::from(params.p());
    let q = BigInt::from(params.q());
    let one = BigInt::one();
    let value = BigInt::from(params.part_value(a, b));
    let qb = BigInt::from(params.pow_q(b));
    let r = params.r_rational();
    let main = BigRational::new(p.clone(), &p - &one)
        * (BigRational::from(value) - r * BigRational::from(qb));
    main - BigRational::new(one.clone(), &q - &one)
}

/// Orders `h(a, b)` against `h(a', b')` without computing either weight.
///
/// From the rewritten form, `h(a,b) - h(a',b')` has the sign of
/// `(p^a q^b - p^a' q^b') - r (q^b - q^b')`; clearing the denominator
/// `p(q-1)` of `r` gives the integer criterion
///
/// ```text
/// sign( p(q-1) (p^a q^b - p^a' q^b')  -  (q-p) (q^b - q^b') ) .
/// ```
///
/// Ties are real: at `(p,q) = (2,3)`, `h(1,5) = h(4,3) = 850`.
pub fn h_compare(params: &Params, x: LatticePoint, y: LatticePoint) -> Ordering {
    let value_diff = BigInt::from(x.value(params)) - BigInt::from(y.value(params));
    let q_diff = BigInt::from(params.pow_q(x.b)) - BigInt::from(params.pow_q(y.b));
    let p = BigInt::from(params.p());
    let q = BigInt::from(params.q());
    let lhs = p * (&q - BigInt::one()) * value_diff;
    let rhs = (q - BigInt::from(params.p())) * q_diff;
    lhs.cmp(&rhs)
}

/// The heaviest chain with greatest part `p^a q^b`: its parts are
/// `{q^i : 0 <= i < b}` together with `{q^b p^i : 0 <= i <= a}`,
/// i.e. the walk down the `p` axis first, then the `q` axis.
pub fn heaviest_chain(params: &Params, a: u64, b: u64) -> ChainPartition {
    let _ = params; // shape depends only on the exponents
    let mut points = Vec::with_capacity((a + b + 1) as usize);
    for i in (0..=a).rev() {
        points.push(LatticePoint::new(i, b));
    }
    for j in (0..b).rev() {
        points.push(LatticePoint::new(0, j));
    }
    ChainPartition { points }
}

/// Number of chains of maximal length `a + b + 1` with greatest part
/// `p^a q^b`: one per monotone staircase walk, `binomial(a+b, b)`.
pub fn count_max_chains(a: u64, b: u64) -> BigUint {
    num_integer::binomial(BigUint::from(a) + BigUint::from(b), BigUint::from(b))
}

/// All maximal-length chains with greatest part `p^a q^b`, each listing its
/// `a + b + 1` parts in decreasing order.
///
/// Refuses to enumerate more than `cap` chains (there are
/// `binomial(a+b, b)` of them).
pub fn enumerate_max_chains(
    params: &Params,
    a: u64,
    b: u64,
    cap: u64,
) -> Result<Vec<ChainPartition>> {
    let _ = params;
    let count = count_max_chains(a, b);
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded { needed: count, cap });
    }
    let mut chains = Vec::new();
    let mut prefix = Vec::with_capacity((a + b + 1) as usize);
    fn walk(
        pt: LatticePoint,
        prefix: &mut Vec<LatticePoint>,
        chains: &mut Vec<ChainPartition>,
    ) {
        prefix.push(pt);
        if pt.a == 0 && pt.b == 0 {
            chains.push(ChainPartition {
                points: prefix.clone(),
            });
        } else {
            if pt.a > 0 {
                walk(LatticePoint::new(pt.a - 1, pt.b), prefix, chains);
            }
            if pt.b > 0 {
                walk(LatticePoint::new(pt.a, pt.b - 1), prefix, chains);
            }
        }
        prefix.pop();
    }
    walk(LatticePoint::new(a, b), &mut prefix, &mut chains);
    debug_assert_eq!(BigUint::from(chains.len()), count);
    Ok(chains)
}

/// Whether `parts` (any order of presentation is rejected except strictly
/// decreasing) is a strictly chained partition: every value is `p^a q^b`,
/// values strictly decrease, and each part is divisible by its successor in
/// the lattice order.
pub fn is_scp(params: &Params, parts: &[BigUint]) -> bool {
    let mut points = Vec::with_capacity(parts.len());
    for value in parts {
        match params.as_smooth(value) {
            Some((a, b)) => points.push(LatticePoint::new(a, b)),
            None => return false,
        }
    }
    points
        .windows(2)
        .all(|pair| pair[0] != pair[1] && pair[0].dominates(&pair[1]))
}

/// Sum of a sequence of part values.
pub fn weight_of_values(parts: &[BigUint]) -> BigUint {
    parts.iter().fold(BigUint::zero(), |acc, v| acc + v)
}
