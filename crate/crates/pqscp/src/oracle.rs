//! Reference computations of `G(m)`, each by a different route.
//!
//! Three oracles cross-check one another and everything downstream:
//!
//! * [`g_recursive`] follows the recursion
//!   `G(m) = max(G(m-1), 1 + p G(m/p), 1 + q G(m/q))` with the division
//!   branches taken only when they are exact, memoized over visited values.
//! * [`g_frontier_scan`] evaluates `h` on every frontier point of `Z_m` and
//!   takes the max — the definitional route, sharing no code with the
//!   recursion beyond `h` itself.
//! * [`g_exhaustive`] maximizes weight over *all* strictly chained
//!   partitions with parts at most `m` by a memoized depth-first search of
//!   the divisibility order on `E ∩ [1, m]`, assuming no structure at all.
//!
//! The exhaustive route is capped (default `m <= 5000`) because its state
//! space is the full exponent lattice; the other two scale further.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::chain::{h, ChainPartition, LatticePoint};
use crate::error::{Error, Result};
use crate::frontier::z_set;
use crate::params::Params;

/// Largest `m` the exhaustive oracle accepts by default.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 5000;

fn require_positive(m: &BigUint) -> Result<()> {
    if m.is_zero() {
        Err(Error::OutOfRange(
            "m must be at least 1 (weights are defined on positive integers)".into(),
        ))
    } else {
        Ok(())
    }
}

/// Memo table for [`g_recursive`], reusable across calls with the same
/// parameters (sharing it across a sweep turns the sweep linear).
#[derive(Debug, Clone)]
pub struct GCache {
    p: u64,
    q: u64,
    map: HashMap<BigUint, BigUint>,
}

impl GCache {
    /// Empty cache bound to one parameter pair.
    pub fn new(params: &Params) -> Self {
        GCache {
            p: params.p(),
            q: params.q(),
            map: HashMap::new(),
        }
    }

    /// Number of values memoized so far.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    /// Whether nothing is memoized yet.
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// `G(m)` by the weight recursion, with a fresh memo table.
pub fn g_recursive(params: &Params, m: &BigUint) -> Result<BigUint> {
    let mut cache = GCache::new(params);
    g_recursive_with_cache(params, m, &mut cache)
}

/// `G(m)` by the weight recursion, memoizing into `cache`.
///
/// The evaluation is iterative (explicit work stack), so the `m - 1`
/// descent cannot overflow the call stack no matter how large `m` is.
pub fn g_recursive_with_cache(
    params: &Params,
    m: &BigUint,
    cache: &mut GCache,
) -> Result<BigUint> {
    require_positive(m)?;
    if cache.p != params.p() || cache.q != params.q() {
        return Err(Error::InvalidInput(format!(
            "cache was built for (p,q) = ({},{}), not ({},{})",
            cache.p,
            cache.q,
            params.p(),
            params.q()
        )));
    }
    let p = params.p_big();
    let q = params.q_big();
    let one = BigUint::one();

    let mut stack: Vec<BigUint> = vec![m.clone()];
    while let Some(top) = stack.last() {
        if cache.map.contains_key(top) {
            stack.pop();
            continue;
        }
        if top.is_one() {
            cache.map.insert(top.clone(), BigUint::one());
            stack.pop();
            continue;
        }
        // Dependencies: m - 1 always, m / p and m / q when the division
        // is exact.
        let prev = top - &one;
        let by_p = if (top % &p).is_zero() {
            Some(top / &p)
        } else {
            None
        };
        let by_q = if (top % &q).is_zero() {
            Some(top / &q)
        } else {
            None
        };

        let mut missing = Vec::new();
        for dep in [Some(&prev), by_p.as_ref(), by_q.as_ref()].into_iter().flatten() {
            if !cache.map.contains_key(dep) {
                missing.push(dep.clone());
            }
        }
        if !missing.is_empty() {
            stack.extend(missing);
            continue;
        }

        let mut best = cache.map[&prev].clone();
        if let Some(d) = by_p {
            let candidate = &one + &p * &cache.map[&d];
            if candidate > best {
                best = candidate;
            }
        }
        if let Some(d) = by_q {
            let candidate = &one + &q * &cache.map[&d];
            if candidate > best {
                best = candidate;
            }
        }
        let top = stack.pop().unwrap();
        cache.map.insert(top, best);
    }
    Ok(cache.map[m].clone())
}

/// `G(m)` by scanning the frontier: evaluates `h` on every point of `Z_m`
/// and returns the maximum together with the full argmax set (this is
/// `Y_m` by definition), in increasing part value.
pub fn g_frontier_scan(params: &Params, m: &BigUint) -> Result<(BigUint, Vec<LatticePoint>)> {
    let set = z_set(params, m)?;
    let mut winners = set.argmax_h_indices();
    let g = set.h_values()[winners[0]].clone();
    winners.sort_by(|&i, &j| set.values()[i].cmp(&set.values()[j]));
    let points = winners.into_iter().map(|i| set.points()[i]).collect();
    Ok((g, points))
}

/// `G(m)` by structure-free search over all strictly chained partitions
/// with parts at most `m`, with the default cap on `m`.
pub fn g_exhaustive(params: &Params, m: &BigUint) -> Result<BigUint> {
    g_exhaustive_with_cap(params, m, DEFAULT_EXHAUSTIVE_CAP)
}

/// Like [`g_exhaustive`] with an explicit cap on `m`.
///
/// The search runs over the exponent lattice `E ∩ [1, m]`: `best(a, b)` is
/// the heaviest chain topped by `p^a q^b`, obtained by extending with the
/// best strictly dominated point. After the maximum is found, one optimal
/// chain is reconstructed and re-validated part by part, and its weight is
/// checked against the closed form `h` — a broken invariant panics, since
/// it would mean the oracle itself is inconsistent.
pub fn g_exhaustive_with_cap(params: &Params, m: &BigUint, cap: u64) -> Result<BigUint> {
    require_positive(m)?;
    if *m > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            needed: m.clone(),
            cap,
        });
    }

    // All lattice points with value <= m, in an order compatible with
    // dominance (b outer, a inner, both increasing).
    let mut points: Vec<LatticePoint> = Vec::new();
    for b in 0..=params.floor_log_q(m) {
        let rest = m / params.pow_q(b);
        for a in 0..=params.floor_log_p(&rest) {
            points.push(LatticePoint::new(a, b));
        }
    }

    // best[i] = heaviest chain weight topped by points[i];
    // back[i] = index of the chosen continuation, if any.
    let mut best: Vec<BigUint> = Vec::with_capacity(points.len());
    let mut back: Vec<Option<usize>> = Vec::with_capacity(points.len());
    for (i, pt) in points.iter().enumerate() {
        let mut weight = pt.value(params);
        let mut cont: Option<usize> = None;
        for j in 0..i {
            if pt.dominates(&points[j]) && points[j] != *pt {
                let candidate = pt.value(params) + &best[j];
                if candidate > weight {
                    weight = candidate;
                    cont = Some(j);
                }
            }
        }
        best.push(weight);
        back.push(cont);
    }

    let mut top = 0;
    for i in 1..points.len() {
        if best[i] > best[top] {
            top = i;
        }
    }
    let g = best[top].clone();

    // Reconstruct and re-validate one optimal chain.
    let mut chain_points = Vec::new();
    let mut at = Some(top);
    while let Some(i) = at {
        chain_points.push(points[i]);
        at = back[i];
    }
    let chain = ChainPartition::new(chain_points)
        .expect("exhaustive argmax reconstruction must be a valid chain");
    assert_eq!(chain.weight(params), g, "reconstructed chain weight mismatch");
    assert!(chain.parts(params).iter().all(|part| part <= m));
    assert_eq!(
        g,
        h(params, points[top].a, points[top].b),
        "exhaustive maximum disagrees with the closed form at its own top"
    );
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::y_set;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn p23() -> Params {
        Params::new(2, 3).unwrap()
    }

    /// Every strictly chained partition with parts at most `m`, found by
    /// extending chains downward one dominated point at a time; returns the
    /// maximal weight. Exponential, test-only.
    fn max_weight_by_full_enumeration(params: &Params, m: u64) -> BigUint {
        let m_big = u(m);
        let mut points: Vec<LatticePoint> = Vec::new();
        for b in 0..=params.floor_log_q(&m_big) {
            let rest = &m_big / params.pow_q(b);
            for a in 0..=params.floor_log_p(&rest) {
                points.push(LatticePoint::new(a, b));
            }
        }
        fn extend(
            params: &Params,
            points: &[LatticePoint],
            top: LatticePoint,
            weight_so_far: BigUint,
            best: &mut BigUint,
        ) {
            if weight_so_far > *best {
                *best = weight_so_far.clone();
            }
            for next in points {
                if top.dominates(next) && *next != top {
                    extend(
                        params,
                        points,
                        *next,
                        &weight_so_far + next.value(params),
                        best,
                    );
                }
            }
        }
        let mut best = BigUint::zero();
        for &start in &points {
            extend(params, &points, start, start.value(params), &mut best);
        }
        best
    }

    #[test]
    fn first_seventeen_values() {
        let params = p23();
        let want = [1u64, 3, 4, 7, 7, 10, 10, 15, 15, 15, 15, 22, 22, 22, 22, 31, 31];
        let mut cache = GCache::new(&params);
        for (i, &g) in want.iter().enumerate() {
            let m = u(i as u64 + 1);
            assert_eq!(g_recursive_with_cache(&params, &m, &mut cache).unwrap(), u(g));
            assert_eq!(g_frontier_scan(&params, &m).unwrap().0, u(g));
            assert_eq!(g_exhaustive(&params, &m).unwrap(), u(g));
        }
    }

    #[test]
    fn anchor_values_around_750() {
        let params = p23();
        assert_eq!(g_recursive(&params, &u(750)).unwrap(), u(1255));
        assert_eq!(g_recursive(&params, &u(729)).unwrap(), u(1255));
        let (g, winners) = g_frontier_scan(&params, &u(750)).unwrap();
        assert_eq!(g, u(1255));
        assert_eq!(winners, vec![LatticePoint::new(3, 4)]);
    }

    #[test]
    fn frontier_scan_returns_full_argmax_set() {
        let params = p23();
        let (g, winners) = g_frontier_scan(&params, &u(486)).unwrap();
        assert_eq!(g, u(850));
        assert_eq!(
            winners,
            vec![LatticePoint::new(4, 3), LatticePoint::new(1, 5)]
        );
        let (g, winners) = g_frontier_scan(&params, &u(1)).unwrap();
        assert_eq!(g, u(1));
        assert_eq!(winners, vec![LatticePoint::new(0, 0)]);
        // The scan's argmax set is Y_m.
        for m in 1u64..=1500 {
            assert_eq!(
                g_frontier_scan(&params, &u(m)).unwrap().1,
                y_set(&params, &u(m)).unwrap(),
                "m = {m}"
            );
        }
    }

    #[test]
    fn distinct_parts_maximum_at_31() {
        // (2,5), m = 31: the best chain is 20 | 10 | 5 | 1 with weight 36.
        // (Allowing a repeated part would give 41 = 20+10+5+5+1, but parts
        // of a strictly chained partition are distinct.)
        let params = Params::new(2, 5).unwrap();
        assert_eq!(g_exhaustive(&params, &u(31)).unwrap(), u(36));
        assert_eq!(g_recursive(&params, &u(31)).unwrap(), u(36));
        assert_eq!(max_weight_by_full_enumeration(&params, 31), u(36));
    }

    #[test]
    fn three_routes_agree_on_small_m() {
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5), (3, 7), (5, 7)] {
            let params = Params::new(p, q).unwrap();
            let mut cache = GCache::new(&params);
            for m in 1u64..=400 {
                let m_big = u(m);
                let by_recursion =
                    g_recursive_with_cache(&params, &m_big, &mut cache).unwrap();
                let by_scan = g_frontier_scan(&params, &m_big).unwrap().0;
                let by_search = g_exhaustive(&params, &m_big).unwrap();
                assert_eq!(by_recursion, by_scan, "({p},{q}) m={m}");
                assert_eq!(by_recursion, by_search, "({p},{q}) m={m}");
            }
        }
    }

    #[test]
    fn exhaustive_matches_full_enumeration_on_tiny_m() {
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            for m in 1u64..=120 {
                assert_eq!(
                    g_exhaustive(&params, &u(m)).unwrap(),
                    max_weight_by_full_enumeration(&params, m),
                    "({p},{q}) m={m}"
                );
            }
        }
    }

    #[test]
    fn recursion_matches_scan_beyond_the_exhaustive_cap() {
        // Dense sweep, then spot values with scattered prime factors.
        let params = p23();
        let mut cache = GCache::new(&params);
        for m in 1u64..=10_000 {
            assert_eq!(
                g_recursive_with_cache(&params, &u(m), &mut cache).unwrap(),
                g_frontier_scan(&params, &u(m)).unwrap().0,
                "m = {m}"
            );
        }
        for m in [
            59_049u64, 59_050, 65_536, 65_537, 100_003, 250_000, 531_441, 999_983, 1_000_000,
        ] {
            assert_eq!(
                g_recursive_with_cache(&params, &u(m), &mut cache).unwrap(),
                g_frontier_scan(&params, &u(m)).unwrap().0,
                "m = {m}"
            );
        }
    }

    #[test]
    fn g_is_non_decreasing() {
        for (p, q) in [(2u64, 3u64), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            let mut cache = GCache::new(&params);
            let mut prev = BigUint::zero();
            for m in 1u64..=2000 {
                let g = g_recursive_with_cache(&params, &u(m), &mut cache).unwrap();
                assert!(g >= prev, "({p},{q}) m={m}");
                prev = g;
            }
        }
    }

    #[test]
    fn pure_power_closed_form() {
        // G(p^a) = (p^(a+1) - 1)/(p - 1).
        for (p, q) in [(2u64, 3u64), (3, 5), (5, 7)] {
            let params = Params::new(p, q).unwrap();
            let mut cache = GCache::new(&params);
            for a in 0u64..=40 {
                let m = params.pow_p(a);
                let want =
                    (params.pow_p(a + 1) - 1u32) / BigUint::from(p - 1);
                assert_eq!(
                    g_frontier_scan(&params, &m).unwrap().0,
                    want,
                    "({p},{q}) a={a}"
                );
                if m <= u(20_000) {
                    assert_eq!(
                        g_recursive_with_cache(&params, &m, &mut cache).unwrap(),
                        want
                    );
                }
            }
        }
    }

    #[test]
    fn domain_and_cap_errors() {
        let params = p23();
        assert!(matches!(
            g_recursive(&params, &u(0)),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            g_frontier_scan(&params, &u(0)),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            g_exhaustive(&params, &u(0)),
            Err(Error::OutOfRange(_))
        ));
        match g_exhaustive(&params, &u(5001)) {
            Err(Error::CapExceeded { needed, cap }) => {
                assert_eq!(needed, u(5001));
                assert_eq!(cap, 5000);
            }
            other => panic!("expected CapExceeded, got {other:?}"),
        }
        assert_eq!(
            g_exhaustive_with_cap(&params, &u(5001), 10_000).unwrap(),
            g_recursive(&params, &u(5001)).unwrap()
        );
        // A cache from one pair refuses to serve another.
        let mut cache = GCache::new(&params);
        let other = Params::new(2, 5).unwrap();
        assert!(matches!(
            g_recursive_with_cache(&other, &u(10), &mut cache),
            Err(Error::InvalidInput(_))
        ));
    }
}
