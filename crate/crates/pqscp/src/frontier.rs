//! The frontier `Z_m`: maximal parts below `m`, and the witness sets.
//!
//! `Z_m` holds, for each `b = 0 .. floor(log_q m)`, the point
//! `zeta(b) = (floor(log_p(m / q^b)), b)` — the largest power of `p` times
//! `q^b` that still fits under `m`. These are exactly the maximal elements
//! of `E = {p^a q^b}` below `m` in the divisibility order, so the heaviest
//! chain bounded by `m` starts at one of them: `G(m) = max h` over `Z_m`.
//! `Y_m` is the argmax set (one or two points), `z_m` the largest part
//! value, `y_m = min Y_m` the canonical witness.
//!
//! Exponents are never derived from floating-point logarithms; every floor
//! is an exact integer-power binary search. The floors here sit exactly on
//! the decision boundary of the whole theory, where a one-ulp float error
//! flips the answer.

use num_bigint::BigUint;
use num_traits::One;

use crate::chain::{h, LatticePoint};
use crate::error::{Error, Result};
use crate::params::Params;

/// The frontier of `m`: one maximal point per `q`-exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierSet {
    m: BigUint,
    points: Vec<LatticePoint>,
    values: Vec<BigUint>,
    hvals: Vec<BigUint>,
}

impl FrontierSet {
    /// The bound `m`.
    pub fn m(&self) -> &BigUint {
        &self.m
    }

    /// Number of frontier points, `floor(log_q m) + 1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Whether the set is empty (never, for valid `m >= 1`).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Frontier points indexed by `b`.
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Part values `p^a q^b`, same indexing.
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// Heaviest-chain weights `h(a, b)`, same indexing.
    pub fn h_values(&self) -> &[BigUint] {
        &self.hvals
    }

    /// Index of the largest part value (unique: part values are injective).
    pub fn z_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.values.len() {
            if self.values[i] > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Indices achieving the maximal `h` (one or two of them).
    pub fn argmax_h_indices(&self) -> Vec<usize> {
        let mut best = vec![0usize];
        for i in 1..self.hvals.len() {
            if self.hvals[i] > self.hvals[best[0]] {
                best.clear();
                best.push(i);
            } else if self.hvals[i] == self.hvals[best[0]] {
                best.push(i);
            }
        }
        best
    }
}

fn require_positive(m: &BigUint) -> Result<()> {
    if num_traits::Zero::is_zero(m) {
        Err(Error::OutOfRange(
            "m must be at least 1 (weights are defined on positive integers)".into(),
        ))
    } else {
        Ok(())
    }
}

/// The frontier point at `q`-exponent `b`: the largest `a` with
/// `p^a q^b <= m`, found by exact exponent search.
pub fn zeta(params: &Params, m: &BigUint, b: u64) -> Result<LatticePoint> {
    require_positive(m)?;
    let level = params.pow_q(b);
    if &level > m {
        return Err(Error::OutOfRange(format!(
            "b = {b} exceeds floor(log_q m) for m = {m}"
        )));
    }
    // p^a q^b <= m  <=>  p^a <= floor(m / q^b), both sides integers.
    let a = params.floor_log_p(&(m / level));
    Ok(LatticePoint::new(a, b))
}

/// The whole frontier `Z_m`.
pub fn z_set(params: &Params, m: &BigUint) -> Result<FrontierSet> {
    require_positive(m)?;
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut hvals = Vec::new();
    let mut rest = m.clone(); // floor(m / q^b), updated incrementally
    let q = params.q_big();
    let mut b = 0u64;
    loop {
        let a = params.floor_log_p(&rest);
        let pt = LatticePoint::new(a, b);
        values.push(pt.value(params));
        hvals.push(h(params, a, b));
        points.push(pt);
        rest /= &q;
        if rest.is_one() || num_traits::Zero::is_zero(&rest) {
            if rest.is_one() {
                // One more level: q^(b+1) <= m still holds.
                let pt = LatticePoint::new(0, b + 1);
                values.push(pt.value(params));
                hvals.push(h(params, 0, b + 1));
                points.push(pt);
            }
            break;
        }
        b += 1;
    }
    Ok(FrontierSet {
        m: m.clone(),
        points,
        values,
        hvals,
    })
}

/// The largest maximal part below `m`.
pub fn z_max(params: &Params, m: &BigUint) -> Result<LatticePoint> {
    let set = z_set(params, m)?;
    Ok(set.points[set.z_index()])
}

/// The argmax set `Y_m` of `h` over the frontier, in increasing part value.
pub fn y_set(params: &Params, m: &BigUint) -> Result<Vec<LatticePoint>> {
    let set = z_set(params, m)?;
    let mut winners: Vec<usize> = set.argmax_h_indices();
    winners.sort_by(|&i, &j| set.values[i].cmp(&set.values[j]));
    Ok(winners.into_iter().map(|i| set.points[i]).collect())
}

/// The canonical witness `y_m = min Y_m` (smallest part value among the
/// argmax points; equivalently the one with the smallest `q`-exponent).
pub fn y_min(params: &Params, m: &BigUint) -> Result<LatticePoint> {
    Ok(y_set(params, m)?[0])
}

/// Outcome of replaying the frontier recurrences at one `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecurrenceReport {
    /// `Z_(qm) = q Z_m ∪ {p^floor(log_p(qm))}` held.
    pub q_step_holds: bool,
    /// `Z_(pm) = p Z_m`, plus `{q^(L+1)}` exactly when `floor(log_q(pm))`
    /// exceeds `floor(log_q m)`, held.
    pub p_step_holds: bool,
    /// Whether the `p` step did append the extra pure `q`-power.
    pub p_step_added_power: bool,
}

/// Recomputes `Z_(pm)` and `Z_(qm)` from scratch and checks both against
/// the images of `Z_m` under multiplication by `p` resp. `q`.
pub fn check_z_recurrences(params: &Params, m: &BigUint) -> Result<RecurrenceReport> {
    let base = z_set(params, m)?;
    let qm = m * params.q_big();
    let pm = m * params.p_big();

    // q step: shift every point up one q-level and prepend the pure p-power.
    let mut expected_q: Vec<LatticePoint> = Vec::with_capacity(base.len() + 1);
    expected_q.push(LatticePoint::new(params.floor_log_p(&qm), 0));
    expected_q.extend(
        base.points
            .iter()
            .map(|pt| LatticePoint::new(pt.a, pt.b + 1)),
    );
    let q_step_holds = z_set(params, &qm)?.points == expected_q;

    // p step: shift every point up one p-level; a new top q-level appears
    // exactly when floor(log_q (pm)) > floor(log_q m).
    let mut expected_p: Vec<LatticePoint> = base
        .points
        .iter()
        .map(|pt| LatticePoint::new(pt.a + 1, pt.b))
        .collect();
    let grew = params.floor_log_q(&pm) > params.floor_log_q(m);
    if grew {
        expected_p.push(LatticePoint::new(0, base.points.len() as u64));
    }
    let p_step_holds = z_set(params, &pm)?.points == expected_p;

    Ok(RecurrenceReport {
        q_step_holds,
        p_step_holds,
        p_step_added_power: grew,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::h_compare;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn p23() -> Params {
        Params::new(2, 3).unwrap()
    }

    #[test]
    fn frontier_of_750() {
        let params = p23();
        let set = z_set(&params, &u(750)).unwrap();
        assert_eq!(set.len(), 7);
        let want_points = [(9, 0), (7, 1), (6, 2), (4, 3), (3, 4), (1, 5), (0, 6)];
        let want_values = [512u64, 384, 576, 432, 648, 486, 729];
        let want_h = [1023u64, 766, 1147, 850, 1255, 850, 1093];
        for (i, ((a, b), (v, hv))) in want_points
            .iter()
            .zip(want_values.iter().zip(want_h.iter()))
            .enumerate()
        {
            assert_eq!(set.points()[i], LatticePoint::new(*a, *b));
            assert_eq!(set.values()[i], u(*v));
            assert_eq!(set.h_values()[i], u(*hv));
        }
        assert_eq!(set.z_index(), 6); // 729
        assert_eq!(set.argmax_h_indices(), vec![4]); // h = 1255 at (3,4)
    }

    #[test]
    fn zeta_cases() {
        let params = p23();
        assert_eq!(zeta(&params, &u(750), 4).unwrap(), LatticePoint::new(3, 4));
        assert_eq!(zeta(&params, &u(1), 0).unwrap(), LatticePoint::new(0, 0));
        assert!(matches!(
            zeta(&params, &u(750), 7),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            zeta(&params, &u(0), 0),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn frontier_points_are_maximal() {
        // p^a q^b <= m < p^(a+1) q^b for every frontier point.
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5), (3, 7), (5, 7)] {
            let params = Params::new(p, q).unwrap();
            for m in [1u64, 2, 17, 72, 100, 729, 750, 5000, 999_983] {
                let m = u(m);
                let set = z_set(&params, &m).unwrap();
                assert_eq!(
                    set.len() as u64,
                    params.floor_log_q(&m) + 1,
                    "({p},{q}) m={m}: size"
                );
                for pt in set.points() {
                    let v = pt.value(&params);
                    assert!(v <= m, "({p},{q}) m={m}: {pt} too big");
                    assert!(
                        &v * params.p_big() > m,
                        "({p},{q}) m={m}: {pt} not maximal"
                    );
                }
            }
        }
    }

    #[test]
    fn z_set_matches_brute_force_maximal_elements() {
        // Enumerate all smooth numbers <= m; keep those maximal under
        // lattice divisibility; must equal Z_m as a set.
        let params = p23();
        for m_small in [1u64, 2, 3, 4, 72, 100, 250, 729, 750] {
            let m = u(m_small);
            let mut smooth: Vec<LatticePoint> = Vec::new();
            for b in 0..=params.floor_log_q(&m) {
                for a in 0..=params.floor_log_p(&(&m / params.pow_q(b))) {
                    smooth.push(LatticePoint::new(a, b));
                }
            }
            let mut maximal: Vec<LatticePoint> = smooth
                .iter()
                .filter(|pt| {
                    !smooth
                        .iter()
                        .any(|other| *other != **pt && other.dominates(pt))
                })
                .copied()
                .collect();
            maximal.sort_by_key(|pt| pt.b);
            let set = z_set(&params, &m).unwrap();
            assert_eq!(set.points(), &maximal[..], "m = {m_small}");
        }
    }

    #[test]
    fn z_max_cases() {
        let params = p23();
        let got = z_max(&params, &u(750)).unwrap();
        assert_eq!(got, LatticePoint::new(0, 6));
        assert_eq!(got.value(&params), u(729));
        assert_eq!(z_max(&params, &u(100)).unwrap().value(&params), u(96));
        // m itself smooth: the frontier tops out at m.
        for m in [648u64, 729, 512, 1] {
            assert_eq!(z_max(&params, &u(m)).unwrap().value(&params), u(m));
        }
    }

    #[test]
    fn witness_sets() {
        let params = p23();
        assert_eq!(y_set(&params, &u(750)).unwrap(), vec![LatticePoint::new(3, 4)]);
        assert_eq!(
            y_set(&params, &u(486)).unwrap(),
            vec![LatticePoint::new(4, 3), LatticePoint::new(1, 5)]
        );
        assert_eq!(y_set(&params, &u(729)).unwrap(), vec![LatticePoint::new(3, 4)]);
        assert_eq!(y_min(&params, &u(486)).unwrap().value(&params), u(432));
        assert_eq!(y_min(&params, &u(750)).unwrap(), LatticePoint::new(3, 4));
        assert_eq!(y_min(&params, &u(1)).unwrap(), LatticePoint::new(0, 0));
    }

    #[test]
    fn witness_set_size_and_band() {
        // |Y_m| in {1,2}; every winner's q-exponent is at most that of z_m;
        // h agreement between h-values and h_compare ordering.
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let params = Params::new(p, q).unwrap();
            for m_small in 1u64..=2000 {
                let m = u(m_small);
                let winners = y_set(&params, &m).unwrap();
                assert!(
                    winners.len() == 1 || winners.len() == 2,
                    "({p},{q}) m={m_small}: |Y| = {}",
                    winners.len()
                );
                let top_b = z_max(&params, &m).unwrap().b;
                for w in &winners {
                    assert!(w.b <= top_b, "({p},{q}) m={m_small}: {w} above z band");
                }
                if winners.len() == 2 {
                    assert_eq!(
                        h_compare(&params, winners[0], winners[1]),
                        std::cmp::Ordering::Equal
                    );
                }
            }
        }
    }

    #[test]
    fn recurrences_hold() {
        for (p, q) in [(2u64, 3u64), (3, 5), (3, 7)] {
            let params = Params::new(p, q).unwrap();
            for m_small in 1u64..=400 {
                let report = check_z_recurrences(&params, &u(m_small)).unwrap();
                assert!(report.q_step_holds, "({p},{q}) m={m_small}: q step");
                assert!(report.p_step_holds, "({p},{q}) m={m_small}: p step");
            }
        }
        // Anchors: Z_750 from Z_250 gains 2^9 = 512 at b = 0.
        let params = p23();
        let report = check_z_recurrences(&params, &u(250)).unwrap();
        assert!(report.q_step_holds);
        let z750 = z_set(&params, &u(750)).unwrap();
        assert_eq!(z750.values()[0], u(512));
        // And from Z_375 by the p step (375 * 2 = 750).
        let report = check_z_recurrences(&params, &u(375)).unwrap();
        assert!(report.p_step_holds);
        // m = 1: Z_q = q Z_1 ∪ {p^floor(rho)}.
        let report = check_z_recurrences(&params, &u(1)).unwrap();
        assert!(report.q_step_holds && report.p_step_holds);
    }
}
