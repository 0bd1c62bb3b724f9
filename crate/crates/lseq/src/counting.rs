//! Interval counting for LS-partitions: the recurrences
//! `l_n = L*l_{n-1} + s_{n-1}`, `s_n = S*l_{n-1}`, hence
//! `t_n = L*t_{n-1} + S*t_{n-2}` with `t_0 = 1`, `t_1 = L + S`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::LsParams;

/// Interval counts at refinement depth `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    pub depth: u32,
    /// `t_n`, the total number of intervals (equivalently, the number of
    /// admissible digit strings of length at most `n`).
    pub total: BigUint,
    /// `l_n`, the number of long intervals.
    pub long: BigUint,
    /// `s_n`, the number of short intervals.
    pub short: BigUint,
    /// `d_n = (L+S)^n - t_n`, the number of inadmissible strings.
    pub inadmissible: BigUint,
}

/// Counts at depth `n` by the exact recurrence.
pub fn counts(depth: u32, params: &LsParams) -> CountVector {
    let l = BigUint::from(params.l());
    let s = BigUint::from(params.s());
    let mut long = BigUint::one();
    let mut short = BigUint::zero();
    for _ in 0..depth {
        let next_long = &l * &long + &short;
        short = &s * &long;
        long = next_long;
    }
    let total = &long + &short;
    let inadmissible = BigUint::from(params.base()).pow(depth) - &total;
    CountVector {
        depth,
        total,
        long,
        short,
        inadmissible,
    }
}

/// `t_n` for `n = 0..=depth` as a vector (u64-sized; panics past 2^64).
pub fn totals_up_to(depth: u32, params: &LsParams) -> Vec<u64> {
    let l = params.l() as u128;
    let s = params.s() as u128;
    let mut out = Vec::with_capacity(depth as usize + 1);
    let (mut prev, mut cur) = (1u128, params.base() as u128);
    out.push(1u64);
    for _ in 1..=depth {
        out.push(u64::try_from(cur).expect("t_n exceeds u64"));
        let next = l * cur + s * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// Largest depth `n` with `t_n <= cap` (at least 0).
pub fn max_depth_with_total_at_most(cap: u64, params: &LsParams) -> u32 {
    let l = params.l() as u128;
    let s = params.s() as u128;
    let (mut prev, mut cur) = (1u128, params.base() as u128);
    let mut depth = 0;
    while cur <= cap as u128 {
        depth += 1;
        let next = l * cur + s * prev;
        prev = cur;
        cur = next;
    }
    depth
}

/// Smallest depth `n` with `t_n >= target`.
pub fn min_depth_with_total_at_least(target: u64, params: &LsParams) -> u32 {
    let l = params.l() as u128;
    let s = params.s() as u128;
    if target <= 1 {
        return 0;
    }
    let (mut prev, mut cur) = (1u128, params.base() as u128);
    let mut depth = 1;
    while cur < target as u128 {
        let next = l * cur + s * prev;
        prev = cur;
        cur = next;
        depth += 1;
    }
    depth
}

/// Floating-point evaluation of the explicit solution
/// `t_n = (1 + S*g)/(1 + S*g^2) * (1/g)^n - (S*g - S*g^2)/(1 + S*g^2) * (-S*g)^n`,
/// used only as a cross-check of the exact recurrence.
pub fn counts_closed_form(depth: u32, params: &LsParams) -> f64 {
    let g = params.gamma_f64();
    let s = params.s() as f64;
    let denom = 1.0 + s * g * g;
    let a = (1.0 + s * g) / denom;
    let b = (s * g - s * g * g) / denom;
    a * g.recip().powi(depth as i32) - b * (-s * g).powi(depth as i32)
}

/// Relative agreement between the closed form and the exact recurrence.
pub fn closed_form_relative_error(depth: u32, params: &LsParams) -> f64 {
    let exact = counts(depth, params).total.to_f64().expect("t_n to f64");
    let approx = counts_closed_form(depth, params);
    (approx - exact).abs() / exact
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::admissible_value;

    fn params(l: u32, s: u32) -> LsParams {
        LsParams::new(l, s).unwrap()
    }

    #[test]
    fn fibonacci_totals() {
        let pr = params(1, 1);
        let totals: Vec<u64> = (0..=5).map(|n| counts(n, &pr).total.to_u64().unwrap()).collect();
        assert_eq!(totals, vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(totals_up_to(5, &pr), vec![1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn base_b_totals_are_powers() {
        let pr = params(2, 0);
        for n in 0..=20 {
            assert_eq!(counts(n, &pr).total, BigUint::from(2u64).pow(n));
        }
    }

    #[test]
    fn inadmissible_count_matches_brute_force() {
        // 4-bit binary strings containing "11" (adjacent in either scan
        // direction the count is the same): brute force gives 8.
        let brute = (0u32..16)
            .filter(|&n| {
                let bits: Vec<u32> = (0..4).map(|k| (n >> k) & 1).collect();
                bits.windows(2).any(|w| w[0] == 1 && w[1] == 1)
            })
            .count();
        assert_eq!(brute, 8);
        let cv = counts(4, &params(1, 1));
        assert_eq!(cv.inadmissible, BigUint::from(8u32));
        assert_eq!(cv.total, BigUint::from(8u32));
    }

    #[test]
    fn structure_identities() {
        for (l, s) in [(1, 1), (2, 1), (1, 3), (3, 2), (4, 4)] {
            let pr = params(l, s);
            for n in 1..=12 {
                let cv = counts(n, &pr);
                let prev = counts(n - 1, &pr);
                assert_eq!(cv.total, &cv.long + &cv.short);
                assert_eq!(cv.short, BigUint::from(s) * &prev.long);
                assert_eq!(cv.long, BigUint::from(l) * &prev.long + &prev.short);
            }
        }
    }

    #[test]
    fn exhaustive_admissible_string_count() {
        // Values below base^n are exactly the admissible strings of length
        // at most n; their number must be t_n.
        for (l, s) in [(1, 1), (2, 0), (1, 2), (2, 2), (3, 1)] {
            let pr = params(l, s);
            for n in 0..=8u32 {
                let bound = (pr.base() as u128).pow(n);
                let brute = (0..bound).filter(|&v| admissible_value(v, &pr)).count();
                assert_eq!(
                    BigUint::from(brute),
                    counts(n, &pr).total,
                    "({l},{s}) depth {n}"
                );
            }
        }
    }

    #[test]
    fn closed_form_matches_recurrence() {
        let pr = params(1, 1);
        assert!((counts_closed_form(5, &pr) - 13.0).abs() < 1e-6);
        let pr = params(1, 3);
        assert!((counts_closed_form(0, &pr) - 1.0).abs() < 1e-9);
        let expected = [1.0, 4.0, 7.0, 19.0, 40.0, 97.0, 217.0];
        for (n, want) in expected.iter().enumerate() {
            assert!((counts_closed_form(n as u32, &pr) - want).abs() < 1e-6);
        }
        for (l, s) in [(1, 1), (2, 1), (1, 2), (1, 3), (4, 4)] {
            let pr = params(l, s);
            for n in 0..=30 {
                assert!(
                    closed_form_relative_error(n, &pr) <= 1e-6,
                    "({l},{s}) depth {n}"
                );
            }
        }
    }

    #[test]
    fn depth_cap_helpers() {
        let pr = params(1, 1);
        assert_eq!(max_depth_with_total_at_most(10_000, &pr), 18); // t_18 = 6765
        assert_eq!(max_depth_with_total_at_most(1, &pr), 0);
        assert_eq!(min_depth_with_total_at_least(1, &pr), 0);
        assert_eq!(min_depth_with_total_at_least(2, &pr), 1);
        assert_eq!(min_depth_with_total_at_least(21, &pr), 6); // t_6 = 21
        assert_eq!(min_depth_with_total_at_least(22, &pr), 7);
    }
}
