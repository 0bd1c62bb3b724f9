//! Property-based invariants: field axioms of the exact arithmetic, order
//! consistency between exact and float views, round trips, and discrepancy
//! sandwich bounds.

use num_rational::BigRational;
use proptest::prelude::*;

use lseq::counting::counts;
use lseq::digits::{admissible_value, AdmissibleIntegers, DigitString};
use lseq::discrepancy::{extreme_discrepancy, star_discrepancy, PointSet};
use lseq::sequence::radical_inverse;
use lseq::{LsParams, QGamma};

const PARAM_GRID: [(u32, u32); 8] = [
    (1, 1),
    (2, 1),
    (1, 2),
    (1, 3),
    (3, 2),
    (2, 0),
    (4, 0),
    (4, 4),
];

fn params_strategy() -> impl Strategy<Value = LsParams> {
    prop::sample::select(PARAM_GRID.to_vec())
        .prop_map(|(l, s)| LsParams::new(l, s).unwrap())
}

fn rational(n: i32, d: i32) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn element_strategy() -> impl Strategy<Value = QGamma> {
    (
        params_strategy(),
        -50..50i32,
        1..20i32,
        -50..50i32,
        1..20i32,
    )
        .prop_map(|(params, pn, pd, qn, qd)| {
            QGamma::new(rational(pn, pd), rational(qn, qd), params)
        })
}

/// Triple of elements over the same parameters.
fn triple_strategy() -> impl Strategy<Value = (QGamma, QGamma, QGamma)> {
    (params_strategy(), proptest::array::uniform6((-30..30i32, 1..15i32).prop_map(|(n, d)| (n, d))))
        .prop_map(|(params, coeffs)| {
            let make = |p: (i32, i32), q: (i32, i32)| {
                QGamma::new(rational(p.0, p.1), rational(q.0, q.1), params)
            };
            (
                make(coeffs[0], coeffs[1]),
                make(coeffs[2], coeffs[3]),
                make(coeffs[4], coeffs[5]),
            )
        })
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in triple_strategy()) {
        // Commutativity and associativity of both operations, and
        // distributivity of product over sum.
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        // Additive inverse and neutral elements.
        let params = a.params();
        prop_assert_eq!(&a + &(-&a), QGamma::zero(params));
        prop_assert_eq!(&a * &QGamma::one(params), a.clone());
    }

    #[test]
    fn exact_order_matches_float_order((a, b) in (params_strategy(), 0usize..400, 0usize..400)
        .prop_map(|(params, i, j)| {
            let ns: Vec<u128> = AdmissibleIntegers::new(params).take(400).collect();
            (
                radical_inverse(ns[i], &params).unwrap(),
                radical_inverse(ns[j], &params).unwrap(),
            )
        }))
    {
        let fa = a.to_f64();
        let fb = b.to_f64();
        if (fa - fb).abs() > 1e-9 {
            prop_assert_eq!(a.cmp(&b), fa.partial_cmp(&fb).unwrap());
        }
    }

    #[test]
    fn display_string_round_trips(x in element_strategy()) {
        let params = x.params();
        prop_assert_eq!(QGamma::parse(&x.to_display_string(), params).unwrap(), x.clone());
        prop_assert_eq!(QGamma::parse(&x.to_compact_string(), params).unwrap(), x);
    }

    #[test]
    fn digit_expansion_round_trips(n in 0u128..1_000_000_000, base in 2u32..12) {
        let digits = DigitString::from_value(n, base);
        prop_assert_eq!(digits.value(), n);
        for &d in digits.digits() {
            prop_assert!(d < base);
        }
        if n > 0 {
            prop_assert_ne!(*digits.digits().last().unwrap(), 0);
        }
    }

    #[test]
    fn discrepancy_permutation_invariant_and_sandwiched(
        mut points in prop::collection::vec(0.0f64..1.0, 1..120),
        rotate in 0usize..120,
    ) {
        let ps = PointSet::new(points.clone()).unwrap();
        let star = star_discrepancy(&ps);
        let extreme = extreme_discrepancy(&ps);
        prop_assert!(star > 0.0);
        prop_assert!(star <= extreme);
        prop_assert!(extreme <= 2.0 * star);
        prop_assert!(extreme <= 1.0);
        // Any reordering yields the identical result.
        let k = rotate % points.len();
        points.rotate_left(k);
        points.reverse();
        let permuted = PointSet::new(points).unwrap();
        prop_assert_eq!(extreme_discrepancy(&permuted).to_bits(), extreme.to_bits());
        prop_assert_eq!(star_discrepancy(&permuted).to_bits(), star.to_bits());
    }
}

/// Admissible strings of length at most `n` number exactly `t_n`:
/// exhaustively by filtering when the base power is small, and through the
/// digit-succession enumerator beyond that.
#[test]
fn admissible_string_counts_match_totals() {
    use num_traits::ToPrimitive;
    for l in 1..=5u32 {
        for s in 0..=5u32 {
            if l + s < 2 || l + s > 6 {
                continue;
            }
            let params = LsParams::new(l, s).unwrap();
            for n in 0..=12u32 {
                let bound = (params.base() as u128).pow(n);
                let expected = counts(n, &params).total.to_u128().unwrap();
                let got = if bound <= 2_000_000 {
                    (0..bound).filter(|&v| admissible_value(v, &params)).count() as u128
                } else if expected <= 2_000_000 {
                    AdmissibleIntegers::new(params)
                        .take_while(|&v| v < bound)
                        .count() as u128
                } else {
                    continue;
                };
                assert_eq!(got, expected, "({l},{s}) length {n}");
            }
        }
    }
}
