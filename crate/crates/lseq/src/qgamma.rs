use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, LsParams, Result};

/// An exact element `p + q * gamma` of the quadratic extension generated by
/// the positive root `gamma` of `L*x + S*x^2 = 1`.
///
/// Products are reduced with `gamma^2 = (1 - L*gamma) / S`, so every element
/// keeps the canonical two-coordinate form. When `gamma` happens to be
/// rational (always for `S = 0`, and whenever `L^2 + 4S` is a perfect
/// square) the `q` coordinate is folded into `p`, which keeps the
/// representation unique: two elements over the same parameters are equal
/// exactly when their coordinates are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct QGamma {
    p: BigRational,
    q: BigRational,
    params: LsParams,
}

impl QGamma {
    /// Builds `p + q * gamma`, folding `q` into `p` when `gamma` is rational.
    pub fn new(p: BigRational, q: BigRational, params: LsParams) -> Self {
        match params.gamma_rational() {
            Some(g) if !q.is_zero() => QGamma {
                p: p + q * g,
                q: BigRational::zero(),
                params,
            },
            _ => QGamma { p, q, params },
        }
    }

    pub fn zero(params: LsParams) -> Self {
        QGamma {
            p: BigRational::zero(),
            q: BigRational::zero(),
            params,
        }
    }

    pub fn one(params: LsParams) -> Self {
        QGamma::from_rational(BigRational::from_integer(1.into()), params)
    }

    pub fn from_rational(p: BigRational, params: LsParams) -> Self {
        QGamma {
            p,
            q: BigRational::zero(),
            params,
        }
    }

    pub fn from_integer(n: i64, params: LsParams) -> Self {
        QGamma::from_rational(BigRational::from_integer(n.into()), params)
    }

    /// Rational coordinate of the `gamma`-free part.
    pub fn p(&self) -> &BigRational {
        &self.p
    }

    /// Rational coefficient of `gamma`.
    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// `Some(p)` when the element is rational (no `gamma` component).
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.q.is_zero().then_some(&self.p)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.params.same(&rhs.params)?;
        Ok(QGamma {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
            params: self.params,
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.params.same(&rhs.params)?;
        Ok(QGamma {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
            params: self.params,
        })
    }

    /// Full ring product, reduced with `gamma^2 = (1 - L*gamma) / S`.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.params.same(&rhs.params)?;
        let cross = &self.p * &rhs.q + &self.q * &rhs.p;
        let qq = &self.q * &rhs.q;
        let mut p = &self.p * &rhs.p;
        let mut q = cross;
        if !qq.is_zero() {
            // Irrational gamma (a rational gamma has q = 0 on both sides),
            // so S >= 1 here.
            let s = BigRational::from_integer(self.params.s().into());
            let l = BigRational::from_integer(self.params.l().into());
            p += &qq / &s;
            q -= qq * l / s;
        }
        Ok(QGamma {
            p,
            q,
            params: self.params,
        })
    }

    /// Multiplies by `gamma`: `(p + q*gamma)*gamma = q/S + (p - q*L/S)*gamma`.
    pub fn mul_gamma(&self) -> Self {
        if let Some(g) = self.params.gamma_rational() {
            debug_assert!(self.q.is_zero());
            return QGamma {
                p: &self.p * g,
                q: BigRational::zero(),
                params: self.params,
            };
        }
        let s = BigRational::from_integer(self.params.s().into());
        let l = BigRational::from_integer(self.params.l().into());
        QGamma {
            p: &self.q / &s,
            q: &self.p - &self.q * l / s,
            params: self.params,
        }
    }

    /// Exact `gamma^k` (`gamma^0 = 1`).
    pub fn pow_gamma(k: u32, params: LsParams) -> Self {
        let mut acc = QGamma::one(params);
        for _ in 0..k {
            acc = acc.mul_gamma();
        }
        acc
    }

    /// Scales by an exact rational factor.
    pub fn scale(&self, factor: &BigRational) -> Self {
        QGamma {
            p: &self.p * factor,
            q: &self.q * factor,
            params: self.params,
        }
    }

    /// Exact sign of the real value `p + q * gamma`.
    ///
    /// For irrational `gamma` the sign of `p + q*gamma` reduces to comparing
    /// `gamma` with the rational `-p/q`, which is decided exactly by the
    /// sign of the minimal polynomial `S*x^2 + L*x - 1` at that rational
    /// (the polynomial is strictly increasing on `x >= 0` and its only
    /// nonnegative root is `gamma`).
    pub fn sign(&self) -> Ordering {
        if self.q.is_zero() {
            return self.p.cmp(&BigRational::zero());
        }
        let (p, q, flip) = if self.q.is_positive() {
            (self.p.clone(), self.q.clone(), false)
        } else {
            (-self.p.clone(), -self.q.clone(), true)
        };
        // sign(p + q*gamma) with q > 0 is sign(gamma - r) at r = -p/q.
        let r = -p / q;
        let ord = if !r.is_positive() {
            Ordering::Greater
        } else {
            let s = BigRational::from_integer(self.params.s().into());
            let l = BigRational::from_integer(self.params.l().into());
            let value = s * &r * &r + l * &r - BigRational::from_integer(1.into());
            match value.cmp(&BigRational::zero()) {
                // f(r) < 0 means r < gamma.
                Ordering::Less => Ordering::Greater,
                Ordering::Greater => Ordering::Less,
                // A rational root would contradict irrationality of gamma.
                Ordering::Equal => unreachable!("rational root of the minimal polynomial"),
            }
        };
        if flip {
            ord.reverse()
        } else {
            ord
        }
    }

    /// Correctly rounded (up to the dyadic approximation budget) double
    /// value of `p + q * gamma`.
    ///
    /// The naive `p + q * gamma_f64` evaluation cancels catastrophically for
    /// high powers of `gamma` (the coordinates grow geometrically while the
    /// value shrinks), so the value is assembled exactly against a dyadic
    /// approximation of `gamma` carrying 192 guard bits beyond the size of
    /// `q`, then rounded once.
    pub fn to_f64(&self) -> f64 {
        if self.q.is_zero() {
            return self.p.to_f64().expect("rational to f64");
        }
        let qbits = self.q.numer().bits() + self.q.denom().bits();
        let g = self.params.gamma_dyadic(192 + qbits);
        (&self.p + &self.q * g).to_f64().expect("value to f64")
    }

    /// Canonical string form `p/q + r/s*g`, e.g. `-3/1 + 5/1*g`.
    pub fn to_display_string(&self) -> String {
        format!(
            "{}/{} + {}/{}*g",
            self.p.numer(),
            self.p.denom(),
            self.q.numer(),
            self.q.denom()
        )
    }

    /// Whitespace-free variant used in CSV output, e.g. `-3/1+5/1*g`.
    pub fn to_compact_string(&self) -> String {
        format!(
            "{}/{}+{}/{}*g",
            self.p.numer(),
            self.p.denom(),
            self.q.numer(),
            self.q.denom()
        )
    }

    /// Parses either string form back into an element.
    pub fn parse(input: &str, params: LsParams) -> Result<Self> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        // The separator is the first '+' after the leading sign position.
        let sep = compact[1..]
            .find('+')
            .map(|i| i + 1)
            .ok_or_else(|| err("missing '+' separator"))?;
        let p_part = &compact[..sep];
        let q_part = compact[sep + 1..]
            .strip_suffix("*g")
            .ok_or_else(|| err("missing '*g' suffix"))?;
        let parse_ratio = |text: &str| -> Result<BigRational> {
            let (num, den) = text.split_once('/').ok_or_else(|| err("missing '/'"))?;
            let num = BigInt::from_str(num).map_err(|e| err(&e.to_string()))?;
            let den = BigInt::from_str(den).map_err(|e| err(&e.to_string()))?;
            if !den.is_positive() {
                return Err(err("denominator must be positive"));
            }
            Ok(BigRational::new(num, den))
        };
        Ok(QGamma::new(parse_ratio(p_part)?, parse_ratio(q_part)?, params))
    }
}

impl fmt::Display for QGamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_display_string())
    }
}

impl fmt::Debug for QGamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QGamma[{}]({})", self.params, self.to_display_string())
    }
}

// Elements over different parameter sets are unordered (`partial_cmp`
// returns `None`, `cmp` panics); collections must hold one parameter set.
#[allow(clippy::non_canonical_partial_ord_impl)]
impl PartialOrd for QGamma {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.params != other.params {
            return None;
        }
        Some(self.checked_sub(other).unwrap().sign())
    }
}

impl Ord for QGamma {
    fn cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other)
            .expect("comparing elements over different parameters")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &QGamma {
            type Output = QGamma;
            fn $method(self, rhs: &QGamma) -> QGamma {
                self.$checked(rhs).expect("parameter mismatch")
            }
        }
        impl $trait for QGamma {
            type Output = QGamma;
            fn $method(self, rhs: QGamma) -> QGamma {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QGamma {
    type Output = QGamma;
    fn neg(self) -> QGamma {
        QGamma {
            p: -self.p.clone(),
            q: -self.q.clone(),
            params: self.params,
        }
    }
}

impl Neg for QGamma {
    type Output = QGamma;
    fn neg(self) -> QGamma {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(l: u32, s: u32) -> LsParams {
        LsParams::new(l, s).unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn element(p: i64, q: i64, params: LsParams) -> QGamma {
        QGamma::new(ratio(p, 1), ratio(q, 1), params)
    }

    #[test]
    fn defining_identity_is_exact() {
        for l in 1..=6 {
            for s in 0..=6 {
                if l + s < 2 {
                    continue;
                }
                let pr = params(l, s);
                let g = pr.gamma();
                let lhs = g.scale(&ratio(l as i64, 1))
                    + g.mul_gamma().scale(&ratio(s as i64, 1));
                assert_eq!(lhs, QGamma::one(pr), "L*g + S*g^2 != 1 for ({l},{s})");
            }
        }
    }

    #[test]
    fn addition_examples() {
        let pr = params(1, 1);
        let g = pr.gamma();
        let g2 = g.mul_gamma();
        // gamma + gamma^2 = 1 for L = S = 1.
        assert_eq!(&g + &g2, QGamma::one(pr));
        // 0 + x = x.
        assert_eq!(QGamma::zero(pr) + g.clone(), g);
        // gamma + gamma^3.
        let sum = &g + &QGamma::pow_gamma(3, pr);
        assert_eq!(sum, element(-1, 3, pr));
        assert_abs_diff_eq!(sum.to_f64(), 0.854_101_966_2, epsilon = 1e-9);
    }

    #[test]
    fn mismatched_params_error() {
        let a = QGamma::one(params(1, 1));
        let b = QGamma::one(params(2, 1));
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::ParamsMismatch(..))
        ));
        assert_eq!(a.partial_cmp(&b), None);
    }

    #[test]
    fn gamma_squared_reduction() {
        let pr = params(1, 1);
        let g2 = pr.gamma().mul_gamma();
        assert_eq!(g2, element(1, -1, pr));
        assert_abs_diff_eq!(g2.to_f64(), 0.381_966_011_3, epsilon = 1e-9);

        assert!(QGamma::zero(pr).mul_gamma().is_zero());

        let pr = params(2, 1);
        let g2 = pr.gamma().mul_gamma();
        assert_eq!(g2, element(1, -2, pr));
        assert_abs_diff_eq!(g2.to_f64(), 0.171_572_875_3, epsilon = 1e-9);
    }

    #[test]
    fn gamma_powers() {
        let pr = params(1, 1);
        assert_eq!(QGamma::pow_gamma(0, pr), QGamma::one(pr));
        // Fibonacci coefficients: gamma^3 = 2*gamma - 1, gamma^5 = 5*gamma - 3.
        let g3 = QGamma::pow_gamma(3, pr);
        assert_eq!(g3, element(-1, 2, pr));
        assert_abs_diff_eq!(g3.to_f64(), 0.236_067_977_5, epsilon = 1e-9);
        let g5 = QGamma::pow_gamma(5, pr);
        assert_eq!(g5, element(-3, 5, pr));
        assert_abs_diff_eq!(g5.to_f64(), 0.090_169_943_7, epsilon = 1e-9);
    }

    #[test]
    fn power_floats_match_float_powers() {
        for (l, s) in [(1, 1), (2, 1), (1, 3), (3, 2)] {
            let pr = params(l, s);
            for k in 0..=64 {
                let exact = QGamma::pow_gamma(k, pr).to_f64();
                let float = pr.gamma_f64().powi(k as i32);
                assert!(
                    (exact - float).abs() <= 1e-12,
                    "gamma^{k} mismatch for ({l},{s}): {exact} vs {float}"
                );
            }
        }
    }

    #[test]
    fn float_conversion_examples() {
        let pr = params(1, 1);
        assert_eq!(QGamma::zero(pr).to_f64(), 0.0);
        assert_abs_diff_eq!(pr.gamma().to_f64(), 0.618_033_988_7, epsilon = 1e-9);
        // gamma^2 + gamma^4 = 3 - 4*gamma.
        let x = QGamma::pow_gamma(2, pr) + QGamma::pow_gamma(4, pr);
        assert_eq!(x, element(3, -4, pr));
        assert_abs_diff_eq!(x.to_f64(), 0.527_864_045_0, epsilon = 1e-9);
    }

    #[test]
    fn exact_ordering_examples() {
        let pr = params(1, 1);
        let g = pr.gamma();
        assert!(g > g.mul_gamma());
        assert_eq!(g.cmp(&g), Ordering::Equal);
        // gamma + gamma^4 < gamma + gamma^3.
        let a = &g + &QGamma::pow_gamma(4, pr);
        let b = &g + &QGamma::pow_gamma(3, pr);
        assert!(a < b);
        assert_abs_diff_eq!(a.to_f64(), 0.763_932_022_5, epsilon = 1e-9);
    }

    #[test]
    fn rational_gamma_folds() {
        // gamma = 1/2 for (1, 2): q must always normalize to zero.
        let pr = params(1, 2);
        let g = pr.gamma();
        assert!(g.q().is_zero());
        assert_eq!(g.as_rational(), Some(&ratio(1, 2)));
        let x = QGamma::new(ratio(1, 4), ratio(3, 1), pr);
        assert_eq!(x.as_rational(), Some(&ratio(7, 4)));
        // Same for S = 0.
        let pr = params(3, 0);
        assert_eq!(pr.gamma().as_rational(), Some(&ratio(1, 3)));
        assert_eq!(
            QGamma::pow_gamma(4, pr).as_rational(),
            Some(&ratio(1, 81))
        );
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<QGamma>();
        assert_send_sync::<LsParams>();
        let g = params(1, 1).gamma();
        let handle = std::thread::spawn(move || g.mul_gamma().to_f64());
        assert!(handle.join().unwrap() > 0.0);
    }

    #[test]
    fn string_round_trip() {
        let pr = params(1, 1);
        let g5 = QGamma::pow_gamma(5, pr);
        assert_eq!(g5.to_display_string(), "-3/1 + 5/1*g");
        assert_eq!(g5.to_compact_string(), "-3/1+5/1*g");
        assert_eq!(QGamma::parse("-3/1 + 5/1*g", pr).unwrap(), g5);
        assert_eq!(QGamma::parse("-3/1+5/1*g", pr).unwrap(), g5);
        let x = QGamma::new(ratio(1, 1), ratio(-1, 1), pr);
        assert_eq!(QGamma::parse(&x.to_compact_string(), pr).unwrap(), x);
        assert!(QGamma::parse("nonsense", pr).is_err());
        assert!(QGamma::parse("1/0 + 0/1*g", pr).is_err());
    }
}
