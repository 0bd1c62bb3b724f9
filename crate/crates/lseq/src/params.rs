use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;

use crate::qgamma::QGamma;
use crate::{Error, Result};

/// The parameter pair `(L, S)` of an LS-sequence together with the positive
/// root `gamma` of `L*x + S*x^2 = 1`.
///
/// `gamma` is the long-interval length of the template partition (`L` long
/// intervals of length `gamma` followed by `S` short intervals of length
/// `gamma^2`) and the contraction ratio of the branch maps. For `S = 0` the
/// equation is linear and `gamma = 1/L`; `gamma` is also rational whenever
/// the discriminant `L^2 + 4S` is a perfect square (for example `S = L + 1`
/// gives `gamma = 1/(L+1)`).
#[derive(Debug, Clone, Copy)]
pub struct LsParams {
    l: u32,
    s: u32,
    gamma: f64,
    /// `Some((num, den))` in lowest terms when `gamma` is rational.
    gamma_rational: Option<(u64, u64)>,
}

impl PartialEq for LsParams {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && self.s == other.s
    }
}

impl Eq for LsParams {}

impl std::fmt::Display for LsParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.l, self.s)
    }
}

impl LsParams {
    /// Validates `L >= 1`, `S >= 0`, `L + S >= 2` and solves for `gamma`.
    pub fn new(l: u32, s: u32) -> Result<Self> {
        if l < 1 || l + s < 2 {
            return Err(Error::InvalidParams { l, s });
        }
        let gamma_rational = rational_root(l, s);
        let gamma = match gamma_rational {
            Some((num, den)) => num as f64 / den as f64,
            None => irrational_root(l, s),
        };
        let params = LsParams {
            l,
            s,
            gamma,
            gamma_rational,
        };
        debug_assert!(params.float_residual() <= 1e-15);
        Ok(params)
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// The digit base `L + S`.
    pub fn base(&self) -> u32 {
        self.l + self.s
    }

    /// Double-precision value of `gamma`.
    pub fn gamma_f64(&self) -> f64 {
        self.gamma
    }

    /// `gamma` as an exact element of `Q(gamma)`: `(0, 1)` when `gamma` is
    /// irrational, otherwise the rational value folded into the first
    /// coordinate.
    pub fn gamma(&self) -> QGamma {
        match self.gamma_rational {
            Some((num, den)) => QGamma::from_rational(
                BigRational::new(BigInt::from(num), BigInt::from(den)),
                *self,
            ),
            None => QGamma::new(
                BigRational::from_integer(0.into()),
                BigRational::from_integer(1.into()),
                *self,
            ),
        }
    }

    /// `Some(gamma)` as an exact rational when the root is rational.
    pub fn gamma_rational(&self) -> Option<BigRational> {
        self.gamma_rational
            .map(|(num, den)| BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `|L*gamma + S*gamma^2 - 1|` evaluated in doubles.
    pub fn float_residual(&self) -> f64 {
        let g = self.gamma;
        (self.l as f64 * g + self.s as f64 * g * g - 1.0).abs()
    }

    pub(crate) fn same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParamsMismatch(self.l, self.s, other.l, other.s))
        }
    }

    /// A dyadic approximation `G / 2^bits <= gamma < (G + 3) / 2^bits`.
    ///
    /// Only meaningful for irrational `gamma`; cached per parameter pair so
    /// repeated float conversions do not recompute the integer square root.
    pub(crate) fn gamma_dyadic(&self, bits: u64) -> BigRational {
        debug_assert!(self.gamma_rational.is_none());
        type Cache = Mutex<HashMap<(u32, u32), (u64, BigUint)>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap();
        let entry = map.entry((self.l, self.s));
        let (have_bits, g) = match entry {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                if o.get().0 < bits {
                    *o.get_mut() = (bits, dyadic_gamma(self.l, self.s, bits));
                }
                o.get().clone()
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                let computed = (bits, dyadic_gamma(self.l, self.s, bits));
                v.insert(computed.clone());
                computed
            }
        };
        BigRational::new(BigInt::from(g), BigInt::from(1u8) << have_bits)
    }
}

/// `gamma` in lowest terms when `L^2 + 4S` is a perfect square (this covers
/// `S = 0`, where the defining equation is linear).
fn rational_root(l: u32, s: u32) -> Option<(u64, u64)> {
    if s == 0 {
        return Some((1, l as u64));
    }
    let disc = (l as u64) * (l as u64) + 4 * s as u64;
    let m = disc.sqrt();
    if m * m != disc {
        return None;
    }
    // gamma = (m - L) / (2S)
    let num = m - l as u64;
    let den = 2 * s as u64;
    let g = num_integer::gcd(num, den);
    Some((num / g, den / g))
}

/// Positive quadratic root `(-L + sqrt(L^2 + 4S)) / (2S)` polished with two
/// Newton steps so the defining identity holds to machine precision.
fn irrational_root(l: u32, s: u32) -> f64 {
    let lf = l as f64;
    let sf = s as f64;
    let disc = lf * lf + 4.0 * sf;
    let mut x = (-lf + disc.sqrt()) / (2.0 * sf);
    for _ in 0..2 {
        let f = sf * x * x + lf * x - 1.0;
        let df = 2.0 * sf * x + lf;
        x -= f / df;
    }
    x
}

/// Floor of `gamma * 2^bits` (within 2 units) via one integer square root:
/// `gamma * 2^B = (sqrt((L^2 + 4S) * 2^(2B)) - L * 2^B) / (2S)`.
fn dyadic_gamma(l: u32, s: u32, bits: u64) -> BigUint {
    let disc = BigUint::from((l as u64) * (l as u64) + 4 * s as u64);
    let scaled = disc << (2 * bits);
    let root = scaled.sqrt();
    let l_scaled = BigUint::from(l) << bits;
    (root - l_scaled) / BigUint::from(2 * s as u64)
}
