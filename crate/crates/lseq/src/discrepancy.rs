//! Exact one-dimensional extreme and star discrepancy, a brute-force grid
//! oracle, and empirical classification of the discrepancy growth regimes.
//!
//! Every routine here reduces the supremum over intervals `[a, b)` to a
//! finite candidate scan evaluated in *exact* scaled-integer arithmetic:
//! each candidate value is a dyadic rational (every `f64` is), so after
//! scaling by a common power of two all deviations become integers over the
//! common denominator `N * 2^bits`. The float result is produced by a
//! single correctly rounded conversion at the end, which makes inequalities
//! such as `D* <= D <= 2 D*` and `brute_force <= extreme` hold exactly in
//! the returned doubles instead of up to rounding noise.
//!
//! With the points sorted, the empirical-minus-uniform gap function
//! `g(t) = #\{x_i < t\}/N - t` jumps only at point locations, so
//! `D = max(0, sup g) - min(0, inf g)` and `D* = max(sup g, -inf g, 0)`
//! with the sup/inf taken over the one-sided limits at the points. The
//! optimized pass evaluates exactly that; the `O(N^2)` reference and the
//! grid oracle instead enumerate candidate interval endpoint pairs with
//! both open and closed counting conventions.

use std::io::Write as IoWrite;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::counting::totals_up_to;
use crate::partition::LsPartition;
use crate::{Error, LsParams, Result};

/// A finite set of points in `[0, 1)` (duplicates allowed).
#[derive(Debug, Clone)]
pub struct PointSet {
    points: Vec<f64>,
}

impl PointSet {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for &x in &points {
            if !(0.0..1.0).contains(&x) {
                return Err(Error::PointOutOfRange(x));
            }
        }
        Ok(PointSet { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    fn sorted(&self) -> Vec<f64> {
        let mut sorted = self.points.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted
    }
}

/// `x = mantissa * 2^exp` for finite `x` in `[0, 1]`.
fn decompose(x: f64) -> (u64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), raw_exp - 1075)
    }
}

/// Number of fractional bits needed to represent `x` exactly as
/// `integer / 2^bits`.
fn fractional_bits(x: f64) -> u32 {
    let (mantissa, exp) = decompose(x);
    if mantissa == 0 {
        return 0;
    }
    let tz = mantissa.trailing_zeros() as i32;
    (-(exp + tz)).max(0) as u32
}

fn scale_u128(x: f64, bits: u32) -> u128 {
    let (mantissa, exp) = decompose(x);
    let shift = exp + bits as i32;
    if shift >= 0 {
        (mantissa as u128) << shift
    } else {
        // The right shift must be exact: `bits` covers the fractional bits
        // of every candidate in the set.
        let right = (-shift) as u32;
        debug_assert_eq!(mantissa & ((1u64 << right) - 1), 0, "inexact scaling");
        (mantissa >> right) as u128
    }
}

fn scale_big(x: f64, bits: u32) -> BigInt {
    let (mantissa, exp) = decompose(x);
    let shift = exp + bits as i32;
    if shift >= 0 {
        BigInt::from(mantissa) << shift
    } else {
        BigInt::from(mantissa >> (-shift))
    }
}

/// Distinct sorted candidate values with their ranks among the points.
struct Candidates {
    values: Vec<f64>,
    /// `lo[i]` = number of points `< values[i]`.
    lo: Vec<u64>,
    /// `hi[i]` = number of points `<= values[i]`.
    hi: Vec<u64>,
    /// Common denominator exponent: all values are exact over `2^bits`.
    bits: u32,
    n: u64,
}

impl Candidates {
    /// Builds candidates from the sorted points plus extra values (sentinels
    /// and grid nodes may include 1.0).
    fn build(sorted_points: &[f64], extras: impl Iterator<Item = f64>) -> Candidates {
        let mut values: Vec<f64> = sorted_points.to_vec();
        values.extend(extras);
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        let bits = values
            .iter()
            .map(|&v| fractional_bits(v))
            .max()
            .unwrap_or(0);
        let lo = values
            .iter()
            .map(|&v| sorted_points.partition_point(|&x| x < v) as u64)
            .collect();
        let hi = values
            .iter()
            .map(|&v| sorted_points.partition_point(|&x| x <= v) as u64)
            .collect();
        Candidates {
            values,
            lo,
            hi,
            bits,
            n: sorted_points.len() as u64,
        }
    }

    /// True when every product fits comfortably in `i128`.
    fn fits_fast(&self) -> bool {
        self.bits <= 100 && self.n < (1 << 20)
    }

    /// `g_plus[i] = hi_i * 2^bits - N * C_i` and
    /// `g_minus[i] = lo_i * 2^bits - N * C_i`, the scaled one-sided limits
    /// of the gap function at each candidate.
    fn gap_arrays_i128(&self) -> (Vec<i128>, Vec<i128>) {
        let q: i128 = 1 << self.bits;
        let n = self.n as i128;
        let mut g_plus = Vec::with_capacity(self.values.len());
        let mut g_minus = Vec::with_capacity(self.values.len());
        for (i, &v) in self.values.iter().enumerate() {
            let c = scale_u128(v, self.bits) as i128;
            g_plus.push(self.hi[i] as i128 * q - n * c);
            g_minus.push(self.lo[i] as i128 * q - n * c);
        }
        (g_plus, g_minus)
    }

    fn gap_arrays_big(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let q = BigInt::from(1) << self.bits;
        let n = BigInt::from(self.n);
        let mut g_plus = Vec::with_capacity(self.values.len());
        let mut g_minus = Vec::with_capacity(self.values.len());
        for (i, &v) in self.values.iter().enumerate() {
            let nc = &n * scale_big(v, self.bits);
            g_plus.push(BigInt::from(self.hi[i]) * &q - &nc);
            g_minus.push(BigInt::from(self.lo[i]) * &q - nc);
        }
        (g_plus, g_minus)
    }

    /// Correctly rounded `numerator / (N * 2^bits)`.
    fn to_f64(&self, numerator: BigInt) -> f64 {
        let denom = BigInt::from(self.n) << self.bits;
        BigRational::new(numerator, denom)
            .to_f64()
            .expect("discrepancy ratio to f64")
    }
}

fn sup_inf_numerators(c: &Candidates) -> (BigInt, BigInt) {
    if c.fits_fast() {
        let (g_plus, g_minus) = c.gap_arrays_i128();
        let sup = g_plus.iter().copied().max().unwrap_or(0).max(0);
        let inf = g_minus.iter().copied().min().unwrap_or(0).min(0);
        (BigInt::from(sup), BigInt::from(inf))
    } else {
        let (g_plus, g_minus) = c.gap_arrays_big();
        let zero = BigInt::zero();
        let sup = g_plus.into_iter().max().unwrap_or_else(BigInt::zero).max(zero.clone());
        let inf = g_minus.into_iter().min().unwrap_or_else(BigInt::zero).min(zero);
        (sup, inf)
    }
}

/// Extreme discrepancy: `sup` over intervals `[a, b)` of
/// `|count/N - (b - a)|`, computed exactly and rounded once.
pub fn extreme_discrepancy(ps: &PointSet) -> f64 {
    let sorted = ps.sorted();
    let c = Candidates::build(&sorted, std::iter::empty());
    let (sup, inf) = sup_inf_numerators(&c);
    c.to_f64(sup - inf)
}

/// Star discrepancy: the same supremum restricted to prefixes `[0, a)`.
pub fn star_discrepancy(ps: &PointSet) -> f64 {
    let sorted = ps.sorted();
    let c = Candidates::build(&sorted, std::iter::empty());
    let (sup, inf) = sup_inf_numerators(&c);
    c.to_f64(sup.max(-inf))
}

/// Largest deviation over all ordered candidate pairs, evaluating both the
/// maximal (closed/inclusive) and minimal (open/exclusive) counting
/// conventions: `over(k,l) = g_plus[l] - g_minus[k]` and
/// `under(k,l) = g_plus[k] - g_minus[l]`.
fn pair_scan_numerator(c: &Candidates) -> BigInt {
    if c.fits_fast() {
        let (g_plus, g_minus) = c.gap_arrays_i128();
        let mut best: i128 = 0;
        for l in 0..g_plus.len() {
            for k in 0..=l {
                let over = g_plus[l] - g_minus[k];
                let under = g_plus[k] - g_minus[l];
                best = best.max(over).max(under);
            }
        }
        BigInt::from(best)
    } else {
        let (g_plus, g_minus) = c.gap_arrays_big();
        let mut best = BigInt::zero();
        for l in 0..g_plus.len() {
            for k in 0..=l {
                let over = &g_plus[l] - &g_minus[k];
                let under = &g_plus[k] - &g_minus[l];
                if over > best {
                    best = over;
                }
                if under > best {
                    best = under;
                }
            }
        }
        best
    }
}

/// Normative `O(N^2)` evaluation of the extreme discrepancy: every pair of
/// candidate endpoints drawn from the points plus the sentinels 0 and 1,
/// with both endpoint conventions. The optimized pass must match this
/// exactly.
pub fn extreme_discrepancy_reference(ps: &PointSet) -> f64 {
    let sorted = ps.sorted();
    let c = Candidates::build(&sorted, [0.0, 1.0].into_iter());
    let num = pair_scan_numerator(&c);
    c.to_f64(num)
}

/// Grid oracle: the same pair scan over the points, the sentinels, and the
/// uniform grid `{k/G}`. A lower bound on the extreme discrepancy that
/// converges from below within `2/G` (and is exact here, because the point
/// locations themselves are candidates).
pub fn brute_force_discrepancy(ps: &PointSet, grid: u32) -> Result<f64> {
    if grid < 1000 {
        return Err(Error::GridTooCoarse(grid));
    }
    let sorted = ps.sorted();
    let g = grid as f64;
    let grid_values = (0..=grid).map(move |k| k as f64 / g);
    let c = Candidates::build(&sorted, [0.0, 1.0].into_iter().chain(grid_values));
    let num = pair_scan_numerator(&c);
    Ok(c.to_f64(num))
}

/// Per-set discrepancy summary with the scaled quantities used by the
/// regime analysis.
#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyReport {
    pub n: u64,
    pub extreme: f64,
    pub star: f64,
    /// `N * D`.
    pub scaled: f64,
    /// `N * D / ln N` (absent at `N = 1`).
    pub scaled_over_log: Option<f64>,
    /// `N * D / N^exponent` for a caller-supplied growth exponent.
    pub scaled_power: Option<f64>,
}

/// Computes both discrepancies and the scaled values in one pass.
pub fn report(ps: &PointSet, exponent: Option<f64>) -> DiscrepancyReport {
    let sorted = ps.sorted();
    let c = Candidates::build(&sorted, std::iter::empty());
    let (sup, inf) = sup_inf_numerators(&c);
    let extreme = c.to_f64(sup.clone() - inf.clone());
    let star = c.to_f64(sup.max(-inf));
    let n = ps.len() as u64;
    let scaled = n as f64 * extreme;
    DiscrepancyReport {
        n,
        extreme,
        star,
        scaled,
        scaled_over_log: (n > 1).then(|| scaled / (n as f64).ln()),
        scaled_power: exponent.map(|e| scaled / (n as f64).powf(e)),
    }
}

/// Growth regime of `t_n * D(rho^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Bounded,
    Logarithmic,
    Polynomial,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Bounded => "bounded",
            Classification::Logarithmic => "logarithmic",
            Classification::Polynomial => "polynomial",
        }
    }
}

/// One regime-analysis row: the partition depth, `t_n`, and `D(rho^n)`.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeRow {
    pub n: u32,
    pub t_n: u64,
    #[serde(rename = "D")]
    pub discrepancy: f64,
}

/// Empirical regime classification for one parameter pair.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    #[serde(rename = "L")]
    pub l: u32,
    #[serde(rename = "S")]
    pub s: u32,
    pub gamma: f64,
    pub rows: Vec<RegimeRow>,
    /// Least-squares slope of `ln(t_n * D_n)` against `ln t_n` over the
    /// rows with `n >= 3` (small depths bias the fit).
    pub slope: f64,
    /// `1 - tau = -ln(S*gamma)/ln(gamma)`, defined for `S >= L + 2`.
    pub predicted_exponent: Option<f64>,
    pub classification: Classification,
    /// `max_n t_n * D_n`.
    #[serde(skip)]
    pub max_scaled: f64,
    /// Range of `t_n * D_n / ln t_n` over `n >= 3`.
    #[serde(skip)]
    pub log_ratio_min: f64,
    #[serde(skip)]
    pub log_ratio_max: f64,
}

const SLOPE_SKIP_DEPTH: u32 = 3;
/// Fitted slopes above this are treated as polynomial growth.
const POLYNOMIAL_SLOPE_THRESHOLD: f64 = 0.15;
/// `t_n * D_n` growing by more than this factor (late third over early
/// third) is treated as logarithmic growth.
const LOG_GROWTH_FACTOR: f64 = 1.6;

impl RegimeReport {
    /// Deterministic JSON rendering
    /// (`{"L","S","gamma","rows":[{"n","t_n","D"}],...}`).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("regime report serializes")
    }

    /// CSV rows `n,t_n,D`.
    pub fn write_rows_csv<W: IoWrite>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,t_n,D")?;
        for row in &self.rows {
            writeln!(w, "{},{},{:?}", row.n, row.t_n, row.discrepancy)?;
        }
        Ok(())
    }
}

/// Ordinary least squares slope.
fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        var += (x - mx) * (x - mx);
    }
    cov / var
}

/// Computes `D(rho^n)` on the partition endpoint sets for
/// `n = 1..=max_depth`, fits the growth of `t_n * D_n`, and classifies the
/// regime the data matches.
pub fn regime_analysis(params: LsParams, max_depth: u32) -> Result<RegimeReport> {
    if max_depth < 5 {
        return Err(Error::DepthTooSmall(max_depth));
    }
    let totals = totals_up_to(max_depth, &params);
    let mut partition = LsPartition::trivial(params);
    let mut rows = Vec::with_capacity(max_depth as usize);
    for depth in 1..=max_depth {
        partition.refine();
        let endpoints = PointSet::new(partition.left_endpoints_f64())?;
        let d = extreme_discrepancy(&endpoints);
        rows.push(RegimeRow {
            n: depth,
            t_n: totals[depth as usize],
            discrepancy: d,
        });
    }

    let fit_rows: Vec<&RegimeRow> = rows.iter().filter(|r| r.n >= SLOPE_SKIP_DEPTH).collect();
    let xs: Vec<f64> = fit_rows.iter().map(|r| (r.t_n as f64).ln()).collect();
    let ys: Vec<f64> = fit_rows
        .iter()
        .map(|r| (r.t_n as f64 * r.discrepancy).ln())
        .collect();
    let slope = ols_slope(&xs, &ys);

    let scaled: Vec<f64> = rows.iter().map(|r| r.t_n as f64 * r.discrepancy).collect();
    let max_scaled = scaled.iter().cloned().fold(f64::MIN, f64::max);

    let fit_scaled: Vec<f64> = fit_rows
        .iter()
        .map(|r| r.t_n as f64 * r.discrepancy)
        .collect();
    let third = (fit_scaled.len() / 3).max(1);
    let head: f64 = fit_scaled[..third].iter().sum::<f64>() / third as f64;
    let tail: f64 =
        fit_scaled[fit_scaled.len() - third..].iter().sum::<f64>() / third as f64;
    let growth = tail / head;

    let log_ratios: Vec<f64> = fit_rows
        .iter()
        .map(|r| r.t_n as f64 * r.discrepancy / (r.t_n as f64).ln())
        .collect();
    let log_ratio_min = log_ratios.iter().cloned().fold(f64::MAX, f64::min);
    let log_ratio_max = log_ratios.iter().cloned().fold(f64::MIN, f64::max);

    let classification = if slope > POLYNOMIAL_SLOPE_THRESHOLD {
        Classification::Polynomial
    } else if growth > LOG_GROWTH_FACTOR {
        Classification::Logarithmic
    } else {
        Classification::Bounded
    };

    let predicted_exponent = (params.s() >= params.l() + 2).then(|| {
        let g = params.gamma_f64();
        -(params.s() as f64 * g).ln() / g.ln()
    });

    Ok(RegimeReport {
        l: params.l(),
        s: params.s(),
        gamma: params.gamma_f64(),
        rows,
        slope,
        predicted_exponent,
        classification,
        max_scaled,
        log_ratio_min,
        log_ratio_max,
    })
}
