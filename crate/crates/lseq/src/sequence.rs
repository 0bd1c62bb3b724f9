//! The LS radical inverse and streaming point generation.
//!
//! For an admissible integer `n` with base-`L+S` digits `a_0 .. a_M`, the
//! radical inverse is `sum_k atilde_k * gamma^(k+1)` where `atilde_k = a_k`
//! for long digits (`a_k <= L-1`) and `atilde_k = L + gamma*(a_k - L)` for
//! short ones. Evaluating it over the admissible integers in increasing
//! order yields the LS-sequence of points; for `S = 0` this is the classical
//! base-`L` van der Corput sequence.

use crate::digits::{is_admissible, AdmissibleCounter, DigitString};
use crate::{Error, LsParams, QGamma, Result};

/// Exact radical inverse of a digit string (assumed canonical).
pub fn radical_inverse_digits(d: &DigitString, params: &LsParams) -> Result<QGamma> {
    if !is_admissible(d, params) {
        return Err(Error::Inadmissible {
            n: d.value(),
            base: params.base(),
        });
    }
    let mut acc = QGamma::zero(*params);
    let mut power = params.gamma(); // gamma^(k+1), starting at k = 0
    for &a in d.digits() {
        if a != 0 {
            let term = if a < params.l() {
                power.scale(&rational(a))
            } else {
                let next = power.mul_gamma();
                &power.scale(&rational(params.l())) + &next.scale(&rational(a - params.l()))
            };
            acc = &acc + &term;
        }
        power = power.mul_gamma();
    }
    Ok(acc)
}

fn rational(n: u32) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}

/// Exact radical inverse of an admissible integer.
pub fn radical_inverse(n: u128, params: &LsParams) -> Result<QGamma> {
    radical_inverse_digits(&DigitString::from_value(n, params.base()), params)
}

/// Double-precision radical inverse, accumulated from the most significant
/// digit down so the smallest terms are added first.
pub fn radical_inverse_f64_digits(d: &DigitString, params: &LsParams) -> f64 {
    let gamma = params.gamma_f64();
    let lf = params.l() as f64;
    let mut powers = Vec::with_capacity(d.len() + 1);
    let mut p = gamma;
    for _ in 0..=d.len() {
        powers.push(p);
        p *= gamma;
    }
    let mut acc = 0.0;
    for (k, &a) in d.digits().iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let coeff = if a < params.l() {
            a as f64
        } else {
            lf + gamma * (a - params.l()) as f64
        };
        acc += coeff * powers[k];
    }
    acc
}

/// One generated point: its 1-based rank, the admissible integer it comes
/// from, that integer's digits, and the exact value.
#[derive(Debug, Clone)]
pub struct LsPoint {
    pub rank: u64,
    pub n: u128,
    pub digits: DigitString,
    pub value: QGamma,
}

/// Streaming exact generator over the admissible integers in order.
///
/// Work per point is amortized constant in the digit length; no partition
/// is ever materialized.
#[derive(Debug, Clone)]
pub struct LsSequence {
    counter: AdmissibleCounter,
    params: LsParams,
    rank: u64,
}

impl LsSequence {
    pub fn new(params: LsParams) -> Self {
        LsSequence {
            counter: AdmissibleCounter::new(params),
            params,
            rank: 0,
        }
    }

    pub fn params(&self) -> LsParams {
        self.params
    }
}

impl Iterator for LsSequence {
    type Item = LsPoint;

    fn next(&mut self) -> Option<LsPoint> {
        if self.rank > 0 {
            self.counter.advance();
        }
        self.rank += 1;
        let digits = self.counter.digits();
        let value = radical_inverse_digits(&digits, &self.params)
            .expect("counter produced an inadmissible integer");
        Some(LsPoint {
            rank: self.rank,
            n: digits.value(),
            digits,
            value,
        })
    }
}

/// Streaming double-precision generator (no exact arithmetic involved).
#[derive(Debug, Clone)]
pub struct LsSequenceF64 {
    counter: AdmissibleCounter,
    params: LsParams,
    started: bool,
}

impl LsSequenceF64 {
    pub fn new(params: LsParams) -> Self {
        LsSequenceF64 {
            counter: AdmissibleCounter::new(params),
            params,
            started: false,
        }
    }
}

impl Iterator for LsSequenceF64 {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.started {
            self.counter.advance();
        } else {
            self.started = true;
        }
        Some(radical_inverse_f64_digits(
            &self.counter.digits(),
            &self.params,
        ))
    }
}

/// First `count` points of the LS-sequence, exactly.
pub fn generate_points_exact(count: usize, params: LsParams) -> Vec<QGamma> {
    LsSequence::new(params).take(count).map(|p| p.value).collect()
}

/// First `count` points of the LS-sequence in doubles.
pub fn generate_points_f64(count: usize, params: LsParams) -> Vec<f64> {
    LsSequenceF64::new(params).take(count).collect()
}
