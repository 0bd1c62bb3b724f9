//! The ordered point tuples `Lambda^n` obtained by reordering partition
//! endpoints, and the machine check that they coincide with the
//! radical-inverse stream.
//!
//! `Lambda^1` is the `t_1` left endpoints of the first refinement in
//! increasing order. Given `Lambda^n`, the next tuple appends the images of
//! the first `l_n` entries under the shift maps
//! `phi_i(x) = x + i*gamma^(n+1)` and
//! `phi_{L,j}(x) = x + L*gamma^(n+1) + j*gamma^(n+2)` (`j = 1..S-1`), one
//! map at a time. For `S >= 1` the shift index `i` runs over `1..=L`; for
//! `S = 0` it runs over `1..=L-1` — the count of new points per step must
//! be `(L+S-1) * l_n`, and with `i = L` included the `S = 0` case would
//! walk out of the unit interval instead of reproducing the van der Corput
//! reordering.

use serde::Serialize;

use crate::psi::branch_offset;
use crate::sequence::LsSequence;
use crate::{LsParams, QGamma};

/// Incremental builder for the tuples `Lambda^1, Lambda^2, ...`.
#[derive(Debug, Clone)]
pub struct LambdaBuilder {
    params: LsParams,
    tuple: Vec<QGamma>,
    depth: u32,
    long_count: u64,
    short_count: u64,
}

impl LambdaBuilder {
    /// Starts at `Lambda^1`.
    pub fn new(params: LsParams) -> Self {
        let tuple: Vec<QGamma> = (0..params.base())
            .map(|i| branch_offset(i, &params))
            .collect();
        LambdaBuilder {
            params,
            tuple,
            depth: 1,
            long_count: params.l() as u64,
            short_count: params.s() as u64,
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `l_n` for the current depth.
    pub fn long_count(&self) -> u64 {
        self.long_count
    }

    pub fn tuple(&self) -> &[QGamma] {
        &self.tuple
    }

    pub fn into_tuple(self) -> Vec<QGamma> {
        self.tuple
    }

    /// Extends `Lambda^n` to `Lambda^(n+1)`.
    pub fn extend(&mut self) {
        let params = self.params;
        let l = params.l();
        let s = params.s();
        let shift_long = QGamma::pow_gamma(self.depth + 1, params); // gamma^(n+1)
        let shift_short = shift_long.mul_gamma(); // gamma^(n+2)
        let source_len = self.long_count as usize;
        let long_top = if s >= 1 { l } else { l - 1 };
        let mut shifts: Vec<QGamma> = Vec::with_capacity((l + s) as usize);
        for i in 1..=long_top {
            shifts.push(shift_long.scale(&ratio(i)));
        }
        for j in 1..s {
            shifts.push(&shift_long.scale(&ratio(l)) + &shift_short.scale(&ratio(j)));
        }
        self.tuple.reserve(shifts.len() * source_len);
        for shift in &shifts {
            for k in 0..source_len {
                let moved = &self.tuple[k] + shift;
                self.tuple.push(moved);
            }
        }
        self.depth += 1;
        let next_long = l as u64 * self.long_count + self.short_count;
        self.short_count = s as u64 * self.long_count;
        self.long_count = next_long;
        debug_assert_eq!(
            self.tuple.len() as u64,
            self.long_count + self.short_count
        );
    }
}

/// The ordered tuple `Lambda^depth` (`depth >= 1`).
pub fn lambda_tuple(depth: u32, params: LsParams) -> Vec<QGamma> {
    assert!(depth >= 1, "lambda tuples start at depth 1");
    let mut builder = LambdaBuilder::new(params);
    while builder.depth() < depth {
        builder.extend();
    }
    builder.into_tuple()
}

/// Outcome of comparing `Lambda^depth` with the radical-inverse stream.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub l: u32,
    pub s: u32,
    pub depth: u32,
    /// `t_depth`, the number of points compared.
    pub points: u64,
    /// Index (0-based) of the first differing entry, if any.
    pub first_mismatch: Option<usize>,
}

impl EquivalenceReport {
    pub fn is_equal(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares `Lambda^depth`, entry by entry and in order, with the first
/// `t_depth` outputs of the radical-inverse generator under exact
/// comparison.
pub fn verify_equivalence(depth: u32, params: LsParams) -> EquivalenceReport {
    let tuple = lambda_tuple(depth, params);
    let mut first_mismatch = None;
    for (idx, (reordered, streamed)) in tuple
        .iter()
        .zip(LsSequence::new(params).take(tuple.len()))
        .enumerate()
    {
        if *reordered != streamed.value {
            first_mismatch = Some(idx);
            break;
        }
    }
    EquivalenceReport {
        l: params.l(),
        s: params.s(),
        depth,
        points: tuple.len() as u64,
        first_mismatch,
    }
}

fn ratio(n: u32) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}
