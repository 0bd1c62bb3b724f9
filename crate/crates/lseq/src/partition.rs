//! Sequences of partitions of `[0, 1)` by successive refinement.
//!
//! Two engines live here. The structural engine tracks LS-partitions as a
//! stream of long/short labels only: at depth `n` every interval has length
//! `gamma^n` (long) or `gamma^(n+1)` (short), a long interval splits into
//! `L` longs followed by `S` shorts, and a short interval is relabeled long
//! at the next depth because its length becomes maximal. No length
//! comparison ever happens, and a depth with `t_n` around 10^6 intervals is
//! just a label vector.
//!
//! The generic engine refines an arbitrary exact partition homothetically to
//! a template and is used to cross-validate the structural one; maximal
//! lengths are found by exact comparison, never through floats. A small
//! float variant exists for templates whose lengths leave `Q(gamma)`
//! entirely.

use std::io::Write;

use crate::counting::CountVector;
use crate::{Error, LsParams, QGamma, Result};

/// Interval label in an LS-partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Long,
    Short,
}

impl IntervalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IntervalKind::Long => "long",
            IntervalKind::Short => "short",
        }
    }
}

/// An LS-partition at a given refinement depth, stored as labels only.
#[derive(Debug, Clone)]
pub struct LsPartition {
    params: LsParams,
    depth: u32,
    labels: Vec<IntervalKind>,
}

impl LsPartition {
    /// The trivial partition (depth 0): one long interval `[0, 1)`.
    pub fn trivial(params: LsParams) -> Self {
        LsPartition {
            params,
            depth: 0,
            labels: vec![IntervalKind::Long],
        }
    }

    /// The depth-`n` partition `rho^n`.
    pub fn new(depth: u32, params: LsParams) -> Self {
        let mut partition = LsPartition::trivial(params);
        for _ in 0..depth {
            partition.refine();
        }
        partition
    }

    /// One refinement step: splits every maximal (long) interval.
    pub fn refine(&mut self) {
        let l = self.params.l() as usize;
        let s = self.params.s() as usize;
        let mut next = Vec::with_capacity(self.labels.len() * (l + s));
        for label in &self.labels {
            match label {
                IntervalKind::Long => {
                    next.extend(std::iter::repeat_n(IntervalKind::Long, l));
                    next.extend(std::iter::repeat_n(IntervalKind::Short, s));
                }
                IntervalKind::Short => next.push(IntervalKind::Long),
            }
        }
        self.labels = next;
        self.depth += 1;
    }

    /// Refines in place and returns the newly created left endpoints in
    /// partition order, exactly.
    ///
    /// Splitting a long interval at `x` keeps `x` and adds
    /// `x + i*gamma^(d+1)` for `i = 1..L-1` plus the `S` short left
    /// endpoints; short intervals contribute nothing new.
    pub fn refine_collecting_new_points(&mut self) -> Vec<QGamma> {
        let params = self.params;
        let long_len = QGamma::pow_gamma(self.depth, params);
        let short_len = long_len.mul_gamma();
        let child_long = short_len.clone(); // gamma^(d+1)
        let child_short = child_long.mul_gamma();
        let mut new_points = Vec::new();
        let mut left = QGamma::zero(params);
        for label in &self.labels {
            match label {
                IntervalKind::Long => {
                    let mut cursor = left.clone();
                    for _ in 1..params.l() {
                        cursor = &cursor + &child_long;
                        new_points.push(cursor.clone());
                    }
                    cursor = &cursor + &child_long;
                    for _ in 0..params.s() {
                        new_points.push(cursor.clone());
                        cursor = &cursor + &child_short;
                    }
                    left = &left + &long_len;
                }
                IntervalKind::Short => {
                    left = &left + &short_len;
                }
            }
        }
        self.refine();
        new_points
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Number of intervals `t_n`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[IntervalKind] {
        &self.labels
    }

    /// `(l_n, s_n)` counted from the labels.
    pub fn label_counts(&self) -> (u64, u64) {
        let long = self
            .labels
            .iter()
            .filter(|k| **k == IntervalKind::Long)
            .count() as u64;
        (long, self.labels.len() as u64 - long)
    }

    /// Checks the label counts against the counting recurrence.
    pub fn matches_counts(&self, counts: &CountVector) -> bool {
        let (long, short) = self.label_counts();
        counts.depth == self.depth
            && counts.long == long.into()
            && counts.short == short.into()
    }

    /// Exact interval length for a label at this depth.
    pub fn length_of(&self, kind: IntervalKind) -> QGamma {
        let long = QGamma::pow_gamma(self.depth, self.params);
        match kind {
            IntervalKind::Long => long,
            IntervalKind::Short => long.mul_gamma(),
        }
    }

    /// Left endpoints, exactly, by streaming accumulation of the lengths.
    pub fn left_endpoints_exact(&self) -> Vec<QGamma> {
        let long_len = QGamma::pow_gamma(self.depth, self.params);
        let short_len = long_len.mul_gamma();
        let mut left = QGamma::zero(self.params);
        let mut out = Vec::with_capacity(self.labels.len());
        for label in &self.labels {
            out.push(left.clone());
            left = match label {
                IntervalKind::Long => &left + &long_len,
                IntervalKind::Short => &left + &short_len,
            };
        }
        out
    }

    /// Left endpoints of the long intervals only.
    pub fn long_left_endpoints_exact(&self) -> Vec<QGamma> {
        self.left_endpoints_exact()
            .into_iter()
            .zip(&self.labels)
            .filter(|(_, kind)| **kind == IntervalKind::Long)
            .map(|(left, _)| left)
            .collect()
    }

    /// Left endpoints in doubles (compensated summation of float lengths).
    pub fn left_endpoints_f64(&self) -> Vec<f64> {
        let gamma = self.params.gamma_f64();
        let long_len = gamma.powi(self.depth as i32);
        let short_len = long_len * gamma;
        let mut out = Vec::with_capacity(self.labels.len());
        let mut sum = 0.0;
        let mut compensation = 0.0;
        for label in &self.labels {
            out.push(sum + compensation);
            let add = match label {
                IntervalKind::Long => long_len,
                IntervalKind::Short => short_len,
            };
            // Neumaier update.
            let t = sum + add;
            compensation += if sum.abs() >= add.abs() {
                (sum - t) + add
            } else {
                (add - t) + sum
            };
            sum = t;
        }
        out
    }

    /// CSV rows `index,left_exact,left_float,label,depth` (1-based index).
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,left_exact,left_float,label,depth")?;
        let floats = self.left_endpoints_f64();
        for (i, (left, label)) in self
            .left_endpoints_exact()
            .iter()
            .zip(&self.labels)
            .enumerate()
        {
            writeln!(
                w,
                "{},{},{:?},{},{}",
                i + 1,
                left.to_compact_string(),
                floats[i],
                label.as_str(),
                self.depth
            )?;
        }
        Ok(())
    }
}

/// A finite partition of `[0, 1)` with exact interval lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPartition {
    lengths: Vec<QGamma>,
    params: LsParams,
}

impl ExactPartition {
    /// Builds a partition from its interval lengths, which must be positive
    /// and sum to exactly 1.
    pub fn new(lengths: Vec<QGamma>, params: LsParams) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidPartition);
        }
        let zero = QGamma::zero(params);
        let mut sum = zero.clone();
        for len in &lengths {
            if *len <= zero {
                return Err(Error::InvalidPartition);
            }
            sum = &sum + len;
        }
        if sum != QGamma::one(params) {
            return Err(Error::InvalidPartition);
        }
        Ok(ExactPartition { lengths, params })
    }

    /// The trivial partition `omega`.
    pub fn trivial(params: LsParams) -> Self {
        ExactPartition {
            lengths: vec![QGamma::one(params)],
            params,
        }
    }

    /// The LS template `rho_{L,S}`: `L` long intervals of length `gamma`
    /// followed by `S` short ones of length `gamma^2`.
    pub fn ls_template(params: LsParams) -> Self {
        let gamma = params.gamma();
        let gamma2 = gamma.mul_gamma();
        let mut lengths = Vec::with_capacity(params.base() as usize);
        lengths.extend(std::iter::repeat_n(gamma, params.l() as usize));
        lengths.extend(std::iter::repeat_n(gamma2, params.s() as usize));
        ExactPartition { lengths, params }
    }

    /// Kakutani template `{[0, alpha), [alpha, 1)}`.
    pub fn alpha_template(alpha: QGamma) -> Result<Self> {
        let params = alpha.params();
        let zero = QGamma::zero(params);
        let one = QGamma::one(params);
        if alpha <= zero || alpha >= one {
            return Err(Error::InvalidPartition);
        }
        let rest = &one - &alpha;
        Ok(ExactPartition {
            lengths: vec![alpha, rest],
            params,
        })
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn lengths(&self) -> &[QGamma] {
        &self.lengths
    }

    /// Left endpoints (strictly increasing, starting at 0).
    pub fn left_endpoints(&self) -> Vec<QGamma> {
        let mut left = QGamma::zero(self.params);
        let mut out = Vec::with_capacity(self.lengths.len());
        for len in &self.lengths {
            out.push(left.clone());
            left = &left + len;
        }
        out
    }
}

/// One `rho`-refinement step: every interval of `pi` of maximal length is
/// replaced by a homothetic copy of `rho`; all other intervals are kept in
/// place.
pub fn rho_refine(pi: &ExactPartition, rho: &ExactPartition) -> Result<ExactPartition> {
    if rho.len() < 2 {
        return Err(Error::TrivialTemplate);
    }
    pi.params.same(&rho.params)?;
    let max_len = pi.lengths.iter().max().expect("nonempty partition").clone();
    let mut lengths = Vec::with_capacity(pi.len() + rho.len());
    for len in &pi.lengths {
        if *len == max_len {
            for template_len in &rho.lengths {
                lengths.push(len.checked_mul(template_len)?);
            }
        } else {
            lengths.push(len.clone());
        }
    }
    ExactPartition::new(lengths, pi.params)
}

/// Iterated `rho`-refinement of the trivial partition.
pub fn rho_refinements(rho: &ExactPartition, steps: u32) -> Result<ExactPartition> {
    let mut pi = ExactPartition::trivial(rho.params);
    for _ in 0..steps {
        pi = rho_refine(&pi, rho)?;
    }
    Ok(pi)
}

/// Float fallback of [`rho_refine`] for templates outside `Q(gamma)`.
///
/// Partitions are length lists; an interval counts as maximal when its
/// length is within `tol` of the maximum. Kakutani refinement is brittle
/// under float ties, so the exact engine is preferred whenever the lengths
/// live in `Q(gamma)`.
pub fn rho_refine_f64(pi: &[f64], rho: &[f64], tol: f64) -> Result<Vec<f64>> {
    if rho.len() < 2 {
        return Err(Error::TrivialTemplate);
    }
    if pi.is_empty() {
        return Err(Error::InvalidPartition);
    }
    let max_len = pi.iter().cloned().fold(f64::MIN, f64::max);
    let mut out = Vec::with_capacity(pi.len() + rho.len());
    for &len in pi {
        if max_len - len <= tol {
            out.extend(rho.iter().map(|r| r * len));
        } else {
            out.push(len);
        }
    }
    Ok(out)
}

/// Structural depth-`n` partition (labels) — the normative construction.
pub fn ls_partition(depth: u32, params: LsParams) -> LsPartition {
    LsPartition::new(depth, params)
}
