//! Quasi-Monte Carlo integration experiments: LS-sequences against the
//! classical baselines, with Koksma-style error accounting.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::discrepancy::{star_discrepancy, PointSet};
use crate::partition::LsPartition;
use crate::sequence::generate_points_f64;
use crate::{Error, LsParams, Result};

/// A test integrand on `[0, 1)` with its exact integral and (when known)
/// total variation, so the Koksma bound `|error| <= V(f) * D*_N` can be
/// checked as data.
pub struct Integrand {
    pub name: String,
    pub exact_integral: f64,
    pub variation: Option<f64>,
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("exact_integral", &self.exact_integral)
            .field("variation", &self.variation)
            .finish()
    }
}

impl Integrand {
    pub fn new(
        name: impl Into<String>,
        exact_integral: f64,
        variation: Option<f64>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Integrand {
            name: name.into(),
            exact_integral,
            variation,
            eval: Box::new(eval),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Half-open indicator `chi_[a, b)`.
    pub fn indicator(name: impl Into<String>, a: f64, b: f64) -> Self {
        let variation = if a <= 0.0 { 1.0 } else { 2.0 };
        Integrand::new(name, b - a, Some(variation), move |x| {
            if (a..b).contains(&x) {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// The standard integrand suite: constants, polynomials, a smooth periodic
/// function, and indicators with rational and with `gamma`-dependent
/// endpoints (the hard case for the LS interval structure).
pub fn standard_suite(params: &LsParams) -> Vec<Integrand> {
    let gamma = params.gamma_f64();
    vec![
        Integrand::new("one", 1.0, Some(0.0), |_| 1.0),
        Integrand::new("x", 0.5, Some(1.0), |x| x),
        Integrand::new("x_squared", 1.0 / 3.0, Some(1.0), |x| x * x),
        Integrand::new("sin_2pi_x", 0.0, Some(4.0), |x| {
            (2.0 * std::f64::consts::PI * x).sin()
        }),
        Integrand::indicator("step_quarter_to_threequarter", 0.25, 0.75),
        Integrand::indicator("step_zero_to_gamma", 0.0, gamma),
    ]
}

/// Knapowski's equipartition sequence with the classical block sizes
/// `a_m = m + 1`: `1/2, 1/3, 2/3, 1/4, 2/4, 3/4, ...` truncated to `count`.
pub fn knapowski_points(count: usize) -> Vec<f64> {
    knapowski_points_with(count, 2u64..)
}

/// Knapowski sequence for arbitrary block sizes `a_1, a_2, ...`
/// (block `m` contributes `(a_m - 1)` points `k / a_m`).
pub fn knapowski_points_with(count: usize, block_sizes: impl Iterator<Item = u64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    for a in block_sizes {
        for k in 1..a {
            if out.len() == count {
                return out;
            }
            out.push(k as f64 / a as f64);
        }
    }
    out
}

/// Sequential ordering of the partition endpoints with every per-depth
/// block of new points uniformly shuffled: the first `t_1` points are the
/// endpoints of `rho^1`, the next `t_2 - t_1` are the points added by the
/// second refinement, and so on up to `depth`. Deterministic in `seed`.
pub fn random_sequential_reordering(depth: u32, params: LsParams, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut partition = LsPartition::trivial(params);
    let mut blocks: Vec<Vec<f64>> = Vec::with_capacity(depth as usize);
    // Block 1 is the full endpoint set of rho^1.
    partition.refine();
    blocks.push(
        partition
            .left_endpoints_exact()
            .iter()
            .map(|x| x.to_f64())
            .collect(),
    );
    for _ in 1..depth {
        let new_points = partition.refine_collecting_new_points();
        blocks.push(new_points.iter().map(|x| x.to_f64()).collect());
    }
    let mut out = Vec::new();
    for block in &mut blocks {
        block.shuffle(&mut rng);
        out.extend_from_slice(block);
    }
    out
}

/// A point generator entering the comparison grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// The LS-sequence itself (van der Corput in base `L` when `S = 0`).
    Ls(LsParams),
    /// Knapowski's equipartition sequence.
    Knapowski,
    /// Random sequential reordering of the LS partition endpoints.
    RandomReorder { params: LsParams, seed: u64 },
    /// Seeded uniform pseudorandom baseline.
    UniformRandom { seed: u64 },
}

impl Generator {
    pub fn id(&self) -> &'static str {
        match self {
            Generator::Ls(_) => "ls",
            Generator::Knapowski => "knapowski",
            Generator::RandomReorder { .. } => "random_reorder",
            Generator::UniformRandom { .. } => "uniform",
        }
    }

    pub fn params(&self) -> Option<LsParams> {
        match self {
            Generator::Ls(p) | Generator::RandomReorder { params: p, .. } => Some(*p),
            _ => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Generator::RandomReorder { seed, .. } | Generator::UniformRandom { seed } => {
                Some(*seed)
            }
            _ => None,
        }
    }

    /// The first `count` points of the generator.
    pub fn points(&self, count: usize) -> Vec<f64> {
        match self {
            Generator::Ls(params) => generate_points_f64(count, *params),
            Generator::Knapowski => knapowski_points(count),
            Generator::RandomReorder { params, seed } => {
                let depth =
                    crate::counting::min_depth_with_total_at_least(count as u64, params).max(1);
                let mut points = random_sequential_reordering(depth, *params, *seed);
                points.truncate(count);
                points
            }
            Generator::UniformRandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..count).map(|_| rng.gen::<f64>()).collect()
            }
        }
    }
}

/// One experiment row: empirical mean, absolute error, prefix star
/// discrepancy, and the Koksma ratio `error / (V * D*)` when the variation
/// is known and positive.
#[derive(Debug, Clone, Serialize)]
pub struct IntegrationRow {
    pub generator: String,
    pub l: Option<u32>,
    pub s: Option<u32>,
    pub integrand: String,
    pub n: usize,
    pub mean: f64,
    pub error: f64,
    pub d_star: f64,
    pub koksma_ratio: Option<f64>,
    pub seed: Option<u64>,
}

/// Runs one generator against one integrand at each requested sample size.
pub fn integrate(gen: &Generator, f: &Integrand, ns: &[usize]) -> Result<Vec<IntegrationRow>> {
    let &max_n = ns.iter().max().ok_or(Error::EmptyPointSet)?;
    if ns.contains(&0) {
        return Err(Error::NotEnoughPoints {
            requested: 0,
            available: max_n,
        });
    }
    let points = gen.points(max_n);
    if points.len() < max_n {
        return Err(Error::NotEnoughPoints {
            requested: max_n,
            available: points.len(),
        });
    }
    let mut sorted_ns = ns.to_vec();
    sorted_ns.sort_unstable();
    sorted_ns.dedup();
    let mut rows = Vec::with_capacity(sorted_ns.len());
    let mut sum = 0.0;
    let mut consumed = 0;
    for &n in &sorted_ns {
        for &x in &points[consumed..n] {
            sum += f.eval(x);
        }
        consumed = n;
        let mean = sum / n as f64;
        let error = (mean - f.exact_integral).abs();
        let d_star = star_discrepancy(&PointSet::new(points[..n].to_vec())?);
        let koksma_ratio = match f.variation {
            Some(v) if v > 0.0 => Some(error / (v * d_star)),
            _ => None,
        };
        rows.push(IntegrationRow {
            generator: gen.id().to_string(),
            l: gen.params().map(|p| p.l()),
            s: gen.params().map(|p| p.s()),
            integrand: f.name.clone(),
            n,
            mean,
            error,
            d_star,
            koksma_ratio,
            seed: gen.seed(),
        });
    }
    Ok(rows)
}

/// CSV with header `generator,L,S,integrand,N,mean,error,D_N,koksma_ratio,seed`
/// (`D_N` is the star discrepancy of the first `N` points; optional fields
/// are left empty).
pub fn write_csv<W: Write>(rows: &[IntegrationRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "generator,L,S,integrand,N,mean,error,D_N,koksma_ratio,seed")?;
    for row in rows {
        let opt_u32 = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
        let opt_f64 = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        let opt_u64 = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{:?},{:?},{:?},{},{}",
            row.generator,
            opt_u32(row.l),
            opt_u32(row.s),
            row.integrand,
            row.n,
            row.mean,
            row.error,
            row.d_star,
            opt_f64(row.koksma_ratio),
            opt_u64(row.seed),
        )?;
    }
    Ok(())
}
