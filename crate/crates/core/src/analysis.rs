//! Quantitative estimators: architecture complexity, sampled sup-norm
//! distance, modulus of continuity, and the extended mesh of a triangulated
//! metric space.
//!
//! Every estimator is seeded and index-keyed: sample `i` depends only on
//! `(seed, i)`, so sample sets nest as the count grows and sharded runs
//! reduce to exactly the single-threaded result. All sampled figures are
//! lower bounds on the exact suprema and are reported as such.

use serde::{Deserialize, Serialize};

use crate::approx::{eval_checked, FunctionSampler};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geometry::{SolveCache, DEFAULT_TOL};
use crate::linalg;
use crate::sampling;

/// Resolution of the deterministic barycentric grid every sup estimate
/// includes on top of its seeded samples.
pub const SUP_GRID_RESOLUTION: usize = 4;

/// Exact integer evaluation of the width bound
/// `max{k((n+1)!)^t1 (n+1), l((m+1)!)^t2 (m+1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityFigure {
    pub k: u64,
    pub n: u64,
    pub t1: u64,
    pub l: u64,
    pub m: u64,
    pub t2: u64,
    /// First hidden width after t1 subdivisions.
    pub first_width: u64,
    /// Second hidden width after t2 subdivisions.
    pub second_width: u64,
    /// max of the two widths.
    pub value: u64,
}

fn checked_factorial(n: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 2..=n {
        acc = acc.checked_mul(i)?;
    }
    Some(acc)
}

fn side_width(count: u64, dim: u64, t: u64) -> Option<u64> {
    let fact = checked_factorial(dim + 1)?;
    let growth = fact.checked_pow(u32::try_from(t).ok()?)?;
    count.checked_mul(growth)?.checked_mul(dim + 1)
}

/// Width bound of the network realizing a simplicial approximation between
/// `Sd^t1` of a k-simplex source of dimension n and `Sd^t2` of an l-simplex
/// target of dimension m.
pub fn complexity(k: u64, n: u64, t1: u64, l: u64, m: u64, t2: u64) -> Result<ComplexityFigure> {
    if k == 0 || l == 0 {
        return Err(Error::EmptyInput);
    }
    let first_width = side_width(k, n, t1).ok_or(Error::Overflow)?;
    let second_width = side_width(l, m, t2).ok_or(Error::Overflow)?;
    Ok(ComplexityFigure {
        k,
        n,
        t1,
        l,
        m,
        t2,
        first_width,
        second_width,
        value: first_width.max(second_width),
    })
}

/// A sampled sup-distance figure: the max over evaluated points (a lower
/// bound on the true sup) and where it was attained.
#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate {
    pub estimate: f64,
    pub argmax_point: Vec<f64>,
    /// Grid points plus seeded samples actually evaluated.
    pub points_evaluated: usize,
}

fn sup_sample_points(domain: &SimplicialComplex, samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let grid = sampling::grid_lambdas(SUP_GRID_RESOLUTION, domain.dim() + 1);
    let mut points =
        Vec::with_capacity(domain.maximal_count() * grid.len() + samples);
    for index in 0..domain.maximal_count() {
        for lambda in &grid {
            points.push(sampling::point_at(domain, index, lambda));
        }
    }
    for i in 0..samples {
        points.push(sampling::seeded_point(domain, seed, i as u64));
    }
    points
}

/// Max Euclidean distance between `f` and `h` over the deterministic grid
/// plus `samples` seeded points of `|domain|`.
pub fn estimate_sup_distance(
    f: &(dyn FunctionSampler + Sync),
    h: &(dyn FunctionSampler + Sync),
    domain: &SimplicialComplex,
    samples: usize,
    seed: u64,
) -> Result<SupEstimate> {
    estimate_sup_distance_sharded(f, h, domain, samples, seed, 1)
}

/// Sharded evaluation of [`estimate_sup_distance`]; the max reduction is
/// order-independent (distance, then smallest point index), so any shard
/// count returns exactly the single-threaded result.
pub fn estimate_sup_distance_sharded(
    f: &(dyn FunctionSampler + Sync),
    h: &(dyn FunctionSampler + Sync),
    domain: &SimplicialComplex,
    samples: usize,
    seed: u64,
    shards: usize,
) -> Result<SupEstimate> {
    if f.output_dim() != h.output_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.output_dim(),
            found: h.output_dim(),
        });
    }
    let points = sup_sample_points(domain, samples, seed);
    let shards = shards.max(1).min(points.len().max(1));

    // (distance, index) per shard; merge prefers larger distance, then
    // smaller index.
    let evaluate_range = |range: std::ops::Range<usize>| -> Result<Option<(f64, usize)>> {
        let mut best: Option<(f64, usize)> = None;
        for i in range {
            let x = &points[i];
            let fx = eval_checked(f, x)?;
            let hx = eval_checked(h, x)?;
            let d = linalg::dist(&fx, &hx);
            best = Some(match best {
                None => (d, i),
                Some((bd, bi)) => {
                    if d > bd {
                        (d, i)
                    } else {
                        (bd, bi)
                    }
                }
            });
        }
        Ok(best)
    };

    let chunk = points.len().div_ceil(shards);
    let mut partials: Vec<Option<(f64, usize)>> = Vec::with_capacity(shards);
    if shards == 1 {
        partials.push(evaluate_range(0..points.len())?);
    } else {
        let results: Vec<Result<Option<(f64, usize)>>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for s in 0..shards {
                let lo = s * chunk;
                let hi = ((s + 1) * chunk).min(points.len());
                let eval = &evaluate_range;
                handles.push(scope.spawn(move || eval(lo..hi)));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("estimator shard panicked"))
                .collect()
        });
        for r in results {
            partials.push(r?);
        }
    }

    let mut best: Option<(f64, usize)> = None;
    for partial in partials.into_iter().flatten() {
        best = Some(match best {
            None => partial,
            Some((bd, bi)) => {
                if partial.0 > bd || (partial.0 == bd && partial.1 < bi) {
                    partial
                } else {
                    (bd, bi)
                }
            }
        });
    }
    let (estimate, index) = best.ok_or(Error::EmptyInput)?;
    Ok(SupEstimate {
        estimate,
        argmax_point: points[index].clone(),
        points_evaluated: points.len(),
    })
}

/// The seeded pair set used by the modulus estimate: pairs `(x, y)` with
/// `|x - y| <= delta` and both endpoints inside `|domain|`. Pair `i` depends
/// only on `(seed, i)` and never on the function being measured, so two
/// estimates with equal parameters see identical pairs.
fn modulus_pairs(
    domain: &SimplicialComplex,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let cache = SolveCache::for_complex(domain)?;
    let inside = |p: &[f64]| !cache.locate(p, DEFAULT_TOL).hits.is_empty();
    let mut pairs = Vec::with_capacity(samples);
    for i in 0..samples {
        let x = sampling::seeded_point(domain, seed, i as u64);
        let dir = sampling::seeded_direction(seed, i as u64, domain.ambient_dim());
        let mut y: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + delta * d).collect();
        if !inside(&y) {
            // Bisect back toward x (which is inside); keeps |x - y| <= delta.
            let mut lo = x.clone();
            let mut hi = y;
            for _ in 0..60 {
                let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
                if inside(&mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            y = lo;
        }
        pairs.push((x, y));
    }
    Ok(pairs)
}

/// Sampled modulus of continuity: max of `|f(x) - f(y)|` over seeded pairs
/// at distance at most `delta`; a lower bound on the exact modulus.
pub fn estimate_modulus(
    f: &(dyn FunctionSampler + Sync),
    domain: &SimplicialComplex,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::NonPositiveEpsilon { value: delta });
    }
    let mut worst = 0.0_f64;
    for (x, y) in modulus_pairs(domain, delta, samples, seed)? {
        let fx = eval_checked(f, &x)?;
        let fy = eval_checked(f, &y)?;
        worst = worst.max(linalg::dist(&fx, &fy));
    }
    Ok(worst)
}

/// Sampled extended mesh: the max of `metric(tau_inverse(a), tau_inverse(b))`
/// over all vertex pairs plus `samples` seeded point pairs within each
/// maximal simplex. With the identity homeomorphism and the Euclidean metric
/// this approaches `mesh(k)` from below (vertex pairs make it exact there).
pub fn estimate_extended_mesh(
    k: &SimplicialComplex,
    tau_inverse: &(dyn FunctionSampler + Sync),
    metric: impl Fn(&[f64], &[f64]) -> f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let mut worst = 0.0_f64;
    let parts = k.dim() + 1;
    for (index, simplex) in k.maximal_simplices().iter().enumerate() {
        let mapped: Vec<Vec<f64>> = simplex
            .iter()
            .map(|&vi| eval_checked(tau_inverse, k.vertex(vi)))
            .collect::<Result<_>>()?;
        for (pos, a) in mapped.iter().enumerate() {
            for b in &mapped[pos + 1..] {
                worst = worst.max(metric(a, b));
            }
        }
        for i in 0..samples {
            let base = (index * samples + i) as u64;
            let la = sampling::dirichlet_lambda(seed, 2 * base, parts);
            let lb = sampling::dirichlet_lambda(seed, 2 * base + 1, parts);
            let a = sampling::point_at(k, index, &la);
            let b = sampling::point_at(k, index, &lb);
            let ta = eval_checked(tau_inverse, &a)?;
            let tb = eval_checked(tau_inverse, &b)?;
            worst = worst.max(metric(&ta, &tb));
        }
    }
    Ok(worst)
}

/// Modulus figures for one delta: the sampled estimate for the target
/// function and for the synthesized network over the same pair set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusEstimate {
    pub delta: f64,
    pub function_estimate: f64,
    pub network_estimate: f64,
}

/// Figures gathered by a full approximation run. Sampled values are lower
/// bounds on their exact counterparts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    /// Seeded sample count requested (the grid comes on top).
    pub samples: usize,
    pub sup_error_estimate: f64,
    pub argmax_point: Vec<f64>,
    pub mesh_target: f64,
    pub star_condition_pass: bool,
    pub complexity: ComplexityFigure,
    pub modulus: Vec<ModulusEstimate>,
}

impl ApproximationReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization")
    }
}
