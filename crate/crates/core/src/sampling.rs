//! Deterministic sampling primitives shared by the star-condition checker
//! and the estimators.
//!
//! Random points are keyed on `(seed, index)` through a splitmix64 mix, so a
//! sample depends only on its index — prefixes nest and shards can be
//! evaluated in any order with identical results.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;

pub(crate) fn splitmix(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e3779b97f4a7c15);
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub(crate) fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed, index))
}

/// All barycentric weight vectors with entries in multiples of
/// `1/resolution`: the compositions of `resolution` into `parts`
/// non-negative integers, in lexicographic order. Includes the vertices
/// themselves.
pub(crate) fn grid_lambdas(resolution: usize, parts: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; parts];
    fn recurse(
        remaining: usize,
        position: usize,
        current: &mut Vec<usize>,
        resolution: usize,
        out: &mut Vec<Vec<f64>>,
    ) {
        if position == current.len() - 1 {
            current[position] = remaining;
            out.push(
                current
                    .iter()
                    .map(|&c| c as f64 / resolution as f64)
                    .collect(),
            );
            return;
        }
        for take in 0..=remaining {
            current[position] = take;
            recurse(remaining - take, position + 1, current, resolution, out);
        }
    }
    recurse(resolution, 0, &mut current, resolution.max(1), &mut out);
    out
}

/// The point of `k` with barycentric weights `lambda` in maximal simplex
/// `index`.
pub(crate) fn point_at(k: &SimplicialComplex, index: usize, lambda: &[f64]) -> Vec<f64> {
    let simplex = &k.maximal_simplices()[index];
    let mut x = vec![0.0; k.ambient_dim()];
    for (&l, &vi) in lambda.iter().zip(simplex) {
        for (d, &c) in k.vertex(vi).iter().enumerate() {
            x[d] += l * c;
        }
    }
    x
}

/// Uniform barycentric weights via normalized exponentials (a Dirichlet(1,..,1)
/// draw), fully determined by `(seed, index)`.
pub(crate) fn dirichlet_lambda(seed: u64, index: u64, parts: usize) -> Vec<f64> {
    let mut rng = rng_for(seed, index);
    let mut lambda: Vec<f64> = (0..parts)
        .map(|_| {
            let u: f64 = rng.random();
            (-(1.0 - u).ln()).max(1e-300)
        })
        .collect();
    let total: f64 = lambda.iter().sum();
    for l in lambda.iter_mut() {
        *l /= total;
    }
    lambda
}

/// The `index`-th seeded sample point of `|k|`: maximal simplices are visited
/// round-robin and the weights are Dirichlet-uniform.
pub(crate) fn seeded_point(k: &SimplicialComplex, seed: u64, index: u64) -> Vec<f64> {
    let simplex = (index % k.maximal_count() as u64) as usize;
    let lambda = dirichlet_lambda(seed, index, k.dim() + 1);
    point_at(k, simplex, &lambda)
}

/// Unit direction in `dim` dimensions from Gaussian draws (Box-Muller),
/// determined by `(seed, index)`.
pub(crate) fn seeded_direction(seed: u64, index: u64, dim: usize) -> Vec<f64> {
    let mut rng = rng_for(seed, index ^ 0x5bd1_e995);
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| {
                let u1: f64 = rng.random::<f64>().max(1e-12);
                let u2: f64 = rng.random();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-9 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts_match_compositions() {
        // C(r + parts - 1, parts - 1) lattice points.
        assert_eq!(grid_lambdas(4, 3).len(), 15);
        assert_eq!(grid_lambdas(4, 4).len(), 35);
        assert_eq!(grid_lambdas(1, 2).len(), 2);
    }

    #[test]
    fn grid_includes_vertices_and_sums_to_one() {
        let grid = grid_lambdas(5, 3);
        for lambda in &grid {
            assert!((lambda.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(grid.iter().any(|l| l == &vec![1.0, 0.0, 0.0]));
        assert!(grid.iter().any(|l| l == &vec![0.0, 0.0, 1.0]));
    }

    #[test]
    fn seeded_draws_are_index_keyed() {
        let a = dirichlet_lambda(7, 3, 4);
        let b = dirichlet_lambda(7, 3, 4);
        assert_eq!(a, b);
        let c = dirichlet_lambda(7, 4, 4);
        assert_ne!(a, c);
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(a.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn directions_are_unit() {
        for i in 0..16 {
            let d = seeded_direction(11, i, 3);
            let n: f64 = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
