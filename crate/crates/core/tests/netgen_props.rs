//! Network synthesis properties: exact realization against the independent
//! simplicial-map evaluator, vertex fidelity, width formulas, and per-simplex
//! affinity.

use proptest::prelude::*;

use simplicial_nn::generate::{random_instance, standard_simplex};
use simplicial_nn::{
    complexity, evaluate_simplicial_map, synthesize_network, verify_synthesis, SimplicialComplex,
    VertexMap,
};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Deterministic interior points of a maximal simplex.
fn probe_points(k: &SimplicialComplex, simplex_idx: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let simplex = &k.maximal_simplices()[simplex_idx];
    (0..count)
        .map(|i| {
            let mut weights: Vec<f64> = (0..simplex.len())
                .map(|j| {
                    let h = seed
                        .wrapping_add(i as u64)
                        .wrapping_mul(0x9e3779b97f4a7c15)
                        .wrapping_add(j as u64)
                        .wrapping_mul(0x2545f4914f6cdd1d);
                    ((h >> 11) as f64 / (1u64 << 53) as f64) + 1e-9
                })
                .collect();
            let total: f64 = weights.iter().sum();
            for w in weights.iter_mut() {
                *w /= total;
            }
            let mut x = vec![0.0; k.ambient_dim()];
            for (&w, &vi) in weights.iter().zip(simplex) {
                for (d, &c) in k.vertex(vi).iter().enumerate() {
                    x[d] += w * c;
                }
            }
            x
        })
        .collect()
}

#[test]
fn widths_after_subdividing_single_simplices_match_complexity() {
    for n in 1..=2usize {
        for t1 in 0..=2usize {
            let base = standard_simplex(n);
            let k = if t1 == 0 {
                base.clone()
            } else {
                base.barycentric_subdivide(t1).unwrap().complex
            };
            let assignment = vec![0; k.vertex_count()];
            let map = VertexMap::new(&k, &base, assignment).unwrap();
            let net = synthesize_network(&k, &base, &map).unwrap();
            let figure = complexity(1, n as u64, t1 as u64, 1, n as u64, 0).unwrap();
            assert_eq!(net.first_hidden_width() as u64, figure.first_width);
            assert_eq!(net.second_hidden_width() as u64, figure.second_width);
        }
    }
}

/// Deep sweep over many more instances than the default suites; run with
/// `cargo test -- --ignored` when touching the forward-pass gating.
#[test]
#[ignore]
fn exactness_deep_sweep() {
    let mut worst = 0.0_f64;
    for seed in 0..1000u64 {
        let (k, l, map) = random_instance(seed);
        let net = synthesize_network(&k, &l, &map).unwrap();
        let map_fn = simplicial_nn::SimplicialMapFn::new(&k, &l, &map).unwrap();
        for simplex_idx in 0..k.maximal_count() {
            for x in probe_points(&k, simplex_idx, 20, seed ^ 0x5eed) {
                let err = dist(
                    &net.forward(&x).unwrap(),
                    &map_fn.eval_point(&x).unwrap(),
                );
                worst = worst.max(err);
                assert!(err <= 1e-9, "seed {seed}: error {err} at {x:?}");
            }
        }
    }
    println!("deep sweep worst error: {worst:.3e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn forward_matches_simplicial_map(seed in any::<u64>()) {
        let (k, l, map) = random_instance(seed);
        let net = synthesize_network(&k, &l, &map).unwrap();
        prop_assert_eq!(net.first_hidden_width(), k.maximal_count() * (k.dim() + 1));
        prop_assert_eq!(net.second_hidden_width(), l.maximal_count() * (l.dim() + 1));
        for simplex_idx in 0..k.maximal_count() {
            for x in probe_points(&k, simplex_idx, 8, seed) {
                let via_net = net.forward(&x).unwrap();
                let via_map = evaluate_simplicial_map(&k, &l, &map, &x).unwrap();
                prop_assert!(
                    dist(&via_net, &via_map) <= 1e-9,
                    "seed {}: {:?} vs {:?} at {:?}",
                    seed,
                    via_net,
                    via_map,
                    x
                );
            }
        }
    }

    #[test]
    fn vertices_map_to_their_images(seed in any::<u64>()) {
        let (k, l, map) = random_instance(seed);
        let net = synthesize_network(&k, &l, &map).unwrap();
        for v in 0..k.vertex_count() {
            let y = net.forward(k.vertex(v)).unwrap();
            let expected = l.vertex(map.image_of(v));
            prop_assert!(dist(&y, expected) <= 1e-9);
        }
    }

    #[test]
    fn synthesis_invariants_hold(seed in any::<u64>()) {
        let (k, l, map) = random_instance(seed);
        let net = synthesize_network(&k, &l, &map).unwrap();
        verify_synthesis(&net, &k, &l, 1e-9).unwrap();
    }

    #[test]
    fn forward_is_affine_per_simplex(seed in any::<u64>()) {
        let (k, l, map) = random_instance(seed);
        let net = synthesize_network(&k, &l, &map).unwrap();
        let points = probe_points(&k, 0, 2, seed);
        let (a, b) = (&points[0], &points[1]);
        for lambda in [0.25, 0.5, 0.75] {
            let mid: Vec<f64> = a
                .iter()
                .zip(b)
                .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
                .collect();
            let fa = net.forward(a).unwrap();
            let fb = net.forward(b).unwrap();
            let fmid = net.forward(&mid).unwrap();
            let expected: Vec<f64> = fa
                .iter()
                .zip(&fb)
                .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
                .collect();
            prop_assert!(dist(&fmid, &expected) <= 1e-9);
        }
    }

    #[test]
    fn simplicial_map_is_piecewise_linear(seed in any::<u64>()) {
        let (k, l, map) = random_instance(seed);
        let points = probe_points(&k, 0, 2, seed ^ 1);
        let (a, b) = (&points[0], &points[1]);
        for lambda in [0.1, 0.5, 0.9] {
            let mid: Vec<f64> = a
                .iter()
                .zip(b)
                .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
                .collect();
            let fa = evaluate_simplicial_map(&k, &l, &map, a).unwrap();
            let fb = evaluate_simplicial_map(&k, &l, &map, b).unwrap();
            let fmid = evaluate_simplicial_map(&k, &l, &map, &mid).unwrap();
            let expected: Vec<f64> = fa
                .iter()
                .zip(&fb)
                .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
                .collect();
            prop_assert!(dist(&fmid, &expected) <= 1e-9);
        }
    }
}
