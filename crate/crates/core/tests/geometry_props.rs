//! Geometry properties: barycentric round trips, locate consistency, vertex
//! cases, and coordinate agreement on shared faces.

use proptest::prelude::*;

use simplicial_nn::generate::random_complex;
use simplicial_nn::{barycentric_coordinates, locate, SimplicialComplex, DEFAULT_TOL};

fn square_pair() -> SimplicialComplex {
    SimplicialComplex::new(
        2,
        vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ],
        vec![vec![0, 1, 2], vec![1, 2, 3]],
    )
    .unwrap()
}

fn normalize(weights: &mut Vec<f64>) {
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn barycentric_round_trip(
        seed in any::<u64>(),
        raw in prop::collection::vec(1e-3f64..1.0, 4),
    ) {
        let n = 1 + (seed % 3) as usize;
        let k = random_complex(n, 6, seed);
        let simplex = &k.maximal_simplices()[(seed % k.maximal_count() as u64) as usize];
        let mut weights: Vec<f64> = raw[..simplex.len()].to_vec();
        normalize(&mut weights);
        let mut x = vec![0.0; k.ambient_dim()];
        for (&w, &vi) in weights.iter().zip(simplex) {
            for (d, &c) in k.vertex(vi).iter().enumerate() {
                x[d] += w * c;
            }
        }
        let verts: Vec<Vec<f64>> = simplex.iter().map(|&i| k.vertex(i).to_vec()).collect();
        let coords = barycentric_coordinates(&verts, &x).unwrap();
        for (a, b) in coords.iter().zip(&weights) {
            prop_assert!((a - b).abs() < 1e-9, "{coords:?} vs {weights:?}");
        }
    }

    #[test]
    fn located_points_reconstruct(seed in any::<u64>(), raw in prop::collection::vec(1e-3f64..1.0, 3)) {
        let k = random_complex(2, 8, seed);
        let simplex = &k.maximal_simplices()[(seed % k.maximal_count() as u64) as usize];
        let mut weights = raw.clone();
        normalize(&mut weights);
        let mut x = vec![0.0; 2];
        for (&w, &vi) in weights.iter().zip(simplex) {
            for (d, &c) in k.vertex(vi).iter().enumerate() {
                x[d] += w * c;
            }
        }
        let loc = locate(&k, &x, DEFAULT_TOL).unwrap();
        prop_assert!(loc.is_inside());
        for hit in &loc.hits {
            let hit_simplex = &k.maximal_simplices()[hit.simplex];
            let mut recon = vec![0.0; 2];
            for (&l, &vi) in hit.coords.iter().zip(hit_simplex) {
                for (d, &c) in k.vertex(vi).iter().enumerate() {
                    recon[d] += l * c;
                }
            }
            let err: f64 = recon
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            prop_assert!(err < 1e-9);
        }
    }

    #[test]
    fn vertex_coordinates_are_unit_vectors(seed in any::<u64>()) {
        let k = random_complex(2, 8, seed);
        let simplex = &k.maximal_simplices()[0];
        let verts: Vec<Vec<f64>> = simplex.iter().map(|&i| k.vertex(i).to_vec()).collect();
        for (pos, v) in verts.iter().enumerate() {
            let coords = barycentric_coordinates(&verts, v).unwrap();
            for (j, &c) in coords.iter().enumerate() {
                let expected = if j == pos { 1.0 } else { 0.0 };
                prop_assert!((c - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shared_face_coordinates_agree(t in 0.0f64..1.0) {
        // x on the shared edge (1, 2) of the square pair.
        let k = square_pair();
        let x = [1.0 - t + 0.0 * t, 0.0 * (1.0 - t) + t]; // (1-t)*(1,0) + t*(0,1)
        let loc = locate(&k, &x, DEFAULT_TOL).unwrap();
        prop_assert_eq!(loc.hits.len(), 2);
        // Weight of shared vertex 1 and 2 must agree across the two hits;
        // non-shared vertices carry at most tolerance.
        let mut shared_weights = Vec::new();
        for hit in &loc.hits {
            let simplex = &k.maximal_simplices()[hit.simplex];
            let mut w1 = 0.0;
            let mut w2 = 0.0;
            for (&l, &vi) in hit.coords.iter().zip(simplex) {
                match vi {
                    1 => w1 = l,
                    2 => w2 = l,
                    _ => prop_assert!(l.abs() <= 1e-9, "non-shared weight {l}"),
                }
            }
            shared_weights.push((w1, w2));
        }
        let (a1, a2) = shared_weights[0];
        let (b1, b2) = shared_weights[1];
        prop_assert!((a1 - b1).abs() < 1e-9);
        prop_assert!((a2 - b2).abs() < 1e-9);
    }
}
