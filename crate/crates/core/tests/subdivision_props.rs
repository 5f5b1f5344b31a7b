//! Subdivision properties: mesh contraction, combinatorial counts against a
//! brute-force face-enumeration oracle, sampled point-set equality, star
//! symmetry, and soundness of the subdivision-count bound.

use std::collections::BTreeSet;

use proptest::prelude::*;

use simplicial_nn::generate::{
    connected_maximal_subset, freudenthal_box, maximal_subset, random_affine_image,
    random_complex,
};
use simplicial_nn::{locate, SimplexRef, SimplicialComplex, DEFAULT_TOL};

/// Independent face counter: enumerates every subset of every maximal
/// simplex directly, deduplicating by index set.
fn brute_force_faces(k: &SimplicialComplex) -> BTreeSet<Vec<usize>> {
    let mut faces = BTreeSet::new();
    for simplex in k.maximal_simplices() {
        let n = simplex.len();
        for mask in 1u32..(1 << n) {
            let subset: Vec<usize> = (0..n)
                .filter(|&b| mask & (1 << b) != 0)
                .map(|b| simplex[b])
                .collect();
            faces.insert(subset);
        }
    }
    faces
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Brute-force chain-enumeration oracle for the subdivision size of one
/// maximal simplex: counts strictly increasing face chains ending at the
/// full simplex, built from the face lattice rather than permutations.
fn chain_count_oracle(dim: usize) -> usize {
    // Chains f_0 < f_1 < ... < f_dim with |f_i| = i + 1 inside one simplex.
    // Enumerate recursively over subsets of {0..dim}.
    fn extend(current: &[usize], full: usize) -> usize {
        if current.len() == full {
            return 1;
        }
        let mut count = 0;
        for next in 0..full {
            if !current.contains(&next) {
                let mut longer = current.to_vec();
                longer.push(next);
                count += extend(&longer, full);
            }
        }
        count
    }
    extend(&[], dim + 1)
}

#[test]
fn single_simplex_subdivision_counts_match_oracle() {
    for n in 1..=3 {
        let k = simplicial_nn::generate::standard_simplex(n);
        let record = k.barycentric_subdivide(1).unwrap();
        let oracle = chain_count_oracle(n);
        assert_eq!(oracle, factorial(n + 1));
        assert_eq!(record.complex.maximal_count(), oracle);
    }
}

#[test]
fn mesh_contraction_on_dimension_four() {
    let grid = freudenthal_box(4, 1);
    let chosen = connected_maximal_subset(&grid, 6, 17);
    let sub = maximal_subset(&grid, &chosen).unwrap();
    let k = random_affine_image(&sub, 23);
    let record = k.barycentric_subdivide(1).unwrap();
    let ratio = 4.0 / 5.0;
    assert!(record.complex.mesh() <= ratio * k.mesh() + 1e-12);
}

#[test]
fn sampled_point_set_equality_under_subdivision() {
    // 10^3 seeded points of |K| lie in |Sd K| and vice versa.
    let k = random_complex(2, 8, 42);
    let sd = k.barycentric_subdivide(1).unwrap().complex;
    let points = 1000;
    for (a, b) in [(&k, &sd), (&sd, &k)] {
        for i in 0..points {
            let x = seeded_point_of(a, 7, i);
            let loc = locate(b, &x, 1e-7).unwrap();
            assert!(loc.is_inside(), "point {x:?} escaped the other complex");
        }
    }
}

/// Deterministic interior point: barycentric weights from a simple integer
/// mix, independent of the library's samplers.
fn seeded_point_of(k: &SimplicialComplex, seed: u64, index: u64) -> Vec<f64> {
    let simplex_idx = (index % k.maximal_count() as u64) as usize;
    let simplex = &k.maximal_simplices()[simplex_idx];
    let mut weights: Vec<f64> = (0..simplex.len())
        .map(|j| {
            let h = seed
                .wrapping_mul(0x9e3779b97f4a7c15)
                .wrapping_add(index)
                .wrapping_mul(31)
                .wrapping_add(j as u64)
                .wrapping_mul(0x2545f4914f6cdd1d);
            ((h >> 11) as f64 / (1u64 << 53) as f64) + 1e-6
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
}

#[test]
fn subdivision_count_bound_is_sound_when_subdividing() {
    // For seeded (K, epsilon) with returned t <= 4, subdividing reaches the
    // target mesh.
    for seed in 0..12u64 {
        let n = 1 + (seed % 2) as usize;
        let k = random_complex(n, 6, seed);
        let mesh = k.mesh();
        let shrink = [0.9, 0.52, 0.35, 0.21][(seed % 4) as usize];
        let epsilon = mesh * shrink;
        let t = k.subdivision_count_for_mesh(epsilon).unwrap();
        assert!(t <= 4, "unexpectedly large t = {t}");
        let reached = if t == 0 {
            k.mesh()
        } else {
            k.barycentric_subdivide(t).unwrap().complex.mesh()
        };
        assert!(
            reached <= epsilon,
            "seed {seed}: t = {t}, mesh {reached} > epsilon {epsilon}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mesh_contracts_by_dimension_ratio(seed in any::<u64>(), n in 1usize..=3) {
        let k = random_complex(n, if n == 3 { 6 } else { 12 }, seed);
        let record = k.barycentric_subdivide(1).unwrap();
        let ratio = n as f64 / (n as f64 + 1.0);
        prop_assert!(record.complex.mesh() <= ratio * k.mesh() + 1e-12);
    }

    #[test]
    fn subdivision_counts_match_face_enumeration(seed in any::<u64>(), n in 1usize..=3) {
        let k = random_complex(n, if n == 3 { 4 } else { 8 }, seed);
        let record = k.barycentric_subdivide(1).unwrap();
        let faces = brute_force_faces(&k);
        prop_assert_eq!(record.complex.vertex_count(), faces.len());
        prop_assert_eq!(record.vertex_provenance.len(), faces.len());
        prop_assert_eq!(
            record.complex.maximal_count(),
            k.maximal_count() * factorial(n + 1)
        );
    }

    #[test]
    fn star_of_simplex_is_symmetric(seed in any::<u64>(), n in 1usize..=3) {
        let k = random_complex(n, if n == 3 { 4 } else { 8 }, seed);
        let faces = k.faces();
        let sigma = &faces[(seed % faces.len() as u64) as usize];
        let star = k.star(sigma).unwrap();
        for mu in &star {
            if mu.dim() == k.dim() {
                // Top-dimensional members of st(sigma) must contain sigma.
                prop_assert!(sigma.is_face_of(mu));
            }
        }
        // And sigma itself always belongs to its star.
        prop_assert!(star.iter().any(|m| m == sigma));
    }

    #[test]
    fn subdivision_preserves_ids_of_original_vertices(seed in any::<u64>()) {
        // Canonical face order puts the 0-faces first, in index order, so
        // original vertex coordinates survive as a prefix.
        let k = random_complex(2, 8, seed);
        let sd = k.barycentric_subdivide(1).unwrap();
        for (i, face) in sd.vertex_provenance.iter().enumerate().take(k.vertex_count()) {
            prop_assert_eq!(face.indices().len(), 1);
            prop_assert_eq!(sd.complex.vertex(i), k.vertex(face.indices()[0]));
        }
    }

    #[test]
    fn locate_and_simplex_ref_agree(seed in any::<u64>()) {
        let k = random_complex(2, 8, seed);
        let x = seeded_point_of(&k, seed, 3);
        let loc = locate(&k, &x, DEFAULT_TOL).unwrap();
        prop_assert!(loc.is_inside());
        for hit in &loc.hits {
            let simplex = SimplexRef::new(k.maximal_simplices()[hit.simplex].clone()).unwrap();
            prop_assert!(k.contains_simplex(&simplex));
        }
    }
}
