//! Deterministic builders for standard triangulations and seeded random
//! test instances (complex pairs with valid vertex maps).

use rand::Rng;

use crate::approx::VertexMap;
use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::linalg;
use crate::sampling;

/// The standard n-simplex: the origin plus the n unit basis vectors, one
/// maximal simplex.
pub fn standard_simplex(n: usize) -> SimplicialComplex {
    assert!(n >= 1, "standard_simplex needs n >= 1");
    let mut vertices = vec![vec![0.0; n]];
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        vertices.push(v);
    }
    SimplicialComplex::new(n, vertices, vec![(0..=n).collect()])
        .expect("standard simplex is valid")
}

/// Kuhn/Freudenthal triangulation of the box `[0, divisions]^n`: each unit
/// cube splits into `n!` simplices along vertex-ordering paths, consistently
/// across shared faces.
pub fn freudenthal_box(n: usize, divisions: usize) -> SimplicialComplex {
    assert!((1..=4).contains(&n), "supported for 1 <= n <= 4");
    assert!(divisions >= 1);
    let side = divisions + 1;
    let vertex_index = |coords: &[usize]| -> usize {
        coords.iter().fold(0, |acc, &c| acc * side + c)
    };
    let mut vertices = Vec::with_capacity(side.pow(n as u32));
    let mut current = vec![0usize; n];
    loop {
        vertices.push(current.iter().map(|&c| c as f64).collect::<Vec<f64>>());
        let mut d = n;
        loop {
            if d == 0 {
                break;
            }
            d -= 1;
            current[d] += 1;
            if current[d] < side {
                break;
            }
            current[d] = 0;
            if d == 0 {
                break;
            }
        }
        if current.iter().all(|&c| c == 0) {
            break;
        }
    }

    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut axes: Vec<usize> = (0..n).collect();
    permute(&mut axes, 0, &mut |p| perms.push(p.to_vec()));

    let mut maximal = Vec::new();
    let mut cube = vec![0usize; n];
    loop {
        for perm in &perms {
            let mut corner = cube.clone();
            let mut simplex = vec![vertex_index(&corner)];
            for &axis in perm {
                corner[axis] += 1;
                simplex.push(vertex_index(&corner));
            }
            maximal.push(simplex);
        }
        let mut d = n;
        loop {
            if d == 0 {
                break;
            }
            d -= 1;
            cube[d] += 1;
            if cube[d] < divisions {
                break;
            }
            cube[d] = 0;
            if d == 0 {
                break;
            }
        }
        if cube.iter().all(|&c| c == 0) {
            break;
        }
    }

    SimplicialComplex::new(n, vertices, maximal).expect("Freudenthal grid is valid")
}

fn permute(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Sub-complex spanned by the chosen maximal simplices, with vertices
/// re-indexed densely. Validity is inherited but re-checked.
pub fn maximal_subset(k: &SimplicialComplex, chosen: &[usize]) -> Result<SimplicialComplex> {
    let mut used: Vec<usize> = chosen
        .iter()
        .flat_map(|&ci| k.maximal_simplices()[ci].iter().copied())
        .collect();
    used.sort_unstable();
    used.dedup();
    let remap = |old: usize| used.binary_search(&old).expect("vertex is used");
    let vertices: Vec<Vec<f64>> = used.iter().map(|&i| k.vertex(i).to_vec()).collect();
    let maximal: Vec<Vec<usize>> = chosen
        .iter()
        .map(|&ci| {
            k.maximal_simplices()[ci]
                .iter()
                .map(|&v| remap(v))
                .collect()
        })
        .collect();
    SimplicialComplex::new(k.ambient_dim(), vertices, maximal)
}

/// A connected selection of up to `max_count` maximal simplices grown from a
/// seeded start by shared-vertex adjacency.
pub fn connected_maximal_subset(k: &SimplicialComplex, max_count: usize, seed: u64) -> Vec<usize> {
    let count = k.maximal_count();
    let mut rng = sampling::rng_for(seed, 0xfeed);
    let start = rng.random_range(0..count);
    let mut chosen = vec![start];
    let mut frontier = vec![start];
    while chosen.len() < max_count.min(count) {
        let mut next = None;
        'search: for &c in &frontier {
            for candidate in 0..count {
                if chosen.contains(&candidate) {
                    continue;
                }
                let shares = k.maximal_simplices()[c]
                    .iter()
                    .any(|v| k.maximal_simplices()[candidate].contains(v));
                if shares {
                    next = Some(candidate);
                    break 'search;
                }
            }
        }
        match next {
            Some(c) => {
                chosen.push(c);
                frontier.push(c);
            }
            None => break,
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Applies a seeded well-conditioned affine map `x -> A x + b` to every
/// vertex; combinatorics are unchanged, so validity is preserved.
pub fn random_affine_image(k: &SimplicialComplex, seed: u64) -> SimplicialComplex {
    let n = k.ambient_dim();
    for attempt in 0..16u64 {
        let mut rng = sampling::rng_for(seed, 0xaff1 + attempt);
        let scale: f64 = rng.random_range(0.6..1.5);
        let mut a = vec![vec![0.0; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let noise: f64 = rng.random_range(-0.25..0.25);
                *v = scale * (if i == j { 1.0 } else { 0.0 } + noise);
            }
        }
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        if linalg::invert(&a, 1e4).is_err() {
            continue;
        }
        let vertices: Vec<Vec<f64>> = k
            .vertices()
            .iter()
            .map(|v| {
                let mut image = linalg::matvec(&a, v);
                for (x, off) in image.iter_mut().zip(&b) {
                    *x += off;
                }
                image
            })
            .collect();
        if let Ok(out) = SimplicialComplex::new(
            n,
            vertices,
            k.maximal_simplices().to_vec(),
        ) {
            return out;
        }
    }
    k.clone()
}

/// A seeded full-dimensional complex with at most `max_simplices` maximal
/// simplices: a connected Freudenthal subset under a random affine map.
pub fn random_complex(n: usize, max_simplices: usize, seed: u64) -> SimplicialComplex {
    let mut rng = sampling::rng_for(seed, 0xc0);
    let divisions = match n {
        1 => 30,
        2 => 4,
        _ => 2,
    };
    let grid = freudenthal_box(n, divisions);
    let count = rng.random_range(1..=max_simplices.min(grid.maximal_count()));
    let chosen = connected_maximal_subset(&grid, count, sampling::splitmix(seed, 1));
    let subset = maximal_subset(&grid, &chosen).expect("subset of a valid complex");
    random_affine_image(&subset, sampling::splitmix(seed, 2))
}

/// A seeded valid instance for the exactness property suite: source and
/// target complexes (dimensions at most 3, full-dimensional) plus a valid
/// vertex map between them. Instances rotate through four families:
/// identity maps, constant maps, arbitrary maps into a single simplex, and
/// random collapses of a barycentric subdivision onto its base complex.
pub fn random_instance(seed: u64) -> (SimplicialComplex, SimplicialComplex, VertexMap) {
    let mut rng = sampling::rng_for(seed, 0x1257);
    match seed % 4 {
        0 => {
            let n = rng.random_range(1..=3usize);
            let k = random_complex(n, if n == 3 { 12 } else { 30 }, seed);
            let assignment: Vec<usize> = (0..k.vertex_count()).collect();
            let map = VertexMap::new(&k, &k, assignment).expect("identity map");
            (k.clone(), k, map)
        }
        1 => {
            let n = rng.random_range(1..=3usize);
            let m = rng.random_range(1..=3usize);
            let k = random_complex(n, if n == 3 { 12 } else { 30 }, seed);
            let l = random_complex(m, if m == 3 { 12 } else { 30 }, seed ^ 0x51a5);
            // A constant map is simplicial onto any vertex of the target.
            let w = l.maximal_simplices()[0][0];
            let assignment = vec![w; k.vertex_count()];
            let map = VertexMap::new(&k, &l, assignment).expect("constant map");
            (k, l, map)
        }
        2 => {
            let n = rng.random_range(1..=3usize);
            let m = rng.random_range(1..=3usize);
            let k = random_complex(n, if n == 3 { 12 } else { 30 }, seed);
            let l = random_affine_image(&standard_simplex(m), seed ^ 0x7e11);
            // Any assignment into a single simplex spans one of its faces.
            let assignment: Vec<usize> = (0..k.vertex_count())
                .map(|_| rng.random_range(0..l.vertex_count()))
                .collect();
            let map = VertexMap::new(&k, &l, assignment).expect("single-simplex map");
            (k, l, map)
        }
        _ => {
            let m = rng.random_range(1..=2usize);
            let max = if m == 1 { 15 } else { 5 };
            let l = random_complex(m, max, seed ^ 0xba5e);
            let record = l.barycentric_subdivide(1).expect("t = 1");
            // Collapse each barycenter onto a random vertex of the simplex
            // it subdivides; chains of nested faces keep this simplicial.
            let assignment: Vec<usize> = record
                .vertex_provenance
                .iter()
                .map(|face| {
                    let pick = rng.random_range(0..face.indices().len());
                    face.indices()[pick]
                })
                .collect();
            let k = record.complex;
            let map = VertexMap::new(&k, &l, assignment).expect("subdivision collapse");
            (k, l, map)
        }
    }
}
