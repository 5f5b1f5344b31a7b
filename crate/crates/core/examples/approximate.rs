//! End-to-end pipeline on a custom function: approximate a smooth warp of
//! the unit square by a synthesized network, refining the target until the
//! error budget is met.

use simplicial_nn::generate::freudenthal_box;
use simplicial_nn::{
    build_vertex_map, estimate_sup_distance, synthesize_network, NetworkFn, SamplerFn,
    SimplicialMapFn,
};

fn main() -> simplicial_nn::Result<()> {
    // Domain and codomain: the unit square, Kuhn-triangulated.
    let square = freudenthal_box(2, 1);

    // The function to approximate: a gentle polynomial warp of the square
    // into itself.
    let g = SamplerFn::new(2, |x: &[f64]| {
        vec![
            x[0] * x[0] * (3.0 - 2.0 * x[0]),
            0.5 * x[1] + 0.5 * x[1] * x[0],
        ]
    });

    // Refine the target until its mesh is below the error budget, then
    // search for a vertex map (subdividing the source as needed).
    let budget = 1.0;
    let t2 = square.subdivision_count_for_mesh(budget)?;
    let target = if t2 == 0 {
        square.clone()
    } else {
        square.barycentric_subdivide(t2)?.complex
    };
    println!(
        "target: Sd^{t2}, {} maximal simplices, mesh {:.4}",
        target.maximal_count(),
        target.mesh()
    );

    let built = build_vertex_map(&square, &target, &g, 4, 4)?;
    println!(
        "vertex map found at t1 = {} ({} source simplices)",
        built.t,
        built.source.maximal_count()
    );

    let net = synthesize_network(&built.source, &target, &built.map)?;
    println!(
        "network widths: {} -> {} -> {} -> {}",
        net.n,
        net.first_hidden_width(),
        net.second_hidden_width(),
        net.m
    );

    // The network equals the simplicial map exactly ...
    let map_fn = SimplicialMapFn::new(&built.source, &target, &built.map)?;
    let net_fn = NetworkFn::new(&net);
    let exact = estimate_sup_distance(&map_fn, &net_fn, &built.source, 2000, 7)?;
    println!("network vs simplicial map: {:.3e}", exact.estimate);

    // ... and approximates g to within the target mesh.
    let err = estimate_sup_distance(&g, &net_fn, &built.source, 2000, 7)?;
    println!(
        "network vs g: {:.4} (target mesh {:.4})",
        err.estimate,
        target.mesh()
    );
    assert!(exact.estimate <= 1e-9);
    assert!(err.estimate <= target.mesh() + 1e-6);
    Ok(())
}
