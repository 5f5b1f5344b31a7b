//! Training-free construction of two-hidden-layer feed-forward networks
//! that exactly realize simplicial maps between finite pure simplicial
//! complexes, together with the subdivision and approximation machinery
//! (barycentric subdivision, star condition, mesh bounds) needed to make
//! such a network approximate a continuous function between triangulated
//! spaces to a chosen tolerance.
//!
//! The pipeline: triangulate the spaces, sample the continuous function,
//! search for a vertex map whose induced simplicial map approximates it
//! (subdividing the source until the star condition holds), then read the
//! network weights straight off the complexes — barycentric-coordinate
//! solves for the first layer, the vertex map as a 0/1 matrix for the
//! second, target vertex coordinates for the output layer. No gradients,
//! no training.
//!
//! # Quick start
//!
//! ```
//! use simplicial_nn::{synthesize_network, SimplicialComplex, VertexMap};
//!
//! // A tetrahedron mapped onto a triangle by collapsing two vertices.
//! let k = SimplicialComplex::new(
//!     3,
//!     vec![
//!         vec![0.0, 0.0, 0.0],
//!         vec![1.0, 0.0, 0.0],
//!         vec![0.0, 1.0, 0.0],
//!         vec![0.0, 0.0, 1.0],
//!     ],
//!     vec![vec![0, 1, 2, 3]],
//! )?;
//! let l = SimplicialComplex::new(
//!     2,
//!     vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
//!     vec![vec![0, 1, 2]],
//! )?;
//! let map = VertexMap::new(&k, &l, vec![0, 1, 2, 2])?;
//!
//! // Every weight comes from the geometry; the network IS the map.
//! let net = synthesize_network(&k, &l, &map)?;
//! assert_eq!(net.forward(&[0.25, 0.25, 0.25])?, vec![0.25, 0.5]);
//! # Ok::<(), simplicial_nn::Error>(())
//! ```

pub mod analysis;
pub mod approx;
pub mod ball;
pub mod complex;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod jsonio;
mod linalg;
pub mod netgen;
mod sampling;

pub use analysis::{
    complexity, estimate_extended_mesh, estimate_modulus, estimate_sup_distance,
    estimate_sup_distance_sharded, ApproximationReport, ComplexityFigure, ModulusEstimate,
    SupEstimate,
};
pub use approx::{
    build_vertex_map, build_vertex_map_with_preference, check_star_condition,
    evaluate_simplicial_map, validate_vertex_map, BuiltVertexMap, FunctionSampler, SamplerFn,
    SimplicialMapFn, StarConditionReport, VertexMap, VertexMapFile,
};
pub use ball::{
    run_ball_example, tau_ball, tau_inverse_ball, BallExampleConfig, BallProjectionMap,
    BallReport, ReflectedBallProjectionMap,
};
pub use complex::{ComplexId, SimplexRef, SimplicialComplex, SubdivisionRecord};
pub use error::{Error, Result};
pub use geometry::{
    barycentric_coordinates, is_affinely_independent, locate, BarycentricLocation,
    LocatedSimplex, SolveCache, DEFAULT_TOL,
};
pub use netgen::{
    synthesize_network, verify_synthesis, ForwardTrace, NetworkFn, SynthesizedNetwork,
};
