//! Built-in golden scenario: the coordinate projection of the unit 3-ball
//! onto the unit 2-ball, carried between a tetrahedron and a triangle by
//! explicit radial homeomorphisms, approximated end to end by a synthesized
//! network.

use serde::{Deserialize, Serialize};

use crate::analysis::{
    complexity, estimate_modulus, estimate_sup_distance, ApproximationReport, ModulusEstimate,
};
use crate::approx::{
    build_vertex_map_with_preference, check_star_condition, FunctionSampler, SimplicialMapFn,
    StarConditionReport,
};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geometry::{SolveCache, DEFAULT_TOL};
use crate::linalg;
use crate::netgen::{synthesize_network, NetworkFn, SynthesizedNetwork};

/// The reference vertex assignment of the golden scenario at t1 = t2 = 0.
pub const REFERENCE_ASSIGNMENT: [usize; 4] = [0, 1, 2, 2];

/// Star-condition sampling resolution used throughout the scenario.
pub const STAR_RESOLUTION: usize = 5;

/// Auto-escalation cap on extra source subdivisions (24^t maximal simplices
/// grow fast).
pub const MAX_AUTO_T: usize = 3;

/// The tetrahedron triangulating the unit 3-ball.
pub fn ball_tetrahedron() -> SimplicialComplex {
    SimplicialComplex::new(
        3,
        vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ],
        vec![vec![0, 1, 2, 3]],
    )
    .expect("tetrahedron is valid")
}

/// The triangle triangulating the unit 2-ball.
pub fn ball_triangle() -> SimplicialComplex {
    SimplicialComplex::new(
        2,
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![vec![0, 1, 2]],
    )
    .expect("triangle is valid")
}

fn reference_complex(dim: usize) -> Result<SimplicialComplex> {
    match dim {
        2 => Ok(ball_triangle()),
        3 => Ok(ball_tetrahedron()),
        other => Err(Error::DimensionMismatch {
            expected: 3,
            found: other,
        }),
    }
}

/// Distance from the shifted center to the simplex boundary along `dir`
/// (unit). Barycentric coordinates are affine in the step length, so the
/// exit is the first coordinate to reach zero.
fn boundary_distance(cache: &SolveCache, center: &[f64], dir: &[f64]) -> f64 {
    let (at_center, _) = cache.coords(0, center);
    let shifted: Vec<f64> = center.iter().zip(dir).map(|(c, d)| c + d).collect();
    let (at_shifted, _) = cache.coords(0, &shifted);
    let mut exit = f64::INFINITY;
    for (lc, ls) in at_center.iter().zip(&at_shifted) {
        let rate = ls - lc;
        if rate < -1e-15 {
            exit = exit.min(-lc / rate);
        }
    }
    exit
}

/// Inverse homeomorphism: simplex point to ball point. The ray from the
/// center through `p` meets the simplex boundary at distance `|OA|` and the
/// unit sphere at distance 1, and `p` is scaled by their ratio. The center
/// itself maps to the origin.
pub fn tau_inverse_ball(p: &[f64], dim: usize) -> Result<Vec<f64>> {
    let complex = reference_complex(dim)?;
    if p.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    let cache = SolveCache::for_complex(&complex)?;
    let (coords, _) = cache.coords(0, p);
    if coords.iter().any(|&l| l < -DEFAULT_TOL) {
        return Err(Error::OutsideSimplex);
    }
    let center = vec![0.25; dim];
    let q: Vec<f64> = p.iter().zip(&center).map(|(a, c)| a - c).collect();
    let len = linalg::norm(&q);
    if len < 1e-14 {
        return Ok(vec![0.0; dim]);
    }
    let dir: Vec<f64> = q.iter().map(|v| v / len).collect();
    let exit = boundary_distance(&cache, &center, &dir);
    Ok(q.iter().map(|v| v / exit).collect())
}

/// Forward homeomorphism: ball point to simplex point (the inverse of
/// [`tau_inverse_ball`]): `y` maps to `center + |OA|(dir(y)) * y`.
pub fn tau_ball(y: &[f64], dim: usize) -> Result<Vec<f64>> {
    let complex = reference_complex(dim)?;
    if y.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: y.len(),
        });
    }
    let len = linalg::norm(y);
    if len > 1.0 + 1e-9 {
        return Err(Error::OutsideDomain);
    }
    let center = vec![0.25; dim];
    if len < 1e-14 {
        return Ok(center);
    }
    let cache = SolveCache::for_complex(&complex)?;
    let dir: Vec<f64> = y.iter().map(|v| v / len).collect();
    let exit = boundary_distance(&cache, &center, &dir);
    Ok(center
        .iter()
        .zip(y)
        .map(|(c, v)| c + exit * v)
        .collect())
}

/// The scenario's continuous function between the underlying spaces:
/// tetrahedron point -> unit 3-ball -> drop z -> unit 2-ball -> triangle.
pub struct BallProjectionMap {
    tetra_cache: SolveCache,
    triangle_cache: SolveCache,
}

impl BallProjectionMap {
    pub fn new() -> Result<Self> {
        Ok(BallProjectionMap {
            tetra_cache: SolveCache::for_complex(&ball_tetrahedron())?,
            triangle_cache: SolveCache::for_complex(&ball_triangle())?,
        })
    }

    fn eval_inner(&self, x: &[f64]) -> Result<Vec<f64>> {
        let center3 = [0.25; 3];
        let q: Vec<f64> = x.iter().zip(&center3).map(|(a, c)| a - c).collect();
        let len = linalg::norm(&q);
        let ball3 = if len < 1e-14 {
            vec![0.0; 3]
        } else {
            let dir: Vec<f64> = q.iter().map(|v| v / len).collect();
            let exit = boundary_distance(&self.tetra_cache, &center3, &dir);
            q.iter().map(|v| v / exit).collect()
        };
        let ball2 = [ball3[0], ball3[1]];
        let len2 = linalg::norm(&ball2);
        if len2 < 1e-14 {
            return Ok(vec![0.25, 0.25]);
        }
        let center2 = [0.25; 2];
        let dir2: Vec<f64> = ball2.iter().map(|v| v / len2).collect();
        let exit2 = boundary_distance(&self.triangle_cache, &center2, &dir2);
        Ok(center2
            .iter()
            .zip(&ball2)
            .map(|(c, v)| c + exit2 * v)
            .collect())
    }
}

impl FunctionSampler for BallProjectionMap {
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.eval_inner(x)
    }

    fn output_dim(&self) -> usize {
        2
    }
}

/// Deliberately broken variant for negative tests: projects onto the
/// triangle reflected through the origin, so images leave the target space.
pub struct ReflectedBallProjectionMap {
    inner: BallProjectionMap,
}

impl ReflectedBallProjectionMap {
    pub fn new() -> Result<Self> {
        Ok(ReflectedBallProjectionMap {
            inner: BallProjectionMap::new()?,
        })
    }
}

impl FunctionSampler for ReflectedBallProjectionMap {
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.inner.eval_inner(x)?;
        Ok(y.into_iter().map(|v| -v).collect())
    }

    fn output_dim(&self) -> usize {
        2
    }
}

/// Configuration of one golden-scenario run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallExampleConfig {
    /// Source subdivisions applied before the vertex-map search (which may
    /// escalate further, up to [`MAX_AUTO_T`] extra steps).
    pub t1: usize,
    /// Target subdivisions.
    pub t2: usize,
    /// Seeded samples per estimator (the deterministic grid comes on top).
    pub samples: usize,
    pub seed: u64,
    /// Membership tolerance.
    pub tol: f64,
    /// Deltas at which the modulus estimates are reported.
    pub deltas: Vec<f64>,
}

impl Default for BallExampleConfig {
    fn default() -> Self {
        BallExampleConfig {
            t1: 0,
            t2: 0,
            samples: 512,
            seed: 0,
            tol: DEFAULT_TOL,
            deltas: vec![0.1],
        }
    }
}

/// Comparison of the derived assignment with [`REFERENCE_ASSIGNMENT`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceComparison {
    /// True when the run is at the base configuration the reference applies
    /// to (t1 = t2 = 0, no escalation).
    pub applicable: bool,
    pub matches: bool,
}

/// Sampled verification that the network equals the simplicial map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactRealizationCheck {
    pub max_error: f64,
    pub points: usize,
    pub pass: bool,
}

/// Full outcome of a golden-scenario run.
#[derive(Debug, Clone)]
pub struct BallReport {
    pub config: BallExampleConfig,
    pub t1_requested: usize,
    pub t1_effective: usize,
    pub t2: usize,
    pub assignment: Vec<usize>,
    pub reference: ReferenceComparison,
    pub network: SynthesizedNetwork,
    pub exact_realization: ExactRealizationCheck,
    pub mesh_source: f64,
    pub star_condition: StarConditionReport,
    pub approximation: ApproximationReport,
    /// Whether mesh(target) <= rho(delta, g)/2 held at the first delta —
    /// the idealized premise of the doubled-modulus bound.
    pub modulus_precondition_met: bool,
}

impl BallReport {
    /// Deterministic JSON form; byte-identical for equal configurations.
    pub fn to_json_value(&self) -> serde_json::Value {
        let violations: Vec<usize> = self
            .star_condition
            .vertices
            .iter()
            .filter(|v| v.violated)
            .map(|v| v.vertex)
            .collect();
        serde_json::json!({
            "approximation": self.approximation.to_json_value(),
            "assignment": self.assignment,
            "config": serde_json::to_value(&self.config).expect("config"),
            "exact_realization": serde_json::to_value(&self.exact_realization).expect("exactness"),
            "mesh_source": self.mesh_source,
            "modulus_precondition_met": self.modulus_precondition_met,
            "network": self.network.to_json_value(),
            "reference": serde_json::to_value(&self.reference).expect("reference"),
            "star_condition": {
                "pass": self.star_condition.pass,
                "resolution": self.star_condition.resolution,
                "vertices_checked": self.star_condition.vertices.len(),
                "violations": violations,
            },
            "t1_effective": self.t1_effective,
            "t1_requested": self.t1_requested,
            "t2": self.t2,
        })
    }
}

/// Runs the full pipeline on the ball scenario: subdivide, derive the vertex
/// map (Algorithm-1 style search with the reference assignment as tie-break
/// at the base configuration), synthesize the network, verify exactness, and
/// gather the approximation figures.
pub fn run_ball_example(cfg: &BallExampleConfig) -> Result<BallReport> {
    if !(cfg.tol > 0.0) {
        return Err(Error::NonPositiveEpsilon { value: cfg.tol });
    }
    let k0 = ball_tetrahedron();
    let l0 = ball_triangle();
    let target = if cfg.t2 == 0 {
        l0
    } else {
        l0.barycentric_subdivide(cfg.t2)?.complex
    };
    let source0 = if cfg.t1 == 0 {
        k0
    } else {
        k0.barycentric_subdivide(cfg.t1)?.complex
    };

    let g = BallProjectionMap::new()?;
    let preference: Option<&[usize]> = if cfg.t1 == 0 && cfg.t2 == 0 {
        Some(&REFERENCE_ASSIGNMENT)
    } else {
        None
    };
    let max_extra = MAX_AUTO_T.saturating_sub(cfg.t1);
    let built = build_vertex_map_with_preference(
        &source0,
        &target,
        &g,
        max_extra,
        STAR_RESOLUTION,
        preference,
    )?;
    let source = built.source;
    let map = built.map;
    let t1_effective = cfg.t1 + built.t;

    let applicable = cfg.t1 == 0 && cfg.t2 == 0 && built.t == 0;
    let reference = ReferenceComparison {
        applicable,
        matches: applicable && map.assignment() == REFERENCE_ASSIGNMENT,
    };

    let network = synthesize_network(&source, &target, &map)?;
    let network_fn = NetworkFn::new(&network);

    let map_fn = SimplicialMapFn::new(&source, &target, &map)?;
    let exact = estimate_sup_distance(&map_fn, &network_fn, &source, cfg.samples, cfg.seed)?;
    let exact_realization = ExactRealizationCheck {
        max_error: exact.estimate,
        points: exact.points_evaluated,
        pass: exact.estimate <= 1e-9,
    };

    let sup = estimate_sup_distance(&g, &network_fn, &source, cfg.samples, cfg.seed)?;
    let star_condition =
        check_star_condition(&source, &target, &map, &g, STAR_RESOLUTION)?;

    let figure = complexity(
        1,
        3,
        t1_effective as u64,
        1,
        2,
        cfg.t2 as u64,
    )?;

    let mut modulus = Vec::with_capacity(cfg.deltas.len());
    for &delta in &cfg.deltas {
        let of_g = estimate_modulus(&g, &source, delta, cfg.samples, cfg.seed)?;
        let of_net = estimate_modulus(&network_fn, &source, delta, cfg.samples, cfg.seed)?;
        modulus.push(ModulusEstimate {
            delta,
            function_estimate: of_g,
            network_estimate: of_net,
        });
    }
    let mesh_target = target.mesh();
    let modulus_precondition_met = modulus
        .first()
        .is_some_and(|m| mesh_target <= m.function_estimate / 2.0);

    let approximation = ApproximationReport {
        samples: cfg.samples,
        sup_error_estimate: sup.estimate,
        argmax_point: sup.argmax_point,
        mesh_target,
        star_condition_pass: star_condition.pass,
        complexity: figure,
        modulus,
    };

    Ok(BallReport {
        config: cfg.clone(),
        t1_requested: cfg.t1,
        t1_effective,
        t2: cfg.t2,
        assignment: map.assignment().to_vec(),
        reference,
        network,
        exact_realization,
        mesh_source: source.mesh(),
        star_condition,
        approximation,
        modulus_precondition_met,
    })
}
