//! Vertex maps, simplicial-map evaluation, the sampled star condition, and
//! the search that turns a sampled continuous function into a vertex map.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::complex::{ComplexId, SimplexRef, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::{SolveCache, DEFAULT_TOL};
use crate::linalg;
use crate::sampling;

/// A sampled continuous function between underlying spaces of complexes.
///
/// Implementations must return finite vectors of `output_dim` components for
/// every point of the declared domain; the callers verify both and surface
/// violations as [`Error::SamplerFailure`].
pub trait FunctionSampler {
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn output_dim(&self) -> usize;
}

/// Adapter turning a closure into a [`FunctionSampler`].
pub struct SamplerFn<F> {
    f: F,
    output_dim: usize,
}

impl<F: Fn(&[f64]) -> Vec<f64>> SamplerFn<F> {
    pub fn new(output_dim: usize, f: F) -> Self {
        SamplerFn { f, output_dim }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64>> FunctionSampler for SamplerFn<F> {
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok((self.f)(x))
    }

    fn output_dim(&self) -> usize {
        self.output_dim
    }
}

pub(crate) fn eval_checked(g: &dyn FunctionSampler, x: &[f64]) -> Result<Vec<f64>> {
    let y = g.eval(x)?;
    if y.len() != g.output_dim() {
        return Err(Error::sampler(format!(
            "sampler returned {} components, declared {}",
            y.len(),
            g.output_dim()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::sampler("sampler returned a non-finite value"));
    }
    Ok(y)
}

/// A total assignment of source vertices to target vertices satisfying the
/// simplex condition: the image vertex set of every maximal source simplex
/// spans a simplex of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    source: ComplexId,
    target: ComplexId,
    assignment: Vec<usize>,
}

impl VertexMap {
    /// Validates the assignment against both complexes and stamps it with
    /// their content ids.
    pub fn new(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        validate_vertex_map(source, target, &assignment)?;
        Ok(VertexMap {
            source: source.id(),
            target: target.id(),
            assignment,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn image_of(&self, vertex: usize) -> usize {
        self.assignment[vertex]
    }

    pub fn source_id(&self) -> ComplexId {
        self.source
    }

    pub fn target_id(&self) -> ComplexId {
        self.target
    }

    pub(crate) fn check_binding(
        &self,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
    ) -> Result<()> {
        if self.source != source.id() || self.target != target.id() {
            return Err(Error::invariant(
                "vertex map was built for different complexes",
            ));
        }
        Ok(())
    }
}

/// Checks totality, index ranges, and the simplex condition.
pub fn validate_vertex_map(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    assignment: &[usize],
) -> Result<()> {
    if assignment.len() != source.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: source.vertex_count(),
            found: assignment.len(),
        });
    }
    for &w in assignment {
        if w >= target.vertex_count() {
            return Err(Error::IndexOutOfRange {
                index: w,
                len: target.vertex_count(),
            });
        }
    }
    for simplex in source.maximal_simplices() {
        let image: BTreeSet<usize> = simplex.iter().map(|&v| assignment[v]).collect();
        let spans = target
            .maximal_simplices()
            .iter()
            .any(|m| image.iter().all(|w| m.contains(w)));
        if !spans {
            return Err(Error::NotASimplexImage {
                simplex: simplex.clone(),
            });
        }
    }
    Ok(())
}

/// The simplicial map induced by a vertex map, with the solve caches needed
/// to evaluate it repeatedly. Implements [`FunctionSampler`] over `|K|`.
pub struct SimplicialMapFn<'a> {
    source: &'a SimplicialComplex,
    target: &'a SimplicialComplex,
    map: &'a VertexMap,
    cache: SolveCache,
    tol: f64,
}

impl<'a> SimplicialMapFn<'a> {
    pub fn new(
        source: &'a SimplicialComplex,
        target: &'a SimplicialComplex,
        map: &'a VertexMap,
    ) -> Result<Self> {
        map.check_binding(source, target)?;
        Ok(SimplicialMapFn {
            source,
            target,
            map,
            cache: SolveCache::for_complex(source)?,
            tol: DEFAULT_TOL,
        })
    }

    /// phi_c(x) = sum_j lambda_j * phi(v_j) through any containing simplex;
    /// agreement across all containing simplices is checked on every call.
    pub fn eval_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        let location = self.cache.locate(x, self.tol);
        if location.hits.is_empty() {
            return Err(Error::OutsideDomain);
        }
        let mut result: Option<Vec<f64>> = None;
        for hit in &location.hits {
            let simplex = &self.source.maximal_simplices()[hit.simplex];
            let mut image = vec![0.0; self.target.ambient_dim()];
            for (lambda, &v) in hit.coords.iter().zip(simplex) {
                let w = self.map.image_of(v);
                for (d, &c) in self.target.vertex(w).iter().enumerate() {
                    image[d] += lambda * c;
                }
            }
            match &result {
                None => result = Some(image),
                Some(prev) => {
                    let scale = 1.0 + linalg::norm(prev);
                    if linalg::dist(prev, &image) > 1e-9 * scale {
                        return Err(Error::invariant(
                            "simplicial map value differs across containing simplices",
                        ));
                    }
                }
            }
        }
        Ok(result.expect("at least one hit"))
    }
}

impl FunctionSampler for SimplicialMapFn<'_> {
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.eval_point(x)
    }

    fn output_dim(&self) -> usize {
        self.target.ambient_dim()
    }
}

/// One-off evaluation of the simplicial map at `x`.
pub fn evaluate_simplicial_map(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    map: &VertexMap,
    x: &[f64],
) -> Result<Vec<f64>> {
    SimplicialMapFn::new(source, target, map)?.eval_point(x)
}

/// Outcome of the sampled star-condition check for one source vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexStarCheck {
    pub vertex: usize,
    /// Target vertex the condition was checked against (`None` when the
    /// search found no candidate at all).
    pub chosen: Option<usize>,
    pub samples_tested: usize,
    pub violated: bool,
}

/// Aggregated sampled star-condition report.
///
/// The check is a sampled necessary condition: it evaluates `g` on a
/// barycentric grid of the given resolution over every maximal simplex of
/// each vertex star and tests membership of the images in the star of the
/// chosen target vertex. Passing at finite resolution does not prove the
/// exact inclusion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarConditionReport {
    pub resolution: usize,
    pub pass: bool,
    pub vertices: Vec<VertexStarCheck>,
}

struct StarSampler<'a> {
    source: &'a SimplicialComplex,
    target: &'a SimplicialComplex,
    target_cache: SolveCache,
    grid: Vec<Vec<f64>>,
    tol: f64,
}

impl<'a> StarSampler<'a> {
    fn new(
        source: &'a SimplicialComplex,
        target: &'a SimplicialComplex,
        resolution: usize,
    ) -> Result<Self> {
        Ok(StarSampler {
            source,
            target,
            target_cache: SolveCache::for_complex(target)?,
            grid: sampling::grid_lambdas(resolution.max(1), source.dim() + 1),
            tol: DEFAULT_TOL,
        })
    }

    /// For every grid sample of `|st(v)|`, the set of target vertices whose
    /// star contains the image; the candidate set for `v` is the running
    /// intersection. `None` marks a sample whose image fell outside `|L|`.
    fn candidates_for(
        &self,
        g: &dyn FunctionSampler,
        vertex: usize,
    ) -> Result<(Option<BTreeSet<usize>>, usize)> {
        let vertex_ref = SimplexRef::new(vec![vertex]).expect("single index");
        let cofaces = self.source.maximal_cofaces(&vertex_ref);
        let mut candidates: Option<BTreeSet<usize>> = None;
        let mut tested = 0;
        for &ci in &cofaces {
            for lambda in &self.grid {
                let x = sampling::point_at(self.source, ci, lambda);
                let y = eval_checked(g, &x)?;
                tested += 1;
                let location = self.target_cache.locate(&y, self.tol);
                let mut reachable: BTreeSet<usize> = BTreeSet::new();
                for hit in &location.hits {
                    reachable.extend(
                        self.target.maximal_simplices()[hit.simplex].iter().copied(),
                    );
                }
                candidates = Some(match candidates {
                    None => reachable,
                    Some(prev) => prev.intersection(&reachable).copied().collect(),
                });
                if candidates.as_ref().is_some_and(|c| c.is_empty()) {
                    // The intersection cannot recover; stop sampling.
                    return Ok((candidates, tested));
                }
            }
        }
        Ok((candidates, tested))
    }
}

/// Sampled check that `g(|st(v)|) ⊆ |st(phi(v))|` for every source vertex.
pub fn check_star_condition(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    map: &VertexMap,
    g: &dyn FunctionSampler,
    resolution: usize,
) -> Result<StarConditionReport> {
    map.check_binding(source, target)?;
    let sampler = StarSampler::new(source, target, resolution)?;
    let mut vertices = Vec::with_capacity(source.vertex_count());
    let mut pass = true;
    for v in 0..source.vertex_count() {
        let (candidates, samples_tested) = sampler.candidates_for(g, v)?;
        let chosen = map.image_of(v);
        let violated = match &candidates {
            // A vertex in no maximal simplex has an empty star; nothing to violate.
            None => false,
            Some(set) => !set.contains(&chosen),
        };
        pass &= !violated;
        vertices.push(VertexStarCheck {
            vertex: v,
            chosen: Some(chosen),
            samples_tested,
            violated,
        });
    }
    Ok(StarConditionReport {
        resolution,
        pass,
        vertices,
    })
}

/// Result of the vertex-map search: the subdivision count that satisfied
/// the sampled star condition, the subdivided source complex, and the map.
#[derive(Debug, Clone)]
pub struct BuiltVertexMap {
    pub t: usize,
    pub source: SimplicialComplex,
    pub map: VertexMap,
}

/// Searches for a vertex map inducing a simplicial approximation of `g`.
///
/// For t = 0, 1, ..., `max_t`: subdivide the source, and for each of its
/// vertices pick the smallest-index target vertex whose star contains every
/// sampled image of the vertex's star. Fails with
/// [`Error::StarConditionUnsatisfied`] when `max_t` is exhausted, or
/// [`Error::NotASimplexImage`] when the sampled condition passed but the
/// simplex condition does not (resolution too coarse).
pub fn build_vertex_map(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    g: &dyn FunctionSampler,
    max_t: usize,
    resolution: usize,
) -> Result<BuiltVertexMap> {
    build_vertex_map_with_preference(source, target, g, max_t, resolution, None)
}

/// [`build_vertex_map`] with a reference assignment used as a tie-break: when
/// several target vertices are valid for a source vertex, the reference's
/// choice wins if it is among them (smallest index otherwise). The reference
/// applies only while the source still has its original vertex count; it
/// never bypasses the sampled star check.
pub fn build_vertex_map_with_preference(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    g: &dyn FunctionSampler,
    max_t: usize,
    resolution: usize,
    preference: Option<&[usize]>,
) -> Result<BuiltVertexMap> {
    let mut current = source.clone();
    for t in 0..=max_t {
        let sampler = StarSampler::new(&current, target, resolution)?;
        let preference_applies =
            preference.is_some_and(|p| p.len() == current.vertex_count());
        let mut assignment = Vec::with_capacity(current.vertex_count());
        let mut all_satisfied = true;
        for v in 0..current.vertex_count() {
            let (candidates, _) = sampler.candidates_for(g, v)?;
            let choice = match candidates {
                // Empty star: unconstrained, keep the smallest target index.
                None => Some(0),
                Some(set) => {
                    if set.is_empty() {
                        None
                    } else if preference_applies {
                        let wanted = preference.expect("checked above")[v];
                        if set.contains(&wanted) {
                            Some(wanted)
                        } else {
                            set.iter().next().copied()
                        }
                    } else {
                        set.iter().next().copied()
                    }
                }
            };
            match choice {
                Some(w) => assignment.push(w),
                None => {
                    all_satisfied = false;
                    break;
                }
            }
        }
        if all_satisfied {
            let map = VertexMap::new(&current, target, assignment)?;
            return Ok(BuiltVertexMap {
                t,
                source: current,
                map,
            });
        }
        if t < max_t {
            current = current.barycentric_subdivide(1)?.complex;
        }
    }
    Err(Error::StarConditionUnsatisfied { max_t })
}

/// On-disk form of a vertex map: paths of the complexes it connects plus the
/// assignment, position = source vertex index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexMapFile {
    pub source: String,
    pub target: String,
    pub assignment: Vec<usize>,
}

impl VertexMapFile {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source,
            "target": self.target,
            "assignment": self.assignment,
        })
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(value.clone())
            .map_err(|e| Error::format(format!("vertex map file: {e}")))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        crate::jsonio::write_file(path, &self.to_json_value())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json_value(&crate::jsonio::read_file(path)?)
    }
}
