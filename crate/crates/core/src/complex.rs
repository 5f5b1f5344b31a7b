//! Finite pure simplicial complexes: validated construction, face and star
//! enumeration, mesh, and iterated barycentric subdivision.
//!
//! A complex stores vertex coordinates plus the index lists of its maximal
//! simplices; every lower-dimensional simplex is implied as a face. All
//! values are immutable after construction and every operation is pure.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Relative tolerance used by the build-time validity checks.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Content-derived identifier of a complex. Stable across runs and
/// processes: it hashes the exact bit patterns of the vertex coordinates
/// together with the maximal-simplex index lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexId(pub u64);

/// A sorted vertex-index list identifying a face of some maximal simplex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimplexRef {
    indices: Vec<usize>,
}

impl SimplexRef {
    /// Builds a reference from indices in any order; duplicates are rejected.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotASimplex { indices });
        }
        Ok(SimplexRef { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Simplex dimension (vertex count minus one).
    pub fn dim(&self) -> usize {
        self.indices.len() - 1
    }

    /// Face relation: every index of `self` appears in `other`.
    pub fn is_face_of(&self, other: &SimplexRef) -> bool {
        is_subset(&self.indices, other.indices())
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    // Both sides are sorted.
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

/// A finite pure simplicial complex embedded in Euclidean space.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    ambient_dim: usize,
    vertices: Vec<Vec<f64>>,
    maximal_simplices: Vec<Vec<usize>>,
    dim: usize,
}

/// Output of [`SimplicialComplex::barycentric_subdivide`].
///
/// `vertex_provenance[i]` is the simplex (of the complex the *last* single
/// subdivision step was applied to, i.e. Sd^{t-1} of the source) whose
/// barycenter became vertex `i`. For `t == 1` that complex is the source
/// itself. Barycenter identity is combinatorial: shared faces of adjacent
/// maximal simplices produce one shared vertex regardless of coordinates.
#[derive(Debug, Clone)]
pub struct SubdivisionRecord {
    pub source: ComplexId,
    pub t: usize,
    pub complex: SimplicialComplex,
    pub vertex_provenance: Vec<SimplexRef>,
}

impl SimplicialComplex {
    /// Builds and fully validates a complex.
    ///
    /// Checks, in order: non-empty finite input, purity (all maximal lists of
    /// one length), index ranges, no duplicate maximal simplices, affine
    /// independence of every maximal simplex, and the pairwise intersection
    /// property (two hulls meet in the hull of their shared vertices or not
    /// at all). Maximal simplices are stored with sorted indices in sorted
    /// order, so equal inputs produce identical complexes.
    pub fn new(
        ambient_dim: usize,
        vertices: Vec<Vec<f64>>,
        maximal_simplices: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if ambient_dim == 0 || vertices.is_empty() || maximal_simplices.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (vi, v) in vertices.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            for (ci, &x) in v.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFiniteCoordinate {
                        vertex: vi,
                        component: ci,
                    });
                }
            }
        }

        let expected_len = maximal_simplices[0].len();
        if expected_len == 0 {
            return Err(Error::EmptyInput);
        }
        let mut canonical: Vec<Vec<usize>> = Vec::with_capacity(maximal_simplices.len());
        for mut simplex in maximal_simplices {
            if simplex.len() != expected_len {
                return Err(Error::NonPure {
                    expected: expected_len,
                    found: simplex.len(),
                });
            }
            simplex.sort_unstable();
            for &i in &simplex {
                if i >= vertices.len() {
                    return Err(Error::IndexOutOfRange {
                        index: i,
                        len: vertices.len(),
                    });
                }
            }
            if simplex.windows(2).any(|w| w[0] == w[1]) {
                // Repeated vertices make the hull degenerate.
                return Err(Error::AffinelyDependent { simplex });
            }
            canonical.push(simplex);
        }
        canonical.sort();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMaximalSimplex {
                simplex: w[0].clone(),
            });
        }

        let dim = expected_len - 1;
        if dim > ambient_dim {
            return Err(Error::AffinelyDependent {
                simplex: canonical[0].clone(),
            });
        }
        // Face enumeration is exponential in the simplex size; past this
        // point it would not fit in memory anyway.
        if expected_len > 24 {
            return Err(Error::invariant(
                "maximal simplices with more than 24 vertices are unsupported",
            ));
        }

        let complex = SimplicialComplex {
            ambient_dim,
            vertices,
            maximal_simplices: canonical,
            dim,
        };
        complex.check_affine_independence()?;
        complex.check_intersections()?;
        Ok(complex)
    }

    /// Constructor for internally produced complexes (subdivisions) that are
    /// valid by construction; skips the quadratic intersection check.
    pub(crate) fn from_parts_unchecked(
        ambient_dim: usize,
        vertices: Vec<Vec<f64>>,
        mut maximal_simplices: Vec<Vec<usize>>,
        dim: usize,
    ) -> Self {
        for s in maximal_simplices.iter_mut() {
            s.sort_unstable();
        }
        maximal_simplices.sort();
        SimplicialComplex {
            ambient_dim,
            vertices,
            maximal_simplices,
            dim,
        }
    }

    fn check_affine_independence(&self) -> Result<()> {
        for simplex in &self.maximal_simplices {
            if !self.simplex_is_affinely_independent(simplex) {
                return Err(Error::AffinelyDependent {
                    simplex: simplex.clone(),
                });
            }
        }
        Ok(())
    }

    fn simplex_is_affinely_independent(&self, simplex: &[usize]) -> bool {
        if simplex.len() == 1 {
            return true;
        }
        let base = &self.vertices[simplex[0]];
        let diffs: Vec<Vec<f64>> = simplex[1..]
            .iter()
            .map(|&i| linalg::sub(&self.vertices[i], base))
            .collect();
        linalg::rank(&diffs, VALIDATION_TOL) == simplex.len() - 1
    }

    /// Pairwise intersection property via a small LP: maximize the
    /// barycentric mass a common point can place off the shared vertex set.
    /// Anything above tolerance means the hulls overlap off a shared face.
    fn check_intersections(&self) -> Result<()> {
        let boxes: Vec<(Vec<f64>, Vec<f64>)> = self
            .maximal_simplices
            .iter()
            .map(|s| self.bounding_box(s))
            .collect();
        for a in 0..self.maximal_simplices.len() {
            for b in a + 1..self.maximal_simplices.len() {
                if !boxes_overlap(&boxes[a], &boxes[b]) {
                    continue;
                }
                let sa = &self.maximal_simplices[a];
                let sb = &self.maximal_simplices[b];
                if let Some(mass) = self.off_shared_mass(sa, sb) {
                    if mass > VALIDATION_TOL {
                        return Err(Error::BadIntersection {
                            a: sa.clone(),
                            b: sb.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn bounding_box(&self, simplex: &[usize]) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.vertices[simplex[0]].clone();
        let mut hi = lo.clone();
        for &i in &simplex[1..] {
            for (d, &x) in self.vertices[i].iter().enumerate() {
                lo[d] = lo[d].min(x);
                hi[d] = hi[d].max(x);
            }
        }
        (lo, hi)
    }

    /// Maximal barycentric mass off the shared vertices over all common
    /// points of the two hulls; `None` when the hulls are disjoint.
    fn off_shared_mass(&self, sa: &[usize], sb: &[usize]) -> Option<f64> {
        let shared: BTreeSet<usize> = sa
            .iter()
            .copied()
            .filter(|i| sb.contains(i))
            .collect();
        let na = sa.len();
        let nb = sb.len();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(self.ambient_dim + 2);
        for d in 0..self.ambient_dim {
            let mut row = Vec::with_capacity(na + nb);
            row.extend(sa.iter().map(|&i| self.vertices[i][d]));
            row.extend(sb.iter().map(|&i| -self.vertices[i][d]));
            rows.push(row);
        }
        let mut sum_a = vec![0.0; na + nb];
        sum_a[..na].fill(1.0);
        let mut sum_b = vec![0.0; na + nb];
        sum_b[na..].fill(1.0);
        rows.push(sum_a);
        rows.push(sum_b);
        let mut b = vec![0.0; self.ambient_dim];
        b.extend([1.0, 1.0]);

        let mut objective = vec![0.0; na + nb];
        for (pos, &i) in sa.iter().enumerate() {
            if !shared.contains(&i) {
                objective[pos] = 1.0;
            }
        }
        for (pos, &i) in sb.iter().enumerate() {
            if !shared.contains(&i) {
                objective[na + pos] = 1.0;
            }
        }
        linalg::lp_maximize(&rows, &b, &objective)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn maximal_simplices(&self) -> &[Vec<usize>] {
        &self.maximal_simplices
    }

    pub fn maximal_count(&self) -> usize {
        self.maximal_simplices.len()
    }

    /// Content hash; equal complexes (same coordinates bit-for-bit, same
    /// maximal simplices) share an id.
    pub fn id(&self) -> ComplexId {
        // FNV-1a over a canonical byte stream.
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &byte in bytes {
                h ^= u64::from(byte);
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(&(self.ambient_dim as u64).to_le_bytes());
        eat(&(self.vertices.len() as u64).to_le_bytes());
        for v in &self.vertices {
            for &x in v {
                eat(&x.to_bits().to_le_bytes());
            }
        }
        eat(&(self.maximal_simplices.len() as u64).to_le_bytes());
        for s in &self.maximal_simplices {
            for &i in s {
                eat(&(i as u64).to_le_bytes());
            }
        }
        ComplexId(h)
    }

    /// All distinct simplices (faces of every dimension), sorted by
    /// dimension then lexicographically — the canonical face order.
    pub fn faces(&self) -> Vec<SimplexRef> {
        let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for simplex in &self.maximal_simplices {
            let n = simplex.len();
            for mask in 1u32..(1 << n) {
                let subset: Vec<usize> = (0..n)
                    .filter(|&b| mask & (1 << b) != 0)
                    .map(|b| simplex[b])
                    .collect();
                seen.insert((subset.len(), subset));
            }
        }
        seen.into_iter()
            .map(|(_, indices)| SimplexRef { indices })
            .collect()
    }

    /// Whether `sigma` is a simplex of this complex (a face of some maximal
    /// simplex).
    pub fn contains_simplex(&self, sigma: &SimplexRef) -> bool {
        self.maximal_simplices
            .iter()
            .any(|m| is_subset(sigma.indices(), m))
    }

    /// Positions (into `maximal_simplices`) of the maximal simplices having
    /// `sigma` as a face.
    pub fn maximal_cofaces(&self, sigma: &SimplexRef) -> Vec<usize> {
        self.maximal_simplices
            .iter()
            .enumerate()
            .filter(|(_, m)| is_subset(sigma.indices(), m))
            .map(|(i, _)| i)
            .collect()
    }

    /// The star of `sigma`: every simplex sharing a coface with it, in
    /// canonical order. The union of the maximal cofaces is `|st(sigma)|`.
    pub fn star(&self, sigma: &SimplexRef) -> Result<Vec<SimplexRef>> {
        let cofaces = self.maximal_cofaces(sigma);
        if cofaces.is_empty() {
            return Err(Error::NotASimplex {
                indices: sigma.indices().to_vec(),
            });
        }
        let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for &ci in &cofaces {
            let simplex = &self.maximal_simplices[ci];
            let n = simplex.len();
            for mask in 1u32..(1 << n) {
                let subset: Vec<usize> = (0..n)
                    .filter(|&b| mask & (1 << b) != 0)
                    .map(|b| simplex[b])
                    .collect();
                seen.insert((subset.len(), subset));
            }
        }
        Ok(seen
            .into_iter()
            .map(|(_, indices)| SimplexRef { indices })
            .collect())
    }

    /// Largest pairwise vertex distance within `simplex`.
    pub fn simplex_diameter(&self, simplex: &[usize]) -> f64 {
        let mut best = 0.0_f64;
        for (pos, &i) in simplex.iter().enumerate() {
            for &j in &simplex[pos + 1..] {
                best = best.max(linalg::dist(&self.vertices[i], &self.vertices[j]));
            }
        }
        best
    }

    /// Mesh of the complex: the largest simplex diameter. Faces never exceed
    /// their parents, so scanning maximal simplices suffices.
    pub fn mesh(&self) -> f64 {
        self.maximal_simplices
            .iter()
            .map(|s| self.simplex_diameter(s))
            .fold(0.0, f64::max)
    }

    /// Smallest `t` with `mesh(Sd^t K) <= epsilon` guaranteed by the
    /// per-step contraction ratio `n/(n+1)`; returns 0 when the mesh already
    /// satisfies the bound. Evaluates the analytic bound instead of
    /// subdividing, so it stays cheap for any target mesh.
    pub fn subdivision_count_for_mesh(&self, epsilon: f64) -> Result<usize> {
        if !(epsilon > 0.0) {
            return Err(Error::NonPositiveEpsilon { value: epsilon });
        }
        let mesh = self.mesh();
        if mesh <= epsilon || self.dim == 0 {
            return Ok(0);
        }
        let n = self.dim as f64;
        let raw = (mesh.ln() - epsilon.ln()) / ((n + 1.0).ln() - n.ln());
        // Guard the ceiling against values that are integers up to rounding.
        let t = if (raw - raw.round()).abs() < 1e-9 {
            raw.round()
        } else {
            raw.ceil()
        };
        Ok(t.max(0.0) as usize)
    }

    /// Iterated barycentric subdivision (`t >= 1`) by flag enumeration.
    ///
    /// New vertices are the barycenters of the simplices of the previous
    /// level, identified by their index sets; new maximal simplices are the
    /// chains of strictly nested faces inside each maximal simplex. The
    /// underlying point set is unchanged.
    pub fn barycentric_subdivide(&self, t: usize) -> Result<SubdivisionRecord> {
        if t == 0 {
            return Err(Error::ZeroSubdivisions);
        }
        let source = self.id();
        let mut current = self.clone();
        let mut provenance = Vec::new();
        for _ in 0..t {
            let (next, prov) = current.subdivide_once();
            current = next;
            provenance = prov;
        }
        Ok(SubdivisionRecord {
            source,
            t,
            complex: current,
            vertex_provenance: provenance,
        })
    }

    fn subdivide_once(&self) -> (SimplicialComplex, Vec<SimplexRef>) {
        let faces = self.faces();
        let mut face_vertex: BTreeMap<&[usize], usize> = BTreeMap::new();
        let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(faces.len());
        for (new_index, face) in faces.iter().enumerate() {
            face_vertex.insert(face.indices(), new_index);
            vertices.push(self.barycenter(face.indices()));
        }

        let per_maximal = factorial(self.dim + 1);
        let mut maximal: Vec<Vec<usize>> =
            Vec::with_capacity(self.maximal_simplices.len() * per_maximal);
        for simplex in &self.maximal_simplices {
            let mut order = simplex.clone();
            permutations(&mut order, 0, &mut |perm| {
                let mut chain_vertex_ids = Vec::with_capacity(perm.len());
                let mut prefix: Vec<usize> = Vec::with_capacity(perm.len());
                for &v in perm {
                    prefix.push(v);
                    prefix.sort_unstable();
                    chain_vertex_ids.push(face_vertex[prefix.as_slice()]);
                }
                maximal.push(chain_vertex_ids);
            });
        }

        let complex =
            SimplicialComplex::from_parts_unchecked(self.ambient_dim, vertices, maximal, self.dim);
        (complex, faces)
    }

    fn barycenter(&self, indices: &[usize]) -> Vec<f64> {
        let mut c = vec![0.0; self.ambient_dim];
        for &i in indices {
            for (d, &x) in self.vertices[i].iter().enumerate() {
                c[d] += x;
            }
        }
        let inv = 1.0 / indices.len() as f64;
        for v in c.iter_mut() {
            *v *= inv;
        }
        c
    }
}

impl SimplicialComplex {
    /// JSON form: `{"ambient_dim": n, "vertices": [[x,...],...],
    /// "maximal_simplices": [[i,...],...]}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "ambient_dim": self.ambient_dim,
            "vertices": self.vertices,
            "maximal_simplices": self.maximal_simplices,
        })
    }

    /// Parses and fully validates a complex from its JSON form.
    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            ambient_dim: usize,
            vertices: Vec<Vec<f64>>,
            maximal_simplices: Vec<Vec<usize>>,
        }
        let raw: Raw = serde_json::from_value(value.clone())
            .map_err(|e| Error::format(format!("complex file: {e}")))?;
        SimplicialComplex::new(raw.ambient_dim, raw.vertices, raw.maximal_simplices)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        crate::jsonio::write_file(path, &self.to_json_value())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json_value(&crate::jsonio::read_file(path)?)
    }
}

fn boxes_overlap(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>)) -> bool {
    a.0.iter()
        .zip(&a.1)
        .zip(b.0.iter().zip(&b.1))
        .all(|((alo, ahi), (blo, bhi))| alo - VALIDATION_TOL <= *bhi && *blo - VALIDATION_TOL <= *ahi)
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn permutations(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}
