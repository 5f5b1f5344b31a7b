//! Barycentric-coordinate computation, affine-independence testing, and
//! point location in a complex.
//!
//! Coordinates come from small homogeneous linear solves: for a maximal
//! simplex with vertices v_0..v_n in ℝⁿ the matrix whose columns are the
//! vertices with a 1-row appended is inverted once and cached; lambda(x) is
//! then an affine function of x. Complexes embedded below the ambient
//! dimension are handled by least squares on the affine hull.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg;

/// Default membership tolerance: a point belongs to a simplex when all its
/// barycentric coordinates are at least `-DEFAULT_TOL`.
pub const DEFAULT_TOL: f64 = 1e-9;

const MAX_CONDITION: f64 = 1e12;

/// A point's containing maximal simplices and its coordinates in each.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricLocation {
    pub point: Vec<f64>,
    pub hits: Vec<LocatedSimplex>,
}

/// One containing maximal simplex: its position in the complex's maximal
/// list and the barycentric coordinates of the located point in it.
#[derive(Debug, Clone, PartialEq)]
pub struct LocatedSimplex {
    pub simplex: usize,
    pub coords: Vec<f64>,
}

impl BarycentricLocation {
    pub fn is_inside(&self) -> bool {
        !self.hits.is_empty()
    }
}

/// True iff the points are affinely independent: the difference vectors from
/// the first point have full rank, tested at tolerance 1e-9 relative to the
/// largest entry.
pub fn is_affinely_independent(points: &[Vec<f64>]) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ambient_dim = points[0].len();
    if points.len() > ambient_dim + 1 {
        return Err(Error::TooManyPoints {
            count: points.len(),
            ambient_dim,
        });
    }
    if points.len() == 1 {
        return Ok(true);
    }
    let diffs: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| linalg::sub(p, &points[0]))
        .collect();
    Ok(linalg::rank(&diffs, DEFAULT_TOL) == points.len() - 1)
}

enum SimplexSolver {
    /// dim == ambient_dim: the inverse of the homogeneous vertex matrix.
    /// coords(x) = inverse · (x, 1).
    Full { inverse: Vec<Vec<f64>> },
    /// dim < ambient_dim: least squares on the affine hull.
    /// mu = pinv · (x - base); lambda = (1 - sum mu, mu); the residual of
    /// the hull projection is reported alongside the coordinates.
    Affine {
        base: Vec<f64>,
        diffs: Vec<Vec<f64>>,
        pinv: Vec<Vec<f64>>,
    },
}

impl SimplexSolver {
    fn build(vertices: &[&[f64]]) -> Result<Self> {
        let ambient_dim = vertices[0].len();
        let dim = vertices.len() - 1;
        if dim == ambient_dim {
            // Columns are the vertices, plus a homogeneous 1-row.
            let mut m = vec![vec![0.0; dim + 1]; dim + 1];
            for (col, v) in vertices.iter().enumerate() {
                for (row, &x) in v.iter().enumerate() {
                    m[row][col] = x;
                }
                m[dim][col] = 1.0;
            }
            let inverse = linalg::invert(&m, MAX_CONDITION)?;
            Ok(SimplexSolver::Full { inverse })
        } else {
            let base = vertices[0].to_vec();
            // diffs holds the difference vectors as columns (ambient x dim).
            let diffs: Vec<Vec<f64>> = vertices[1..]
                .iter()
                .map(|v| linalg::sub(v, &base))
                .collect();
            // Normal equations: gram = D^T D (dim x dim).
            let mut gram = vec![vec![0.0; dim]; dim];
            for i in 0..dim {
                for j in 0..dim {
                    gram[i][j] = linalg::dot(&diffs[i], &diffs[j]);
                }
            }
            let gram_inv = linalg::invert(&gram, MAX_CONDITION)?;
            // pinv = gram_inv · D^T (dim x ambient).
            let mut pinv = vec![vec![0.0; ambient_dim]; dim];
            for i in 0..dim {
                for d in 0..ambient_dim {
                    pinv[i][d] = (0..dim).map(|j| gram_inv[i][j] * diffs[j][d]).sum();
                }
            }
            Ok(SimplexSolver::Affine { base, diffs, pinv })
        }
    }

    /// Barycentric coordinates plus the distance from `x` to the simplex's
    /// affine hull (zero in the full-dimensional case).
    fn coords(&self, x: &[f64]) -> (Vec<f64>, f64) {
        match self {
            SimplexSolver::Full { inverse } => {
                let mut hx = x.to_vec();
                hx.push(1.0);
                (linalg::matvec(inverse, &hx), 0.0)
            }
            SimplexSolver::Affine { base, diffs, pinv } => {
                let rel = linalg::sub(x, base);
                let mu = linalg::matvec(pinv, &rel);
                let mut recon = vec![0.0; rel.len()];
                for (j, m) in mu.iter().enumerate() {
                    for (d, v) in diffs[j].iter().enumerate() {
                        recon[d] += m * v;
                    }
                }
                let residual = linalg::dist(&recon, &rel);
                let mut lambda = Vec::with_capacity(mu.len() + 1);
                lambda.push(1.0 - mu.iter().sum::<f64>());
                lambda.extend(mu);
                (lambda, residual)
            }
        }
    }

    fn verify_inverse(&self, vertices: &[&[f64]], tol: f64) -> bool {
        match self {
            SimplexSolver::Full { inverse } => {
                let n = inverse.len();
                let mut worst = 0.0_f64;
                for r in 0..n {
                    for c in 0..n {
                        // (inverse · M)[r][c]; M columns are homogeneous vertices.
                        let mut acc = 0.0;
                        for k in 0..n {
                            let m_kc = if k < n - 1 { vertices[c][k] } else { 1.0 };
                            acc += inverse[r][k] * m_kc;
                        }
                        let expect = if r == c { 1.0 } else { 0.0 };
                        worst = worst.max((acc - expect).abs());
                    }
                }
                worst <= tol
            }
            SimplexSolver::Affine { diffs, pinv, .. } => {
                let d = pinv.len();
                let mut worst = 0.0_f64;
                for r in 0..d {
                    for c in 0..d {
                        let acc = linalg::dot(&pinv[r], &diffs[c]);
                        let expect = if r == c { 1.0 } else { 0.0 };
                        worst = worst.max((acc - expect).abs());
                    }
                }
                worst <= tol
            }
        }
    }
}

/// Per-maximal-simplex factorizations for a complex, built once and shared
/// read-only afterwards.
pub struct SolveCache {
    entries: Vec<SimplexSolver>,
}

impl SolveCache {
    pub fn for_complex(k: &SimplicialComplex) -> Result<Self> {
        let entries = k
            .maximal_simplices()
            .iter()
            .map(|simplex| {
                let verts: Vec<&[f64]> = simplex.iter().map(|&i| k.vertex(i)).collect();
                SimplexSolver::build(&verts)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SolveCache { entries })
    }

    /// Coordinates of `x` in maximal simplex `index`, plus the affine-hull
    /// residual (always zero for full-dimensional complexes).
    pub fn coords(&self, index: usize, x: &[f64]) -> (Vec<f64>, f64) {
        self.entries[index].coords(x)
    }

    /// Every maximal simplex containing `x` up to `tol`.
    pub fn locate(&self, x: &[f64], tol: f64) -> BarycentricLocation {
        let hull_scale = 1.0 + linalg::norm(x);
        let mut hits = Vec::new();
        for index in 0..self.entries.len() {
            let (coords, residual) = self.coords(index, x);
            if residual > tol * hull_scale {
                continue;
            }
            if coords.iter().all(|&l| l >= -tol) {
                hits.push(LocatedSimplex {
                    simplex: index,
                    coords,
                });
            }
        }
        BarycentricLocation {
            point: x.to_vec(),
            hits,
        }
    }

    /// Checks `entry × original matrix = identity` for every cached entry.
    pub fn verify(&self, k: &SimplicialComplex, tol: f64) -> Result<()> {
        for (index, entry) in self.entries.iter().enumerate() {
            let simplex = &k.maximal_simplices()[index];
            let verts: Vec<&[f64]> = simplex.iter().map(|&i| k.vertex(i)).collect();
            if !entry.verify_inverse(&verts, tol) {
                return Err(Error::invariant(format!(
                    "solve cache entry {index} does not invert its vertex matrix"
                )));
            }
        }
        Ok(())
    }
}

/// Barycentric coordinates of `x` with respect to an affinely independent
/// vertex set. The result is the unique affine solution; coordinates may be
/// negative when `x` lies outside the hull. When the simplex spans less than
/// the ambient dimension, `x` must lie on its affine hull.
pub fn barycentric_coordinates(simplex_vertices: &[Vec<f64>], x: &[f64]) -> Result<Vec<f64>> {
    if simplex_vertices.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ambient_dim = simplex_vertices[0].len();
    if x.len() != ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: ambient_dim,
            found: x.len(),
        });
    }
    if simplex_vertices.len() > ambient_dim + 1 {
        return Err(Error::TooManyPoints {
            count: simplex_vertices.len(),
            ambient_dim,
        });
    }
    if simplex_vertices.len() == 1 {
        let residual = linalg::dist(&simplex_vertices[0], x);
        if residual > DEFAULT_TOL * (1.0 + linalg::norm(x)) {
            return Err(Error::OffAffineHull { residual });
        }
        return Ok(vec![1.0]);
    }
    let refs: Vec<&[f64]> = simplex_vertices.iter().map(|v| v.as_slice()).collect();
    let solver = SimplexSolver::build(&refs)?;
    let (coords, residual) = solver.coords(x);
    if residual > DEFAULT_TOL * (1.0 + linalg::norm(x)) {
        return Err(Error::OffAffineHull { residual });
    }
    Ok(coords)
}

/// One-off point location; builds a [`SolveCache`] internally. Use the cache
/// directly when locating many points in the same complex.
pub fn locate(k: &SimplicialComplex, x: &[f64], tol: f64) -> Result<BarycentricLocation> {
    if x.len() != k.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: k.ambient_dim(),
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::sampler("locate called with non-finite point"));
    }
    let cache = SolveCache::for_complex(k)?;
    Ok(cache.locate(x, tol))
}
