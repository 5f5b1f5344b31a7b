//! Training-free synthesis of the two-hidden-layer network realizing a
//! simplicial map, and its forward pass.
//!
//! Layer 1 stacks, per maximal source simplex, the inverse of the matrix
//! whose columns are the simplex vertices with a homogeneous 1-row appended:
//! its output is the juxtaposition of the barycentric coordinates of the
//! input with respect to every maximal simplex. Layer 2 is a 0/1 matrix
//! wiring source vertices to the target vertices the vertex map sends them
//! to. Layer 3 stacks the target vertex coordinates and converts barycentric
//! blocks back to Cartesian coordinates.
//!
//! The psi gate keeps only blocks whose coordinates are genuinely
//! barycentric: entries at least `-tol` and, on the target side, total mass
//! 1 up to `tol`. Source blocks that do not contain the input are zeroed and
//! the survivors averaged, so blocks fed by several containing simplices
//! (shared faces) stay normalized. With a single maximal simplex on each
//! side this reduces exactly to the unrestricted composition.

use serde::Deserialize;

use crate::approx::{FunctionSampler, VertexMap};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geometry::{SolveCache, DEFAULT_TOL};
use crate::linalg;

/// The four weight/bias blocks of the synthesized network plus layer
/// metadata. Immutable; evaluation is pure and thread-safe.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesizedNetwork {
    /// Input dimension (dimension of the source complex).
    pub n: usize,
    /// Output dimension (dimension of the target complex).
    pub m: usize,
    /// Maximal-simplex count of the source complex.
    pub k: usize,
    /// Maximal-simplex count of the target complex.
    pub l: usize,
    /// k(n+1) x n, row blocks of homogeneous inverses.
    pub w1: Vec<Vec<f64>>,
    /// k(n+1), the homogeneous inverses' last columns.
    pub b1: Vec<f64>,
    /// l(m+1) x k(n+1), 0/1 vertex-map wiring (bias zero).
    pub w2: Vec<Vec<f64>>,
    /// m x l(m+1), target vertex coordinates per column block (bias zero).
    pub w3: Vec<Vec<f64>>,
    /// Membership tolerance for the psi gate.
    pub tol: f64,
}

/// Intermediate values of one forward evaluation.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub input: Vec<f64>,
    /// First hidden layer: all barycentric blocks, k(n+1) values.
    pub layer1: Vec<f64>,
    /// Which source blocks contain the input (coords >= -tol).
    pub source_mask: Vec<bool>,
    /// Second hidden layer: target barycentric blocks, l(m+1) values.
    pub layer2: Vec<f64>,
    /// psi per target block.
    pub target_mask: Vec<bool>,
    pub output: Vec<f64>,
}

/// Builds the network realizing the simplicial map induced by `map`.
///
/// Both complexes must be full-dimensional (simplex dimension equal to the
/// ambient dimension) so the homogeneous vertex matrices are square.
pub fn synthesize_network(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    map: &VertexMap,
) -> Result<SynthesizedNetwork> {
    map.check_binding(source, target)?;
    if source.dim() != source.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: source.ambient_dim(),
            found: source.dim(),
        });
    }
    if target.dim() != target.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: target.ambient_dim(),
            found: target.dim(),
        });
    }
    let n = source.dim();
    let m = target.dim();
    let k = source.maximal_count();
    let l = target.maximal_count();

    let mut w1 = Vec::with_capacity(k * (n + 1));
    let mut b1 = Vec::with_capacity(k * (n + 1));
    for simplex in source.maximal_simplices() {
        // Columns are vertices, plus the homogeneous 1-row.
        let mut matrix = vec![vec![0.0; n + 1]; n + 1];
        for (col, &vi) in simplex.iter().enumerate() {
            for (row, &x) in source.vertex(vi).iter().enumerate() {
                matrix[row][col] = x;
            }
            matrix[n][col] = 1.0;
        }
        let inverse = linalg::invert(&matrix, 1e12)?;
        for row in inverse {
            w1.push(row[..n].to_vec());
            b1.push(row[n]);
        }
    }

    let mut w2 = vec![vec![0.0; k * (n + 1)]; l * (m + 1)];
    for (i, simplex) in source.maximal_simplices().iter().enumerate() {
        for (t, &vi) in simplex.iter().enumerate() {
            let image = map.image_of(vi);
            for (j, mu) in target.maximal_simplices().iter().enumerate() {
                if let Some(r) = mu.iter().position(|&u| u == image) {
                    w2[j * (m + 1) + r][i * (n + 1) + t] = 1.0;
                }
            }
        }
    }

    let mut w3 = vec![vec![0.0; l * (m + 1)]; m];
    for (j, mu) in target.maximal_simplices().iter().enumerate() {
        for (r, &ui) in mu.iter().enumerate() {
            for (d, &x) in target.vertex(ui).iter().enumerate() {
                w3[d][j * (m + 1) + r] = x;
            }
        }
    }

    Ok(SynthesizedNetwork {
        n,
        m,
        k,
        l,
        w1,
        b1,
        w2,
        w3,
        tol: DEFAULT_TOL,
    })
}

impl SynthesizedNetwork {
    pub fn first_hidden_width(&self) -> usize {
        self.k * (self.n + 1)
    }

    pub fn second_hidden_width(&self) -> usize {
        self.l * (self.m + 1)
    }

    /// Forward pass; fails with [`Error::OutsideDomain`] when no block
    /// contains the input (the output stage would otherwise divide by zero).
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_trace(x)?.output)
    }

    /// Forward pass keeping every intermediate layer.
    pub fn forward_trace(&self, x: &[f64]) -> Result<ForwardTrace> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::sampler("forward called with a non-finite input"));
        }

        // phi_1: all barycentric blocks at once.
        let mut layer1 = linalg::matvec(&self.w1, x);
        for (v, b) in layer1.iter_mut().zip(&self.b1) {
            *v += b;
        }

        let source_mask: Vec<bool> = (0..self.k)
            .map(|i| {
                layer1[i * (self.n + 1)..(i + 1) * (self.n + 1)]
                    .iter()
                    .all(|&v| v >= -self.tol)
            })
            .collect();
        let active = source_mask.iter().filter(|&&a| a).count();
        if active == 0 {
            return Err(Error::OutsideDomain);
        }

        // phi_2 on the gated, averaged blocks. Columns of inactive blocks
        // carry zero, so only active columns contribute.
        let scale = 1.0 / active as f64;
        let mut layer2 = vec![0.0; self.l * (self.m + 1)];
        for i in 0..self.k {
            if !source_mask[i] {
                continue;
            }
            for t in 0..=self.n {
                let col = i * (self.n + 1) + t;
                let v = layer1[col] * scale;
                if v == 0.0 {
                    continue;
                }
                for (row, out) in layer2.iter_mut().enumerate() {
                    let w = self.w2[row][col];
                    if w != 0.0 {
                        *out += w * v;
                    }
                }
            }
        }

        // psi: nonnegative coordinates and full barycentric mass.
        let target_mask: Vec<bool> = (0..self.l)
            .map(|j| {
                let block = &layer2[j * (self.m + 1)..(j + 1) * (self.m + 1)];
                block.iter().all(|&v| v >= -self.tol)
                    && (block.iter().sum::<f64>() - 1.0).abs() <= self.tol
            })
            .collect();
        let open = target_mask.iter().filter(|&&p| p).count();
        if open == 0 {
            return Err(Error::OutsideDomain);
        }

        // phi_3: average of the per-block Cartesian images over open blocks.
        let mut output = vec![0.0; self.m];
        for j in 0..self.l {
            if !target_mask[j] {
                continue;
            }
            for r in 0..=self.m {
                let col = j * (self.m + 1) + r;
                let v = layer2[col];
                for d in 0..self.m {
                    output[d] += self.w3[d][col] * v;
                }
            }
        }
        for v in output.iter_mut() {
            *v /= open as f64;
        }

        Ok(ForwardTrace {
            input: x.to_vec(),
            layer1,
            source_mask,
            layer2,
            target_mask,
            output,
        })
    }

    /// Structural invariants checkable without the complexes: shapes,
    /// finiteness, 0/1 second layer with at most one hit per column and
    /// target block, positive tolerance.
    pub fn validate(&self) -> Result<()> {
        let d1 = self.k * (self.n + 1);
        let d2 = self.l * (self.m + 1);
        if self.n == 0 || self.m == 0 || self.k == 0 || self.l == 0 {
            return Err(Error::invariant("layer sizes must be positive"));
        }
        if self.w1.len() != d1 || self.w1.iter().any(|r| r.len() != self.n) {
            return Err(Error::invariant("w1 must be k(n+1) x n"));
        }
        if self.b1.len() != d1 {
            return Err(Error::invariant("b1 must have k(n+1) entries"));
        }
        if self.w2.len() != d2 || self.w2.iter().any(|r| r.len() != d1) {
            return Err(Error::invariant("w2 must be l(m+1) x k(n+1)"));
        }
        if self.w3.len() != self.m || self.w3.iter().any(|r| r.len() != d2) {
            return Err(Error::invariant("w3 must be m x l(m+1)"));
        }
        let finite = self
            .w1
            .iter()
            .flatten()
            .chain(self.b1.iter())
            .chain(self.w2.iter().flatten())
            .chain(self.w3.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invariant("weights must be finite"));
        }
        for row in &self.w2 {
            if row.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(Error::invariant("w2 entries must be 0 or 1"));
            }
        }
        for col in 0..d1 {
            for j in 0..self.l {
                let hits: f64 = (0..=self.m)
                    .map(|r| self.w2[j * (self.m + 1) + r][col])
                    .sum();
                if hits > 1.0 {
                    return Err(Error::invariant(
                        "w2 wires a source vertex twice into one target block",
                    ));
                }
            }
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::invariant("tol must be positive and finite"));
        }
        Ok(())
    }

    /// JSON form: `{"n","m","k","l","tol","w1","b1","w2","w3"}`, row-major.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "l": self.l,
            "tol": self.tol,
            "w1": self.w1,
            "b1": self.b1,
            "w2": self.w2,
            "w3": self.w3,
        })
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            m: usize,
            k: usize,
            l: usize,
            tol: f64,
            w1: Vec<Vec<f64>>,
            b1: Vec<f64>,
            w2: Vec<Vec<f64>>,
            w3: Vec<Vec<f64>>,
        }
        let raw: Raw = serde_json::from_value(value.clone())
            .map_err(|e| Error::format(format!("network file: {e}")))?;
        let net = SynthesizedNetwork {
            n: raw.n,
            m: raw.m,
            k: raw.k,
            l: raw.l,
            w1: raw.w1,
            b1: raw.b1,
            w2: raw.w2,
            w3: raw.w3,
            tol: raw.tol,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        self.validate()?;
        crate::jsonio::write_file(path, &self.to_json_value())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json_value(&crate::jsonio::read_file(path)?)
    }
}

/// [`FunctionSampler`] view of a network's forward pass.
pub struct NetworkFn<'a> {
    net: &'a SynthesizedNetwork,
}

impl<'a> NetworkFn<'a> {
    pub fn new(net: &'a SynthesizedNetwork) -> Self {
        NetworkFn { net }
    }
}

impl FunctionSampler for NetworkFn<'_> {
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.net.forward(x)
    }

    fn output_dim(&self) -> usize {
        self.net.m
    }
}

/// Checks the synthesis invariants that need the complexes: every (w1|b1)
/// block inverts its homogeneous vertex matrix and every w3 block equals the
/// target vertex coordinates.
pub fn verify_synthesis(
    net: &SynthesizedNetwork,
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    tol: f64,
) -> Result<()> {
    net.validate()?;
    let cache = SolveCache::for_complex(source)?;
    cache.verify(source, tol)?;
    for (i, simplex) in source.maximal_simplices().iter().enumerate() {
        let n = net.n;
        for r in 0..=n {
            for c in 0..=n {
                // (block · M)[r][c] where M's columns are homogeneous vertices.
                let mut acc = 0.0;
                for d in 0..=n {
                    let block_rd = if d < n {
                        net.w1[i * (n + 1) + r][d]
                    } else {
                        net.b1[i * (n + 1) + r]
                    };
                    let m_dc = if d < n {
                        source.vertex(simplex[c])[d]
                    } else {
                        1.0
                    };
                    acc += block_rd * m_dc;
                }
                let expect = if r == c { 1.0 } else { 0.0 };
                if (acc - expect).abs() > tol {
                    return Err(Error::invariant(format!(
                        "w1 block {i} does not invert its vertex matrix"
                    )));
                }
            }
        }
    }
    for (j, mu) in target.maximal_simplices().iter().enumerate() {
        for (r, &ui) in mu.iter().enumerate() {
            for d in 0..net.m {
                if (net.w3[d][j * (net.m + 1) + r] - target.vertex(ui)[d]).abs() > tol {
                    return Err(Error::invariant(format!(
                        "w3 block {j} differs from the target vertex coordinates"
                    )));
                }
            }
        }
    }
    Ok(())
}
