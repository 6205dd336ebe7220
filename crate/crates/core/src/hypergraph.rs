//! Incidence-matrix hypergraphs and their Laplacian operators.
//!
//! With `H` the vertex × hyperedge incidence matrix, `W` the diagonal edge
//! weights, `D_v` and `D_e` the vertex and edge degrees, and
//! `K = H W D_e⁻¹ Hᵀ`:
//!
//! ```text
//! L     = D_v - K
//! L_sym = I - D_v^{-1/2} K D_v^{-1/2}      S_sym = I - L_sym
//! L_rw  = I - D_v^{-1} K                   S_rw  = I - L_rw
//! ```

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A weighted hypergraph. Construction validates that the incidence matrix
/// is binary, that every hyperedge has at least two vertices and a strictly
/// positive weight, and that every vertex lies in some hyperedge.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    n_vertices: usize,
    edges: Vec<Vec<usize>>,
    incidence: Matrix,
    edge_weights: Vec<f64>,
}

impl Hypergraph {
    pub fn from_incidence(incidence: Matrix, edge_weights: Vec<f64>) -> Result<Self> {
        let (n, m) = (incidence.rows(), incidence.cols());
        if edge_weights.len() != m {
            return Err(Error::DimensionMismatch {
                what: "edge weight count",
                expected: m,
                found: edge_weights.len(),
            });
        }
        let mut edges = vec![Vec::new(); m];
        for v in 0..n {
            for (e, &x) in incidence.row(v).iter().enumerate() {
                if x == 1.0 {
                    edges[e].push(v);
                } else if x != 0.0 {
                    return Err(Error::NonBinaryIncidence { vertex: v, edge: e, value: x });
                }
            }
        }
        Self::validated(n, edges, incidence, edge_weights)
    }

    /// Builds a hypergraph from vertex lists, one per hyperedge. Repeated
    /// vertices within a list are collapsed.
    pub fn from_edges(n_vertices: usize, edges: Vec<Vec<usize>>, edge_weights: Vec<f64>) -> Result<Self> {
        if edge_weights.len() != edges.len() {
            return Err(Error::DimensionMismatch {
                what: "edge weight count",
                expected: edges.len(),
                found: edge_weights.len(),
            });
        }
        let mut incidence = Matrix::zeros(n_vertices, edges.len());
        let mut clean = Vec::with_capacity(edges.len());
        for (e, mut members) in edges.into_iter().enumerate() {
            members.sort_unstable();
            members.dedup();
            for &v in &members {
                if v >= n_vertices {
                    return Err(Error::VertexOutOfRange { vertex: v, n_vertices });
                }
                incidence[(v, e)] = 1.0;
            }
            clean.push(members);
        }
        Self::validated(n_vertices, clean, incidence, edge_weights)
    }

    /// Uniform unit weights.
    pub fn unweighted(n_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let w = vec![1.0; edges.len()];
        Self::from_edges(n_vertices, edges, w)
    }

    fn validated(n: usize, edges: Vec<Vec<usize>>, incidence: Matrix, edge_weights: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for (e, members) in edges.iter().enumerate() {
            if members.len() < 2 {
                return Err(Error::EdgeTooSmall { edge: e, size: members.len() });
            }
        }
        for (e, &w) in edge_weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::NonPositiveWeight { edge: e, weight: w });
            }
        }
        let mut covered = vec![false; n];
        for &v in edges.iter().flatten() {
            covered[v] = true;
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::IsolatedVertex { vertex: v });
        }
        Ok(Self {
            n_vertices: n,
            edges,
            incidence,
            edge_weights,
        })
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    #[inline]
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn incidence(&self) -> &Matrix {
        &self.incidence
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    /// Sorted member vertices of hyperedge `e`.
    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn edges(&self) -> impl Iterator<Item = &[usize]> {
        self.edges.iter().map(Vec::as_slice)
    }

    /// Text form with one `vertex edge 1` triple per nonzero, preceded by a
    /// `# n_vertices n_edges` header line.
    pub fn to_coordinate_list(&self) -> String {
        let mut out = String::new();
        self.write_coordinate_list(&mut out).expect("writing to a String cannot fail");
        out
    }

    pub fn write_coordinate_list(&self, out: &mut impl fmt::Write) -> fmt::Result {
        writeln!(out, "# {} {}", self.n_vertices, self.n_edges())?;
        for v in 0..self.n_vertices {
            for e in 0..self.n_edges() {
                if self.incidence[(v, e)] == 1.0 {
                    writeln!(out, "{v} {e} 1")?;
                }
            }
        }
        Ok(())
    }

    /// Parses [`Hypergraph::to_coordinate_list`] output. Weights default to 1.
    pub fn from_coordinate_list(text: &str, edge_weights: Option<Vec<f64>>) -> Result<Self> {
        let bad = |line: usize, reason: String| Error::CoordinateList { line, reason };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or_else(|| bad(1, "missing header".into()))?;
        let dims: Vec<usize> = header
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| bad(hline + 1, "header must start with '#'".into()))?
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<core::result::Result<_, _>>()
            .map_err(|e| bad(hline + 1, format!("{e}")))?;
        let [n, m] = dims[..] else {
            return Err(bad(hline + 1, "header must hold vertex and edge counts".into()));
        };
        let mut incidence = Matrix::zeros(n, m);
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [v, e, one] = fields[..] else {
                return Err(bad(idx + 1, format!("expected 3 fields, found {}", fields.len())));
            };
            let v: usize = v.parse().map_err(|err| bad(idx + 1, format!("vertex index: {err}")))?;
            let e: usize = e.parse().map_err(|err| bad(idx + 1, format!("edge index: {err}")))?;
            if one != "1" {
                return Err(bad(idx + 1, format!("entry value must be 1, found `{one}`")));
            }
            if v >= n || e >= m {
                return Err(bad(idx + 1, format!("({v}, {e}) outside {n}x{m}")));
            }
            incidence[(v, e)] = 1.0;
        }
        Self::from_incidence(incidence, edge_weights.unwrap_or_else(|| vec![1.0; m]))
    }
}

/// Vertex degrees `d(v) = Σ_e w(e) h(v,e)` and edge degrees `d(e) = Σ_v h(v,e)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeVectors {
    pub vertex_degrees: Vec<f64>,
    pub edge_degrees: Vec<f64>,
}

impl DegreeVectors {
    fn check(&self, h: &Hypergraph) -> Result<()> {
        if self.vertex_degrees.len() != h.n_vertices() {
            return Err(Error::DimensionMismatch {
                what: "vertex degree count",
                expected: h.n_vertices(),
                found: self.vertex_degrees.len(),
            });
        }
        if self.edge_degrees.len() != h.n_edges() {
            return Err(Error::DimensionMismatch {
                what: "edge degree count",
                expected: h.n_edges(),
                found: self.edge_degrees.len(),
            });
        }
        Ok(())
    }
}

pub fn compute_degrees(h: &Hypergraph) -> DegreeVectors {
    let mut vertex_degrees = vec![0.0; h.n_vertices()];
    let mut edge_degrees = Vec::with_capacity(h.n_edges());
    for (members, &w) in h.edges().zip(h.edge_weights()) {
        for &v in members {
            vertex_degrees[v] += w;
        }
        edge_degrees.push(members.len() as f64);
    }
    DegreeVectors {
        vertex_degrees,
        edge_degrees,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum OperatorKind {
    /// `L = D_v - H W D_e⁻¹ Hᵀ` (also used for the graph Laplacian `D - A`).
    Unnormalized,
    SymmetricNormalized,
    RandomWalk,
    RandomWalkPropagation,
    SymmetricPropagation,
}

impl OperatorKind {
    pub fn symbol(self) -> &'static str {
        match self {
            OperatorKind::Unnormalized => "L",
            OperatorKind::SymmetricNormalized => "L_sym",
            OperatorKind::RandomWalk => "L_rw",
            OperatorKind::RandomWalkPropagation => "S_rw",
            OperatorKind::SymmetricPropagation => "S_sym",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationKind {
    RandomWalk,
    Symmetric,
}

/// An `n × n` operator tagged with what it is. Hypergraph-derived operators
/// also remember the vertex degrees they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    kind: OperatorKind,
    values: Matrix,
    vertex_degrees: Option<Vec<f64>>,
}

impl OperatorMatrix {
    pub fn new(kind: OperatorKind, values: Matrix) -> Result<Self> {
        if !values.is_square() {
            return Err(Error::DimensionMismatch {
                what: "operator columns",
                expected: values.rows(),
                found: values.cols(),
            });
        }
        Ok(Self {
            kind,
            values,
            vertex_degrees: None,
        })
    }

    pub fn with_vertex_degrees(mut self, degrees: Vec<f64>) -> Result<Self> {
        if degrees.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "vertex degree count",
                expected: self.dim(),
                found: degrees.len(),
            });
        }
        self.vertex_degrees = Some(degrees);
        Ok(self)
    }

    #[inline]
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    #[inline]
    pub fn values(&self) -> &Matrix {
        &self.values
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.values.rows()
    }

    pub fn vertex_degrees(&self) -> Option<&[f64]> {
        self.vertex_degrees.as_deref()
    }

    pub(crate) fn expect_kind(&self, allowed: &[OperatorKind], expected: &'static str) -> Result<()> {
        if allowed.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::WrongOperator {
                expected,
                found: self.kind.symbol(),
            })
        }
    }
}

/// `H W D_e⁻¹ Hᵀ`, accumulated edge by edge. Entry `(u, v)` and `(v, u)` see
/// the same sequence of additions, so the result is exactly symmetric.
fn edge_kernel(h: &Hypergraph, d: &DegreeVectors) -> Matrix {
    let n = h.n_vertices();
    let mut k = Matrix::zeros(n, n);
    for (e, members) in h.edges().enumerate() {
        let c = h.edge_weights()[e] / d.edge_degrees[e];
        for &u in members {
            for &v in members {
                k[(u, v)] += c;
            }
        }
    }
    k
}

fn build(kind: OperatorKind, values: Matrix, d: &DegreeVectors) -> OperatorMatrix {
    OperatorMatrix {
        kind,
        values,
        vertex_degrees: Some(d.vertex_degrees.clone()),
    }
}

/// `L = D_v - H W D_e⁻¹ Hᵀ`.
pub fn unnormalized_laplacian(h: &Hypergraph, d: &DegreeVectors) -> Result<OperatorMatrix> {
    d.check(h)?;
    let mut l = edge_kernel(h, d).scale(-1.0);
    for (i, &dv) in d.vertex_degrees.iter().enumerate() {
        l[(i, i)] += dv;
    }
    Ok(build(OperatorKind::Unnormalized, l, d))
}

fn normalized_kernel(h: &Hypergraph, d: &DegreeVectors) -> Matrix {
    let k = edge_kernel(h, d);
    let inv_sqrt: Vec<f64> = d.vertex_degrees.iter().map(|&x| 1.0 / libm::sqrt(x)).collect();
    let n = h.n_vertices();
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let kij = k[(i, j)];
            if kij != 0.0 {
                s[(i, j)] = kij * (inv_sqrt[i] * inv_sqrt[j]);
            }
        }
    }
    s
}

fn walk_kernel(h: &Hypergraph, d: &DegreeVectors) -> Matrix {
    let mut k = edge_kernel(h, d);
    for (i, &dv) in d.vertex_degrees.iter().enumerate() {
        for x in k.row_mut(i) {
            *x /= dv;
        }
    }
    k
}

fn identity_minus(m: Matrix) -> Matrix {
    m.map(|x| -x).shift_diagonal(1.0)
}

/// `L_sym = I - D_v^{-1/2} H W D_e⁻¹ Hᵀ D_v^{-1/2}`.
pub fn symmetric_laplacian(h: &Hypergraph, d: &DegreeVectors) -> Result<OperatorMatrix> {
    d.check(h)?;
    Ok(build(
        OperatorKind::SymmetricNormalized,
        identity_minus(normalized_kernel(h, d)),
        d,
    ))
}

/// `L_rw = I - D_v⁻¹ H W D_e⁻¹ Hᵀ`.
pub fn random_walk_laplacian(h: &Hypergraph, d: &DegreeVectors) -> Result<OperatorMatrix> {
    d.check(h)?;
    Ok(build(OperatorKind::RandomWalk, identity_minus(walk_kernel(h, d)), d))
}

/// `S_rw = D_v⁻¹ H W D_e⁻¹ Hᵀ` (row-stochastic) or
/// `S_sym = D_v^{-1/2} H W D_e⁻¹ Hᵀ D_v^{-1/2}`.
pub fn propagation_matrix(h: &Hypergraph, d: &DegreeVectors, kind: PropagationKind) -> Result<OperatorMatrix> {
    d.check(h)?;
    Ok(match kind {
        PropagationKind::RandomWalk => build(OperatorKind::RandomWalkPropagation, walk_kernel(h, d), d),
        PropagationKind::Symmetric => build(OperatorKind::SymmetricPropagation, normalized_kernel(h, d), d),
    })
}

/// `Σ_e w(e)/d(e) Σ_{u<v ∈ e} (f(u) - f(v))²`, evaluated straight from the
/// edge lists without forming `L`. Equals `fᵀ L f`.
pub fn quadratic_form_oracle(h: &Hypergraph, d: &DegreeVectors, f: &[f64]) -> Result<f64> {
    d.check(h)?;
    if f.len() != h.n_vertices() {
        return Err(Error::DimensionMismatch {
            what: "vector length",
            expected: h.n_vertices(),
            found: f.len(),
        });
    }
    let mut total = 0.0;
    for (e, members) in h.edges().enumerate() {
        let mut edge_sum = 0.0;
        for (a, &u) in members.iter().enumerate() {
            for &v in &members[a + 1..] {
                let diff = f[u] - f[v];
                edge_sum += diff * diff;
            }
        }
        total += h.edge_weights()[e] / d.edge_degrees[e] * edge_sum;
    }
    Ok(total)
}
