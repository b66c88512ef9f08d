//! Quantum realizations of exclusivity-graph behaviors: the canonical
//! odd-cycle (KCBS) realization, both directions of the correspondence
//! between realizations and theta-SDP Gram matrices, and isometry alignment
//! of two realizations.
//!
//! A realization is a handle unit vector `u_0` together with unit vectors
//! `u_1..u_n` that are orthogonal across every exclusivity edge; it induces
//! the behavior `p_i = <u_0, u_i>^2`. All vectors are real: every optimal
//! object handled here is real, and rank-one projectors carry no phase.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ExclusivityGraph;
use crate::linalg::{dot, gram_decompose, norm2, polar_unitary, Mat, SymMatrix, DEFAULT_RANK_TOL};

/// Unit-norm tolerance on realization vectors.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Orthogonality tolerance on exclusivity edges for a valid realization.
pub const EDGE_ORTHOGONALITY_TOL: f64 = 1e-9;

/// Orthogonality slack beyond which `inequality_value` rejects the input.
pub const INEQUALITY_ORTHOGONALITY_TOL: f64 = 1e-6;

/// Theta-SDP feasibility tolerance required of Gram-matrix inputs.
pub const GRAM_FEASIBILITY_TOL: f64 = 1e-6;

/// Smallest admissible diagonal entry when extracting a realization; below
/// this the handle overlap is numerically zero and self-testing is
/// undefined.
pub const MIN_OVERLAP: f64 = 1e-8;

/// Behavior feasibility slack on `p_i + p_j <= 1` over edges.
pub const BEHAVIOR_EDGE_TOL: f64 = 1e-9;

/// A handle vector plus projector vectors, all unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRealization {
    pub dimension: usize,
    pub handle: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl QuantumRealization {
    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// Checks unit norms and edge orthogonality against a graph.
    pub fn validate(&self, graph: &ExclusivityGraph) -> Result<()> {
        if self.n() != graph.n() {
            return Err(Error::DimensionMismatch(format!(
                "realization has {} vectors, graph has n = {}",
                self.n(),
                graph.n()
            )));
        }
        let all = std::iter::once(&self.handle).chain(self.vectors.iter());
        for (idx, v) in all.enumerate() {
            if v.len() != self.dimension {
                return Err(Error::DimensionMismatch(format!(
                    "vector {idx} has length {}, dimension is {}",
                    v.len(),
                    self.dimension
                )));
            }
            if (norm2(v) - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::InvalidArgument(format!(
                    "vector {idx} is not unit norm: ||v|| = {}",
                    norm2(v)
                )));
            }
        }
        for (i, j) in graph.edges() {
            let overlap = dot(&self.vectors[i - 1], &self.vectors[j - 1]);
            if overlap.abs() > EDGE_ORTHOGONALITY_TOL {
                return Err(Error::InfeasibleRealization { i, j, overlap });
            }
        }
        Ok(())
    }

    /// Parses the realization JSON format
    /// `{"dimension": 3, "handle": [...], "vectors": [[...], ...]}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let parsed: RealizationJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidArgument(format!("malformed realization JSON: {e}")))?;
        Ok(QuantumRealization {
            dimension: parsed.dimension,
            handle: parsed.handle,
            vectors: parsed.vectors,
        })
    }

    pub fn to_json(&self) -> RealizationJson {
        RealizationJson {
            dimension: self.dimension,
            handle: self.handle.clone(),
            vectors: self.vectors.clone(),
        }
    }
}

/// Serde mirror of the realization JSON format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationJson {
    pub dimension: usize,
    pub handle: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Event probabilities `p_1..p_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Behavior {
    pub probabilities: Vec<f64>,
}

impl Behavior {
    /// Checks `p_i + p_j <= 1` (up to slack) on every edge.
    pub fn validate(&self, graph: &ExclusivityGraph) -> Result<()> {
        for (i, j) in graph.edges() {
            let s = self.probabilities[i - 1] + self.probabilities[j - 1];
            if s > 1.0 + BEHAVIOR_EDGE_TOL {
                return Err(Error::InvalidArgument(format!(
                    "behavior violates exclusivity on edge ({i},{j}): p_i + p_j = {s}"
                )));
            }
        }
        Ok(())
    }
}

/// The canonical odd-cycle realization in dimension 3:
///
/// ```text
///   u_0 = (1, 0, 0),
///   u_j = (cos t, sin t sin phi_j, sin t cos phi_j),
///   cos^2 t = cos(pi/n) / (1 + cos(pi/n)),  phi_j = j pi (n-1) / n.
/// ```
///
/// Adjacent vectors are orthogonal by construction and every overlap with
/// the handle equals `cos t`, so the behavior is uniform at the quantum
/// supremum of the cycle inequality.
pub fn canonical_kcbs(n: usize) -> Result<QuantumRealization> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "canonical cycle realization is defined for odd n >= 5, got {n}"
        )));
    }
    let nf = n as f64;
    let cos_pi_n = (std::f64::consts::PI / nf).cos();
    let cos_t = (cos_pi_n / (1.0 + cos_pi_n)).sqrt();
    let sin_t = (1.0 - cos_t * cos_t).sqrt();
    let mut vectors = Vec::with_capacity(n);
    for j in 1..=n {
        let phi = (j as f64) * std::f64::consts::PI * (nf - 1.0) / nf;
        vectors.push(vec![cos_t, sin_t * phi.sin(), sin_t * phi.cos()]);
    }
    Ok(QuantumRealization { dimension: 3, handle: vec![1.0, 0.0, 0.0], vectors })
}

/// Behavior induced by a realization: `p_i = <u_0, u_i>^2`.
pub fn behavior_of(r: &QuantumRealization) -> Behavior {
    Behavior {
        probabilities: r.vectors.iter().map(|u| dot(&r.handle, u).powi(2)).collect(),
    }
}

/// The inequality functional `sum_i w_i p_i` evaluated on a realization.
///
/// Rejects realizations whose edge orthogonality is violated beyond
/// `INEQUALITY_ORTHOGONALITY_TOL`: the value is only meaningful for
/// behaviors the graph admits.
pub fn inequality_value(r: &QuantumRealization, graph: &ExclusivityGraph) -> Result<f64> {
    if r.n() != graph.n() {
        return Err(Error::DimensionMismatch(format!(
            "realization has {} vectors, graph has n = {}",
            r.n(),
            graph.n()
        )));
    }
    for (i, j) in graph.edges() {
        let overlap = dot(&r.vectors[i - 1], &r.vectors[j - 1]);
        if overlap.abs() > INEQUALITY_ORTHOGONALITY_TOL {
            return Err(Error::InfeasibleRealization { i, j, overlap });
        }
    }
    let behavior = behavior_of(r);
    Ok((1..=graph.n()).map(|i| graph.weight(i) * behavior.probabilities[i - 1]).sum())
}

/// Gram matrix of the scaled vectors `w_0 = u_0`, `w_i = <u_0,u_i> u_i`.
///
/// The result is feasible for the theta SDP: `X_00 = 1`,
/// `X_ii = <u_0,u_i>^2 = X_0i`, and edge entries vanish with the edge
/// orthogonality.
pub fn gram_of_realization(r: &QuantumRealization) -> SymMatrix {
    let n = r.n();
    let mut scaled: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    scaled.push(r.handle.clone());
    for u in &r.vectors {
        let overlap = dot(&r.handle, u);
        scaled.push(u.iter().map(|x| overlap * x).collect());
    }
    SymMatrix::from_fn(n + 1, |i, j| dot(&scaled[i], &scaled[j]))
}

/// Extracts a realization from a feasible Gram matrix by rank-truncated
/// Gram decomposition followed by normalization.
///
/// Signs are fixed so every handle overlap is nonnegative; projectors are
/// sign-invariant, so this is pure gauge. Fails with a degenerate-overlap
/// error when some `X_ii` is numerically zero (the behavior entry would be
/// zero and self-testing undefined there).
pub fn realization_from_gram(x: &SymMatrix, graph: &ExclusivityGraph) -> Result<QuantumRealization> {
    let n = graph.n();
    if x.dim() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "gram matrix has dimension {}, graph needs {}",
            x.dim(),
            n + 1
        )));
    }
    let feasibility = theta_feasibility_gap(x, graph);
    if feasibility > GRAM_FEASIBILITY_TOL {
        return Err(Error::InvalidInput(format!(
            "matrix violates theta-SDP feasibility by {feasibility:e}"
        )));
    }
    for i in 1..=n {
        let xii = x.get(i, i);
        if xii <= MIN_OVERLAP {
            return Err(Error::DegenerateOverlap { vertex: i, value: xii });
        }
    }
    let rows = gram_decompose(x, DEFAULT_RANK_TOL)?;
    let dimension = rows[0].len();
    let handle = normalize(&rows[0]);
    let mut vectors = Vec::with_capacity(n);
    for row in rows.iter().skip(1) {
        let mut u = normalize(row);
        if dot(&handle, &u) < 0.0 {
            for v in u.iter_mut() {
                *v = -*v;
            }
        }
        vectors.push(u);
    }
    Ok(QuantumRealization { dimension, handle, vectors })
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let norm = norm2(v);
    v.iter().map(|x| x / norm).collect()
}

/// Worst violation of the theta-SDP affine constraints by `x`.
pub fn theta_feasibility_gap(x: &SymMatrix, graph: &ExclusivityGraph) -> f64 {
    let mut gap: f64 = (x.get(0, 0) - 1.0).abs();
    for i in 1..=graph.n() {
        gap = gap.max((x.get(i, i) - x.get(0, i)).abs());
    }
    for (i, j) in graph.edges() {
        gap = gap.max(x.get(i, j).abs());
    }
    gap
}

/// Isometry alignment of two realizations over the same graph size.
///
/// Zero-pads both to a common dimension, takes the polar factors of the two
/// scaled-vector matrices (rows `w_0 = u_0`, `w_i = <u_0,u_i> u_i`), and
/// aligns with the orthogonal map `U = U_{V'}^T U_V`, which carries the
/// first realization's vectors onto the second's whenever their Gram
/// matrices agree. Returns `U` together with the worst projector deviation
/// `max_i ||U u_i u_i^T U^T - u_i' u_i'^T||_F` over `i = 0..n`.
pub fn align(a: &QuantumRealization, b: &QuantumRealization) -> Result<(Mat, f64)> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!(
            "realizations have {} and {} vectors",
            a.n(),
            b.n()
        )));
    }
    let rows = a.n() + 1;
    let dim = a.dimension.max(b.dimension).max(rows);

    let va = scaled_vector_matrix(a, dim);
    let vb = scaled_vector_matrix(b, dim);
    let ua = polar_unitary(&va);
    let ub = polar_unitary(&vb);
    let u = ub.transpose().matmul(&ua);

    let mut max_deviation = 0.0f64;
    for i in 0..rows {
        let pa = unit_vector(a, i, dim);
        let pb = unit_vector(b, i, dim);
        let mapped = u.matvec(&pa);
        max_deviation = max_deviation.max(projector_distance_direct(&mapped, &pb));
    }
    Ok((u, max_deviation))
}

/// Square matrix whose first `n + 1` rows are the zero-padded scaled
/// vectors; remaining rows are zero.
fn scaled_vector_matrix(r: &QuantumRealization, dim: usize) -> Mat {
    let mut m = Mat::zeros(dim, dim);
    for (j, &x) in r.handle.iter().enumerate() {
        m.set(0, j, x);
    }
    for (i, v) in r.vectors.iter().enumerate() {
        let overlap = dot(&r.handle, v);
        for (j, &x) in v.iter().enumerate() {
            m.set(i + 1, j, overlap * x);
        }
    }
    m
}

fn unit_vector(r: &QuantumRealization, i: usize, dim: usize) -> Vec<f64> {
    let src = if i == 0 { &r.handle } else { &r.vectors[i - 1] };
    let mut v = vec![0.0; dim];
    v[..src.len()].copy_from_slice(src);
    v
}

/// `||x x^T - y y^T||_F` through the identity `2 - 2 <x,y>^2` for unit
/// vectors.
///
/// Near-identical vectors hit the identity's cancellation floor around
/// `2 sqrt(eps_machine)`; use [`projector_distance_direct`] where
/// machine-scale deviations must be resolved.
pub fn projector_distance(x: &[f64], y: &[f64]) -> f64 {
    let overlap = dot(x, y);
    (2.0 - 2.0 * overlap * overlap).max(0.0).sqrt()
}

/// `||x x^T - y y^T||_F` computed entry-wise, free of the cancellation in
/// the inner-product identity.
pub fn projector_distance_direct(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i..n {
            let d = x[i] * x[j] - y[i] * y[j];
            s += if i == j { d * d } else { 2.0 * d * d };
        }
    }
    s.sqrt()
}
