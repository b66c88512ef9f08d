//! Exclusivity graphs with vertex weights, and the noncontextual bound via
//! exact maximum-weight independent set search.
//!
//! Vertices are labeled `1..=n` in every external format; index 0 is
//! reserved throughout the crate for the SDP handle row and column.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Default vertex-count cap for the exhaustive independence-number search.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 30;

/// Vertex-weighted exclusivity graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusivityGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    weights: Vec<f64>,
}

impl ExclusivityGraph {
    /// Validates vertex labels (`1..=n`), forbids self-loops and negative
    /// weights, and stores each edge once as an ordered pair.
    pub fn new(n: usize, edges: &[(usize, usize)], weights: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex (field: n)".into()));
        }
        if weights.len() != n {
            return Err(Error::InvalidArgument(format!(
                "weights has length {} but n = {n} (field: weights)",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "weights must be finite and nonnegative, got {w} (field: weights)"
            )));
        }
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            if i == j {
                return Err(Error::InvalidArgument(format!(
                    "self-loop at vertex {i} (field: edges)"
                )));
            }
            if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                return Err(Error::InvalidArgument(format!(
                    "edge ({i},{j}) outside vertex range 1..={n} (field: edges)"
                )));
            }
            set.insert((i.min(j), i.max(j)));
        }
        Ok(ExclusivityGraph { n, edges: set, weights })
    }

    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        ExclusivityGraph::new(n, edges, vec![1.0; n])
    }

    /// The `n`-cycle with unit weights: edges `{i, i+1}` and `{n, 1}`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("cycle graph needs n >= 3, got {n}")));
        }
        let edges: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        ExclusivityGraph::unweighted(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i - 1]
    }

    /// Non-adjacent vertex pairs `i < j`, in lexicographic order. This is
    /// the parameter ordering used by the nondegeneracy test.
    pub fn non_edge_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                if !self.has_edge(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    /// True when the edge set is exactly `{i, i+1 mod n}`, i.e. the cycle in
    /// its canonical labeling.
    pub fn is_canonical_cycle(&self) -> bool {
        self.n >= 3
            && self.edges.len() == self.n
            && (1..=self.n).all(|i| self.has_edge(i, i % self.n + 1))
    }

    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Symmetric 0/1 adjacency matrix (`n x n`, zero diagonal). Row and
    /// column `k` correspond to vertex `k + 1`.
    pub fn adjacency_matrix(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| if self.has_edge(i + 1, j + 1) { 1.0 } else { 0.0 })
    }

    /// Noncontextual bound: the maximum total weight of an independent set,
    /// by exhaustive branch-and-bound over subsets.
    pub fn weighted_independence_number(&self) -> Result<f64> {
        self.weighted_independence_number_with_limit(DEFAULT_ENUMERATION_LIMIT)
    }

    /// Same, with an explicit vertex-count guard.
    pub fn weighted_independence_number_with_limit(&self, limit: usize) -> Result<f64> {
        if self.n > limit || self.n > 63 {
            return Err(Error::SizeLimit { n: self.n, limit: limit.min(63) });
        }
        // Neighbor bitmasks over 0-based vertices.
        let mut adj = vec![0u64; self.n];
        for (i, j) in self.edges() {
            adj[i - 1] |= 1 << (j - 1);
            adj[j - 1] |= 1 << (i - 1);
        }
        // suffix[k] = total weight of vertices k..n, for bound pruning.
        let mut suffix = vec![0.0; self.n + 1];
        for k in (0..self.n).rev() {
            suffix[k] = suffix[k + 1] + self.weights[k];
        }
        let mut best = 0.0;
        self.search(0, 0u64, 0.0, &adj, &suffix, &mut best);
        Ok(best)
    }

    fn search(
        &self,
        k: usize,
        chosen: u64,
        acc: f64,
        adj: &[u64],
        suffix: &[f64],
        best: &mut f64,
    ) {
        if acc > *best {
            *best = acc;
        }
        if k == self.n || acc + suffix[k] <= *best {
            return;
        }
        // Include vertex k when no chosen neighbor forbids it.
        if chosen & adj[k] == 0 {
            self.search(k + 1, chosen | (1 << k), acc + self.weights[k], adj, suffix, best);
        }
        self.search(k + 1, chosen, acc, adj, suffix, best);
    }

    /// Parses the graph JSON format
    /// `{"n": 5, "edges": [[1,2],...], "weights": [1,1,1,1,1]}`;
    /// the `weights` key is optional and defaults to all ones.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let parsed: GraphJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidArgument(format!("malformed graph JSON: {e}")))?;
        parsed.try_into()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
            weights: Some(self.weights.clone()),
        }
    }
}

/// Serde mirror of the graph JSON format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl TryFrom<GraphJson> for ExclusivityGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        let weights = j.weights.unwrap_or_else(|| vec![1.0; j.n]);
        ExclusivityGraph::new(j.n, &edges, weights)
    }
}
