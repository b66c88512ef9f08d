//! Dual certificates for the theta SDP: the explicit optimal dual for odd
//! cycles, feasibility verification for arbitrary candidate duals,
//! complementary slackness, and the dual-nondegeneracy test that forces a
//! unique primal optimum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ExclusivityGraph;
use crate::linalg::{eigh, numeric_rank, singular_values, Mat, SymMatrix};
use crate::theta::cycle_theta_closed_form;

/// PSD slack tolerated when verifying dual feasibility.
pub const DUAL_PSD_TOL: f64 = 1e-9;

/// Relative singular-value tolerance for the nondegeneracy rank decision.
pub const NONDEG_RANK_TOL: f64 = 1e-8;

/// Complementary slackness threshold for optimal primal/dual pairs.
pub const COMPLEMENTARITY_TOL: f64 = 1e-8;

/// Candidate dual solution.
///
/// The multipliers define `z` through the template
///
/// ```text
///   Z = t E_00 + sum_i (lambda_i - w_i) E_ii - sum_i lambda_i E_0i
///       + sum_{edges} mu_ij E_ij,
/// ```
///
/// with `E_ij = (e_i e_j^T + e_j e_i^T) / 2`, so the matrix entries are
/// `Z_00 = t`, `Z_ii = lambda_i - w_i`, `Z_0i = -lambda_i / 2`, and
/// `Z_ij = mu_ij / 2` on edges. `z` is stored separately so verification
/// can detect tampering against the template.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub t: f64,
    pub lambda: Vec<f64>,
    pub mu: BTreeMap<(usize, usize), f64>,
    pub z: SymMatrix,
}

impl DualCertificate {
    /// Builds the certificate matrix from multipliers against a graph's
    /// weights. Every supplied `mu` entry is placed, including off-edge
    /// ones; feasibility verification flags those.
    pub fn from_multipliers(
        t: f64,
        lambda: Vec<f64>,
        mu: BTreeMap<(usize, usize), f64>,
        graph: &ExclusivityGraph,
    ) -> Result<Self> {
        if lambda.len() != graph.n() {
            return Err(Error::DimensionMismatch(format!(
                "lambda has length {}, graph has n = {} (field: lambda)",
                lambda.len(),
                graph.n()
            )));
        }
        for &(i, j) in mu.keys() {
            if i == j || !(1..=graph.n()).contains(&i) || !(1..=graph.n()).contains(&j) {
                return Err(Error::InvalidArgument(format!(
                    "mu key ({i},{j}) outside vertex range 1..={} (field: mu)",
                    graph.n()
                )));
            }
        }
        let z = reconstruct_template(t, &lambda, &mu, graph);
        Ok(DualCertificate { t, lambda, mu, z })
    }

    /// The dual objective value, which is the multiplier `t`.
    pub fn dual_value(&self) -> f64 {
        self.t
    }

    /// Parses the dual JSON format
    /// `{"t": <real>, "lambda": [...], "mu": {"i,j": <real>, ...}}`.
    pub fn from_json_str(s: &str, graph: &ExclusivityGraph) -> Result<Self> {
        let parsed: DualCertificateJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidArgument(format!("malformed dual JSON: {e}")))?;
        let mut mu = BTreeMap::new();
        for (key, value) in parsed.mu {
            let pair = parse_edge_key(&key)?;
            mu.insert(pair, value);
        }
        DualCertificate::from_multipliers(parsed.t, parsed.lambda, mu, graph)
    }

    pub fn to_json(&self) -> DualCertificateJson {
        DualCertificateJson {
            t: self.t,
            lambda: self.lambda.clone(),
            mu: self.mu.iter().map(|(&(i, j), &v)| (format!("{i},{j}"), v)).collect(),
        }
    }
}

/// Serde mirror of the dual-certificate JSON format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualCertificateJson {
    pub t: f64,
    pub lambda: Vec<f64>,
    pub mu: BTreeMap<String, f64>,
}

fn parse_edge_key(key: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "mu key {key:?} is not of the form \"i,j\" (field: mu)"
        )));
    }
    let i = parts[0].trim().parse::<usize>();
    let j = parts[1].trim().parse::<usize>();
    match (i, j) {
        (Ok(i), Ok(j)) => Ok((i.min(j), i.max(j))),
        _ => Err(Error::InvalidArgument(format!(
            "mu key {key:?} has non-integer vertices (field: mu)"
        ))),
    }
}

fn reconstruct_template(
    t: f64,
    lambda: &[f64],
    mu: &BTreeMap<(usize, usize), f64>,
    graph: &ExclusivityGraph,
) -> SymMatrix {
    let n = graph.n();
    let mut z = SymMatrix::zeros(n + 1);
    z.set_sym(0, 0, t);
    for i in 1..=n {
        z.set_sym(i, i, lambda[i - 1] - graph.weight(i));
        z.set_sym(0, i, -lambda[i - 1] / 2.0);
    }
    for (&(i, j), &m) in mu {
        z.set_sym(i, j, m / 2.0);
    }
    z
}

/// The optimal dual for the unit-weight odd cycle `C_n`:
///
/// ```text
///   Z_n = [ theta(C_n)   -e^T                                  ]
///         [ -e           I_n + (n - theta)/(2 theta) * A_{C_n} ]
/// ```
///
/// so `t = theta(C_n)`, `lambda_i = 2`, and `mu = (n - theta)/theta` on
/// every cycle edge (giving edge entries `(n - theta)/(2 theta)`).
pub fn build_cycle_dual(n: usize) -> Result<DualCertificate> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "cycle dual certificate is defined for odd n >= 5, got {n}"
        )));
    }
    let graph = ExclusivityGraph::cycle(n)?;
    let theta = cycle_theta_closed_form(n)?;
    let lambda = vec![2.0; n];
    let mu: BTreeMap<(usize, usize), f64> =
        graph.edges().map(|e| (e, (n as f64 - theta) / theta)).collect();
    DualCertificate::from_multipliers(theta, lambda, mu, &graph)
}

/// Which dual-feasibility check failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualCheck {
    Template,
    MuSupport,
    PositiveSemidefinite,
}

/// Outcome of dual-feasibility verification. Failures are outcomes, not
/// errors.
#[derive(Debug, Clone, Serialize)]
pub struct DualFeasibilityReport {
    pub template_deviation: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
    pub failed_check: Option<DualCheck>,
}

/// Checks that (a) `z` reconstructs exactly from the stored multipliers,
/// (b) `mu` is supported on the graph's edges only, and (c) `z` is PSD
/// within `DUAL_PSD_TOL`.
pub fn verify_dual_feasible(
    cert: &DualCertificate,
    graph: &ExclusivityGraph,
) -> Result<DualFeasibilityReport> {
    if cert.z.dim() != graph.n() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "certificate has dimension {}, graph needs {}",
            cert.z.dim(),
            graph.n() + 1
        )));
    }
    let rebuilt = reconstruct_template(cert.t, &cert.lambda, &cert.mu, graph);
    let template_deviation = rebuilt.distance(&cert.z);
    let support_ok = cert.mu.keys().all(|&(i, j)| graph.has_edge(i, j));
    let min_eigenvalue = eigh(&cert.z).min_eigenvalue();

    let failed_check = if template_deviation != 0.0 {
        Some(DualCheck::Template)
    } else if !support_ok {
        Some(DualCheck::MuSupport)
    } else if min_eigenvalue < -DUAL_PSD_TOL {
        Some(DualCheck::PositiveSemidefinite)
    } else {
        None
    };
    Ok(DualFeasibilityReport {
        template_deviation,
        min_eigenvalue,
        passed: failed_check.is_none(),
        failed_check,
    })
}

/// Analytic spectrum of the Schur complement of `Z_n` with respect to its
/// top-left entry: `{0} u {1 + (n - theta)/theta * cos(2 pi k / n)}` for
/// `k = 1..n-1`, sorted ascending. The minimum vanishes at
/// `k = (n -+ 1)/2` where the cosine equals `-cos(pi/n)`.
pub fn cycle_block_eigenvalues(n: usize) -> Result<Vec<f64>> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "block spectrum is defined for odd n >= 5, got {n}"
        )));
    }
    let theta = cycle_theta_closed_form(n)?;
    let ratio = (n as f64 - theta) / theta;
    let mut vals = vec![0.0];
    for k in 1..n {
        vals.push(1.0 + ratio * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos());
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Schur complement of a bordered matrix with respect to its `(0,0)` entry:
/// `S = B - z0 z0^T / Z_00` over the trailing block. The complement is PSD
/// exactly when the full matrix is (for positive pivot).
pub fn schur_complement(z: &SymMatrix) -> Result<SymMatrix> {
    let dim = z.dim();
    if dim < 2 {
        return Err(Error::InvalidArgument("schur complement needs dimension >= 2".into()));
    }
    let pivot = z.get(0, 0);
    if pivot <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "schur complement needs a positive pivot, got {pivot}"
        )));
    }
    Ok(SymMatrix::from_fn(dim - 1, |i, j| {
        z.get(i + 1, j + 1) - z.get(0, i + 1) * z.get(0, j + 1) / pivot
    }))
}

/// Trace inner product `<X, Z>`. Zero (within `COMPLEMENTARITY_TOL`) for
/// optimal primal/dual pairs.
pub fn verify_complementarity(x: &SymMatrix, cert: &DualCertificate) -> f64 {
    assert_eq!(x.dim(), cert.z.dim(), "dimension mismatch");
    x.trace_inner(&cert.z)
}

/// Outcome of the dual-nondegeneracy test.
///
/// The test parameterizes the symmetric matrices `M` satisfying the
/// constraint-orthogonality conditions `M_00 = 0`, `M_0i = M_ii`,
/// `M_ij = 0` on edges, and asks whether `M Z = 0` forces `M = 0`. Free
/// parameters: one per vertex (the coupled diagonal/handle value) plus one
/// per non-edge pair, enumerated lexicographically.
#[derive(Debug, Clone, Serialize)]
pub struct NondegeneracyVerdict {
    pub free_parameter_count: usize,
    pub constraint_matrix_rank: usize,
    pub nullspace_dim: usize,
    pub passed: bool,
    /// Smallest singular value counted into the rank; makes borderline rank
    /// decisions visible in reports.
    pub smallest_nonzero_singular_value: f64,
}

/// Decides dual nondegeneracy by assembling the linear map
/// `m -> vec(M(m) Z)` and measuring its null space via numeric rank.
pub fn check_nondegeneracy(
    cert: &DualCertificate,
    graph: &ExclusivityGraph,
    tol: f64,
) -> Result<NondegeneracyVerdict> {
    let n = graph.n();
    let dim = n + 1;
    if cert.z.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "certificate has dimension {}, graph needs {dim}",
            cert.z.dim()
        )));
    }

    let mut basis: Vec<SymMatrix> = Vec::new();
    for i in 1..=n {
        let mut m = SymMatrix::zeros(dim);
        m.set_sym(i, i, 1.0);
        m.set_sym(0, i, 1.0);
        basis.push(m);
    }
    for (i, j) in graph.non_edge_pairs() {
        let mut m = SymMatrix::zeros(dim);
        m.set_sym(i, j, 1.0);
        basis.push(m);
    }
    let free_parameter_count = basis.len();

    // Column p of the system is vec(M_p Z); rows are the dim^2 entries.
    let mut system = vec![vec![0.0; free_parameter_count]; dim * dim];
    for (p, m) in basis.iter().enumerate() {
        for r in 0..dim {
            for c in 0..dim {
                let mut v = 0.0;
                for k in 0..dim {
                    v += m.get(r, k) * cert.z.get(k, c);
                }
                system[r * dim + c][p] = v;
            }
        }
    }

    let constraint_matrix_rank = numeric_rank(&system, tol);
    let sv = singular_values(&Mat::from_rows(&system));
    let smallest_nonzero_singular_value =
        if constraint_matrix_rank > 0 { sv[constraint_matrix_rank - 1] } else { 0.0 };
    let nullspace_dim = free_parameter_count - constraint_matrix_rank;
    Ok(NondegeneracyVerdict {
        free_parameter_count,
        constraint_matrix_rank,
        nullspace_dim,
        passed: nullspace_dim == 0,
        smallest_nonzero_singular_value,
    })
}
