//! The weighted Lovász theta SDP over an exclusivity graph, solved by
//! two-block ADMM alternating between the affine constraint subspace and
//! the PSD cone.
//!
//! For a graph on vertices `1..=n` with weights `w`, the program over
//! `(1+n) x (1+n)` symmetric matrices is
//!
//! ```text
//!   maximize   sum_i w_i X_ii
//!   subject to X_00 = 1,  X_ii = X_0i  (1 <= i <= n),
//!              X_ij = 0 on edges,      X PSD.
//! ```
//!
//! Row/column 0 is the handle; its couplings to the diagonal tie the SDP to
//! quantum behaviors via Gram decompositions (see `realization`).

use crate::error::{Error, Result};
use crate::graph::ExclusivityGraph;
use crate::linalg::{psd_project, SymMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 200_000;

/// The theta SDP for one graph: objective weights plus the three affine
/// constraint classes (handle normalization, diagonal couplings, edge
/// zeros).
#[derive(Debug, Clone)]
pub struct ThetaProblem {
    graph: ExclusivityGraph,
}

impl ThetaProblem {
    pub fn graph(&self) -> &ExclusivityGraph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.n() + 1
    }

    /// `1 + n + |edges|`: one normalization, n couplings, one zero per edge.
    pub fn constraint_count(&self) -> usize {
        1 + self.graph.n() + self.graph.edge_count()
    }

    /// Objective `sum_i w_i X_ii`.
    pub fn objective(&self, x: &SymMatrix) -> f64 {
        (1..=self.graph.n()).map(|i| self.graph.weight(i) * x.get(i, i)).sum()
    }
}

/// Builds the theta SDP for a graph.
pub fn build_problem(graph: ExclusivityGraph) -> ThetaProblem {
    ThetaProblem { graph }
}

/// Frobenius projection onto the affine constraint set.
///
/// The constraint classes touch disjoint entries, so the projection splits:
/// `X_00 <- 1`; each coupled pair `(X_ii, X_0i)` moves to the common value
/// `(X_ii + 2 X_0i) / 3` (the off-diagonal slot appears twice in the
/// Frobenius metric, hence the weighting); edge entries are zeroed.
pub fn affine_project(x: &SymMatrix, p: &ThetaProblem) -> SymMatrix {
    let mut out = x.clone();
    affine_project_in_place(&mut out, p);
    out
}

fn affine_project_in_place(x: &mut SymMatrix, p: &ThetaProblem) {
    let n = p.graph.n();
    debug_assert_eq!(x.dim(), n + 1, "matrix dimension must be 1 + n");
    x.set_sym(0, 0, 1.0);
    for i in 1..=n {
        let v = (x.get(i, i) + 2.0 * x.get(0, i)) / 3.0;
        x.set_sym(i, i, v);
        x.set_sym(0, i, v);
    }
    for (i, j) in p.graph.edges() {
        x.set_sym(i, j, 0.0);
    }
}

/// Solver controls. `initial` overrides the default start (the strictly
/// feasible interior point for canonical cycles, the identity otherwise).
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub initial: Option<SymMatrix>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, initial: None }
    }
}

/// Solver output. `x` satisfies the affine constraints exactly (it is the
/// affine-step iterate); `cone_residual` is its Frobenius distance to the
/// PSD cone, and `primal_residual` the final consensus gap between the
/// affine and cone iterates.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: SymMatrix,
    pub objective: f64,
    pub primal_residual: f64,
    pub cone_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Solves the theta SDP by ADMM with unit penalty and no over-relaxation.
///
/// Split `max <C,X> : X in A and X PSD` over a consensus pair `(X, Y)`:
/// the X-update folds the linear objective into the affine projection,
/// `X <- P_A(Y - U + C)`; the Y-update is the cone projection
/// `Y <- P_+(X + U)`; `U` accumulates the gap. Iteration stops when both
/// the consensus gap `||X - Y||_F` and the dual residual `||Y - Y_prev||_F`
/// fall to `tol`. Feasibility alone is not a stopping criterion: an iterate
/// can sit in the intersection while the objective still improves.
///
/// Non-convergence is reported through `converged = false`, never silently.
pub fn solve(p: &ThetaProblem, opts: &SolveOptions) -> SdpSolution {
    let n = p.graph.n();
    let dim = n + 1;

    let mut objective_gradient = SymMatrix::zeros(dim);
    for i in 1..=n {
        objective_gradient.set_sym(i, i, p.graph.weight(i));
    }

    let mut x = match &opts.initial {
        Some(x0) => {
            assert_eq!(x0.dim(), dim, "initial iterate has wrong dimension");
            x0.clone()
        }
        None => default_start(p),
    };
    let mut y = x.clone();
    let mut u = SymMatrix::zeros(dim);

    let mut iterations = 0;
    let mut converged = false;
    let mut primal_residual = f64::INFINITY;

    while iterations < opts.max_iter {
        iterations += 1;

        // X-step: prox of the (negated) linear objective restricted to the
        // affine set, at unit penalty.
        x = y.sub(&u).add(&objective_gradient);
        affine_project_in_place(&mut x, p);

        // Y-step and multiplier update.
        let y_prev = y;
        y = psd_project(&x.add(&u));
        u = u.add(&x).sub(&y);

        primal_residual = x.distance(&y);
        let dual_residual = y.distance(&y_prev);
        if primal_residual <= opts.tol && dual_residual <= opts.tol {
            converged = true;
            break;
        }
    }

    let cone_residual = psd_project(&x).distance(&x);
    SdpSolution {
        objective: p.objective(&x),
        x,
        primal_residual,
        cone_residual,
        iterations,
        converged,
    }
}

/// Solve with default tolerance and iteration budget.
pub fn solve_default(p: &ThetaProblem) -> SdpSolution {
    solve(p, &SolveOptions::default())
}

fn default_start(p: &ThetaProblem) -> SymMatrix {
    let n = p.graph.n();
    if p.graph.is_canonical_cycle() {
        strict_feasible_point(n, (n + 1) as f64).expect("m = n + 1 > n")
    } else {
        SymMatrix::identity(n + 1)
    }
}

/// Closed-form theta for odd cycles: `n cos(pi/n) / (1 + cos(pi/n))`.
pub fn cycle_theta_closed_form(n: usize) -> Result<f64> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "closed form holds for odd n >= 3, got {n}"
        )));
    }
    let c = (std::f64::consts::PI / n as f64).cos();
    Ok(n as f64 * c / (1.0 + c))
}

/// Strictly feasible interior point for the theta SDP on any graph with `n`
/// vertices: `F_00 = 1`, `F_ii = F_0i = 1/m`, all other off-diagonal zero.
/// Positive definite whenever `m > n`.
pub fn strict_feasible_point(n: usize, m: f64) -> Result<SymMatrix> {
    if !m.is_finite() || m <= n as f64 {
        return Err(Error::InvalidArgument(format!(
            "interior point needs m > n, got m = {m}, n = {n}"
        )));
    }
    let mut f = SymMatrix::zeros(n + 1);
    f.set_sym(0, 0, 1.0);
    for i in 1..=n {
        f.set_sym(i, i, 1.0 / m);
        f.set_sym(0, i, 1.0 / m);
    }
    Ok(f)
}

/// Feasibility diagnostics used by solution consumers: all converged
/// solutions must satisfy `X_00 = 1`, `0 <= X_ii <= 1` and the 2x2-minor
/// bound `X_ij^2 <= X_ii X_jj` up to `tol` slack (the feasible region of
/// the theta SDP is bounded).
pub fn check_bounded_feasibility(x: &SymMatrix, tol: f64) -> bool {
    let dim = x.dim();
    if (x.get(0, 0) - 1.0).abs() > tol {
        return false;
    }
    for i in 1..dim {
        let xii = x.get(i, i);
        if !(-tol..=1.0 + tol).contains(&xii) {
            return false;
        }
        for j in (i + 1)..dim {
            let xij = x.get(i, j);
            if xij * xij > xii * x.get(j, j) + tol {
                return false;
            }
        }
    }
    true
}
