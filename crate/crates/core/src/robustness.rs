//! Quantitative robustness machinery: checkable forms of the three
//! perturbation bounds (Gram closeness, normalization, projector distance),
//! suboptimality probes along feasible paths, and scaling-exponent fits.
//!
//! The headline claim these tools exercise: any realization within
//! `epsilon` of the quantum supremum is, after an isometry, within
//! `O(sqrt(epsilon))` of the canonical one. The probe walks a feasible path
//! from the verified optimum toward the strictly feasible interior point
//! and records, per point, the objective deficit and three distances whose
//! scaling against that deficit is then fit or ratio-bounded.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ExclusivityGraph;
use crate::linalg::{gram_decompose, norm2, polar_unitary, psd_project, Mat, SymMatrix};
use crate::realization::{
    align, canonical_kcbs, projector_distance, realization_from_gram, QuantumRealization,
};
use crate::theta::{affine_project, build_problem, strict_feasible_point, SdpSolution};

/// Default RNG seed for randomized trials.
pub const DEFAULT_SEED: u64 = 42;

/// Residual bound a projected random perturbation must meet to be accepted
/// as feasible.
pub const PROJECTION_RESIDUAL_TOL: f64 = 1e-9;

/// Result of the Gram-closeness construction: an orthogonal alignment of
/// two Gram decompositions, the worst achieved vector distance, and the
/// bound `sqrt(dim * ||X - X'||_F)` it must respect.
#[derive(Debug, Clone)]
pub struct GramClosenessBound {
    pub isometry: Mat,
    pub max_vector_distance: f64,
    pub bound: f64,
}

/// Aligns the Gram decompositions of two PSD matrices with the orthogonal
/// map built from their polar factors (`V = sqrt(X) U_V`, then
/// `U = U_{V'}^T U_V`), and reports the worst 2-norm distance between
/// corresponding vectors together with the `sqrt(dim * eps)` bound.
pub fn gram_closeness_bound(x: &SymMatrix, x2: &SymMatrix) -> Result<GramClosenessBound> {
    if x.dim() != x2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrices have dimensions {} and {}",
            x.dim(),
            x2.dim()
        )));
    }
    let dim = x.dim();
    // Rank tolerance zero: keep every positive eigendirection, so the
    // decomposition reproduces the input to machine precision and the bound
    // is tested without truncation slack.
    let va = pad_square(&gram_decompose(x, 0.0)?, dim);
    let vb = pad_square(&gram_decompose(x2, 0.0)?, dim);
    let ua = polar_unitary(&va);
    let ub = polar_unitary(&vb);
    let u = ub.transpose().matmul(&ua);

    let mut max_vector_distance = 0.0f64;
    for i in 0..dim {
        let mapped = u.matvec(va.row(i));
        let diff: f64 = mapped
            .iter()
            .zip(vb.row(i))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        max_vector_distance = max_vector_distance.max(diff);
    }
    let bound = (dim as f64 * x.distance(x2)).sqrt();
    Ok(GramClosenessBound { isometry: u, max_vector_distance, bound })
}

fn pad_square(rows: &[Vec<f64>], dim: usize) -> Mat {
    let mut m = Mat::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// Both sides of the normalization bound: for `||a - b|| = delta` with
/// `||a|| >= 2 delta`, the normalized vectors satisfy
/// `||a^ - b^|| <= 2 delta / ||a||`. Returns `(lhs, rhs)`.
pub fn normalization_bound_check(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "vectors have lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let norm_a = norm2(a);
    let delta = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    if norm_a == 0.0 || norm_a < 2.0 * delta {
        return Err(Error::Precondition(format!(
            "normalization bound needs ||a|| >= 2 ||a - b||, got ||a|| = {norm_a}, delta = {delta}"
        )));
    }
    let norm_b = norm2(b);
    let lhs = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x / norm_a - y / norm_b;
            d * d
        })
        .sum::<f64>()
        .sqrt();
    Ok((lhs, 2.0 * delta / norm_a))
}

/// Both sides of the projector bound: for unit vectors within `eps` in
/// 2-norm, the rank-one projectors are within `sqrt(2) * eps` in Frobenius
/// norm. Returns `(lhs, rhs)`.
pub fn projector_bound_check(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "vectors have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    for (name, v) in [("x", x), ("y", y)] {
        if (norm2(v) - 1.0).abs() > 1e-10 {
            return Err(Error::Precondition(format!(
                "projector bound needs unit vectors, ||{name}|| = {}",
                norm2(v)
            )));
        }
    }
    let lhs = projector_distance(x, y);
    let rhs = std::f64::consts::SQRT_2
        * x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    Ok((lhs, rhs))
}

/// One probe point: path parameter, objective deficit, and the three
/// distances from the reference optimum/realization.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeRecord {
    pub t: f64,
    pub epsilon: f64,
    pub gram_distance: f64,
    pub vector_distance: f64,
    pub projector_distance: f64,
}

/// Records of a robustness probe, in grid order.
#[derive(Debug, Clone, Serialize)]
pub struct RobustnessProbe {
    pub records: Vec<ProbeRecord>,
}

/// Which probe distance a fit or summary refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    Gram,
    Vector,
    Projector,
}

impl ProbeRecord {
    fn distance(&self, kind: DistanceKind) -> f64 {
        match kind {
            DistanceKind::Gram => self.gram_distance,
            DistanceKind::Vector => self.vector_distance,
            DistanceKind::Projector => self.projector_distance,
        }
    }
}

/// Walks the feasible segment `X_t = (1 - t) X* + t F` toward the strictly
/// feasible interior point on a log-spaced grid of `steps` values of `t`
/// in `[t_min, t_max]`, recording per point the suboptimality
/// `epsilon(t)`, the Frobenius distance to the optimum, and the aligned
/// vector/projector distances of the extracted realization from the
/// reference one (canonical for unit-weight odd cycles).
pub fn suboptimality_distance_probe(
    graph: &ExclusivityGraph,
    x_star: &SdpSolution,
    steps: usize,
    t_min: f64,
    t_max: f64,
) -> Result<RobustnessProbe> {
    if !x_star.converged {
        return Err(Error::InvalidInput(
            "probe requires a converged (verified optimal) solution".into(),
        ));
    }
    let grid = log_spaced(steps, t_min, t_max)?;
    let reference = reference_realization(graph, x_star)?;
    let f = strict_feasible_point(graph.n(), (graph.n() + 1) as f64)?;
    let records = grid
        .into_iter()
        .map(|t| {
            let x_t = x_star.x.scale(1.0 - t).add(&f.scale(t));
            probe_point(graph, x_star, &reference, t, &x_t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RobustnessProbe { records })
}

/// Randomized stress variant: symmetric perturbations of the optimum at
/// log-uniform scales are projected back to the feasible set by alternating
/// affine/PSD projections; a trial is accepted only when both residuals
/// reach `PROJECTION_RESIDUAL_TOL`. Records are in trial order.
pub fn random_perturbation_probe(
    graph: &ExclusivityGraph,
    x_star: &SdpSolution,
    trials: usize,
    t_min: f64,
    t_max: f64,
    seed: u64,
) -> Result<RobustnessProbe> {
    if !x_star.converged {
        return Err(Error::InvalidInput(
            "probe requires a converged (verified optimal) solution".into(),
        ));
    }
    if t_min.is_nan() || t_max.is_nan() || t_min <= 0.0 || t_min >= t_max {
        return Err(Error::InvalidArgument(format!(
            "need 0 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    let problem = build_problem(graph.clone());
    let reference = reference_realization(graph, x_star)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = graph.n() + 1;
    let mut records = Vec::with_capacity(trials);
    for _ in 0..trials {
        let scale = (rng.gen_range(t_min.ln()..t_max.ln())).exp();
        let mut direction = SymMatrix::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let norm = direction.frobenius_norm();
        if norm == 0.0 {
            continue;
        }
        direction = direction.scale(1.0 / norm);
        let candidate = x_star.x.add(&direction.scale(scale));
        if let Some(x_t) = project_to_feasible(&candidate, &problem) {
            records.push(probe_point(graph, x_star, &reference, scale, &x_t)?);
        }
    }
    Ok(RobustnessProbe { records })
}

fn project_to_feasible(
    candidate: &SymMatrix,
    problem: &crate::theta::ThetaProblem,
) -> Option<SymMatrix> {
    let mut x = candidate.clone();
    for _ in 0..20_000 {
        x = psd_project(&affine_project(&x, problem));
        if affine_project(&x, problem).distance(&x) <= PROJECTION_RESIDUAL_TOL {
            return Some(x);
        }
    }
    None
}

fn reference_realization(
    graph: &ExclusivityGraph,
    x_star: &SdpSolution,
) -> Result<QuantumRealization> {
    if graph.is_canonical_cycle() && graph.n() % 2 == 1 && graph.n() >= 5 && graph.has_unit_weights()
    {
        canonical_kcbs(graph.n())
    } else {
        realization_from_gram(&x_star.x, graph)
    }
}

fn probe_point(
    graph: &ExclusivityGraph,
    x_star: &SdpSolution,
    reference: &QuantumRealization,
    t: f64,
    x_t: &SymMatrix,
) -> Result<ProbeRecord> {
    let objective = |x: &SymMatrix| -> f64 {
        (1..=graph.n()).map(|i| graph.weight(i) * x.get(i, i)).sum()
    };
    let epsilon = x_star.objective - objective(x_t);
    let gram_distance = x_t.distance(&x_star.x);
    let realized = realization_from_gram(x_t, graph)?;
    let (u, proj_dist) = align(reference, &realized)?;
    let vector_distance = max_aligned_vector_distance(&u, reference, &realized);
    Ok(ProbeRecord {
        t,
        epsilon,
        gram_distance,
        vector_distance,
        projector_distance: proj_dist,
    })
}

/// Worst 2-norm distance `||U u_i - u_i'||` over the handle and projector
/// vectors, both gauges fixed to nonnegative handle overlap.
fn max_aligned_vector_distance(
    u: &Mat,
    a: &QuantumRealization,
    b: &QuantumRealization,
) -> f64 {
    let dim = u.rows();
    let pad = |src: &[f64]| {
        let mut v = vec![0.0; dim];
        v[..src.len()].copy_from_slice(src);
        v
    };
    let mut worst = 0.0f64;
    for i in 0..=a.n() {
        let va = pad(if i == 0 { &a.handle } else { &a.vectors[i - 1] });
        let vb = pad(if i == 0 { &b.handle } else { &b.vectors[i - 1] });
        let mapped = u.matvec(&va);
        let d = mapped.iter().zip(&vb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        worst = worst.max(d);
    }
    worst
}

fn log_spaced(steps: usize, t_min: f64, t_max: f64) -> Result<Vec<f64>> {
    if steps < 2 || t_min.is_nan() || t_max.is_nan() || t_min <= 0.0 || t_min >= t_max {
        return Err(Error::InvalidArgument(format!(
            "need steps >= 2 and 0 < t_min < t_max, got steps = {steps}, [{t_min}, {t_max}]"
        )));
    }
    let (lo, hi) = (t_min.ln(), t_max.ln());
    Ok((0..steps)
        .map(|k| (lo + (hi - lo) * k as f64 / (steps - 1) as f64).exp())
        .collect())
}

/// Least-squares slope of `log(distance)` against `log(epsilon)` over probe
/// points with positive deficit and distance, together with the fit's
/// `r^2`. At least five usable points are required.
pub fn fit_scaling_exponent(
    probe: &RobustnessProbe,
    kind: DistanceKind,
) -> Result<(f64, f64)> {
    let points: Vec<(f64, f64)> = probe
        .records
        .iter()
        .filter(|r| r.epsilon > 0.0 && r.distance(kind) > 0.0)
        .map(|r| (r.epsilon.ln(), r.distance(kind).ln()))
        .collect();
    if points.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "exponent fit needs at least 5 probe points with positive epsilon, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 =
        points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok((slope, r_squared))
}
