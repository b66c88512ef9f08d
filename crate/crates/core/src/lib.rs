//! Certification toolkit for noncontextuality inequalities over exclusivity
//! graphs.
//!
//! Given a vertex-weighted exclusivity graph, this crate decides whether the
//! associated inequality is a robust self-test of its optimal quantum
//! realization:
//!
//! * [`graph`] — exclusivity graphs and the noncontextual bound (exact
//!   maximum-weight independent set);
//! * [`linalg`] — the dense symmetric kernel everything runs on (Jacobi
//!   eigensolver, PSD projection, Gram decomposition, polar factors,
//!   numeric rank);
//! * [`theta`] — the weighted Lovász theta SDP and its ADMM solver, plus
//!   closed forms and the strictly feasible interior point for cycles;
//! * [`certificate`] — explicit dual optima for odd cycles, dual
//!   feasibility and complementarity verification, and the nondegeneracy
//!   test that forces primal uniqueness;
//! * [`realization`] — canonical cycle realizations, Gram-matrix
//!   correspondence in both directions, isometry alignment;
//! * [`robustness`] — perturbation bounds and suboptimality probes that
//!   validate the square-root robustness scaling empirically;
//! * [`certify`] — the pipeline gluing the stages into one report.

pub mod certificate;
pub mod certify;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod realization;
pub mod robustness;
pub mod theta;

pub use certificate::{
    build_cycle_dual, check_nondegeneracy, cycle_block_eigenvalues, schur_complement,
    verify_complementarity, verify_dual_feasible, DualCertificate, DualFeasibilityReport,
    NondegeneracyVerdict,
};
pub use certify::{
    certify_self_test, describe_graph, summarize_probe, CertificationReport, Stage, Verdict,
};
pub use error::{Error, Result};
pub use graph::ExclusivityGraph;
pub use linalg::{
    eigh, gram_decompose, numeric_rank, polar_unitary, psd_project, sqrt_psd,
    EigenDecomposition, Mat, SymMatrix,
};
pub use realization::{
    align, behavior_of, canonical_kcbs, gram_of_realization, inequality_value,
    realization_from_gram, Behavior, QuantumRealization,
};
pub use robustness::{
    fit_scaling_exponent, gram_closeness_bound, normalization_bound_check,
    projector_bound_check, random_perturbation_probe, suboptimality_distance_probe,
    DistanceKind, GramClosenessBound, ProbeRecord, RobustnessProbe,
};
pub use theta::{
    affine_project, build_problem, cycle_theta_closed_form, solve, solve_default,
    strict_feasible_point, SdpSolution, SolveOptions, ThetaProblem,
};
