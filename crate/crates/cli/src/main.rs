//! `thetacert`: certification toolkit for noncontextuality inequalities
//! over exclusivity graphs.
//!
//! Subcommands: `theta` (solve the SDP), `nc-bound` (noncontextual bound),
//! `certify` (full self-test pipeline), `realize` (quantum realizations),
//! `probe` (robustness scaling data as CSV).
//!
//! Exit codes: 0 on success or a passing verdict, 1 on a failing verdict or
//! non-convergence, 2 on usage errors.

mod output;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use thetacert_core::certify::{certify_self_test, CertificationReport, Verdict, REPORT_SCHEMA};
use thetacert_core::robustness::{
    random_perturbation_probe, suboptimality_distance_probe, RobustnessProbe, DEFAULT_SEED,
};
use thetacert_core::theta::{build_problem, solve, SdpSolution, SolveOptions};
use thetacert_core::{
    behavior_of, canonical_kcbs, realization_from_gram, DualCertificate, Error,
    ExclusivityGraph, QuantumRealization,
};

use output::{float17, format_sig, to_json};

#[derive(Parser)]
#[command(
    name = "thetacert",
    version,
    about = "Decide whether an exclusivity-graph noncontextuality inequality is a robust self-test"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeFormat {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the weighted Lovász theta SDP for a graph.
    Theta {
        /// Graph spec: `cycle:<n>` or a path to a graph JSON file.
        #[arg(long, value_name = "SPEC")]
        graph: String,
        /// Solver residual tolerance.
        #[arg(long, default_value_t = thetacert_core::theta::DEFAULT_TOL)]
        tol: f64,
        /// Iteration budget.
        #[arg(long, default_value_t = thetacert_core::theta::DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        out: OutFormat,
    },
    /// Noncontextual bound: exact maximum-weight independent set.
    NcBound {
        #[arg(long, value_name = "SPEC")]
        graph: String,
        /// Vertex-count cap for the exhaustive search.
        #[arg(long, default_value_t = thetacert_core::graph::DEFAULT_ENUMERATION_LIMIT)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        out: OutFormat,
    },
    /// Full certification pipeline: theta, dual certificate, complementary
    /// slackness, nondegeneracy, handle overlaps.
    Certify {
        #[arg(long, value_name = "SPEC")]
        graph: String,
        /// Candidate dual certificate JSON (required for non-cycle graphs).
        #[arg(long, value_name = "FILE")]
        dual: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
    },
    /// Emit a quantum realization: canonical for odd cycles, or extracted
    /// from the solver optimum.
    Realize {
        #[arg(long, value_name = "SPEC")]
        graph: String,
        /// Extract from the solved SDP optimum instead of the closed form.
        #[arg(long)]
        from_solver: bool,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        out: OutFormat,
    },
    /// Robustness probe: suboptimality against distance along a feasible
    /// path (CSV on stdout).
    Probe {
        #[arg(long, value_name = "SPEC")]
        graph: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 1e-6)]
        t_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        t_max: f64,
        #[arg(long, value_enum, default_value_t = ProbeFormat::Csv)]
        out: ProbeFormat,
        /// Use projected random perturbations instead of the interior path.
        #[arg(long)]
        random_family: bool,
        /// Trials for the random family.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// RNG seed (overrides the SELFTEST_SEED environment variable).
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

/// Usage errors exit 2; computational failures (non-convergence) exit 1.
enum CliError {
    Usage(String),
    Failure(String),
}

type CliResult<T> = Result<T, CliError>;

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Theta { graph, tol, max_iter, out } => run_theta(&graph, tol, max_iter, out),
        Command::NcBound { graph, max_n, out } => run_nc_bound(&graph, max_n, out),
        Command::Certify { graph, dual, out } => run_certify(&graph, dual.as_deref(), out),
        Command::Realize { graph, from_solver, out } => run_realize(&graph, from_solver, out),
        Command::Probe { graph, steps, t_min, t_max, out, random_family, trials, seed } => {
            let ProbeFormat::Csv = out;
            run_probe(&graph, steps, t_min, t_max, random_family, trials, seed)
        }
    }
}

fn load_graph(spec: &str) -> CliResult<ExclusivityGraph> {
    if let Some(rest) = spec.strip_prefix("cycle:") {
        let n: usize = rest
            .parse()
            .map_err(|_| usage(format!("graph spec {spec:?}: cycle size {rest:?} is not an integer")))?;
        ExclusivityGraph::cycle(n).map_err(|e| usage(e.to_string()))
    } else {
        let text = fs::read_to_string(spec)
            .map_err(|e| usage(format!("cannot read graph file {spec:?}: {e}")))?;
        ExclusivityGraph::from_json_str(&text).map_err(|e| usage(format!("graph file {spec:?}: {e}")))
    }
}

#[derive(Serialize)]
struct ThetaReport {
    schema: u32,
    graph: String,
    objective: f64,
    converged: bool,
    iterations: usize,
    primal_residual: f64,
    cone_residual: f64,
    x: Vec<Vec<f64>>,
}

fn run_theta(spec: &str, tol: f64, max_iter: usize, out: OutFormat) -> CliResult<u8> {
    let graph = load_graph(spec)?;
    let solution = solve(
        &build_problem(graph),
        &SolveOptions { tol, max_iter, initial: None },
    );
    let dim = solution.x.dim();
    let report = ThetaReport {
        schema: REPORT_SCHEMA,
        graph: spec.to_string(),
        objective: solution.objective,
        converged: solution.converged,
        iterations: solution.iterations,
        primal_residual: solution.primal_residual,
        cone_residual: solution.cone_residual,
        x: (0..dim).map(|i| (0..dim).map(|j| solution.x.get(i, j)).collect()).collect(),
    };
    match out {
        OutFormat::Json => println!("{}", to_json(&report)),
        OutFormat::Text => {
            println!("graph: {spec}");
            println!("theta: {}", format_sig(report.objective, 7));
            println!("converged: {}", report.converged);
            println!("iterations: {}", report.iterations);
            println!("primal_residual: {}", format_sig(report.primal_residual, 7));
            println!("cone_residual: {}", format_sig(report.cone_residual, 7));
        }
    }
    Ok(if report.converged { 0 } else { 1 })
}

#[derive(Serialize)]
struct NcBoundReport {
    schema: u32,
    graph: String,
    nc_bound: f64,
}

fn run_nc_bound(spec: &str, max_n: usize, out: OutFormat) -> CliResult<u8> {
    let graph = load_graph(spec)?;
    let bound = graph
        .weighted_independence_number_with_limit(max_n)
        .map_err(|e| usage(e.to_string()))?;
    match out {
        OutFormat::Json => println!(
            "{}",
            to_json(&NcBoundReport { schema: REPORT_SCHEMA, graph: spec.to_string(), nc_bound: bound })
        ),
        OutFormat::Text => println!("{}", format_sig(bound, 7)),
    }
    Ok(0)
}

#[derive(Serialize)]
struct UnsupportedReport {
    schema: u32,
    graph: String,
    verdict: &'static str,
    reason: String,
}

fn run_certify(spec: &str, dual_path: Option<&std::path::Path>, out: OutFormat) -> CliResult<u8> {
    let graph = load_graph(spec)?;
    let supplied = match dual_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read dual file {}: {e}", path.display())))?;
            Some(
                DualCertificate::from_json_str(&text, &graph)
                    .map_err(|e| usage(format!("dual file {}: {e}", path.display())))?,
            )
        }
        None => None,
    };
    let mut report = match certify_self_test(&graph, supplied, &SolveOptions::default()) {
        Ok(report) => report,
        Err(Error::UnsupportedWithoutCertificate) => {
            let unsupported = UnsupportedReport {
                schema: REPORT_SCHEMA,
                graph: spec.to_string(),
                verdict: "UNSUPPORTED",
                reason: Error::UnsupportedWithoutCertificate.to_string(),
            };
            match out {
                OutFormat::Json => println!("{}", to_json(&unsupported)),
                OutFormat::Text => {
                    println!("graph: {spec}");
                    println!("verdict: UNSUPPORTED ({})", unsupported.reason);
                }
            }
            return Ok(1);
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    report.graph = spec.to_string();
    match out {
        OutFormat::Json => println!("{}", to_json(&report)),
        OutFormat::Text => println!("{}", render_certification(&report)),
    }
    Ok(if report.verdict == Verdict::RobustSelfTest { 0 } else { 1 })
}

fn render_certification(report: &CertificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph: {}", report.graph);
    let _ = writeln!(s, "theta: {}", format_sig(report.theta, 7));
    let _ = writeln!(s, "nc_bound: {}", format_sig(report.nc_bound, 7));
    let _ = writeln!(s, "quantum_advantage: {}", format_sig(report.quantum_advantage, 7));
    let _ = writeln!(
        s,
        "solver: converged={} iterations={} residuals=({}, {})",
        report.solver.converged,
        report.solver.iterations,
        format_sig(report.solver.primal_residual, 7),
        format_sig(report.solver.cone_residual, 7)
    );
    if let Some(dual) = &report.dual {
        let _ = writeln!(s, "dual_value: {}", format_sig(dual.t, 7));
        let _ = writeln!(s, "dual_min_eigenvalue: {}", format_sig(dual.min_eigenvalue, 7));
        if let Some(c) = dual.complementarity {
            let _ = writeln!(s, "complementarity: {}", format_sig(c, 7));
        }
    }
    if let Some(nd) = &report.nondegeneracy {
        let _ = writeln!(
            s,
            "nondegeneracy: {} (rank {} of {} parameters, nullity {})",
            if nd.passed { "passed" } else { "failed" },
            nd.constraint_matrix_rank,
            nd.free_parameter_count,
            nd.nullspace_dim
        );
    }
    if let Some(r) = &report.realization {
        let behavior: Vec<String> =
            r.behavior.iter().map(|p| format_sig(*p, 7)).collect();
        let _ = writeln!(s, "realization: dimension={} behavior=[{}]", r.dimension, behavior.join(", "));
    }
    let verdict = match report.verdict {
        Verdict::RobustSelfTest => "ROBUST_SELF_TEST".to_string(),
        Verdict::Failed(stage) => format!("FAILED({})", stage_name(stage)),
        Verdict::Unsupported => "UNSUPPORTED".to_string(),
    };
    let _ = write!(s, "verdict: {verdict}");
    s
}

fn stage_name(stage: thetacert_core::Stage) -> &'static str {
    use thetacert_core::Stage;
    match stage {
        Stage::Solve => "solve",
        Stage::DualFeasibility => "dual_feasibility",
        Stage::Complementarity => "complementarity",
        Stage::Nondegeneracy => "nondegeneracy",
        Stage::Overlap => "overlap",
    }
}

fn run_realize(spec: &str, from_solver: bool, out: OutFormat) -> CliResult<u8> {
    let graph = load_graph(spec)?;
    let realization: QuantumRealization = if from_solver {
        let solution = solve_converged(&graph)?;
        realization_from_gram(&solution.x, &graph).map_err(|e| usage(e.to_string()))?
    } else {
        if !(graph.is_canonical_cycle() && graph.n() % 2 == 1 && graph.n() >= 5
            && graph.has_unit_weights())
        {
            return Err(usage(
                "closed-form realization exists only for odd cycles (--graph cycle:<odd n>); \
                 use --from-solver for other graphs",
            ));
        }
        canonical_kcbs(graph.n()).map_err(|e| usage(e.to_string()))?
    };
    match out {
        OutFormat::Json => println!("{}", to_json(&realization.to_json())),
        OutFormat::Text => {
            println!("graph: {spec}");
            println!("dimension: {}", realization.dimension);
            let behavior = behavior_of(&realization);
            let rendered: Vec<String> =
                behavior.probabilities.iter().map(|p| format_sig(*p, 7)).collect();
            println!("behavior: [{}]", rendered.join(", "));
        }
    }
    Ok(0)
}

fn run_probe(
    spec: &str,
    steps: usize,
    t_min: f64,
    t_max: f64,
    random_family: bool,
    trials: usize,
    seed_flag: Option<u64>,
) -> CliResult<u8> {
    let graph = load_graph(spec)?;
    let solution = solve_converged(&graph)?;
    let probe: RobustnessProbe = if random_family {
        let seed = resolve_seed(seed_flag)?;
        random_perturbation_probe(&graph, &solution, trials, t_min, t_max, seed)
            .map_err(|e| usage(e.to_string()))?
    } else {
        suboptimality_distance_probe(&graph, &solution, steps, t_min, t_max)
            .map_err(|e| usage(e.to_string()))?
    };
    print!("{}", probe_csv(&probe));
    Ok(0)
}

fn probe_csv(probe: &RobustnessProbe) -> String {
    let mut s = String::from("t,epsilon,gram_distance,vector_distance,projector_distance\n");
    for r in &probe.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            float17(r.t),
            float17(r.epsilon),
            float17(r.gram_distance),
            float17(r.vector_distance),
            float17(r.projector_distance)
        );
    }
    s
}

fn solve_converged(graph: &ExclusivityGraph) -> CliResult<SdpSolution> {
    let solution = solve(&build_problem(graph.clone()), &SolveOptions::default());
    if !solution.converged {
        return Err(CliError::Failure(format!(
            "theta SDP did not converge within {} iterations (primal residual {})",
            solution.iterations,
            float17(solution.primal_residual)
        )));
    }
    Ok(solution)
}

/// Seed precedence: `--seed` flag, then `SELFTEST_SEED`, then the default.
fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("SELFTEST_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| usage(format!("SELFTEST_SEED={text:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
