//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned in the assertions below; no criterion defers
//! to later calibration.

use std::io::Write as _;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thetacert_core::certificate::{
    build_cycle_dual, check_nondegeneracy, verify_complementarity, NONDEG_RANK_TOL,
};
use thetacert_core::linalg::{dot, eigh, psd_project, Mat, SymMatrix};
use thetacert_core::robustness::{
    fit_scaling_exponent, gram_closeness_bound, normalization_bound_check,
    projector_bound_check, suboptimality_distance_probe, DistanceKind,
};
use thetacert_core::theta::{
    affine_project, build_problem, cycle_theta_closed_form, solve, solve_default,
    strict_feasible_point, SdpSolution, SolveOptions,
};
use thetacert_core::{
    behavior_of, canonical_kcbs, gram_of_realization, schur_complement, ExclusivityGraph,
};

fn solve_cycle(n: usize) -> SdpSolution {
    let sol = solve_default(&build_problem(ExclusivityGraph::cycle(n).unwrap()));
    assert!(sol.converged, "solver did not converge on C_{n}");
    sol
}

fn pass(line: &str) {
    println!("ACCEPTANCE PASS {line}");
}

#[test]
fn criterion_01_theta_c5_equals_sqrt5() {
    let start = Instant::now();
    let sol = solve_cycle(5);
    let err = (sol.objective - 5f64.sqrt()).abs();
    assert!(err <= 1e-6, "theta(C_5) error {err}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(&format!(
        "criterion 1: theta(C_5) = {:.7} within 1e-6 of sqrt(5) in {elapsed:?}",
        sol.objective
    ));
}

#[test]
fn criterion_02_cycle_family_closed_forms() {
    let start = Instant::now();
    for n in [5usize, 7, 9, 11, 13] {
        let sol = solve_cycle(n);
        let closed = cycle_theta_closed_form(n).unwrap();
        let err = (sol.objective - closed).abs();
        assert!(err <= 1e-6, "theta(C_{n}) error {err}");
        let bound = ExclusivityGraph::cycle(n)
            .unwrap()
            .weighted_independence_number()
            .unwrap();
        assert_eq!(bound, ((n - 1) / 2) as f64, "nc bound for C_{n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    pass(&format!(
        "criterion 2: theta and nc-bound verified for n in 5..13 in {elapsed:?}"
    ));
}

#[test]
fn criterion_03_dual_certificate_structure() {
    // Entry-wise match of Z_5 against the explicit display.
    let sqrt5 = 5f64.sqrt();
    let c = (5.0 - sqrt5) / (2.0 * sqrt5);
    assert!((c - 0.6180340).abs() < 1e-7);
    #[rustfmt::skip]
    let expected: [[f64; 6]; 6] = [
        [sqrt5, -1.0, -1.0, -1.0, -1.0, -1.0],
        [-1.0,  1.0,    c,  0.0,  0.0,    c],
        [-1.0,    c,  1.0,    c,  0.0,  0.0],
        [-1.0,  0.0,    c,  1.0,    c,  0.0],
        [-1.0,  0.0,  0.0,    c,  1.0,    c],
        [-1.0,    c,  0.0,  0.0,    c,  1.0],
    ];
    let z5 = build_cycle_dual(5).unwrap().z;
    for (i, row) in expected.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            assert!(
                (z5.get(i, j) - want).abs() <= 1e-12,
                "Z_5[{i}][{j}] = {} expected {want}",
                z5.get(i, j)
            );
        }
    }

    for n in (5..=15).step_by(2) {
        let cert = build_cycle_dual(n).unwrap();
        let min_eig = eigh(&cert.z).min_eigenvalue();
        assert!(
            (-1e-9..=1e-9).contains(&min_eig),
            "min eigenvalue of Z_{n} is {min_eig}"
        );

        let analytic = thetacert_core::cycle_block_eigenvalues(n).unwrap();
        let mut numeric = eigh(&schur_complement(&cert.z).unwrap()).eigenvalues;
        numeric.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in analytic.iter().zip(&numeric) {
            assert!((a - b).abs() <= 1e-9, "Z_{n} block spectrum: {a} vs {b}");
        }
    }
    pass("criterion 3: Z_5 display match, Z_n singular PSD, analytic block spectrum");
}

#[test]
fn criterion_04_complementarity() {
    for n in [5usize, 7, 9, 11, 13] {
        let sol = solve_cycle(n);
        let cert = build_cycle_dual(n).unwrap();
        let ip = verify_complementarity(&sol.x, &cert);
        assert!(ip.abs() <= 1e-8, "<X*, Z_{n}> = {ip}");
    }
    pass("criterion 4: <X*, Z_n> <= 1e-8 for odd n <= 13");
}

#[test]
fn criterion_05_nondegeneracy() {
    let c5 = ExclusivityGraph::cycle(5).unwrap();
    let cert5 = build_cycle_dual(5).unwrap();
    let verdict = check_nondegeneracy(&cert5, &c5, NONDEG_RANK_TOL).unwrap();
    assert_eq!(verdict.free_parameter_count, 10);
    assert_eq!(verdict.nullspace_dim, 0);
    assert!(verdict.passed);

    for n in [7usize, 9, 11, 13] {
        let g = ExclusivityGraph::cycle(n).unwrap();
        let cert = build_cycle_dual(n).unwrap();
        let v = check_nondegeneracy(&cert, &g, NONDEG_RANK_TOL).unwrap();
        assert_eq!(v.nullspace_dim, 0, "C_{n} nullity");
        assert!(v.passed);
    }

    let mut zeroed = build_cycle_dual(5).unwrap();
    zeroed.z = SymMatrix::zeros(6);
    let v = check_nondegeneracy(&zeroed, &c5, NONDEG_RANK_TOL).unwrap();
    assert_eq!(v.nullspace_dim, v.free_parameter_count);
    assert_eq!(v.nullspace_dim, 10);
    assert!(!v.passed);
    pass("criterion 5: nullity 0 for cycles 5..13 (10 parameters at n=5), zero dual fully null");
}

#[test]
fn criterion_06_canonical_realization() {
    for n in [5usize, 7, 9, 11, 13] {
        let g = ExclusivityGraph::cycle(n).unwrap();
        let r = canonical_kcbs(n).unwrap();
        let cos = (std::f64::consts::PI / n as f64).cos();
        let p = cos / (1.0 + cos);
        for prob in behavior_of(&r).probabilities {
            assert!((prob - p).abs() <= 1e-12, "behavior entry for C_{n}");
        }
        for (i, j) in g.edges() {
            let overlap = dot(&r.vectors[i - 1], &r.vectors[j - 1]);
            assert!(overlap.abs() <= 1e-12, "adjacent overlap on C_{n}: {overlap}");
        }
    }

    let x5 = gram_of_realization(&canonical_kcbs(5).unwrap());
    let d = 1.0 / 5f64.sqrt();
    for i in 1..=5 {
        assert!((x5.get(i, i) - d).abs() <= 1e-12);
    }
    // Independent oracle for the distance-2 entries: the explicit inner
    // product p * (beta + (1 - beta) cos(2 pi / 5)) of the scaled canonical
    // vectors, against the closed form (5 - sqrt(5)) / 10.
    let beta = (std::f64::consts::PI / 5.0).cos() / (1.0 + (std::f64::consts::PI / 5.0).cos());
    let oracle = beta * (beta + (1.0 - beta) * (0.4 * std::f64::consts::PI).cos());
    let f_star = (5.0 - 5f64.sqrt()) / 10.0;
    assert!((oracle - f_star).abs() <= 1e-12);
    for (i, j) in ExclusivityGraph::cycle(5).unwrap().non_edge_pairs() {
        assert!((x5.get(i, j) - f_star).abs() <= 1e-12, "entry ({i},{j})");
        assert!((x5.get(i, j) - oracle).abs() <= 1e-12);
    }
    pass("criterion 6: canonical behavior, orthogonality, and Gram entries (d, f*) verified");
}

#[test]
fn criterion_07_uniqueness_from_random_starts() {
    let graph = ExclusivityGraph::cycle(5).unwrap();
    let problem = build_problem(graph);
    let interior = strict_feasible_point(5, 6.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut solutions: Vec<SymMatrix> = Vec::new();
    for trial in 0..20 {
        let noise = SymMatrix::from_fn(6, |_, _| rng.gen_range(-0.3..0.3));
        let mut start = interior.add(&noise);
        for _ in 0..50_000 {
            start = psd_project(&affine_project(&start, &problem));
            if affine_project(&start, &problem).distance(&start) <= 1e-9 {
                break;
            }
        }
        let sol = solve(
            &problem,
            &SolveOptions { initial: Some(start), ..SolveOptions::default() },
        );
        assert!(sol.converged, "trial {trial} did not converge");
        solutions.push(sol.x);
    }
    let mut max_spread = 0.0f64;
    for a in &solutions {
        for b in &solutions {
            max_spread = max_spread.max(a.distance(b));
        }
    }
    assert!(max_spread <= 1e-5, "solutions spread {max_spread}");
    pass(&format!(
        "criterion 7: 20 random-start solves agree within {max_spread:.2e} (<= 1e-5)"
    ));
}

#[test]
fn criterion_08_lemma_suites_thousand_trials() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    // Gram closeness: aligned decomposition vectors within sqrt(dim * eps).
    for trial in 0..1000 {
        let d = rng.gen_range(2..=12usize);
        let x = random_psd(&mut rng, d);
        let x2 = if rng.gen_bool(0.5) {
            let scale = 10f64.powf(rng.gen_range(-8.0..0.0));
            let mut noisy = x.clone();
            for i in 0..d {
                for j in i..d {
                    noisy.set_sym(i, j, noisy.get(i, j) + scale * rng.gen_range(-1.0..1.0));
                }
            }
            psd_project(&noisy)
        } else {
            random_psd(&mut rng, d)
        };
        let out = gram_closeness_bound(&x, &x2).unwrap();
        assert!(
            out.max_vector_distance <= out.bound + 1e-8,
            "trial {trial}: distance {} exceeds bound {}",
            out.max_vector_distance,
            out.bound
        );
    }

    // Normalization: ||a^ - b^|| <= 2 ||a - b|| / ||a|| under the hypothesis.
    for trial in 0..1000 {
        let d = rng.gen_range(1..=8usize);
        let a: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let norm_a = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm_a < 1e-3 {
            continue;
        }
        let mut dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dir_norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        let delta = rng.gen_range(0.0..0.5) * norm_a;
        for x in dir.iter_mut() {
            *x *= delta / dir_norm;
        }
        let b: Vec<f64> = a.iter().zip(&dir).map(|(x, y)| x + y).collect();
        let (lhs, rhs) = normalization_bound_check(&a, &b).unwrap();
        assert!(lhs <= rhs + 1e-8, "trial {trial}: {lhs} > {rhs}");
    }

    // Projectors: Frobenius distance within sqrt(2) of the vector distance.
    for trial in 0..1000 {
        let d = rng.gen_range(1..=8usize);
        let x = random_unit(&mut rng, d);
        let y = random_unit(&mut rng, d);
        let (lhs, rhs) = projector_bound_check(&x, &y).unwrap();
        assert!(lhs <= rhs + 1e-8, "trial {trial}: {lhs} > {rhs}");
    }
    pass("criterion 8: three bound suites, 1000 seeded trials each, zero violations");
}

fn random_psd(rng: &mut ChaCha8Rng, d: usize) -> SymMatrix {
    let r = rng.gen_range(1..=d);
    let mut b = Mat::zeros(d, r);
    for i in 0..d {
        for j in 0..r {
            b.set(i, j, rng.gen_range(-1.0..1.0));
        }
    }
    SymMatrix::from_fn(d, |i, j| dot(b.row(i), b.row(j)))
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

#[test]
fn criterion_09_robustness_probe_ratios() {
    let start = Instant::now();
    let graph = ExclusivityGraph::cycle(5).unwrap();
    let sol = solve_cycle(5);
    let probe = suboptimality_distance_probe(&graph, &sol, 20, 1e-6, 1e-1).unwrap();

    let mut gram_ratio_min = f64::INFINITY;
    let mut gram_ratio_max = 0.0f64;
    let mut proj_ratio_max = 0.0f64;
    for r in &probe.records {
        assert!(r.epsilon > 0.0);
        gram_ratio_min = gram_ratio_min.min(r.gram_distance / r.epsilon);
        gram_ratio_max = gram_ratio_max.max(r.gram_distance / r.epsilon);
        proj_ratio_max = proj_ratio_max.max(r.projector_distance / r.epsilon.sqrt());
    }
    assert!(gram_ratio_max.is_finite());
    assert!(
        gram_ratio_max / gram_ratio_min < 10.0,
        "gram/epsilon ratio varies {gram_ratio_min}..{gram_ratio_max}"
    );
    assert!(
        proj_ratio_max.is_finite() && proj_ratio_max < 10.0,
        "projector/sqrt(epsilon) ratio {proj_ratio_max}"
    );

    let (gram_exponent, _) = fit_scaling_exponent(&probe, DistanceKind::Gram).unwrap();
    assert!(
        (0.9..=1.1).contains(&gram_exponent),
        "gram exponent {gram_exponent}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(&format!(
        "criterion 9: gram/eps in [{gram_ratio_min:.3}, {gram_ratio_max:.3}], \
         proj/sqrt(eps) <= {proj_ratio_max:.3}, gram exponent {gram_exponent:.4} in {elapsed:?}"
    ));
}

#[test]
fn criterion_10_cli_pipeline() {
    for n in [5usize, 7] {
        let out = Command::new(env!("CARGO_BIN_EXE_thetacert"))
            .args(["certify", "--graph", &format!("cycle:{n}")])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "certify cycle:{n}");
        let v: serde_json::Value =
            serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
        assert_eq!(v["verdict"], "ROBUST_SELF_TEST", "cycle:{n}");
    }

    // Tampered dual: edge entries pushed to 0.9 (mu = 1.8) break positive
    // semidefiniteness, so certification must fail at dual feasibility.
    let mut dual = tempfile::NamedTempFile::new().unwrap();
    write!(
        dual,
        r#"{{"t": {}, "lambda": [2, 2, 2, 2, 2],
            "mu": {{"1,2": 1.8, "2,3": 1.8, "3,4": 1.8, "4,5": 1.8, "1,5": 1.8}}}}"#,
        5f64.sqrt()
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_thetacert"))
        .args(["certify", "--graph", "cycle:5", "--dual"])
        .arg(dual.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "tampered dual must fail");
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(v["verdict"]["FAILED"], "dual_feasibility");
    pass("criterion 10: certify passes on cycle:5 and cycle:7, tampered dual fails at dual feasibility with exit 1");
}
