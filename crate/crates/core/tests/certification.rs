//! Cross-module integration: the full certification chain through the
//! public API, plus sandwich bounds tying the SDP value to the
//! combinatorial bound on random graphs.

use proptest::prelude::*;

use thetacert_core::certify::{certify_self_test, Verdict};
use thetacert_core::theta::{build_problem, check_bounded_feasibility, solve_default, SolveOptions};
use thetacert_core::{
    align, build_cycle_dual, canonical_kcbs, gram_of_realization, realization_from_gram,
    verify_complementarity, ExclusivityGraph,
};

#[test]
fn certification_chain_on_c7() {
    let graph = ExclusivityGraph::cycle(7).unwrap();
    let report = certify_self_test(&graph, None, &SolveOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::RobustSelfTest);

    // Solver optimum, closed-form optimum, and canonical realization all
    // describe the same object.
    let sol = solve_default(&build_problem(graph.clone()));
    let canonical = canonical_kcbs(7).unwrap();
    let x_canonical = gram_of_realization(&canonical);
    assert!(sol.x.distance(&x_canonical) <= 1e-5);

    let cert = build_cycle_dual(7).unwrap();
    assert!(verify_complementarity(&x_canonical, &cert).abs() <= 1e-9);

    let recovered = realization_from_gram(&sol.x, &graph).unwrap();
    let (_, deviation) = align(&canonical, &recovered).unwrap();
    assert!(deviation <= 1e-4, "projector deviation {deviation}");
}

#[test]
fn certified_gram_agreement_forces_alignment() {
    // Two realizations with machine-equal Gram matrices align to machine
    // precision (the self-test statement at exact optimality).
    let a = canonical_kcbs(9).unwrap();
    let graph = ExclusivityGraph::cycle(9).unwrap();
    let b = realization_from_gram(&gram_of_realization(&a), &graph).unwrap();
    assert!(gram_of_realization(&b).distance(&gram_of_realization(&a)) <= 1e-10);
    let (_, deviation) = align(&a, &b).unwrap();
    assert!(deviation <= 1e-8, "projector deviation {deviation}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn theta_between_alpha_and_total_weight(
        n in 2usize..=6,
        edge_bits in proptest::collection::vec(proptest::bool::ANY, 15),
    ) {
        let mut edges = Vec::new();
        let mut idx = 0;
        for i in 1..=n {
            for j in (i + 1)..=n {
                if edge_bits[idx % edge_bits.len()] {
                    edges.push((i, j));
                }
                idx += 1;
            }
        }
        let graph = ExclusivityGraph::unweighted(n, &edges).unwrap();
        let alpha = graph.weighted_independence_number().unwrap();
        let sol = solve_default(&build_problem(graph));
        prop_assert!(sol.converged);
        prop_assert!(check_bounded_feasibility(&sol.x, 1e-8));
        prop_assert!(sol.objective >= alpha - 1e-6);
        prop_assert!(sol.objective <= n as f64 + 1e-6);
    }
}
