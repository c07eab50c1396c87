use mcost_core::lp::solve_lp;
use mcost_core::model::{
    build_lrmc_dual, build_lrmc_primal, build_srmc_primal, extract_duals, extract_duals_from_dual_lp,
    solve_lrmc, SystemParams,
};
use mcost_core::scenario::ScenarioGenerator;
use mcost_core::Tolerances;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

#[test]
fn params_round_trip_through_arrays() {
    for p in ScenarioGenerator::new(11).take(1000) {
        assert_eq!(SystemParams::from_array(p.to_array()), p);
        assert_eq!(p.mirrored().mirrored(), p);
    }
}

#[test]
fn primal_and_dual_models_agree() {
    let tol = Tolerances::default();
    for p in ScenarioGenerator::new(12).take(300) {
        let (_, first, _) = solve_lrmc(&p).unwrap();
        let dual = solve_lp(&build_lrmc_dual(&p).unwrap()).unwrap();
        assert!(rel(first.objective, dual.objective) <= tol.gap, "{p:?}");
        let from_primal = extract_duals(&first).unwrap();
        let from_dual = extract_duals_from_dual_lp(&dual).unwrap();
        assert!(from_primal.max_violation(&p) <= tol.feas * (1.0 + p.loadshed_cost));
        assert!(from_dual.max_violation(&p) <= tol.feas * (1.0 + p.loadshed_cost));
        assert!(rel(from_dual.objective(&p), first.objective) <= tol.gap);
    }
}

#[test]
fn short_run_at_optimal_investment_matches_long_run() {
    let tol = Tolerances::default();
    for p in ScenarioGenerator::new(13).take(300) {
        let (_, first, decision) = solve_lrmc(&p).unwrap();
        let short = solve_lp(&build_srmc_primal(&p, &decision.invest, 0.0).unwrap()).unwrap();
        assert!(rel(short.objective, first.objective) <= tol.gap, "{p:?}");
        assert!(rel(decision.total_cost(&p), first.objective) <= tol.gap);
        assert!(decision.is_feasible(&p, &tol));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cost_is_monotone_in_demand(seed in any::<u64>(), t in 0usize..2, bump in 0.0f64..2000.0) {
        let p = ScenarioGenerator::new(seed).next_params();
        let mut q = p.clone();
        q.demand[t] += bump;
        let base = solve_lp(&build_lrmc_primal(&p).unwrap()).unwrap().objective;
        let more = solve_lp(&build_lrmc_primal(&q).unwrap()).unwrap().objective;
        prop_assert!(more >= base - 1e-8 * (1.0 + base));
    }

    #[test]
    fn lrmc_duals_within_cost_bounds(seed in any::<u64>()) {
        let p = ScenarioGenerator::new(seed).next_params();
        let (_, first, _) = solve_lrmc(&p).unwrap();
        let d = extract_duals(&first).unwrap();
        let floor = p.renewable.operating_cost.min(p.loadshed_cost);
        for t in 0..2 {
            prop_assert!(d.lambda[t] >= floor - 1e-7);
            prop_assert!(d.lambda[t] <= p.loadshed_cost + 1e-7);
        }
    }
}
