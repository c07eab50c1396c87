use mcost_core::classify::{analytic_solution, classify};
use mcost_core::model::{extract_duals, solve_lrmc};
use mcost_core::scenario::representative;
use mcost_core::verify::cross_check;
use mcost_core::{ExactParams, Tolerances};
use num_traits::Zero;

#[test]
fn rational_solver_matches_closed_form_exactly() {
    for id in 1..=41u8 {
        let p: ExactParams = representative(id, 9).convert();
        let g = classify(&p).unwrap();
        assert_eq!(g.id, id);
        let a = analytic_solution(&p, &g).unwrap();
        let (_, first, d) = solve_lrmc(&p).unwrap();
        assert_eq!(first.objective, a.decision.total_cost(&p), "group {id}");
        assert_eq!(d.invest, a.decision.invest, "group {id}");
        assert_eq!(d.loadshed, a.decision.loadshed, "group {id}");
        let duals = extract_duals(&first).unwrap();
        assert_eq!(duals.lambda, a.lrmc, "group {id}");
        assert!(duals.max_violation(&p).is_zero());
    }
}

#[test]
fn rational_cross_check_has_no_disagreements() {
    let tol = Tolerances::default();
    for id in [1u8, 7, 12, 20, 26, 33, 41] {
        let p: ExactParams = representative(id, 10).convert();
        let r = cross_check(&p, &tol).unwrap();
        assert!(r.pass(), "group {id}: {:?}", r.disagreements);
        assert_eq!(r.lp_objective, r.dual_objective);
    }
}

#[test]
fn single_precision_route_classifies_like_double() {
    for id in 1..=41u8 {
        let p = representative(id, 11);
        let q: mcost_core::model::SystemParams<f32> = p.convert();
        assert_eq!(classify(&q).unwrap().id, id);
    }
}
