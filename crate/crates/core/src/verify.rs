//! Independent checks: complementary slackness, strong duality, and the
//! closed-form table against the LP.

use serde::Serialize;

use crate::classify::{analytic_solution, classify_with, AnalyticResult, ClassifyError, InstanceGroup};
use crate::lp::{dual_value_range, solve_lp, DualInterval};
use crate::model::{
    build_lrmc_dual, extract_duals, solve_lrmc, DualValues, ModelError, PrimalDecision,
    SystemParams, Tech,
};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlacknessTerm {
    pub label: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlacknessReport {
    /// Ten conditions pairing primal variables with dual constraints, then
    /// ten pairing dual variables with primal rows.
    pub terms: Vec<SlacknessTerm>,
    pub max_residual: f64,
    pub pass: bool,
}

/// `|x · s| / (1 + |x| · (1 + |k|))` with `k` the constant of the slack.
fn residual<T: Scalar>(x: &T, slack: &T, k: &T) -> f64 {
    let num = (x.clone() * slack.clone()).abs().to_f64_lossy();
    let den = 1.0 + x.abs().to_f64_lossy() * (1.0 + k.abs().to_f64_lossy());
    num / den
}

pub fn check_complementary_slackness<T: Scalar>(
    decision: &PrimalDecision<T>,
    duals: &DualValues<T>,
    params: &SystemParams<T>,
    tol: &Tolerances,
) -> SlacknessReport {
    let mut terms = Vec::with_capacity(20);
    let mut push = |label: String, x: &T, slack: T, k: &T| {
        terms.push(SlacknessTerm {
            residual: residual(x, &slack, k),
            label,
        });
    };
    let (lambda, beta, gamma) = (&duals.lambda, &duals.beta, &duals.gamma);
    for g in Tech::ALL {
        let (gi, s) = (g.index(), g.symbol());
        let ci = &params.tech(g).invest_cost;
        let s1 = ci.clone() - (beta[gi][0].clone() + beta[gi][1].clone() - gamma[gi][0].clone());
        push(format!("I_{s}1"), decision.i(g, 0), s1, ci);
        let s2 = ci.clone() - (beta[gi][1].clone() - gamma[gi][1].clone());
        push(format!("I_{s}2"), decision.i(g, 1), s2, ci);
    }
    for g in Tech::ALL {
        let (gi, s) = (g.index(), g.symbol());
        let cp = &params.tech(g).operating_cost;
        for t in 0..2 {
            let slack = cp.clone() - (lambda[t].clone() - beta[gi][t].clone());
            push(format!("P_{s}{}", t + 1), decision.p(g, t), slack, cp);
        }
    }
    let cl = &params.loadshed_cost;
    for t in 0..2 {
        push(
            format!("L{}", t + 1),
            &decision.loadshed[t],
            cl.clone() - lambda[t].clone(),
            cl,
        );
    }
    for t in 0..2 {
        let d = &params.demand[t];
        let flow = decision.production[0][t].clone() + decision.production[1][t].clone()
            + decision.loadshed[t].clone();
        push(format!("lambda_{}", t + 1), &lambda[t], flow - d.clone(), d);
    }
    for g in Tech::ALL {
        let (gi, s) = (g.index(), g.symbol());
        for t in 0..2 {
            let cap = decision.capacity(g, t);
            let slack = cap.clone() - decision.p(g, t).clone();
            push(format!("beta_{s}{}", t + 1), &beta[gi][t], slack, &cap);
        }
    }
    for g in Tech::ALL {
        let (gi, s) = (g.index(), g.symbol());
        let m = &params.tech(g).max_capacity;
        for t in 0..2 {
            let slack = m.clone() - decision.i(g, t).clone();
            push(format!("gamma_{s}{}", t + 1), &gamma[gi][t], slack, m);
        }
    }
    let max_residual = terms.iter().map(|t| t.residual).fold(0.0, f64::max);
    SlacknessReport {
        terms,
        pass: max_residual <= tol.cs,
        max_residual,
    }
}

/// How the closed-form prices were compared with the LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PriceCheck {
    /// LP duals are unique; compared directly.
    Exact,
    /// LP duals are not unique; the closed form must lie in the dual interval.
    Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport<T> {
    pub group: InstanceGroup,
    pub analytic: AnalyticResult<T>,
    pub lp_decision: PrimalDecision<T>,
    pub lp_duals: DualValues<T>,
    pub lp_objective: T,
    pub dual_objective: T,
    /// Relative gap between the closed-form cost and the LP optimum.
    pub objective_gap: f64,
    /// Relative gap between the primal and dual LP optima.
    pub duality_gap: f64,
    /// Largest absolute difference in `I` and `L`.
    pub decision_diff: f64,
    /// Largest absolute difference in `λ` (exact mode only).
    pub lambda_diff: f64,
    pub price_check: PriceCheck,
    pub lambda_intervals: Option<[DualInterval<T>; 2]>,
    pub slackness: SlacknessReport,
    pub disagreements: Vec<String>,
}

impl<T> CrossCheckReport<T> {
    pub fn pass(&self) -> bool {
        self.disagreements.is_empty()
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn rel_gap<T: Scalar>(a: &T, b: &T) -> f64 {
    let (a, b) = (a.to_f64_lossy(), b.to_f64_lossy());
    (a - b).abs() / (1.0 + b.abs())
}

/// Runs the closed form and the LP on `params` and lists every disagreement.
pub fn cross_check<T: Scalar>(
    params: &SystemParams<T>,
    tol: &Tolerances,
) -> Result<CrossCheckReport<T>, VerifyError> {
    let group = classify_with(params, tol.bound)?;
    let analytic = analytic_solution(params, &group)?;
    let (lp, first, lp_decision) = solve_lrmc(params)?;
    let lp_duals = extract_duals(&first)?;
    let dual = solve_lp(&build_lrmc_dual(params)?).map_err(ModelError::from)?;
    if !dual.is_optimal() {
        return Err(ModelError::NotOptimal(dual.status).into());
    }
    let mut disagreements = Vec::new();

    let objective_gap = rel_gap(&analytic.decision.total_cost(params), &first.objective);
    if objective_gap > tol.gap {
        disagreements.push(format!("objective gap {objective_gap:e}"));
    }
    let duality_gap = rel_gap(&dual.objective, &first.objective);
    if duality_gap > tol.gap {
        disagreements.push(format!("duality gap {duality_gap:e}"));
    }
    let violation = analytic.decision.max_violation(params).to_f64_lossy();
    let scale = 1.0 + params.demand.iter().map(|d| d.to_f64_lossy()).fold(0.0, f64::max);
    if violation > tol.feas * scale {
        disagreements.push(format!("closed-form decision infeasible by {violation:e}"));
    }

    let mut decision_diff = 0.0f64;
    let a = analytic.decision.to_vec();
    let b = lp_decision.to_vec();
    for k in (0..4).chain(8..10) {
        decision_diff = decision_diff.max((a[k].to_f64_lossy() - b[k].to_f64_lossy()).abs());
    }
    if !group.boundary && decision_diff > tol.price * scale {
        disagreements.push(format!("decision differs by {decision_diff:e}"));
    }

    let zero_basic = first
        .basis
        .iter()
        .any(|(_, v)| v.abs() <= T::tol(tol.deg) * T::from_f64_lossy(scale));
    let intervals = if zero_basic || group.boundary {
        let i0 = dual_value_range(&lp, 0).map_err(ModelError::from)?;
        let i1 = dual_value_range(&lp, 1).map_err(ModelError::from)?;
        Some([i0, i1])
    } else {
        None
    };
    let unique = !group.boundary
        && intervals
            .as_ref()
            .is_none_or(|iv| iv.iter().all(|i| i.is_point(tol.price)));
    let mut lambda_diff = 0.0f64;
    let price_check = if unique {
        for t in 0..2 {
            let d = (analytic.lrmc[t].to_f64_lossy() - lp_duals.lambda[t].to_f64_lossy()).abs();
            lambda_diff = lambda_diff.max(d);
        }
        if lambda_diff > tol.price {
            disagreements.push(format!("lambda differs by {lambda_diff:e}"));
        }
        PriceCheck::Exact
    } else {
        if let Some(iv) = &intervals {
            for t in 0..2 {
                if !iv[t].contains(&analytic.lrmc[t], tol.price) {
                    disagreements.push(format!("lambda_{} outside dual interval", t + 1));
                }
            }
        }
        PriceCheck::Interval
    };

    let slackness = check_complementary_slackness(&lp_decision, &lp_duals, params, tol);
    if !slackness.pass {
        disagreements.push(format!("slackness residual {:e}", slackness.max_residual));
    }

    Ok(CrossCheckReport {
        group,
        analytic,
        lp_decision,
        lp_duals,
        lp_objective: first.objective,
        dual_objective: dual.objective,
        objective_gap,
        duality_gap,
        decision_diff,
        lambda_diff,
        price_check,
        lambda_intervals: intervals,
        slackness,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PrimalDecision;

    fn canonical(cl: f64, d1: f64, d2: f64) -> SystemParams<f64> {
        SystemParams::new(60.0, 1.0, 3000.0, 82.0, 20.0, 4000.0, cl, d1, d2)
    }

    #[test]
    fn solver_output_satisfies_slackness() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let (_, sol, d) = solve_lrmc(&p).unwrap();
        let y = extract_duals(&sol).unwrap();
        let r = check_complementary_slackness(&d, &y, &p, &Tolerances::default());
        assert_eq!(r.terms.len(), 20);
        assert!(r.max_residual <= 1e-8);
        assert!(r.pass);
    }

    #[test]
    fn zero_everything_is_slack() {
        let p = canonical(80.0, 0.0, 0.0);
        let r = check_complementary_slackness(
            &PrimalDecision::zero(),
            &DualValues::zero(),
            &p,
            &Tolerances::default(),
        );
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn corrupted_dual_fails() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let (_, sol, d) = solve_lrmc(&p).unwrap();
        let mut y = extract_duals(&sol).unwrap();
        y.lambda[0] += 1.0;
        let r = check_complementary_slackness(&d, &y, &p, &Tolerances::default());
        assert!(!r.pass);
        let worst = r
            .terms
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .unwrap();
        assert_eq!(worst.label, "P_r1");
    }

    #[test]
    fn canonical_group_six_passes() {
        let r = cross_check(&canonical(200.0, 2000.0, 8000.0), &Tolerances::default()).unwrap();
        assert_eq!(r.group.id, 6);
        assert!(r.pass(), "{:?}", r.disagreements);
        assert_eq!(r.price_check, PriceCheck::Exact);
    }

    #[test]
    fn boundary_downgrades_to_interval() {
        let r = cross_check(&canonical(200.0, 2000.0, 6000.0), &Tolerances::default()).unwrap();
        assert!(r.group.boundary);
        assert_eq!(r.price_check, PriceCheck::Interval);
        assert!(r.pass(), "{:?}", r.disagreements);
    }

    #[test]
    fn full_shed_objective() {
        let p = canonical(20.0, 2000.0, 4000.0);
        let r = cross_check(&p, &Tolerances::default()).unwrap();
        assert_eq!(r.group.id, 1);
        assert_eq!(r.lp_objective, 20.0 * 6000.0);
        assert_eq!(r.analytic.decision.total_cost(&p), 20.0 * 6000.0);
    }
}
