//! Short-run marginal costs with fixed investments.
//!
//! With capacities fixed at the long-run optimum, capacity rows usually bind
//! with zero slack and the flow-balance duals become an interval. Relaxing
//! every capacity row by a small `ε` picks the lower endpoint.

use serde::Serialize;
use thiserror::Error;

use crate::classify::marginal_techs;
use crate::lp::{dual_value_range, solve_lp, DualInterval, LpError};
use crate::model::{
    build_lrmc_primal, build_srmc_primal, extract_srmc_decision, Investments, ModelError,
    SystemParams, Tech,
};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DegeneracyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("fixed investments are not optimal: cost {fixed} vs optimum {optimum}")]
    NotOptimalInvestment { fixed: f64, optimum: f64 },
    #[error("operating cost {cp} exceeds loadshed cost {cl}")]
    CostOrder { cp: f64, cl: f64 },
    #[error("LRMC {lrmc} outside [{cp}, {cl}]")]
    OutOfRange { lrmc: f64, cp: f64, cl: f64 },
}

/// Which of the three LRMC to SRMC rules applies in a period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SrmcRule {
    /// LRMC equals `CL`; SRMC stays at `CL`.
    Loadshed,
    /// LRMC equals the marginal operating cost; SRMC equals it too.
    OperatingCost,
    /// LRMC strictly between the two; SRMC drops to the operating cost.
    Interior,
}

impl SrmcRule {
    pub fn label(self) -> &'static str {
        match self {
            SrmcRule::Loadshed => "rule-CL",
            SrmcRule::OperatingCost => "rule-CP",
            SrmcRule::Interior => "rule-interior",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SrmcResult<T> {
    /// Flow-balance dual intervals of the unperturbed model.
    pub intervals: [DualInterval<T>; 2],
    /// Flow-balance duals of the perturbed model.
    pub resolved: [T; 2],
    pub epsilon: T,
    pub lrmc: [T; 2],
    pub marginal: [Option<Tech>; 2],
    pub rules: [SrmcRule; 2],
    pub degenerate: [bool; 2],
}

/// `1e-6 · max(D1, D2, 1)`.
pub fn default_epsilon<T: Scalar>(params: &SystemParams<T>) -> T {
    let top = T::max_of(
        T::one(),
        T::max_of(params.demand[0].clone(), params.demand[1].clone()),
    );
    top / T::from_i64_exact(1_000_000)
}

/// SRMC implied by an LRMC value under the three rules.
pub fn predict_srmc_from_lrmc<T: Scalar>(
    lrmc: &T,
    marginal_cp: &T,
    cl: &T,
    tol: f64,
) -> Result<T, DegeneracyError> {
    if marginal_cp > cl {
        return Err(DegeneracyError::CostOrder {
            cp: marginal_cp.to_f64_lossy(),
            cl: cl.to_f64_lossy(),
        });
    }
    let near = |a: &T, b: &T| (a.clone() - b.clone()).abs() <= T::tol(tol) * (T::one() + b.abs());
    if near(lrmc, cl) {
        Ok(cl.clone())
    } else if near(lrmc, marginal_cp) || (lrmc > marginal_cp && lrmc < cl) {
        Ok(marginal_cp.clone())
    } else {
        Err(DegeneracyError::OutOfRange {
            lrmc: lrmc.to_f64_lossy(),
            cp: marginal_cp.to_f64_lossy(),
            cl: cl.to_f64_lossy(),
        })
    }
}

/// Rule that maps `lrmc` to its SRMC.
pub fn classify_rule<T: Scalar>(lrmc: &T, marginal_cp: Option<&T>, cl: &T, tol: f64) -> SrmcRule {
    let near = |a: &T, b: &T| (a.clone() - b.clone()).abs() <= T::tol(tol) * (T::one() + b.abs());
    if near(lrmc, cl) {
        SrmcRule::Loadshed
    } else if marginal_cp.is_some_and(|cp| near(lrmc, cp)) {
        SrmcRule::OperatingCost
    } else {
        SrmcRule::Interior
    }
}

pub fn compute_srmc<T: Scalar>(
    params: &SystemParams<T>,
    istar: &Investments<T>,
) -> Result<SrmcResult<T>, DegeneracyError> {
    compute_srmc_with(params, istar, default_epsilon(params), &Tolerances::default())
}

/// Unperturbed dual intervals plus the duals of the model relaxed by `epsilon`.
pub fn compute_srmc_with<T: Scalar>(
    params: &SystemParams<T>,
    istar: &Investments<T>,
    epsilon: T,
    tol: &Tolerances,
) -> Result<SrmcResult<T>, DegeneracyError> {
    let long_run = solve_lp(&build_lrmc_primal(params)?)?;
    if !long_run.is_optimal() {
        return Err(ModelError::NotOptimal(long_run.status).into());
    }
    let exact = build_srmc_primal(params, istar, T::zero())?;
    let short_run = solve_lp(&exact)?;
    let fixed_cost = if short_run.is_optimal() {
        short_run.objective.clone()
    } else {
        return Err(ModelError::NotOptimal(short_run.status).into());
    };
    let gap = (fixed_cost.clone() - long_run.objective.clone()).abs();
    if gap > T::tol(tol.gap) * (T::one() + long_run.objective.abs()) {
        return Err(DegeneracyError::NotOptimalInvestment {
            fixed: fixed_cost.to_f64_lossy(),
            optimum: long_run.objective.to_f64_lossy(),
        });
    }
    let intervals = [dual_value_range(&exact, 0)?, dual_value_range(&exact, 1)?];
    let perturbed = solve_lp(&build_srmc_primal(params, istar, epsilon.clone())?)?;
    if !perturbed.is_optimal() {
        return Err(ModelError::NotOptimal(perturbed.status).into());
    }
    let resolved = [perturbed.duals[0].clone(), perturbed.duals[1].clone()];
    let decision = extract_srmc_decision(&short_run, istar)?;
    let marginal = marginal_techs(&decision, tol.feas);
    let lrmc = [long_run.duals[0].clone(), long_run.duals[1].clone()];
    let cl = &params.loadshed_cost;
    let rules = std::array::from_fn(|t| {
        let cp = marginal[t].map(|g| &params.tech(g).operating_cost);
        classify_rule(&lrmc[t], cp, cl, tol.price)
    });
    let degenerate = std::array::from_fn(|t| !intervals[t].is_point(tol.price));
    Ok(SrmcResult {
        intervals,
        resolved,
        epsilon,
        lrmc,
        marginal,
        rules,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::detect_degeneracy;
    use crate::model::solve_lrmc;

    fn canonical(cl: f64, d1: f64, d2: f64) -> SystemParams<f64> {
        SystemParams::new(60.0, 1.0, 3000.0, 82.0, 20.0, 4000.0, cl, d1, d2)
    }

    #[test]
    fn rule_predictions() {
        assert_eq!(predict_srmc_from_lrmc(&61.0, &1.0, &80.0, 1e-9).unwrap(), 1.0);
        assert_eq!(predict_srmc_from_lrmc(&80.0, &1.0, &80.0, 1e-9).unwrap(), 80.0);
        assert_eq!(predict_srmc_from_lrmc(&1.0, &1.0, &80.0, 1e-9).unwrap(), 1.0);
        assert!(matches!(
            predict_srmc_from_lrmc(&90.0, &1.0, &80.0, 1e-9),
            Err(DegeneracyError::OutOfRange { .. })
        ));
        assert!(matches!(
            predict_srmc_from_lrmc(&0.5, &1.0, &80.0, 1e-9),
            Err(DegeneracyError::OutOfRange { .. })
        ));
        assert!(matches!(
            predict_srmc_from_lrmc(&5.0, &90.0, &80.0, 1e-9),
            Err(DegeneracyError::CostOrder { .. })
        ));
    }

    #[test]
    fn group_three_interval_and_resolution() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let (_, _, d) = solve_lrmc(&p).unwrap();
        let s = compute_srmc(&p, &d.invest).unwrap();
        assert!((s.intervals[0].lo.unwrap() - 1.0).abs() < 1e-9);
        assert!((s.intervals[0].hi.unwrap() - 80.0).abs() < 1e-9);
        assert!((s.resolved[0] - 1.0).abs() < 1e-9);
        assert!((s.resolved[1] - 1.0).abs() < 1e-9);
        assert_eq!(s.rules, [SrmcRule::OperatingCost, SrmcRule::Interior]);
        assert_eq!(s.degenerate, [true, true]);
    }

    #[test]
    fn group_three_short_run_is_primal_degenerate() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let (_, _, d) = solve_lrmc(&p).unwrap();
        let lp = build_srmc_primal(&p, &d.invest, 0.0).unwrap();
        let sol = solve_lp(&lp).unwrap();
        let rep = detect_degeneracy(&lp, &sol, &Tolerances::default()).unwrap();
        assert!(rep.primal_degenerate);
        assert!(rep.dual_multiple[0]);
    }

    #[test]
    fn full_shed_is_not_degenerate() {
        let p = canonical(20.0, 2000.0, 4000.0);
        let (_, _, d) = solve_lrmc(&p).unwrap();
        let s = compute_srmc(&p, &d.invest).unwrap();
        assert_eq!(s.resolved, [20.0, 20.0]);
        assert_eq!(s.rules, [SrmcRule::Loadshed; 2]);
        assert_eq!(s.degenerate, [false, false]);
    }

    #[test]
    fn group_27_keeps_loadshed_price() {
        let p = canonical(80.0, 4000.0, 2000.0);
        let (_, _, d) = solve_lrmc(&p).unwrap();
        let s = compute_srmc(&p, &d.invest).unwrap();
        assert!((s.resolved[0] - 80.0).abs() < 1e-9);
        assert!((s.resolved[1] - 1.0).abs() < 1e-9);
        assert!(!s.degenerate[0]);
    }

    #[test]
    fn suboptimal_investment_rejected() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let too_much = [[3000.0, 3000.0], [0.0, 0.0]];
        assert!(matches!(
            compute_srmc(&p, &too_much),
            Err(DegeneracyError::NotOptimalInvestment { .. })
        ));
    }

    #[test]
    fn epsilon_scales_with_demand() {
        assert_eq!(default_epsilon(&canonical(80.0, 2000.0, 4000.0)), 4e-3);
        assert_eq!(default_epsilon(&canonical(80.0, 0.0, 0.5)), 1e-6);
    }
}
