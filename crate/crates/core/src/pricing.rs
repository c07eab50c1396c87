//! Price profiles, cost recovery and investment-cost allocation.

use serde::Serialize;
use thiserror::Error;

use crate::classify::{group_profile, used_options, GenOption};
use crate::model::{ModelError, PrimalDecision, SystemParams, Tech};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PricingError {
    #[error("unknown profile {0}")]
    UnknownProfile(u8),
    #[error("profile {0} needs a marginal technology")]
    MissingTech(u8),
    #[error("profile {profile} does not allow peak period {peak}")]
    Orientation { profile: u8, peak: usize },
    #[error("decision is infeasible (violation {0})")]
    InfeasibleDecision(f64),
    #[error(transparent)]
    Params(#[from] ModelError),
}

/// One of the seven LRMC price profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LrmcProfile {
    pub id: u8,
    /// Technology `g` of the formula, for profiles 2 to 5.
    pub tech: Option<Tech>,
}

impl LrmcProfile {
    pub fn new(id: u8, tech: Option<Tech>) -> Result<Self, PricingError> {
        match id {
            1 | 6 | 7 => Ok(Self { id, tech: None }),
            2..=5 => match tech {
                Some(_) => Ok(Self { id, tech }),
                None => Err(PricingError::MissingTech(id)),
            },
            _ => Err(PricingError::UnknownProfile(id)),
        }
    }

    pub fn of_group(group: u8) -> Self {
        let (id, tech) = group_profile(group);
        Self { id, tech }
    }

    /// Symbolic `(off-peak, peak)` formulas; for fixed-order profiles the
    /// pair is `(period 1, period 2)` instead.
    pub fn formula(&self) -> (&'static str, &'static str) {
        match self.id {
            1 => ("CL", "CL"),
            2 => ("CI_g+2CP_g-CL", "CL"),
            3 => ("CP_g", "CI_g+CP_g"),
            4 => ("CP_g", "CL"),
            5 => ("CL", "CI_g+CP_g"),
            6 => ("CP_r", "CI_f+CP_f"),
            _ => ("CI_f+2CP_f-(CI_r+CP_r)", "CI_r+CP_r"),
        }
    }

    /// True when the pair is written in period order rather than by role.
    pub fn fixed_order(&self) -> bool {
        matches!(self.id, 5 | 7)
    }

    fn g<'a, T: Scalar>(&self, params: &'a SystemParams<T>) -> Result<&'a crate::model::GeneratorTech<T>, PricingError> {
        self.tech
            .map(|t| params.tech(t))
            .ok_or(PricingError::MissingTech(self.id))
    }
}

fn check_peak(peak: usize) -> Result<(), PricingError> {
    if peak == 1 || peak == 2 {
        Ok(())
    } else {
        Err(PricingError::Orientation { profile: 0, peak })
    }
}

/// Places an `(off-peak, peak)` pair into period order.
fn by_role<T>(off: T, peak_price: T, peak: usize) -> [T; 2] {
    if peak == 2 {
        [off, peak_price]
    } else {
        [peak_price, off]
    }
}

/// LRMC pair `(λ1, λ2)` of `profile` evaluated on `params`.
pub fn profile_prices<T: Scalar>(
    profile: &LrmcProfile,
    params: &SystemParams<T>,
    peak: usize,
) -> Result<[T; 2], PricingError> {
    check_peak(peak)?;
    let cl = params.loadshed_cost.clone();
    let two = T::from_i64_exact(2);
    let (r, f) = (&params.renewable, &params.fossil);
    Ok(match profile.id {
        1 => [cl.clone(), cl],
        2 => {
            let g = profile.g(params)?;
            let off = g.invest_cost.clone() + two * g.operating_cost.clone() - cl.clone();
            by_role(off, cl, peak)
        }
        3 => {
            let g = profile.g(params)?;
            by_role(g.operating_cost.clone(), g.non_shared_cost(), peak)
        }
        4 => by_role(profile.g(params)?.operating_cost.clone(), cl, peak),
        5 => [cl, profile.g(params)?.non_shared_cost()],
        6 => by_role(r.operating_cost.clone(), f.non_shared_cost(), peak),
        7 => {
            if peak != 2 {
                return Err(PricingError::Orientation { profile: 7, peak });
            }
            let c = r.non_shared_cost();
            [f.invest_cost.clone() + two * f.operating_cost.clone() - c.clone(), c]
        }
        id => return Err(PricingError::UnknownProfile(id)),
    })
}

/// SRMC pair `(λ̇1, λ̇2)` associated with `profile`, and whether prices at
/// that level recover total cost.
///
/// The short-run price of a period is the operating cost of the most
/// expensive technology running in it, or `CL` where load is shed.
pub fn srmc_profile<T: Scalar>(
    profile: &LrmcProfile,
    params: &SystemParams<T>,
    peak: usize,
) -> Result<([T; 2], bool), PricingError> {
    check_peak(peak)?;
    let cl = params.loadshed_cost.clone();
    let cp_r = params.renewable.operating_cost.clone();
    let cp_f = params.fossil.operating_cost.clone();
    Ok(match profile.id {
        1 => ([cl.clone(), cl], true),
        2 => (by_role(profile.g(params)?.operating_cost.clone(), cl, peak), false),
        3 => {
            let cp = profile.g(params)?.operating_cost.clone();
            ([cp.clone(), cp], false)
        }
        4 => (by_role(profile.g(params)?.operating_cost.clone(), cl, peak), true),
        5 => {
            profile.g(params)?;
            ([cl, cp_f], false)
        }
        6 => (by_role(cp_r, cp_f, peak), false),
        7 => {
            if peak != 2 {
                return Err(PricingError::Orientation { profile: 7, peak });
            }
            ([cp_f.clone(), cp_f], false)
        }
        id => return Err(PricingError::UnknownProfile(id)),
    })
}

/// How the investment cost of one shared option is split between periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AllocationRule {
    /// Cheaper than the peak's marginal alternative: all to the peak.
    AllToPeak,
    /// Peak pays the non-shared alternative's investment cost, off-peak the rest.
    SplitAgainstOption(GenOption),
    /// Peak pays `CL`, off-peak the rest.
    SplitAgainstLoadshed,
    /// Not the off-peak marginal option; assigned to the peak.
    NotMarginal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationShare<T> {
    pub option: GenOption,
    pub invest_cost: T,
    pub peak: T,
    pub off_peak: T,
    pub rule: AllocationRule,
}

/// What sets the price at the margin of a period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MarginalOption {
    Option(GenOption),
    Loadshed,
    Nothing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryReport<T> {
    pub period_revenue: [T; 2],
    pub revenue: T,
    pub total_cost: T,
    pub profit: T,
    pub recovered: bool,
    pub allocation: Vec<AllocationShare<T>>,
}

/// Most expensive option (by average cost) serving the period; ties follow
/// the ladder order SR, SF, R, F.
fn costliest<T: Scalar>(options: &[GenOption], params: &SystemParams<T>) -> Option<GenOption> {
    let rank = |o: GenOption| match o {
        GenOption::SharedRenewable => 0,
        GenOption::SharedFossil => 1,
        GenOption::NonSharedRenewable => 2,
        GenOption::NonSharedFossil => 3,
    };
    options.iter().copied().fold(None, |best, o| match best {
        Some(b) => {
            let (cb, co) = (b.average_cost(params), o.average_cost(params));
            if co > cb || (co == cb && rank(o) > rank(b)) {
                Some(o)
            } else {
                Some(b)
            }
        }
        None => Some(o),
    })
}

/// Marginal option of each period of `decision`.
pub fn marginal_options<T: Scalar>(
    decision: &PrimalDecision<T>,
    params: &SystemParams<T>,
    tol: &Tolerances,
) -> [MarginalOption; 2] {
    let used = used_options(decision, tol.feas);
    std::array::from_fn(|t| {
        let shed = &decision.loadshed[t];
        let scale = T::one() + params.demand[t].abs();
        if *shed > T::tol(tol.feas) * scale {
            MarginalOption::Loadshed
        } else {
            costliest(&used[t], params).map_or(MarginalOption::Nothing, MarginalOption::Option)
        }
    })
}

/// Splits the investment cost of each shared option in use between the peak
/// and off-peak periods.
pub fn allocate_investment<T: Scalar>(
    decision: &PrimalDecision<T>,
    params: &SystemParams<T>,
    tol: &Tolerances,
) -> Vec<AllocationShare<T>> {
    let peak = if params.demand[0] <= params.demand[1] { 1 } else { 0 };
    let marginal = marginal_options(decision, params, tol);
    let used = used_options(decision, tol.feas);
    let mut out = Vec::new();
    for option in [GenOption::SharedRenewable, GenOption::SharedFossil] {
        if !used[0].contains(&option) && !used[1].contains(&option) {
            continue;
        }
        let ci = params.tech(option.tech()).invest_cost.clone();
        let all_to_peak = |rule| AllocationShare {
            option,
            invest_cost: ci.clone(),
            peak: ci.clone(),
            off_peak: T::zero(),
            rule,
        };
        let split = |peak_part: T, rule| AllocationShare {
            option,
            invest_cost: ci.clone(),
            off_peak: ci.clone() - peak_part.clone(),
            peak: peak_part,
            rule,
        };
        let share = if marginal[1 - peak] != MarginalOption::Option(option) {
            all_to_peak(AllocationRule::NotMarginal)
        } else {
            match marginal[peak] {
                MarginalOption::Option(alt) if !alt.is_shared() => {
                    let ci_alt = params.tech(alt.tech()).invest_cost.clone();
                    if ci <= ci_alt {
                        all_to_peak(AllocationRule::AllToPeak)
                    } else {
                        split(ci_alt, AllocationRule::SplitAgainstOption(alt))
                    }
                }
                MarginalOption::Loadshed => {
                    let cl = params.loadshed_cost.clone();
                    if ci <= cl {
                        all_to_peak(AllocationRule::AllToPeak)
                    } else {
                        split(cl, AllocationRule::SplitAgainstLoadshed)
                    }
                }
                _ => all_to_peak(AllocationRule::NotMarginal),
            }
        };
        out.push(share);
    }
    out
}

/// Revenue, cost and profit of serving all demand at `prices`.
pub fn cost_recovery<T: Scalar>(
    prices: &[T; 2],
    decision: &PrimalDecision<T>,
    params: &SystemParams<T>,
    tol: &Tolerances,
) -> Result<RecoveryReport<T>, PricingError> {
    params.validate()?;
    let violation = decision.max_violation(params);
    let scale = T::one() + T::max_of(params.demand[0].abs(), params.demand[1].abs());
    if violation > T::tol(tol.feas) * scale {
        return Err(PricingError::InfeasibleDecision(violation.to_f64_lossy()));
    }
    let period_revenue = [
        params.demand[0].clone() * prices[0].clone(),
        params.demand[1].clone() * prices[1].clone(),
    ];
    let revenue = period_revenue[0].clone() + period_revenue[1].clone();
    let total_cost = decision.total_cost(params);
    let profit = revenue.clone() - total_cost.clone();
    Ok(RecoveryReport {
        recovered: profit >= -T::tol(tol.money),
        allocation: allocate_investment(decision, params, tol),
        period_revenue,
        revenue,
        total_cost,
        profit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{analytic_solution, classify};

    fn canonical(cl: f64, d1: f64, d2: f64) -> SystemParams<f64> {
        SystemParams::new(60.0, 1.0, 3000.0, 82.0, 20.0, 4000.0, cl, d1, d2)
    }

    fn solve(p: &SystemParams<f64>) -> crate::classify::AnalyticResult<f64> {
        analytic_solution(p, &classify(p).unwrap()).unwrap()
    }

    #[test]
    fn profile_formulas() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let p3 = LrmcProfile::new(3, Some(Tech::Renewable)).unwrap();
        assert_eq!(profile_prices(&p3, &p, 2).unwrap(), [1.0, 61.0]);
        assert_eq!(profile_prices(&p3, &p, 1).unwrap(), [61.0, 1.0]);
        let p2 = LrmcProfile::new(2, Some(Tech::Renewable)).unwrap();
        assert_eq!(profile_prices(&p2, &p, 2).unwrap(), [-18.0, 80.0]);
        let p1 = LrmcProfile::new(1, None).unwrap();
        assert_eq!(profile_prices(&p1, &p, 1).unwrap(), [80.0, 80.0]);
        let p6 = LrmcProfile::new(6, None).unwrap();
        assert_eq!(profile_prices(&p6, &p, 2).unwrap(), [1.0, 102.0]);
        let p7 = LrmcProfile::new(7, None).unwrap();
        assert_eq!(profile_prices(&p7, &p, 2).unwrap(), [61.0, 61.0]);
    }

    #[test]
    fn profile_errors() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let p7 = LrmcProfile::new(7, None).unwrap();
        assert_eq!(
            profile_prices(&p7, &p, 1),
            Err(PricingError::Orientation { profile: 7, peak: 1 })
        );
        assert_eq!(LrmcProfile::new(3, None), Err(PricingError::MissingTech(3)));
        assert_eq!(LrmcProfile::new(8, None), Err(PricingError::UnknownProfile(8)));
        assert!(srmc_profile(&p7, &p, 1).is_err());
    }

    #[test]
    fn srmc_pairs() {
        let p = canonical(200.0, 2000.0, 8000.0);
        let (pair, rec) = srmc_profile(&LrmcProfile::of_group(6), &p, 2).unwrap();
        assert_eq!(pair, [1.0, 20.0]);
        assert!(!rec);
        let p = canonical(80.0, 2000.0, 4000.0);
        let (pair, rec) = srmc_profile(&LrmcProfile::of_group(3), &p, 2).unwrap();
        assert_eq!(pair, [1.0, 1.0]);
        assert!(!rec);
        let (pair, rec) = srmc_profile(&LrmcProfile::new(1, None).unwrap(), &p, 2).unwrap();
        assert_eq!(pair, [80.0, 80.0]);
        assert!(rec);
    }

    #[test]
    fn group_three_breaks_even() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let a = solve(&p);
        let r = cost_recovery(&a.lrmc, &a.decision, &p, &Tolerances::default()).unwrap();
        assert_eq!(r.revenue, 246000.0);
        assert_eq!(r.total_cost, 246000.0);
        assert_eq!(r.profit, 0.0);
        assert!(r.recovered);
        let (srmc, _) = srmc_profile(&LrmcProfile::of_group(3), &p, 2).unwrap();
        let r = cost_recovery(&srmc, &a.decision, &p, &Tolerances::default()).unwrap();
        assert_eq!(r.profit, -4000.0 * 60.0);
        assert!(!r.recovered);
    }

    #[test]
    fn group_six_profit() {
        let p = canonical(200.0, 2000.0, 8000.0);
        let a = solve(&p);
        assert_eq!(a.lrmc, [1.0, 102.0]);
        let r = cost_recovery(&a.lrmc, &a.decision, &p, &Tolerances::default()).unwrap();
        let expected = 2000.0 * (102.0 - 61.0) + 4000.0 * (102.0 - 61.0);
        assert_eq!(r.profit, expected);
        assert_eq!(r.period_revenue, [2000.0, 816000.0]);
    }

    #[test]
    fn zero_demand_zero_profit() {
        let p = canonical(80.0, 0.0, 0.0);
        let r = cost_recovery(&[7.0, 9.0], &PrimalDecision::zero(), &p, &Tolerances::default())
            .unwrap();
        assert_eq!(r.profit, 0.0);
        assert!(r.allocation.is_empty());
    }

    #[test]
    fn infeasible_decision_rejected() {
        let p = canonical(80.0, 2000.0, 4000.0);
        let e = cost_recovery(&[1.0, 1.0], &PrimalDecision::zero(), &p, &Tolerances::default());
        assert!(matches!(e, Err(PricingError::InfeasibleDecision(_))));
    }

    #[test]
    fn allocation_rules() {
        let tol = Tolerances::default();
        // Group 3: off-peak marginal SR, peak marginal R, same CI -> all to peak.
        let p = canonical(80.0, 2000.0, 4000.0);
        let a = solve(&p);
        let al = allocate_investment(&a.decision, &p, &tol);
        assert_eq!(al.len(), 1);
        assert_eq!(al[0].rule, AllocationRule::AllToPeak);
        assert_eq!((al[0].peak, al[0].off_peak), (60.0, 0.0));
        // Group 12: off-peak marginal SF, peak marginal R with CI_r < CI_f.
        let p = canonical(80.0, 4000.0, 5000.0);
        let a = solve(&p);
        let al = allocate_investment(&a.decision, &p, &tol);
        let sf = al.iter().find(|s| s.option == GenOption::SharedFossil).unwrap();
        assert_eq!(
            sf.rule,
            AllocationRule::SplitAgainstOption(GenOption::NonSharedRenewable)
        );
        assert_eq!((sf.peak, sf.off_peak), (60.0, 22.0));
        // Group 2: peak sheds at CL = 40 < CI_r -> split against loadshed.
        let p = canonical(40.0, 2000.0, 4000.0);
        let a = solve(&p);
        let al = allocate_investment(&a.decision, &p, &tol);
        assert_eq!(al[0].rule, AllocationRule::SplitAgainstLoadshed);
        assert_eq!((al[0].peak, al[0].off_peak), (40.0, 20.0));
        for s in al {
            assert_eq!(s.peak + s.off_peak, s.invest_cost);
        }
    }
}
