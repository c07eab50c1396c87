//! The two-technology, two-period capacity expansion model and its four LPs.
//!
//! Variable order of the long-run primal is fixed:
//! `I_r1, I_r2, I_f1, I_f2, P_r1, P_r2, P_f1, P_f2, L1, L2`.
//! Rows are the two flow balances, four capacity rows
//! (`P_r1`, `P_r2`, `P_f1`, `P_f2`) and four investment bounds, in that order.

use serde::Serialize;
use thiserror::Error;

use crate::lp::{solve_lp, LinearProgram, LpError, LpSolution, Relation, Sense, Status};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tech {
    Renewable,
    Fossil,
}

impl Tech {
    pub const ALL: [Tech; 2] = [Tech::Renewable, Tech::Fossil];

    pub fn index(self) -> usize {
        match self {
            Tech::Renewable => 0,
            Tech::Fossil => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Tech::Renewable => 'r',
            Tech::Fossil => 'f',
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("solution has {found} values, expected {expected}")]
    WrongShape { expected: usize, found: usize },
    #[error("solution is not optimal ({0:?})")]
    NotOptimal(Status),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorTech<T> {
    pub id: Tech,
    pub invest_cost: T,
    pub operating_cost: T,
    pub max_capacity: T,
    pub lifetime: u32,
}

impl<T: Scalar> GeneratorTech<T> {
    pub fn new(id: Tech, invest_cost: T, operating_cost: T, max_capacity: T) -> Self {
        Self {
            id,
            invest_cost,
            operating_cost,
            max_capacity,
            lifetime: 2,
        }
    }

    /// Average unit cost of capacity used in both periods.
    pub fn shared_cost(&self) -> T {
        self.invest_cost.clone() / T::from_i64_exact(2) + self.operating_cost.clone()
    }

    /// Average unit cost of capacity used in a single period.
    pub fn non_shared_cost(&self) -> T {
        self.invest_cost.clone() + self.operating_cost.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemParams<T> {
    pub renewable: GeneratorTech<T>,
    pub fossil: GeneratorTech<T>,
    pub loadshed_cost: T,
    pub demand: [T; 2],
}

impl<T: Scalar> SystemParams<T> {
    /// Builds parameters in the flat order `ci_r, cp_r, m_r, ci_f, cp_f, m_f, cl, d1, d2`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(ci_r: T, cp_r: T, m_r: T, ci_f: T, cp_f: T, m_f: T, cl: T, d1: T, d2: T) -> Self {
        Self {
            renewable: GeneratorTech::new(Tech::Renewable, ci_r, cp_r, m_r),
            fossil: GeneratorTech::new(Tech::Fossil, ci_f, cp_f, m_f),
            loadshed_cost: cl,
            demand: [d1, d2],
        }
    }

    /// The nine parameters in flat order.
    pub fn to_array(&self) -> [T; 9] {
        [
            self.renewable.invest_cost.clone(),
            self.renewable.operating_cost.clone(),
            self.renewable.max_capacity.clone(),
            self.fossil.invest_cost.clone(),
            self.fossil.operating_cost.clone(),
            self.fossil.max_capacity.clone(),
            self.loadshed_cost.clone(),
            self.demand[0].clone(),
            self.demand[1].clone(),
        ]
    }

    pub fn from_array(a: [T; 9]) -> Self {
        let [ci_r, cp_r, m_r, ci_f, cp_f, m_f, cl, d1, d2] = a;
        Self::new(ci_r, cp_r, m_r, ci_f, cp_f, m_f, cl, d1, d2)
    }

    /// Converts to another scalar type through `f64`.
    pub fn convert<U: Scalar>(&self) -> SystemParams<U> {
        let a = self.to_array().map(|v| U::from_f64_lossy(v.to_f64_lossy()));
        SystemParams::from_array(a)
    }

    pub fn tech(&self, g: Tech) -> &GeneratorTech<T> {
        match g {
            Tech::Renewable => &self.renewable,
            Tech::Fossil => &self.fossil,
        }
    }

    /// Same system with the two demands exchanged.
    pub fn mirrored(&self) -> Self {
        let mut p = self.clone();
        p.demand.swap(0, 1);
        p
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::Invalid(m.to_string()));
        for g in [&self.renewable, &self.fossil] {
            let s = g.id.symbol();
            if g.lifetime != 2 {
                return bad(&format!("lifetime of {s} must be 2, got {}", g.lifetime));
            }
            if g.invest_cost < T::zero() {
                return bad(&format!("CI_{s} must be nonnegative"));
            }
            if g.operating_cost < T::zero() {
                return bad(&format!("CP_{s} must be nonnegative"));
            }
            if g.max_capacity <= T::zero() {
                return bad(&format!("M_{s} must be positive"));
            }
        }
        if self.renewable.invest_cost >= self.fossil.invest_cost {
            return bad("assumption CI_r < CI_f violated");
        }
        if self.renewable.operating_cost >= self.fossil.operating_cost {
            return bad("assumption CP_r < CP_f violated");
        }
        if self.loadshed_cost <= T::zero() {
            return bad("CL must be positive");
        }
        if self.demand.iter().any(|d| *d < T::zero()) {
            return bad("demands must be nonnegative");
        }
        Ok(())
    }
}

/// Fixed investments `I[g][t]`, indexed by `Tech::index()` and period (0-based).
pub type Investments<T> = [[T; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimalDecision<T> {
    pub invest: Investments<T>,
    pub production: [[T; 2]; 2],
    pub loadshed: [T; 2],
}

impl<T: Scalar> PrimalDecision<T> {
    pub fn zero() -> Self {
        let z = || [T::zero(), T::zero()];
        Self {
            invest: [z(), z()],
            production: [z(), z()],
            loadshed: z(),
        }
    }

    pub fn i(&self, g: Tech, t: usize) -> &T {
        &self.invest[g.index()][t]
    }

    pub fn p(&self, g: Tech, t: usize) -> &T {
        &self.production[g.index()][t]
    }

    /// Capacity of `g` available in period `t` under a two-period lifetime.
    pub fn capacity(&self, g: Tech, t: usize) -> T {
        capacity(&self.invest, g, t)
    }

    /// Values in the fixed long-run variable order.
    pub fn to_vec(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(10);
        for row in [&self.invest[0], &self.invest[1], &self.production[0], &self.production[1]] {
            v.extend(row.iter().cloned());
        }
        v.extend(self.loadshed.iter().cloned());
        v
    }

    pub fn from_slice(x: &[T]) -> Result<Self, ModelError> {
        if x.len() != 10 {
            return Err(ModelError::WrongShape {
                expected: 10,
                found: x.len(),
            });
        }
        let pair = |k: usize| [x[k].clone(), x[k + 1].clone()];
        Ok(Self {
            invest: [pair(0), pair(2)],
            production: [pair(4), pair(6)],
            loadshed: pair(8),
        })
    }

    /// Total system cost: investment, operation and loadshed.
    pub fn total_cost(&self, params: &SystemParams<T>) -> T {
        let mut c = T::zero();
        for g in Tech::ALL {
            let tech = params.tech(g);
            for t in 0..2 {
                c = c + tech.invest_cost.clone() * self.i(g, t).clone()
                    + tech.operating_cost.clone() * self.p(g, t).clone();
            }
        }
        for t in 0..2 {
            c = c + params.loadshed_cost.clone() * self.loadshed[t].clone();
        }
        c
    }

    /// Largest violation of sign, flow balance, capacity and bound constraints.
    pub fn max_violation(&self, params: &SystemParams<T>) -> T {
        let mut worst = T::zero();
        for v in self.to_vec() {
            worst = T::max_of(worst, -v);
        }
        for t in 0..2 {
            let flow = self.production[0][t].clone() + self.production[1][t].clone()
                + self.loadshed[t].clone();
            worst = T::max_of(worst, (flow - params.demand[t].clone()).abs());
            for g in Tech::ALL {
                worst = T::max_of(worst, self.p(g, t).clone() - self.capacity(g, t));
                worst = T::max_of(
                    worst,
                    self.i(g, t).clone() - params.tech(g).max_capacity.clone(),
                );
            }
        }
        worst
    }

    pub fn is_feasible(&self, params: &SystemParams<T>, tol: &Tolerances) -> bool {
        self.max_violation(params) <= T::tol(tol.feas)
    }
}

fn capacity<T: Scalar>(invest: &Investments<T>, g: Tech, t: usize) -> T {
    let row = &invest[g.index()];
    if t == 0 {
        row[0].clone()
    } else {
        row[0].clone() + row[1].clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualValues<T> {
    pub lambda: [T; 2],
    pub beta: [[T; 2]; 2],
    pub gamma: [[T; 2]; 2],
}

impl<T: Scalar> DualValues<T> {
    pub fn zero() -> Self {
        let z = || [T::zero(), T::zero()];
        Self {
            lambda: z(),
            beta: [z(), z()],
            gamma: [z(), z()],
        }
    }

    /// Values in dual-variable order `λ1, λ2, β_r1, β_r2, β_f1, β_f2, γ_r1, γ_r2, γ_f1, γ_f2`.
    pub fn to_vec(&self) -> Vec<T> {
        let mut v: Vec<T> = self.lambda.to_vec();
        for row in [&self.beta[0], &self.beta[1], &self.gamma[0], &self.gamma[1]] {
            v.extend(row.iter().cloned());
        }
        v
    }

    pub fn from_slice(y: &[T]) -> Result<Self, ModelError> {
        if y.len() != 10 {
            return Err(ModelError::WrongShape {
                expected: 10,
                found: y.len(),
            });
        }
        let pair = |k: usize| [y[k].clone(), y[k + 1].clone()];
        Ok(Self {
            lambda: pair(0),
            beta: [pair(2), pair(4)],
            gamma: [pair(6), pair(8)],
        })
    }

    /// Objective of the long-run dual at these values.
    pub fn objective(&self, params: &SystemParams<T>) -> T {
        let mut y = params.demand[0].clone() * self.lambda[0].clone()
            + params.demand[1].clone() * self.lambda[1].clone();
        for g in Tech::ALL {
            for t in 0..2 {
                y = y - params.tech(g).max_capacity.clone() * self.gamma[g.index()][t].clone();
            }
        }
        y
    }

    /// Largest violation of the long-run dual constraints and sign restrictions.
    pub fn max_violation(&self, params: &SystemParams<T>) -> T {
        let mut worst = T::zero();
        for g in Tech::ALL {
            let gi = g.index();
            let tech = params.tech(g);
            for t in 0..2 {
                worst = T::max_of(worst, -self.beta[gi][t].clone());
                worst = T::max_of(worst, -self.gamma[gi][t].clone());
                let op = self.lambda[t].clone() - self.beta[gi][t].clone();
                worst = T::max_of(worst, op - tech.operating_cost.clone());
            }
            let inv1 = self.beta[gi][0].clone() + self.beta[gi][1].clone() - self.gamma[gi][0].clone();
            let inv2 = self.beta[gi][1].clone() - self.gamma[gi][1].clone();
            worst = T::max_of(worst, inv1 - tech.invest_cost.clone());
            worst = T::max_of(worst, inv2 - tech.invest_cost.clone());
        }
        for t in 0..2 {
            worst = T::max_of(worst, self.lambda[t].clone() - params.loadshed_cost.clone());
        }
        worst
    }
}

pub const LRMC_VARS: [&str; 10] = [
    "I_r1", "I_r2", "I_f1", "I_f2", "P_r1", "P_r2", "P_f1", "P_f2", "L1", "L2",
];
pub const LRMC_ROWS: [&str; 10] = [
    "balance_1", "balance_2", "cap_r1", "cap_r2", "cap_f1", "cap_f2", "max_r1", "max_r2",
    "max_f1", "max_f2",
];
pub const DUAL_VARS: [&str; 10] = [
    "lambda_1", "lambda_2", "beta_r1", "beta_r2", "beta_f1", "beta_f2", "gamma_r1", "gamma_r2",
    "gamma_f1", "gamma_f2",
];
pub const SRMC_VARS: [&str; 6] = ["P_r1", "P_r2", "P_f1", "P_f2", "L1", "L2"];
pub const SRMC_ROWS: [&str; 6] = ["balance_1", "balance_2", "cap_r1", "cap_r2", "cap_f1", "cap_f2"];
pub const SRMC_DUAL_VARS: [&str; 6] = [
    "lambda_1", "lambda_2", "beta_r1", "beta_r2", "beta_f1", "beta_f2",
];

fn unit<T: Scalar>(n: usize, entries: &[(usize, i64)]) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    for &(j, c) in entries {
        v[j] = T::from_i64_exact(c);
    }
    v
}

/// Index of `P_gt` among the production columns (0..4).
fn p_col(g: Tech, t: usize) -> usize {
    2 * g.index() + t
}

pub fn build_lrmc_primal<T: Scalar>(params: &SystemParams<T>) -> Result<LinearProgram<T>, ModelError> {
    params.validate()?;
    let (r, f) = (&params.renewable, &params.fossil);
    let cl = params.loadshed_cost.clone();
    let objective = vec![
        r.invest_cost.clone(),
        r.invest_cost.clone(),
        f.invest_cost.clone(),
        f.invest_cost.clone(),
        r.operating_cost.clone(),
        r.operating_cost.clone(),
        f.operating_cost.clone(),
        f.operating_cost.clone(),
        cl.clone(),
        cl,
    ];
    let mut lp = LinearProgram::new(Sense::Minimize, objective)
        .with_var_labels(LRMC_VARS)
        .with_row_labels(LRMC_ROWS);
    for t in 0..2 {
        lp.add_row(
            unit(10, &[(4 + t, 1), (6 + t, 1), (8 + t, 1)]),
            Relation::Eq,
            params.demand[t].clone(),
        );
    }
    for g in Tech::ALL {
        let i0 = 2 * g.index();
        for t in 0..2 {
            let mut coeffs = vec![(4 + p_col(g, t), -1), (i0, 1)];
            if t == 1 {
                coeffs.push((i0 + 1, 1));
            }
            lp.add_row(unit(10, &coeffs), Relation::Ge, T::zero());
        }
    }
    for g in Tech::ALL {
        for t in 0..2 {
            lp.add_row(
                unit(10, &[(2 * g.index() + t, -1)]),
                Relation::Ge,
                -params.tech(g).max_capacity.clone(),
            );
        }
    }
    Ok(lp)
}

pub fn build_lrmc_dual<T: Scalar>(params: &SystemParams<T>) -> Result<LinearProgram<T>, ModelError> {
    params.validate()?;
    let mut objective = vec![params.demand[0].clone(), params.demand[1].clone()];
    objective.extend([T::zero(), T::zero(), T::zero(), T::zero()]);
    for g in Tech::ALL {
        for _ in 0..2 {
            objective.push(-params.tech(g).max_capacity.clone());
        }
    }
    let mut lp = LinearProgram::new(Sense::Maximize, objective)
        .with_var_labels(DUAL_VARS)
        .with_row_labels([
            "P_r1", "P_r2", "P_f1", "P_f2", "I_r1", "I_r2", "I_f1", "I_f2", "L1", "L2",
        ]);
    lp.lower_bounds[0] = None;
    lp.lower_bounds[1] = None;
    for g in Tech::ALL {
        for t in 0..2 {
            lp.add_row(
                unit(10, &[(t, 1), (2 + p_col(g, t), -1)]),
                Relation::Le,
                params.tech(g).operating_cost.clone(),
            );
        }
    }
    for g in Tech::ALL {
        let b = 2 + 2 * g.index();
        let c = 6 + 2 * g.index();
        let ci = params.tech(g).invest_cost.clone();
        lp.add_row(unit(10, &[(b, 1), (b + 1, 1), (c, -1)]), Relation::Le, ci.clone());
        lp.add_row(unit(10, &[(b + 1, 1), (c + 1, -1)]), Relation::Le, ci);
    }
    for t in 0..2 {
        lp.add_row(unit(10, &[(t, 1)]), Relation::Le, params.loadshed_cost.clone());
    }
    Ok(lp)
}

fn check_istar<T: Scalar>(istar: &Investments<T>, epsilon: &T) -> Result<(), ModelError> {
    if istar.iter().flatten().any(|v| *v < T::zero()) {
        return Err(ModelError::Invalid("fixed investments must be nonnegative".into()));
    }
    if *epsilon < T::zero() {
        return Err(ModelError::Invalid("epsilon must be nonnegative".into()));
    }
    Ok(())
}

fn invested_cost<T: Scalar>(params: &SystemParams<T>, istar: &Investments<T>) -> T {
    let mut c = T::zero();
    for g in Tech::ALL {
        for t in 0..2 {
            c = c + params.tech(g).invest_cost.clone() * istar[g.index()][t].clone();
        }
    }
    c
}

/// Short-run primal with investments fixed at `istar` and every capacity
/// row relaxed by `epsilon`.
pub fn build_srmc_primal<T: Scalar>(
    params: &SystemParams<T>,
    istar: &Investments<T>,
    epsilon: T,
) -> Result<LinearProgram<T>, ModelError> {
    params.validate()?;
    check_istar(istar, &epsilon)?;
    let (r, f) = (&params.renewable, &params.fossil);
    let objective = vec![
        r.operating_cost.clone(),
        r.operating_cost.clone(),
        f.operating_cost.clone(),
        f.operating_cost.clone(),
        params.loadshed_cost.clone(),
        params.loadshed_cost.clone(),
    ];
    let mut lp = LinearProgram::new(Sense::Minimize, objective)
        .with_var_labels(SRMC_VARS)
        .with_row_labels(SRMC_ROWS);
    lp.objective_offset = invested_cost(params, istar);
    for t in 0..2 {
        lp.add_row(
            unit(6, &[(t, 1), (2 + t, 1), (4 + t, 1)]),
            Relation::Eq,
            params.demand[t].clone(),
        );
    }
    for g in Tech::ALL {
        for t in 0..2 {
            let cap = capacity(istar, g, t) + epsilon.clone();
            lp.add_row(unit(6, &[(p_col(g, t), -1)]), Relation::Ge, -cap);
        }
    }
    Ok(lp)
}

pub fn build_srmc_dual<T: Scalar>(
    params: &SystemParams<T>,
    istar: &Investments<T>,
    epsilon: T,
) -> Result<LinearProgram<T>, ModelError> {
    params.validate()?;
    check_istar(istar, &epsilon)?;
    let mut objective = vec![params.demand[0].clone(), params.demand[1].clone()];
    for g in Tech::ALL {
        for t in 0..2 {
            objective.push(-(capacity(istar, g, t) + epsilon.clone()));
        }
    }
    let mut lp = LinearProgram::new(Sense::Maximize, objective)
        .with_var_labels(SRMC_DUAL_VARS)
        .with_row_labels(SRMC_VARS);
    lp.objective_offset = invested_cost(params, istar);
    lp.lower_bounds[0] = None;
    lp.lower_bounds[1] = None;
    for g in Tech::ALL {
        for t in 0..2 {
            lp.add_row(
                unit(6, &[(t, 1), (2 + p_col(g, t), -1)]),
                Relation::Le,
                params.tech(g).operating_cost.clone(),
            );
        }
    }
    for t in 0..2 {
        lp.add_row(unit(6, &[(t, 1)]), Relation::Le, params.loadshed_cost.clone());
    }
    Ok(lp)
}

fn require_optimal<T: Scalar>(solution: &LpSolution<T>) -> Result<(), ModelError> {
    if solution.is_optimal() {
        Ok(())
    } else {
        Err(ModelError::NotOptimal(solution.status))
    }
}

/// Decision from a long-run primal solve.
pub fn extract_decision<T: Scalar>(solution: &LpSolution<T>) -> Result<PrimalDecision<T>, ModelError> {
    require_optimal(solution)?;
    PrimalDecision::from_slice(&solution.primal)
}

/// Decision from a short-run primal solve, with the fixed investments filled in.
pub fn extract_srmc_decision<T: Scalar>(
    solution: &LpSolution<T>,
    istar: &Investments<T>,
) -> Result<PrimalDecision<T>, ModelError> {
    require_optimal(solution)?;
    let x = &solution.primal;
    if x.len() != 6 {
        return Err(ModelError::WrongShape {
            expected: 6,
            found: x.len(),
        });
    }
    Ok(PrimalDecision {
        invest: istar.clone(),
        production: [[x[0].clone(), x[1].clone()], [x[2].clone(), x[3].clone()]],
        loadshed: [x[4].clone(), x[5].clone()],
    })
}

/// Dual values from the row multipliers of a long-run primal solve.
pub fn extract_duals<T: Scalar>(solution: &LpSolution<T>) -> Result<DualValues<T>, ModelError> {
    require_optimal(solution)?;
    DualValues::from_slice(&solution.duals)
}

/// Dual values read from the primal variables of a long-run dual solve.
pub fn extract_duals_from_dual_lp<T: Scalar>(
    solution: &LpSolution<T>,
) -> Result<DualValues<T>, ModelError> {
    require_optimal(solution)?;
    DualValues::from_slice(&solution.primal)
}

/// Long-run optimum with the decision chosen at the vertex of least shared
/// investment (`I_r1 + I_f1`) among all optimal decisions.
///
/// The returned solution is the plain first solve, so its duals are the
/// ordinary basis multipliers; only the decision comes from the second stage.
pub fn solve_lrmc<T: Scalar>(
    params: &SystemParams<T>,
) -> Result<(LinearProgram<T>, LpSolution<T>, PrimalDecision<T>), ModelError> {
    let lp = build_lrmc_primal(params)?;
    let first = solve_lp(&lp)?;
    require_optimal(&first)?;
    // Optimal decisions are exactly the feasible points complementary to
    // the first-stage duals.
    let tol = T::tol(1e-9);
    let mut face = lp.clone();
    for (i, y) in first.duals.iter().enumerate() {
        if y.abs() > tol {
            face.relations[i] = Relation::Eq;
        }
    }
    for (j, rc) in first.reduced_costs.iter().enumerate() {
        if *rc > tol {
            face.add_row(unit(10, &[(j, 1)]), Relation::Le, T::zero());
        }
    }
    face.row_labels = None;
    face.objective = unit(10, &[(0, 1), (2, 1)]);
    let second = solve_lp(&face)?;
    let decision = if second.is_optimal() {
        PrimalDecision::from_slice(&second.primal)?
    } else {
        extract_decision(&first)?
    };
    Ok((lp, first, decision))
}
