//! Dense two-phase primal simplex with Bland's rule.
//!
//! Problems in this crate are tiny (a dozen columns, ten rows), so the
//! solver keeps a full tableau and recomputes dual values from the final
//! basis by a direct solve of `Bᵀy = c_B`. Bland's rule is always on:
//! degenerate bases are the normal case for the fixed-capacity models, and
//! cycling there must be impossible.
//!
//! Dual values follow the shadow-price convention: `dual[i]` is the rate of
//! change of the optimal objective with respect to `rhs[i]`. For a
//! minimization a `≥` row therefore carries a nonnegative dual and a `≤` row
//! a nonpositive one; for a maximization the signs swap. Equality rows are
//! unrestricted.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("iteration limit of {0} pivots reached")]
    IterationLimit(usize),
    #[error("row index {0} out of range")]
    RowOutOfRange(usize),
    #[error("problem is not solvable to optimality ({0:?})")]
    NotOptimal(Status),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// A linear program over a dense constraint matrix.
///
/// Each variable has an optional lower bound (`None` means free); there are
/// no upper bounds, those are ordinary rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    /// Constant added to the objective value.
    pub objective_offset: T,
    pub matrix: Vec<Vec<T>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<T>,
    pub lower_bounds: Vec<Option<T>>,
    pub var_labels: Option<Vec<String>>,
    pub row_labels: Option<Vec<String>>,
}

impl<T: Scalar> LinearProgram<T> {
    /// Creates a problem with the given objective and all variables `≥ 0`.
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            objective_offset: T::zero(),
            matrix: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            lower_bounds: vec![Some(T::zero()); n],
            var_labels: None,
            row_labels: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> usize {
        self.matrix.push(coeffs);
        self.relations.push(relation);
        self.rhs.push(rhs);
        self.rhs.len() - 1
    }

    pub fn with_var_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.var_labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn with_row_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.row_labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.row_labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn var_index(&self, label: &str) -> Option<usize> {
        self.var_labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let m = self.rhs.len();
        let n = self.objective.len();
        if self.matrix.len() != m {
            return Err(LpError::DimensionMismatch {
                what: "matrix rows",
                expected: m,
                found: self.matrix.len(),
            });
        }
        if self.relations.len() != m {
            return Err(LpError::DimensionMismatch {
                what: "relations",
                expected: m,
                found: self.relations.len(),
            });
        }
        for row in &self.matrix {
            if row.len() != n {
                return Err(LpError::DimensionMismatch {
                    what: "matrix columns",
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if self.lower_bounds.len() != n {
            return Err(LpError::DimensionMismatch {
                what: "lower bounds",
                expected: n,
                found: self.lower_bounds.len(),
            });
        }
        for (labels, expected, what) in [
            (&self.var_labels, n, "variable labels"),
            (&self.row_labels, m, "row labels"),
        ] {
            if let Some(labels) = labels {
                if labels.len() != expected {
                    return Err(LpError::DimensionMismatch {
                        what,
                        expected,
                        found: labels.len(),
                    });
                }
                let mut seen = HashSet::new();
                for l in labels {
                    if !seen.insert(l.as_str()) {
                        return Err(LpError::DuplicateLabel(l.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Objective value of `x`, including the constant offset.
    pub fn objective_value(&self, x: &[T]) -> T {
        dot(&self.objective, x) + self.objective_offset.clone()
    }

    /// Largest violation of any row, bound, or dimension of `x`.
    pub fn max_primal_violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for (i, row) in self.matrix.iter().enumerate() {
            let lhs = dot(row, x);
            let v = match self.relations[i] {
                Relation::Le => lhs - self.rhs[i].clone(),
                Relation::Ge => self.rhs[i].clone() - lhs,
                Relation::Eq => (lhs - self.rhs[i].clone()).abs(),
            };
            worst = T::max_of(worst, v);
        }
        for (j, lb) in self.lower_bounds.iter().enumerate() {
            if let Some(l) = lb {
                worst = T::max_of(worst, l.clone() - x[j].clone());
            }
        }
        worst
    }

    /// Sign each row's dual must have under the shadow-price convention:
    /// `1` nonnegative, `-1` nonpositive, `0` free.
    pub fn dual_sign(&self, row: usize) -> i8 {
        let s = match self.relations[row] {
            Relation::Ge => 1,
            Relation::Le => -1,
            Relation::Eq => 0,
        };
        match self.sense {
            Sense::Minimize => s,
            Sense::Maximize => -s,
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// One member of the final basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisVar {
    /// Original variable (either half of a split free variable).
    Structural(usize),
    /// Slack or surplus of a row.
    Slack(usize),
    /// Artificial of a redundant row, left basic at zero.
    Artificial(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: Status,
    pub primal: Vec<T>,
    pub duals: Vec<T>,
    pub reduced_costs: Vec<T>,
    pub objective: T,
    pub dual_objective: T,
    /// Final basis, one entry per row, with the value of each basic variable.
    pub basis: Vec<(BasisVar, T)>,
    pub iterations: usize,
}

impl<T: Scalar> LpSolution<T> {
    fn non_optimal(status: Status, iterations: usize) -> Self {
        Self {
            status,
            primal: Vec::new(),
            duals: Vec::new(),
            reduced_costs: Vec::new(),
            objective: T::zero(),
            dual_objective: T::zero(),
            basis: Vec::new(),
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 10_000,
        }
    }
}

pub fn solve_lp<T: Scalar>(problem: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    solve_lp_with(problem, &SolverOptions::default())
}

#[derive(Debug, Clone, Copy)]
enum ColKind {
    /// Original variable `j`, coefficient sign +1 or -1 (negative half of a free split).
    Structural(usize, bool),
    Slack(usize),
    Artificial(usize),
}

struct Tableau<T> {
    /// m rows of n columns plus the right-hand side at index n.
    rows: Vec<Vec<T>>,
    /// Reduced-cost row of n columns plus the negated objective at index n.
    obj: Vec<T>,
    basis: Vec<usize>,
    n: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, s: usize) {
        let p = self.rows[r][s].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[s].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * pv.clone();
            }
            row[s] = T::zero();
        }
        let f = self.obj[s].clone();
        if !f.is_zero() {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * pv.clone();
            }
            self.obj[s] = T::zero();
        }
        self.basis[r] = s;
    }

    fn set_costs(&mut self, costs: &[T]) {
        let n = self.n;
        let mut obj: Vec<T> = costs.to_vec();
        obj.push(T::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = costs[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..=n {
                obj[j] = obj[j].clone() - cb.clone() * row[j].clone();
            }
        }
        self.obj = obj;
    }

    /// Runs Bland's-rule pivots until optimal or unbounded.
    /// Returns `Ok(true)` when optimal, `Ok(false)` when unbounded.
    fn run(
        &mut self,
        allowed: &[bool],
        iterations: &mut usize,
        max_iterations: usize,
    ) -> Result<bool, LpError> {
        let eps = T::pivot_eps();
        let opt_eps = T::tol(1e-10);
        loop {
            let entering = (0..self.n).find(|&j| allowed[j] && self.obj[j] < -opt_eps.clone());
            let Some(s) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[s];
                if *a <= eps {
                    continue;
                }
                let ratio = row[self.n].clone() / a.clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = T::tol(1e-12) * (T::one() + br.abs());
                        let tied_lower = (ratio.clone() - br.clone()).abs() <= tie.clone()
                            && self.basis[i] < self.basis[bi];
                        if ratio < br.clone() - tie || tied_lower {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            *iterations += 1;
            if *iterations > max_iterations {
                return Err(LpError::IterationLimit(max_iterations));
            }
            self.pivot(r, s);
        }
    }
}

pub fn solve_lp_with<T: Scalar>(
    problem: &LinearProgram<T>,
    options: &SolverOptions,
) -> Result<LpSolution<T>, LpError> {
    problem.validate()?;
    let m = problem.num_rows();
    let nv = problem.num_vars();
    let minimize = problem.sense == Sense::Minimize;

    // Structural columns: shift bounded variables to zero, split free ones.
    let mut kinds: Vec<ColKind> = Vec::new();
    for j in 0..nv {
        kinds.push(ColKind::Structural(j, true));
        if problem.lower_bounds[j].is_none() {
            kinds.push(ColKind::Structural(j, false));
        }
    }
    let n_struct = kinds.len();

    // Row data after the bound shift and sign normalization (b >= 0).
    let mut row_neg = vec![false; m];
    let mut rels = problem.relations.clone();
    let mut b: Vec<T> = Vec::with_capacity(m);
    for i in 0..m {
        let mut bi = problem.rhs[i].clone();
        for j in 0..nv {
            if let Some(l) = &problem.lower_bounds[j] {
                bi = bi - problem.matrix[i][j].clone() * l.clone();
            }
        }
        if bi < T::zero() {
            row_neg[i] = true;
            bi = -bi;
            rels[i] = rels[i].flipped();
        }
        b.push(bi);
    }
    for (i, rel) in rels.iter().enumerate() {
        if *rel != Relation::Eq {
            kinds.push(ColKind::Slack(i));
        }
    }
    let n_before_art = kinds.len();
    for (i, rel) in rels.iter().enumerate() {
        if *rel != Relation::Le {
            kinds.push(ColKind::Artificial(i));
        }
    }
    let n = kinds.len();

    let coeff = |i: usize, k: &ColKind| -> T {
        let sign = if row_neg[i] { -T::one() } else { T::one() };
        match *k {
            ColKind::Structural(j, pos) => {
                let a = problem.matrix[i][j].clone() * sign;
                if pos {
                    a
                } else {
                    -a
                }
            }
            ColKind::Slack(r) if r == i => match rels[i] {
                Relation::Le => T::one(),
                _ => -T::one(),
            },
            ColKind::Artificial(r) if r == i => T::one(),
            _ => T::zero(),
        }
    };
    let mut a_std: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<T> = kinds.iter().map(|k| coeff(i, k)).collect();
        row.push(b[i].clone());
        a_std.push(row);
    }
    let costs: Vec<T> = kinds
        .iter()
        .map(|k| match *k {
            ColKind::Structural(j, pos) => {
                let c = if minimize {
                    problem.objective[j].clone()
                } else {
                    -problem.objective[j].clone()
                };
                if pos {
                    c
                } else {
                    -c
                }
            }
            _ => T::zero(),
        })
        .collect();

    let basis: Vec<usize> = (0..m)
        .map(|i| {
            kinds
                .iter()
                .position(|k| match *k {
                    ColKind::Slack(r) => r == i && rels[i] == Relation::Le,
                    ColKind::Artificial(r) => r == i,
                    _ => false,
                })
                .expect("every row has a starting basic column")
        })
        .collect();

    let mut tab = Tableau {
        rows: a_std.clone(),
        obj: Vec::new(),
        basis,
        n,
    };
    let mut iterations = 0usize;

    // Phase 1.
    let has_art = n > n_before_art;
    if has_art {
        let phase1: Vec<T> = kinds
            .iter()
            .map(|k| match k {
                ColKind::Artificial(_) => T::one(),
                _ => T::zero(),
            })
            .collect();
        tab.set_costs(&phase1);
        let all = vec![true; n];
        let bounded = tab.run(&all, &mut iterations, options.max_iterations)?;
        debug_assert!(bounded, "phase 1 objective is bounded below by zero");
        let infeas = tab
            .rows
            .iter()
            .zip(&tab.basis)
            .filter(|(_, &c)| matches!(kinds[c], ColKind::Artificial(_)))
            .fold(T::zero(), |acc, (row, _)| acc + row[n].clone());
        let b_norm = b.iter().fold(T::zero(), |acc, v| T::max_of(acc, v.clone()));
        if infeas > T::tol(1e-9) * (T::one() + b_norm) {
            return Ok(LpSolution::non_optimal(Status::Infeasible, iterations));
        }
        // Drive remaining artificials out of the basis where possible.
        for r in 0..m {
            if !matches!(kinds[tab.basis[r]], ColKind::Artificial(_)) {
                continue;
            }
            let eps = T::pivot_eps();
            let col = (0..n_before_art).find(|&j| tab.rows[r][j].abs() > eps);
            if let Some(s) = col {
                tab.pivot(r, s);
            }
        }
    }

    // Phase 2.
    tab.set_costs(&costs);
    let allowed: Vec<bool> = (0..n).map(|j| j < n_before_art).collect();
    if !tab.run(&allowed, &mut iterations, options.max_iterations)? {
        return Ok(LpSolution::non_optimal(Status::Unbounded, iterations));
    }

    // Primal values.
    let mut x_std = vec![T::zero(); n];
    for (i, &c) in tab.basis.iter().enumerate() {
        x_std[c] = tab.rows[i][n].clone();
    }
    let mut primal: Vec<T> = problem
        .lower_bounds
        .iter()
        .map(|lb| lb.clone().unwrap_or_else(T::zero))
        .collect();
    for (c, k) in kinds.iter().enumerate().take(n_struct) {
        if let ColKind::Structural(j, pos) = *k {
            if pos {
                primal[j] = primal[j].clone() + x_std[c].clone();
            } else {
                primal[j] = primal[j].clone() - x_std[c].clone();
            }
        }
    }

    // Duals from Bᵀy = c_B on the original standard-form columns.
    let bt: Vec<Vec<T>> = tab
        .basis
        .iter()
        .map(|&c| (0..m).map(|i| a_std[i][c].clone()).collect())
        .collect();
    let cb: Vec<T> = tab.basis.iter().map(|&c| costs[c].clone()).collect();
    let y = solve_dense(bt, cb).expect("optimal basis is nonsingular");
    let duals: Vec<T> = (0..m)
        .map(|i| {
            let mut v = y[i].clone();
            if row_neg[i] {
                v = -v;
            }
            if !minimize {
                v = -v;
            }
            v
        })
        .collect();

    let reduced_costs: Vec<T> = (0..nv)
        .map(|j| {
            let mut r = problem.objective[j].clone();
            for i in 0..m {
                r = r - problem.matrix[i][j].clone() * duals[i].clone();
            }
            r
        })
        .collect();
    let mut dual_objective = dot(&problem.rhs, &duals) + problem.objective_offset.clone();
    for j in 0..nv {
        if let Some(l) = &problem.lower_bounds[j] {
            dual_objective = dual_objective + l.clone() * reduced_costs[j].clone();
        }
    }
    let objective = problem.objective_value(&primal);

    let basis = tab
        .basis
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let var = match kinds[c] {
                ColKind::Structural(j, _) => BasisVar::Structural(j),
                ColKind::Slack(r) => BasisVar::Slack(r),
                ColKind::Artificial(r) => BasisVar::Artificial(r),
            };
            (var, tab.rows[i][n].clone())
        })
        .collect();

    Ok(LpSolution {
        status: Status::Optimal,
        primal,
        duals,
        reduced_costs,
        objective,
        dual_objective,
        basis,
        iterations,
    })
}

/// Solves a square system by Gaussian elimination with partial pivoting.
fn solve_dense<T: Scalar>(mut a: Vec<Vec<T>>, mut rhs: Vec<T>) -> Option<Vec<T>> {
    let m = rhs.len();
    for col in 0..m {
        let mut best = col;
        for r in col + 1..m {
            if a[r][col].abs() > a[best][col].abs() {
                best = r;
            }
        }
        if a[best][col].is_zero() {
            return None;
        }
        a.swap(col, best);
        rhs.swap(col, best);
        for r in 0..m {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for k in col..m {
                a[r][k] = a[r][k].clone() - f.clone() * a[col][k].clone();
            }
            rhs[r] = rhs[r].clone() - f * rhs[col].clone();
        }
    }
    Some((0..m).map(|i| rhs[i].clone() / a[i][i].clone()).collect())
}

/// Closed interval of values a row's dual takes over all optimal dual
/// solutions. `None` on either side means unbounded in that direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualInterval<T> {
    pub lo: Option<T>,
    pub hi: Option<T>,
}

impl<T: Scalar> DualInterval<T> {
    pub fn contains(&self, v: &T, tol: f64) -> bool {
        let t = T::tol(tol) * (T::one() + v.abs());
        let above = self.lo.as_ref().is_none_or(|lo| *v >= lo.clone() - t.clone());
        let below = self.hi.as_ref().is_none_or(|hi| *v <= hi.clone() + t.clone());
        above && below
    }

    /// `hi - lo`, or `None` when unbounded.
    pub fn width(&self) -> Option<T> {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => Some(hi.clone() - lo.clone()),
            _ => None,
        }
    }

    pub fn is_point(&self, tol: f64) -> bool {
        self.width().is_some_and(|w| w <= T::tol(tol))
    }
}

/// Builds the dual of `problem` in shadow-price variables.
///
/// Variable `i` of the returned program is the dual of row `i`; rows that
/// force a nonpositive dual are represented by their negation so every
/// variable keeps a zero lower bound or is free. Returns the program and the
/// per-row sign (`1` or `-1`) mapping a dual-program variable back to the
/// shadow price.
fn dual_feasible_region<T: Scalar>(problem: &LinearProgram<T>) -> (LinearProgram<T>, Vec<T>) {
    let m = problem.num_rows();
    let nv = problem.num_vars();
    let signs: Vec<T> = (0..m)
        .map(|i| {
            if problem.dual_sign(i) < 0 {
                -T::one()
            } else {
                T::one()
            }
        })
        .collect();
    let minimize = problem.sense == Sense::Minimize;
    let mut dual = LinearProgram::new(Sense::Minimize, vec![T::zero(); m]);
    dual.lower_bounds = (0..m)
        .map(|i| {
            if problem.dual_sign(i) == 0 {
                None
            } else {
                Some(T::zero())
            }
        })
        .collect();
    for j in 0..nv {
        let coeffs: Vec<T> = (0..m)
            .map(|i| problem.matrix[i][j].clone() * signs[i].clone())
            .collect();
        let rel = match (&problem.lower_bounds[j], minimize) {
            (None, _) => Relation::Eq,
            (Some(_), true) => Relation::Le,
            (Some(_), false) => Relation::Ge,
        };
        dual.add_row(coeffs, rel, problem.objective[j].clone());
    }
    (dual, signs)
}

/// Range of row `row`'s dual over the optimal dual face.
///
/// The dual feasible region is intersected with the hyperplane where the
/// dual objective equals the primal optimum; the row's dual is then
/// minimized and maximized over that face.
pub fn dual_value_range<T: Scalar>(
    problem: &LinearProgram<T>,
    row: usize,
) -> Result<DualInterval<T>, LpError> {
    problem.validate()?;
    if row >= problem.num_rows() {
        return Err(LpError::RowOutOfRange(row));
    }
    let primal = solve_lp(problem)?;
    if !primal.is_optimal() {
        return Err(LpError::NotOptimal(primal.status));
    }
    let (mut face, signs) = dual_feasible_region(problem);
    // Dual objective: Σ y_i (b_i - Σ_j a_ij l_j) + Σ_j l_j c_j + offset.
    let m = problem.num_rows();
    let mut coeffs = Vec::with_capacity(m);
    for i in 0..m {
        let mut bi = problem.rhs[i].clone();
        for j in 0..problem.num_vars() {
            if let Some(l) = &problem.lower_bounds[j] {
                bi = bi - problem.matrix[i][j].clone() * l.clone();
            }
        }
        coeffs.push(bi * signs[i].clone());
    }
    let mut constant = problem.objective_offset.clone();
    for j in 0..problem.num_vars() {
        if let Some(l) = &problem.lower_bounds[j] {
            constant = constant + l.clone() * problem.objective[j].clone();
        }
    }
    face.add_row(coeffs, Relation::Eq, primal.objective.clone() - constant);

    let mut bound = |sense: Sense| -> Result<Option<T>, LpError> {
        let mut obj = vec![T::zero(); m];
        obj[row] = signs[row].clone();
        face.objective = obj;
        face.sense = sense;
        let sol = solve_lp(&face)?;
        match sol.status {
            Status::Optimal => Ok(Some(sol.objective)),
            Status::Unbounded => Ok(None),
            Status::Infeasible => Err(LpError::NotOptimal(Status::Infeasible)),
        }
    };
    let lo = bound(Sense::Minimize)?;
    let hi = bound(Sense::Maximize)?;
    Ok(DualInterval { lo, hi })
}

/// Degeneracy diagnostics of an optimal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub primal_degenerate: bool,
    /// Basic variables whose value is at most `tol.deg`.
    pub zero_basics: Vec<BasisVar>,
    /// Per row: true when the row's dual is not unique over the optimal face.
    pub dual_multiple: Vec<bool>,
}

pub fn detect_degeneracy<T: Scalar>(
    problem: &LinearProgram<T>,
    solution: &LpSolution<T>,
    tol: &Tolerances,
) -> Result<DegeneracyReport, LpError> {
    if !solution.is_optimal() {
        return Err(LpError::NotOptimal(solution.status));
    }
    let deg = T::tol(tol.deg);
    let zero_basics: Vec<BasisVar> = solution
        .basis
        .iter()
        .filter(|(_, v)| v.abs() <= deg)
        .map(|(b, _)| *b)
        .collect();
    let mut dual_multiple = Vec::with_capacity(problem.num_rows());
    for i in 0..problem.num_rows() {
        let iv = dual_value_range(problem, i)?;
        dual_multiple.push(!iv.is_point(tol.feas));
    }
    Ok(DegeneracyReport {
        primal_degenerate: !zero_basics.is_empty(),
        zero_basics,
        dual_multiple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn single_var() -> LinearProgram<f64> {
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0]);
        lp.add_row(vec![1.0], Relation::Ge, 3.0);
        lp
    }

    #[test]
    fn binding_single_constraint() {
        let sol = solve_lp(&single_var()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.primal[0] - 3.0).abs() < 1e-12);
        assert!((sol.duals[0] - 1.0).abs() < 1e-12);
        assert!((sol.objective - 3.0).abs() < 1e-12);
        assert!((sol.dual_objective - 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_feasible_set() {
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![0.0]);
        lp.add_row(vec![1.0], Relation::Ge, 1.0);
        lp.add_row(vec![1.0], Relation::Le, 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::<f64>::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut lp = single_var();
        lp.matrix[0].push(2.0);
        assert!(matches!(
            solve_lp(&lp),
            Err(LpError::DimensionMismatch { .. })
        ));
        let mut lp = single_var();
        lp.relations.push(Relation::Eq);
        assert!(solve_lp(&lp).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0, 1.0]).with_var_labels(["x", "x"]);
        lp.add_row(vec![1.0, 1.0], Relation::Ge, 1.0);
        assert_eq!(lp.validate(), Err(LpError::DuplicateLabel("x".into())));
    }

    #[test]
    fn iteration_cap_is_enforced() {
        let mut lp = LinearProgram::<f64>::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 0.0], Relation::Le, 1.0);
        lp.add_row(vec![0.0, 1.0], Relation::Le, 1.0);
        let opts = SolverOptions { max_iterations: 1 };
        assert_eq!(solve_lp_with(&lp, &opts), Err(LpError::IterationLimit(1)));
    }

    #[test]
    fn textbook_maximization_duals() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), z = 36, y = (0, 3/2, 1)
        let mut lp = LinearProgram::<f64>::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add_row(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add_row(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add_row(vec![3.0, 2.0], Relation::Le, 18.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.objective - 36.0).abs() < 1e-9);
        assert!((sol.primal[0] - 2.0).abs() < 1e-9);
        assert!((sol.primal[1] - 6.0).abs() < 1e-9);
        let expect = [0.0, 1.5, 1.0];
        for (d, e) in sol.duals.iter().zip(expect) {
            assert!((d - e).abs() < 1e-9);
        }
    }

    #[test]
    fn free_variables_and_equalities() {
        // max x s.t. x - y = -2, y <= 1, x free -> x = -1, both duals 1
        let mut lp = LinearProgram::<f64>::new(Sense::Maximize, vec![1.0, 0.0]);
        lp.lower_bounds[0] = None;
        lp.add_row(vec![1.0, -1.0], Relation::Eq, -2.0);
        lp.add_row(vec![0.0, 1.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.primal[0] + 1.0).abs() < 1e-12);
        assert!((sol.duals[0] - 1.0).abs() < 1e-12);
        assert!((sol.duals[1] - 1.0).abs() < 1e-12);
        assert!((sol.objective - sol.dual_objective).abs() < 1e-12);
    }

    #[test]
    fn nonzero_lower_bounds() {
        // min x + y, x + y >= 1, x >= 2 (as bound) -> 2
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.lower_bounds[0] = Some(2.0);
        lp.add_row(vec![1.0, 1.0], Relation::Ge, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-12);
        assert!((sol.dual_objective - 2.0).abs() < 1e-12);
        assert!(sol.duals[0].abs() < 1e-12);
    }

    #[test]
    fn redundant_equality_rows() {
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0, 2.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Eq, 2.0);
        lp.add_row(vec![2.0, 2.0], Relation::Eq, 4.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective - 2.0).abs() < 1e-12);
        assert!((sol.objective - sol.dual_objective).abs() < 1e-12);
    }

    #[test]
    fn exact_rational_solve() {
        let mut lp: LinearProgram<BigRational> =
            LinearProgram::new(Sense::Minimize, vec![ratio(1, 1), ratio(1, 1)]);
        lp.add_row(vec![ratio(3, 1), ratio(1, 1)], Relation::Ge, ratio(1, 1));
        lp.add_row(vec![ratio(1, 1), ratio(3, 1)], Relation::Ge, ratio(1, 1));
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.objective, ratio(1, 2));
        assert_eq!(sol.primal, vec![ratio(1, 4), ratio(1, 4)]);
        assert_eq!(sol.duals, vec![ratio(1, 4), ratio(1, 4)]);
    }

    #[test]
    fn degeneracy_flags() {
        let tol = Tolerances::default();
        let lp = single_var();
        let sol = solve_lp(&lp).unwrap();
        let rep = detect_degeneracy(&lp, &sol, &tol).unwrap();
        assert!(!rep.primal_degenerate);
        assert_eq!(rep.dual_multiple, vec![false]);

        // min x + y, x + y >= 1, x >= 1: y (or a surplus) basic at zero.
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Ge, 1.0);
        lp.add_row(vec![1.0, 0.0], Relation::Ge, 1.0);
        let sol = solve_lp(&lp).unwrap();
        let rep = detect_degeneracy(&lp, &sol, &tol).unwrap();
        assert!(rep.primal_degenerate);
        assert!(!rep.zero_basics.is_empty());
        // Both rows share the unit of cost: duals (a, 1-a) with a in [0, 1].
        assert_eq!(rep.dual_multiple, vec![true, true]);
    }

    #[test]
    fn degeneracy_rejects_non_optimal() {
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![0.0]);
        lp.add_row(vec![1.0], Relation::Ge, 1.0);
        lp.add_row(vec![1.0], Relation::Le, 0.0);
        let sol = solve_lp(&lp).unwrap();
        assert!(detect_degeneracy(&lp, &sol, &Tolerances::default()).is_err());
    }

    #[test]
    fn dual_range_single_row() {
        let iv = dual_value_range(&single_var(), 0).unwrap();
        assert!((iv.lo.unwrap() - 1.0).abs() < 1e-12);
        assert!((iv.hi.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dual_range_degenerate_pair() {
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Ge, 1.0);
        lp.add_row(vec![1.0, 0.0], Relation::Ge, 1.0);
        let iv = dual_value_range(&lp, 0).unwrap();
        assert!(iv.lo.unwrap().abs() < 1e-12);
        assert!((iv.hi.unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            dual_value_range(&lp, 5),
            Err(LpError::RowOutOfRange(5))
        ));
    }

    #[test]
    fn dual_range_unbounded_direction() {
        // min x, x >= 0 via row with zero rhs; dual of an unused free row is unbounded.
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0, 0.0]);
        lp.add_row(vec![1.0, 0.0], Relation::Ge, 1.0);
        lp.add_row(vec![0.0, 1.0], Relation::Eq, 0.0);
        let iv = dual_value_range(&lp, 1).unwrap();
        assert_eq!(iv.lo, None);
        assert!(iv.hi.unwrap().abs() < 1e-12);
    }
}
