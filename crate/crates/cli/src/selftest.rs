//! Seeded randomized verification.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use mcost_core::classify::AnalyticResult;
use mcost_core::degeneracy::{compute_srmc_with, default_epsilon, predict_srmc_from_lrmc};
use mcost_core::scenario::ScenarioGenerator;
use mcost_core::verify::cross_check;
use mcost_core::{Params, Tolerances};

use crate::CliError;

/// Distinct groups a run of [`FULL_RUN`] scenarios must reach.
pub const MIN_GROUPS: usize = 35;
pub const FULL_RUN: usize = 10_000;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelftestSummary {
    pub seed: u64,
    pub n: usize,
    pub cross_check: usize,
    pub srmc_rule: usize,
    pub perturbation: usize,
    pub groups: BTreeSet<u8>,
    /// First few failures, for diagnostics.
    pub failures: Vec<String>,
}

impl SelftestSummary {
    pub fn coverage_ok(&self) -> bool {
        self.n < FULL_RUN || self.groups.len() >= MIN_GROUPS
    }

    pub fn pass(&self) -> bool {
        self.cross_check == self.n
            && self.srmc_rule == self.n
            && self.perturbation == self.n
            && self.coverage_ok()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "selftest seed={} n={}", self.seed, self.n);
        let _ = writeln!(s, "cross_check   {}/{}", self.cross_check, self.n);
        let _ = writeln!(s, "srmc_rule     {}/{}", self.srmc_rule, self.n);
        let _ = writeln!(s, "perturbation  {}/{}", self.perturbation, self.n);
        let groups: Vec<String> = self.groups.iter().map(u8::to_string).collect();
        let _ = writeln!(s, "groups        {} [{}]", self.groups.len(), groups.join(" "));
        if !self.coverage_ok() {
            let _ = writeln!(s, "coverage      FAIL (need {MIN_GROUPS} groups)");
        }
        for f in &self.failures {
            let _ = writeln!(s, "  {f}");
        }
        let _ = writeln!(s, "{}", if self.pass() { "PASS" } else { "FAIL" });
        s
    }
}

/// Whether the rule-predicted SRMC matches the perturbed dual in both periods.
pub fn srmc_rule_holds(
    params: &Params,
    a: &AnalyticResult<f64>,
    tol: &Tolerances,
) -> Result<(bool, bool), String> {
    let invest = &a.decision.invest;
    let eps = default_epsilon(params);
    let s = compute_srmc_with(params, invest, eps, tol).map_err(|e| e.to_string())?;
    let fine = compute_srmc_with(params, invest, eps / 10.0, tol).map_err(|e| e.to_string())?;
    let close = |x: f64, y: f64| (x - y).abs() <= tol.price;
    let mut rule = true;
    let mut stable = true;
    for t in 0..2 {
        let predicted = match a.marginal[t] {
            Some(g) => predict_srmc_from_lrmc(
                &a.lrmc[t],
                &params.tech(g).operating_cost,
                &params.loadshed_cost,
                tol.price,
            )
            .ok(),
            None => Some(params.loadshed_cost),
        };
        rule &= predicted.is_some_and(|v| close(v, s.resolved[t])) && s.resolved[t] <= a.lrmc[t] + tol.price;
        stable &= close(s.resolved[t], fine.resolved[t]);
    }
    Ok((rule, stable))
}

pub fn run_selftest(seed: u64, n: usize, tol: &Tolerances) -> Result<SelftestSummary, CliError> {
    if n == 0 {
        return Err(CliError::Validation("selftest needs n >= 1".into()));
    }
    let mut gen = ScenarioGenerator::new(seed);
    let mut out = SelftestSummary { seed, n, ..Default::default() };
    let fail = |out: &mut SelftestSummary, msg: String| {
        if out.failures.len() < 10 {
            out.failures.push(msg);
        }
    };
    for k in 0..n {
        let p = gen.next_params();
        let r = match cross_check(&p, tol) {
            Ok(r) => r,
            Err(e) => {
                fail(&mut out, format!("#{k}: {e}"));
                continue;
            }
        };
        out.groups.insert(r.group.id);
        if r.pass() {
            out.cross_check += 1;
        } else {
            fail(&mut out, format!("#{k} group {}: {}", r.group.id, r.disagreements.join("; ")));
        }
        match srmc_rule_holds(&p, &r.analytic, tol) {
            Ok((rule, stable)) => {
                out.srmc_rule += usize::from(rule);
                out.perturbation += usize::from(stable);
                if !rule {
                    fail(&mut out, format!("#{k}: SRMC rule mismatch"));
                }
                if !stable {
                    fail(&mut out, format!("#{k}: SRMC changes when epsilon shrinks"));
                }
            }
            Err(e) => fail(&mut out, format!("#{k}: {e}")),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_scenarios_rejected() {
        assert!(matches!(
            run_selftest(1, 0, &Tolerances::default()),
            Err(CliError::Validation(_))
        ));
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let tol = Tolerances::default();
        let a = run_selftest(42, 200, &tol).unwrap();
        assert!(a.pass(), "{}", a.render());
        assert_eq!(a.render(), run_selftest(42, 200, &tol).unwrap().render());
    }
}
