//! Single-scenario evaluation and rendering.

use std::fmt::Write as _;

use mcost_core::classify::{analytic_solution, classify_with, InstanceGroup};
use mcost_core::degeneracy::{compute_srmc_with, default_epsilon, SrmcResult};
use mcost_core::model::LRMC_VARS;
use mcost_core::pricing::{allocate_investment, cost_recovery, AllocationShare, LrmcProfile, RecoveryReport};
use mcost_core::verify::{cross_check, PriceCheck};
use mcost_core::{Decision, Params, Tolerances};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub objective_gap: f64,
    pub duality_gap: f64,
    pub decision_diff: f64,
    pub lambda_diff: f64,
    pub max_slackness: f64,
    pub price_check: PriceCheck,
    pub disagreements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub params: Params,
    pub group: InstanceGroup,
    pub profile: LrmcProfile,
    pub decision: Decision,
    pub lrmc: [f64; 2],
    pub srmc: SrmcResult<f64>,
    pub lrmc_recovery: RecoveryReport<f64>,
    pub srmc_recovery: RecoveryReport<f64>,
    pub allocation: Vec<AllocationShare<f64>>,
    pub verdict: Verdict,
}

pub fn evaluate(params: &Params, tol: &Tolerances) -> Result<RunReport, CliError> {
    params.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    let group = classify_with(params, tol.bound).map_err(|e| CliError::Validation(e.to_string()))?;
    let analytic =
        analytic_solution(params, &group).map_err(|e| CliError::Verification(e.to_string()))?;
    let check = cross_check(params, tol).map_err(|e| CliError::Verification(e.to_string()))?;
    let decision = analytic.decision.clone();
    let srmc = compute_srmc_with(params, &decision.invest, default_epsilon(params), tol)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    let recovery = |prices: &[f64; 2]| {
        cost_recovery(prices, &decision, params, tol).map_err(|e| CliError::Verification(e.to_string()))
    };
    let lrmc_recovery = recovery(&analytic.lrmc)?;
    let srmc_recovery = recovery(&srmc.resolved)?;
    Ok(RunReport {
        params: params.clone(),
        group,
        profile: LrmcProfile::new(analytic.profile, analytic.profile_tech)
            .map_err(|e| CliError::Verification(e.to_string()))?,
        lrmc: analytic.lrmc,
        allocation: allocate_investment(&decision, params, tol),
        decision,
        srmc,
        lrmc_recovery,
        srmc_recovery,
        verdict: Verdict {
            pass: check.pass(),
            objective_gap: check.objective_gap,
            duality_gap: check.duality_gap,
            decision_diff: check.decision_diff,
            lambda_diff: check.lambda_diff,
            max_slackness: check.slackness.max_residual,
            price_check: check.price_check,
            disagreements: check.disagreements,
        },
    })
}

fn pair(v: &[f64; 2]) -> String {
    format!("({}, {})", v[0], v[1])
}

fn bound(v: &Option<f64>) -> String {
    v.map_or_else(|| "inf".to_string(), |x| x.to_string())
}

fn recovered(r: &RecoveryReport<f64>) -> &'static str {
    if r.recovered {
        "recovered"
    } else {
        "not recovered"
    }
}

pub fn render_text(r: &RunReport) -> String {
    let mut s = String::new();
    let (off, peak) = r.profile.formula();
    let tech = r.profile.tech.map(|t| format!(" g={}", t.symbol())).unwrap_or_default();
    let _ = writeln!(
        s,
        "group        {} (cluster {}, peak period {}{})",
        r.group.id,
        r.group.cluster,
        r.group.peak,
        if r.group.boundary { ", boundary" } else { "" }
    );
    let _ = writeln!(s, "profile      {}{tech}: off-peak {off}, peak {peak}", r.profile.id);
    let x = r.decision.to_vec();
    let decision: Vec<String> = LRMC_VARS.iter().zip(&x).map(|(n, v)| format!("{n}={v}")).collect();
    let _ = writeln!(s, "decision     {}", decision.join(" "));
    let _ = writeln!(s, "LRMC         {}", pair(&r.lrmc));
    let _ = writeln!(
        s,
        "SRMC         {}  eps={}  intervals [{}, {}] [{}, {}]  rules {} {}",
        pair(&r.srmc.resolved),
        r.srmc.epsilon,
        bound(&r.srmc.intervals[0].lo),
        bound(&r.srmc.intervals[0].hi),
        bound(&r.srmc.intervals[1].lo),
        bound(&r.srmc.intervals[1].hi),
        r.srmc.rules[0].label(),
        r.srmc.rules[1].label(),
    );
    for (name, rec) in [("LRMC", &r.lrmc_recovery), ("SRMC", &r.srmc_recovery)] {
        let _ = writeln!(
            s,
            "{name} profit  {} = revenue {} - cost {} ({})",
            rec.profit,
            rec.revenue,
            rec.total_cost,
            recovered(rec)
        );
    }
    if r.allocation.is_empty() {
        let _ = writeln!(s, "allocation   none");
    }
    for a in &r.allocation {
        let _ = writeln!(
            s,
            "allocation   {}: peak {} off-peak {} ({:?})",
            a.option.label(),
            a.peak,
            a.off_peak,
            a.rule
        );
    }
    let v = &r.verdict;
    let _ = writeln!(
        s,
        "cross-check  {} (objective gap {:e}, duality gap {:e}, slackness {:e}, prices {:?})",
        if v.pass { "pass" } else { "FAIL" },
        v.objective_gap,
        v.duality_gap,
        v.max_slackness,
        v.price_check
    );
    for d in &v.disagreements {
        let _ = writeln!(s, "  {d}");
    }
    s
}

pub const RUN_CSV_HEADER: [&str; 24] = [
    "group", "cluster", "peak", "profile", "I_r1", "I_r2", "I_f1", "I_f2", "P_r1", "P_r2", "P_f1", "P_f2",
    "L1", "L2", "lambda1", "lambda2", "srmc1", "srmc2", "profit_lrmc", "profit_srmc", "recovered_lrmc",
    "recovered_srmc", "boundary", "cross_check",
];

pub fn render_csv(r: &RunReport) -> Result<String, CliError> {
    let mut row = vec![
        r.group.id.to_string(),
        r.group.cluster.to_string(),
        r.group.peak.to_string(),
        r.profile.id.to_string(),
    ];
    row.extend(r.decision.to_vec().iter().map(f64::to_string));
    row.extend(r.lrmc.iter().chain(&r.srmc.resolved).map(f64::to_string));
    row.push(r.lrmc_recovery.profit.to_string());
    row.push(r.srmc_recovery.profit.to_string());
    row.push(r.lrmc_recovery.recovered.to_string());
    row.push(r.srmc_recovery.recovered.to_string());
    row.push(r.group.boundary.to_string());
    row.push(if r.verdict.pass { "pass" } else { "fail" }.to_string());
    crate::csv_string(&RUN_CSV_HEADER, std::iter::once(row))
}

pub fn render_json(r: &RunReport) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(r).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical(cl: f64) -> Params {
        Params::new(60.0, 1.0, 3000.0, 82.0, 20.0, 4000.0, cl, 2000.0, 8000.0)
    }

    #[test]
    fn canonical_report() {
        let r = evaluate(&canonical(200.0), &Tolerances::default()).unwrap();
        assert_eq!(r.group.id, 6);
        assert_eq!(r.profile.id, 6);
        assert_eq!(r.lrmc, [1.0, 102.0]);
        assert!((r.srmc.resolved[0] - 1.0).abs() < 1e-6);
        assert!((r.srmc.resolved[1] - 20.0).abs() < 1e-6);
        assert!(r.lrmc_recovery.recovered);
        assert!(!r.srmc_recovery.recovered);
        assert!(r.verdict.pass);
        let text = render_text(&r);
        assert!(text.starts_with("group        6 (cluster 1, peak period 2)"), "{text}");
        assert!(text.contains("LRMC         (1, 102)"));
    }

    #[test]
    fn cheap_loadshed_sheds_everything() {
        let r = evaluate(&canonical(20.0), &Tolerances::default()).unwrap();
        assert_eq!(r.group.id, 1);
        assert_eq!(r.lrmc, [20.0, 20.0]);
        assert_eq!(r.decision.loadshed, [2000.0, 8000.0]);
    }

    #[test]
    fn csv_has_one_row() {
        let r = evaluate(&canonical(200.0), &Tolerances::default()).unwrap();
        let csv = render_csv(&r).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("6,1,2,6,"), "{}", lines[1]);
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
    }

    #[test]
    fn json_round_trips_as_value() {
        let r = evaluate(&canonical(200.0), &Tolerances::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&render_json(&r).unwrap()).unwrap();
        assert_eq!(v["group"]["id"], 6);
        assert_eq!(v["verdict"]["pass"], true);
    }
}
