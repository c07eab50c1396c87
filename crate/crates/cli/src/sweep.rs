//! Parameter grids evaluated point by point.

use mcost_core::classify::{affordability, analytic_solution, classify_with};
use mcost_core::degeneracy::{compute_srmc_with, default_epsilon};
use mcost_core::pricing::{cost_recovery, LrmcProfile};
use mcost_core::{Params, Tolerances};
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub values: Vec<f64>,
    pub group: u8,
    pub profile: u8,
    pub lambda: [f64; 2],
    pub srmc: [f64; 2],
    pub profit_lrmc: f64,
    pub profit_srmc: f64,
    /// Number of generation options cheaper than loadshed.
    pub affordable: usize,
    pub boundary: bool,
}

pub fn evaluate_point(values: Vec<f64>, params: &Params, tol: &Tolerances) -> Result<SweepRow, CliError> {
    let at = |e: &dyn std::fmt::Display| format!("at {values:?}: {e}");
    params.validate().map_err(|e| CliError::Validation(at(&e)))?;
    let group = classify_with(params, tol.bound).map_err(|e| CliError::Validation(at(&e)))?;
    let ladder = affordability(params).map_err(|e| CliError::Validation(at(&e)))?;
    let a = analytic_solution(params, &group).map_err(|e| CliError::Verification(at(&e)))?;
    let srmc = compute_srmc_with(params, &a.decision.invest, default_epsilon(params), tol)
        .map_err(|e| CliError::Verification(at(&e)))?;
    let profit = |prices: &[f64; 2]| {
        cost_recovery(prices, &a.decision, params, tol)
            .map(|r| r.profit)
            .map_err(|e| CliError::Verification(at(&e)))
    };
    Ok(SweepRow {
        group: group.id,
        profile: LrmcProfile::of_group(group.id).id,
        lambda: a.lrmc,
        profit_lrmc: profit(&a.lrmc)?,
        profit_srmc: profit(&srmc.resolved)?,
        srmc: srmc.resolved,
        affordable: ladder.level(),
        boundary: group.boundary,
        values,
    })
}

/// Grid in row-major order: the first block is the outer loop.
pub fn grid(config: &ScenarioConfig) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for block in &config.sweep {
        let vals = block.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    points
}

pub fn run_sweep(config: &ScenarioConfig, tol: &Tolerances) -> Result<Vec<SweepRow>, CliError> {
    config.validate()?;
    if config.sweep.is_empty() {
        return Err(CliError::Validation("sweep needs at least one sweep block".into()));
    }
    grid(config)
        .into_iter()
        .map(|values| {
            let p = config.params_at(&values)?;
            evaluate_point(values, &p, tol)
        })
        .collect()
}

pub fn header(config: &ScenarioConfig) -> Vec<String> {
    config
        .sweep
        .iter()
        .map(|b| b.param.clone())
        .chain(
            [
                "group", "profile", "lambda1", "lambda2", "srmc1", "srmc2", "profit_lrmc", "profit_srmc",
                "affordable", "boundary",
            ]
            .map(String::from),
        )
        .collect()
}

pub fn record(row: &SweepRow) -> Vec<String> {
    let mut r: Vec<String> = row.values.iter().map(f64::to_string).collect();
    r.push(row.group.to_string());
    r.push(row.profile.to_string());
    r.extend(row.lambda.iter().chain(&row.srmc).map(f64::to_string));
    r.push(row.profit_lrmc.to_string());
    r.push(row.profit_srmc.to_string());
    r.push(row.affordable.to_string());
    r.push(row.boundary.to_string());
    r
}

pub fn render_csv(config: &ScenarioConfig, rows: &[SweepRow]) -> Result<String, CliError> {
    let h = header(config);
    let h: Vec<&str> = h.iter().map(String::as_str).collect();
    crate::csv_string(&h, rows.iter().map(record))
}

pub fn render_text(config: &ScenarioConfig, rows: &[SweepRow]) -> String {
    let mut table = vec![header(config)];
    table.extend(rows.iter().map(record));
    let cols = table[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for r in &table {
        let line: Vec<String> = r.iter().zip(&widths).map(|(v, w)| format!("{v:>w$}")).collect();
        s.push_str(line.join("  ").trim_end());
        s.push('\n');
    }
    s
}

/// Swept values at which the group changes between consecutive rows of a
/// one-dimensional sweep, each reported as the pair of neighbouring grid values.
pub fn group_changes(rows: &[SweepRow]) -> Vec<(f64, f64, u8, u8)> {
    rows.windows(2)
        .filter(|w| w[0].group != w[1].group)
        .map(|w| (w[0].values[0], w[1].values[0], w[0].group, w[1].group))
        .collect()
}
