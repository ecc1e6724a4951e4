//! The three random-state suites, one CSV row per comparison.

use bounds::suites::{hybrid_suite, pair_suite, single_pair_suite, SuiteReport};
use bounds::{BoundConstants, Verdict};
use fock_core::Exec;

use crate::config::BoundsCheckConfig;
use crate::output::{num, write_csv};
use crate::{CliError, Context, Outcome, Result};

pub fn suites(cfg: &BoundsCheckConfig, seed: u64, consts: &BoundConstants, exec: Exec) -> Result<Vec<SuiteReport>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let fail = |name: &'static str| move |e| CliError::backend(format!("bounds-check suite {name}"), e);
    if cfg.single_pair_states > 0 {
        out.push(single_pair_suite(cfg.single_pair_states, seed, consts, exec).map_err(fail("single-pair"))?);
    }
    if cfg.pair_states > 0 {
        out.push(pair_suite(cfg.pair_states, seed, consts, exec).map_err(fail("pair"))?);
    }
    if cfg.hybrid_states > 0 {
        out.push(hybrid_suite(cfg.hybrid_states, seed, consts, exec).map_err(fail("hybrid"))?);
    }
    Ok(out)
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::Violated => "violated",
        Verdict::Indeterminate => "indeterminate",
    }
}

pub const HEADER: [&str; 13] = [
    "suite",
    "row",
    "inequality",
    "ideal",
    "implemented",
    "deviation",
    "weight",
    "lower_bound",
    "upper_bound",
    "slack",
    "error_bound",
    "verdict",
    "deficit",
];

pub const SUMMARY_HEADER: [&str; 8] =
    ["suite", "states", "comparisons", "satisfied", "violated", "indeterminate", "min_slack", "deficit"];

pub fn run(cfg: &BoundsCheckConfig, consts: &BoundConstants, ctx: &Context) -> Result<Outcome> {
    let reports = suites(cfg, ctx.seed, consts, ctx.exec)?;
    let mut rows = Vec::new();
    let mut summary_rows = Vec::new();
    let mut summary = Vec::new();
    for r in &reports {
        for (i, c) in r.comparisons.iter().enumerate() {
            rows.push(vec![
                r.name.clone(),
                i.to_string(),
                c.inequality.label().to_string(),
                num(c.ideal),
                num(c.implemented),
                num(c.deviation),
                num(c.weight),
                num(c.lower_bound),
                num(c.upper_bound),
                num(c.slack),
                num(c.error_bound),
                verdict(c.verdict).to_string(),
                num(c.truncation_deficit),
            ]);
        }
        let deficit = r.comparisons.iter().map(|c| c.truncation_deficit).fold(0.0, f64::max);
        summary_rows.push(vec![
            r.name.clone(),
            r.states.to_string(),
            r.comparisons.len().to_string(),
            r.count(Verdict::Satisfied).to_string(),
            r.count(Verdict::Violated).to_string(),
            r.count(Verdict::Indeterminate).to_string(),
            num(r.min_slack()),
            num(deficit),
        ]);
        summary.push(format!(
            "{}: {} states, {}/{} comparisons satisfied, min slack {}",
            r.name,
            r.states,
            r.count(Verdict::Satisfied),
            r.comparisons.len(),
            num(r.min_slack())
        ));
    }
    let files = vec![
        write_csv(&ctx.out, "bounds_check.csv", &HEADER, &rows)?,
        write_csv(&ctx.out, "bounds_summary.csv", &SUMMARY_HEADER, &summary_rows)?,
    ];
    Ok(Outcome { passed: reports.iter().all(SuiteReport::all_satisfied), summary, files })
}
