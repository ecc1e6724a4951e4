//! Two-mode squeezed vacuum against the sum criterion, plus the states that
//! must never be certified.

use applications::{designed_separable_states, entanglement_demo, separable_witness, CovarianceInterval, WitnessResult};
use bounds::BoundConstants;
use fock_core::{Exec, State, C64};

use crate::config::DemoConfig;
use crate::output::{flag, num, write_csv, write_text};
use crate::svg::{render, Chart, Series};
use crate::{CliError, Context, Outcome, Result};

#[derive(Clone, Debug)]
pub struct DemoRow {
    pub state: String,
    /// True for states separable by construction.
    pub separable: bool,
    pub beta2: f64,
    pub covariance: CovarianceInterval,
    pub witness: WitnessResult,
    /// Margin of the untruncated state under ideal detection, where known.
    pub ideal_margin: Option<f64>,
    pub state_deficit: f64,
}

impl DemoRow {
    pub fn false_certification(&self) -> bool {
        self.separable && self.witness.certified()
    }
}

fn fail(what: &str, beta2: f64) -> impl FnOnce(applications::ApplicationsError) -> CliError + '_ {
    move |e| CliError::backend(format!("entanglement-demo, {what} at beta2 = {beta2}"), e)
}

pub fn squeezed_rows(cfg: &DemoConfig, consts: &BoundConstants, exec: Exec) -> Result<Vec<DemoRow>> {
    let backend = cfg.backend.backend();
    exec.map(&cfg.beta2, |&b2| {
        let rep = entanglement_demo(cfg.squeezing, C64::new(b2.sqrt(), 0.0), backend, consts, exec).map_err(fail("tmsv", b2))?;
        Ok(DemoRow {
            state: format!("tmsv(r={})", cfg.squeezing),
            separable: cfg.squeezing == 0.0,
            beta2: b2,
            covariance: rep.covariance,
            witness: rep.witness,
            ideal_margin: Some(rep.ideal_margin),
            state_deficit: rep.state_deficit,
        })
    })
    .into_iter()
    .collect()
}

/// r = 0 and every designed separable state at every separable LO intensity.
pub fn separable_rows(cfg: &DemoConfig, consts: &BoundConstants, exec: Exec) -> Result<Vec<DemoRow>> {
    let backend = cfg.backend.backend();
    let states = designed_separable_states().map_err(fail("designed states", 0.0))?;
    let jobs: Vec<(usize, f64)> =
        (0..states.len()).flat_map(|i| cfg.separable_beta2.iter().map(move |&b| (i, b))).collect();
    exec.map(&jobs, |&(i, b2)| {
        let (label, state): &(String, State) = &states[i];
        let beta = C64::new(b2.sqrt(), 0.0);
        let (covariance, witness) = separable_witness(state, [beta, beta], backend, consts, exec).map_err(fail(label, b2))?;
        Ok(DemoRow {
            state: label.clone(),
            separable: true,
            beta2: b2,
            covariance,
            witness,
            ideal_margin: None,
            state_deficit: state.deficit(),
        })
    })
    .into_iter()
    .collect()
}

fn verdict(w: &WitnessResult) -> &'static str {
    if w.certified() {
        "entangled-certified"
    } else {
        "inconclusive"
    }
}

pub const HEADER: [&str; 9] =
    ["state", "separable", "beta2", "verdict", "margin", "worst_case", "ideal_margin", "state_deficit", "deficit"];

pub const COVARIANCE_HEADER: [&str; 10] =
    ["state", "beta2", "entry", "inequality", "center", "weight", "lower", "upper", "width", "deficit"];

fn covariance_rows(r: &DemoRow) -> Vec<Vec<String>> {
    let cm = &r.covariance;
    let mut named = Vec::new();
    for m in &cm.modes {
        for (k, e) in [("x", &m.x), ("p", &m.p), ("x2", &m.x2), ("p2", &m.p2), ("xp", &m.xp)] {
            named.push((format!("{}.{k}", m.label), e));
        }
    }
    for b in &cm.cross {
        let (a, c) = (&cm.modes[b.k].label, &cm.modes[b.l].label);
        for (i, qi) in ["x", "p"].iter().enumerate() {
            for (j, qj) in ["x", "p"].iter().enumerate() {
                named.push((format!("{a}.{qi} {c}.{qj}"), &b.entries[i][j]));
            }
        }
    }
    named
        .into_iter()
        .map(|(name, e)| {
            vec![
                r.state.clone(),
                num(r.beta2),
                name,
                e.inequality.label().to_string(),
                num(e.center),
                num(e.weight),
                num(e.bounds.lo),
                num(e.bounds.hi),
                num(e.bounds.width()),
                num(e.deficit),
            ]
        })
        .collect()
}

pub fn run(cfg: &DemoConfig, consts: &BoundConstants, ctx: &Context) -> Result<Outcome> {
    cfg.validate()?;
    let squeezed = squeezed_rows(cfg, consts, ctx.exec)?;
    let separable = if cfg.separable { separable_rows(cfg, consts, ctx.exec)? } else { Vec::new() };
    let all: Vec<&DemoRow> = squeezed.iter().chain(&separable).collect();
    let rows: Vec<Vec<String>> = all
        .iter()
        .map(|r| {
            vec![
                r.state.clone(),
                flag(r.separable),
                num(r.beta2),
                verdict(&r.witness).to_string(),
                num(r.witness.margin),
                num(r.witness.worst_case),
                r.ideal_margin.map(num).unwrap_or_default(),
                num(r.state_deficit),
                num(r.witness.deficit),
            ]
        })
        .collect();
    let cov: Vec<Vec<String>> = all.iter().flat_map(|r| covariance_rows(r)).collect();
    let mut margin: Vec<(f64, f64)> = squeezed.iter().map(|r| (r.beta2, r.witness.margin)).collect();
    margin.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ideal = squeezed.first().and_then(|r| r.ideal_margin).unwrap_or(0.0);
    let chart = Chart {
        title: format!("sum criterion margin, tmsv r = {}", cfg.squeezing),
        x_label: "LO photons |beta|^2".into(),
        y_label: "1 - worst-case sum".into(),
        bands: Vec::new(),
        series: vec![
            Series { name: "certified margin".into(), color: "#3366cc", dashed: false, points: margin.clone() },
            Series {
                name: "ideal margin".into(),
                color: "#222222",
                dashed: true,
                points: margin.iter().map(|p| (p.0, ideal)).collect(),
            },
            Series { name: "zero".into(), color: "#cc3333", dashed: true, points: margin.iter().map(|p| (p.0, 0.0)).collect() },
        ],
    };
    let files = vec![
        write_csv(&ctx.out, "demo.csv", &HEADER, &rows)?,
        write_csv(&ctx.out, "demo_covariance.csv", &COVARIANCE_HEADER, &cov)?,
        write_text(&ctx.out, "demo.svg", &render(&[chart]))?,
    ];
    let false_certs: Vec<&DemoRow> = all.iter().copied().filter(|r| r.false_certification()).collect();
    let top = squeezed.iter().max_by(|a, b| a.beta2.total_cmp(&b.beta2)).expect("beta2 is non-empty");
    let missed = cfg.expect_certified && cfg.squeezing > 0.0 && !top.witness.certified();
    let mut summary: Vec<String> = squeezed
        .iter()
        .map(|r| format!("{} at beta2 = {}: {} (margin {})", r.state, num(r.beta2), verdict(&r.witness), num(r.witness.margin)))
        .collect();
    if cfg.separable {
        summary.push(format!("{} separable cases, {} certified", separable.len(), false_certs.len()));
    }
    for r in &false_certs {
        summary.push(format!("  false certification: {} at beta2 = {}", r.state, num(r.beta2)));
    }
    if missed {
        summary.push(format!("squeezed state not certified at beta2 = {}", num(top.beta2)));
    }
    Ok(Outcome { passed: false_certs.is_empty() && !missed, summary, files })
}
