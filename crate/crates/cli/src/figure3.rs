//! LO-intensity sweep for a coherent signal: implemented moments, the
//! certified intervals around them, and the targets they must contain.

use bounds::{certified_interval, check_theorem1, BoundConstants, CertifiedInterval, Inequality};
use detection::PairInput;
use fock_core::{Exec, C64};

use crate::config::Figure3Config;
use crate::output::{flag, num, write_csv, write_text};
use crate::svg::{render, Band, Chart, Series};
use crate::{CliError, Context, Outcome, Result};

pub const CONTAINMENT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Figure3Row {
    pub beta2: f64,
    pub z: f64,
    pub z2: f64,
    pub d_hom: f64,
    pub x: CertifiedInterval,
    pub x2: CertifiedInterval,
    /// Moments of the squashed (ideal-detector) state.
    pub squashed_x: f64,
    pub squashed_x2: f64,
    /// Moments of the signal itself.
    pub ideal_x: f64,
    pub ideal_x2: f64,
    pub deficit: f64,
    pub error_bound: f64,
}

impl Figure3Row {
    pub fn x_contained(&self) -> bool {
        self.x.contains(self.squashed_x, CONTAINMENT_TOLERANCE + self.error_bound)
    }

    pub fn x2_contained(&self) -> bool {
        self.x2.contains(self.squashed_x2, CONTAINMENT_TOLERANCE + self.error_bound)
    }

    pub fn x_halfwidth(&self) -> f64 {
        let (a, b) = self.x.halfwidths();
        a.max(b)
    }
}

pub fn point(cfg: &Figure3Config, beta2: f64, consts: &BoundConstants, exec: Exec) -> Result<Figure3Row> {
    let input = PairInput::CoherentProduct { alpha: C64::new(cfg.alpha, 0.0), beta: C64::new(beta2.sqrt(), 0.0) };
    let [first, second, _] = check_theorem1(&input, cfg.theta, cfg.backend.backend(), consts, exec)
        .map_err(|e| CliError::backend(format!("figure3 at beta2 = {beta2}"), e))?;
    let ideal_x = cfg.alpha * cfg.theta.cos();
    Ok(Figure3Row {
        beta2,
        z: first.implemented,
        z2: second.implemented,
        d_hom: first.weight,
        x: certified_interval(first.implemented, first.weight, Inequality::Lh1, consts),
        x2: certified_interval(second.implemented, second.weight, Inequality::Lh2, consts),
        squashed_x: first.ideal,
        squashed_x2: second.ideal,
        ideal_x,
        ideal_x2: ideal_x * ideal_x + 0.25,
        deficit: first.truncation_deficit.max(second.truncation_deficit),
        error_bound: first.error_bound.max(second.error_bound),
    })
}

/// Every sweep point, in sweep order.
pub fn sweep(cfg: &Figure3Config, consts: &BoundConstants, exec: Exec) -> Result<Vec<Figure3Row>> {
    cfg.validate()?;
    exec.map(&cfg.sweep(), |&b| point(cfg, b, consts, exec)).into_iter().collect()
}

pub const HEADER: [&str; 16] = [
    "beta2",
    "z",
    "z2",
    "d_hom",
    "x_lower",
    "x_upper",
    "x2_lower",
    "x2_upper",
    "squashed_x",
    "squashed_x2",
    "ideal_x",
    "ideal_x2",
    "x_contained",
    "x2_contained",
    "deficit",
    "error_bound",
];

pub fn rows(rows: &[Figure3Row]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                num(r.beta2),
                num(r.z),
                num(r.z2),
                num(r.d_hom),
                num(r.x.lower),
                num(r.x.upper),
                num(r.x2.lower),
                num(r.x2.upper),
                num(r.squashed_x),
                num(r.squashed_x2),
                num(r.ideal_x),
                num(r.ideal_x2),
                flag(r.x_contained()),
                flag(r.x2_contained()),
                num(r.deficit),
                num(r.error_bound),
            ]
        })
        .collect()
}

pub fn chart(cfg: &Figure3Config, data: &[Figure3Row]) -> String {
    let at = |f: &dyn Fn(&Figure3Row) -> f64| data.iter().map(|r| (r.beta2, f(r))).collect::<Vec<_>>();
    let moment = |name: &str, band: Vec<(f64, f64, f64)>, squashed: Vec<(f64, f64)>, ideal: Vec<(f64, f64)>| Chart {
        title: format!("{name}, alpha = {}, theta = {}", cfg.alpha, cfg.theta),
        x_label: "LO photons |beta|^2".into(),
        y_label: name.into(),
        bands: vec![Band { name: "certified".into(), color: "#3366cc", points: band }],
        series: vec![
            Series { name: "squashed".into(), color: "#cc3333", dashed: false, points: squashed },
            Series { name: "ideal".into(), color: "#222222", dashed: true, points: ideal },
        ],
    };
    render(&[
        moment(
            "first moment",
            data.iter().map(|r| (r.beta2, r.x.lower, r.x.upper)).collect(),
            at(&|r| r.squashed_x),
            at(&|r| r.ideal_x),
        ),
        moment(
            "second moment",
            data.iter().map(|r| (r.beta2, r.x2.lower, r.x2.upper)).collect(),
            at(&|r| r.squashed_x2),
            at(&|r| r.ideal_x2),
        ),
    ])
}

pub fn run(cfg: &Figure3Config, consts: &BoundConstants, ctx: &Context) -> Result<Outcome> {
    let data = sweep(cfg, consts, ctx.exec)?;
    let csv = write_csv(&ctx.out, "figure3.csv", &HEADER, &rows(&data))?;
    let svg = write_text(&ctx.out, "figure3.svg", &chart(cfg, &data))?;
    let missed: Vec<f64> = data.iter().filter(|r| !(r.x_contained() && r.x2_contained())).map(|r| r.beta2).collect();
    let last = data.last().expect("the sweep has at least one point");
    let mut summary = vec![
        format!("{} sweep points, backend {}", data.len(), cfg.backend.label()),
        format!(
            "at beta2 = {}: x in [{}, {}], x^2 in [{}, {}], d_hom = {}",
            num(last.beta2),
            num(last.x.lower),
            num(last.x.upper),
            num(last.x2.lower),
            num(last.x2.upper),
            num(last.d_hom)
        ),
    ];
    if missed.is_empty() {
        summary.push("every interval contains its squashed target".into());
    } else {
        summary.push(format!("targets outside the interval at beta2 = {missed:?}"));
    }
    Ok(Outcome { passed: missed.is_empty(), summary, files: vec![csv, svg] })
}
