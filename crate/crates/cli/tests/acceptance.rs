//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines always reach the terminal.
//!
//! Criterion 5 is known to print FAIL: two quoted constant decimals disagree
//! with the closed forms. That outcome is reported as is; the target only
//! fails when a criterion deviates from its recorded status.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use bounds::suites::{hybrid_suite, pair_suite, single_pair_suite};
use bounds::{BoundConstants, Inequality};
use detection::{distribution, hom_moments, Backend, Detector, PairInput, HOM_SETTINGS};
use fock_core::random::{random_density, random_pure, seeded_rng};
use fock_core::state::fock_state;
use fock_core::{Exec, ModeSpace, Operator, State, C64};
use nalgebra::DMatrix;
use rand::Rng;
use squash::{squash, squash_adjoint, SquashKraus};
use squash_cli::config::{DemoConfig, Figure3Config};
use squash_cli::{demo, figure3};
use verifier::{verify_appendix, AppendixSettings, ConstantId};

const EXEC: Exec = Exec::Parallel;

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line { pass, detail: detail.into() }
}

fn failed(e: impl std::fmt::Display) -> Line {
    line(false, format!("error: {e}"))
}

fn criterion1(consts: &BoundConstants) -> Line {
    let start = Instant::now();
    let cfg = Figure3Config::default();
    let rows = match figure3::sweep(&cfg, consts, EXEC) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    let secs = start.elapsed().as_secs_f64();
    // the plain tolerance, without the truncation allowance the CLI adds
    let tol = figure3::CONTAINMENT_TOLERANCE;
    let contained = rows.iter().all(|r| r.x.contains(r.squashed_x, tol) && r.x2.contains(r.squashed_x2, tol));
    let targets = rows.iter().all(|r| (r.ideal_x - 1.4).abs() < 1e-15 && (r.ideal_x2 - 2.21).abs() < 1e-14);
    let last = rows.last().expect("non-empty sweep");
    let half = last.x_halfwidth();
    let covers = rows.first().map(|r| r.beta2) == Some(10.0) && last.beta2 == 400.0;
    line(
        contained && targets && covers && half < 0.015 && secs < 120.0,
        format!(
            "{} points, targets contained: {contained}, halfwidth at 400 = {half:.5}, d_hom*400 = {:.3}, {secs:.1}s",
            rows.len(),
            last.d_hom * 400.0
        ),
    )
}

fn criterion2(consts: &BoundConstants) -> Line {
    let start = Instant::now();
    let run = || -> Result<_, bounds::BoundsError> {
        Ok([
            single_pair_suite(100, 1, consts, EXEC)?,
            pair_suite(50, 1, consts, EXEC)?,
            hybrid_suite(50, 1, consts, EXEC)?,
        ])
    };
    let suites = match run() {
        Ok(s) => s,
        Err(e) => return failed(e),
    };
    let secs = start.elapsed().as_secs_f64();
    let expected: [&[Inequality]; 3] = [
        &[Inequality::Lh1, Inequality::Lh2, Inequality::Lh2m, Inequality::Le1, Inequality::Le2, Inequality::Le2m],
        &[Inequality::LhLh, Inequality::LeLe, Inequality::LhLe],
        &[Inequality::GhLh, Inequality::GhLe, Inequality::GeLe, Inequality::GeLh],
    ];
    let mut ok = secs < 600.0;
    let mut parts = Vec::new();
    for (s, want) in suites.iter().zip(expected) {
        let seen: BTreeSet<&str> = s.comparisons.iter().map(|c| c.inequality.label()).collect();
        let covered = want.iter().all(|i| seen.contains(i.label()));
        let slack = s.comparisons.iter().all(|c| c.slack >= -1e-9);
        ok &= covered && slack && s.all_satisfied();
        parts.push(format!("{} {}/{}", s.name, s.comparisons.iter().filter(|c| c.satisfied()).count(), s.comparisons.len()));
    }
    let min = suites.iter().map(|s| s.min_slack()).fold(f64::INFINITY, f64::min);
    line(ok, format!("{}, min slack {min:.4}, {secs:.1}s", parts.join(", ")))
}

fn random_hermitian(d: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    &g + g.adjoint()
}

fn criterion3() -> Line {
    let run = || -> Result<(f64, f64), Box<dyn std::error::Error>> {
        let mut completeness: f64 = 0.0;
        for cs in 0..=6 {
            for cr in 0..=6 {
                completeness = completeness.max(SquashKraus::new(cs, cr)?.completeness_defect());
            }
        }
        let sp = ModeSpace::boxed(&[6, 6])?.shared();
        let mut rng = seeded_rng(2024);
        let mut duality: f64 = 0.0;
        for i in 0..50 {
            let rho = random_density(sp.clone(), 1 + i % 5, &mut rng)?;
            let x = Operator::new(ModeSpace::single(6).shared(), random_hermitian(7, &mut rng))?;
            let lhs = x.expect(&State::Mixed(squash(&rho)?))?;
            let rhs = squash_adjoint(&x, &sp)?.expect(&State::Mixed(rho))?;
            duality = duality.max((lhs - rhs).norm());
        }
        Ok((completeness, duality))
    };
    match run() {
        Ok((c, d)) => line(c <= 1e-12 && d <= 1e-11, format!("completeness defect {c:.1e}, duality error {d:.1e} on 50 pairs")),
        Err(e) => failed(e),
    }
}

fn criterion4() -> Line {
    let run = || -> Result<(f64, f64), Box<dyn std::error::Error>> {
        let dets = [Detector::Hom(0.0), Detector::Hom(PI / 4.0), Detector::Hom(1.1), Detector::Hom(PI / 2.0), Detector::Het];
        let mut rng = seeded_rng(77);
        let mut lo_diff: f64 = 0.0;
        for _ in 0..3 {
            let sig = State::from(random_pure(ModeSpace::single(5).shared(), &mut rng)?);
            for (b2, phase) in [(0.0, 0.0), (1.0, 0.3), (4.0, -1.2), (9.0, 0.0)] {
                let beta = C64::from_polar(f64::sqrt(b2), phase);
                let inp = PairInput::SignalWithCoherentLo { signal: sig.clone(), beta };
                for det in dets {
                    let a = distribution(&inp, det, Backend::ExactFock, None)?;
                    let b = distribution(&inp, det, Backend::CoherentLo, None)?;
                    lo_diff = lo_diff.max(a.max_abs_diff(&b));
                }
            }
        }
        let mut pp_diff: f64 = 0.0;
        for (alpha, beta) in [
            (C64::new(1.4, 0.0), C64::new(3.0, 0.0)),
            (C64::new(0.8, -0.3), C64::new(2.1, 2.1)),
            (C64::new(0.0, 1.0), C64::new(0.5, 0.0)),
        ] {
            let inp = PairInput::CoherentProduct { alpha, beta };
            for det in dets {
                let a = distribution(&inp, det, Backend::ExactFock, None)?;
                let b = distribution(&inp, det, Backend::PoissonProduct, None)?;
                pp_diff = pp_diff.max(a.max_abs_diff(&b));
            }
        }
        Ok((lo_diff, pp_diff))
    };
    match run() {
        Ok((a, b)) => line(a <= 1e-8 && b <= 1e-8, format!("exact vs coherent-LO {a:.1e}, exact vs Poisson {b:.1e}")),
        Err(e) => failed(e),
    }
}

/// The recorded status: everything passes except the quoted decimals of two
/// constants.
fn criterion5() -> (Line, bool) {
    let start = Instant::now();
    let rep = match verify_appendix(AppendixSettings::default(), EXEC) {
        Ok(r) => r,
        Err(e) => return (failed(e), false),
    };
    let secs = start.elapsed().as_secs_f64();
    let mism = rep.constants.mismatches();
    let rest = rep.diagonals_ok() && rep.families_ok() && rep.scalars_ok() && rep.identities_ok() && secs < 300.0;
    let known = mism == [ConstantId::C1, ConstantId::C23Minus];
    let detail = format!(
        "constants mismatched: [{}], diagonals {}, families {}, scalars {}, identities {}, {secs:.1}s",
        mism.iter().map(|c| c.label()).collect::<Vec<_>>().join(", "),
        rep.diagonals_ok(),
        rep.families_ok(),
        rep.scalars_ok(),
        rep.identities_ok()
    );
    (line(rep.passed() && secs < 300.0, detail), rest && (known || mism.is_empty()))
}

fn criterion6(consts: &BoundConstants) -> Line {
    let cfg = DemoConfig {
        beta2: vec![100.0],
        separable_beta2: vec![9.0, 25.0, 100.0, 400.0],
        ..DemoConfig::default()
    };
    let run = || -> squash_cli::Result<_> {
        let sq = demo::squeezed_rows(&cfg, consts, EXEC)?;
        let sep = demo::separable_rows(&cfg, consts, EXEC)?;
        Ok((sq, sep))
    };
    match run() {
        Ok((sq, sep)) => {
            let certified = sq[0].witness.certified();
            let false_certs = sep.iter().filter(|r| r.witness.certified()).count();
            let has_vacuum = sep.iter().any(|r| r.state == "tmsv(r=0)");
            line(
                certified && false_certs == 0 && has_vacuum,
                format!(
                    "r=0.5 at 100: certified {certified} (margin {:.4}); {} separable cases, {false_certs} certified",
                    sq[0].witness.margin,
                    sep.len()
                ),
            )
        }
        Err(e) => failed(e),
    }
}

/// f_hom / (N + 1) in exact rationals, written out from the definition.
fn f_over_n1(n1: i64, n2: i64, n0: i64) -> (i64, i64) {
    let s = n1 + n2;
    let d = n1 - n2;
    let delta = i64::from(n0 == 0);
    // 3/4 s^2 + 7/6 s + 1/2 = (9 s^2 + 14 s + 6) / 12
    let num = delta * (9 * s * s + 14 * s + 6) * (n0 + 1) * (n0 + 2) + 2 * d.pow(4);
    let den = 12 * (n0 + 1) * (n0 + 2) * (s + n0 + 1);
    (num, den)
}

fn criterion7() -> Line {
    // vacuum: every setting records (0, 0, 0)
    let (a, b) = f_over_n1(0, 0, 0);
    let vac_hand = a as f64 / b as f64;
    // |0>_s|1>_r: the LO photon reaches D0 with 1/2, D1 and D2 with 1/4 each,
    // at every phase
    let terms = [(f_over_n1(0, 0, 1), 2), (f_over_n1(1, 0, 0), 1), (f_over_n1(0, 1, 0), 1)];
    let (mut num, mut den) = (0i64, 1i64);
    for ((p, q), w) in terms {
        num = num * q * 4 + p * w * den;
        den *= q * 4;
    }
    let one_hand = num as f64 / den as f64;
    let by_build = |occ: &[u32]| -> Result<f64, detection::DetectionError> {
        let s: State = fock_state(occ, occ)?.into();
        Ok(hom_moments(&PairInput::Joint(s), &HOM_SETTINGS, Backend::ExactFock, EXEC)?.d_hom)
    };
    match (by_build(&[0, 0]), by_build(&[0, 1])) {
        (Ok(v), Ok(w)) => {
            let hand = vac_hand == 0.5 && num * 8 == den * 5 && one_hand == 0.625;
            line(
                hand && (v - 0.5).abs() <= 1e-15 && (w - 0.625).abs() <= 1e-15,
                format!("hand {vac_hand} and {num}/{den}; build {v} and {w}"),
            )
        }
        (Err(e), _) | (_, Err(e)) => failed(e),
    }
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let consts = BoundConstants::stated();
    let mut as_recorded = true;
    // the second value, when given, is the recorded status instead of a pass
    let mut report = |n: u32, l: Line, recorded: Option<bool>| {
        println!("criterion {n}: {} {}", if l.pass { "PASS" } else { "FAIL" }, l.detail);
        as_recorded &= recorded.unwrap_or(l.pass);
    };
    report(1, criterion1(&consts), None);
    report(2, criterion2(&consts), None);
    report(3, criterion3(), None);
    report(4, criterion4(), None);
    let (l, ok) = criterion5();
    report(5, l, Some(ok));
    report(6, criterion6(&consts), None);
    report(7, criterion7(), None);
    if as_recorded {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: a criterion deviates from its recorded status");
        ExitCode::FAILURE
    }
}
