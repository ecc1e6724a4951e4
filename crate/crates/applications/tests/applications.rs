use std::f64::consts::FRAC_PI_2;

use applications::*;
use bounds::{check_theorem1, BoundConstants, Inequality};
use detection::{pair_statistics, Backend, MultiInput, PairInput, PairReadout};
use fock_core::operator::{quadrature_operator, quadrature_squared};
use fock_core::state::tmsv_state;
use fock_core::{Exec, State, C64};
use proptest::prelude::*;

const PAR: Exec = Exec::Parallel;

fn consts() -> BoundConstants {
    BoundConstants::stated()
}

fn point(v: f64) -> MomentInterval {
    MomentInterval { inequality: Inequality::Lh1, center: v, weight: 0.0, bounds: Interval::point(v), deficit: 0.0 }
}

/// Zero-width interval matrix from raw moments of two modes.
fn exact_cm(means: [[f64; 2]; 2], second: [[f64; 3]; 2], cross: [[f64; 2]; 2]) -> CovarianceInterval {
    let modes = (0..2)
        .map(|k| ModeMoments {
            label: format!("{k}"),
            x: point(means[k][0]),
            p: point(means[k][1]),
            x2: point(second[k][0]),
            p2: point(second[k][1]),
            xp: point(second[k][2]),
        })
        .collect();
    let entries = [[point(cross[0][0]), point(cross[0][1])], [point(cross[1][0]), point(cross[1][1])]];
    CovarianceInterval { modes, cross: vec![CrossBlock { k: 0, l: 1, entries }] }
}

fn ideal_tmsv_cm(r: f64) -> CovarianceInterval {
    // Gaussian closed form with vacuum variance 1/4
    let (c, s) = ((2.0 * r).cosh() / 4.0, (2.0 * r).sinh() / 4.0);
    exact_cm([[0.0; 2]; 2], [[c, c, 0.0]; 2], [[s, 0.0], [0.0, -s]])
}

#[test]
fn vacuum_pair_widths_follow_the_half_weight() {
    let v: State = fock_fock_vacuum();
    let input = MultiInput::CoherentLo { signals: v, pairs: vec![(0, C64::new(0.0, 0.0)), (1, C64::new(0.0, 0.0))] };
    let data = measure(&input, None, Backend::CoherentLo, PAR).unwrap();
    let cm = estimate_covariance(&data, &consts()).unwrap();
    for m in &cm.modes {
        assert!((m.x.weight - 0.5).abs() < 1e-14);
        for e in [&m.x, &m.p, &m.x2, &m.p2, &m.xp] {
            assert!(e.center.abs() < 1e-14);
        }
        assert!((m.x.bounds.hi - 0.525 * 0.5).abs() < 1e-12);
        assert!((m.x2.bounds.lo + 0.162 * 0.5).abs() < 1e-12);
        assert!((m.x2.bounds.hi - 1.085 * 0.5).abs() < 1e-12);
        assert!((m.xp.bounds.hi - 0.622 * 0.5).abs() < 1e-12);
        // squashed vacuum has <x^2> = 1/4
        assert!(m.x2.bounds.contains(0.25));
    }
}

fn fock_fock_vacuum() -> State {
    fock_core::state::fock_state(&[0, 0], &[0, 0]).unwrap().into()
}

#[test]
fn missing_settings_are_rejected() {
    let input = PairInput::CoherentProduct { alpha: C64::new(0.5, 0.0), beta: C64::new(3.0, 0.0) };
    let mut pd = measure_pair(&input, "a", Backend::PoissonProduct, PAR).unwrap();
    assert!(estimate_covariance(&DetectorData { pairs: vec![pd.clone()], cross: vec![] }, &consts()).is_ok());
    pd.hom.settings.retain(|s| s.0 != FRAC_PI_2);
    let err = estimate_covariance(&DetectorData { pairs: vec![pd.clone()], cross: vec![] }, &consts()).unwrap_err();
    assert!(matches!(err, ApplicationsError::InvalidInput(_)));
    // two pairs without cross terms
    let pd = measure_pair(&input, "a", Backend::PoissonProduct, PAR).unwrap();
    let two = DetectorData { pairs: vec![pd.clone(), pd], cross: vec![] };
    assert!(estimate_covariance(&two, &consts()).is_err());
}

#[test]
fn coherent_signal_interval_at_four_hundred() {
    let input = PairInput::CoherentProduct { alpha: C64::new(1.4, 0.0), beta: C64::new(20.0, 0.0) };
    let pd = measure_pair(&input, "s", Backend::PoissonProduct, PAR).unwrap();
    let cm = estimate_covariance(&DetectorData { pairs: vec![pd], cross: vec![] }, &consts()).unwrap();
    let x = cm.modes[0].x;
    assert!((x.bounds.width() - 2.0 * 0.525 * x.weight).abs() < 1e-12);
    assert!(x.bounds.width() < 0.03, "{}", x.bounds.width());
    assert!(x.bounds.contains(1.4));
    let [first, second, _] = check_theorem1(&input, 0.0, Backend::PoissonProduct, &consts(), PAR).unwrap();
    assert!(x.bounds.contains(first.ideal));
    assert!(cm.modes[0].x2.bounds.contains(second.ideal));
}

#[test]
fn widths_shrink_with_the_lo() {
    let mut last = f64::INFINITY;
    for b2 in [25.0f64, 100.0, 400.0] {
        let input = PairInput::CoherentProduct { alpha: C64::new(1.4, 0.0), beta: C64::new(b2.sqrt(), 0.0) };
        let pd = measure_pair(&input, "s", Backend::PoissonProduct, PAR).unwrap();
        let cm = estimate_covariance(&DetectorData { pairs: vec![pd], cross: vec![] }, &consts()).unwrap();
        let w = cm.modes[0].x.bounds.width();
        assert!(w < last);
        last = w;
    }
}

#[test]
fn duan_on_exact_matrices() {
    // vacuum: sum is exactly the separable bound
    let vac = exact_cm([[0.0; 2]; 2], [[0.25, 0.25, 0.0]; 2], [[0.0; 2]; 2]);
    let w = duan_witness(&vac).unwrap();
    assert_eq!(w.worst_case, 1.0);
    assert_eq!(w.verdict, WitnessVerdict::Inconclusive);

    let w = duan_witness(&ideal_tmsv_cm(0.5)).unwrap();
    assert!((w.worst_case - (-1.0f64).exp()).abs() < 1e-15);
    assert!(w.certified());

    let mut wide = ideal_tmsv_cm(0.5);
    for e in wide.entries_mut() {
        e.bounds = e.bounds.widen(1.0);
    }
    assert!(!duan_witness(&wide).unwrap().certified());

    let mut broken = ideal_tmsv_cm(0.5);
    broken.modes[1].p2.bounds = Interval::new(1.0, 0.0);
    let w = duan_witness(&broken).unwrap();
    assert_eq!(w.verdict, WitnessVerdict::Inconclusive);

    let mut one = ideal_tmsv_cm(0.5);
    one.modes.pop();
    assert!(duan_witness(&one).is_err());
}

#[test]
fn duan_worst_case_is_attained_by_a_corner() {
    // brute force over the corners of a small box with means straddling
    let mut cm = ideal_tmsv_cm(0.3);
    for (i, e) in cm.entries_mut().into_iter().enumerate() {
        let w = 0.01 * (1 + i % 3) as f64;
        e.bounds = e.bounds.widen(w);
    }
    let w = duan_witness(&cm).unwrap();
    let (a, b) = (&cm.modes[0], &cm.modes[1]);
    let blk = &cm.cross[0].entries;
    let ends = |i: Interval| [i.lo, i.mid(), i.hi];
    let mut best = f64::NEG_INFINITY;
    for x1 in ends(a.x.bounds) {
        for x2 in ends(b.x.bounds) {
            for p1 in ends(a.p.bounds) {
                for p2 in ends(b.p.bounds) {
                    let s = a.x2.bounds.hi + b.x2.bounds.hi + a.p2.bounds.hi + b.p2.bounds.hi - 2.0 * blk[0][0].bounds.lo
                        + 2.0 * blk[1][1].bounds.hi
                        - (x1 - x2).powi(2)
                        - (p1 + p2).powi(2);
                    best = best.max(s);
                }
            }
        }
    }
    assert!((w.worst_case - best).abs() < 1e-15, "{} vs {best}", w.worst_case);
}

fn arb_cm() -> impl Strategy<Value = CovarianceInterval> {
    (prop::collection::vec(-1.0f64..1.0, 14), prop::collection::vec(0.0f64..0.2, 14)).prop_map(|(c, w)| {
        let mut cm = exact_cm(
            [[c[0], c[1]], [c[2], c[3]]],
            [[c[4].abs(), c[5].abs(), c[6]], [c[7].abs(), c[8].abs(), c[9]]],
            [[c[10], c[11]], [c[12], c[13]]],
        );
        for (e, w) in cm.entries_mut().into_iter().zip(w) {
            e.bounds = e.bounds.widen(w);
        }
        cm
    })
}

proptest! {
    #[test]
    fn enlarging_an_interval_never_helps(cm in arb_cm(), which in 0usize..14, lo in 0.0f64..0.5, hi in 0.0f64..0.5) {
        let before = duan_witness(&cm).unwrap();
        let mut bigger = cm.clone();
        let e = bigger.entries_mut().into_iter().nth(which).unwrap();
        e.bounds = Interval::new(e.bounds.lo - lo, e.bounds.hi + hi);
        let after = duan_witness(&bigger).unwrap();
        prop_assert!(after.worst_case >= before.worst_case);
        if !before.certified() {
            prop_assert!(!after.certified());
        }
    }

    #[test]
    fn centered_entries_enclose_point_values(cm in arb_cm(), t in prop::collection::vec(0.0f64..=1.0, 14)) {
        // pick a point in every interval and compare with the enclosure
        let pick = |i: Interval, s: f64| i.lo + s * (i.hi - i.lo);
        let vals: Vec<f64> = cm.entries().iter().zip(&t).map(|(e, &s)| pick(e.bounds, s)).collect();
        let c = cm.centered().unwrap();
        let (x1, p1, x2, p2) = (vals[0], vals[1], vals[5], vals[6]);
        prop_assert!(c[0][0].contains(vals[2] - x1 * x1) || (c[0][0].lo - (vals[2] - x1 * x1)).abs() < 1e-12);
        prop_assert!(c[3][3].contains(vals[8] - p2 * p2) || (c[3][3].hi - (vals[8] - p2 * p2)).abs() < 1e-12);
        prop_assert!(c[0][2].contains(vals[10] - x1 * x2) || (c[0][2].lo - (vals[10] - x1 * x2)).abs() < 1e-12);
        prop_assert!(c[1][3].contains(vals[13] - p1 * p2) || (c[1][3].hi - (vals[13] - p1 * p2)).abs() < 1e-12);
    }
}

#[test]
fn cross_terms_match_pair_statistics() {
    let s: State = tmsv_state(0.4, 10).unwrap().into();
    let beta = C64::new(2.0, 0.0);
    let input = MultiInput::CoherentLo { signals: s, pairs: vec![(0, beta), (1, beta)] };
    let data = measure(&input, None, Backend::CoherentLo, PAR).unwrap();
    for c in &data.cross {
        let r = pair_statistics(&input, 0, PairReadout::Hom(c.theta_k), 1, PairReadout::Hom(c.theta_l), Backend::CoherentLo, PAR)
            .unwrap();
        assert!((r.correlation - c.corr.correlation).abs() < 1e-12);
        assert!((r.d - c.corr.d).abs() < 1e-12);
    }
}

#[test]
fn squashed_moments_lie_in_the_intervals() {
    let s: State = tmsv_state(0.5, tmsv_cutoff(0.5, 1e-12)).unwrap().into();
    let beta = C64::new(5.0, 0.0);
    let input = MultiInput::CoherentLo { signals: s, pairs: vec![(0, beta), (1, beta)] };
    let cm = estimate_covariance(&measure(&input, None, Backend::CoherentLo, PAR).unwrap(), &consts()).unwrap();
    let ideal = |p: usize, q: &dyn Fn(u32) -> fock_core::Operator| {
        let op = input.ideal_operator(p, q).unwrap();
        input.expect(&[(&input.pair_modes(p), &op)]).unwrap()
    };
    for p in 0..2 {
        let m = &cm.modes[p];
        assert!(m.x.bounds.contains(ideal(p, &|c| quadrature_operator(0.0, c))));
        assert!(m.p.bounds.contains(ideal(p, &|c| quadrature_operator(FRAC_PI_2, c))));
        assert!(m.x2.bounds.contains(ideal(p, &|c| quadrature_squared(0.0, c))));
        assert!(m.p2.bounds.contains(ideal(p, &|c| quadrature_squared(FRAC_PI_2, c))));
    }
    for (a, ta) in [0.0, FRAC_PI_2].into_iter().enumerate() {
        for (b, tb) in [0.0, FRAC_PI_2].into_iter().enumerate() {
            let xk = input.ideal_operator(0, |c| quadrature_operator(ta, c)).unwrap();
            let xl = input.ideal_operator(1, |c| quadrature_operator(tb, c)).unwrap();
            let v = input.expect(&[(&[0], &xk), (&[1], &xl)]).unwrap();
            assert!(cm.cross[0].entries[a][b].bounds.contains(v), "({a},{b}) {v}");
        }
    }
}

#[test]
fn tmsv_is_certified_at_one_hundred_lo_photons() {
    let r = entanglement_demo(0.5, C64::new(10.0, 0.0), Backend::CoherentLo, &consts(), PAR).unwrap();
    assert!(r.witness.certified(), "margin {}", r.witness.margin);
    assert!(r.witness.margin < r.ideal_margin);
    assert!((r.ideal_sum - (-1.0f64).exp()).abs() < 1e-15);
}

#[test]
fn margin_grows_toward_the_ideal_one() {
    let mut last = f64::NEG_INFINITY;
    for b2 in [25.0f64, 100.0, 400.0] {
        let r = entanglement_demo(0.5, C64::new(b2.sqrt(), 0.0), Backend::CoherentLo, &consts(), PAR).unwrap();
        assert!(r.witness.margin > last);
        assert!(r.witness.margin < r.ideal_margin);
        last = r.witness.margin;
    }
}

#[test]
fn product_states_are_never_certified() {
    let k = consts();
    for (label, s) in designed_separable_states().unwrap() {
        for b2 in [9.0f64, 25.0, 100.0] {
            let (_, w) = separable_witness(&s, [C64::new(b2.sqrt(), 0.0); 2], Backend::CoherentLo, &k, PAR).unwrap();
            assert!(!w.certified(), "{label} at {b2}: margin {}", w.margin);
        }
    }
    for b2 in [9.0f64, 100.0, 400.0] {
        let r = entanglement_demo(0.0, C64::new(b2.sqrt(), 0.0), Backend::CoherentLo, &k, PAR).unwrap();
        assert!(!r.witness.certified());
    }
}

#[test]
fn exact_and_coherent_lo_backends_agree() {
    let beta = C64::new(3.0, 0.0);
    let a = entanglement_demo(0.5, beta, Backend::ExactFock, &consts(), PAR).unwrap();
    let b = entanglement_demo(0.5, beta, Backend::CoherentLo, &consts(), PAR).unwrap();
    assert_eq!(a.witness.verdict, b.witness.verdict);
    assert!((a.witness.worst_case - b.witness.worst_case).abs() < 1e-8);
    assert!(entanglement_demo(0.5, beta, Backend::PoissonProduct, &consts(), PAR).is_err());
}
