use std::f64::consts::FRAC_PI_2;

use bounds::suites::{hybrid_suite, pair_suite, single_pair_suite};
use bounds::*;
use detection::{Backend, IdealReadout, MultiInput, PairInput, PairReadout};
use fock_core::random::{random_pure, seeded_rng};
use fock_core::state::{coherent_state, fock_state, tmsv_state};
use fock_core::{Exec, ModeSpace, State, C64};

const SEQ: Exec = Exec::Sequential;

fn consts() -> BoundConstants {
    BoundConstants::stated()
}

#[test]
fn vacuum_pair_has_zero_deviation() {
    let v: State = fock_state(&[0, 0], &[0, 0]).unwrap().into();
    let [a, b, c] = check_theorem1(&PairInput::Joint(v.clone()), 0.0, Backend::ExactFock, &consts(), SEQ).unwrap();
    assert_eq!(a.deviation, 0.0);
    assert!((a.upper_bound - 0.525 * 0.5).abs() < 1e-15);
    // vacuum: ideal <x^2> = 1/4, implemented z = 0
    assert!((b.deviation - 0.25).abs() < 1e-15);
    assert!(a.satisfied() && b.satisfied() && c.satisfied());
    for m in check_theorem4(&PairInput::Joint(v), 0.3, Backend::ExactFock, &consts(), SEQ).unwrap() {
        assert!(m.satisfied(), "{m:?}");
    }
}

#[test]
fn small_random_suites_hold() {
    let s = single_pair_suite(8, 100, &consts(), Exec::Parallel).unwrap();
    assert!(s.all_satisfied(), "min slack {}", s.min_slack());
    let s = pair_suite(4, 200, &consts(), Exec::Parallel).unwrap();
    assert!(s.all_satisfied(), "min slack {}", s.min_slack());
    let s = hybrid_suite(4, 300, &consts(), Exec::Parallel).unwrap();
    assert!(s.all_satisfied(), "min slack {}", s.min_slack());
    assert_eq!(s.comparisons.len(), 16);
}

#[test]
fn vacuum_pairs_joint() {
    let v: State = fock_state(&[0; 4], &[0; 4]).unwrap().into();
    let inp = MultiInput::Joint { state: v, pairs: vec![[0, 1], [2, 3]] };
    let m = check_theorem2(&inp, 0, PairReadout::Hom(0.0), 1, PairReadout::Hom(1.0), Backend::ExactFock, &consts(), SEQ)
        .unwrap();
    assert_eq!(m.ideal, 0.0);
    assert_eq!(m.implemented, 0.0);
    assert!(m.satisfied());
}

#[test]
fn centered_product_hybrid_has_zero_deviation() {
    let s1: State = fock_state(&[2], &[1]).unwrap().into();
    let pair: State = coherent_state(C64::new(0.4, 0.1), 14).unwrap().tensor(&fock_state(&[2], &[2]).unwrap()).into();
    let inp = MultiInput::Joint { state: s1.tensor(&pair), pairs: vec![[1, 2]] };
    for (f, s) in [
        (IdealReadout::Hom(0.4), PairReadout::Hom(0.0)),
        (IdealReadout::Het(1.0), PairReadout::Het(2.0)),
    ] {
        let m = check_theorem3_6(&inp, 0, f, 0, s, Backend::ExactFock, &consts(), SEQ).unwrap();
        assert!(m.deviation.abs() < 1e-12, "{m:?}");
    }
}

#[test]
fn tmsv_hybrid_cross_backend() {
    let sig: State = tmsv_state(0.3, 5).unwrap().into();
    let inp = MultiInput::CoherentLo { signals: sig, pairs: vec![(1, C64::new(3.0, 0.0))] };
    for (f, s) in [
        (IdealReadout::Hom(0.0), PairReadout::Hom(0.0)),
        (IdealReadout::Hom(FRAC_PI_2), PairReadout::Het(FRAC_PI_2)),
        (IdealReadout::Het(0.0), PairReadout::Het(0.0)),
        (IdealReadout::Het(0.0), PairReadout::Hom(0.0)),
    ] {
        let a = check_theorem3_6(&inp, 0, f, 0, s, Backend::CoherentLo, &consts(), SEQ).unwrap();
        let b = check_theorem3_6(&inp, 0, f, 0, s, Backend::ExactFock, &consts(), SEQ).unwrap();
        assert!(a.satisfied() && a.slack > 0.0, "{a:?}");
        assert!((a.deviation - b.deviation).abs() < 1e-8);
        assert!((a.weight - b.weight).abs() < 1e-8);
    }
}

#[test]
fn coherent_sandwich_at_two_hundred() {
    let inp = PairInput::CoherentProduct { alpha: C64::new(1.4, 0.0), beta: C64::new(200f64.sqrt(), 0.0) };
    let [a, b, _] = check_theorem1(&inp, 0.0, Backend::PoissonProduct, &consts(), Exec::Parallel).unwrap();
    assert!(a.satisfied() && b.satisfied(), "{a:?} {b:?}");
    let i = certified_interval(a.implemented, a.weight, Inequality::Lh1, &consts());
    assert!(i.contains(a.ideal, 1e-9));
    let i = certified_interval(b.implemented, b.weight, Inequality::Lh2, &consts());
    assert!(i.contains(b.ideal, 1e-9));
}

#[test]
fn intervals_cover_squashed_moments() {
    let space = ModeSpace::simplex(2, 3).unwrap().shared();
    let c = consts();
    let mut covered = 0;
    for seed in 0..200 {
        let psi: State = random_pure(space.clone(), &mut seeded_rng(seed)).unwrap().into();
        let [a, b, m] = check_theorem1(&PairInput::Joint(psi), 0.7, Backend::ExactFock, &c, SEQ).unwrap();
        let ok = certified_interval(a.implemented, a.weight, Inequality::Lh1, &c).contains(a.ideal, 1e-9)
            && certified_interval(b.implemented, b.weight, Inequality::Lh2, &c).contains(b.ideal, 1e-9)
            && certified_interval(m.implemented, m.weight, Inequality::Lh2m, &c).contains(m.ideal, 1e-9);
        covered += ok as usize;
    }
    assert_eq!(covered, 200);
}

#[test]
fn smaller_constants_never_flip_a_violation_into_satisfied() {
    // shrinking every constant can only lose verdicts, never gain them
    let space = ModeSpace::simplex(2, 3).unwrap().shared();
    let mut tight = consts();
    for i in Inequality::ALL {
        let (lo, hi) = tight.get(i);
        tight = tight.with(i, 0.9 * lo, 0.9 * hi);
    }
    for seed in 0..20 {
        let inp = PairInput::Joint(random_pure(space.clone(), &mut seeded_rng(seed)).unwrap().into());
        let a = check_theorem1(&inp, 0.2, Backend::ExactFock, &consts(), SEQ).unwrap();
        let b = check_theorem1(&inp, 0.2, Backend::ExactFock, &tight, SEQ).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.slack >= y.slack);
            assert!(!(y.satisfied() && !x.satisfied()));
        }
    }
}
