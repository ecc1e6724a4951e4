use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use detection::*;
use fock_core::operator::{quadrature_operator, quadrature_squared};
use fock_core::random::{random_pure, seeded_rng};
use fock_core::state::{coherent_state, fock_state, tmsv_state};
use fock_core::{Exec, ModeSpace, State, C64};

const SEQ: Exec = Exec::Sequential;

fn fock(occ: &[u32]) -> State {
    let cut: Vec<u32> = occ.to_vec();
    fock_state(&cut, occ).unwrap().into()
}

fn coh(a: C64) -> State {
    coherent_state(a, 24).unwrap().into()
}

#[test]
fn vacuum_counts_nothing() {
    let v = PairInput::Joint(fock(&[0, 0]));
    let d = shd_distribution(&v, 0.3, Backend::ExactFock, None).unwrap();
    assert!((d.probability(&[0, 0, 0]) - 1.0).abs() < 1e-15);
    let d = shed_distribution(&v, Backend::ExactFock, None).unwrap();
    assert!((d.probability(&[0, 0, 0, 0, 0]) - 1.0).abs() < 1e-15);
}

#[test]
fn single_signal_photon_splits_evenly() {
    let inp = PairInput::Joint(fock(&[1, 0]));
    for t in [0.0, 0.7, 2.0] {
        let d = shd_distribution(&inp, t, Backend::ExactFock, None).unwrap();
        assert!((d.probability(&[0, 1, 0]) - 0.5).abs() < 1e-14);
        assert!((d.probability(&[0, 0, 1]) - 0.5).abs() < 1e-14);
        assert!(d.probability(&[1, 0, 0]).abs() < 1e-14);
    }
}

#[test]
fn single_lo_photon_in_heterodyne() {
    let inp = PairInput::Joint(fock(&[0, 1]));
    let d = shed_distribution(&inp, Backend::ExactFock, None).unwrap();
    assert!((d.probability(&[1, 0, 0, 0, 0]) - 0.5).abs() < 1e-14);
    for k in 1..5 {
        let mut c = [0u32; 5];
        c[k] = 1;
        assert!((d.probability(&c) - 0.125).abs() < 1e-14, "counter {k}");
    }
    assert!(d.mass_deficit().abs() < 1e-14);
}

// Independent two-branch enumeration for |0>_s |1>_r: the LO photon lands
// in D0 with probability 1/2 (f_hom vanishes there: no delta, no difference),
// otherwise in D1 or D2 at 1/4 each with f_hom(1,0,0) / 2 = 5/4.
fn d_hom_lo_photon_by_hand() -> (u64, u64) {
    // f_hom(1,0,0) in twelfths: 3/4 + 7/6 + 1/2 + 1/12 = 30/12
    let f100 = (9 + 14 + 6 + 1, 12);
    // per setting 2 * (1/4) * f100 / 2, and four settings at 1/4 each
    (f100.0 * 2, f100.1 * 4 * 2)
}

#[test]
fn d_hom_micro_oracles() {
    let (p, q) = d_hom_lo_photon_by_hand();
    assert_eq!(p * 8, q * 5);
    let settings = |s: State| -> Vec<OutcomeDistribution> {
        let inp = PairInput::Joint(s);
        HOM_SETTINGS.iter().map(|&t| shd_distribution(&inp, t, Backend::ExactFock, None).unwrap()).collect()
    };
    let v = expected_statistic(&settings(fock(&[0, 0])), Statistic::DHom).unwrap();
    assert!((v - 0.5).abs() < 1e-15);
    let v = expected_statistic(&settings(fock(&[0, 1])), Statistic::DHom).unwrap();
    assert!((v - 0.625).abs() < 1e-14);
    // the operator route agrees
    let r = hom_moments(&PairInput::Joint(fock(&[0, 1])), &[0.0], Backend::ExactFock, SEQ).unwrap();
    assert!((r.d_hom - 0.625).abs() < 1e-14);
}

#[test]
fn d_hom_needs_all_four_settings() {
    let inp = PairInput::Joint(fock(&[0, 0]));
    let d = vec![shd_distribution(&inp, 0.0, Backend::ExactFock, None).unwrap()];
    assert!(matches!(expected_statistic(&d, Statistic::DHom), Err(DetectionError::InvalidInput(_))));
}

#[test]
fn backend_input_pairing_is_checked() {
    let j = PairInput::Joint(fock(&[1, 1]));
    assert!(shd_distribution(&j, 0.0, Backend::PoissonProduct, None).is_err());
    assert!(shd_distribution(&j, 0.0, Backend::CoherentLo, None).is_err());
}

#[test]
fn coherent_lo_matches_exact_fock() {
    let mut rng = seeded_rng(11);
    let sig = State::from(random_pure(ModeSpace::single(5).shared(), &mut rng).unwrap());
    for beta in [C64::new(0.0, 0.0), C64::new(1.5, 0.4), C64::new(3.0, 0.0)] {
        let lo = PairInput::SignalWithCoherentLo { signal: sig.clone(), beta };
        for det in [Detector::Hom(0.0), Detector::Hom(1.1), Detector::Het] {
            let a = distribution(&lo, det, Backend::ExactFock, None).unwrap();
            let b = distribution(&lo, det, Backend::CoherentLo, None).unwrap();
            let diff = a.max_abs_diff(&b);
            assert!(diff <= 1e-8, "beta={beta} det={det:?} diff={diff:e}");
        }
    }
}

#[test]
fn poisson_product_matches_exact_fock() {
    let (alpha, beta) = (C64::new(0.8, -0.3), C64::new(2.1, 2.1));
    let inp = PairInput::CoherentProduct { alpha, beta };
    for det in [Detector::Hom(0.0), Detector::Hom(FRAC_PI_4), Detector::Het] {
        let a = distribution(&inp, det, Backend::ExactFock, None).unwrap();
        let b = distribution(&inp, det, Backend::PoissonProduct, None).unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-8, "{det:?}");
    }
    let r1 = hom_moments(&inp, &[0.0, 1.0], Backend::PoissonProduct, SEQ).unwrap();
    let r2 = hom_moments(&inp, &[0.0, 1.0], Backend::ExactFock, SEQ).unwrap();
    assert!((r1.d_hom - r2.d_hom).abs() < 1e-8);
    for t in [0.0, 1.0] {
        let (a, b) = (r1.at(t).unwrap(), r2.at(t).unwrap());
        assert!((a.0 - b.0).abs() < 1e-8 && (a.1 - b.1).abs() < 1e-8);
    }
}

#[test]
fn phase_covariance() {
    let mut rng = seeded_rng(5);
    let space = ModeSpace::simplex(2, 4).unwrap().shared();
    let psi = random_pure(space, &mut rng).unwrap();
    let theta = 0.9;
    // rotate the signal by e^{-i theta n_s}
    let amps = psi
        .amplitudes()
        .iter()
        .zip(psi.space().basis())
        .map(|(a, o)| a * C64::from_polar(1.0, -theta * o[0] as f64))
        .collect::<Vec<_>>();
    let rot = fock_core::PureState::new(psi.space().clone(), nalgebra::DVector::from_vec(amps), 0.0).unwrap();
    let a = shd_distribution(&PairInput::Joint(psi.into()), theta, Backend::ExactFock, None).unwrap();
    let b = shd_distribution(&PairInput::Joint(rot.into()), 0.0, Backend::ExactFock, None).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-12);
}

#[test]
fn d_hom_asymptote_at_large_lo() {
    let alpha = C64::new(1.4, 0.0);
    let inp = PairInput::CoherentProduct { alpha, beta: C64::new(10.0, 0.0) };
    let r = hom_moments(&inp, &[0.0], Backend::PoissonProduct, Exec::Parallel).unwrap();
    let a2 = 1.96;
    let asym = (a2 * a2 + 11.0 / 6.0 * a2 + 2.0 / 3.0) / 100.0;
    assert!((r.d_hom - asym).abs() / asym < 0.15, "d_hom={} asym={asym}", r.d_hom);
    assert!(r.deficit < 1e-10);
}

#[test]
fn effective_z_matches_distribution() {
    let inp = PairInput::SignalWithCoherentLo { signal: coh(C64::new(0.5, 0.2)), beta: C64::new(1.0, 1.0) };
    let d = shd_distribution(&inp, 0.4, Backend::ExactFock, None).unwrap();
    let z = expected_statistic(std::slice::from_ref(&d), Statistic::Z).unwrap();
    let r = hom_moments(&inp, &[0.4], Backend::CoherentLo, SEQ).unwrap();
    assert!((z - r.at(0.4).unwrap().0).abs() < 1e-9);
}

#[test]
fn het_report_matches_distribution() {
    let inp = PairInput::Joint(State::from(
        fock_core::state::fock_state(&[2, 2], &[1, 2]).unwrap(),
    ));
    let d = shed_distribution(&inp, Backend::ExactFock, None).unwrap();
    let r = het_moments(&inp, Backend::ExactFock, SEQ).unwrap();
    let dh = expected_statistic(std::slice::from_ref(&d), Statistic::DHet).unwrap();
    assert!((dh - r.d_het).abs() < 1e-12);
    let a2 = expected_statistic(std::slice::from_ref(&d), Statistic::AlphaTheta2(0.3)).unwrap();
    assert!((a2 - r.alpha_theta2(0.3)).abs() < 1e-12);
}

#[test]
fn sampling_is_deterministic_and_calibrated() {
    let d = OutcomeDistribution::new(Detector::Hom(0.0), vec![0, 1, 0, 0, 0, 1], vec![0.5, 0.5], 0.0).unwrap();
    let a = sample_counts(&d, 42, 1000).unwrap();
    assert_eq!(a, sample_counts(&d, 42, 1000).unwrap());
    let shots = 1_000_000;
    let s = sample_counts(&d, 7, shots).unwrap();
    let k = s.iter().filter(|c| c[1] == 1).count() as f64;
    let sigma = (shots as f64 * 0.25).sqrt();
    assert!((k - shots as f64 / 2.0).abs() < 5.0 * sigma);
    let point = OutcomeDistribution::new(Detector::Het, vec![0, 2, 0, 0, 1], vec![1.0], 0.0).unwrap();
    assert!(sample_counts(&point, 1, 50).unwrap().iter().all(|c| c == &[0, 2, 0, 0, 1]));
}

#[test]
fn vacuum_pairs_joint_moments() {
    let vac = fock(&[0, 0, 0, 0]);
    let inp = MultiInput::Joint { state: vac, pairs: vec![[0, 1], [2, 3]] };
    let c = pair_statistics(&inp, 0, PairReadout::Hom(0.0), 1, PairReadout::Hom(0.0), Backend::ExactFock, SEQ).unwrap();
    assert!(c.correlation.abs() < 1e-15);
    assert!((c.d - 0.5).abs() < 1e-14);
}

#[test]
fn independent_pairs_factorize() {
    let a = coh(C64::new(0.6, 0.1)).tensor(&coh(C64::new(1.2, 0.0)));
    let b = coh(C64::new(-0.4, 0.5)).tensor(&coh(C64::new(0.0, 1.0)));
    let (pa, pb) = (PairInput::Joint(a.clone()), PairInput::Joint(b.clone()));
    let inp = MultiInput::Joint { state: a.tensor(&b), pairs: vec![[0, 1], [2, 3]] };
    let c = pair_statistics(&inp, 0, PairReadout::Hom(0.3), 1, PairReadout::Het(1.0), Backend::ExactFock, SEQ).unwrap();
    let za = hom_moments(&pa, &[0.3], Backend::ExactFock, SEQ).unwrap().at(0.3).unwrap().0;
    let ab = het_moments(&pb, Backend::ExactFock, SEQ).unwrap().alpha_theta(1.0);
    assert!((c.correlation - za * ab).abs() < 1e-10);
}

fn tmsv(r: f64) -> State {
    tmsv_state(r, 5).unwrap().into()
}

#[test]
fn tmsv_pairs_cross_backend() {
    let beta = C64::new(3.0, 0.0);
    let inp = MultiInput::CoherentLo { signals: tmsv(0.3), pairs: vec![(0, beta), (1, beta)] };
    for (rk, rl) in [
        (PairReadout::Hom(0.0), PairReadout::Hom(FRAC_PI_2)),
        (PairReadout::Het(0.0), PairReadout::Hom(0.0)),
    ] {
        let a = pair_statistics(&inp, 0, rk, 1, rl, Backend::CoherentLo, SEQ).unwrap();
        let b = pair_statistics(&inp, 0, rk, 1, rl, Backend::ExactFock, SEQ).unwrap();
        assert!((a.correlation - b.correlation).abs() < 1e-8, "{rk:?} {rl:?}");
        assert!((a.d - b.d).abs() < 1e-8);
    }
}

#[test]
fn hybrid_product_and_vacuum_cases() {
    let s1 = coh(C64::new(0.7, -0.2));
    let pair = coh(C64::new(0.3, 0.3)).tensor(&coh(C64::new(1.0, 0.0)));
    let inp = MultiInput::Joint { state: s1.tensor(&pair), pairs: vec![[1, 2]] };
    let phi = 0.8;
    let h = hybrid_statistics(&inp, 0, IdealReadout::Hom(phi), 0, PairReadout::Hom(0.2), Backend::ExactFock, SEQ).unwrap();
    let x = quadrature_operator(phi, 24).expect(&s1).unwrap().re;
    let z = hom_moments(&PairInput::Joint(pair.clone()), &[0.2], Backend::ExactFock, SEQ).unwrap();
    assert!((h.correlation - x * z.at(0.2).unwrap().0).abs() < 1e-10);
    let x2 = quadrature_squared(0.0, 24).expect(&s1).unwrap().re + quadrature_squared(FRAC_PI_2, 24).expect(&s1).unwrap().re;
    assert!((h.weight - x2 * z.d_hom).abs() < 1e-10);

    let vac = fock(&[0]);
    let inp = MultiInput::Joint { state: vac.tensor(&pair), pairs: vec![[1, 2]] };
    let h = hybrid_statistics(&inp, 0, IdealReadout::Hom(0.0), 0, PairReadout::Hom(0.0), Backend::ExactFock, SEQ).unwrap();
    // vacuum: <x(0)^2> = <x(pi/2)^2> = 1/4
    assert!((h.weight - 0.5 * z.d_hom).abs() < 1e-12);
}

#[test]
fn hybrid_tmsv_cross_backend() {
    let beta = C64::new(0.0, 3.0);
    let inp = MultiInput::CoherentLo { signals: tmsv(0.3), pairs: vec![(1, beta)] };
    for (f, s) in [
        (IdealReadout::Hom(0.0), PairReadout::Hom(0.0)),
        (IdealReadout::Het(PI / 3.0), PairReadout::Het(0.5)),
    ] {
        let a = hybrid_statistics(&inp, 0, f, 0, s, Backend::CoherentLo, SEQ).unwrap();
        let b = hybrid_statistics(&inp, 0, f, 0, s, Backend::ExactFock, SEQ).unwrap();
        assert!((a.correlation - b.correlation).abs() < 1e-8, "{f:?} {s:?}");
        assert!((a.weight - b.weight).abs() < 1e-8);
    }
}
