use approx::assert_abs_diff_eq;
use fock_core::operator::{number_operator, quadrature_operator, quadrature_squared};
use fock_core::optics::{apply_beamsplitter, apply_phase_shift};
use fock_core::random::{random_density, random_pure, seeded_rng};
use fock_core::state::{coherent_state, tmsv_state};
use fock_core::{expect_product, BsConvention, Exec, ModeSpace, Operator, State, TruncationPolicy, C64};
use proptest::prelude::*;

fn mean_photons(s: &State, mode: usize) -> f64 {
    let cut = s.space().cutoffs()[mode];
    expect_product(s, &[(&[mode], &number_operator(cut))]).unwrap().re
}

fn total(s: &State) -> f64 {
    (0..s.space().mode_count()).map(|k| mean_photons(s, k)).sum()
}

fn distance(a: &State, b: &State) -> f64 {
    (a.to_density().matrix() - b.to_density().matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

const CONVENTIONS: [BsConvention; 3] = [BsConvention::SignFlipFirst, BsConvention::SignFlipSecond, BsConvention::Symmetric];

#[test]
fn coherent_moments() {
    let a = C64::new(1.2, -0.7);
    let s: State = coherent_state(a, 40).unwrap().into();
    assert_abs_diff_eq!(mean_photons(&s, 0), a.norm_sqr(), epsilon = 1e-12);
    for t in [0.0, 0.4, 2.0] {
        let x = quadrature_operator(t, 40).expect(&s).unwrap().re;
        let want = (a * C64::from_polar(1.0, -t)).re;
        assert_abs_diff_eq!(x, want, epsilon = 1e-12);
        let x2 = quadrature_squared(t, 40).expect(&s).unwrap().re;
        assert_abs_diff_eq!(x2, want * want + 0.25, epsilon = 1e-11);
    }
}

#[test]
fn tmsv_marginal_is_thermal() {
    let r: f64 = 0.6;
    let s: State = tmsv_state(r, 30).unwrap().into();
    let rho = s.partial_trace(&[0]).unwrap();
    let nbar = r.sinh().powi(2);
    let q = nbar / (nbar + 1.0);
    for n in 0..10 {
        assert_abs_diff_eq!(rho.matrix()[(n, n)].re, q.powi(n as i32) / (nbar + 1.0), epsilon = 1e-12);
    }
    let small: State = tmsv_state(r, 8).unwrap().into();
    assert!(small.to_density().negativity(&[1]).unwrap() > 0.1);
}

#[test]
fn beamsplitter_on_coherent_product() {
    let (a, b) = (C64::new(0.9, 0.2), C64::new(-0.4, 0.5));
    let input: State = coherent_state(a, 30).unwrap().tensor(&coherent_state(b, 30).unwrap()).into();
    let out = apply_beamsplitter(&input, 0, 1, BsConvention::Symmetric, TruncationPolicy::TrackDeficit).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let want: State = coherent_state((a + b) * s, 30).unwrap().tensor(&coherent_state((a - b) * s, 30).unwrap()).into();
    assert!(distance(&out, &want) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn beamsplitters_conserve_photons_and_invert(seed in 0u64..10_000, total_n in 1u32..6, conv in 0usize..3) {
        let conv = CONVENTIONS[conv];
        let space = ModeSpace::simplex(2, total_n).unwrap().shared();
        let mut rng = seeded_rng(seed);
        let s: State = random_pure(space, &mut rng).unwrap().into();
        let out = apply_beamsplitter(&s, 0, 1, conv, TruncationPolicy::Strict).unwrap();
        prop_assert!((total(&out) - total(&s)).abs() < 1e-12);
        prop_assert!(out.deficit() < 1e-14);
        let back = apply_beamsplitter(&out, 0, 1, conv.inverse(), TruncationPolicy::Strict).unwrap();
        prop_assert!(distance(&back, &s) < 1e-12);
    }

    #[test]
    fn phase_shifts_compose(seed in 0u64..10_000, t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let space = ModeSpace::boxed(&[3, 2]).unwrap().shared();
        let mut rng = seeded_rng(seed);
        let s: State = random_density(space, 2, &mut rng).unwrap().into();
        let a = apply_phase_shift(&apply_phase_shift(&s, 0, t1).unwrap(), 0, t2).unwrap();
        let b = apply_phase_shift(&s, 0, t1 + t2).unwrap();
        prop_assert!(distance(&a, &b) < 1e-12);
        prop_assert!((mean_photons(&a, 0) - mean_photons(&s, 0)).abs() < 1e-12);
    }

    #[test]
    fn expectation_is_linear_and_real_for_hermitian(seed in 0u64..10_000, c in -2.0f64..2.0) {
        let space = ModeSpace::single(5).shared();
        let mut rng = seeded_rng(seed);
        let s: State = random_density(space.clone(), 3, &mut rng).unwrap().into();
        let x = quadrature_operator(0.3, 5);
        let n = number_operator(5);
        let sum: Operator = x.add(&n.scale(C64::new(c, 0.0))).unwrap();
        let lhs = sum.expect(&s).unwrap();
        let rhs = x.expect(&s).unwrap() + n.expect(&s).unwrap() * c;
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!(lhs.im.abs() < 1e-12);
    }

    #[test]
    fn map_reduce_is_bit_identical(len in 0usize..5_000, scale in 1e-3f64..1e3) {
        let f = |i: usize| ((i as f64) * 0.37).sin() * scale;
        let a = Exec::Parallel.map_reduce(0..len, 0.0, f, |x, y| x + y);
        let b = Exec::Sequential.map_reduce(0..len, 0.0, f, |x, y| x + y);
        prop_assert_eq!(a.to_bits(), b.to_bits());
        let naive: f64 = (0..len).map(f).sum();
        prop_assert!((a - naive).abs() <= 1e-9 * scale * (len as f64 + 1.0));
    }
}
