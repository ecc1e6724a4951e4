use detection::*;
use fock_core::random::{random_pure, seeded_rng};
use fock_core::{ModeSpace, State};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_distributions_are_complete(seed in any::<u64>(), m in 0u32..4, theta in 0.0f64..6.3) {
        let space = ModeSpace::simplex(2, m).unwrap().shared();
        let psi: State = random_pure(space, &mut seeded_rng(seed)).unwrap().into();
        let inp = PairInput::Joint(psi);
        for det in [Detector::Hom(theta), Detector::Het] {
            let d = distribution(&inp, det, Backend::ExactFock, None).unwrap();
            prop_assert!((d.total_mass() - 1.0).abs() < 1e-10);
            prop_assert!(d.mass_deficit() == 0.0);
            prop_assert!(d.iter().all(|(c, p)| p >= 0.0 && c.iter().sum::<u32>() <= m));
        }
    }
}
