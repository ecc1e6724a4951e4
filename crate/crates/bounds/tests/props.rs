use bounds::{certified_interval, check_theorem1, BoundConstants};
use detection::{Backend, PairInput};
use fock_core::{Exec, C64};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coherent_products_sit_inside_their_intervals(
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
        beta2 in 1.0f64..100.0,
        theta in 0.0f64..std::f64::consts::PI,
    ) {
        let consts = BoundConstants::stated();
        let input = PairInput::CoherentProduct { alpha: C64::new(re, im), beta: C64::new(beta2.sqrt(), 0.0) };
        let cmps = check_theorem1(&input, theta, Backend::PoissonProduct, &consts, Exec::Sequential).unwrap();
        for c in &cmps {
            prop_assert!(c.satisfied(), "{c:?}");
            let iv = certified_interval(c.implemented, c.weight, c.inequality, &consts);
            prop_assert!(iv.contains(c.ideal, 1e-9 + c.error_bound), "{c:?}");
            prop_assert!(c.weight >= 0.0);
        }
    }
}
