use proptest::prelude::*;
use verifier::families::SubmatrixFamily;

fn psd(b: [f64; 3]) -> bool {
    let [ha, hb, off] = b;
    let tol = 1e-9 * (ha * hb).abs().max(1e-300);
    ha >= 0.0 && hb >= 0.0 && ha * hb - off * off >= -tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn blocks_are_positive_at_their_constant(
        f in 0usize..SubmatrixFamily::ALL.len(),
        n in 1u32..1000,
        dm in 0u32..1000,
        u in 1u32..50,
        dw in 0u32..50,
        t in 0u32..2,
        boost in 1.0f64..3.0,
    ) {
        let f = SubmatrixFamily::ALL[f];
        let c = f.default_constant();
        let idx = [n, n + dm, u, u + dw, t];
        if let Some(b) = f.block(c, idx) {
            prop_assert!(psd(b), "{f:?} {idx:?} {b:?}");
            prop_assert!(psd(f.block(c * boost, idx).unwrap()));
        }
    }

    #[test]
    fn off_the_domain_is_rejected(f in 0usize..SubmatrixFamily::ALL.len(), n in 2u32..100, t in 2u32..5) {
        let f = SubmatrixFamily::ALL[f];
        prop_assert!(f.block(1.0, [n, n - 1, 1, 1, 0]).is_none());
        prop_assert!(f.block(1.0, [0, n, 1, 1, 0]).is_none());
        prop_assert!(f.block(1.0, [1, n, 1, 1, t]).is_none());
    }
}
