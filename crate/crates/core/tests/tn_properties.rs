use braidstir::braid::BraidWord;
use braidstir::tn_classify::{
    burau_lower_bound, classify, entropy_estimate, free_group_growth, ClassifyOptions, FreeGroupOptions,
};
use proptest::prelude::*;

fn braid(n: std::ops::RangeInclusive<usize>, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = BraidWord> {
    n.prop_flat_map(move |n| {
        let letter = (1..n as i64, any::<bool>()).prop_map(|(i, pos)| if pos { i } else { -i });
        proptest::collection::vec(letter, len.clone()).prop_map(move |v| BraidWord::from_signed(n, &v).unwrap())
    })
}

fn entropy(b: &BraidWord) -> f64 {
    entropy_estimate(b, 1e-10, 2000).unwrap().log_dilation
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entropy_dominates_burau_bound(b in braid(3..=5, 1..=8)) {
        prop_assert!(entropy(&b) >= burau_lower_bound(&b) - 1e-6);
    }

    #[test]
    fn conjugation_preserves_entropy(b in braid(3..=5, 1..=8), c in proptest::collection::vec((1i64..3, any::<bool>()), 1..=4)) {
        let n = b.strands();
        let c: Vec<i64> = c.into_iter().map(|(i, pos)| if pos { i } else { -i }).collect();
        let c = BraidWord::from_signed(n, &c).unwrap();
        let conj = c.compose(&b).unwrap().compose(&c.inverse()).unwrap();
        prop_assert!((entropy(&conj) - entropy(&b)).abs() < 1e-6, "{} vs {}", entropy(&conj), entropy(&b));
    }

    #[test]
    fn entropy_scales_with_powers(b in braid(3..=5, 1..=6), m in 2usize..=3) {
        let e = entropy(&b);
        let em = entropy(&b.pow(m));
        prop_assert!((em - m as f64 * e).abs() < 1e-6 * m as f64, "{em} vs {m}·{e}");
    }

    #[test]
    fn classify_is_deterministic(b in braid(3..=5, 0..=8)) {
        let o = ClassifyOptions::default();
        prop_assert_eq!(classify(&b, o).unwrap(), classify(&b, o).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_group_agrees_with_loops(b in braid(3..=5, 1..=8)) {
        let e = entropy(&b);
        let f = free_group_growth(&b, 60, FreeGroupOptions::default()).unwrap().log_rate();
        if e > 0.1 || f > 0.1 {
            prop_assert!((e - f).abs() < 1e-3, "{e} vs {f}");
        }
    }
}
