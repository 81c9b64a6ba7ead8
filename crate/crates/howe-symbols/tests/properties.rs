use howe_symbols::relations::{in_b, interlace_oracle, Regime, Sign};
use howe_symbols::{enumerate_special, SpecialSymbol, Symbol};
use proptest::prelude::*;
use proptest::sample::select;

fn symbols(lo: u32, hi: u32, d: i32) -> Vec<Symbol> {
    (lo..=hi).flat_map(|n| Symbol::enumerate(n, d)).collect()
}

fn specials(hi: u32) -> Vec<Symbol> {
    (0..=hi).flat_map(|n| [0, 1].into_iter().flat_map(move |d| enumerate_special(n, d).unwrap())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn oracle_beyond_exhaustive_bound(
        l in select(symbols(9, 13, 1)),
        lp in select(symbols(9, 13, 0)),
    ) {
        let want = in_b(&l, &lp, Sign::Plus);
        prop_assert_eq!(interlace_oracle(&l, &lp, Regime::Equal).unwrap(), want);
        prop_assert_eq!(interlace_oracle(&l, &lp, Regime::Plus1).unwrap(), want);
    }

    #[test]
    fn symbol_text_round_trip(l in select(symbols(0, 12, 1)), lp in select(symbols(0, 12, -2))) {
        for x in [l, lp] {
            prop_assert_eq!(x.to_string().parse::<Symbol>().unwrap(), x.clone());
            prop_assert_eq!(x.transpose().transpose(), x.clone());
            prop_assert_eq!(x.transpose().defect(), -x.defect());
            prop_assert_eq!(x.transpose().rank(), x.rank());
        }
    }

    #[test]
    fn members_of_special_families(z in select(specials(16)), seed in any::<u64>()) {
        let z = SpecialSymbol::new(&z).unwrap();
        let m = seed & z.full_mask();
        let l = z.lambda(m);
        let (a, b) = z.counts(m);
        prop_assert_eq!(l.rank(), z.rank());
        prop_assert_eq!(l.defect(), z.defect() + 2 * (b as i32 - a as i32));
        prop_assert_eq!(z.mask_of(&l), Some(m));
        if z.defect() == 0 {
            prop_assert_eq!(z.lambda(z.complement(m)), l.transpose());
        }
    }
}
