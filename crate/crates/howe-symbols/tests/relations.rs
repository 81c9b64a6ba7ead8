use std::collections::BTreeSet;

use howe_symbols::relations::{in_b, interlace_oracle, Regime, Sign, SpecialPair};
use howe_symbols::{enumerate_special, Family, Symbol};

fn special_pairs(max_rank: u32) -> Vec<SpecialPair> {
    let mut out = Vec::new();
    for n in 0..=max_rank {
        for np in 0..=max_rank {
            for z in enumerate_special(n, 1).unwrap() {
                for zp in enumerate_special(np, 0).unwrap() {
                    out.push(SpecialPair::new(&z, &zp).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn base_pair_occurs_when_d_nonempty() {
    for p in special_pairs(7) {
        if !p.d_is_empty() {
            assert!(p.base_in_d(), "{} {}", p.z, p.zp);
        }
    }
}

#[test]
fn oracle_agrees_with_predicate() {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for n in 0..=6 {
        left.extend(Symbol::enumerate(n, 1));
        right.extend(Symbol::enumerate(n, 0));
    }
    let mut checked = 0usize;
    for l in &left {
        for lp in &right {
            let want = in_b(l, lp, Sign::Plus);
            for r in [Regime::Equal, Regime::Plus1] {
                assert_eq!(interlace_oracle(l, lp, r).unwrap(), want, "{l} {lp} {r:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn moveback_terminates_injectively() {
    for p in special_pairs(6) {
        if p.d_is_empty() {
            continue;
        }
        let bbar = p.b_bar_masks();
        let dz: BTreeSet<u64> = p.d_masks().into_iter().filter(|x| x.0 == 0).map(|x| x.1).collect();
        let mut by_m: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &(m, n) in &bbar {
            by_m.entry(m).or_default().push(n);
        }
        for (m, ns) in by_m {
            let mut finals = BTreeSet::new();
            for n in &ns {
                let (nf, _) = p.moveback_normalize(m, *n).unwrap();
                assert!(howe_symbols::relations::in_b_bar(p.z.symbol(), &p.zp.lambda(nf)));
                assert!(finals.insert(nf), "not injective at {} {}", p.z, p.zp);
            }
            let sz = p.z.lambda(m);
            if p.z.in_family(m, Family::Sp).unwrap() {
                let partners = ns.iter().filter(|&&n| p.zp.in_family(n, Family::Plus).unwrap()).count();
                assert!(partners <= dz.len(), "|B_Λ| > |D_Z| at {sz}");
            }
        }
    }
}

#[test]
fn factorization_and_degrees() {
    for p in special_pairs(6) {
        if p.d_is_empty() {
            continue;
        }
        for eps in Sign::both() {
            assert!(p.factorization_holds(eps).unwrap(), "{} {} {eps}", p.z, p.zp);
        }
        let c = p.cores().unwrap();
        let d = p.d_masks();
        let one_to_one = d.len() == 1;
        if one_to_one && p.z.is_regular() && p.zp.is_regular() {
            let dd = p.zp.degree() as i64 - p.z.degree() as i64;
            assert!(dd == 0 || dd == 1);
            assert!(c.psi0.is_empty() && c.psi0p.is_empty());
        }
    }
}

#[test]
fn minus_defect_rule() {
    for p in special_pairs(5) {
        for (m, n) in p.b_masks(Sign::Minus) {
            assert_eq!(p.zp.lambda(n).defect(), -p.z.lambda(m).defect() - 1);
        }
    }
}
