use howe_symbols::derivative::derive_full_pair;
use howe_symbols::enumerate_special;
use howe_symbols::relations::{Sign, SpecialPair};
use howe_symbols::uniform::{verify_projection, verify_transport};
use rayon::prelude::*;

fn pairs(max_sum: u32) -> Vec<SpecialPair> {
    let mut out = Vec::new();
    for n in 0..=max_sum {
        for np in 0..=max_sum - n {
            for z in enumerate_special(n, 1).unwrap() {
                for zp in enumerate_special(np, 0).unwrap() {
                    out.push(SpecialPair::new(&z, &zp).unwrap());
                }
            }
        }
    }
    out
}

fn failures(eps: Sign, max_sum: u32) -> Vec<String> {
    pairs(max_sum)
        .par_iter()
        .filter_map(|p| {
            let r = verify_projection(p, eps).unwrap();
            (!r.ok).then(|| format!("{} {} {:?}", p.z, p.zp, r.witness))
        })
        .collect()
}

#[test]
fn projection_identity_plus() {
    assert_eq!(failures(Sign::Plus, 8), Vec::<String>::new());
}

#[test]
fn projection_identity_minus() {
    assert_eq!(failures(Sign::Minus, 8), Vec::<String>::new());
}

#[test]
fn transport_identities_along_chains() {
    let ps: Vec<SpecialPair> = pairs(9).into_iter().filter(|p| !p.d_is_empty()).collect();
    let steps: usize = ps
        .par_iter()
        .map(|p| {
            let chain = derive_full_pair(p.clone()).unwrap();
            for (q, s) in chain.pairs.iter().zip(&chain.steps) {
                verify_transport(q, s).unwrap_or_else(|e| panic!("{} {}: {e}", q.z, q.zp));
            }
            chain.steps.len()
        })
        .sum();
    assert!(steps > 100);
}
