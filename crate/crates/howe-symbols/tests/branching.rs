use howe_symbols::branching::{
    counting_identities_hold, dichotomy_holds, mirror_witness, omega_minus, omega_plus, theta_star,
    witness_candidates, witness_lambda2,
};
use howe_symbols::relations::{in_b, Sign};
use howe_symbols::{Error, Symbol};
use rayon::prelude::*;

fn b_plus_pairs(max_sum: u32) -> Vec<(Symbol, Symbol)> {
    let mut out = Vec::new();
    for n in 0..=max_sum {
        for np in 0..=max_sum - n {
            for l in Symbol::enumerate(n, 1) {
                for lp in Symbol::enumerate(np, 0) {
                    if in_b(&l, &lp, Sign::Plus) {
                        out.push((l.clone(), lp));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn counting_and_dichotomy() {
    let ps = b_plus_pairs(9);
    assert!(ps.len() > 500);
    let bad: Vec<String> = ps
        .par_iter()
        .filter(|(l, lp)| !counting_identities_hold(l, lp).unwrap() || !dichotomy_holds(l, lp).unwrap())
        .map(|(l, lp)| format!("{l} {lp}"))
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn witnesses_satisfy_their_conditions() {
    let (mut built, mut excluded, mut none) = (0, 0, Vec::new());
    for (l, l1p) in b_plus_pairs(8) {
        for lpp in theta_star(&l, &omega_plus(&l1p).unwrap().members).unwrap() {
            match witness_lambda2(&l, &l1p, &lpp) {
                Ok(w) => {
                    assert!(witness_candidates(&l, &lpp).unwrap().contains(&w));
                    built += 1;
                }
                Err(Error::Sizes(_)) => {
                    assert!(l1p.top().len() == l.bot().len() && l.bot().is_empty(), "{l} {l1p} {lpp}");
                    assert!(witness_candidates(&l, &lpp).unwrap().is_empty());
                    excluded += 1;
                }
                Err(Error::NoWitness(_)) => {
                    assert!(witness_candidates(&l, &lpp).unwrap().is_empty(), "{l} {l1p} {lpp}");
                    assert_eq!(l1p.top().len(), l.bot().len());
                    assert_eq!(lpp.top(), l1p.top());
                    none.push(format!("{l} {l1p} {lpp}"));
                }
                Err(e) => panic!("{l} {l1p} {lpp}: {e}"),
            }
        }
    }
    assert_eq!((built, none.len()), (58, 5), "{none:?}");
    assert_eq!(excluded, 1);
    assert!(none.contains(&"2,1;0 1;1 1;2".to_string()), "{none:?}");
}

#[test]
fn mirror_witnesses() {
    let (mut found, mut none) = (0, Vec::new());
    for (l1, lp) in b_plus_pairs(9) {
        for lpp in theta_star(&lp, &omega_plus(&l1).unwrap().members).unwrap() {
            match mirror_witness(&l1, &lp, &lpp) {
                Ok(w) => {
                    assert!(omega_plus(&w).unwrap().contains(&lpp));
                    found += 1;
                }
                Err(Error::NoWitness(_)) => none.push(format!("{l1} {lp} {lpp}")),
                Err(e) => panic!("{l1} {lp} {lpp}: {e}"),
            }
        }
    }
    assert_eq!((found, none.len()), (82, 6), "{none:?}");
    assert!(none.contains(&"1;- 1;0 2,1;0".to_string()));
}

#[test]
fn omega_bookkeeping() {
    for n in 0..=8 {
        for d in Symbol::defects_up_to(n) {
            for l in Symbol::enumerate(n, d) {
                let plus = omega_plus(&l).unwrap();
                for x in &plus.members {
                    assert!(omega_minus(x).unwrap().contains(&l), "{l} {x}");
                }
                omega_minus(&l).unwrap();
            }
        }
    }
}
