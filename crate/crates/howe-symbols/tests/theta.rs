use howe_symbols::enumerate_special;
use howe_symbols::relations::{Sign, SpecialPair};
use howe_symbols::theta::{check_all_cells, compare_graph, ThetaMap};
use rayon::prelude::*;

fn pairs(max_sum: u32) -> Vec<SpecialPair> {
    let mut out = Vec::new();
    for n in 0..=max_sum {
        for np in 0..=max_sum - n {
            for z in enumerate_special(n, 1).unwrap() {
                for zp in enumerate_special(np, 0).unwrap() {
                    let p = SpecialPair::new(&z, &zp).unwrap();
                    if !p.d_is_empty() {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn graph_of_theta_is_b_natural() {
    let bad: Vec<String> = pairs(9)
        .par_iter()
        .flat_map(|p| {
            Sign::both()
                .into_iter()
                .filter_map(|eps| {
                    let r = compare_graph(p, eps).unwrap();
                    (!r.exact).then(|| format!("{} {} {eps} {r:?}", p.z, p.zp))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    assert!(bad.is_empty(), "{} failures, first: {:?}", bad.len(), bad.first());
}

#[test]
fn arrangement_images_are_cells() {
    let checked: usize = pairs(10)
        .par_iter()
        .map(|p| {
            Sign::both()
                .into_iter()
                .map(|eps| {
                    let t = ThetaMap::new(p, eps).unwrap();
                    check_all_cells(&t).unwrap_or_else(|e| panic!("{} {} {eps}: {e}", p.z, p.zp))
                })
                .sum::<usize>()
        })
        .sum();
    assert!(checked > 1000, "{checked}");
}
