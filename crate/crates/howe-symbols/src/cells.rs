//! Arrangements of singles, subsets of pairs and the cells `C_{Φ,Ψ}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::relations::Sign;
use crate::special::{Family, Mask, Pair, SpecialSymbol};
use crate::symbol::Symbol;

/// A partition of `Z_I` into row-crossing pairs, plus one isolated first-row
/// single when the defect is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrangement {
    /// Pairs, sorted by decreasing first-row entry.
    pub pairs: Vec<Pair>,
    /// The isolated entry.
    pub isolated: Option<u32>,
}

impl Arrangement {
    /// Canonicalizes the pair order.
    pub fn new(mut pairs: Vec<Pair>, isolated: Option<u32>) -> Arrangement {
        pairs.sort_by(|a, b| b.cmp(a));
        Arrangement { pairs, isolated }
    }

    /// Checks that this is an arrangement of `Z_I`.
    pub fn validate(&self, z: &SpecialSymbol) -> Result<()> {
        let mut tops: Vec<u32> = self.pairs.iter().map(|p| p.top).chain(self.isolated).collect();
        let mut bots: Vec<u32> = self.pairs.iter().map(|p| p.bot).collect();
        tops.sort_unstable_by(|a, b| b.cmp(a));
        bots.sort_unstable_by(|a, b| b.cmp(a));
        let iso_ok = self.isolated.is_some() == (z.defect() == 1);
        if !iso_ok || tops != z.singles_top() || bots != z.singles_bot() {
            return Err(Error::Invalid(format!("{self} is not an arrangement of the singles of {z}")));
        }
        Ok(())
    }

    /// Mask of the entries of the given pairs.
    pub fn mask(&self, z: &SpecialSymbol, pairs: &[Pair]) -> Result<Mask> {
        z.mask_of_pairs(pairs)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut items: Vec<(u32, String)> = self.pairs.iter().map(|p| (p.top, p.to_string())).collect();
        if let Some(s) = self.isolated {
            items.push((s, format!("({s};-)")));
        }
        items.sort_by_key(|x| std::cmp::Reverse(x.0));
        let parts: Vec<String> = items.into_iter().map(|x| x.1).collect();
        write!(f, "{}}}", parts.join(","))
    }
}

impl Serialize for Arrangement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses a list of pairs such as `(4;-)(2;3)(0;1)`; `(s;-)` is the isolated entry.
impl FromStr for Arrangement {
    type Err = Error;

    fn from_str(input: &str) -> Result<Arrangement> {
        let err = |r: &str| Error::Parse { input: input.to_string(), reason: r.to_string() };
        let mut pairs = Vec::new();
        let mut isolated = None;
        let cleaned: String =
            input.chars().filter(|c| !c.is_whitespace() && *c != '{' && *c != '}').collect();
        for chunk in cleaned.split(')').filter(|c| !c.is_empty()) {
            let body = chunk.trim_start_matches(',').strip_prefix('(').ok_or_else(|| err("expected `(`"))?;
            let (t, b) = body.split_once(';').ok_or_else(|| err("expected `s;t`"))?;
            let t: u32 = t.parse().map_err(|_| err("bad first entry"))?;
            if b == "-" {
                if isolated.replace(t).is_some() {
                    return Err(err("two isolated entries"));
                }
            } else {
                pairs.push(Pair { top: t, bot: b.parse().map_err(|_| err("bad second entry"))? });
            }
        }
        Ok(Arrangement::new(pairs, isolated))
    }
}

/// Parses a subset of pairs such as `(2;3)(0;1)`, or `-` for the empty set.
pub fn parse_pairs(input: &str) -> Result<Vec<Pair>> {
    if input.trim() == "-" || input.trim().is_empty() {
        return Ok(Vec::new());
    }
    let a: Arrangement = input.parse()?;
    if a.isolated.is_some() {
        return Err(Error::Parse {
            input: input.to_string(),
            reason: "isolated entry in a pair set".to_string(),
        });
    }
    Ok(a.pairs)
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All arrangements of `Z_I`.
pub fn arrangements(z: &SpecialSymbol) -> Vec<Arrangement> {
    let tops = z.singles_top();
    let bots = z.singles_bot();
    let mut out = Vec::new();
    let isolated: Vec<Option<u32>> =
        if z.defect() == 1 { tops.iter().map(|&t| Some(t)).collect() } else { vec![None] };
    for iso in isolated {
        let rest: Vec<u32> = tops.iter().copied().filter(|&t| Some(t) != iso).collect();
        for perm in permutations(&rest) {
            let pairs = perm.iter().zip(bots).map(|(&t, &b)| Pair { top: t, bot: b }).collect();
            out.push(Arrangement::new(pairs, iso));
        }
    }
    out.sort();
    out
}

/// The semi-consecutive arrangements `{(s_i;t_i)} ∪ {(s_{δ+1};-)}` and
/// `{(s_1;-)} ∪ {(s_{i+1};t_i)}` of the singles outside `avoid`.
pub fn semi_consecutive(z: &SpecialSymbol, avoid: &[Pair]) -> Result<(Arrangement, Arrangement)> {
    if z.defect() != 1 {
        return Err(Error::Defect("semi-consecutive pair of arrangements needs defect 1".to_string()));
    }
    let s: Vec<u32> =
        z.singles_top().iter().copied().filter(|x| !avoid.iter().any(|p| p.top == *x)).collect();
    let t: Vec<u32> =
        z.singles_bot().iter().copied().filter(|x| !avoid.iter().any(|p| p.bot == *x)).collect();
    let d = t.len();
    let mut p1: Vec<Pair> = (0..d).map(|i| Pair { top: s[i], bot: t[i] }).collect();
    let mut p2: Vec<Pair> = (0..d).map(|i| Pair { top: s[i + 1], bot: t[i] }).collect();
    p1.extend_from_slice(avoid);
    p2.extend_from_slice(avoid);
    Ok((Arrangement::new(p1, Some(s[d])), Arrangement::new(p2, Some(s[0]))))
}

/// All subsets of pairs of `Φ`.
pub fn subsets_of_pairs(phi: &Arrangement) -> Vec<Vec<Pair>> {
    let n = phi.pairs.len();
    (0u64..1 << n).map(|s| (0..n).filter(|&i| s >> i & 1 == 1).map(|i| phi.pairs[i]).collect()).collect()
}

/// A cell `C_{Φ,Ψ}` with its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// The arrangement `Φ`.
    pub phi: Arrangement,
    /// The subset of pairs `Ψ`.
    pub psi: Vec<Pair>,
    /// Masks of the members.
    pub masks: Vec<Mask>,
    /// The members `Λ_M`.
    pub members: Vec<Symbol>,
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let names: Vec<String> = self.members.iter().map(|x| x.to_string()).collect();
        names.serialize(s)
    }
}

fn top_entries(z: &SpecialSymbol, pairs: &[Pair]) -> Mask {
    let top = z.top_mask();
    z.mask_of_pairs(pairs).expect("pairs of singles") & top
}

/// `C_{Φ,Ψ} = {Λ_M ∈ S_Z : |M ∩ Ψ'| ≡ |(Φ∖Ψ) ∩ Ψ'^*| for all Ψ' ≤ Φ}`.
///
/// For defect 0 the family is `S^+_Z ∪ S^-_Z`.
pub fn cell(z: &SpecialSymbol, phi: &Arrangement, psi: &[Pair]) -> Result<Cell> {
    phi.validate(z)?;
    if psi.iter().any(|p| !phi.pairs.contains(p)) {
        return Err(Error::Invalid("Ψ is not a subset of pairs of Φ".to_string()));
    }
    let fam = if z.defect() == 1 { Family::Sp } else { Family::All };
    let rest: Vec<Pair> = phi.pairs.iter().copied().filter(|p| !psi.contains(p)).collect();
    let rest_top = top_entries(z, &rest);
    let tests: Vec<(Mask, u32)> = subsets_of_pairs(phi)
        .iter()
        .map(|q| {
            let qm = z.mask_of_pairs(q).unwrap();
            (qm, (rest_top & qm).count_ones() % 2)
        })
        .collect();
    let masks: Vec<Mask> = z
        .family_masks(fam)?
        .into_iter()
        .filter(|&m| tests.iter().all(|&(qm, want)| (m & qm).count_ones() % 2 == want))
        .collect();
    let members = masks.iter().map(|&m| z.lambda(m)).collect();
    Ok(Cell { phi: phi.clone(), psi: sorted(psi), masks, members })
}

fn sorted(ps: &[Pair]) -> Vec<Pair> {
    let mut v = ps.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// The two membership rules: none or both entries of each pair in `Ψ`,
/// exactly one entry of each pair in `Φ∖Ψ`.
pub fn satisfies_rules(z: &SpecialSymbol, phi: &Arrangement, psi: &[Pair], m: Mask) -> bool {
    phi.pairs.iter().all(|p| {
        let c = (m & z.mask_of_pairs(&[*p]).unwrap()).count_ones();
        if psi.contains(p) {
            c != 1
        } else {
            c == 1
        }
    })
}

/// `Ψ` is admissible for `ε` when `|Φ∖Ψ|` is even for `+` and odd for `−`.
pub fn admissible(phi: &Arrangement, psi: &[Pair], eps: Sign) -> bool {
    let rest = phi.pairs.iter().filter(|p| !psi.contains(p)).count();
    (rest % 2 == 0) == (eps == Sign::Plus)
}

/// The cells over all `Ψ ≤ Φ` are disjoint and cover `S_Z` (defect 1), or
/// split `S^+_Z`, `S^-_Z` by the parity of `|Φ∖Ψ|` (defect 0).
pub fn cell_partition_check(z: &SpecialSymbol, phi: &Arrangement) -> Result<bool> {
    let mut seen: BTreeSet<Mask> = BTreeSet::new();
    for psi in subsets_of_pairs(phi) {
        let c = cell(z, phi, &psi)?;
        if z.defect() == 0 {
            let fam = if admissible(phi, &psi, Sign::Plus) { Family::Plus } else { Family::Minus };
            if !c.masks.iter().all(|&m| z.in_family(m, fam).unwrap()) {
                return Ok(false);
            }
        }
        for m in c.masks {
            if !seen.insert(m) {
                return Ok(false);
            }
        }
    }
    let fam = if z.defect() == 1 { Family::Sp } else { Family::All };
    let all: BTreeSet<Mask> = z.family_masks(fam)?.into_iter().collect();
    Ok(seen == all)
}

fn find_psi(z: &SpecialSymbol, phi: &Arrangement, m: Mask) -> Result<Vec<Pair>> {
    for psi in subsets_of_pairs(phi) {
        if satisfies_rules(z, phi, &psi, m) {
            return Ok(psi);
        }
    }
    Err(Error::Invariant(format!("no cell of {phi} contains {}", z.lambda(m))))
}

/// Two arrangements with subsets `Ψ_0 ≤ Ψ_i ≤ Φ_i` whose cells, restricted to
/// `S_Z^{Ψ_0}`, meet exactly in `{Λ}`.
pub fn singleton_intersection(
    z: &SpecialSymbol,
    lam: &Symbol,
    core: &[Pair],
) -> Result<(Arrangement, Vec<Pair>, Arrangement, Vec<Pair>)> {
    let m = z.require_mask(lam)?;
    let core_mask = z.mask_of_pairs(core)?;
    if m & core_mask != 0 || !z.in_family(m, Family::Sp)? {
        return Err(Error::Invalid(format!("{lam} is not in S_Z away from the core")));
    }
    let (phi1, phi2) = semi_consecutive(z, core)?;
    let psi1 = find_psi(z, &phi1, m)?;
    let psi2 = find_psi(z, &phi2, m)?;
    let c1 = cell(z, &phi1, &psi1)?;
    let c2 = cell(z, &phi2, &psi2)?;
    let meet: Vec<Mask> =
        c1.masks.iter().copied().filter(|x| x & core_mask == 0 && c2.masks.contains(x)).collect();
    if meet != vec![m] || core.iter().any(|p| !psi1.contains(p) || !psi2.contains(p)) {
        return Err(Error::Invariant(format!("cells of {lam} do not meet in a single symbol")));
    }
    Ok((phi1, psi1, phi2, psi2))
}

/// An arrangement `Φ ⊇ Ψ_0` with subsets `Ψ_0 ≤ Ψ_i` such that `Λ_i ∈ C_{Φ,Ψ_i}`
/// and the two cells are disjoint.
pub fn separating_pair(
    z: &SpecialSymbol,
    l1: &Symbol,
    l2: &Symbol,
    core: &[Pair],
) -> Result<(Arrangement, Vec<Pair>, Vec<Pair>)> {
    let m1 = z.require_mask(l1)?;
    let m2 = z.require_mask(l2)?;
    let core_mask = z.mask_of_pairs(core)?;
    if (m1 | m2) & core_mask != 0 {
        return Err(Error::Invalid("symbols meet the core".to_string()));
    }
    let rest = z.full_mask() ^ core_mask;
    if m1 == m2 || (z.defect() == 0 && m1 == rest ^ m2) {
        return Err(Error::Invalid(format!("{l1} and {l2} cannot be separated")));
    }
    let free_top: Vec<u32> =
        z.singles_top().iter().copied().filter(|x| !core.iter().any(|p| p.top == *x)).collect();
    let free_bot: Vec<u32> =
        z.singles_bot().iter().copied().filter(|x| !core.iter().any(|p| p.bot == *x)).collect();
    for &s in &free_top {
        for &t in &free_bot {
            let pm = z.mask_of_pairs(&[Pair { top: s, bot: t }])?;
            if (m1 & pm).count_ones() % 2 == (m2 & pm).count_ones() % 2 {
                continue;
            }
            let tops: Vec<u32> = free_top.iter().copied().filter(|&x| x != s).collect();
            let bots: Vec<u32> = free_bot.iter().copied().filter(|&x| x != t).collect();
            let mut pairs: Vec<Pair> =
                bots.iter().zip(&tops).map(|(&b, &a)| Pair { top: a, bot: b }).collect();
            let isolated = if z.defect() == 1 { tops.last().copied() } else { None };
            pairs.push(Pair { top: s, bot: t });
            pairs.extend_from_slice(core);
            let phi = Arrangement::new(pairs, isolated);
            phi.validate(z)?;
            let psi1 = find_psi(z, &phi, m1)?;
            let psi2 = find_psi(z, &phi, m2)?;
            let c1 = cell(z, &phi, &psi1)?;
            let c2 = cell(z, &phi, &psi2)?;
            let disjoint = c1.masks.iter().all(|x| !c2.masks.contains(x));
            let core_ok = core.iter().all(|p| psi1.contains(p) && psi2.contains(p));
            if !disjoint || !core_ok || !c2.masks.contains(&m2) || !c1.masks.contains(&m1) {
                return Err(Error::Invariant("separating cells overlap".to_string()));
            }
            return Ok((phi, psi1, psi2));
        }
    }
    Err(Error::Invariant(format!("no separating pair for {l1}, {l2}")))
}

/// All sets of pairwise disjoint consecutive pairs in `Z_I`.
pub fn consecutive_pair_sets(z: &SpecialSymbol) -> Vec<Vec<Pair>> {
    let all: Vec<u32> = z.top().iter().chain(z.bot()).copied().collect();
    let mut cands = Vec::new();
    for &s in z.singles_top() {
        for &t in z.singles_bot() {
            let (lo, hi) = if s < t { (s, t) } else { (t, s) };
            if !all.iter().any(|&x| x > lo && x < hi) {
                cands.push(Pair { top: s, bot: t });
            }
        }
    }
    let n = cands.len();
    let mut out = Vec::new();
    for sel in 0u64..1 << n {
        let ps: Vec<Pair> = (0..n).filter(|&i| sel >> i & 1 == 1).map(|i| cands[i]).collect();
        let tops: BTreeSet<u32> = ps.iter().map(|p| p.top).collect();
        let bots: BTreeSet<u32> = ps.iter().map(|p| p.bot).collect();
        if tops.len() == ps.len() && bots.len() == ps.len() {
            out.push(ps);
        }
    }
    out
}

/// Checks `C_{Φ,Ψ} = (C_{Φ,Ψ} ∩ S_Z^{Ψ_0}) + S_{Z,Ψ_0}` as sets.
pub fn factorization_holds(z: &SpecialSymbol, c: &Cell, psi0: &[Pair]) -> Result<bool> {
    let core_mask = z.mask_of_pairs(psi0)?;
    let inner: Vec<Mask> = c.masks.iter().copied().filter(|m| m & core_mask == 0).collect();
    let shifts = crate::relations::subset_unions(z, psi0);
    let built: BTreeSet<Mask> = inner.iter().flat_map(|&m| shifts.iter().map(move |&s| m ^ s)).collect();
    let direct: BTreeSet<Mask> = c.masks.iter().copied().collect();
    Ok(built == direct && built.len() == inner.len() * shifts.len())
}

fn fail(z: &SpecialSymbol, what: &str) -> Result<()> {
    Err(Error::Invariant(format!("{z}: {what}")))
}

/// Checks the structural properties of all cells of `Z` against brute force:
/// cell sizes, partition and cover, transpose closure and parity split for
/// defect 0, the parity congruence within a cell, the factorization over every
/// set of consecutive pairs, singleton intersections, separating pairs and
/// uniqueness of sums.
pub fn structure_check(z: &SpecialSymbol) -> Result<()> {
    let delta = z.degree();
    let size = 1usize << delta;
    let fam = if z.defect() == 1 { Family::Sp } else { Family::All };
    let members = z.family_masks(fam)?;
    let psi0s = consecutive_pair_sets(z);
    for phi in arrangements(z) {
        if !cell_partition_check(z, &phi)? {
            return fail(z, "cells do not partition the family");
        }
        let subs = subsets_of_pairs(&phi);
        for psi in &subs {
            let c = cell(z, &phi, psi)?;
            if c.masks.len() != size {
                return fail(z, "cell size is not 2^δ");
            }
            let by_rule: Vec<Mask> =
                members.iter().copied().filter(|&m| satisfies_rules(z, &phi, psi, m)).collect();
            if by_rule != c.masks {
                return fail(z, "membership rules disagree with the definition");
            }
            if z.defect() == 0 && !c.masks.iter().all(|&m| c.masks.contains(&z.complement(m))) {
                return fail(z, "cell not closed under transpose");
            }
            for q in &subs {
                let qm = z.mask_of_pairs(q)?;
                let par: BTreeSet<u32> = c.masks.iter().map(|&m| (m & qm).count_ones() % 2).collect();
                if par.len() > 1 {
                    return fail(z, "parity congruence fails inside a cell");
                }
            }
            for psi0 in &psi0s {
                let psi0_mask = z.mask_of_pairs(psi0)?;
                let inside = psi0.iter().all(|p| psi.contains(p));
                if inside && !factorization_holds(z, &c, psi0)? {
                    return fail(z, "cell factorization over a core fails");
                }
                let in_phi = psi0.iter().all(|p| phi.pairs.contains(p));
                if in_phi && !inside && c.masks.iter().any(|&m| m & psi0_mask == 0) {
                    return fail(z, "a cell meets S^Ψ0 without Ψ0 ≤ Ψ");
                }
            }
        }
    }
    for psi0 in &psi0s {
        let psi0_mask = z.mask_of_pairs(psi0)?;
        let free: Vec<Mask> = members.iter().copied().filter(|&m| m & psi0_mask == 0).collect();
        let shifts = crate::relations::subset_unions(z, psi0);
        let mut sums = BTreeSet::new();
        for &a in &free {
            for &b in &shifts {
                if !sums.insert(a ^ b) {
                    return fail(z, "sums over S^Ψ0 + S_{Z,Ψ0} are not unique");
                }
            }
        }
        if z.defect() == 1 {
            for &m in &free {
                singleton_intersection(z, &z.lambda(m), psi0)?;
            }
        }
        let rest = z.full_mask() ^ psi0_mask;
        for &a in &free {
            for &b in &free {
                if a == b {
                    continue;
                }
                if z.defect() == 0 && a == rest ^ b {
                    let phis = arrangements(z);
                    for phi in phis.iter().filter(|f| psi0.iter().all(|p| f.pairs.contains(p))) {
                        if find_psi(z, phi, a)? != find_psi(z, phi, b)? {
                            return fail(z, "complements away from the core were separated");
                        }
                    }
                    continue;
                }
                separating_pair(z, &z.lambda(a), &z.lambda(b), psi0)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(x: &str) -> SpecialSymbol {
        SpecialSymbol::new(&x.parse().unwrap()).unwrap()
    }

    fn syms(xs: &[&str]) -> BTreeSet<Symbol> {
        xs.iter().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn defect_one_golden() {
        let z = sp("4,2,0;3,1");
        let phi: Arrangement = "(4;-)(2;3)(0;1)".parse().unwrap();
        assert!(arrangements(&z).contains(&phi));
        let c = cell(&z, &phi, &parse_pairs("(2;3)").unwrap()).unwrap();
        let got: BTreeSet<Symbol> = c.members.iter().cloned().collect();
        assert_eq!(got, syms(&["3;4,2,1,0", "2,1,0;4,3", "2;4,3,1,0", "3,1,0;4,2"]));
        assert!(c.masks.iter().all(|&m| m & 1 == 1));
    }

    #[test]
    fn defect_zero_golden() {
        let z = sp("5,3,1;4,2,0");
        let phi: Arrangement = "(5;4)(3;2)(1;0)".parse().unwrap();
        let psi = parse_pairs("(5;4)(1;0)").unwrap();
        let c = cell(&z, &phi, &psi).unwrap();
        let got: BTreeSet<Symbol> = c.members.iter().cloned().collect();
        let want = syms(&[
            "5,1;4,3,2,0",
            "5,0;4,3,2,1",
            "4,1;5,3,2,0",
            "4,0;5,3,2,1",
            "5,3,2,1;4,0",
            "5,3,2,0;4,1",
            "4,3,2,1;5,0",
            "4,3,2,0;5,1",
        ]);
        assert_eq!(got, want);
        assert!(c.masks.iter().all(|&m| z.in_family(m, Family::Minus).unwrap()));
        assert!(admissible(&phi, &psi, Sign::Minus));
        assert!(!admissible(&phi, &psi, Sign::Plus));
    }

    #[test]
    fn full_psi_is_unions_of_pairs() {
        let z = sp("4,2,0;3,1");
        for phi in arrangements(&z) {
            let c = cell(&z, &phi, &phi.pairs).unwrap();
            let want: BTreeSet<Mask> = crate::relations::subset_unions(&z, &phi.pairs).into_iter().collect();
            assert_eq!(c.masks.iter().copied().collect::<BTreeSet<_>>(), want);
        }
    }

    #[test]
    fn degenerate_base() {
        let z = sp("2,1;2,1");
        let a = arrangements(&z);
        assert_eq!(a, vec![Arrangement::new(vec![], None)]);
        assert!(cell_partition_check(&z, &a[0]).unwrap());
        assert_eq!(cell(&z, &a[0], &[]).unwrap().members, vec![z.to_symbol()]);
    }

    #[test]
    fn arrangement_counts_match_brute_force() {
        for x in ["4,2,0;3,1", "6,4,2,0;5,3,1", "5,3,1;4,2,0", "3,1;2,0"] {
            let z = sp(x);
            let tops = z.singles_top();
            let bots = z.singles_bot();
            let mut count = 0;
            let n = tops.len() * bots.len();
            for sel in 0u64..1 << n {
                let ps: Vec<(usize, usize)> =
                    (0..n).filter(|&i| sel >> i & 1 == 1).map(|i| (i / bots.len(), i % bots.len())).collect();
                let ti: BTreeSet<usize> = ps.iter().map(|p| p.0).collect();
                let bi: BTreeSet<usize> = ps.iter().map(|p| p.1).collect();
                if ps.len() == bots.len() && ti.len() == ps.len() && bi.len() == ps.len() {
                    count += 1;
                }
            }
            assert_eq!(arrangements(&z).len(), count, "{x}");
        }
    }

    #[test]
    fn singleton_intersection_examples() {
        let z = sp("4,2,0;3,1");
        for lam in [z.to_symbol(), "3;4,2,1,0".parse().unwrap()] {
            singleton_intersection(&z, &lam, &[]).unwrap();
        }
        let z = sp("8,5,1;6,3");
        let core = [Pair { top: 5, bot: 3 }];
        for m in z.family_masks(Family::Sp).unwrap() {
            if m & z.mask_of_pairs(&core).unwrap() == 0 {
                singleton_intersection(&z, &z.lambda(m), &core).unwrap();
            }
        }
    }

    #[test]
    fn separating_examples() {
        let z = sp("5,3,1;4,2,0");
        let l = z.lambda(1);
        assert!(separating_pair(&z, &l, &l.transpose(), &[]).is_err());
        let z = sp("8,5,1;6,3");
        let core = [Pair { top: 5, bot: 3 }];
        let free: Vec<Mask> = z
            .family_masks(Family::Sp)
            .unwrap()
            .into_iter()
            .filter(|m| m & z.mask_of_pairs(&core).unwrap() == 0)
            .collect();
        for &a in &free {
            for &b in &free {
                if a != b {
                    separating_pair(&z, &z.lambda(a), &z.lambda(b), &core).unwrap();
                }
            }
        }
    }

    #[test]
    fn structure_on_small_symbols() {
        for x in ["4,2,0;3,1", "5,3,1;4,2,0", "8,5,1;6,3", "8,6,2;6,3,0", "2,0;1", "0;-"] {
            structure_check(&sp(x)).unwrap();
        }
    }

    #[test]
    fn parse_display_round_trip() {
        let a: Arrangement = "{(4;-),(2;3),(0;1)}".parse().unwrap();
        assert_eq!(a.to_string(), "{(4;-),(2;3),(0;1)}");
        assert_eq!(a.to_string().parse::<Arrangement>().unwrap(), a);
        assert!(parse_pairs("-").unwrap().is_empty());
    }
}
