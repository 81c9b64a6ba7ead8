//! Branching sets `Ω^±_Λ`, partner sets `Θ`, `Θ*`, the constructive witnesses
//! for `Θ*` and the cuspidal symbols.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relations::{in_b, Sign};
use crate::symbol::Symbol;

/// `Ω^+_Λ` or `Ω^−_Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchSet {
    /// `Λ`.
    pub source: Symbol,
    /// `+` for `Ω^+`, `−` for `Ω^−`.
    pub direction: Sign,
    /// The members.
    pub members: BTreeSet<Symbol>,
}

impl BranchSet {
    fn build(source: &Symbol, direction: Sign, cands: Vec<(Vec<u32>, Vec<u32>)>) -> Result<BranchSet> {
        let mut members = BTreeSet::new();
        for (t, b) in cands {
            let s = Symbol::new(t, b)?;
            let want = match direction {
                Sign::Plus => source.rank() + 1,
                Sign::Minus => source.rank() - 1,
            };
            if s.rank() != want || s.defect() != source.defect() {
                return Err(Error::Invariant(format!("{s} has the wrong rank or defect for Ω of {source}")));
            }
            if !members.insert(s.clone()) {
                return Err(Error::Invariant(format!("{s} arises twice in Ω of {source}")));
            }
        }
        Ok(BranchSet { source: source.clone(), direction, members })
    }

    /// Whether `s` is a member.
    pub fn contains(&self, s: &Symbol) -> bool {
        self.members.contains(s)
    }
}

fn bumped(row: &[u32], i: usize, up: bool) -> Vec<u32> {
    let mut r = row.to_vec();
    if up {
        r[i] += 1;
    } else {
        r[i] -= 1;
    }
    r
}

fn plus_one(row: &[u32], last: u32) -> Vec<u32> {
    row.iter().map(|x| x + 1).chain([last]).collect()
}

/// `Ω^+_Λ`, types I–IV on the reduced rows. An empty row has no last entry equal to 0.
pub fn omega_plus(l: &Symbol) -> Result<BranchSet> {
    let (a, b) = (l.top(), l.bot());
    let mut c = Vec::new();
    for i in 0..a.len() {
        if i == 0 || a[i - 1] > a[i] + 1 {
            c.push((bumped(a, i, true), b.to_vec()));
        }
    }
    for j in 0..b.len() {
        if j == 0 || b[j - 1] > b[j] + 1 {
            c.push((a.to_vec(), bumped(b, j, true)));
        }
    }
    if a.last() != Some(&0) {
        c.push((plus_one(a, 1), plus_one(b, 0)));
    }
    if b.last() != Some(&0) {
        c.push((plus_one(a, 0), plus_one(b, 1)));
    }
    BranchSet::build(l, Sign::Plus, c)
}

/// `Ω^−_Λ`, types I'–III' on the reduced rows.
pub fn omega_minus(l: &Symbol) -> Result<BranchSet> {
    let (a, b) = (l.top(), l.bot());
    let ends = (a.last().copied(), b.last().copied());
    let mut c = Vec::new();
    for i in 0..a.len() {
        let ok = if i + 1 < a.len() { a[i] > a[i + 1] + 1 } else { a[i] >= 1 && ends != (Some(1), Some(0)) };
        if ok {
            c.push((bumped(a, i, false), b.to_vec()));
        }
    }
    for j in 0..b.len() {
        let ok = if j + 1 < b.len() { b[j] > b[j + 1] + 1 } else { b[j] >= 1 && ends != (Some(0), Some(1)) };
        if ok {
            c.push((a.to_vec(), bumped(b, j, false)));
        }
    }
    if ends == (Some(1), Some(0)) || ends == (Some(0), Some(1)) {
        let drop = |r: &[u32]| r[..r.len() - 1].iter().map(|x| x - 1).collect::<Vec<u32>>();
        c.push((drop(a), drop(b)));
    }
    BranchSet::build(l, Sign::Minus, c)
}

/// `Ω^−_Λ` straight from its definition `{Λ_1 : Λ ∈ Ω^+_{Λ_1}}`.
pub fn omega_minus_by_definition(l: &Symbol) -> Result<BTreeSet<Symbol>> {
    if l.rank() == 0 {
        return Ok(BTreeSet::new());
    }
    let mut out = BTreeSet::new();
    for x in Symbol::enumerate(l.rank() - 1, l.defect()) {
        if omega_plus(&x)?.contains(l) {
            out.insert(x);
        }
    }
    Ok(out)
}

/// Orientation of a `Θ` query: a defect-1 symbol against defect-0 candidates, or the mirror.
fn oriented(l: &Symbol) -> Result<bool> {
    match l.defect() {
        1 => Ok(true),
        0 => Ok(false),
        d => Err(Error::Defect(format!("Θ needs a symbol of defect 1 or 0, got {d}"))),
    }
}

/// `Θ_Λ(Ω) = {x ∈ Ω : (Λ, x) ∈ B^+}`, or `{x ∈ Ω : (x, Λ) ∈ B^+}` for `Λ` of defect 0.
pub fn theta_set<'a>(l: &Symbol, omega: impl IntoIterator<Item = &'a Symbol>) -> Result<BTreeSet<Symbol>> {
    let fwd = oriented(l)?;
    Ok(omega
        .into_iter()
        .filter(|x| if fwd { in_b(l, x, Sign::Plus) } else { in_b(x, l, Sign::Plus) })
        .cloned()
        .collect())
}

/// `Θ*_Λ(Ω)`: members `x` with `(Λ, x^t) ∈ B^+` and `(Λ, x) ∉ B^+`; for `Λ` of
/// defect 0, members `x` with `(x, Λ^t) ∈ B^+` and `(x, Λ) ∉ B^+`.
pub fn theta_star<'a>(l: &Symbol, omega: impl IntoIterator<Item = &'a Symbol>) -> Result<BTreeSet<Symbol>> {
    let fwd = oriented(l)?;
    let lt = l.transpose();
    Ok(omega
        .into_iter()
        .filter(|x| {
            if fwd {
                in_b(l, &x.transpose(), Sign::Plus) && !in_b(l, x, Sign::Plus)
            } else {
                in_b(x, &lt, Sign::Plus) && !in_b(x, l, Sign::Plus)
            }
        })
        .cloned()
        .collect())
}

/// The two counting identities relating `Θ` over `Ω^+` and `Ω^−`.
pub fn counting_identities_hold(l: &Symbol, lp: &Symbol) -> Result<bool> {
    let a = theta_set(l, &omega_plus(lp)?.members)?.len();
    let b = theta_set(lp, &omega_minus(l)?.members)?.len();
    let c = theta_set(lp, &omega_plus(l)?.members)?.len();
    let d = theta_set(l, &omega_minus(lp)?.members)?.len();
    Ok(a == 1 + b && c == 1 + d)
}

/// The non-emptiness dichotomy for `Θ` over `Ω^−`, by the sizes of the reduced symbols.
pub fn dichotomy_holds(l: &Symbol, lp: &Symbol) -> Result<bool> {
    let m = l.bot().len();
    let mp = lp.top().len();
    if mp == m + 1 {
        Ok(!theta_set(l, &omega_minus(lp)?.members)?.is_empty())
    } else if mp == m {
        let empty = theta_set(lp, &omega_minus(l)?.members)?.is_empty();
        Ok(!empty || *l == "0;-".parse::<Symbol>()?)
    } else {
        Err(Error::Sizes(format!("{l} and {lp} have sizes outside m' ∈ {{m, m+1}}")))
    }
}

fn symbol(top: Vec<u32>, bot: Vec<u32>) -> Result<Symbol> {
    Symbol::new(top, bot).map_err(|e| Error::Invariant(format!("witness rows are not a symbol: {e}")))
}

/// Where `Λ''` differs from `Λ'_1` as a member of `Ω^+_{Λ'_1}`.
enum Bump {
    Top(usize),
    Bot(usize),
    Grown,
}

fn bump_of(l1p: &Symbol, lpp: &Symbol) -> Result<Bump> {
    let (c, d) = (l1p.top(), l1p.bot());
    let (x, y) = (lpp.top(), lpp.bot());
    if x.len() != c.len() || y.len() != d.len() {
        return Ok(Bump::Grown);
    }
    let dt: Vec<usize> = (0..c.len()).filter(|&i| x[i] != c[i]).collect();
    let db: Vec<usize> = (0..d.len()).filter(|&i| y[i] != d[i]).collect();
    match (dt.as_slice(), db.as_slice()) {
        ([k], []) if x[*k] == c[*k] + 1 => Ok(Bump::Top(*k)),
        ([], [l]) if y[*l] == d[*l] + 1 => Ok(Bump::Bot(*l)),
        _ => Err(Error::Invariant(format!("{lpp} is not a single-entry bump of {l1p}"))),
    }
}

/// `Λ''^t` with one adjustment, following the proofs' case split for types I and II.
fn swap_bump(c: &[u32], d: &[u32], bump: &Bump) -> Result<Symbol> {
    match *bump {
        Bump::Top(k) if k >= 1 => symbol(bumped(d, k - 1, false), bumped(c, k, true)),
        Bump::Bot(l) if l >= 1 => symbol(bumped(d, l, true), bumped(c, l - 1, false)),
        _ => Err(Error::Invariant("unreachable bump position".to_string())),
    }
}

fn witness_plus1(c: &[u32], d: &[u32], lpp: &Symbol, bump: Bump) -> Result<Symbol> {
    let m = c.len() - 1;
    match bump {
        Bump::Top(0) => Err(Error::Invariant(format!("{lpp}: a bump of c_1 keeps the pair in B^+"))),
        Bump::Grown => Err(Error::Invariant(format!("{lpp}: grown members have no partner of that size"))),
        Bump::Top(_) => swap_bump(c, d, &bump),
        Bump::Bot(l) if l >= 1 => swap_bump(c, d, &bump),
        Bump::Bot(_) if m == 0 => {
            if c[0] >= 1 {
                symbol(vec![d[0] + 1], vec![c[0] - 1])
            } else {
                symbol(vec![d[0]], vec![c[0]])
            }
        }
        Bump::Bot(_) => {
            let (cl, dl) = (c[m], d[m]);
            if dl >= 1 && (cl, dl) != (0, 1) {
                symbol(bumped(&bumped(d, 0, true), m, false), c.to_vec())
            } else if cl >= 1 && (cl, dl) != (1, 0) {
                symbol(bumped(d, 0, true), bumped(c, m, false))
            } else if (cl, dl) == (1, 0) || (cl, dl) == (0, 1) {
                let top = [d[0]].into_iter().chain(d[1..m].iter().map(|x| x - 1)).collect();
                symbol(top, c[..m].iter().map(|x| x - 1).collect())
            } else {
                Err(Error::Invariant(format!("{lpp}: both last entries of Λ'_1 are 0")))
            }
        }
    }
}

/// Lowerings of the last entries of `(d_1+1, d_2, …; c)`, in the order of the
/// size-`(m+1, m+1)` construction.
fn lowered_ends(c: &[u32], d: &[u32]) -> Result<Vec<Symbol>> {
    let m = c.len();
    let top = bumped(d, 0, true);
    let (cl, dl) = (c[m - 1], d[m - 1]);
    let mut out = Vec::new();
    if dl >= 1 && (cl, dl) != (0, 1) {
        out.push(symbol(bumped(&top, m - 1, false), c.to_vec())?);
    }
    if cl >= 1 && (cl, dl) != (1, 0) {
        out.push(symbol(top.clone(), bumped(c, m - 1, false))?);
    }
    if (cl, dl) == (1, 0) || (cl, dl) == (0, 1) {
        let t = [top[0] - 1].into_iter().chain(top[1..m - 1].iter().map(|x| x - 1)).collect();
        out.push(symbol(t, c[..m - 1].iter().map(|x| x - 1).collect())?);
    }
    Ok(out)
}

fn witness_equal(l: &Symbol, c: &[u32], d: &[u32], lpp: &Symbol, bump: Bump) -> Result<Symbol> {
    let m = c.len();
    match bump {
        Bump::Bot(0) => {
            for x in lowered_ends(c, d)? {
                if witness_conditions_hold(l, &x, lpp)? {
                    return Ok(x);
                }
            }
            Err(Error::NoWitness(format!("{lpp} bumps d_1 and no lowering of the last entries works")))
        }
        Bump::Top(_) | Bump::Bot(_) => swap_bump(c, d, &bump),
        Bump::Grown => {
            let (x, y) = (lpp.top(), lpp.bot());
            if x.last() == Some(&1) && y.last() == Some(&0) {
                let top = d[..m - 1].iter().map(|v| v + 1).chain([d[m - 1], 0]).collect();
                symbol(top, plus_one(c, 1))
            } else if x.last() == Some(&0) && y.last() == Some(&1) {
                let bot = c[..m - 1].iter().map(|v| v + 1).chain([c[m - 1], 0]).collect();
                symbol(plus_one(d, 1), bot)
            } else {
                Err(Error::Invariant(format!("{lpp} is not of type III or IV")))
            }
        }
    }
}

/// Whether `Λ'_2` satisfies the three witness conditions for `Λ''`.
pub fn witness_conditions_hold(l: &Symbol, l2p: &Symbol, lpp: &Symbol) -> Result<bool> {
    let om = omega_plus(l2p)?;
    Ok(om.contains(&lpp.transpose()) && in_b(l, l2p, Sign::Plus) && theta_star(l, &om.members)?.is_empty())
}

/// Builds `Λ'_2` with `Λ''^t ∈ Ω^+_{Λ'_2}`, `(Λ, Λ'_2) ∈ B^+` and `Θ*_Λ(Ω^+_{Λ'_2}) = ∅`
/// from `(Λ, Λ'_1) ∈ B^+` and `Λ'' ∈ Θ*_Λ(Ω^+_{Λ'_1})`.
pub fn witness_lambda2(l: &Symbol, l1p: &Symbol, lpp: &Symbol) -> Result<Symbol> {
    if l.defect() != 1 || l1p.defect() != 0 {
        return Err(Error::Defect("expected Λ of defect 1 and Λ'_1 of defect 0".to_string()));
    }
    if !in_b(l, l1p, Sign::Plus) {
        return Err(Error::Invalid(format!("({l}, {l1p}) is not in B^+")));
    }
    if !theta_star(l, &omega_plus(l1p)?.members)?.contains(lpp) {
        return Err(Error::Invalid(format!("{lpp} is not in Θ*_Λ(Ω^+_Λ'_1)")));
    }
    let m = l.bot().len();
    let (c, d) = (l1p.top(), l1p.bot());
    let bump = bump_of(l1p, lpp)?;
    let l2p = if c.len() == m + 1 {
        witness_plus1(c, d, lpp, bump)?
    } else if c.len() == m && m >= 1 {
        witness_equal(l, c, d, lpp, bump)?
    } else {
        return Err(Error::Sizes(format!("no witness construction for sizes of {l} and {l1p}")));
    };
    if !witness_conditions_hold(l, &l2p, lpp)? {
        return Err(Error::Invariant(format!("witness {l2p} for {lpp} fails its conditions")));
    }
    Ok(l2p)
}

/// All `Λ'_2` satisfying the witness conditions, found by search over `Ω^−_{Λ''^t}`.
pub fn witness_candidates(l: &Symbol, lpp: &Symbol) -> Result<Vec<Symbol>> {
    let mut out = Vec::new();
    for x in omega_minus(&lpp.transpose())?.members {
        if witness_conditions_hold(l, &x, lpp)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// All `Λ_2 ∈ Ω^−_{Λ''}` with `(Λ_2, Λ'^t) ∈ B^+` and `Θ*_{Λ'^t}(Ω^+_{Λ_2}) = ∅`.
pub fn mirror_witness_candidates(lp: &Symbol, lpp: &Symbol) -> Result<Vec<Symbol>> {
    let lpt = lp.transpose();
    let mut out = Vec::new();
    for x in omega_minus(lpp)?.members {
        if in_b(&x, &lpt, Sign::Plus) && theta_star(&lpt, &omega_plus(&x)?.members)?.is_empty() {
            out.push(x);
        }
    }
    Ok(out)
}

/// The mirrored witness: from `(Λ_1, Λ') ∈ B^+` and `Λ'' ∈ Θ*_{Λ'}(Ω^+_{Λ_1})`, the least
/// `Λ_2` with `Λ'' ∈ Ω^+_{Λ_2}`, `(Λ_2, Λ'^t) ∈ B^+` and `Θ*_{Λ'^t}(Ω^+_{Λ_2}) = ∅`.
pub fn mirror_witness(l1: &Symbol, lp: &Symbol, lpp: &Symbol) -> Result<Symbol> {
    if l1.defect() != 1 || lp.defect() != 0 {
        return Err(Error::Defect("expected Λ_1 of defect 1 and Λ' of defect 0".to_string()));
    }
    if !in_b(l1, lp, Sign::Plus) {
        return Err(Error::Invalid(format!("({l1}, {lp}) is not in B^+")));
    }
    if !theta_star(lp, &omega_plus(l1)?.members)?.contains(lpp) {
        return Err(Error::Invalid(format!("{lpp} is not in Θ*_Λ'(Ω^+_Λ_1)")));
    }
    mirror_witness_candidates(lp, lpp)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoWitness(format!("no Λ_2 below {lpp} for {lp}")))
}

/// Kinds of unipotent cuspidal symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CuspidalKind {
    /// `Λ_m` of `Sp_{2m(m+1)}`.
    Sp,
    /// `Λ'_m` of `O^ε_{2m²}`.
    OI,
    /// `(Λ'_m)^t`.
    OII,
}

/// The cuspidal symbol of the given kind; the entries sit in the first row for even `m`.
pub fn cuspidal_symbol(m: u32, kind: CuspidalKind) -> Result<Symbol> {
    let n = match kind {
        CuspidalKind::Sp => 2 * m + 1,
        _ if m == 0 => return Err(Error::Invalid("orthogonal cuspidal symbols need m ≥ 1".to_string())),
        _ => 2 * m,
    };
    let row: Vec<u32> = (0..n).rev().collect();
    let s = if m.is_multiple_of(2) { Symbol::new(row, Vec::new())? } else { Symbol::new(Vec::new(), row)? };
    Ok(if kind == CuspidalKind::OII { s.transpose() } else { s })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Symbol {
        x.parse().unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<Symbol> {
        xs.iter().map(|x| s(x)).collect()
    }

    #[test]
    fn omega_worked_example() {
        let l = s("4,2,1;3,0");
        assert_eq!(
            omega_plus(&l).unwrap().members,
            set(&["5,2,1;3,0", "4,3,1;3,0", "4,2,1;4,0", "4,2,1;3,1", "5,3,2,1;4,1,0"])
        );
        assert_eq!(omega_minus(&l).unwrap().members, set(&["3,2,1;3,0", "4,2,1;2,0", "3,1;2"]));
        assert_eq!(omega_minus_by_definition(&l).unwrap(), omega_minus(&l).unwrap().members);
    }

    #[test]
    fn omega_of_small_symbols() {
        assert_eq!(omega_plus(&s("0;-")).unwrap().members, set(&["1;-", "1,0;1"]));
        assert_eq!(omega_plus(&s("-;-")).unwrap().members, set(&["1;0", "0;1"]));
        assert_eq!(omega_minus(&s("1;-")).unwrap().members, set(&["0;-"]));
        assert!(omega_minus(&s("0;-")).unwrap().members.is_empty());
    }

    #[test]
    fn omega_minus_matches_definition() {
        for n in 0..=6 {
            for d in Symbol::defects_up_to(n) {
                for l in Symbol::enumerate(n, d) {
                    let direct = omega_minus(&l).unwrap().members;
                    assert_eq!(direct, omega_minus_by_definition(&l).unwrap(), "{l}");
                }
            }
        }
    }

    #[test]
    fn theta_worked_examples() {
        let l = s("8,5,1;6,2");
        let lp = s("7,4,1;8,5,1");
        assert!(in_b(&l, &lp, Sign::Plus));
        let om = omega_plus(&lp).unwrap().members;
        assert_eq!(theta_set(&l, &om).unwrap(), set(&["8,4,1;8,5,1", "7,5,1;8,5,1", "7,4,2;8,5,1"]));
        assert_eq!(theta_star(&l, &om).unwrap(), set(&["7,4,1;9,5,1", "7,4,1;8,6,1", "7,4,1;8,5,2"]));

        let l1p = s("7,4,1;8,3,0");
        let om = omega_plus(&l1p).unwrap().members;
        assert_eq!(
            theta_set(&l, &om).unwrap(),
            set(&["8,4,1;8,3,0", "7,5,1;8,3,0", "7,4,2;8,3,0", "7,4,1;8,4,0", "7,4,1;8,3,1"])
        );
        assert_eq!(theta_star(&l, &om).unwrap(), set(&["7,4,1;9,3,0"]));

        let lpp = s("7,4,1;9,3,0");
        let l2p = witness_lambda2(&l, &l1p, &lpp).unwrap();
        assert_eq!(l2p, s("8,2;6,3"));
        let om = omega_plus(&l2p).unwrap().members;
        let th = theta_set(&l, &om).unwrap();
        assert_eq!(th, set(&["9,2;6,3", "8,3;6,3", "8,2;7,3", "8,2;6,4", "9,3,1;7,4,0", "9,3,0;7,4,1"]));
        assert!(theta_star(&l, &om).unwrap().is_empty());
        assert!(th.contains(&lpp.transpose()));

        assert!(theta_set(&l, &BTreeSet::new()).unwrap().is_empty());
        assert!(theta_star(&l, &BTreeSet::new()).unwrap().is_empty());
    }

    #[test]
    fn base_case_witness() {
        for a in 0..5u32 {
            for c in 0..5u32 {
                for d in (0..5u32).filter(|&d| c + d > 0) {
                    let (l, l1p, lpp) = (
                        Symbol::new(vec![a], vec![]).unwrap(),
                        s(&format!("{c};{d}")),
                        s(&format!("{c};{}", d + 1)),
                    );
                    if !in_b(&l, &l1p, Sign::Plus)
                        || !theta_star(&l, &omega_plus(&l1p).unwrap().members).unwrap().contains(&lpp)
                    {
                        continue;
                    }
                    let want =
                        if c >= 1 { s(&format!("{};{}", d + 1, c - 1)) } else { s(&format!("{d};{c}")) };
                    assert_eq!(witness_lambda2(&l, &l1p, &lpp).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn cuspidal_symbols() {
        assert_eq!(cuspidal_symbol(1, CuspidalKind::Sp).unwrap(), s("-;2,1,0"));
        assert_eq!(cuspidal_symbol(2, CuspidalKind::Sp).unwrap(), s("4,3,2,1,0;-"));
        assert_eq!(cuspidal_symbol(1, CuspidalKind::OI).unwrap(), s("-;1,0"));
        assert_eq!(cuspidal_symbol(1, CuspidalKind::OII).unwrap(), s("1,0;-"));
        assert!(cuspidal_symbol(0, CuspidalKind::OI).is_err());
        for m in 0..5 {
            assert_eq!(cuspidal_symbol(m, CuspidalKind::Sp).unwrap().rank(), m * (m + 1));
            if m >= 1 {
                assert_eq!(cuspidal_symbol(m, CuspidalKind::OI).unwrap().rank(), m * m);
                assert_eq!(cuspidal_symbol(m, CuspidalKind::OII).unwrap().rank(), m * m);
            }
        }
    }
}
