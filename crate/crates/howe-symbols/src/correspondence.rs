//! The correspondence `B_{Sp_2n, O^ε_2n'}` assembled from its blocks, its
//! consistency checks, table rendering, and the verification suites.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::branching::{counting_identities_hold, cuspidal_symbol, dichotomy_holds, CuspidalKind};
use crate::cells::structure_check;
use crate::relations::{
    in_b, interlace_oracle, render_csv, render_markdown, Regime, RelationKind, RelationSet, Sign, SpecialPair,
};
use crate::special::{enumerate_special, Family, SpecialSymbol};
use crate::symbol::Symbol;
use crate::theta::{check_all_cells, compare_graph, ThetaMap};
use crate::uniform::verify_projection;
use crate::{Error, Result};

/// The pairs of `B^ε_{Z,Z'}` for one pair of special symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    /// Special symbol of defect 1.
    #[serde(rename = "Z")]
    pub z: String,
    /// Special symbol of defect 0.
    #[serde(rename = "Zp")]
    pub zp: String,
    /// Number of pairs in the block.
    pub size: usize,
}

/// All pairs `(Λ, Λ')` of `B_{Sp_2n, O^ε_2n'}`, grouped by special pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceTable {
    /// Rank of the symplectic side.
    pub n: u32,
    /// Rank of the orthogonal side.
    pub np: u32,
    /// `ε`.
    pub eps: Sign,
    /// The pairs.
    pub pairs: BTreeSet<(Symbol, Symbol)>,
    /// Nonempty blocks, sorted by `(Z, Z')`.
    pub blocks: Vec<RelationSet>,
}

impl Serialize for CorrespondenceTable {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pairs: Vec<[String; 2]> =
            self.pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect();
        let blocks: Vec<Block> = self
            .blocks
            .iter()
            .map(|b| Block { z: b.z.to_string(), zp: b.zp.to_string(), size: b.len() })
            .collect();
        let mut st = ser.serialize_struct("CorrespondenceTable", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("np", &self.np)?;
        st.serialize_field("epsilon", &self.eps)?;
        st.serialize_field("pairs", &pairs)?;
        st.serialize_field("blocks", &blocks)?;
        st.end()
    }
}

/// Builds `B_{Sp_2n, O^ε_2n'}` as the union of `B^ε_{Z,Z'}` over special symbols of ranks `n`, `n'`.
pub fn correspondence(n: u32, np: u32, eps: Sign) -> Result<CorrespondenceTable> {
    let zs = enumerate_special(n, 1)?;
    let zps = enumerate_special(np, 0)?;
    let mut blocks = Vec::new();
    let mut pairs = BTreeSet::new();
    for z in &zs {
        for zp in &zps {
            let rel = SpecialPair::new(z, zp)?.relation(RelationKind::b(eps))?;
            if rel.is_empty() {
                continue;
            }
            for p in &rel.pairs {
                if !pairs.insert(p.clone()) {
                    return Err(Error::Invariant(format!("({}, {}) lies in two blocks", p.0, p.1)));
                }
            }
            blocks.push(rel);
        }
    }
    Ok(CorrespondenceTable { n, np, eps, pairs, blocks })
}

/// Whether a defect belongs to the symplectic side.
fn sp_defect(d: i32) -> bool {
    d.rem_euclid(4) == 1
}

/// Whether a defect belongs to the orthogonal side of sign `ε`.
fn o_defect(d: i32, eps: Sign) -> bool {
    d.rem_euclid(4) == if eps == Sign::Plus { 0 } else { 2 }
}

/// `B_{Sp_2n, O^ε_2n'}` by filtering all pairs of symbols of the right ranks and defects.
pub fn correspondence_by_filter(n: u32, np: u32, eps: Sign) -> BTreeSet<(Symbol, Symbol)> {
    let left: Vec<Symbol> = Symbol::defects_up_to(n)
        .into_iter()
        .filter(|&d| sp_defect(d))
        .flat_map(|d| Symbol::enumerate(n, d))
        .collect();
    let right: Vec<Symbol> = Symbol::defects_up_to(np)
        .into_iter()
        .filter(|&d| o_defect(d, eps))
        .flat_map(|d| Symbol::enumerate(np, d))
        .collect();
    let mut out = BTreeSet::new();
    for l in &left {
        for lp in &right {
            if in_b(l, lp, eps) {
                out.insert((l.clone(), lp.clone()));
            }
        }
    }
    out
}

impl CorrespondenceTable {
    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Whether the table is empty.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether a pair occurs.
    pub fn contains(&self, l: &Symbol, lp: &Symbol) -> bool {
        self.pairs.contains(&(l.clone(), lp.clone()))
    }

    /// Checks the defect relation `def Λ' = −def Λ + 1` (`ε = +`) or `−def Λ − 1` (`ε = −`).
    pub fn check_defects(&self) -> Result<()> {
        for (l, lp) in &self.pairs {
            let want = -l.defect() + if self.eps == Sign::Plus { 1 } else { -1 };
            if lp.defect() != want || !sp_defect(l.defect()) || !o_defect(lp.defect(), self.eps) {
                return Err(Error::Invariant(format!(
                    "({l}, {lp}): defects ({}, {})",
                    l.defect(),
                    lp.defect()
                )));
            }
        }
        Ok(())
    }

    /// Pairs `(Λ, Λ')` with `Λ' < Λ'^t` such that `(Λ, Λ'^t)` also occurs.
    pub fn double_partners(&self) -> Vec<(Symbol, Symbol)> {
        self.pairs
            .iter()
            .filter(|(l, lp)| {
                let t = lp.transpose();
                *lp < t && self.contains(l, &t)
            })
            .cloned()
            .collect()
    }

    /// Checks that `(Λ, Λ')` and `(Λ, Λ'^t)` never both occur when `Λ'^t ≠ Λ'`.
    pub fn check_no_double_partner(&self) -> Result<()> {
        match self.double_partners().first() {
            Some((l, lp)) => {
                Err(Error::Invariant(format!("{l} pairs with both {lp} and {}", lp.transpose())))
            }
            None => Ok(()),
        }
    }

    /// Checks that the blockwise table equals the global filter.
    pub fn check_against_filter(&self) -> Result<()> {
        let direct = correspondence_by_filter(self.n, self.np, self.eps);
        if direct != self.pairs {
            let extra = self.pairs.symmetric_difference(&direct).next();
            return Err(Error::Invariant(format!(
                "blockwise and global counts differ ({} vs {}), first: {extra:?}",
                self.pairs.len(),
                direct.len()
            )));
        }
        Ok(())
    }

    /// Checks the defect relation and the agreement with the global filter.
    pub fn check(&self) -> Result<()> {
        self.check_defects()?;
        self.check_against_filter()
    }
}

/// Output formats for tables and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Markdown.
    Markdown,
    /// Comma separated values.
    Csv,
    /// JSON.
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s.trim() {
            "md" | "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Invalid(format!("unknown format `{other}`"))),
        }
    }
}

/// Renders a relation as a check-mark matrix.
pub fn render_relation(rel: &RelationSet, format: Format) -> String {
    match format {
        Format::Markdown => render_markdown(rel),
        Format::Csv => render_csv(rel),
        Format::Json => {
            let (rows, cols) = rel.layout();
            let matrix: Vec<Vec<bool>> =
                rows.iter().map(|r| cols.iter().map(|c| rel.contains(r, c)).collect()).collect();
            let v = serde_json::json!({
                "Z": rel.z.to_string(),
                "Zp": rel.zp.to_string(),
                "kind": rel.kind.to_string(),
                "rows": rows.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "columns": cols.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "matrix": matrix,
            });
            format!("{v}\n")
        }
    }
}

/// Renders `B^ε_{Z,Z'}` as a check-mark matrix.
pub fn render_table(z: &Symbol, zp: &Symbol, eps: Sign, format: Format) -> Result<String> {
    let rel = SpecialPair::new(z, zp)?.relation(RelationKind::b(eps))?;
    Ok(render_relation(&rel, format))
}

/// Bounds for a verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Size bound; its meaning depends on the suite.
    pub max_rank: u32,
    /// Restrict to one sign, or run both.
    pub eps: Option<Sign>,
}

/// Outcome of a verification suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    /// Suite name.
    pub suite: String,
    /// The size bound used.
    pub max_rank: u32,
    /// Whether every case passed.
    pub ok: bool,
    /// Number of cases checked.
    pub checked: usize,
    /// Failing cases, sorted.
    pub failures: Vec<String>,
}

/// Registered suites with a description of the bound each one takes.
pub const SUITES: &[(&str, &str)] = &[
    ("base-pair", "D nonempty implies (Z, Z') ∈ D; both ranks ≤ N"),
    ("projection", "uniform projection identity; rank sum ≤ N"),
    ("branching", "branching counts and dichotomy on B^+; rank sum ≤ N"),
    ("cells", "cell structure for special symbols with δ ≤ 3; rank ≤ N"),
    ("oracle", "B^+ against the interlacing oracle; both ranks ≤ N"),
    ("defect", "defect formula and global filter; n + n' ≤ N"),
    ("partners", "no Λ with both Λ' and Λ'^t; n + n' ≤ N"),
    ("counting", "family sizes of Z_(m), Z'_(m+1); m ≤ N"),
    ("theta", "θ graphs and cell images; rank sum ≤ N"),
];

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&v)
    }
}

fn signs(b: &Bounds) -> Vec<Sign> {
    match b.eps {
        Some(e) => vec![e],
        None => Sign::both().to_vec(),
    }
}

fn special_pairs<F: Fn(u32, u32) -> bool>(max: u32, keep: F) -> Result<Vec<SpecialPair>> {
    let mut out = Vec::new();
    for n in 0..=max {
        for np in 0..=max {
            if !keep(n, np) {
                continue;
            }
            for z in enumerate_special(n, 1)? {
                for zp in enumerate_special(np, 0)? {
                    out.push(SpecialPair::new(&z, &zp)?);
                }
            }
        }
    }
    Ok(out)
}

fn label(p: &SpecialPair) -> String {
    format!("{} {}", p.z.symbol(), p.zp.symbol())
}

/// Evaluates `case` on every item in parallel and collects failures in input order.
fn sweep<T: Sync, F>(items: &[T], case: F) -> (usize, Vec<String>)
where
    F: Fn(&T) -> Result<(usize, Vec<String>)> + Sync,
{
    let results: Vec<(usize, Vec<String>)> =
        items.par_iter().map(|x| case(x).unwrap_or_else(|e| (1, vec![e.to_string()]))).collect();
    let checked = results.iter().map(|r| r.0).sum();
    let failures = results.into_iter().flat_map(|r| r.1).collect();
    (checked, failures)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Runs a registered suite.
pub fn run_suite(name: &str, bounds: Bounds) -> Result<SuiteReport> {
    let n = bounds.max_rank;
    let (checked, failures) = match name {
        "base-pair" => {
            let ps = special_pairs(n, |_, _| true)?;
            sweep(&ps, |p| {
                let bad = !p.d_is_empty() && !p.base_in_d();
                Ok((1, if bad { vec![label(p)] } else { Vec::new() }))
            })
        }
        "projection" => {
            let ps = special_pairs(n, |a, b| a + b <= n)?;
            let eps = signs(&bounds);
            sweep(&ps, |p| {
                let mut bad = Vec::new();
                for &e in &eps {
                    let r = verify_projection(p, e)?;
                    if !r.ok {
                        bad.push(format!("{} {e} {:?}", label(p), r.witness));
                    }
                }
                Ok((eps.len(), bad))
            })
        }
        "branching" => {
            let mut ls = Vec::new();
            for a in 0..=n {
                for b in 0..=n - a {
                    for l in Symbol::enumerate(a, 1) {
                        ls.push((l, b));
                    }
                }
            }
            sweep(&ls, |(l, b)| {
                let mut count = 0;
                let mut bad = Vec::new();
                for lp in Symbol::enumerate(*b, 0) {
                    if !in_b(l, &lp, Sign::Plus) {
                        continue;
                    }
                    count += 1;
                    if !counting_identities_hold(l, &lp)? || !dichotomy_holds(l, &lp)? {
                        bad.push(format!("{l} {lp}"));
                    }
                }
                Ok((count, bad))
            })
        }
        "cells" => {
            let mut zs = Vec::new();
            for r in 0..=n {
                for d in [0, 1] {
                    for s in enumerate_special(r, d)? {
                        let z = SpecialSymbol::new(&s)?;
                        if z.degree() <= 3 {
                            zs.push(z);
                        }
                    }
                }
            }
            sweep(&zs, |z| Ok((1, structure_check(z).err().map(|e| e.to_string()).into_iter().collect())))
        }
        "oracle" => {
            let mut ls = Vec::new();
            for a in 0..=n {
                for b in 0..=n {
                    for l in Symbol::enumerate(a, 1) {
                        ls.push((l, b));
                    }
                }
            }
            sweep(&ls, |(l, b)| {
                let mut count = 0;
                let mut bad = Vec::new();
                for lp in Symbol::enumerate(*b, 0) {
                    let want = in_b(l, &lp, Sign::Plus);
                    for r in [Regime::Equal, Regime::Plus1] {
                        count += 1;
                        if interlace_oracle(l, &lp, r)? != want {
                            bad.push(format!("{l} {lp} {r:?}"));
                        }
                    }
                }
                Ok((count, bad))
            })
        }
        "defect" => {
            let mut cases = Vec::new();
            for a in 0..=n {
                for b in 0..=n - a {
                    for e in signs(&bounds) {
                        cases.push((a, b, e));
                    }
                }
            }
            sweep(&cases, |&(a, b, e)| {
                let t = correspondence(a, b, e)?;
                let bad = t.check().err().map(|x| format!("({a}, {b}, {e}): {x}"));
                Ok((t.len().max(1), bad.into_iter().collect()))
            })
        }
        "partners" => {
            let mut cases = Vec::new();
            for a in 0..=n {
                for b in 0..=n - a {
                    for e in signs(&bounds) {
                        cases.push((a, b, e));
                    }
                }
            }
            sweep(&cases, |&(a, b, e)| {
                let t = correspondence(a, b, e)?;
                let bad = t
                    .double_partners()
                    .into_iter()
                    .map(|(l, lp)| format!("({a}, {b}, {e}): {l} with {lp} and {}", lp.transpose()))
                    .collect();
                Ok((t.len(), bad))
            })
        }
        "counting" => {
            let ms: Vec<u32> = (0..=n).collect();
            sweep(&ms, |&m| {
                let sp = SpecialSymbol::cuspidal_sp(m).family(Family::Defect(1))?.len() as u64;
                let o = SpecialSymbol::cuspidal_o(m + 1).family(Family::Defect(0))?.len() as u64;
                let (m, k) = (m as u64, 2 * m as u64);
                let mut bad = Vec::new();
                if sp != binomial(k + 1, m) {
                    bad.push(format!("|S_Z_({m}),1| = {sp}"));
                }
                if o != binomial(k + 2, m + 1) {
                    bad.push(format!("|S_Z'_({}),0| = {o}", m + 1));
                }
                Ok((2, bad))
            })
        }
        "theta" => {
            let ps: Vec<SpecialPair> =
                special_pairs(n, |a, b| a + b <= n)?.into_iter().filter(|p| !p.d_is_empty()).collect();
            let eps = signs(&bounds);
            sweep(&ps, |p| {
                let mut count = 0;
                let mut bad = Vec::new();
                for &e in &eps {
                    if !compare_graph(p, e)?.exact {
                        bad.push(format!("{} {e}: graph differs from B^♮", label(p)));
                    }
                    match check_all_cells(&ThetaMap::new(p, e)?) {
                        Ok(c) => count += c,
                        Err(x) => bad.push(format!("{} {e}: {x}", label(p))),
                    }
                    count += 1;
                }
                Ok((count, bad))
            })
        }
        other => return Err(Error::Invalid(format!("unknown suite `{other}`"))),
    };
    Ok(SuiteReport { suite: name.to_string(), max_rank: n, ok: failures.is_empty(), checked, failures })
}

/// The cuspidal pair `(Λ_m, Λ'_{m+1})` with the ranks and sign of its correspondence.
pub fn cuspidal_pair(m: u32) -> Result<(u32, u32, Sign, Symbol, Symbol)> {
    let eps = if m % 2 == 1 { Sign::Plus } else { Sign::Minus };
    let l = cuspidal_symbol(m, CuspidalKind::Sp)?;
    let lp = cuspidal_symbol(m + 1, CuspidalKind::OI)?;
    Ok((m * (m + 1), (m + 1) * (m + 1), eps, l, lp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Symbol {
        x.parse().unwrap()
    }

    #[test]
    fn trivial_orthogonal_side() {
        for n in 0..6 {
            let t = correspondence(n, 0, Sign::Plus).unwrap();
            let want: BTreeSet<(Symbol, Symbol)> =
                [(Symbol::new(vec![n], vec![]).unwrap(), Symbol::empty())].into_iter().collect();
            assert_eq!(t.pairs, want, "n = {n}");
        }
    }

    #[test]
    fn trivial_of_o2() {
        let t = correspondence(0, 1, Sign::Plus).unwrap();
        assert!(t.contains(&s("0;-"), &s("1;0")));
        t.check().unwrap();
    }

    #[test]
    fn cuspidal_pairs_occur() {
        for m in 0..3 {
            let (n, np, eps, l, lp) = cuspidal_pair(m).unwrap();
            let t = correspondence(n, np, eps).unwrap();
            assert!(t.contains(&l, &lp), "m = {m}: {l} {lp}");
            t.check().unwrap();
        }
    }

    #[test]
    fn small_tables_are_consistent() {
        for n in 0..5 {
            for np in 0..5 - n {
                for e in Sign::both() {
                    correspondence(n, np, e).unwrap().check().unwrap();
                }
            }
        }
    }

    #[test]
    fn double_partners_only_at_defect_zero() {
        let t = correspondence(1, 1, Sign::Plus).unwrap();
        assert_eq!(t.double_partners(), vec![(s("1;-"), s("0;1"))]);
        for n in 0..5 {
            for np in 0..5 - n {
                let t = correspondence(n, np, Sign::Plus).unwrap();
                assert!(t.double_partners().iter().all(|(_, lp)| lp.defect() == 0));
                assert!(correspondence(n, np, Sign::Minus).unwrap().double_partners().is_empty());
            }
        }
    }

    #[test]
    fn json_table_layout() {
        let out = render_table(&s("8,5,1;6,3"), &s("8,6,2;6,3,0"), Sign::Plus, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rows"][0], "8,5,1;6,3");
        assert_eq!(v["columns"][0], "8,6,2;6,3,0");
        let marks: usize = v["matrix"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r.as_array().unwrap().iter().filter(|b| b.as_bool().unwrap()).count())
            .sum();
        assert_eq!(marks, 8);
    }

    #[test]
    fn empty_relation_renders_empty_table() {
        let out = render_table(&s("0;-"), &s("1;1"), Sign::Plus, Format::Csv).unwrap();
        assert_eq!(out, "\"\"\n");
    }

    #[test]
    fn unknown_suite() {
        let b = Bounds { max_rank: 1, eps: None };
        assert!(matches!(run_suite("nope", b), Err(Error::Invalid(_))));
        assert!(run_suite("counting", Bounds { max_rank: 3, eps: None }).unwrap().ok);
    }
}
