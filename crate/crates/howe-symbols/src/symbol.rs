//! Symbols, bipartitions and elementary symbol arithmetic.
//!
//! A symbol is a pair of strictly decreasing rows of non-negative integers.
//! Symbols are always stored in reduced form, i.e. `0` does not occur in both
//! rows; shifting (adding one to every entry and appending `0` to both rows)
//! does not change the class represented.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which row of a symbol an entry lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Row {
    /// The first row `A`.
    Top,
    /// The second row `B`.
    Bot,
}

impl Row {
    /// The other row.
    pub fn flip(self) -> Row {
        match self {
            Row::Top => Row::Bot,
            Row::Bot => Row::Top,
        }
    }
}

/// A reduced symbol `(A;B)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SymbolRows", into = "SymbolRows")]
pub struct Symbol {
    top: Vec<u32>,
    bot: Vec<u32>,
}

/// Plain row data used for serialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolRows {
    /// First row.
    pub top: Vec<u32>,
    /// Second row.
    pub bot: Vec<u32>,
}

impl TryFrom<SymbolRows> for Symbol {
    type Error = Error;
    fn try_from(r: SymbolRows) -> Result<Symbol> {
        Symbol::new(r.top, r.bot)
    }
}

impl From<Symbol> for SymbolRows {
    fn from(s: Symbol) -> SymbolRows {
        SymbolRows { top: s.top, bot: s.bot }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.top, &self.bot).cmp(&(&other.top, &other.bot))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Checks that a row is strictly decreasing.
pub fn check_row(row: &[u32]) -> Result<()> {
    if row.windows(2).all(|w| w[0] > w[1]) {
        Ok(())
    } else {
        Err(Error::NotDecreasing { row: row.to_vec() })
    }
}

/// Removes common zeros repeatedly, decrementing the remaining entries.
pub fn reduce_rows(top: &[u32], bot: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let common = top
        .iter()
        .rev()
        .zip(bot.iter().rev())
        .enumerate()
        .take_while(|&(i, (&a, &b))| a == i as u32 && b == i as u32)
        .count();
    let s = common as u32;
    let t = top[..top.len() - common].iter().map(|&x| x - s).collect();
    let b = bot[..bot.len() - common].iter().map(|&x| x - s).collect();
    (t, b)
}

/// Applies the shift `s` times: every entry grows by `s` and `s-1,…,0` is appended to both rows.
pub fn shift_rows(top: &[u32], bot: &[u32], s: u32) -> (Vec<u32>, Vec<u32>) {
    let ext = |row: &[u32]| -> Vec<u32> { row.iter().map(|&x| x + s).chain((0..s).rev()).collect() };
    (ext(top), ext(bot))
}

/// Rank of a pair of rows, valid for any (not necessarily reduced) representation.
pub fn rank_of_rows(top: &[u32], bot: &[u32]) -> u32 {
    let sum: i64 = top.iter().chain(bot).map(|&x| x as i64).sum();
    let n = (top.len() + bot.len()) as i64;
    let r = sum - ((n - 1) * (n - 1)) / 4;
    debug_assert!(r >= 0);
    r as u32
}

fn fmt_row(row: &[u32]) -> String {
    if row.is_empty() {
        "-".to_string()
    } else {
        row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn parse_row(input: &str, part: &str) -> Result<Vec<u32>> {
    let part = part.trim();
    if part == "-" || part.is_empty() || part == "∅" {
        return Ok(Vec::new());
    }
    part.split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse { input: input.to_string(), reason: e.to_string() })
        })
        .collect()
}

impl Symbol {
    /// Builds a symbol from two rows, validating and reducing.
    pub fn new(top: Vec<u32>, bot: Vec<u32>) -> Result<Symbol> {
        check_row(&top)?;
        check_row(&bot)?;
        let (top, bot) = reduce_rows(&top, &bot);
        Ok(Symbol { top, bot })
    }

    /// Builds a symbol from rows known to be strictly decreasing.
    pub(crate) fn from_sorted(top: Vec<u32>, bot: Vec<u32>) -> Symbol {
        debug_assert!(check_row(&top).is_ok() && check_row(&bot).is_ok());
        let (top, bot) = reduce_rows(&top, &bot);
        Symbol { top, bot }
    }

    /// Builds a symbol from unsorted rows of distinct entries.
    pub fn from_unsorted(mut top: Vec<u32>, mut bot: Vec<u32>) -> Result<Symbol> {
        top.sort_unstable_by(|a, b| b.cmp(a));
        bot.sort_unstable_by(|a, b| b.cmp(a));
        Symbol::new(top, bot)
    }

    /// The empty symbol `(-;-)`.
    pub fn empty() -> Symbol {
        Symbol { top: Vec::new(), bot: Vec::new() }
    }

    /// First row.
    pub fn top(&self) -> &[u32] {
        &self.top
    }

    /// Second row.
    pub fn bot(&self) -> &[u32] {
        &self.bot
    }

    /// The given row.
    pub fn row(&self, r: Row) -> &[u32] {
        match r {
            Row::Top => &self.top,
            Row::Bot => &self.bot,
        }
    }

    /// Rank `Σ entries − ⌊(|A|+|B|−1)²/4⌋`.
    pub fn rank(&self) -> u32 {
        rank_of_rows(&self.top, &self.bot)
    }

    /// Defect `|A| − |B|`.
    pub fn defect(&self) -> i32 {
        self.top.len() as i32 - self.bot.len() as i32
    }

    /// Swaps the two rows.
    pub fn transpose(&self) -> Symbol {
        Symbol { top: self.bot.clone(), bot: self.top.clone() }
    }

    /// Rows of the `s`-fold shift of this symbol.
    pub fn shifted(&self, s: u32) -> (Vec<u32>, Vec<u32>) {
        shift_rows(&self.top, &self.bot, s)
    }

    /// The bipartition `Υ(Λ)`.
    pub fn bipartition(&self) -> Bipartition {
        let strip = |row: &[u32]| -> Vec<u32> {
            let m = row.len() as u32;
            let mut v: Vec<u32> = row.iter().enumerate().map(|(i, &x)| x - (m - 1 - i as u32)).collect();
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        Bipartition { star: strip(&self.top), sub: strip(&self.bot) }
    }

    /// Whether the interleaved rows satisfy `a_1 ≥ b_1 ≥ a_2 ≥ b_2 ≥ ⋯` with defect 0 or 1.
    pub fn is_special(&self) -> bool {
        let d = self.defect();
        if d != 0 && d != 1 {
            return false;
        }
        let seq = interleave(&self.top, &self.bot);
        seq.windows(2).all(|w| w[0] >= w[1])
    }

    /// The symbol with given bipartition and defect.
    pub fn from_bipartition(bp: &Bipartition, defect: i32) -> Symbol {
        let ls = bp.star.len() as i64;
        let lb = bp.sub.len() as i64;
        let d = defect as i64;
        let m2 = lb.max(ls - d).max(-d).max(0);
        let m1 = m2 + d;
        let build = |parts: &[u32], m: i64| -> Vec<u32> {
            (0..m).map(|i| parts.get(i as usize).copied().unwrap_or(0) + (m - 1 - i) as u32).collect()
        };
        Symbol::from_sorted(build(&bp.star, m1), build(&bp.sub, m2))
    }

    /// All symbols of rank `n` and defect `d`.
    pub fn enumerate(n: u32, d: i32) -> Vec<Symbol> {
        let shift = (d as i64 * d as i64) / 4;
        if shift > n as i64 {
            return Vec::new();
        }
        let k = n - shift as u32;
        let mut out: Vec<Symbol> = bipartitions(k).iter().map(|bp| Symbol::from_bipartition(bp, d)).collect();
        out.sort();
        out
    }

    /// All defects `d` with `⌊d²/4⌋ ≤ n`.
    pub fn defects_up_to(n: u32) -> Vec<i32> {
        let mut out = Vec::new();
        let mut d: i32 = 0;
        while (d as i64 * d as i64) / 4 <= n as i64 {
            out.push(d);
            if d != 0 {
                out.push(-d);
            }
            d += 1;
        }
        out.sort();
        out
    }
}

/// Merges two rows into `a_1, b_1, a_2, b_2, …`.
pub fn interleave(top: &[u32], bot: &[u32]) -> Vec<u32> {
    let mut seq = Vec::with_capacity(top.len() + bot.len());
    for i in 0..top.len().max(bot.len()) {
        if let Some(&a) = top.get(i) {
            seq.push(a);
        }
        if let Some(&b) = bot.get(i) {
            seq.push(b);
        }
    }
    seq
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", fmt_row(&self.top), fmt_row(&self.bot))
    }
}

impl FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Symbol> {
        let s = s.trim();
        let inner = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
        let mut parts = inner.split(';');
        let (t, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(t), Some(b), None) => (t, b),
            _ => {
                return Err(Error::Parse {
                    input: s.to_string(),
                    reason: "expected exactly one `;`".to_string(),
                })
            }
        };
        let top = parse_row(s, t)?;
        let bot = parse_row(s, b)?;
        Symbol::new(top, bot)
    }
}

/// A pair of partitions `(Υ^*, Υ_*)`, trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    /// The first partition `Υ^*`.
    pub star: Vec<u32>,
    /// The second partition `Υ_*`.
    pub sub: Vec<u32>,
}

impl Bipartition {
    /// Total size `|Υ^*| + |Υ_*|`.
    pub fn size(&self) -> u32 {
        self.star.iter().sum::<u32>() + self.sub.iter().sum::<u32>()
    }
}

/// All partitions of `n`, parts in decreasing order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All bipartitions of total size `n`.
pub fn bipartitions(n: u32) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for i in 0..=n {
        let left = partitions(i);
        let right = partitions(n - i);
        for l in &left {
            for r in &right {
                out.push(Bipartition { star: l.clone(), sub: r.clone() });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Symbol {
        x.parse().unwrap()
    }

    #[test]
    fn rank_values() {
        assert_eq!(s("2,0;1").rank(), 2);
        assert_eq!(s("0;-").rank(), 0);
        assert_eq!(s("-;-").rank(), 0);
        assert_eq!(s("8,5,1;6,3").rank(), 19);
    }

    #[test]
    fn defect_values() {
        assert_eq!(s("8,5,1;6,3").defect(), 1);
        assert_eq!(s("8,6,2;6,3,0").defect(), 0);
        assert_eq!(s("4,3,2,1,0;-").defect(), 5);
    }

    #[test]
    fn transpose_and_reduce() {
        assert_eq!(s("8,5,1;6,3").transpose(), s("6,3;8,5,1"));
        assert_eq!(Symbol::empty().transpose(), Symbol::empty());
        assert_eq!(s("9,6,2,0;7,4,0"), s("8,5,1;6,3"));
        assert_eq!(s("9,6,2,0;7,4,1,0"), s("8,5,1;6,3,0"));
        assert_eq!(s("8,5,1;6,3").shifted(1), (vec![9, 6, 2, 0], vec![7, 4, 0]));
    }

    #[test]
    fn bipartition_values() {
        let b = s("8,5,1;6,3").bipartition();
        assert_eq!(b.star, vec![6, 4, 1]);
        assert_eq!(b.sub, vec![5, 3]);
        let b = s("8,6,2;6,3,0").bipartition();
        assert_eq!(b.star, vec![6, 5, 2]);
        assert_eq!(b.sub, vec![4, 2]);
        let b = s("7;-").bipartition();
        assert_eq!(b.star, vec![7]);
        assert!(b.sub.is_empty());
    }

    #[test]
    fn parse_errors() {
        assert!("3,5;1".parse::<Symbol>().is_err());
        assert!("3;1;0".parse::<Symbol>().is_err());
        assert!("a;1".parse::<Symbol>().is_err());
    }

    #[test]
    fn text_round_trip() {
        for x in ["8,5,1;6,3", "-;-", "-;2,1,0", "4,3,2,1,0;-"] {
            assert_eq!(s(x).to_string(), x);
        }
    }

    #[test]
    fn json_round_trip() {
        let x = s("8,5,1;6,3");
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"top":[8,5,1],"bot":[6,3]}"#);
        let y: Symbol = serde_json::from_str(&j).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<Symbol>(r#"{"top":[1,2],"bot":[]}"#).is_err());
    }

    #[test]
    fn bipartition_bijection_counts() {
        for n in 0..=8u32 {
            for d in [-3, -1, 0, 1, 2, 3] {
                let syms = Symbol::enumerate(n, d);
                let shift = (d * d / 4) as u32;
                let expect = if shift <= n { bipartitions(n - shift).len() } else { 0 };
                assert_eq!(syms.len(), expect);
                for x in &syms {
                    assert_eq!(x.rank(), n);
                    assert_eq!(x.defect(), d);
                    let back = Symbol::from_bipartition(&x.bipartition(), d);
                    assert_eq!(&back, x);
                }
                let mut dedup = syms.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), syms.len());
            }
        }
    }

    #[test]
    fn bipartition_size_matches_rank() {
        for n in 0..=6u32 {
            for d in Symbol::defects_up_to(n) {
                for x in Symbol::enumerate(n, d) {
                    assert_eq!(x.bipartition().size() as i64, n as i64 - (d as i64 * d as i64) / 4);
                }
            }
        }
    }
}
