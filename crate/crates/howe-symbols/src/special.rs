//! Special symbols, their singles, the symbols `Λ_M` and the families `S_Z`, `S^±_Z`.
//!
//! A subset `M ⊆ Z_I` is encoded as a bitmask over the singles of `Z`: bit `i`
//! for `i < |Z_I^*|` is the `i`-th first-row single (decreasing order), the
//! remaining bits are the second-row singles in decreasing order.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbol::{check_row, interleave, rank_of_rows, shift_rows, Row, Symbol};

/// Bitmask encoding of a subset `M ⊆ Z_I`.
pub type Mask = u64;

/// A single entry with its row in the base special symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Entry {
    /// Row of the entry in `Z`.
    pub row: Row,
    /// Value of the entry.
    pub value: u32,
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row {
            Row::Top => write!(f, "({};-)", self.value),
            Row::Bot => write!(f, "(-;{})", self.value),
        }
    }
}

/// A pair `(s;t)` made of a first-row single `s` and a second-row single `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pair {
    /// First-row entry.
    pub top: u32,
    /// Second-row entry.
    pub bot: u32,
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.top, self.bot)
    }
}

/// Selector for the families attached to a special symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `S_Z`: defect `≡ 1 (mod 4)`, base of defect 1.
    Sp,
    /// `S^+_Z`: defect `≡ 0 (mod 4)`, base of defect 0.
    Plus,
    /// `S^-_Z`: defect `≡ 2 (mod 4)`, base of defect 0.
    Minus,
    /// `S̄_Z`: all `Λ_M`.
    All,
    /// `S_{Z,β}`: members of exact defect `β`.
    Defect(i32),
}

/// A special symbol kept in a chosen (possibly shifted) representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpecialSymbol {
    top: Vec<u32>,
    bot: Vec<u32>,
    singles_top: Vec<u32>,
    singles_bot: Vec<u32>,
    doubles: Vec<u32>,
    reduced: Symbol,
}

impl fmt::Display for SpecialSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reduced)
    }
}

fn popcount(m: Mask) -> u32 {
    m.count_ones()
}

impl SpecialSymbol {
    /// Builds a special symbol from raw rows, keeping that representation.
    pub fn from_rows(top: Vec<u32>, bot: Vec<u32>) -> Result<SpecialSymbol> {
        check_row(&top)?;
        check_row(&bot)?;
        let d = top.len() as i32 - bot.len() as i32;
        if d != 0 && d != 1 {
            return Err(Error::Defect(format!("special symbols have defect 0 or 1, got {d}")));
        }
        let seq = interleave(&top, &bot);
        let reduced = Symbol::from_sorted(top.clone(), bot.clone());
        if !seq.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::NotSpecial(reduced.to_string()));
        }
        let doubles: Vec<u32> = top.iter().copied().filter(|x| bot.contains(x)).collect();
        let singles_top = top.iter().copied().filter(|x| !doubles.contains(x)).collect();
        let singles_bot = bot.iter().copied().filter(|x| !doubles.contains(x)).collect();
        let out = SpecialSymbol { top, bot, singles_top, singles_bot, doubles, reduced };
        if out.num_singles() > 63 {
            return Err(Error::Invalid("too many singles".to_string()));
        }
        Ok(out)
    }

    /// Builds a special symbol in its reduced representation.
    pub fn new(s: &Symbol) -> Result<SpecialSymbol> {
        SpecialSymbol::from_rows(s.top().to_vec(), s.bot().to_vec())
    }

    /// Same symbol, shifted `s` more times.
    pub fn shifted(&self, s: u32) -> SpecialSymbol {
        let (t, b) = shift_rows(&self.top, &self.bot, s);
        SpecialSymbol::from_rows(t, b).expect("shift preserves specialness")
    }

    /// The reduced representative.
    pub fn to_symbol(&self) -> Symbol {
        self.reduced.clone()
    }

    /// The reduced representative, by reference.
    pub fn symbol(&self) -> &Symbol {
        &self.reduced
    }

    /// First row of the chosen representation.
    pub fn top(&self) -> &[u32] {
        &self.top
    }

    /// Second row of the chosen representation.
    pub fn bot(&self) -> &[u32] {
        &self.bot
    }

    /// Defect, 0 or 1.
    pub fn defect(&self) -> i32 {
        self.top.len() as i32 - self.bot.len() as i32
    }

    /// Rank.
    pub fn rank(&self) -> u32 {
        rank_of_rows(&self.top, &self.bot)
    }

    /// `m`, the length of the second row in the chosen representation.
    pub fn size_m(&self) -> usize {
        self.bot.len()
    }

    /// First-row singles, decreasing.
    pub fn singles_top(&self) -> &[u32] {
        &self.singles_top
    }

    /// Second-row singles, decreasing.
    pub fn singles_bot(&self) -> &[u32] {
        &self.singles_bot
    }

    /// Values occurring in both rows (chosen representation).
    pub fn doubles(&self) -> &[u32] {
        &self.doubles
    }

    /// Number of singles `|Z_I|`.
    pub fn num_singles(&self) -> usize {
        self.singles_top.len() + self.singles_bot.len()
    }

    /// Degree `δ`: the number of second-row singles.
    pub fn degree(&self) -> usize {
        self.singles_bot.len()
    }

    /// No doubles after reduction.
    pub fn is_regular(&self) -> bool {
        let r = SpecialSymbol::new(&self.reduced).expect("reduced form is special");
        r.doubles.is_empty()
    }

    /// Defect 0 and no singles.
    pub fn is_degenerate(&self) -> bool {
        self.defect() == 0 && self.num_singles() == 0
    }

    /// Mask of all singles.
    pub fn full_mask(&self) -> Mask {
        (1u64 << self.num_singles()) - 1
    }

    /// Mask of the first-row singles.
    pub fn top_mask(&self) -> Mask {
        (1u64 << self.singles_top.len()) - 1
    }

    /// `(|M^*|, |M_*|)`.
    pub fn counts(&self, m: Mask) -> (u32, u32) {
        (popcount(m & self.top_mask()), popcount(m & !self.top_mask()))
    }

    /// The single encoded by bit `i`.
    pub fn entry(&self, i: usize) -> Entry {
        let nt = self.singles_top.len();
        if i < nt {
            Entry { row: Row::Top, value: self.singles_top[i] }
        } else {
            Entry { row: Row::Bot, value: self.singles_bot[i - nt] }
        }
    }

    /// All singles in bit order.
    pub fn entries(&self) -> Vec<Entry> {
        (0..self.num_singles()).map(|i| self.entry(i)).collect()
    }

    /// Entries selected by a mask.
    pub fn entries_of(&self, m: Mask) -> Vec<Entry> {
        (0..self.num_singles()).filter(|&i| m >> i & 1 == 1).map(|i| self.entry(i)).collect()
    }

    /// Bit index of a single, if it is one.
    pub fn index_of(&self, e: Entry) -> Option<usize> {
        let nt = self.singles_top.len();
        match e.row {
            Row::Top => self.singles_top.iter().position(|&x| x == e.value),
            Row::Bot => self.singles_bot.iter().position(|&x| x == e.value).map(|j| j + nt),
        }
    }

    /// Mask of a list of entries; rejects non-singles.
    pub fn mask_of_entries(&self, es: &[Entry]) -> Result<Mask> {
        let mut m = 0;
        for &e in es {
            let i = self.index_of(e).ok_or_else(|| Error::NotSingle(e.to_string()))?;
            m |= 1 << i;
        }
        Ok(m)
    }

    /// Mask of a set of pairs (both entries of each pair).
    pub fn mask_of_pairs(&self, ps: &[Pair]) -> Result<Mask> {
        let es: Vec<Entry> = ps
            .iter()
            .flat_map(|p| [Entry { row: Row::Top, value: p.top }, Entry { row: Row::Bot, value: p.bot }])
            .collect();
        self.mask_of_entries(&es)
    }

    /// Raw rows of `Λ_M` in the chosen representation.
    pub fn lambda_rows(&self, m: Mask) -> (Vec<u32>, Vec<u32>) {
        let mut top: Vec<u32> = self.doubles.clone();
        let mut bot: Vec<u32> = self.doubles.clone();
        for (i, e) in self.entries().into_iter().enumerate() {
            let moved = m >> i & 1 == 1;
            let r = if moved { e.row.flip() } else { e.row };
            match r {
                Row::Top => top.push(e.value),
                Row::Bot => bot.push(e.value),
            }
        }
        top.sort_unstable_by(|a, b| b.cmp(a));
        bot.sort_unstable_by(|a, b| b.cmp(a));
        (top, bot)
    }

    /// The symbol `Λ_M = (Z ∖ M) ∪ M^t`.
    pub fn lambda(&self, m: Mask) -> Symbol {
        let (t, b) = self.lambda_rows(m);
        Symbol::from_sorted(t, b)
    }

    /// Checked version of [`SpecialSymbol::lambda`] for externally supplied entries.
    pub fn lambda_of(&self, es: &[Entry]) -> Result<Symbol> {
        Ok(self.lambda(self.mask_of_entries(es)?))
    }

    /// Defect of `Λ_M`.
    pub fn lambda_defect(&self, m: Mask) -> i32 {
        let (a, b) = self.counts(m);
        self.defect() + 2 * (b as i32 - a as i32)
    }

    /// Recovers `M` from a symbol in `S̄_Z`.
    pub fn mask_of(&self, s: &Symbol) -> Option<Mask> {
        let total = self.top.len() + self.bot.len();
        let have = s.top().len() + s.bot().len();
        if have > total || !(total - have).is_multiple_of(2) {
            return None;
        }
        let (t, b) = s.shifted(((total - have) / 2) as u32);
        let mut m: Mask = 0;
        for (i, e) in self.entries().into_iter().enumerate() {
            let (same, other) = match e.row {
                Row::Top => (&t, &b),
                Row::Bot => (&b, &t),
            };
            if other.contains(&e.value) && !same.contains(&e.value) {
                m |= 1 << i;
            } else if !same.contains(&e.value) {
                return None;
            }
        }
        if self.lambda_rows(m) == (t, b) {
            Some(m)
        } else {
            None
        }
    }

    /// `M^t = Z_I ∖ M`, so that `Λ_{M^t} = (Λ_M)^t` up to doubles.
    pub fn complement(&self, m: Mask) -> Mask {
        m ^ self.full_mask()
    }

    /// Whether mask `m` selects a member of the given family.
    pub fn in_family(&self, m: Mask, fam: Family) -> Result<bool> {
        let (a, b) = self.counts(m);
        let diff = b as i32 - a as i32;
        match fam {
            Family::Sp => {
                if self.defect() != 1 {
                    return Err(Error::Defect("S_Z needs a base of defect 1".to_string()));
                }
                Ok(diff.rem_euclid(2) == 0)
            }
            Family::Plus | Family::Minus => {
                if self.defect() != 0 {
                    return Err(Error::Defect("S^± needs a base of defect 0".to_string()));
                }
                let even = diff.rem_euclid(2) == 0;
                Ok(even == (fam == Family::Plus))
            }
            Family::All => Ok(true),
            Family::Defect(beta) => Ok(self.lambda_defect(m) == beta),
        }
    }

    /// Masks of the members of a family, in increasing mask order.
    pub fn family_masks(&self, fam: Family) -> Result<Vec<Mask>> {
        self.in_family(0, fam)?;
        Ok((0..=self.full_mask()).filter(|&m| self.in_family(m, fam).unwrap()).collect())
    }

    /// Members of a family.
    pub fn family(&self, fam: Family) -> Result<Vec<Symbol>> {
        Ok(self.family_masks(fam)?.into_iter().map(|m| self.lambda(m)).collect())
    }

    /// `Λ_{M_1} + Λ_{M_2} = Λ_{M_1 Δ M_2}`.
    pub fn add(&self, x: &Symbol, y: &Symbol) -> Result<Symbol> {
        let mx = self.require_mask(x)?;
        let my = self.require_mask(y)?;
        Ok(self.lambda(mx ^ my))
    }

    /// Mask of a member of `S̄_Z`, or an error naming the base.
    pub fn require_mask(&self, s: &Symbol) -> Result<Mask> {
        self.mask_of(s).ok_or_else(|| Error::NotInFamily { symbol: s.to_string(), base: self.to_string() })
    }

    /// The `Z_(m) = (2m, 2m−2, …, 0; 2m−1, …, 1)`.
    pub fn cuspidal_sp(m: u32) -> SpecialSymbol {
        let top = (0..=m).rev().map(|i| 2 * i).collect();
        let bot = (1..=m).rev().map(|i| 2 * i - 1).collect();
        SpecialSymbol::from_rows(top, bot).unwrap()
    }

    /// The `Z'_(m) = (2m−1, 2m−3, …, 1; 2m−2, …, 0)`, with `Z'_(0) = (-;-)`.
    pub fn cuspidal_o(m: u32) -> SpecialSymbol {
        let top = (1..=m).rev().map(|i| 2 * i - 1).collect();
        let bot = (1..=m).rev().map(|i| 2 * i - 2).collect();
        SpecialSymbol::from_rows(top, bot).unwrap()
    }
}

/// The pairing `⟨Λ_M, Λ_N⟩ = |M ∩ N| mod 2`.
pub fn pairing(m: Mask, n: Mask) -> u32 {
    (m & n).count_ones() % 2
}

/// All reduced special symbols of rank `n` and defect `d ∈ {0, 1}`.
///
/// Interleaved sequences `x_1 ≥ x_2 ≥ ⋯ ≥ x_N` with `x_i > x_{i+2}` are generated
/// from the tail, with the entry sum fixed by the rank.
pub fn enumerate_special(n: u32, d: i32) -> Result<Vec<Symbol>> {
    if d != 0 && d != 1 {
        return Err(Error::Defect(format!("special symbols have defect 0 or 1, got {d}")));
    }
    fn go(pos: usize, seq: &mut Vec<u32>, rest: u64, out: &mut Vec<Vec<u32>>) {
        // seq holds x_N, x_{N-1}, …, filled from the end; pos = how many remain.
        if pos == 0 {
            if rest == 0 {
                out.push(seq.clone());
            }
            return;
        }
        let len = seq.len();
        let lo = match len {
            0 => 0,
            1 => seq[0],
            _ => seq[len - 1].max(seq[len - 2] + 1),
        };
        let mut v = lo;
        loop {
            // remaining positions all at least v, each second one strictly growing
            let min_rest: u64 = (0..pos as u64).map(|j| v as u64 + j / 2).sum();
            if min_rest > rest {
                break;
            }
            if !(len == 1 && seq[0] == 0 && v == 0) {
                seq.push(v);
                go(pos - 1, seq, rest - v as u64, out);
                seq.pop();
            }
            v += 1;
        }
    }
    let mut out = Vec::new();
    let mut total = d as usize;
    while total <= 2 * n as usize + 2 {
        let target = n as u64 + ((total as u64).saturating_sub(1).pow(2)) / 4;
        let mut seqs = Vec::new();
        go(total, &mut Vec::new(), target, &mut seqs);
        for mut s in seqs {
            s.reverse();
            let top: Vec<u32> = s.iter().step_by(2).copied().collect();
            let bot: Vec<u32> = s.iter().skip(1).step_by(2).copied().collect();
            out.push(Symbol::new(top, bot)?);
        }
        total += 2;
    }
    out.sort();
    Ok(out)
}
