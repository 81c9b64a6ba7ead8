//! The relations `≼`, `D_{Z,Z'}`, `B^±_{Z,Z'}`, cores, `B^♮` and the move-back engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{Entry, Family, Mask, Pair, SpecialSymbol};
use crate::symbol::{interleave, Bipartition, Row, Symbol};

/// The sign `ε` of an orthogonal group `O^ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// `ε = +`.
    Plus,
    /// `ε = −`.
    Minus,
}

impl Sign {
    /// `+1` or `−1`.
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// The family `S^ε` of a defect-0 base.
    pub fn family(self) -> Family {
        match self {
            Sign::Plus => Family::Plus,
            Sign::Minus => Family::Minus,
        }
    }

    /// Both signs.
    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "plus" | "+1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            other => Err(Error::Invalid(format!("unknown sign `{other}`"))),
        }
    }
}

/// `λ ≼ μ`: the interlacing chain `μ_1 ≥ λ_1 ≥ μ_2 ≥ λ_2 ≥ ⋯` (zero padded).
pub fn prec(lam: &[u32], mu: &[u32]) -> bool {
    let n = lam.len().max(mu.len()) + 1;
    let at = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
    (0..n).all(|i| at(mu, i) >= at(lam, i) && at(lam, i) >= at(mu, i + 1))
}

/// Membership test on precomputed bipartitions and defects.
pub fn in_b_parts(bp: &Bipartition, def: i32, bpp: &Bipartition, defp: i32, eps: Sign) -> bool {
    match eps {
        Sign::Plus => defp == -def + 1 && prec(&bp.sub, &bpp.star) && prec(&bpp.sub, &bp.star),
        Sign::Minus => defp == -def - 1 && prec(&bp.star, &bpp.sub) && prec(&bpp.star, &bp.sub),
    }
}

/// `(Λ, Λ') ∈ B^ε` for arbitrary symbols.
pub fn in_b(l: &Symbol, lp: &Symbol, eps: Sign) -> bool {
    in_b_parts(&l.bipartition(), l.defect(), &lp.bipartition(), lp.defect(), eps)
}

/// `(Λ, Λ') ∈ B̄^+`: the `B^+` predicate on members of `S̄_Z × S̄_{Z'}`.
pub fn in_b_bar(l: &Symbol, lp: &Symbol) -> bool {
    in_b(l, lp, Sign::Plus)
}

/// `(Σ, Σ') ∈ D` for `Σ` of defect 1 and `Σ'` of defect 0.
pub fn in_d(s: &Symbol, sp: &Symbol) -> Result<bool> {
    if s.defect() != 1 || sp.defect() != 0 {
        return Err(Error::Defect(format!("D needs defects (1, 0), got ({}, {})", s.defect(), sp.defect())));
    }
    let (b, bp) = (s.bipartition(), sp.bipartition());
    Ok(prec(&b.sub, &bp.star) && prec(&bp.sub, &b.star))
}

/// The kinds of relation attached to a pair of special symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// `D_{Z,Z'} ⊂ S_{Z,1} × S_{Z',0}`.
    D,
    /// `B^+_{Z,Z'} ⊂ S_Z × S^+_{Z'}`.
    BPlus,
    /// `B^-_{Z,Z'} ⊂ S_Z × S^-_{Z'}`.
    BMinus,
    /// `B̄^+_{Z,Z'} ⊂ S̄_Z × S̄_{Z'}`.
    BBarPlus,
    /// `B^{+,♮}_{Z,Z'}`.
    BNaturalPlus,
    /// `B^{-,♮}_{Z,Z'}`.
    BNaturalMinus,
}

impl RelationKind {
    /// `B^ε`.
    pub fn b(eps: Sign) -> RelationKind {
        match eps {
            Sign::Plus => RelationKind::BPlus,
            Sign::Minus => RelationKind::BMinus,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::D => "D",
            RelationKind::BPlus => "B+",
            RelationKind::BMinus => "B-",
            RelationKind::BBarPlus => "Bbar+",
            RelationKind::BNaturalPlus => "Bnat+",
            RelationKind::BNaturalMinus => "Bnat-",
        })
    }
}

impl FromStr for RelationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<RelationKind> {
        match s.trim() {
            "D" => Ok(RelationKind::D),
            "B+" => Ok(RelationKind::BPlus),
            "B-" => Ok(RelationKind::BMinus),
            "Bbar+" | "B̄+" => Ok(RelationKind::BBarPlus),
            "Bnat+" | "B♮+" => Ok(RelationKind::BNaturalPlus),
            "Bnat-" | "B♮-" => Ok(RelationKind::BNaturalMinus),
            other => Err(Error::Invalid(format!("unknown relation kind `{other}`"))),
        }
    }
}

/// A set of symbol pairs with its base pair and kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    /// Base special symbol of defect 1.
    pub z: Symbol,
    /// Base special symbol of defect 0.
    pub zp: Symbol,
    /// Which relation this is.
    pub kind: RelationKind,
    /// The pairs.
    pub pairs: BTreeSet<(Symbol, Symbol)>,
}

impl Serialize for RelationSet {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> =
            self.pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect();
        let mut st = ser.serialize_struct("RelationSet", 4)?;
        st.serialize_field("Z", &self.z.to_string())?;
        st.serialize_field("Zp", &self.zp.to_string())?;
        st.serialize_field("kind", &self.kind.to_string())?;
        st.serialize_field("pairs", &pairs)?;
        st.end()
    }
}

impl RelationSet {
    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Whether there are no pairs.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether a pair belongs to the relation.
    pub fn contains(&self, l: &Symbol, lp: &Symbol) -> bool {
        self.pairs.contains(&(l.clone(), lp.clone()))
    }

    /// Whether the relation is the graph of a bijection between its projections.
    pub fn is_one_to_one(&self) -> bool {
        let left: BTreeSet<&Symbol> = self.pairs.iter().map(|p| &p.0).collect();
        let right: BTreeSet<&Symbol> = self.pairs.iter().map(|p| &p.1).collect();
        left.len() == self.pairs.len() && right.len() == self.pairs.len()
    }

    /// Row and column symbols in display order.
    ///
    /// Columns are ordered by the number of moved singles, then by subset;
    /// rows by their first partner column, then likewise.
    pub fn layout(&self) -> (Vec<Symbol>, Vec<Symbol>) {
        let zs = SpecialSymbol::new(&self.z).ok();
        let zps = SpecialSymbol::new(&self.zp).ok();
        let key = |base: &Option<SpecialSymbol>, s: &Symbol| -> (u32, Mask) {
            match base.as_ref().and_then(|b| b.mask_of(s)) {
                Some(m) => (m.count_ones(), m),
                None => (u32::MAX, Mask::MAX),
            }
        };
        let mut cols: Vec<Symbol> =
            self.pairs.iter().map(|p| p.1.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        cols.sort_by(|a, b| key(&zps, a).cmp(&key(&zps, b)).then(a.cmp(b)));
        let col_index: BTreeMap<&Symbol, usize> = cols.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut first: BTreeMap<Symbol, usize> = BTreeMap::new();
        for (l, lp) in &self.pairs {
            let c = col_index[lp];
            let e = first.entry(l.clone()).or_insert(c);
            *e = (*e).min(c);
        }
        let mut rows: Vec<Symbol> = first.keys().cloned().collect();
        rows.sort_by(|a, b| (first[a], key(&zs, a)).cmp(&(first[b], key(&zs, b))).then(a.cmp(b)));
        (rows, cols)
    }
}

/// The size regime of an aligned pair of special symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Sizes `(m+1, m)` and `(m, m)`.
    Equal,
    /// Sizes `(m+1, m)` and `(m+1, m+1)`.
    Plus1,
}

/// Core data of `D_{Z,Z'}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorePair {
    /// `Ψ_0 ⊂ Z_I`.
    pub psi0: Vec<Pair>,
    /// `Ψ'_0 ⊂ Z'_I`.
    pub psi0p: Vec<Pair>,
    /// Mask of the entries of `Ψ_0`.
    #[serde(skip)]
    pub mask: Mask,
    /// Mask of the entries of `Ψ'_0`.
    #[serde(skip)]
    pub maskp: Mask,
}

/// A pair `(Z, Z')` of special symbols of defects 1 and 0 in aligned representations.
#[derive(Debug, Clone)]
pub struct SpecialPair {
    /// The defect-1 symbol.
    pub z: SpecialSymbol,
    /// The defect-0 symbol.
    pub zp: SpecialSymbol,
    regime: Regime,
}

/// Per-side cache of members and bipartitions.
#[derive(Debug, Clone)]
pub struct SideData {
    /// Subset masks.
    pub masks: Vec<Mask>,
    /// The symbols `Λ_M`.
    pub syms: Vec<Symbol>,
    /// Their bipartitions.
    pub bps: Vec<Bipartition>,
    /// Their defects.
    pub defs: Vec<i32>,
}

impl SideData {
    fn new(base: &SpecialSymbol, fam: Family) -> SideData {
        let masks = base.family_masks(fam).expect("family matches base defect");
        let syms: Vec<Symbol> = masks.iter().map(|&m| base.lambda(m)).collect();
        let bps = syms.iter().map(|s| s.bipartition()).collect();
        let defs = syms.iter().map(|s| s.defect()).collect();
        SideData { masks, syms, bps, defs }
    }
}

fn consecutive(z: &SpecialSymbol, p: Pair) -> bool {
    let (lo, hi) = if p.top < p.bot { (p.top, p.bot) } else { (p.bot, p.top) };
    !z.top().iter().chain(z.bot()).any(|&x| x > lo && x < hi)
}

impl SpecialPair {
    /// Aligns two special symbols into the regime `m' ∈ {m, m+1}` with minimal shifting.
    pub fn new(z: &Symbol, zp: &Symbol) -> Result<SpecialPair> {
        let z = SpecialSymbol::new(z)?;
        let zp = SpecialSymbol::new(zp)?;
        if z.defect() != 1 || zp.defect() != 0 {
            return Err(Error::Defect(format!(
                "expected defects (1, 0), got ({}, {})",
                z.defect(),
                zp.defect()
            )));
        }
        let p = z.size_m();
        let k = zp.size_m();
        let (z, zp) =
            if k > p { (z.shifted((k - p - 1) as u32), zp) } else { (z, zp.shifted((p - k) as u32)) };
        SpecialPair::from_raw(z, zp)
    }

    /// Uses the given representations, which must already be aligned.
    pub fn from_raw(z: SpecialSymbol, zp: SpecialSymbol) -> Result<SpecialPair> {
        if z.defect() != 1 || zp.defect() != 0 {
            return Err(Error::Defect("expected defects (1, 0)".to_string()));
        }
        let m = z.size_m();
        let mp = zp.size_m();
        let regime = if mp == m {
            Regime::Equal
        } else if mp == m + 1 {
            Regime::Plus1
        } else {
            return Err(Error::Sizes(format!("m = {m}, m' = {mp}")));
        };
        Ok(SpecialPair { z, zp, regime })
    }

    /// The size regime.
    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Cached data for `S_{Z,1}` and `S_{Z',0}`.
    pub fn d_sides(&self) -> (SideData, SideData) {
        (SideData::new(&self.z, Family::Defect(1)), SideData::new(&self.zp, Family::Defect(0)))
    }

    /// Pairs of masks in `D_{Z,Z'}`.
    pub fn d_masks(&self) -> Vec<(Mask, Mask)> {
        let (s, sp) = self.d_sides();
        let mut out = Vec::new();
        for i in 0..s.masks.len() {
            for j in 0..sp.masks.len() {
                if prec(&s.bps[i].sub, &sp.bps[j].star) && prec(&sp.bps[j].sub, &s.bps[i].star) {
                    out.push((s.masks[i], sp.masks[j]));
                }
            }
        }
        out
    }

    /// Whether `D_{Z,Z'}` is empty, stopping at the first hit.
    pub fn d_is_empty(&self) -> bool {
        let (s, sp) = self.d_sides();
        !(0..s.masks.len()).any(|i| {
            (0..sp.masks.len())
                .any(|j| prec(&s.bps[i].sub, &sp.bps[j].star) && prec(&sp.bps[j].sub, &s.bps[i].star))
        })
    }

    /// Pairs of masks in `B^ε_{Z,Z'}`.
    pub fn b_masks(&self, eps: Sign) -> Vec<(Mask, Mask)> {
        self.masks_between(Family::Sp, eps.family(), eps)
    }

    /// Pairs of masks in `B̄^+_{Z,Z'}`.
    pub fn b_bar_masks(&self) -> Vec<(Mask, Mask)> {
        self.masks_between(Family::All, Family::All, Sign::Plus)
    }

    fn masks_between(&self, fl: Family, fr: Family, eps: Sign) -> Vec<(Mask, Mask)> {
        let s = SideData::new(&self.z, fl);
        let sp = SideData::new(&self.zp, fr);
        let mut out = Vec::new();
        for i in 0..s.masks.len() {
            for j in 0..sp.masks.len() {
                if in_b_parts(&s.bps[i], s.defs[i], &sp.bps[j], sp.defs[j], eps) {
                    out.push((s.masks[i], sp.masks[j]));
                }
            }
        }
        out
    }

    fn to_set(&self, kind: RelationKind, ms: &[(Mask, Mask)]) -> RelationSet {
        RelationSet {
            z: self.z.to_symbol(),
            zp: self.zp.to_symbol(),
            kind,
            pairs: ms.iter().map(|&(m, n)| (self.z.lambda(m), self.zp.lambda(n))).collect(),
        }
    }

    /// The relation of the given kind as a set of symbol pairs.
    pub fn relation(&self, kind: RelationKind) -> Result<RelationSet> {
        let ms = match kind {
            RelationKind::D => self.d_masks(),
            RelationKind::BPlus => self.b_masks(Sign::Plus),
            RelationKind::BMinus => self.b_masks(Sign::Minus),
            RelationKind::BBarPlus => self.b_bar_masks(),
            RelationKind::BNaturalPlus => self.b_natural_masks(Sign::Plus)?,
            RelationKind::BNaturalMinus => self.b_natural_masks(Sign::Minus)?,
        };
        Ok(self.to_set(kind, &ms))
    }

    /// Whether `(Z, Z') ∈ D_{Z,Z'}`.
    pub fn base_in_d(&self) -> bool {
        in_d(self.z.symbol(), self.zp.symbol()).unwrap_or(false)
    }

    /// The cores `Ψ_0 ⊂ Z_I` and `Ψ'_0 ⊂ Z'_I`, validated against the shape of `D_Z`, `D_{Z'}`.
    pub fn cores(&self) -> Result<CorePair> {
        let d = self.d_masks();
        if d.is_empty() {
            return Err(Error::EmptyRelation(self.z.to_string(), self.zp.to_string()));
        }
        let dz: BTreeSet<Mask> = d.iter().filter(|p| p.0 == 0).map(|p| p.1).collect();
        let dzp: BTreeSet<Mask> = d.iter().filter(|p| p.1 == 0).map(|p| p.0).collect();
        let (psi0, mask) = core_of(&self.z, &dzp)?;
        let (psi0p, maskp) = core_of(&self.zp, &dz)?;
        Ok(CorePair { psi0, psi0p, mask, maskp })
    }

    /// `B^{ε,♮} = B^ε ∩ (S_Z^{Ψ_0} × S^{ε,Ψ'_0}_{Z'})`.
    pub fn b_natural_masks(&self, eps: Sign) -> Result<Vec<(Mask, Mask)>> {
        let c = self.cores()?;
        Ok(self.b_masks(eps).into_iter().filter(|&(m, n)| m & c.mask == 0 && n & c.maskp == 0).collect())
    }

    /// Checks `B^ε = {(Λ_1+Λ_2, Λ'_1+Λ'_2)}` over `B^♮ × D_{Z'} × D_Z` as sets.
    pub fn factorization_holds(&self, eps: Sign) -> Result<bool> {
        let c = self.cores()?;
        let nat = self.b_natural_masks(eps)?;
        let left = subset_unions(&self.z, &c.psi0);
        let right = subset_unions(&self.zp, &c.psi0p);
        let mut built = BTreeSet::new();
        for &(m, n) in &nat {
            for &l in &left {
                for &r in &right {
                    built.insert((m ^ l, n ^ r));
                }
            }
        }
        let direct: BTreeSet<(Mask, Mask)> = self.b_masks(eps).into_iter().collect();
        Ok(built == direct && built.len() == nat.len() * left.len() * right.len())
    }
}

/// Masks of all unions of the given pairs.
pub fn subset_unions(z: &SpecialSymbol, pairs: &[Pair]) -> Vec<Mask> {
    let pm: Vec<Mask> = pairs.iter().map(|p| z.mask_of_pairs(&[*p]).unwrap()).collect();
    (0u64..(1 << pm.len()))
        .map(|s| (0..pm.len()).filter(|&i| s >> i & 1 == 1).fold(0, |acc, i| acc | pm[i]))
        .collect()
}

fn core_of(z: &SpecialSymbol, set: &BTreeSet<Mask>) -> Result<(Vec<Pair>, Mask)> {
    let top = z.top_mask();
    let mut pairs = Vec::new();
    let mut mask = 0;
    for &m in set {
        if (m & top).count_ones() == 1 && (m & !top).count_ones() == 1 {
            let es = z.entries_of(m);
            let (t, b) = if es[0].row == Row::Top { (es[0], es[1]) } else { (es[1], es[0]) };
            let p = Pair { top: t.value, bot: b.value };
            if !consecutive(z, p) {
                return Err(Error::Invariant(format!("core pair {p} of {z} is not consecutive")));
            }
            if mask & m != 0 {
                return Err(Error::Invariant(format!("core pairs of {z} overlap")));
            }
            mask |= m;
            pairs.push(p);
        }
    }
    pairs.sort_by(|a, b| b.cmp(a));
    let unions: BTreeSet<Mask> = subset_unions(z, &pairs).into_iter().collect();
    if &unions != set {
        return Err(Error::Invariant(format!("partner set of {z} is not generated by its core")));
    }
    Ok((pairs, mask))
}

/// Evaluates the interlacing chains on rows `Λ = (a;b)`, `Λ' = (c;d)`.
///
/// Sizes must be `(m+1, m)` and `(m', m')` with `m' ∈ {m, m+1}`.
pub fn interlace_oracle_rows(a: &[u32], b: &[u32], c: &[u32], d: &[u32]) -> Result<bool> {
    let m = b.len();
    if a.len() != m + 1 || c.len() != d.len() {
        return Err(Error::Sizes(format!(
            "oracle needs sizes (m+1,m),(m',m'); got ({},{}),({},{})",
            a.len(),
            b.len(),
            c.len(),
            d.len()
        )));
    }
    let mp = c.len();
    // Each chain is x_1 R_1 y_1 R_2 x_2 … and alternates weak/strict.
    let chain = |x: &[u32], y: &[u32], first_strict: bool| -> bool {
        let seq = interleave(x, y);
        seq.windows(2).enumerate().all(|(i, w)| {
            let strict = (i % 2 == 0) == first_strict;
            if strict {
                w[0] > w[1]
            } else {
                w[0] >= w[1]
            }
        })
    };
    if mp == m + 1 {
        Ok(chain(a, d, false) && chain(c, b, true))
    } else if mp == m {
        Ok(chain(a, d, true) && chain(c, b, false))
    } else {
        Err(Error::Sizes(format!("m = {m}, m' = {mp}")))
    }
}

/// The oracle for reduced symbols of defects 1 and 0, shifted minimally into `regime`.
pub fn interlace_oracle(l: &Symbol, lp: &Symbol, regime: Regime) -> Result<bool> {
    if l.defect() != 1 || lp.defect() != 0 {
        return Err(Error::Defect("oracle needs defects (1, 0)".to_string()));
    }
    let p = l.bot().len();
    let k = lp.bot().len();
    let want = match regime {
        Regime::Equal => 0,
        Regime::Plus1 => 1,
    };
    let (s, sp) = if k >= p + want { ((k - p - want) as u32, 0) } else { (0, (p + want - k) as u32) };
    let (a, b) = l.shifted(s);
    let (c, d) = lp.shifted(sp);
    interlace_oracle_rows(&a, &b, &c, &d)
}

/// The six move-back cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MoveCase {
    /// `a_k` down, `d_{k−1}` up.
    A,
    /// `a_k` down, `d_k` up.
    B,
    /// `a_k` down, `b_{k−1}` up.
    C,
    /// `b_k` up, `c_k` down.
    D,
    /// `b_k` up, `c_{k+1}` down.
    E,
    /// `b_k` up, `a_k` down.
    F,
}

impl fmt::Display for MoveCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            MoveCase::A => "a",
            MoveCase::B => "b",
            MoveCase::C => "c",
            MoveCase::D => "d",
            MoveCase::E => "e",
            MoveCase::F => "f",
        };
        f.write_str(c)
    }
}

fn at(v: &[u32], k: usize) -> Option<u32> {
    if k == 0 {
        None
    } else {
        v.get(k - 1).copied()
    }
}

fn ge(x: u32, y: u32, strict: bool) -> bool {
    if strict {
        x > y
    } else {
        x >= y
    }
}

fn toggle(base: &SpecialSymbol, v: Option<u32>, what: &str) -> Result<Mask> {
    let v = v.ok_or_else(|| Error::Invariant(format!("{what} does not exist")))?;
    for row in [Row::Top, Row::Bot] {
        if let Some(i) = base.index_of(Entry { row, value: v }) {
            return Ok(1 << i);
        }
    }
    Err(Error::Invariant(format!("{what} = {v} is not a single of {base}")))
}

impl SpecialPair {
    /// One move-back step on `(Λ_M, Λ_N) ∈ B̄^+` with `M ≠ ∅`.
    pub fn moveback_step(&self, m: Mask, n: Mask) -> Result<(Mask, Mask, MoveCase)> {
        if m == 0 {
            return Err(Error::Invalid("move-back needs M non-empty".to_string()));
        }
        let lm = self.z.lambda(m);
        let ln = self.zp.lambda(n);
        if !in_b_bar(&lm, &ln) {
            return Err(Error::Invalid(format!("({lm}, {ln}) is not in B̄+")));
        }
        let (a, b) = self.z.lambda_rows(m);
        let (c, d) = self.zp.lambda_rows(n);
        let plus1 = self.regime == Regime::Plus1;
        let x = self.z.entries_of(m).iter().map(|e| e.value).max().unwrap();
        let (m2, n2, case) = if let Some(pos) = a.iter().position(|&v| v == x) {
            let k = pos + 1;
            let ck1 = at(&c, k - 1);
            let case_a = match ck1 {
                None => true,
                Some(cv) => ge(x, cv, !plus1),
            };
            if case_a {
                (
                    m & !toggle(&self.z, Some(x), "a_k")?,
                    n ^ toggle(&self.zp, at(&d, k - 1), "d_{k-1}")?,
                    MoveCase::A,
                )
            } else {
                let bk1 = at(&b, k - 1);
                let dk = at(&d, k);
                let case_b = match (dk, bk1) {
                    (_, None) => true,
                    (Some(dv), Some(bv)) => ge(dv, bv, plus1),
                    (None, Some(_)) => false,
                };
                let case_c = match (bk1, dk) {
                    (_, None) => true,
                    (Some(bv), Some(dv)) => ge(bv, dv, !plus1),
                    (None, Some(_)) => false,
                };
                match (case_b, case_c) {
                    (true, false) => {
                        (m & !toggle(&self.z, Some(x), "a_k")?, n ^ toggle(&self.zp, dk, "d_k")?, MoveCase::B)
                    }
                    (false, true) => (
                        m ^ toggle(&self.z, Some(x), "a_k")? ^ toggle(&self.z, bk1, "b_{k-1}")?,
                        n,
                        MoveCase::C,
                    ),
                    _ => {
                        return Err(Error::Invariant(format!("cases (b)/(c) not exclusive at ({lm}, {ln})")))
                    }
                }
            }
        } else {
            let k = b.iter().position(|&v| v == x).unwrap() + 1;
            // d_0 sits above every entry; only entries past the end are absent.
            let dk1 = at(&d, k - 1);
            let case_d = match dk1 {
                None => k > 1,
                Some(dv) => ge(x, dv, !plus1),
            };
            if case_d {
                (m & !toggle(&self.z, Some(x), "b_k")?, n ^ toggle(&self.zp, at(&c, k), "c_k")?, MoveCase::D)
            } else {
                let ak = at(&a, k);
                let ck1 = at(&c, k + 1);
                let case_e = match (ck1, ak) {
                    (_, None) => true,
                    (Some(cv), Some(av)) => ge(cv, av, plus1),
                    (None, Some(_)) => false,
                };
                let case_f = match (ak, ck1) {
                    (_, None) => true,
                    (Some(av), Some(cv)) => ge(av, cv, !plus1),
                    (None, Some(_)) => false,
                };
                match (case_e, case_f) {
                    (true, false) => (
                        m & !toggle(&self.z, Some(x), "b_k")?,
                        n ^ toggle(&self.zp, ck1, "c_{k+1}")?,
                        MoveCase::E,
                    ),
                    (false, true) => {
                        (m ^ toggle(&self.z, Some(x), "b_k")? ^ toggle(&self.z, ak, "a_k")?, n, MoveCase::F)
                    }
                    _ => {
                        return Err(Error::Invariant(format!("cases (e)/(f) not exclusive at ({lm}, {ln})")))
                    }
                }
            }
        };
        if !in_b_bar(&self.z.lambda(m2), &self.zp.lambda(n2)) {
            return Err(Error::Invariant(format!("case ({case}) left B̄+ from ({lm}, {ln})")));
        }
        if m2 != 0 {
            let x2 = self.z.entries_of(m2).iter().map(|e| e.value).max().unwrap();
            if x2 >= x {
                return Err(Error::Invariant("max(M) did not decrease".to_string()));
            }
        }
        Ok((m2, n2, case))
    }

    /// Iterates move-back steps down to `M = ∅`; returns the final `N` and the cases used.
    pub fn moveback_normalize(&self, m: Mask, n: Mask) -> Result<(Mask, Vec<MoveCase>)> {
        let (mut m, mut n) = (m, n);
        let mut cases = Vec::new();
        while m != 0 {
            let (m2, n2, c) = self.moveback_step(m, n)?;
            m = m2;
            n = n2;
            cases.push(c);
        }
        Ok((n, cases))
    }

    /// Symbol-level wrapper of [`SpecialPair::moveback_step`].
    pub fn moveback_step_symbols(&self, lm: &Symbol, ln: &Symbol) -> Result<(Symbol, Symbol, MoveCase)> {
        let m = self.z.require_mask(lm)?;
        let n = self.zp.require_mask(ln)?;
        let (m2, n2, c) = self.moveback_step(m, n)?;
        Ok((self.z.lambda(m2), self.zp.lambda(n2), c))
    }
}

/// Renders a relation as a check-mark matrix in markdown.
pub fn render_markdown(rel: &RelationSet) -> String {
    let (rows, cols) = rel.layout();
    let mut out = String::new();
    out.push('|');
    out.push_str(" |");
    for c in &cols {
        out.push_str(&format!(" {c} |"));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &cols {
        out.push_str("---|");
    }
    out.push('\n');
    for r in &rows {
        out.push_str(&format!("| {r} |"));
        for c in &cols {
            out.push_str(if rel.contains(r, c) { " ✓ |" } else { " |" });
        }
        out.push('\n');
    }
    out
}

/// Renders a relation as a CSV check-mark matrix (`1` marks a pair).
pub fn render_csv(rel: &RelationSet) -> String {
    let (rows, cols) = rel.layout();
    let q = |s: &Symbol| format!("\"{s}\"");
    let mut out = String::from("\"\"");
    for c in &cols {
        out.push(',');
        out.push_str(&q(c));
    }
    out.push('\n');
    for r in &rows {
        out.push_str(&q(r));
        for c in &cols {
            out.push_str(if rel.contains(r, c) { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Symbol {
        x.parse().unwrap()
    }

    fn example() -> SpecialPair {
        SpecialPair::new(&s("8,5,1;6,3"), &s("8,6,2;6,3,0")).unwrap()
    }

    #[test]
    fn prec_examples() {
        assert!(prec(&[5, 3], &[6, 5, 2]));
        assert!(!prec(&[5, 3], &[4, 1]));
        assert!(prec(&[4, 2, 2], &[4, 2, 2]));
        assert!(prec(&[], &[]));
    }

    #[test]
    fn in_b_examples() {
        assert!(in_b(&s("8,5,1;6,3"), &s("8,6,2;6,3,0"), Sign::Plus));
        assert!(in_b(&s("8,6,5;3,1"), &s("6,2,0;8,6,3"), Sign::Plus));
        assert!(!in_b(&s("8,5,1;6,3"), &s("6,3,0;8,6,2"), Sign::Plus));
    }

    #[test]
    fn in_d_examples() {
        assert!(in_d(&s("8,5,1;6,3"), &s("8,6,2;6,3,0")).unwrap());
        assert!(in_d(&s("2,0;1"), &s("3,1;2,0")).unwrap());
        assert!(in_d(&s("2,0;1"), &s("2,0;1")).is_err());
        let p = SpecialPair::new(&s("2,0;1"), &Symbol::empty()).unwrap();
        assert!(p.d_masks().is_empty());
    }

    #[test]
    fn example_table() {
        let rel = example().relation(RelationKind::BPlus).unwrap();
        assert_eq!(rel.len(), 8);
        let (rows, cols) = rel.layout();
        let rs: Vec<String> = rows.iter().map(|x| x.to_string()).collect();
        let cs: Vec<String> = cols.iter().map(|x| x.to_string()).collect();
        assert_eq!(rs, ["8,5,1;6,3", "8,3,1;6,5", "8,6,5;3,1", "8,6,3;5,1"]);
        assert_eq!(cs, ["8,6,2;6,3,0", "8,6,3;6,2,0", "6,2,0;8,6,3", "6,3,0;8,6,2"]);
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                assert_eq!(rel.contains(r, c), (i < 2) == (j < 2));
            }
        }
    }

    #[test]
    fn cuspidal_d_is_graph() {
        for m in 0..=3u32 {
            let z = SpecialSymbol::cuspidal_sp(m);
            let zp = SpecialSymbol::cuspidal_o(m + 1);
            let p = SpecialPair::new(z.symbol(), zp.symbol()).unwrap();
            let d = p.relation(RelationKind::D).unwrap();
            let expect: BTreeSet<(Symbol, Symbol)> = z
                .family(Family::Defect(1))
                .unwrap()
                .into_iter()
                .map(|x| {
                    let mut top = vec![2 * m + 1];
                    top.extend_from_slice(x.bot());
                    let lp = Symbol::new(top, x.top().to_vec()).unwrap();
                    (x, lp)
                })
                .collect();
            assert_eq!(d.pairs, expect, "m={m}");
        }
    }

    #[test]
    fn example_cores_and_natural() {
        let p = example();
        let c = p.cores().unwrap();
        assert_eq!(c.psi0, vec![Pair { top: 5, bot: 3 }]);
        assert_eq!(c.psi0p, vec![Pair { top: 2, bot: 3 }]);
        assert_eq!(p.b_natural_masks(Sign::Plus).unwrap().len(), 2);
        assert!(p.factorization_holds(Sign::Plus).unwrap());
    }

    #[test]
    fn moveback_example() {
        let p = example();
        let (l1, n1, c1) = p.moveback_step_symbols(&s("8,6,5;3,1"), &s("6,3,0;8,6,2")).unwrap();
        assert_eq!((l1.clone(), n1.clone(), c1), (s("8,5;6,3,1"), s("8,6,3,0;6,2"), MoveCase::A));
        let (l2, n2, c2) = p.moveback_step_symbols(&l1, &n1).unwrap();
        assert_eq!((l2, n2, c2), (s("8,5,1;6,3"), s("8,6,3;6,2,0"), MoveCase::E));
        assert!(p.moveback_step(0, 0).is_err());
        let m = p.z.require_mask(&s("8,6,5;3,1")).unwrap();
        let n = p.zp.require_mask(&s("6,3,0;8,6,2")).unwrap();
        let (nf, cases) = p.moveback_normalize(m, n).unwrap();
        assert_eq!(p.zp.lambda(nf), s("8,6,3;6,2,0"));
        assert_eq!(cases, vec![MoveCase::A, MoveCase::E]);
        assert_eq!(p.moveback_normalize(0, 5).unwrap(), (5, vec![]));
    }

    #[test]
    fn oracle_on_example_cells() {
        for (l, lp, want) in [
            ("8,5,1;6,3", "8,6,2;6,3,0", true),
            ("8,6,5;3,1", "6,2,0;8,6,3", true),
            ("8,5,1;6,3", "6,3,0;8,6,2", false),
        ] {
            let (l, lp) = (s(l), s(lp));
            if l.defect() == 1 && lp.defect() == 0 {
                for r in [Regime::Equal, Regime::Plus1] {
                    assert_eq!(interlace_oracle(&l, &lp, r).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let p = SpecialPair::new(&s("0;-"), &Symbol::empty()).unwrap();
        let rel = p.relation(RelationKind::BPlus).unwrap();
        let j = serde_json::to_string(&rel).unwrap();
        assert_eq!(j, r#"{"Z":"0;-","Zp":"-;-","kind":"B+","pairs":[["0;-","-;-"]]}"#);
    }
}
