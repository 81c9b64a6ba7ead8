//! Derivatives of a special pair: repeated removal of the first critical pair
//! of entries until both symbols are regular and `D` is one-to-one.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::relations::{in_b_bar, CorePair, Regime, Sign, SpecialPair};
use crate::special::{Mask, Pair, SpecialSymbol};
use crate::symbol::{Row, Symbol};

/// The three constructions of a derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DerivCase {
    /// Both pairs are removed.
    I,
    /// Only the pair of `Z` is removed.
    II,
    /// Only the pair of `Z'` is removed.
    III,
}

impl fmt::Display for DerivCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DerivCase::I => "I",
            DerivCase::II => "II",
            DerivCase::III => "III",
        };
        f.write_str(s)
    }
}

/// Classification of a candidate pair `(x;y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairKind {
    /// `x = y`.
    Double,
    /// A pair in the core of `D_{Z,Z'}`.
    Core,
    /// Neither, or one index is out of range.
    Neither,
}

impl PairKind {
    fn critical(self) -> bool {
        self != PairKind::Neither
    }
}

/// A candidate pair at 1-based raw positions `top`, `bot`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Slot {
    /// Position in the first row.
    pub top: usize,
    /// Position in the second row.
    pub bot: usize,
    /// Entry values, if both positions exist.
    pub pair: Option<Pair>,
    /// Classification.
    pub kind: PairKind,
}

/// The first critical set of pairs in the scan order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairScan {
    /// Index of the set in the scan order, starting at 0.
    pub position: usize,
    /// `(a_k; b_l)`.
    pub z: Slot,
    /// `(c_{l'}; d_{k'})`.
    pub zp: Slot,
    /// Which construction applies.
    pub case: DerivCase,
}

fn classify(s: &SpecialSymbol, top: i64, bot: i64, core: &[Pair]) -> Slot {
    let ok = |i: i64, len: usize| i >= 1 && (i as usize) <= len;
    if !ok(top, s.top().len()) || !ok(bot, s.bot().len()) {
        let t = top.max(0) as usize;
        let b = bot.max(0) as usize;
        return Slot { top: t, bot: b, pair: None, kind: PairKind::Neither };
    }
    let (t, b) = (top as usize, bot as usize);
    let p = Pair { top: s.top()[t - 1], bot: s.bot()[b - 1] };
    let kind = if p.top == p.bot {
        PairKind::Double
    } else if core.contains(&p) {
        PairKind::Core
    } else {
        PairKind::Neither
    };
    Slot { top: t, bot: b, pair: Some(p), kind }
}

/// The two candidate pairs of the `p`-th set in the scan order.
pub fn slots_at(pair: &SpecialPair, cores: &CorePair, p: usize) -> (Slot, Slot) {
    let m = pair.z.size_m() as i64;
    let p = p as i64;
    let k = m + 1 - (p + 1) / 2;
    let l = m - p / 2;
    let (kp, lp) = match pair.regime() {
        Regime::Equal => (k - 1, l),
        Regime::Plus1 => (k, l + 1),
    };
    (classify(&pair.z, k, l, &cores.psi0), classify(&pair.zp, lp, kp, &cores.psi0p))
}

fn scan_len(pair: &SpecialPair) -> usize {
    2 * pair.z.size_m() + 2
}

/// Finds the first set containing a pair of doubles or a core pair.
pub fn scan_first(pair: &SpecialPair) -> Result<PairScan> {
    let cores = pair.cores()?;
    scan_with(pair, &cores)
}

fn scan_with(pair: &SpecialPair, cores: &CorePair) -> Result<PairScan> {
    for p in 0..scan_len(pair) {
        let (z, zp) = slots_at(pair, cores, p);
        let case = match (z.kind.critical(), zp.kind.critical()) {
            (true, true) => DerivCase::I,
            (true, false) => DerivCase::II,
            (false, true) => DerivCase::III,
            (false, false) => continue,
        };
        return Ok(PairScan { position: p, z, zp, case });
    }
    Err(Error::Terminal)
}

/// One derivative step.
#[derive(Debug, Clone)]
pub struct DerivativeStep {
    /// The critical set that was used.
    pub scan: PairScan,
    /// `Z^{(1)}` in its constructed representation.
    pub z1: SpecialSymbol,
    /// `Z'^{(1)}` in its constructed representation.
    pub zp1: SpecialSymbol,
    /// Bit map of `f` on singles; `None` marks removed entries.
    pub fmap: Vec<Option<usize>>,
    /// Bit map of `f'` on singles.
    pub fpmap: Vec<Option<usize>>,
    /// Exponent `e` with `C² = 2^e`.
    pub c_exp: u32,
}

impl Serialize for DerivativeStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let show = |p: Option<Pair>| p.map(|p| p.to_string());
        let mut st = s.serialize_struct("DerivativeStep", 6)?;
        st.serialize_field("case", &self.scan.case.to_string())?;
        st.serialize_field("Z1", &self.z1.to_string())?;
        st.serialize_field("Zp1", &self.zp1.to_string())?;
        st.serialize_field("Cexp", &self.c_exp)?;
        st.serialize_field("pairZ", &show(self.scan.z.pair))?;
        st.serialize_field("pairZp", &show(self.scan.zp.pair))?;
        st.end()
    }
}

fn dec(x: u32) -> Result<u32> {
    x.checked_sub(1).ok_or_else(|| Error::Invariant("entry below zero".to_string()))
}

fn lowered(row: &[u32], upto: usize) -> Result<Vec<u32>> {
    row[..upto].iter().map(|&x| dec(x)).collect()
}

fn tail(row: &[u32], from: usize) -> Vec<u32> {
    row.get(from..).map(<[u32]>::to_vec).unwrap_or_default()
}

fn cat(a: Vec<u32>, b: Vec<u32>) -> Vec<u32> {
    a.into_iter().chain(b).collect()
}

fn build(t: Vec<u32>, b: Vec<u32>, what: &str) -> Result<SpecialSymbol> {
    SpecialSymbol::from_rows(t, b).map_err(|e| Error::Invariant(format!("{what} is not special: {e}")))
}

fn position(s: &SpecialSymbol, row: Row, v: u32) -> usize {
    let r = match row {
        Row::Top => s.top(),
        Row::Bot => s.bot(),
    };
    r.iter().position(|&x| x == v).expect("single lies in its row")
}

/// Positional map of singles, deleting the removed positions (0-based).
fn side_map(
    src: &SpecialSymbol,
    dst: &SpecialSymbol,
    removed: Option<(usize, usize)>,
) -> Result<Vec<Option<usize>>> {
    let mut out = Vec::with_capacity(src.num_singles());
    let mut seen = BTreeSet::new();
    for e in src.entries() {
        let pos = position(src, e.row, e.value);
        let cut = removed.map(|(t, b)| if e.row == Row::Top { t } else { b });
        let new = match cut {
            Some(c) if c == pos => {
                out.push(None);
                continue;
            }
            Some(c) if pos > c => pos - 1,
            _ => pos,
        };
        let row = match e.row {
            Row::Top => dst.top(),
            Row::Bot => dst.bot(),
        };
        let v = *row.get(new).ok_or_else(|| Error::Invariant(format!("no image for {e} in {dst}")))?;
        let img = dst
            .index_of(crate::special::Entry { row: e.row, value: v })
            .ok_or_else(|| Error::Invariant(format!("{e} of {src} maps to a non-single of {dst}")))?;
        if !seen.insert(img) {
            return Err(Error::Invariant("map on singles is not injective".to_string()));
        }
        out.push(Some(img));
    }
    if seen.len() != dst.num_singles() {
        return Err(Error::Invariant(format!("map on singles of {src} is not onto {dst}")));
    }
    Ok(out)
}

fn removed_mask(map: &[Option<usize>]) -> Mask {
    map.iter().enumerate().filter(|(_, x)| x.is_none()).fold(0, |acc, (i, _)| acc | 1 << i)
}

fn apply(map: &[Option<usize>], m: Mask) -> Option<Mask> {
    let mut out = 0;
    for (i, img) in map.iter().enumerate() {
        if m >> i & 1 == 1 {
            out |= 1 << (*img)?;
        }
    }
    Some(out)
}

/// Computes the derivative of an aligned pair.
pub fn derive_once(pair: &SpecialPair) -> Result<DerivativeStep> {
    let cores = pair.cores()?;
    let scan = scan_with(pair, &cores)?;
    let (a, b) = (pair.z.top(), pair.z.bot());
    let (c, d) = (pair.zp.top(), pair.zp.bot());
    let (k, l) = (scan.z.top, scan.z.bot);
    let (lp, kp) = (scan.zp.top, scan.zp.bot);
    let mp = c.len();
    let m = b.len();
    if scan.case == DerivCase::II && mp != m {
        return Err(Error::Invariant("Case II with m' = m + 1".to_string()));
    }
    if scan.case == DerivCase::III && mp != m + 1 {
        return Err(Error::Invariant("Case III with m' = m".to_string()));
    }
    let (z1, zp1, zrem, zprem) = match scan.case {
        DerivCase::I => {
            let z1 = build(cat(lowered(a, k - 1)?, tail(a, k)), cat(lowered(b, l - 1)?, tail(b, l)), "Z1")?;
            let zp1 =
                build(cat(lowered(c, lp - 1)?, tail(c, lp)), cat(lowered(d, kp - 1)?, tail(d, kp)), "Z'1")?;
            (z1, zp1, Some((k - 1, l - 1)), Some((lp - 1, kp - 1)))
        }
        DerivCase::II => {
            let z1 = build(cat(lowered(a, k - 1)?, tail(d, kp)), cat(lowered(b, l - 1)?, tail(c, lp)), "Z1")?;
            let zp1 = build(cat(c[..lp].to_vec(), tail(b, l)), cat(d[..kp].to_vec(), tail(a, k)), "Z'1")?;
            (z1, zp1, Some((k - 1, l - 1)), None)
        }
        DerivCase::III => {
            let z1 = build(cat(a[..k].to_vec(), tail(d, kp)), cat(b[..l].to_vec(), tail(c, lp)), "Z1")?;
            let zp1 =
                build(cat(lowered(c, lp - 1)?, tail(b, l)), cat(lowered(d, kp - 1)?, tail(a, k)), "Z'1")?;
            (z1, zp1, None, Some((lp - 1, kp - 1)))
        }
    };
    let fmap = side_map(&pair.z, &z1, zrem)?;
    let fpmap = side_map(&pair.zp, &zp1, zprem)?;
    let core = |s: &Slot, used: bool| u32::from(used && s.kind == PairKind::Core);
    let c_exp = core(&scan.z, zrem.is_some()) + core(&scan.zp, zprem.is_some());
    Ok(DerivativeStep { scan, z1, zp1, fmap, fpmap, c_exp })
}

impl DerivativeStep {
    /// The derived pair.
    pub fn next_pair(&self) -> Result<SpecialPair> {
        SpecialPair::from_raw(self.z1.clone(), self.zp1.clone())
    }

    /// `f̄` on masks; `None` if `M` meets a removed entry.
    pub fn transport_mask(&self, m: Mask) -> Option<Mask> {
        apply(&self.fmap, m)
    }

    /// `f̄'` on masks.
    pub fn transport_mask_p(&self, n: Mask) -> Option<Mask> {
        apply(&self.fpmap, n)
    }

    /// Entries removed from `Z_I`.
    pub fn removed(&self) -> Mask {
        removed_mask(&self.fmap)
    }

    /// Entries removed from `Z'_I`.
    pub fn removed_p(&self) -> Mask {
        removed_mask(&self.fpmap)
    }

    /// `f̄(Λ)` for `Λ ∈ S̄_Z` or `f̄'(Λ)` for `Λ ∈ S̄_{Z'}`, chosen by `side`.
    pub fn transport(&self, pair: &SpecialPair, s: &Symbol, side: Side) -> Result<Symbol> {
        let (base, map, dst) = match side {
            Side::Sp => (&pair.z, &self.fmap, &self.z1),
            Side::O => (&pair.zp, &self.fpmap, &self.zp1),
        };
        let m = base.require_mask(s)?;
        let img = apply(map, m).ok_or_else(|| Error::Invalid(format!("{s} uses a removed entry")))?;
        Ok(dst.lambda(img))
    }
}

/// Which member of the pair a symbol belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The defect-1 side `Z`.
    Sp,
    /// The defect-0 side `Z'`.
    O,
}

/// A full derivative chain.
#[derive(Debug, Clone)]
pub struct Chain {
    /// The pairs before each step, followed by the terminal pair.
    pub pairs: Vec<SpecialPair>,
    /// The steps.
    pub steps: Vec<DerivativeStep>,
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.steps.serialize(s)
    }
}

/// Derives until the scan finds nothing.
pub fn derive_full(z: &Symbol, zp: &Symbol) -> Result<Chain> {
    derive_full_pair(SpecialPair::new(z, zp)?)
}

/// [`derive_full`] from an aligned pair.
pub fn derive_full_pair(start: SpecialPair) -> Result<Chain> {
    if start.d_is_empty() {
        return Err(Error::EmptyRelation(start.z.to_string(), start.zp.to_string()));
    }
    let limit = start.z.top().len() + start.z.bot().len() + start.zp.top().len() + start.zp.bot().len();
    let mut pairs = vec![start];
    let mut steps = Vec::new();
    loop {
        let cur = pairs.last().expect("non-empty");
        match derive_once(cur) {
            Ok(step) => {
                let next = step.next_pair()?;
                steps.push(step);
                pairs.push(next);
                if steps.len() > limit {
                    return Err(Error::Invariant("derivative chain does not terminate".to_string()));
                }
            }
            Err(Error::Terminal) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(Chain { pairs, steps })
}

impl Chain {
    /// The terminal pair.
    pub fn terminal(&self) -> &SpecialPair {
        self.pairs.last().expect("non-empty")
    }

    /// Composite `f̄_t` on masks of the original `Z`.
    pub fn transport_mask(&self, m: Mask) -> Option<Mask> {
        self.steps.iter().try_fold(m, |acc, s| s.transport_mask(acc))
    }

    /// Composite `f̄'_t` on masks of the original `Z'`.
    pub fn transport_mask_p(&self, n: Mask) -> Option<Mask> {
        self.steps.iter().try_fold(n, |acc, s| s.transport_mask_p(acc))
    }
}

fn fail(msg: String) -> Result<()> {
    Err(Error::Invariant(msg))
}

fn popcount_bot(s: &SpecialSymbol, m: Mask) -> u32 {
    s.counts(m).1
}

/// Checks every structural property of one step against brute force.
pub fn verify_step(pair: &SpecialPair, step: &DerivativeStep) -> Result<()> {
    let tag = format!("({}, {}) case {}", pair.z, pair.zp, step.scan.case);
    let (m, mp) = (pair.z.size_m(), pair.zp.size_m());
    let sizes = |s: &SpecialSymbol| (s.top().len(), s.bot().len());
    let (want_z, want_zp) = match step.scan.case {
        DerivCase::I => ((m, m - 1), (mp - 1, mp - 1)),
        DerivCase::II => ((m, m - 1), (mp, mp)),
        DerivCase::III => ((m + 1, m), (mp - 1, mp - 1)),
    };
    if sizes(&step.z1) != want_z || sizes(&step.zp1) != want_zp {
        return fail(format!("{tag}: sizes"));
    }
    let drop = |kind: PairKind, used: bool| usize::from(used && kind == PairKind::Core);
    let rz = step.scan.case != DerivCase::III;
    let rzp = step.scan.case != DerivCase::II;
    if step.z1.degree() + drop(step.scan.z.kind, rz) != pair.z.degree()
        || step.zp1.degree() + drop(step.scan.zp.kind, rzp) != pair.zp.degree()
    {
        return fail(format!("{tag}: degrees"));
    }
    let cores = pair.cores()?;
    let (nz, nzp) = slots_at(pair, &cores, step.scan.position + 1);
    let z_crit = step.scan.z.kind.critical();
    let zp_crit = step.scan.zp.kind.critical();
    if pair.regime() == Regime::Plus1 && z_crit && nzp.kind.critical() {
        return fail(format!("{tag}: next pair of Z' is critical"));
    }
    if pair.regime() == Regime::Equal && zp_crit && nz.kind.critical() {
        return fail(format!("{tag}: next pair of Z is critical"));
    }
    let next = step.next_pair()?;
    let rem = step.removed();
    let remp = step.removed_p();
    let all_z = pair.z.full_mask();
    let all_zp = pair.zp.full_mask();
    for mm in 0..=all_z {
        if mm & rem != 0 {
            continue;
        }
        let fm = step.transport_mask(mm).expect("domain");
        let l = pair.z.lambda(mm);
        let l1 = step.z1.lambda(fm);
        if popcount_bot(&pair.z, mm) != popcount_bot(&step.z1, fm) {
            return fail(format!("{tag}: f moves rows"));
        }
        for nn in 0..=all_zp {
            if nn & remp != 0 {
                continue;
            }
            let fnn = step.transport_mask_p(nn).expect("domain");
            let before = in_b_bar(&l, &pair.zp.lambda(nn));
            let after = in_b_bar(&l1, &step.zp1.lambda(fnn));
            if before != after {
                return fail(format!("{tag}: transport breaks B̄+ at ({}, {})", l, pair.zp.lambda(nn)));
            }
        }
    }
    let b: BTreeSet<(Mask, Mask)> = pair.b_masks(Sign::Plus).into_iter().collect();
    let b1: BTreeSet<(Mask, Mask)> =
        b.iter().copied().filter(|&(x, y)| x & rem == 0 && y & remp == 0).collect();
    let img: BTreeSet<(Mask, Mask)> = b1
        .iter()
        .map(|&(x, y)| (step.transport_mask(x).unwrap(), step.transport_mask_p(y).unwrap()))
        .collect();
    let target: BTreeSet<(Mask, Mask)> = next.b_masks(Sign::Plus).into_iter().collect();
    if img != target || img.len() != b1.len() {
        return fail(format!("{tag}: image of B+(1) differs from B+ of the derivative"));
    }
    if b.len() != (1usize << step.c_exp) * b1.len() {
        return fail(format!("{tag}: |B+| = {} but 2^{} * {}", b.len(), step.c_exp, b1.len()));
    }
    let d: BTreeSet<(Mask, Mask)> = pair.d_masks().into_iter().collect();
    let d1: BTreeSet<(Mask, Mask)> = d
        .iter()
        .filter(|&&(x, y)| x & rem == 0 && y & remp == 0)
        .map(|&(x, y)| (step.transport_mask(x).unwrap(), step.transport_mask_p(y).unwrap()))
        .collect();
    let dt: BTreeSet<(Mask, Mask)> = next.d_masks().into_iter().collect();
    if d1 != dt {
        return fail(format!("{tag}: image of D(1) differs from D of the derivative"));
    }
    Ok(())
}

/// Checks the terminal conditions and the composite transport of a chain.
pub fn verify_chain(chain: &Chain) -> Result<()> {
    for (p, s) in chain.pairs.iter().zip(&chain.steps) {
        verify_step(p, s)?;
    }
    let start = &chain.pairs[0];
    let end = chain.terminal();
    let tag = format!("({}, {})", start.z, start.zp);
    if !end.z.is_regular() || !end.zp.is_regular() {
        return fail(format!("{tag}: terminal pair not regular"));
    }
    let d = end.relation(crate::relations::RelationKind::D)?;
    if d.is_empty() || !d.is_one_to_one() {
        return fail(format!("{tag}: terminal D not one-to-one"));
    }
    let dd = end.zp.degree() as i64 - end.z.degree() as i64;
    if dd != 0 && dd != 1 {
        return fail(format!("{tag}: terminal degree gap {dd}"));
    }
    let cores = start.cores()?;
    if start.z.degree() - cores.psi0.len() != end.z.degree()
        || start.zp.degree() - cores.psi0p.len() != end.zp.degree()
    {
        return fail(format!("{tag}: degree after removing the cores"));
    }
    for mm in 0..=start.z.full_mask() {
        if chain.transport_mask(mm).is_some() != (mm & cores.mask == 0) {
            return fail(format!("{tag}: composite f is not defined exactly off the core"));
        }
    }
    for nn in 0..=start.zp.full_mask() {
        if chain.transport_mask_p(nn).is_some() != (nn & cores.maskp == 0) {
            return fail(format!("{tag}: composite f' is not defined exactly off the core"));
        }
    }
    let nat: BTreeSet<(Mask, Mask)> = start
        .b_natural_masks(Sign::Plus)?
        .into_iter()
        .map(|(x, y)| (chain.transport_mask(x).unwrap(), chain.transport_mask_p(y).unwrap()))
        .collect();
    let fin: BTreeSet<(Mask, Mask)> = end.b_masks(Sign::Plus).into_iter().collect();
    if nat != fin {
        return fail(format!("{tag}: B+ natural does not transport onto the terminal B+"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{render_markdown, RelationKind};

    fn s(x: &str) -> Symbol {
        x.parse().unwrap()
    }

    #[test]
    fn worked_chain() {
        let chain = derive_full(&s("8,5,1;6,3"), &s("8,6,2;6,3,0")).unwrap();
        assert_eq!(chain.steps.len(), 2);
        let st = &chain.steps[0];
        assert_eq!(st.scan.case, DerivCase::I);
        assert_eq!(st.scan.z.pair, Some(Pair { top: 5, bot: 3 }));
        assert_eq!(st.scan.zp.pair, Some(Pair { top: 2, bot: 3 }));
        assert_eq!(st.z1.to_symbol(), s("7,1;5"));
        assert_eq!(st.zp1.to_symbol(), s("7,5;5,0"));
        assert_eq!(st.c_exp, 2);
        let st = &chain.steps[1];
        assert_eq!(st.scan.case, DerivCase::III);
        assert_eq!(st.scan.zp.pair, Some(Pair { top: 5, bot: 5 }));
        assert_eq!(st.scan.zp.kind, PairKind::Double);
        assert_eq!(st.scan.z.pair, Some(Pair { top: 7, bot: 5 }));
        assert_eq!(st.z1.to_symbol(), s("7,0;5"));
        assert_eq!(st.zp1.to_symbol(), s("6;1"));
        assert_eq!(st.c_exp, 0);
        verify_chain(&chain).unwrap();
        let json = serde_json::to_string(&chain).unwrap();
        assert!(json.starts_with(r#"[{"case":"I","Z1":"7,1;5","Zp1":"7,5;5,0","Cexp":2"#));
    }

    #[test]
    fn terminal_tables() {
        let chain = derive_full(&s("8,5,1;6,3"), &s("8,6,2;6,3,0")).unwrap();
        let t1 = chain.pairs[1].relation(RelationKind::BPlus).unwrap();
        assert_eq!(t1.layout(), (vec![s("7,1;5"), s("7,5;1")], vec![s("7,5;5,0"), s("5,0;7,5")]));
        assert!(t1.is_one_to_one());
        let t2 = chain.pairs[2].relation(RelationKind::BPlus).unwrap();
        assert_eq!(t2.layout(), (vec![s("7,0;5"), s("7,5;0")], vec![s("6;1"), s("1;6")]));
        assert!(render_markdown(&t2).contains("✓"));
    }

    #[test]
    fn terminal_input_gives_empty_chain() {
        let chain = derive_full(&s("7,0;5"), &s("6;1")).unwrap();
        assert!(chain.steps.is_empty());
        let p = SpecialPair::new(&s("7,0;5"), &s("6;1")).unwrap();
        assert_eq!(scan_first(&p).unwrap_err(), Error::Terminal);
    }

    #[test]
    fn transport_identity_on_base() {
        let p = SpecialPair::new(&s("8,5,1;6,3"), &s("8,6,2;6,3,0")).unwrap();
        let st = derive_once(&p).unwrap();
        assert_eq!(st.transport(&p, p.z.symbol(), Side::Sp).unwrap(), s("7,1;5"));
        assert_eq!(st.transport(&p, p.zp.symbol(), Side::O).unwrap(), s("7,5;5,0"));
        assert!(st.transport(&p, &s("8,3,1;6,5"), Side::Sp).is_err());
    }
}
