//! The correspondence maps `θ`, `θ^ε` on symbols and on arrangements.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cells::{admissible, arrangements, cell, subsets_of_pairs, Arrangement};
use crate::error::{Error, Result};
use crate::relations::{subset_unions, CorePair, Sign, SpecialPair};
use crate::special::{Entry, Family, Mask, Pair, SpecialSymbol};
use crate::symbol::{Row, Symbol};

/// Direction of `θ^ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `S_Z → S^ε_{Z'}`, used when `deg(Z'∖Ψ'_0) = deg(Z∖Ψ_0) + 1`.
    Up,
    /// `S^ε_{Z'} → S_Z`, used when the two degrees agree.
    Down,
}

/// `θ(Z_(m)) ∪ …` on a cuspidal base: `(2m+1;−) ∪ Λ^t` upward, `(2m;−) ∪ Λ'^t` downward.
///
/// The new entry goes to the second row for `ε = −`.
pub fn theta_cuspidal(l: &Symbol, eps: Sign, dir: Direction) -> Result<Symbol> {
    let n = l.top().len() + l.bot().len();
    let (base, fam, new) = match dir {
        Direction::Up => {
            if n.is_multiple_of(2) {
                return Err(Error::Invalid(format!("{l} is not in S_Z for a cuspidal Z")));
            }
            let m = (n / 2) as u32;
            (SpecialSymbol::cuspidal_sp(m), Family::Sp, 2 * m + 1)
        }
        Direction::Down => {
            if n % 2 == 1 || n == 0 {
                return Err(Error::Invalid(format!("{l} is not in S^ε_Z' for a cuspidal Z'")));
            }
            let m = (n / 2) as u32;
            (SpecialSymbol::cuspidal_o(m), eps.family(), 2 * m)
        }
    };
    match base.mask_of(l) {
        Some(mk) if base.in_family(mk, fam)? => {}
        _ => return Err(Error::NotInFamily { symbol: l.to_string(), base: base.to_string() }),
    }
    let t = l.transpose();
    let (mut top, mut bot) = (t.top().to_vec(), t.bot().to_vec());
    match eps {
        Sign::Plus => top.insert(0, new),
        Sign::Minus => bot.insert(0, new),
    }
    Symbol::new(top, bot)
}

/// `θ^ε` between `S_Z^{Ψ_0}` and `S^{ε,Ψ'_0}_{Z'}` as a map of single positions.
#[derive(Debug, Clone)]
pub struct ThetaMap {
    /// The aligned pair.
    pub pair: SpecialPair,
    /// `ε`.
    pub eps: Sign,
    /// Direction.
    pub direction: Direction,
    /// Cores `(Ψ_0, Ψ'_0)`.
    pub cores: CorePair,
    /// Source bit to target bit.
    pub table: Vec<(usize, usize)>,
    /// Target bit outside the image: `c_1` upward, `a_1` downward.
    pub extra: usize,
}

/// Bits of the singles outside `core`, split by row and in decreasing order.
fn free_bits(z: &SpecialSymbol, core: Mask) -> (Vec<usize>, Vec<usize>) {
    let nt = z.singles_top().len();
    let free = |i: &usize| core >> i & 1 == 0;
    let top = (0..nt).filter(free).collect();
    let bot = (nt..z.num_singles()).filter(free).collect();
    (top, bot)
}

impl ThetaMap {
    /// Builds `θ^ε` for a pair with `D_{Z,Z'} ≠ ∅`.
    pub fn new(pair: &SpecialPair, eps: Sign) -> Result<ThetaMap> {
        let cores = pair.cores()?;
        let (a, b) = free_bits(&pair.z, cores.mask);
        let (c, d) = free_bits(&pair.zp, cores.maskp);
        let (direction, table, extra) = if d.len() == b.len() + 1 && c.len() == a.len() {
            let mut t: Vec<(usize, usize)> = a.iter().zip(&d).map(|(&x, &y)| (x, y)).collect();
            t.extend(b.iter().zip(&c[1..]).map(|(&x, &y)| (x, y)));
            (Direction::Up, t, c[0])
        } else if d.len() == b.len() && a.len() == c.len() + 1 {
            let mut t: Vec<(usize, usize)> = c.iter().zip(&b).map(|(&x, &y)| (x, y)).collect();
            t.extend(d.iter().zip(&a[1..]).map(|(&x, &y)| (x, y)));
            (Direction::Down, t, a[0])
        } else {
            return Err(Error::Invariant(format!(
                "degrees away from the cores differ by neither 0 nor 1 for ({}, {})",
                pair.z, pair.zp
            )));
        };
        Ok(ThetaMap { pair: pair.clone(), eps, direction, cores, table, extra })
    }

    fn source(&self) -> (&SpecialSymbol, Mask, Family) {
        match self.direction {
            Direction::Up => (&self.pair.z, self.cores.mask, Family::Sp),
            Direction::Down => (&self.pair.zp, self.cores.maskp, self.eps.family()),
        }
    }

    fn target(&self) -> (&SpecialSymbol, Mask, Family) {
        match self.direction {
            Direction::Up => (&self.pair.zp, self.cores.maskp, self.eps.family()),
            Direction::Down => (&self.pair.z, self.cores.mask, Family::Sp),
        }
    }

    /// The domain `S_Z^{Ψ_0}` or `S^{ε,Ψ'_0}_{Z'}` as masks.
    pub fn domain(&self) -> Vec<Mask> {
        let (z, core, fam) = self.source();
        z.family_masks(fam).expect("family matches base").into_iter().filter(|m| m & core == 0).collect()
    }

    /// `θ(M)` on single positions, without the `ε` correction.
    pub fn map_bits(&self, m: Mask) -> Mask {
        self.table.iter().filter(|(s, _)| m >> s & 1 == 1).fold(0, |acc, &(_, t)| acc | 1 << t)
    }

    /// `θ^ε(Λ_M)` as a target mask.
    pub fn apply_mask(&self, m: Mask) -> Result<Mask> {
        let (z, core, fam) = self.source();
        if m & core != 0 || !z.in_family(m, fam)? {
            return Err(Error::NotInFamily { symbol: z.lambda(m).to_string(), base: z.to_string() });
        }
        let out = self.map_bits(m) | if self.eps == Sign::Minus { 1 << self.extra } else { 0 };
        let (tz, tcore, tfam) = self.target();
        if out & tcore != 0 || !tz.in_family(out, tfam)? {
            return Err(Error::Invariant(format!("θ({}) left the target family", z.lambda(m))));
        }
        Ok(out)
    }

    /// `θ^ε(Λ)` on symbols.
    pub fn apply(&self, l: &Symbol) -> Result<Symbol> {
        let (z, _, _) = self.source();
        let m = z.require_mask(l)?;
        Ok(self.target().0.lambda(self.apply_mask(m)?))
    }

    /// The graph of `θ^ε` as `(Z-mask, Z'-mask)` pairs.
    pub fn graph(&self) -> Result<Vec<(Mask, Mask)>> {
        self.domain()
            .into_iter()
            .map(|m| {
                let n = self.apply_mask(m)?;
                Ok(match self.direction {
                    Direction::Up => (m, n),
                    Direction::Down => (n, m),
                })
            })
            .collect()
    }

    /// Transpose of a `Z'`-mask relative to `Z'∖Ψ'_0`.
    pub fn transpose_p(&self, n: Mask) -> Mask {
        n ^ (self.pair.zp.full_mask() ^ self.cores.maskp)
    }

    fn entry_of(z: &SpecialSymbol, bit: usize) -> Entry {
        z.entry(bit)
    }

    fn image_entry(&self, e: Entry) -> Result<u32> {
        let (z, _, _) = self.source();
        let bit = z.index_of(e).ok_or_else(|| Error::NotSingle(e.to_string()))?;
        let t = self.table.iter().find(|(s, _)| *s == bit).ok_or_else(|| Error::NotSingle(e.to_string()))?.1;
        Ok(ThetaMap::entry_of(self.target().0, t).value)
    }

    /// `θ(Φ)` and `θ(Ψ)`, with `Ψ_0 ≤ Ψ ≤ Φ` on the source side.
    pub fn arrangement(&self, phi: &Arrangement, psi: &[Pair]) -> Result<(Arrangement, Vec<Pair>)> {
        let (z, _, _) = self.source();
        phi.validate(z)?;
        let (core, core_t) = match self.direction {
            Direction::Up => (&self.cores.psi0, &self.cores.psi0p),
            Direction::Down => (&self.cores.psi0p, &self.cores.psi0),
        };
        if core.iter().any(|p| !psi.contains(p)) || psi.iter().any(|p| !phi.pairs.contains(p)) {
            return Err(Error::Invalid("expected Ψ_0 ≤ Ψ ≤ Φ".to_string()));
        }
        let top = |v: u32| Entry { row: Row::Top, value: v };
        let bot = |v: u32| Entry { row: Row::Bot, value: v };
        let image = |p: &Pair| -> Result<Pair> {
            Ok(Pair { top: self.image_entry(bot(p.bot))?, bot: self.image_entry(top(p.top))? })
        };
        let extra = ThetaMap::entry_of(self.target().0, self.extra).value;
        let free: Vec<&Pair> = phi.pairs.iter().filter(|p| !core.contains(p)).collect();
        let mut pairs: Vec<Pair> = free.iter().map(|p| image(p)).collect::<Result<_>>()?;
        let mut sub: Vec<Pair> =
            psi.iter().filter(|p| !core.contains(p)).map(image).collect::<Result<_>>()?;
        let rest = phi.pairs.len() - psi.len() + 1;
        let isolated = match self.direction {
            Direction::Up => {
                let s = phi.isolated.expect("defect-1 arrangement");
                let p = Pair { top: extra, bot: self.image_entry(top(s))? };
                pairs.push(p);
                if (rest % 2 == 1) == (self.eps == Sign::Plus) {
                    sub.push(p);
                }
                None
            }
            Direction::Down => {
                if !admissible(phi, psi, self.eps) {
                    return Err(Error::Invalid(format!("Ψ' is not admissible for ε = {}", self.eps)));
                }
                Some(extra)
            }
        };
        pairs.extend(core_t.iter().copied());
        sub.extend(core_t.iter().copied());
        sub.sort_by(|a, b| b.cmp(a));
        Ok((Arrangement::new(pairs, isolated), sub))
    }

    /// Checks the cell identity for `θ(Φ)`, `θ(Ψ)` against the image of the source cell.
    pub fn check_cell_image(&self, phi: &Arrangement, psi: &[Pair]) -> Result<bool> {
        let (z, core, fam) = self.source();
        let (tz, _, _) = self.target();
        let (tphi, tpsi) = self.arrangement(phi, psi)?;
        let got: BTreeSet<Mask> = cell(tz, &tphi, &tpsi)?.masks.into_iter().collect();
        let core_t = match self.direction {
            Direction::Up => &self.cores.psi0p,
            Direction::Down => &self.cores.psi0,
        };
        let unions = subset_unions(tz, core_t);
        let mut want = BTreeSet::new();
        for m in cell(z, phi, psi)?.masks {
            if m & core != 0 || !z.in_family(m, fam)? {
                continue;
            }
            let n = self.apply_mask(m)?;
            let mut images = vec![n];
            if self.direction == Direction::Up {
                images.push(self.transpose_p(n));
            }
            for x in images {
                for &u in &unions {
                    want.insert(x ^ u);
                }
            }
        }
        Ok(got == want)
    }
}

/// How the graph of `θ^ε` compares with `B^{ε,♮}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    /// Direction of the map.
    pub direction: Direction,
    /// Size of the domain.
    pub domain: usize,
    /// Whether `B^{ε,♮}` is exactly the graph.
    pub exact: bool,
    /// Whether every source element has one partner, `θ^ε(Λ)` or `θ^ε(Λ)^t`.
    pub up_to_transpose: bool,
}

/// Compares the graph of `θ^ε` with `B^{ε,♮}`.
pub fn compare_graph(pair: &SpecialPair, eps: Sign) -> Result<GraphReport> {
    let t = ThetaMap::new(pair, eps)?;
    let graph: BTreeSet<(Mask, Mask)> = t.graph()?.into_iter().collect();
    let nat: BTreeSet<(Mask, Mask)> = pair.b_natural_masks(eps)?.into_iter().collect();
    let exact = graph == nat;
    let up_to_transpose = t.domain().iter().all(|&m| {
        let n = t.apply_mask(m).unwrap();
        match t.direction {
            Direction::Up => {
                let partners: Vec<Mask> = nat.iter().filter(|p| p.0 == m).map(|p| p.1).collect();
                partners.len() == 1 && (partners[0] == n || partners[0] == t.transpose_p(n))
            }
            Direction::Down => {
                let partners: Vec<Mask> = nat.iter().filter(|p| p.1 == m).map(|p| p.0).collect();
                partners == [n]
            }
        }
    });
    Ok(GraphReport { direction: t.direction, domain: graph.len(), exact, up_to_transpose })
}

/// Checks the cell identity for every arrangement and every `Ψ` with `Ψ_0 ≤ Ψ`,
/// restricted to admissible `Ψ'` downward. Returns the number of cells checked.
pub fn check_all_cells(t: &ThetaMap) -> Result<usize> {
    let (z, core) = match t.direction {
        Direction::Up => (&t.pair.z, &t.cores.psi0),
        Direction::Down => (&t.pair.zp, &t.cores.psi0p),
    };
    let mut count = 0;
    for phi in arrangements(z) {
        if core.iter().any(|p| !phi.pairs.contains(p)) {
            continue;
        }
        for psi in subsets_of_pairs(&phi) {
            if core.iter().any(|p| !psi.contains(p)) {
                continue;
            }
            if t.direction == Direction::Down && !admissible(&phi, &psi, t.eps) {
                continue;
            }
            if !t.check_cell_image(&phi, &psi)? {
                let (tphi, tpsi) = t.arrangement(&phi, &psi)?;
                return Err(Error::Invariant(format!(
                    "cell image mismatch for Φ = {phi}, Ψ = {psi:?}, θ(Φ) = {tphi}, θ(Ψ) = {tpsi:?}"
                )));
            }
            count += 1;
        }
    }
    Ok(count)
}
