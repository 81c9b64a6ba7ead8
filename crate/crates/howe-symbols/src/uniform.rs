//! Formal class-function spaces spanned by `ρ_Λ`, the vectors `R_Σ`, and the
//! uniform projection.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::cells::{admissible, cell, subsets_of_pairs, Arrangement};
use crate::derivative::DerivativeStep;
use crate::relations::{Sign, SpecialPair};
use crate::scalar::Scalar;
use crate::special::{pairing, Family, Mask, Pair, SpecialSymbol};
use crate::{Error, Result, Symbol};

/// Which family spans a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// `V_Z` spanned by `S_Z`, base of defect 1.
    Sp,
    /// `V^ε_{Z'}` spanned by `S^ε_{Z'}`, base of defect 0.
    O(Sign),
}

impl SpaceKind {
    fn family(self) -> Family {
        match self {
            SpaceKind::Sp => Family::Sp,
            SpaceKind::O(e) => e.family(),
        }
    }

    fn uniform_family(self) -> Family {
        match self {
            SpaceKind::Sp => Family::Defect(1),
            SpaceKind::O(_) => Family::Defect(0),
        }
    }
}

/// A vector `Σ c_Λ ρ_Λ`, keyed by the masks of `Λ` over the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalVector {
    base: SpecialSymbol,
    kind: SpaceKind,
    coeffs: BTreeMap<Mask, Scalar>,
}

impl FormalVector {
    /// The zero vector of a space.
    pub fn zero(space: &Space) -> FormalVector {
        FormalVector { base: space.base.clone(), kind: space.kind, coeffs: BTreeMap::new() }
    }

    /// The base symbol.
    pub fn base(&self) -> &SpecialSymbol {
        &self.base
    }

    /// Coefficient of `ρ_{Λ_M}`.
    pub fn get(&self, m: Mask) -> Scalar {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    /// Adds `c·ρ_{Λ_M}`.
    pub fn add_term(&mut self, m: Mask, c: &Scalar) {
        let e = self.coeffs.entry(m).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    /// Non-zero terms in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (Mask, &Scalar)> {
        self.coeffs.iter().map(|(&m, c)| (m, c))
    }

    /// Number of non-zero terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether there are no terms.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether all coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_space(&self, o: &FormalVector) -> Result<()> {
        if self.base != o.base || self.kind != o.kind {
            return Err(Error::Invalid(format!("vectors over {} and {}", self.base, o.base)));
        }
        Ok(())
    }

    /// `c·v`.
    pub fn scaled(&self, c: &Scalar) -> FormalVector {
        let mut out = FormalVector { base: self.base.clone(), kind: self.kind, coeffs: BTreeMap::new() };
        if !c.is_zero() {
            for (&m, x) in &self.coeffs {
                out.coeffs.insert(m, x * c);
            }
        }
        out
    }

    /// `self += c·o`.
    pub fn axpy(&mut self, c: &Scalar, o: &FormalVector) -> Result<()> {
        self.same_space(o)?;
        for (&m, x) in &o.coeffs {
            self.add_term(m, &(x * c));
        }
        Ok(())
    }

    /// `self + o`.
    pub fn plus(&self, o: &FormalVector) -> Result<FormalVector> {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), o)?;
        Ok(out)
    }

    /// `⟨self, o⟩` with `ρ_Λ` orthonormal.
    pub fn inner(&self, o: &FormalVector) -> Result<Scalar> {
        self.same_space(o)?;
        let (a, b) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        Ok(a.coeffs.iter().filter_map(|(m, x)| b.coeffs.get(m).map(|y| x * y)).sum())
    }
}

impl Serialize for FormalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (&m, c) in &self.coeffs {
            map.serialize_entry(&self.base.lambda(m).to_string(), c)?;
        }
        map.end()
    }
}

/// A tensor `Σ c_{Λ,Λ'} ρ_Λ ⊗ ρ_{Λ'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalTensor {
    left: (SpecialSymbol, SpaceKind),
    right: (SpecialSymbol, SpaceKind),
    coeffs: BTreeMap<(Mask, Mask), Scalar>,
}

impl FormalTensor {
    /// The zero tensor of `V ⊗ V'`.
    pub fn zero(l: &Space, r: &Space) -> FormalTensor {
        FormalTensor {
            left: (l.base.clone(), l.kind),
            right: (r.base.clone(), r.kind),
            coeffs: BTreeMap::new(),
        }
    }

    /// `u ⊗ v`.
    pub fn outer(u: &FormalVector, v: &FormalVector) -> FormalTensor {
        let mut t = FormalTensor {
            left: (u.base.clone(), u.kind),
            right: (v.base.clone(), v.kind),
            coeffs: BTreeMap::new(),
        };
        for (&m, x) in &u.coeffs {
            for (&n, y) in &v.coeffs {
                t.coeffs.insert((m, n), x * y);
            }
        }
        t
    }

    /// Coefficient of `ρ_{Λ_M} ⊗ ρ_{Λ_N}`.
    pub fn get(&self, m: Mask, n: Mask) -> Scalar {
        self.coeffs.get(&(m, n)).cloned().unwrap_or_default()
    }

    /// Adds `c·ρ_{Λ_M} ⊗ ρ_{Λ_N}`.
    pub fn add_term(&mut self, m: Mask, n: Mask, c: &Scalar) {
        let e = self.coeffs.entry((m, n)).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(m, n));
        }
    }

    /// `self += c·(u ⊗ v)`.
    pub fn add_outer(&mut self, c: &Scalar, u: &FormalVector, v: &FormalVector) -> Result<()> {
        if (&u.base, u.kind) != (&self.left.0, self.left.1)
            || (&v.base, v.kind) != (&self.right.0, self.right.1)
        {
            return Err(Error::Invalid("tensor factors over other bases".to_string()));
        }
        for (&m, x) in &u.coeffs {
            let cx = c * x;
            for (&n, y) in &v.coeffs {
                self.add_term(m, n, &(&cx * y));
            }
        }
        Ok(())
    }

    /// `c·t`.
    pub fn scaled(&self, c: &Scalar) -> FormalTensor {
        let mut out =
            FormalTensor { left: self.left.clone(), right: self.right.clone(), coeffs: BTreeMap::new() };
        if !c.is_zero() {
            for (&k, x) in &self.coeffs {
                out.coeffs.insert(k, x * c);
            }
        }
        out
    }

    /// Non-zero terms.
    pub fn terms(&self) -> impl Iterator<Item = ((Mask, Mask), &Scalar)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    /// Number of non-zero terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Whether there are no terms.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether all coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `⟨self, o⟩`.
    pub fn inner(&self, o: &FormalTensor) -> Result<Scalar> {
        if self.left != o.left || self.right != o.right {
            return Err(Error::Invalid("tensors over different bases".to_string()));
        }
        Ok(self.coeffs.iter().filter_map(|(k, x)| o.coeffs.get(k).map(|y| x * y)).sum())
    }

    /// First coordinate where `self` and `o` differ, with both coefficients.
    pub fn first_difference(&self, o: &FormalTensor) -> Option<((Mask, Mask), Scalar, Scalar)> {
        let keys: std::collections::BTreeSet<&(Mask, Mask)> =
            self.coeffs.keys().chain(o.coeffs.keys()).collect();
        keys.into_iter().find_map(|&(m, n)| {
            let (a, b) = (self.get(m, n), o.get(m, n));
            (a != b).then_some(((m, n), a, b))
        })
    }

    /// Symbol names of a coordinate.
    pub fn names(&self, k: (Mask, Mask)) -> (Symbol, Symbol) {
        (self.left.0.lambda(k.0), self.right.0.lambda(k.1))
    }
}

impl Serialize for FormalTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (&k, c) in &self.coeffs {
            let (a, b) = self.names(k);
            map.serialize_entry(&format!("{a} ⊗ {b}"), c)?;
        }
        map.end()
    }
}

/// `V_Z` or `V^ε_{Z'}` with its uniform basis.
///
/// The basis is `R_Σ` for `Σ ∈ S_{Z,1}` on the Sp side and one `Σ` from each
/// class `{Σ, Σ^t}` of `S_{Z',0}` on the O side. Its Gram matrix is checked to
/// be diagonal on construction.
#[derive(Debug, Clone)]
pub struct Space {
    base: SpecialSymbol,
    kind: SpaceKind,
    members: Vec<Mask>,
    uniform: Vec<Mask>,
    reps: Vec<Mask>,
    basis: Vec<FormalVector>,
    norms: Vec<Scalar>,
}

impl Space {
    /// Builds the space and its uniform basis.
    pub fn new(base: &SpecialSymbol, kind: SpaceKind) -> Result<Space> {
        let members = base.family_masks(kind.family())?;
        let uniform = base.family_masks(kind.uniform_family())?;
        let reps: Vec<Mask> = match kind {
            _ if members.is_empty() => Vec::new(),
            SpaceKind::Sp => uniform.clone(),
            SpaceKind::O(_) => uniform.iter().copied().filter(|&n| n <= base.complement(n)).collect(),
        };
        let mut sp =
            Space { base: base.clone(), kind, members, uniform, reps, basis: Vec::new(), norms: Vec::new() };
        sp.basis = sp.reps.iter().map(|&n| sp.r_of_mask(n)).collect();
        for i in 0..sp.basis.len() {
            for j in 0..i {
                if !sp.basis[i].inner(&sp.basis[j])?.is_zero() {
                    return Err(Error::Invariant(format!("uniform basis of {base} is not orthogonal")));
                }
            }
            let n = sp.basis[i].inner(&sp.basis[i])?;
            if n.is_zero() {
                return Err(Error::Invariant(format!("zero uniform vector over {base}")));
            }
            sp.norms.push(n);
        }
        Ok(sp)
    }

    /// The base symbol.
    pub fn base(&self) -> &SpecialSymbol {
        &self.base
    }

    /// The family tag.
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// Masks of the spanning family.
    pub fn members(&self) -> &[Mask] {
        &self.members
    }

    /// Masks of `S_{Z,1}` or `S_{Z',0}`.
    pub fn uniform_masks(&self) -> &[Mask] {
        &self.uniform
    }

    /// Masks of the chosen basis representatives.
    pub fn representatives(&self) -> &[Mask] {
        &self.reps
    }

    /// Whether `Λ_M` lies in the spanning family.
    pub fn contains(&self, m: Mask) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    /// `ρ_{Λ_M}`.
    pub fn rho(&self, m: Mask) -> Result<FormalVector> {
        if !self.contains(m) {
            return Err(Error::NotInFamily {
                symbol: self.base.lambda(m).to_string(),
                base: self.base.to_string(),
            });
        }
        let mut v = FormalVector::zero(self);
        v.add_term(m, &Scalar::one());
        Ok(v)
    }

    /// `ρ_Λ` for a symbol.
    pub fn rho_symbol(&self, s: &Symbol) -> Result<FormalVector> {
        self.rho(self.base.require_mask(s)?)
    }

    fn r_of_mask(&self, n: Mask) -> FormalVector {
        let mut v = FormalVector::zero(self);
        let scale = match self.kind {
            SpaceKind::Sp => Scalar::pow2(-(self.base.degree() as i32)),
            SpaceKind::O(_) => Scalar::pow2(1 - self.base.degree() as i32),
        };
        for &m in &self.members {
            v.add_term(m, &(&scale * &Scalar::sign(pairing(n, m))));
        }
        v
    }

    /// `R_{Λ_N}` for `Λ_N ∈ S_{Z,1}` or `S_{Z',0}`.
    pub fn r_mask(&self, n: Mask) -> Result<FormalVector> {
        if self.uniform.binary_search(&n).is_err() {
            return Err(Error::NotInFamily {
                symbol: self.base.lambda(n).to_string(),
                base: self.base.to_string(),
            });
        }
        if self.members.is_empty() {
            return Err(Error::Invalid(format!("the family of {} for ε=− is empty", self.base)));
        }
        Ok(self.r_of_mask(n))
    }

    /// `R_Σ` for a symbol.
    pub fn r_vector(&self, sigma: &Symbol) -> Result<FormalVector> {
        self.r_mask(self.base.require_mask(sigma)?)
    }

    /// Orthogonal projection onto the span of the `R_Σ`.
    pub fn sharp(&self, v: &FormalVector) -> Result<FormalVector> {
        let mut out = FormalVector::zero(self);
        for (b, n) in self.basis.iter().zip(&self.norms) {
            let c = v.inner(b)? / n;
            if !c.is_zero() {
                out.axpy(&c, b)?;
            }
        }
        Ok(out)
    }

    /// The same projection computed by solving the normal equations on a
    /// basis extracted from all `R_Σ`, with no orthogonality assumed.
    pub fn gram_projection(&self, v: &FormalVector) -> Result<FormalVector> {
        let mut out = FormalVector::zero(self);
        if self.members.is_empty() {
            return Ok(out);
        }
        let all: Vec<FormalVector> = self.uniform.iter().map(|&n| self.r_of_mask(n)).collect();
        let basis = independent_subset(&self.members, &all);
        let k = basis.len();
        let mut a: Vec<Vec<Scalar>> = Vec::with_capacity(k);
        for i in 0..k {
            let mut row = Vec::with_capacity(k + 1);
            for j in 0..k {
                row.push(basis[i].inner(&basis[j])?);
            }
            row.push(v.inner(&basis[i])?);
            a.push(row);
        }
        let c = solve(a)?;
        for (ci, b) in c.iter().zip(&basis) {
            out.axpy(ci, b)?;
        }
        Ok(out)
    }
}

fn dense(members: &[Mask], v: &FormalVector) -> Vec<Scalar> {
    members.iter().map(|&m| v.get(m)).collect()
}

fn independent_subset(members: &[Mask], vs: &[FormalVector]) -> Vec<FormalVector> {
    let mut echelon: Vec<(usize, Vec<Scalar>)> = Vec::new();
    let mut out = Vec::new();
    for v in vs {
        let mut row = dense(members, v);
        for (p, e) in &echelon {
            if !row[*p].is_zero() {
                let f = &row[*p] / &e[*p];
                for (x, y) in row.iter_mut().zip(e) {
                    *x -= &(&f * y);
                }
            }
        }
        if let Some(p) = row.iter().position(|x| !x.is_zero()) {
            echelon.push((p, row));
            out.push(v.clone());
        }
    }
    out
}

fn solve(mut a: Vec<Vec<Scalar>>) -> Result<Vec<Scalar>> {
    let k = a.len();
    for col in 0..k {
        let piv = (col..k)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Invariant("singular Gram matrix".to_string()))?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (src, dst) = if r < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (x, y) in dst.iter_mut().zip(src) {
                    *x -= &(&f * y);
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[k].clone()).collect())
}

/// `(P ⊗ P') t` for the uniform projections of both factors.
pub fn sharp_tensor(l: &Space, r: &Space, t: &FormalTensor) -> Result<FormalTensor> {
    let mut out = FormalTensor::zero(l, r);
    let mut by_left: BTreeMap<Mask, Vec<(Mask, &Scalar)>> = BTreeMap::new();
    for ((m, n), c) in t.terms() {
        by_left.entry(m).or_default().push((n, c));
    }
    for (bj, nj) in r.basis.iter().zip(&r.norms) {
        let mut u = FormalVector::zero(l);
        for (&m, row) in &by_left {
            let s: Scalar = row.iter().map(|&(n, c)| c * &bj.get(n)).sum();
            u.add_term(m, &s);
        }
        for (bi, ni) in l.basis.iter().zip(&l.norms) {
            let c = u.inner(bi)? / (ni * nj);
            if !c.is_zero() {
                out.add_outer(&c, bi, bj)?;
            }
        }
    }
    Ok(out)
}

/// `Σ_{Λ ∈ C} ρ_Λ` for a cell over the space's base.
pub fn cell_sum(space: &Space, phi: &Arrangement, psi: &[Pair]) -> Result<FormalVector> {
    if let SpaceKind::O(eps) = space.kind {
        if !admissible(phi, psi, eps) {
            return Err(Error::Invalid(format!("Ψ is not admissible for ε={eps}")));
        }
    }
    let c = cell(&space.base, phi, psi)?;
    let mut v = FormalVector::zero(space);
    for &m in &c.masks {
        if !space.contains(m) {
            return Err(Error::Invariant(format!("cell member {} outside the family", space.base.lambda(m))));
        }
        v.add_term(m, &Scalar::one());
    }
    Ok(v)
}

/// `R_c = Σ_{Ψ' ≤ Φ} (−1)^{|(Φ∖Ψ) ∩ Ψ'^*|} R_{Λ_{Ψ'}}`.
///
/// On the O side the sum is halved.
pub fn alternating_sum(space: &Space, phi: &Arrangement, psi: &[Pair]) -> Result<FormalVector> {
    let z = &space.base;
    let rest: Vec<Pair> = phi.pairs.iter().copied().filter(|p| !psi.contains(p)).collect();
    let rest_top = z.mask_of_pairs(&rest)? & z.top_mask();
    let mut v = FormalVector::zero(space);
    for q in subsets_of_pairs(phi) {
        let qm = z.mask_of_pairs(&q)?;
        let sign = Scalar::sign((rest_top & qm).count_ones());
        v.axpy(&sign, &space.r_mask(qm)?)?;
    }
    Ok(match space.kind {
        SpaceKind::Sp => v,
        SpaceKind::O(_) => v.scaled(&Scalar::ratio(1, 2)),
    })
}

/// `ω̂ = Σ_{(Λ,Λ') ∈ B^ε} ρ_Λ ⊗ ρ_{Λ'}`.
pub fn omega_hat(pair: &SpecialPair, eps: Sign) -> Result<FormalTensor> {
    let l = Space::new(&pair.z, SpaceKind::Sp)?;
    let r = Space::new(&pair.zp, SpaceKind::O(eps))?;
    let mut t = FormalTensor::zero(&l, &r);
    for (m, n) in pair.b_masks(eps) {
        t.add_term(m, n, &Scalar::one());
    }
    Ok(t)
}

/// `½ Σ_{(Σ,Σ') ∈ D} R_Σ ⊗ R_{Σ'}`, zero when `V^ε_{Z'} = 0`.
pub fn d_tensor(pair: &SpecialPair, eps: Sign) -> Result<FormalTensor> {
    let l = Space::new(&pair.z, SpaceKind::Sp)?;
    let r = Space::new(&pair.zp, SpaceKind::O(eps))?;
    let mut t = FormalTensor::zero(&l, &r);
    if r.members.is_empty() {
        return Ok(t);
    }
    let half = Scalar::ratio(1, 2);
    for (m, n) in pair.d_masks() {
        t.add_outer(&half, &l.r_mask(m)?, &r.r_mask(n)?)?;
    }
    Ok(t)
}

/// Outcome of comparing `ω̂^♯` with the `D` side.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionReport {
    /// `Z`.
    pub z: String,
    /// `Z'`.
    pub zp: String,
    /// `ε`.
    pub epsilon: String,
    /// Whether both sides agree.
    pub ok: bool,
    /// First differing coordinate with `ω̂^♯` and `D`-side coefficients.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String, Scalar, Scalar)>,
}

/// Checks `(Σ_{B^ε} ρ_Λ⊗ρ_{Λ'})^♯ = ½ Σ_D R_Σ⊗R_{Σ'}` exactly.
pub fn verify_projection(pair: &SpecialPair, eps: Sign) -> Result<ProjectionReport> {
    let l = Space::new(&pair.z, SpaceKind::Sp)?;
    let r = Space::new(&pair.zp, SpaceKind::O(eps))?;
    let lhs = sharp_tensor(&l, &r, &omega_hat(pair, eps)?)?;
    let rhs = d_tensor(pair, eps)?;
    let witness = lhs.first_difference(&rhs).map(|(k, a, b)| {
        let (x, y) = lhs.names(k);
        (x.to_string(), y.to_string(), a, b)
    });
    Ok(ProjectionReport {
        z: pair.z.to_string(),
        zp: pair.zp.to_string(),
        epsilon: eps.to_string(),
        ok: witness.is_none(),
        witness,
    })
}

/// One side of a derivative step: the space, its removed core entries, and `f̄`.
struct Transport<'a> {
    from: Space,
    to: Space,
    removed: Mask,
    map: &'a dyn Fn(Mask) -> Option<Mask>,
}

impl Transport<'_> {
    fn rho1(&self, m: Mask) -> Result<FormalVector> {
        let mut out = self.from.rho(m)?;
        if self.removed != 0 {
            out.axpy(&Scalar::one(), &self.from.rho(m | self.removed)?)?;
            out = out.scaled(&Scalar::sqrt2_pow(-1));
        }
        Ok(out)
    }

    fn r1(&self, n: Mask) -> Result<FormalVector> {
        let mut out = self.from.r_mask(n)?;
        if self.removed != 0 {
            out.axpy(&Scalar::one(), &self.from.r_mask(n | self.removed)?)?;
            out = out.scaled(&Scalar::sqrt2_pow(-1));
        }
        Ok(out)
    }

    fn domain(&self) -> Vec<Mask> {
        self.from.members.iter().copied().filter(|m| m & self.removed == 0).collect()
    }

    fn uniform_domain(&self) -> Vec<Mask> {
        self.from.uniform.iter().copied().filter(|m| m & self.removed == 0).collect()
    }

    fn image(&self, m: Mask) -> Result<Mask> {
        (self.map)(m).ok_or_else(|| Error::Invariant("mask meets a removed entry".to_string()))
    }

    fn apply(&self, v: &FormalVector) -> Result<FormalVector> {
        let mut rebuilt = FormalVector::zero(&self.from);
        let mut out = FormalVector::zero(&self.to);
        for m in self.domain() {
            let b = self.rho1(m)?;
            let c = v.inner(&b)?;
            if !c.is_zero() {
                rebuilt.axpy(&c, &b)?;
                out.add_term(self.image(m)?, &c);
            }
        }
        if &rebuilt != v {
            return Err(Error::Invariant("vector outside the transported subspace".to_string()));
        }
        Ok(out)
    }
}

fn apply_tensor(a: &Transport, b: &Transport, t: &FormalTensor) -> Result<FormalTensor> {
    let mut rebuilt = FormalTensor::zero(&a.from, &b.from);
    let mut out = FormalTensor::zero(&a.to, &b.to);
    let rights: Vec<(Mask, FormalVector)> =
        b.domain().into_iter().map(|n| Ok((n, b.rho1(n)?))).collect::<Result<_>>()?;
    for m in a.domain() {
        let u = a.rho1(m)?;
        for (n, w) in &rights {
            let c: Scalar = u
                .terms()
                .flat_map(|(x, cx)| w.terms().map(move |(y, cy)| (x, y, cx * cy)))
                .map(|(x, y, k)| &t.get(x, y) * &k)
                .sum();
            if !c.is_zero() {
                rebuilt.add_outer(&c, &u, w)?;
                out.add_term(a.image(m)?, b.image(*n)?, &c);
            }
        }
    }
    if rebuilt != *t {
        return Err(Error::Invariant("tensor outside the transported subspace".to_string()));
    }
    Ok(out)
}

fn expect_eq(what: &str, a: &FormalTensor, b: &FormalTensor) -> Result<()> {
    match a.first_difference(b) {
        None => Ok(()),
        Some((k, x, y)) => {
            let (s, t) = a.names(k);
            Err(Error::Invariant(format!("{what}: coefficient of {s} ⊗ {t} is {x}, expected {y}")))
        }
    }
}

/// Exact vector identities for one step with `ε = +`: the pairing transport
/// on both sides, `f̃(R^{(1)}_Σ) = R_{f̄(Σ)}`, the constant relating the
/// `B^+` and `D` sums to their restrictions, and their images under `f̃ ⊗ f̃'`.
pub fn verify_transport(pair: &SpecialPair, step: &DerivativeStep) -> Result<()> {
    let next = step.next_pair()?;
    let fz = |m| step.transport_mask(m);
    let fzp = |n| step.transport_mask_p(n);
    let a = Transport {
        from: Space::new(&pair.z, SpaceKind::Sp)?,
        to: Space::new(&next.z, SpaceKind::Sp)?,
        removed: step.removed(),
        map: &fz,
    };
    let b = Transport {
        from: Space::new(&pair.zp, SpaceKind::O(Sign::Plus))?,
        to: Space::new(&next.zp, SpaceKind::O(Sign::Plus))?,
        removed: step.removed_p(),
        map: &fzp,
    };
    for side in [&a, &b] {
        for n in side.uniform_domain() {
            let r1 = side.r1(n)?;
            let img = side.image(n)?;
            let rt = side.to.r_mask(img)?;
            if side.apply(&r1)? != rt {
                return Err(Error::Invariant(format!("f̃(R^(1)) ≠ R at {}", side.from.base.lambda(n))));
            }
            for m in side.domain() {
                let lhs = r1.inner(&side.rho1(m)?)?;
                let rhs = rt.inner(&side.to.rho(side.image(m)?)?)?;
                if lhs != rhs {
                    return Err(Error::Invariant(format!(
                        "pairing transport fails at {}, {}",
                        side.from.base.lambda(n),
                        side.from.base.lambda(m)
                    )));
                }
            }
        }
    }
    let c = Scalar::sqrt2_pow(step.c_exp as i32);
    let restricted = |m: Mask, n: Mask| m & a.removed == 0 && n & b.removed == 0;

    let mut rho_sum = FormalTensor::zero(&a.from, &b.from);
    let mut rho1_sum = FormalTensor::zero(&a.from, &b.from);
    for (m, n) in pair.b_masks(Sign::Plus) {
        rho_sum.add_term(m, n, &Scalar::one());
        if restricted(m, n) {
            rho1_sum.add_outer(&c, &a.rho1(m)?, &b.rho1(n)?)?;
        }
    }
    expect_eq("B^+ sum", &rho_sum, &rho1_sum)?;

    let mut r_sum = FormalTensor::zero(&a.from, &b.from);
    let mut r1_sum = FormalTensor::zero(&a.from, &b.from);
    for (m, n) in pair.d_masks() {
        r_sum.add_outer(&Scalar::one(), &a.from.r_mask(m)?, &b.from.r_mask(n)?)?;
        if restricted(m, n) {
            r1_sum.add_outer(&c, &a.r1(m)?, &b.r1(n)?)?;
        }
    }
    expect_eq("D sum", &r_sum, &r1_sum)?;

    let mut rho_next = FormalTensor::zero(&a.to, &b.to);
    for (m, n) in next.b_masks(Sign::Plus) {
        rho_next.add_term(m, n, &c);
    }
    expect_eq("transported B^+ sum", &apply_tensor(&a, &b, &rho_sum)?, &rho_next)?;

    let mut r_next = FormalTensor::zero(&a.to, &b.to);
    for (m, n) in next.d_masks() {
        r_next.add_outer(&c, &a.to.r_mask(m)?, &b.to.r_mask(n)?)?;
    }
    expect_eq("transported D sum", &apply_tensor(&a, &b, &r_sum)?, &r_next)
}
