//! `B^A(G, H)`: free modules on pair classes, the Mackey product, elementary
//! bisets and the butterfly factorization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{FiberChar, FiberGroup};
use crate::group::{quotient, FiniteGroup, GroupHandle, GroupMap, SubgroupRef};
use crate::pairs::{diagonal_pair, identity_pair, FiberedPair, PairKey};

pub type Coeff = Rational64;

/// Coefficient ring flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Z,
    Q,
}

impl Ring {
    pub fn parse(s: &str) -> Result<Ring> {
        match s {
            "z" | "Z" => Ok(Ring::Z),
            "q" | "Q" => Ok(Ring::Q),
            _ => Err(Error::Parse(format!("ring must be z or q, got '{s}'"))),
        }
    }
    pub fn admits(self, c: Coeff) -> bool {
        self == Ring::Q || c.is_integer()
    }
}

/// A linear combination of pair classes over `(left, right)`.
#[derive(Clone, PartialEq, Eq)]
pub struct BurnsideElt {
    pub left: SubgroupRef,
    pub right: SubgroupRef,
    pub fiber: FiberGroup,
    pub ring: Ring,
    pub coeffs: BTreeMap<PairKey, Coeff>,
}

impl fmt::Debug for BurnsideElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({:?},{:?})", self.left, self.right)?;
        for (p, c) in self.terms() {
            write!(f, " + {c}{p:?}")?;
        }
        Ok(())
    }
}

impl BurnsideElt {
    pub fn zero(left: &SubgroupRef, right: &SubgroupRef, fiber: &FiberGroup, ring: Ring) -> Self {
        BurnsideElt { left: left.clone(), right: right.clone(), fiber: fiber.clone(), ring, coeffs: BTreeMap::new() }
    }

    /// `1·[p]`.
    pub fn basis(p: &FiberedPair, ring: Ring) -> Self {
        let mut x = Self::zero(&p.left, &p.right, &p.fiber, ring);
        x.add_pair(p, Coeff::one());
        x
    }

    /// `[(Δ(G), 1)]`.
    pub fn identity(g: &SubgroupRef, fiber: &FiberGroup, ring: Ring) -> Self {
        Self::basis(&identity_pair(g, fiber), ring)
    }

    /// Add `c·[p]` after canonicalizing `p`.
    pub fn add_pair(&mut self, p: &FiberedPair, c: Coeff) {
        debug_assert!(p.left == self.left && p.right == self.right);
        self.add_key(p.canonical().key, c);
    }

    /// Add to an already-canonical key.
    pub(crate) fn add_key(&mut self, k: PairKey, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (FiberedPair, Coeff)> + '_ {
        self.coeffs.iter().map(|(k, &c)| (FiberedPair::from_key(&self.left, &self.right, &self.fiber, k.clone()), c))
    }

    fn same_shape(&self, o: &BurnsideElt) -> Result<()> {
        if self.left != o.left || self.right != o.right {
            return Err(Error::GroupMismatch("Burnside elements over different groups".into()));
        }
        if self.fiber != o.fiber {
            return Err(Error::FiberMismatch);
        }
        if self.ring != o.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &BurnsideElt) -> Result<BurnsideElt> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for (k, &c) in &o.coeffs {
            out.add_key(k.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Coeff) -> Result<BurnsideElt> {
        if !self.ring.admits(c) {
            return Err(Error::RingMismatch);
        }
        let mut out = Self::zero(&self.left, &self.right, &self.fiber, self.ring);
        for (k, &v) in &self.coeffs {
            out.add_key(k.clone(), v * c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &BurnsideElt) -> Result<BurnsideElt> {
        self.add(&o.scale(-Coeff::one())?)
    }

    pub fn coeff(&self, p: &FiberedPair) -> Coeff {
        self.coeffs.get(&p.canonical().key).copied().unwrap_or_else(Coeff::zero)
    }

    /// Same element over the rationals.
    pub fn to_rational(&self) -> BurnsideElt {
        let mut out = self.clone();
        out.ring = Ring::Q;
        out
    }
}

/// Uncanonicalized terms of `[U,φ] ⊗ [V,ψ]`, choosing one element from each
/// double coset `p₂(U) t p₁(V)` via `pick`.
pub fn transitive_terms_with(
    p: &FiberedPair,
    q: &FiberedPair,
    pick: &mut dyn FnMut(&[u32]) -> u32,
) -> Result<Vec<FiberedPair>> {
    if p.right != q.left {
        return Err(Error::GroupMismatch(format!("{:?} vs {:?}", p.right, q.left)));
    }
    let h = &p.right;
    let mut out = Vec::new();
    for cls in h.double_coset_partition(&p.p2(), &q.p1()) {
        let t = pick(&cls);
        let qt = q.conj(t, 0);
        if let Some(r) = p.star(&qt)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// Canonical keys of `[U,φ] ⊗ [V,ψ]` with least double-coset
/// representatives.
pub fn transitive_product(p: &FiberedPair, q: &FiberedPair) -> Result<Arc<Vec<PairKey>>> {
    type Cache = Mutex<HashMap<(FiberedPair, FiberedPair), Arc<Vec<PairKey>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (p.clone(), q.clone());
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let terms = transitive_terms_with(p, q, &mut |c| c[0])?;
    let v = Arc::new(terms.iter().map(|r| r.canonical().key).collect::<Vec<_>>());
    let mut guard = cache.lock().unwrap();
    if guard.len() > 1_000_000 {
        guard.clear();
    }
    guard.insert(key, v.clone());
    Ok(v)
}

/// `x ⊗ y` for `x` over `(G,H)` and `y` over `(H,K)`.
pub fn mackey_product(x: &BurnsideElt, y: &BurnsideElt) -> Result<BurnsideElt> {
    if x.right != y.left {
        return Err(Error::GroupMismatch(format!("middle groups {:?} vs {:?}", x.right, y.left)));
    }
    if x.fiber != y.fiber {
        return Err(Error::FiberMismatch);
    }
    if x.ring != y.ring {
        return Err(Error::RingMismatch);
    }
    let mut out = BurnsideElt::zero(&x.left, &y.right, &x.fiber, x.ring);
    for (p, a) in x.terms() {
        for (q, b) in y.terms() {
            for k in transitive_product(&p, &q)?.iter() {
                out.add_key(k.clone(), a * b);
            }
        }
    }
    Ok(out)
}

/// `x ⊗ y` with double-coset representatives chosen by `pick`.
pub fn mackey_product_with(
    x: &BurnsideElt,
    y: &BurnsideElt,
    pick: &mut dyn FnMut(&[u32]) -> u32,
) -> Result<BurnsideElt> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch);
    }
    let mut out = BurnsideElt::zero(&x.left, &y.right, &x.fiber, x.ring);
    for (p, a) in x.terms() {
        for (q, b) in y.terms() {
            for r in transitive_terms_with(&p, &q, pick)? {
                out.add_pair(&r, a * b);
            }
        }
    }
    Ok(out)
}

/// Left-to-right product of a composable chain.
pub fn mackey_chain(xs: &[BurnsideElt]) -> Result<BurnsideElt> {
    let mut it = xs.iter();
    let first = it.next().ok_or_else(|| Error::Precondition("empty chain".into()))?.clone();
    it.try_fold(first, |acc, x| mackey_product(&acc, x))
}

/// The six elementary bisets.
#[derive(Clone, Debug)]
pub enum ElementaryKind {
    /// `Res^G_K`, over `(K, G)`.
    Res { g: SubgroupRef, k: SubgroupRef },
    /// `Ind^G_K`, over `(G, K)`.
    Ind { g: SubgroupRef, k: SubgroupRef },
    /// `Inf^G_{G/N}`, over `(G, G/N)`.
    Inf { g: SubgroupRef, n: SubgroupRef },
    /// `Def^G_{G/N}`, over `(G/N, G)`.
    Def { g: SubgroupRef, n: SubgroupRef },
    /// `iso(f)` for an isomorphism `f: H → G`, over `(G, H)`.
    Iso(GroupMap),
    /// `(Δ(G), φ∘diag)`, over `(G, G)`.
    Twist { g: SubgroupRef, phi: FiberChar },
}

/// The pair underlying an elementary biset.
pub fn elementary_pair(kind: &ElementaryKind, fiber: &FiberGroup) -> Result<FiberedPair> {
    match kind {
        ElementaryKind::Res { g, k } => {
            if !k.is_subgroup_of(g) {
                return Err(Error::NotSubgroup(format!("{k:?} not in {g:?}")));
            }
            diagonal_pair(k, None, k, g, fiber)
        }
        ElementaryKind::Ind { g, k } => {
            if !k.is_subgroup_of(g) {
                return Err(Error::NotSubgroup(format!("{k:?} not in {g:?}")));
            }
            diagonal_pair(k, None, g, k, fiber)
        }
        ElementaryKind::Inf { g, n } => {
            let (q, pi) = quotient(g, n)?;
            FiberedPair::new(g, &q.whole(), fiber, g.elements.iter().zip(&pi.images).map(|(&x, &y)| (x, y, 0)))
        }
        ElementaryKind::Def { g, n } => {
            let (q, pi) = quotient(g, n)?;
            FiberedPair::new(&q.whole(), g, fiber, g.elements.iter().zip(&pi.images).map(|(&x, &y)| (y, x, 0)))
        }
        ElementaryKind::Iso(f) => {
            if !f.is_homomorphism() || !f.is_bijective() {
                return Err(Error::Precondition("iso needs a bijective homomorphism".into()));
            }
            FiberedPair::new(&f.target, &f.source, fiber, f.source.elements.iter().zip(&f.images).map(|(&h, &g)| (g, h, 0)))
        }
        ElementaryKind::Twist { g, phi } => {
            if phi.domain != *g || !phi.is_homomorphism(fiber) {
                return Err(Error::Precondition("twist needs a character of G".into()));
            }
            diagonal_pair(g, Some(phi), g, g, fiber)
        }
    }
}

pub fn elementary(kind: &ElementaryKind, fiber: &FiberGroup, ring: Ring) -> Result<BurnsideElt> {
    Ok(BurnsideElt::basis(&elementary_pair(kind, fiber)?, ring))
}

/// Quotient group plus its projection, as used by Inf/Def.
pub fn quotient_of(g: &SubgroupRef, n: &SubgroupRef) -> Result<(Arc<FiniteGroup>, GroupMap)> {
    quotient(g, n)
}

/// `[Ind^G_P, Inf^P_{P/K}, [(Ū, φ̄)], Def^Q_{Q/L}, Res^H_Q]` with
/// `P = p₁(U)`, `Q = p₂(U)`, `K = ker φ₁`, `L = ker φ₂`.
pub fn butterfly(p: &FiberedPair, ring: Ring) -> Result<Vec<BurnsideElt>> {
    let a = &p.fiber;
    let (pp, qq) = (p.p1(), p.p2());
    let k = p.phi1().kernel();
    let l = p.phi2().kernel();
    let (pk, pi_k) = quotient(&pp, &k)?;
    let (ql, pi_l) = quotient(&qq, &l)?;
    let bar: Vec<(u32, u32, u32)> = p
        .triples()
        .map(|(g, h, v)| (pi_k.apply(g).unwrap(), pi_l.apply(h).unwrap(), v))
        .collect();
    let middle = FiberedPair::new(&pk.whole(), &ql.whole(), a, bar)?;
    Ok(vec![
        elementary(&ElementaryKind::Ind { g: p.left.clone(), k: pp.clone() }, a, ring)?,
        elementary(&ElementaryKind::Inf { g: pp.clone(), n: k }, a, ring)?,
        BurnsideElt::basis(&middle, ring),
        elementary(&ElementaryKind::Def { g: qq.clone(), n: l }, a, ring)?,
        elementary(&ElementaryKind::Res { g: p.right.clone(), k: qq }, a, ring)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::homs_to_fiber;
    use crate::group::{build_group, generated, permutations, subgroups};
    use crate::pairs::pair_classes;

    fn z2() -> FiberGroup {
        FiberGroup::parse("2").unwrap()
    }
    fn perm(p: [usize; 3]) -> u32 {
        permutations(3).iter().position(|q| q[..] == p[..]).unwrap() as u32
    }

    #[test]
    fn identity_law_on_basis() {
        let g = build_group("S3").unwrap().whole();
        let id = BurnsideElt::identity(&g, &z2(), Ring::Z);
        for c in pair_classes(&g, &g, &z2()).unwrap().iter() {
            let x = BurnsideElt::basis(&c.pair, Ring::Z);
            assert_eq!(mackey_product(&id, &x).unwrap(), x);
            assert_eq!(mackey_product(&x, &id).unwrap(), x);
        }
    }

    #[test]
    fn res_ind_s3() {
        let s3 = build_group("S3").unwrap();
        let g = s3.whole();
        let c2 = generated(&s3, &[perm([1, 0, 2])]);
        let res = elementary(&ElementaryKind::Res { g: g.clone(), k: c2.clone() }, &z2(), Ring::Z).unwrap();
        let ind = elementary(&ElementaryKind::Ind { g: g.clone(), k: c2.clone() }, &z2(), Ring::Z).unwrap();
        let x = mackey_product(&res, &ind).unwrap();
        let mut want = BurnsideElt::identity(&c2, &z2(), Ring::Z);
        want.add_pair(&FiberedPair::new(&c2, &c2, &z2(), [(0, 0, 0)]).unwrap(), Coeff::one());
        assert_eq!(x, want);
    }

    #[test]
    fn def_inf_is_identity() {
        let s3 = build_group("S3").unwrap();
        let g = s3.whole();
        for n in subgroups(&s3).unwrap().into_iter().filter(|n| n.is_normal_in(&g)) {
            let def = elementary(&ElementaryKind::Def { g: g.clone(), n: n.clone() }, &z2(), Ring::Z).unwrap();
            let inf = elementary(&ElementaryKind::Inf { g: g.clone(), n: n.clone() }, &z2(), Ring::Z).unwrap();
            let x = mackey_product(&def, &inf).unwrap();
            assert_eq!(x, BurnsideElt::identity(&def.left, &z2(), Ring::Z));
        }
    }

    #[test]
    fn twist_squares_to_identity() {
        let c2 = build_group("C2").unwrap().whole();
        let sigma = homs_to_fiber(&c2, &z2())[1].clone();
        let tw = elementary(&ElementaryKind::Twist { g: c2.clone(), phi: sigma }, &z2(), Ring::Z).unwrap();
        assert_eq!(mackey_product(&tw, &tw).unwrap(), BurnsideElt::identity(&c2, &z2(), Ring::Z));
    }

    #[test]
    fn butterfly_of_identity_and_induction() {
        let s3 = build_group("S3").unwrap();
        let g = s3.whole();
        let id = identity_pair(&g, &z2());
        let f = butterfly(&id, Ring::Z).unwrap();
        assert_eq!(mackey_chain(&f).unwrap(), BurnsideElt::basis(&id, Ring::Z));
        let c2 = generated(&s3, &[perm([1, 0, 2])]);
        let ind = elementary_pair(&ElementaryKind::Ind { g: g.clone(), k: c2 }, &z2()).unwrap();
        let f = butterfly(&ind, Ring::Z).unwrap();
        assert_eq!(mackey_chain(&f).unwrap(), BurnsideElt::basis(&ind, Ring::Z));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let g = build_group("C2").unwrap().whole();
        let x = BurnsideElt::identity(&g, &z2(), Ring::Z);
        let y = BurnsideElt::identity(&g, &z2(), Ring::Q);
        assert_eq!(mackey_product(&x, &y), Err(Error::RingMismatch));
        assert!(x.scale(Coeff::new(1, 2)).is_err());
    }
}
