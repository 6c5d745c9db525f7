//! Pairs `(U, φ)` with `U ≤ G×H` and `φ: U → A`, their star products,
//! conjugation, canonical class representatives, and the poset `M′(G)`.
//!
//! An element `(g, h)` of `G×H` is encoded as `g·|Ω_H| + h` where `Ω_H` is
//! the parent table of `H`. Products of parents are never materialized for
//! pairs; [`ProductView`] multiplies componentwise.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::fiber::{homs_generic, homs_to_fiber, FiberChar, FiberGroup};
use crate::group::{product_subgroup, subgroup_lists, subgroups_of, FiniteGroup, GroupOps, SubgroupRef};

/// Componentwise group law on `Ω_G × Ω_H`.
#[derive(Clone)]
pub struct ProductView {
    pub left: Arc<FiniteGroup>,
    pub right: Arc<FiniteGroup>,
    n: u32,
}

impl ProductView {
    pub fn new(left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>) -> Self {
        ProductView { left: left.clone(), right: right.clone(), n: right.order() as u32 }
    }
    #[inline]
    pub fn enc(&self, g: u32, h: u32) -> u32 {
        g * self.n + h
    }
    #[inline]
    pub fn dec(&self, e: u32) -> (u32, u32) {
        (e / self.n, e % self.n)
    }
}

impl GroupOps for ProductView {
    fn size(&self) -> usize {
        self.left.order() * self.right.order()
    }
    #[inline]
    fn op(&self, a: u32, b: u32) -> u32 {
        let (x, y) = self.dec(a);
        let (z, w) = self.dec(b);
        self.enc(self.left.mul(x, z), self.right.mul(y, w))
    }
    #[inline]
    fn invert(&self, a: u32) -> u32 {
        let (x, y) = self.dec(a);
        self.enc(self.left.inv(x), self.right.inv(y))
    }
}

/// Sorted subgroup elements plus aligned character values. Ordered by
/// `(|U|, elements, values)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PairKey {
    pub elems: Vec<u32>,
    pub vals: Vec<u32>,
}

impl Ord for PairKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.elems.len(), &self.elems, &self.vals).cmp(&(other.elems.len(), &other.elems, &other.vals))
    }
}
impl PartialOrd for PairKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiberedPair {
    pub left: SubgroupRef,
    pub right: SubgroupRef,
    pub fiber: FiberGroup,
    pub key: PairKey,
}

impl fmt::Debug for FiberedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.view();
        let els: Vec<(u32, u32)> = self.key.elems.iter().map(|&e| v.dec(e)).collect();
        write!(f, "[{:?}x{:?}: {:?} / {:?}]", self.left, self.right, els, self.key.vals)
    }
}

/// Canonical representative of a conjugation orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub pair: FiberedPair,
    pub orbit: usize,
}

impl FiberedPair {
    /// Checked constructor from `(g, h, value)` triples.
    pub fn new(
        left: &SubgroupRef,
        right: &SubgroupRef,
        fiber: &FiberGroup,
        triples: impl IntoIterator<Item = (u32, u32, u32)>,
    ) -> Result<Self> {
        let v = ProductView::new(&left.parent, &right.parent);
        let mut items: Vec<(u32, u32)> = Vec::new();
        for (g, h, a) in triples {
            if !left.contains(g) || !right.contains(h) {
                return Err(Error::NotSubgroup(format!("({g},{h}) outside {left:?}x{right:?}")));
            }
            items.push((v.enc(g, h), a % fiber.order() as u32));
        }
        items.sort_unstable();
        items.dedup();
        let p = Self::from_sorted(left, right, fiber, items);
        p.validate()?;
        Ok(p)
    }

    fn from_sorted(left: &SubgroupRef, right: &SubgroupRef, fiber: &FiberGroup, items: Vec<(u32, u32)>) -> Self {
        FiberedPair {
            left: left.clone(),
            right: right.clone(),
            fiber: fiber.clone(),
            key: PairKey { elems: items.iter().map(|x| x.0).collect(), vals: items.iter().map(|x| x.1).collect() },
        }
    }

    pub(crate) fn from_key(left: &SubgroupRef, right: &SubgroupRef, fiber: &FiberGroup, key: PairKey) -> Self {
        FiberedPair { left: left.clone(), right: right.clone(), fiber: fiber.clone(), key }
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.view();
        let els = &self.key.elems;
        if els.windows(2).any(|w| w[0] >= w[1]) || els.first() != Some(&0) {
            return Err(Error::NotSubgroup(format!("{self:?}")));
        }
        if self.key.vals[0] != 0 {
            return Err(Error::Invariant(format!("character not trivial at 1: {self:?}")));
        }
        for (i, &x) in els.iter().enumerate() {
            for (j, &y) in els.iter().enumerate() {
                match els.binary_search(&v.op(x, y)) {
                    Ok(k) => {
                        if self.key.vals[k] != self.fiber.add(self.key.vals[i], self.key.vals[j]) {
                            return Err(Error::Invariant(format!("not a homomorphism: {self:?}")));
                        }
                    }
                    Err(_) => return Err(Error::NotSubgroup(format!("{self:?}"))),
                }
            }
        }
        Ok(())
    }

    pub fn view(&self) -> ProductView {
        ProductView::new(&self.left.parent, &self.right.parent)
    }
    pub fn order(&self) -> usize {
        self.key.elems.len()
    }
    /// `(g, h, φ(g,h))` for every element of `U`.
    pub fn triples(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        let n = self.right.parent.order() as u32;
        self.key.elems.iter().zip(&self.key.vals).map(move |(&e, &a)| (e / n, e % n, a))
    }
    pub fn value(&self, g: u32, h: u32) -> Option<u32> {
        let e = g * self.right.parent.order() as u32 + h;
        self.key.elems.binary_search(&e).ok().map(|i| self.key.vals[i])
    }
    pub fn contains(&self, g: u32, h: u32) -> bool {
        self.value(g, h).is_some()
    }
    pub fn is_trivial_char(&self) -> bool {
        self.key.vals.iter().all(|&v| v == 0)
    }

    pub fn p1(&self) -> SubgroupRef {
        let set: BTreeSet<u32> = self.triples().map(|t| t.0).collect();
        SubgroupRef::from_sorted(&self.left.parent, set.into_iter().collect())
    }
    pub fn p2(&self) -> SubgroupRef {
        let set: BTreeSet<u32> = self.triples().map(|t| t.1).collect();
        SubgroupRef::from_sorted(&self.right.parent, set.into_iter().collect())
    }
    pub fn k1(&self) -> SubgroupRef {
        SubgroupRef::from_sorted(&self.left.parent, self.triples().filter(|t| t.1 == 0).map(|t| t.0).collect())
    }
    pub fn k2(&self) -> SubgroupRef {
        let mut v: Vec<u32> = self.triples().filter(|t| t.0 == 0).map(|t| t.1).collect();
        v.sort_unstable();
        SubgroupRef::from_sorted(&self.right.parent, v)
    }
    /// `φ₁(g) = φ(g, 1)` on `k₁(U)`.
    pub fn phi1(&self) -> FiberChar {
        let k = self.k1();
        let values = k.elements.iter().map(|&g| self.value(g, 0).unwrap()).collect();
        FiberChar { domain: k, values }
    }
    /// `φ₂(h) = φ(1, h)⁻¹` on `k₂(U)`.
    pub fn phi2(&self) -> FiberChar {
        let k = self.k2();
        let values = k.elements.iter().map(|&h| self.fiber.neg(self.value(0, h).unwrap())).collect();
        FiberChar { domain: k, values }
    }

    /// `^{(g,h)}(U, φ)`.
    pub fn conj(&self, g: u32, h: u32) -> FiberedPair {
        let (lp, rp) = (&self.left.parent, &self.right.parent);
        let n = rp.order() as u32;
        let mut items: Vec<(u32, u32)> = self
            .triples()
            .map(|(a, b, v)| (lp.conj(g, a) * n + rp.conj(h, b), v))
            .collect();
        items.sort_unstable();
        Self::from_sorted(&self.left, &self.right, &self.fiber, items)
    }

    fn canonical_uncached(&self) -> (FiberedPair, (u32, u32), usize) {
        let (lp, rp) = (&self.left.parent, &self.right.parent);
        let n = rp.order() as u32;
        let mut best: Option<(PairKey, (u32, u32))> = None;
        let mut stab = 0usize;
        let mut items: Vec<(u32, u32)> = Vec::with_capacity(self.order());
        for &g in &self.left.elements {
            for &h in &self.right.elements {
                items.clear();
                items.extend(self.triples().map(|(a, b, v)| (lp.conj(g, a) * n + rp.conj(h, b), v)));
                items.sort_unstable();
                let same = items.iter().map(|x| x.0).eq(self.key.elems.iter().copied())
                    && items.iter().map(|x| x.1).eq(self.key.vals.iter().copied());
                if same {
                    stab += 1;
                }
                let better = match &best {
                    None => true,
                    Some((k, _)) => cmp_items(&items, k) == Ordering::Less,
                };
                if better {
                    best = Some((
                        PairKey { elems: items.iter().map(|x| x.0).collect(), vals: items.iter().map(|x| x.1).collect() },
                        (g, h),
                    ));
                }
            }
        }
        let (key, c) = best.unwrap();
        let orbit = self.left.order() * self.right.order() / stab;
        (Self::from_key(&self.left, &self.right, &self.fiber, key), c, orbit)
    }

    /// Orbit-minimal representative under `G×H` conjugation, the least
    /// conjugator reaching it, and the orbit size.
    pub fn canonicalize(&self) -> (PairClass, (u32, u32)) {
        type Cache = Mutex<HashMap<FiberedPair, (FiberedPair, (u32, u32), usize)>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some((p, c, o)) = cache.lock().unwrap().get(self) {
            return (PairClass { pair: p.clone(), orbit: *o }, *c);
        }
        let (p, c, o) = self.canonical_uncached();
        let mut guard = cache.lock().unwrap();
        if guard.len() > 2_000_000 {
            guard.clear();
        }
        guard.insert(self.clone(), (p.clone(), c, o));
        (PairClass { pair: p, orbit: o }, c)
    }

    pub fn canonical(&self) -> FiberedPair {
        self.canonicalize().0.pair
    }

    /// `φ₂ = ψ₁` on `k₂(U) ∩ k₁(V)`.
    pub fn compatible(&self, q: &FiberedPair) -> bool {
        self.triples().filter(|t| t.0 == 0).all(|(_, h, a)| match q.value(h, 0) {
            // φ₂(h) = a⁻¹ must equal ψ₁(h) = b
            Some(b) => self.fiber.add(a, b) == 0,
            None => true,
        })
    }

    /// `(U∗V, φ∗ψ)`, or `None` when incompatible.
    pub fn star(&self, q: &FiberedPair) -> Result<Option<FiberedPair>> {
        if self.right != q.left {
            return Err(Error::GroupMismatch(format!("{:?} vs {:?}", self.right, q.left)));
        }
        if self.fiber != q.fiber {
            return Err(Error::FiberMismatch);
        }
        if !self.compatible(q) {
            return Ok(None);
        }
        let mid = self.right.parent.order();
        let nk = q.right.parent.order() as u32;
        let mut by_h: Vec<Vec<(u32, u32)>> = vec![Vec::new(); mid];
        for (h, k, b) in q.triples() {
            by_h[h as usize].push((k, b));
        }
        let mut items: Vec<(u32, u32)> = Vec::new();
        for (g, h, a) in self.triples() {
            for &(k, b) in &by_h[h as usize] {
                items.push((g * nk + k, self.fiber.add(a, b)));
            }
        }
        items.sort_unstable();
        items.dedup();
        debug_assert!(items.windows(2).all(|w| w[0].0 != w[1].0), "witness dependence");
        Ok(Some(Self::from_sorted(&self.left, &q.right, &self.fiber, items)))
    }

    /// Same subgroup viewed over other ambient groups (same parents).
    pub fn rebase(&self, left: &SubgroupRef, right: &SubgroupRef) -> Result<FiberedPair> {
        if !left.same_parent(&self.left) || !right.same_parent(&self.right) {
            return Err(Error::GroupMismatch("rebase across parents".into()));
        }
        if self.triples().any(|(g, h, _)| !left.contains(g) || !right.contains(h)) {
            return Err(Error::NotSubgroup(format!("{self:?} not inside {left:?}x{right:?}")));
        }
        Ok(Self::from_key(left, right, &self.fiber, self.key.clone()))
    }

    /// Stabilizer of the pair under `G×H` conjugation, as `(g, h)` list.
    pub fn stabilizer(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for &g in &self.left.elements {
            for &h in &self.right.elements {
                if self.conj(g, h).key == self.key {
                    out.push((g, h));
                }
            }
        }
        out
    }
}

fn cmp_items(items: &[(u32, u32)], key: &PairKey) -> Ordering {
    match items.len().cmp(&key.elems.len()) {
        Ordering::Equal => {}
        o => return o,
    }
    match items.iter().map(|x| x.0).cmp(key.elems.iter().copied()) {
        Ordering::Equal => items.iter().map(|x| x.1).cmp(key.vals.iter().copied()),
        o => o,
    }
}

/// `(Δ(K), χ∘diag)` viewed over `(G, H)`; `K` must lie in both.
pub fn diagonal_pair(k: &SubgroupRef, chi: Option<&FiberChar>, left: &SubgroupRef, right: &SubgroupRef, fiber: &FiberGroup) -> Result<FiberedPair> {
    FiberedPair::new(left, right, fiber, k.elements.iter().map(|&x| (x, x, chi.map_or(0, |c| c.value(x)))))
}

/// `(Δ(G), 1)` over `(G, G)`.
pub fn identity_pair(g: &SubgroupRef, fiber: &FiberGroup) -> FiberedPair {
    diagonal_pair(g, None, g, g, fiber).expect("diagonal")
}

/// Graph pair `{(f(h), h)}` of a map given on `source` elements.
pub fn graph_pair(
    left: &SubgroupRef,
    right: &SubgroupRef,
    fiber: &FiberGroup,
    points: impl IntoIterator<Item = (u32, u32)>,
) -> Result<FiberedPair> {
    FiberedPair::new(left, right, fiber, points.into_iter().map(|(g, h)| (g, h, 0)))
}

/// The pair `(K, κ)` over `(G, 1)` for `K ≤ G`, used for `B^A(G)`.
pub fn pair_of_char(chi: &FiberChar, g: &SubgroupRef, one: &SubgroupRef, fiber: &FiberGroup) -> FiberedPair {
    FiberedPair::new(g, one, fiber, chi.domain.elements.iter().zip(&chi.values).map(|(&x, &a)| (x, 0, a)))
        .expect("subgroup pair")
}

/// The character on `p₁(U)` carried by a pair over `(G, 1)`.
pub fn char_of_pair(p: &FiberedPair) -> FiberChar {
    let n = p.right.parent.order() as u32;
    let mut items: Vec<(u32, u32)> = p.triples().map(|(g, _, a)| (g, a)).collect();
    items.sort_unstable();
    items.dedup_by_key(|x| x.0);
    debug_assert!(n == 1 || p.k2().is_trivial());
    FiberChar {
        domain: SubgroupRef { parent: p.left.parent.clone(), elements: items.iter().map(|x| x.0).collect() },
        values: items.iter().map(|x| x.1).collect(),
    }
}

/// `(U × V, φ × ψ)` over `(G'×H', G×H)` for `U` over `(G', G)` and `V`
/// over `(H', H)`.
pub fn pair_cross(p: &FiberedPair, q: &FiberedPair) -> Result<FiberedPair> {
    if p.fiber != q.fiber {
        return Err(Error::FiberMismatch);
    }
    let left = product_subgroup(&p.left, &q.left);
    let right = product_subgroup(&p.right, &q.right);
    let (nl, nr) = (q.left.parent.order() as u32, q.right.parent.order() as u32);
    let mut t = Vec::with_capacity(p.order() * q.order());
    for (g1, g2, a) in p.triples() {
        for (h1, h2, b) in q.triples() {
            t.push((g1 * nl + h1, g2 * nr + h2, p.fiber.add(a, b)));
        }
    }
    FiberedPair::new(&left, &right, &p.fiber, t)
}

/// `Iso(f)`: the graph `{(f(x), x)}` over `(target, source)`.
pub fn iso_pair(
    target: &SubgroupRef,
    source: &SubgroupRef,
    fiber: &FiberGroup,
    f: impl Fn(u32) -> u32,
) -> Result<FiberedPair> {
    graph_pair(target, source, fiber, source.elements.iter().map(|&x| (f(x), x)))
}

/// Every `(U, φ)` with `U ≤ G×H`.
pub fn all_pairs(g: &SubgroupRef, h: &SubgroupRef, a: &FiberGroup) -> Result<Vec<FiberedPair>> {
    let v = ProductView::new(&g.parent, &h.parent);
    let mut within: Vec<u32> = Vec::with_capacity(g.order() * h.order());
    for &x in &g.elements {
        for &y in &h.elements {
            within.push(v.enc(x, y));
        }
    }
    within.sort_unstable();
    let mut out = Vec::new();
    for u in subgroup_lists(&v, &within)? {
        for vals in homs_generic(&v, &u, a) {
            out.push(FiberedPair::from_key(g, h, a, PairKey { elems: u.clone(), vals }));
        }
    }
    Ok(out)
}

/// One canonical representative per `G×H`-conjugation orbit, sorted.
pub fn pair_classes(g: &SubgroupRef, h: &SubgroupRef, a: &FiberGroup) -> Result<Arc<Vec<PairClass>>> {
    type Key = (SubgroupRef, SubgroupRef, FiberGroup);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<PairClass>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (g.clone(), h.clone(), a.clone());
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let mut seen: HashMap<PairKey, usize> = HashMap::new();
    for p in all_pairs(g, h, a)? {
        let (c, _) = p.canonicalize();
        seen.insert(c.pair.key, c.orbit);
    }
    let mut out: Vec<PairClass> = seen
        .into_iter()
        .map(|(k, orbit)| PairClass { pair: FiberedPair::from_key(g, h, a, k), orbit })
        .collect();
    out.sort_by(|x, y| x.pair.key.cmp(&y.pair.key));
    let out = Arc::new(out);
    cache.lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// The poset of subgroup-character pairs `(K, λ)` of `G`, with its Möbius
/// function.
pub struct MPrimePoset {
    pub group: SubgroupRef,
    pub fiber: FiberGroup,
    pub nodes: Vec<FiberChar>,
    index: HashMap<FiberChar, usize>,
    leq: Vec<Vec<bool>>,
    mu: Vec<Vec<i64>>,
}

impl MPrimePoset {
    /// Poset over the given subgroups of `g` (all subgroups when `None`).
    pub fn new(g: &SubgroupRef, a: &FiberGroup, subs: Option<Vec<SubgroupRef>>) -> Result<Self> {
        let subs = match subs {
            Some(s) => s,
            None => subgroups_of(g)?,
        };
        let mut nodes = Vec::new();
        for k in &subs {
            nodes.extend(homs_to_fiber(k, a));
        }
        nodes.sort_by(|x, y| {
            (x.domain.order(), &x.domain.elements, &x.values).cmp(&(y.domain.order(), &y.domain.elements, &y.values))
        });
        let n = nodes.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (l, k) = (&nodes[i], &nodes[j]);
                leq[i][j] = l.domain.is_subgroup_of(&k.domain)
                    && l.domain.elements.iter().zip(&l.values).all(|(&x, &v)| k.value(x) == v);
            }
        }
        let mut mu = vec![vec![0i64; n]; n];
        for x in 0..n {
            mu[x][x] = 1;
            for z in x + 1..n {
                if !leq[x][z] {
                    continue;
                }
                let s: i64 = (x..z).filter(|&y| leq[x][y] && leq[y][z]).map(|y| mu[x][y]).sum();
                mu[x][z] = -s;
            }
        }
        let index = nodes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Ok(MPrimePoset { group: g.clone(), fiber: a.clone(), nodes, index, leq, mu })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn index_of(&self, c: &FiberChar) -> Option<usize> {
        self.index.get(c).copied()
    }
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }
    pub fn moebius(&self, i: usize, j: usize) -> Result<i64> {
        if !self.leq[i][j] {
            return Err(Error::Precondition(format!("nodes {i} and {j} not comparable")));
        }
        Ok(self.mu[i][j])
    }

    /// Least `g` and orbit representative with `^g node = rep`.
    pub fn canonical_node(&self, c: &FiberChar) -> (usize, u32) {
        let mut best: Option<(usize, u32)> = None;
        for &g in &self.group.elements {
            let i = self.index[&c.conjugate(g)];
            if best.map_or(true, |(b, _)| i < b) {
                best = Some((i, g));
            }
        }
        best.unwrap()
    }

    /// Indices of the orbit representatives (each the least in its orbit).
    pub fn orbit_reps(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.canonical_node(&self.nodes[i]).0 == i).collect()
    }

    /// Elements of `G` fixing node `i`.
    pub fn stabilizer(&self, i: usize) -> Vec<u32> {
        self.group.elements.iter().copied().filter(|&g| self.nodes[i].conjugate(g) == self.nodes[i]).collect()
    }
}

pub fn mprime(g: &SubgroupRef, a: &FiberGroup) -> Result<MPrimePoset> {
    MPrimePoset::new(g, a, None)
}

/// Shared `M'(G)` over all subgroups.
pub fn mprime_cached(g: &SubgroupRef, a: &FiberGroup) -> Result<Arc<MPrimePoset>> {
    type Cache = Mutex<HashMap<(SubgroupRef, FiberGroup), Arc<MPrimePoset>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (g.clone(), a.clone());
    if let Some(p) = cache.lock().unwrap().get(&key) {
        return Ok(p.clone());
    }
    let p = Arc::new(mprime(g, a)?);
    cache.lock().unwrap().insert(key, p.clone());
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, generated, permutations, GroupHandle};

    fn z2() -> FiberGroup {
        FiberGroup::parse("2").unwrap()
    }
    fn perm(p: [usize; 3]) -> u32 {
        permutations(3).iter().position(|q| q[..] == p[..]).unwrap() as u32
    }

    #[test]
    fn pair_counts() {
        let c2 = build_group("C2").unwrap().whole();
        let one = crate::group::trivial_group().whole();
        assert_eq!(all_pairs(&c2, &one, &z2()).unwrap().len(), 3);
        assert_eq!(pair_classes(&c2, &one, &z2()).unwrap().len(), 3);
        assert_eq!(all_pairs(&c2, &c2, &z2()).unwrap().len(), 11);
        assert_eq!(pair_classes(&c2, &c2, &z2()).unwrap().len(), 11);
        let s3 = build_group("S3").unwrap().whole();
        let n_sub = crate::group::subgroup_lists(&ProductView::new(&s3.parent, &s3.parent), &(0..36).collect::<Vec<_>>())
            .unwrap()
            .len();
        assert_eq!(all_pairs(&s3, &s3, &FiberGroup::trivial()).unwrap().len(), n_sub);
        let total: usize = pair_classes(&s3, &s3, &z2()).unwrap().iter().map(|c| c.orbit).sum();
        assert_eq!(total, all_pairs(&s3, &s3, &z2()).unwrap().len());
    }

    #[test]
    fn star_examples() {
        let s3g = build_group("S3").unwrap();
        let g = s3g.whole();
        let id = identity_pair(&g, &z2());
        assert_eq!(id.star(&id).unwrap().unwrap(), id);
        let t = generated(&s3g, &[perm([1, 0, 2])]);
        let sign = homs_to_fiber(&t, &z2())[1].clone();
        let d = diagonal_pair(&t, Some(&sign), &g, &g, &z2()).unwrap();
        let dd = d.star(&d).unwrap().unwrap();
        assert_eq!(dd, diagonal_pair(&t, None, &g, &g, &z2()).unwrap());
    }

    #[test]
    fn anatomy() {
        let v = build_group("C2xC2").unwrap().whole();
        let id = identity_pair(&v, &z2());
        assert!(id.k1().is_trivial() && id.k2().is_trivial());
        assert_eq!(id.p1(), v);
        let full = FiberedPair::new(&v, &v, &z2(), (0..4).flat_map(|a| (0..4).map(move |b| (a, b, 0)))).unwrap();
        assert_eq!(full.k1(), v);
        assert_eq!(full.k2(), v);
    }

    #[test]
    fn transposition_diagonals_share_a_class() {
        let s3g = build_group("S3").unwrap();
        let g = s3g.whole();
        let reps: Vec<FiberedPair> = [[1, 0, 2], [2, 1, 0], [0, 2, 1]]
            .iter()
            .map(|p| diagonal_pair(&generated(&s3g, &[perm(*p)]), None, &g, &g, &z2()).unwrap().canonical())
            .collect();
        assert_eq!(reps[0], reps[1]);
        assert_eq!(reps[1], reps[2]);
    }

    #[test]
    fn moebius_examples() {
        let c2 = build_group("C2").unwrap().whole();
        let p = mprime(&c2, &z2()).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.moebius(0, 0).unwrap(), 1);
        assert_eq!(p.moebius(0, 1).unwrap(), -1);
        assert!(p.moebius(1, 2).is_err());
        let v = build_group("C2xC2").unwrap().whole();
        let q = mprime(&v, &FiberGroup::trivial()).unwrap();
        assert_eq!(q.moebius(0, q.len() - 1).unwrap(), 2);
    }
}
