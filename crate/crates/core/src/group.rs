//! Finite groups as explicit multiplication tables.
//!
//! Every group is a closed table; subgroups are sorted element lists inside a
//! parent group. Whenever a representative has to be chosen (cosets, double
//! cosets, orbits) the least element index wins.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default bound for subgroup enumeration.
pub const SUBGROUP_BOUND: usize = 64;

#[derive(Clone, Debug)]
pub struct ProductMeta {
    pub left: Arc<FiniteGroup>,
    pub right: Arc<FiniteGroup>,
}

/// A group given by its Cayley table. Element `0` is always the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    label: String,
    product_meta: Option<ProductMeta>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Build from a raw table, checking the group axioms.
    pub fn from_table(label: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self> {
        let label = label.into();
        if order == 0 || table.len() != order * order {
            return Err(Error::InvalidGroup(format!("{label}: table shape")));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::InvalidGroup(format!("{label}: entry out of range")));
        }
        for i in 0..order {
            if table[i] != i as u32 || table[i * order] != i as u32 {
                return Err(Error::InvalidGroup(format!("{label}: element 0 is not neutral")));
            }
        }
        let mut inverses = vec![u32::MAX; order];
        for i in 0..order {
            for j in 0..order {
                if table[i * order + j] == 0 {
                    inverses[i] = j as u32;
                    break;
                }
            }
            let j = inverses[i];
            if j == u32::MAX || table[j as usize * order + i] != 0 {
                return Err(Error::InvalidGroup(format!("{label}: element {i} has no inverse")));
            }
        }
        let g = FiniteGroup { order, table, inverses, label, product_meta: None };
        if order <= SUBGROUP_BOUND {
            g.check_associative()?;
        }
        Ok(g)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let ab = self.mul(a, b);
                for c in 0..n as u32 {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "{}: not associative at ({a},{b},{c})",
                            self.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn identity(&self) -> u32 {
        0
    }
    pub fn product_meta(&self) -> Option<&ProductMeta> {
        self.product_meta.as_ref()
    }
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }
    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order as u32;
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<u32> {
        let n = self.order as u32;
        (0..n).filter(|&a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Group as an `Arc` plus helpers that need the shared handle.
pub trait GroupHandle {
    fn whole(&self) -> SubgroupRef;
    fn trivial_subgroup(&self) -> SubgroupRef;
}

impl GroupHandle for Arc<FiniteGroup> {
    fn whole(&self) -> SubgroupRef {
        SubgroupRef { parent: self.clone(), elements: (0..self.order as u32).collect() }
    }
    fn trivial_subgroup(&self) -> SubgroupRef {
        SubgroupRef { parent: self.clone(), elements: vec![0] }
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::Parse("cyclic group of order 0".into()));
    }
    let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
    FiniteGroup::from_table(format!("C{n}"), n, table)
}

/// Dihedral group of order `2n`; `r^i` is `i`, `r^i s` is `n + i`.
pub fn dihedral(order: usize) -> Result<FiniteGroup> {
    if order < 2 || order % 2 != 0 {
        return Err(Error::Parse(format!("dihedral order {order} must be even")));
    }
    let n = order / 2;
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        for y in 0..order {
            let (i, s) = (x % n, x / n);
            let (j, t) = (y % n, y / n);
            let k = if s == 0 { (i + j) % n } else { (i + n - j) % n };
            table[x * order + y] = (k + n * (s ^ t)) as u32;
        }
    }
    FiniteGroup::from_table(format!("D{order}"), order, table)
}

/// Symmetric group on `n ≤ 4` points, permutations in lexicographic order,
/// product `(pq)(i) = p(q(i))`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 4 {
        return Err(Error::Unsupported(format!("S{n}: only n in 1..=4")));
    }
    let perms = permutations(n);
    let order = perms.len();
    let mut table = vec![0u32; order * order];
    for (a, p) in perms.iter().enumerate() {
        for (b, q) in perms.iter().enumerate() {
            let r: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
            table[a * order + b] = perms.iter().position(|x| *x == r).unwrap() as u32;
        }
    }
    FiniteGroup::from_table(format!("S{n}"), order, table)
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Quaternion group; index `2u + s` is `(-1)^s` times unit `u ∈ {1,i,j,k}`.
pub fn quaternion8() -> Result<FiniteGroup> {
    // unit products: (unit, sign)
    const M: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let mut table = vec![0u32; 64];
    for x in 0..8 {
        for y in 0..8 {
            let (u, s) = (x / 2, x % 2);
            let (v, t) = (y / 2, y % 2);
            let (w, r) = M[u][v];
            table[x * 8 + y] = (2 * w + (s ^ t ^ r)) as u32;
        }
    }
    FiniteGroup::from_table("Q8", 8, table)
}

fn product_registry() -> &'static Mutex<Vec<(Arc<FiniteGroup>, Arc<FiniteGroup>, Arc<FiniteGroup>)>> {
    static REG: OnceLock<Mutex<Vec<(Arc<FiniteGroup>, Arc<FiniteGroup>, Arc<FiniteGroup>)>>> =
        OnceLock::new();
    REG.get_or_init(|| Mutex::new(Vec::new()))
}

/// `G × H` with encoding `e = g·|H| + h`. Results are memoized so repeated
/// products share one table.
pub fn direct_product(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>) -> Arc<FiniteGroup> {
    let mut reg = product_registry().lock().unwrap();
    if let Some((_, _, p)) = reg.iter().find(|(a, b, _)| a == g && b == h) {
        return p.clone();
    }
    let (m, n) = (g.order, h.order);
    let order = m * n;
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let (a, b) = ((x / n) as u32, (x % n) as u32);
        for y in 0..order {
            let (c, d) = ((y / n) as u32, (y % n) as u32);
            table[x * order + y] = g.mul(a, c) * n as u32 + h.mul(b, d);
        }
    }
    let inverses = (0..order)
        .map(|x| g.inv((x / n) as u32) * n as u32 + h.inv((x % n) as u32))
        .collect();
    let label = match (g.product_meta.is_some(), h.product_meta.is_some()) {
        (_, true) => format!("{}x({})", g.label, h.label),
        _ => format!("{}x{}", g.label, h.label),
    };
    let p = Arc::new(FiniteGroup {
        order,
        table,
        inverses,
        label,
        product_meta: Some(ProductMeta { left: g.clone(), right: h.clone() }),
    });
    reg.push((g.clone(), h.clone(), p.clone()));
    p
}

pub fn trivial_group() -> Arc<FiniteGroup> {
    static ONE: OnceLock<Arc<FiniteGroup>> = OnceLock::new();
    ONE.get_or_init(|| Arc::new(cyclic(1).unwrap())).clone()
}

fn parse_factor(tok: &str) -> Result<FiniteGroup> {
    let bad = || Error::Parse(format!("bad group factor '{tok}'"));
    if tok == "Q8" {
        return quaternion8();
    }
    let (head, digits) = tok.split_at(1);
    let n: usize = digits.parse().map_err(|_| bad())?;
    match head {
        "C" => cyclic(n),
        "D" => dihedral(n),
        "S" => symmetric(n),
        _ => Err(bad()),
    }
}

/// Parse a group spec such as `S3`, `D8`, `C2xC2` or `C2 x S3`.
pub fn build_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty group spec".into()));
    }
    let mut acc: Option<Arc<FiniteGroup>> = None;
    for tok in compact.split('x') {
        if tok.is_empty() {
            return Err(Error::Parse(format!("bad group spec '{spec}'")));
        }
        let f = Arc::new(parse_factor(tok)?);
        acc = Some(match acc {
            None => f,
            Some(a) => direct_product(&a, &f),
        });
    }
    Ok(acc.unwrap())
}

/// A subgroup given by its sorted element list inside `parent`.
#[derive(Clone)]
pub struct SubgroupRef {
    pub parent: Arc<FiniteGroup>,
    pub elements: Vec<u32>,
}

impl PartialEq for SubgroupRef {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
            && (Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent)
    }
}
impl Eq for SubgroupRef {}

impl Hash for SubgroupRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.parent.order.hash(state);
        self.elements.hash(state);
    }
}

impl fmt::Debug for SubgroupRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.parent.label, self.elements)
    }
}

impl SubgroupRef {
    /// Build from any element list, checking closure.
    pub fn new(parent: &Arc<FiniteGroup>, mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let s = SubgroupRef { parent: parent.clone(), elements };
        if s.elements.first() != Some(&0) {
            return Err(Error::NotSubgroup(format!("{s:?} lacks identity")));
        }
        for &a in &s.elements {
            if !s.contains(parent.inv(a)) {
                return Err(Error::NotSubgroup(format!("{s:?} not closed under inverse")));
            }
            for &b in &s.elements {
                if !s.contains(parent.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("{s:?} not closed")));
                }
            }
        }
        Ok(s)
    }

    /// Trusted constructor for already-sorted closed sets.
    pub(crate) fn from_sorted(parent: &Arc<FiniteGroup>, elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        SubgroupRef { parent: parent.clone(), elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order
    }
    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.parent.order];
        for &x in &self.elements {
            m[x as usize] = true;
        }
        m
    }
    pub fn same_parent(&self, other: &SubgroupRef) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent
    }
    pub fn is_subgroup_of(&self, other: &SubgroupRef) -> bool {
        self.same_parent(other) && self.elements.iter().all(|&x| other.contains(x))
    }
    pub fn intersect(&self, other: &SubgroupRef) -> SubgroupRef {
        let els = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        SubgroupRef::from_sorted(&self.parent, els)
    }
    pub fn conjugate(&self, g: u32) -> SubgroupRef {
        let mut els: Vec<u32> = self.elements.iter().map(|&x| self.parent.conj(g, x)).collect();
        els.sort_unstable();
        SubgroupRef::from_sorted(&self.parent, els)
    }
    pub fn is_normal_in(&self, g: &SubgroupRef) -> bool {
        self.is_subgroup_of(g)
            && g.elements.iter().all(|&x| self.elements.iter().all(|&n| self.contains(self.parent.conj(x, n))))
    }
    /// Elements of `g` normalizing `self`.
    pub fn normalizer_in(&self, g: &SubgroupRef) -> SubgroupRef {
        let els = g
            .elements
            .iter()
            .copied()
            .filter(|&x| self.elements.iter().all(|&n| self.contains(self.parent.conj(x, n))))
            .collect();
        SubgroupRef::from_sorted(&self.parent, els)
    }

    /// Least representatives of the left cosets `xK` of `k` in `self`.
    pub fn left_coset_reps(&self, k: &SubgroupRef) -> Vec<u32> {
        let p = &self.parent;
        let mut seen = vec![false; p.order];
        let mut reps = Vec::new();
        for &x in &self.elements {
            if seen[x as usize] {
                continue;
            }
            reps.push(x);
            for &y in &k.elements {
                seen[p.mul(x, y) as usize] = true;
            }
        }
        reps
    }

    /// The double cosets `K x L` inside `self`, each as a sorted element list,
    /// ordered by least element.
    pub fn double_coset_partition(&self, k: &SubgroupRef, l: &SubgroupRef) -> Vec<Vec<u32>> {
        let p = &self.parent;
        let mut seen = vec![false; p.order];
        let mut out = Vec::new();
        for &x in &self.elements {
            if seen[x as usize] {
                continue;
            }
            let mut cls = Vec::new();
            for &a in &k.elements {
                let ax = p.mul(a, x);
                for &b in &l.elements {
                    let y = p.mul(ax, b);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        cls.push(y);
                    }
                }
            }
            cls.sort_unstable();
            out.push(cls);
        }
        out
    }

    /// Least representatives of the double cosets `K x L` inside `self`.
    pub fn double_coset_reps(&self, k: &SubgroupRef, l: &SubgroupRef) -> Vec<u32> {
        let p = &self.parent;
        let mut seen = vec![false; p.order];
        let mut reps = Vec::new();
        for &x in &self.elements {
            if seen[x as usize] {
                continue;
            }
            reps.push(x);
            for &a in &k.elements {
                let ax = p.mul(a, x);
                for &b in &l.elements {
                    seen[p.mul(ax, b) as usize] = true;
                }
            }
        }
        reps
    }
}

/// Anything with a group law on `0..size()` (element `0` neutral).
pub trait GroupOps {
    fn size(&self) -> usize;
    fn op(&self, a: u32, b: u32) -> u32;
    fn invert(&self, a: u32) -> u32;
    fn conjugate_by(&self, g: u32, x: u32) -> u32 {
        self.op(self.op(g, x), self.invert(g))
    }
}

impl GroupOps for FiniteGroup {
    fn size(&self) -> usize {
        self.order
    }
    fn op(&self, a: u32, b: u32) -> u32 {
        self.mul(a, b)
    }
    fn invert(&self, a: u32) -> u32 {
        self.inv(a)
    }
}

/// Sorted closure of `gens`.
pub fn closure<T: GroupOps + ?Sized>(t: &T, gens: &[u32]) -> Vec<u32> {
    let mut seen = vec![false; t.size()];
    seen[0] = true;
    let mut out = vec![0u32];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        i += 1;
        for &g in gens {
            let y = t.op(x, g);
            if !seen[y as usize] {
                seen[y as usize] = true;
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// All subgroups contained in the subgroup `within`, sorted by
/// `(size, element list)`. Breadth-first from cyclic subgroups, adjoining one
/// element at a time.
pub fn subgroup_lists<T: GroupOps + ?Sized>(t: &T, within: &[u32]) -> Result<Vec<Vec<u32>>> {
    if within.len() > SUBGROUP_BOUND {
        return Err(Error::Bound(format!("subgroup enumeration of order {}", within.len())));
    }
    let mut found: HashSet<Vec<u32>> = HashSet::new();
    let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
    for &x in within {
        let c = closure(t, &[x]);
        if found.insert(c.clone()) {
            queue.push_back(c);
        }
    }
    let mut mask = vec![false; t.size()];
    while let Some(s) = queue.pop_front() {
        for &x in &s {
            mask[x as usize] = true;
        }
        for &x in within {
            if mask[x as usize] {
                continue;
            }
            let mut gens = s.clone();
            gens.push(x);
            let c = closure(t, &gens);
            if !found.contains(&c) {
                found.insert(c.clone());
                queue.push_back(c);
            }
        }
        for &x in &s {
            mask[x as usize] = false;
        }
    }
    let mut out: Vec<Vec<u32>> = found.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

/// Closure of a generating set inside `parent`.
pub fn generated(parent: &Arc<FiniteGroup>, gens: &[u32]) -> SubgroupRef {
    SubgroupRef::from_sorted(parent, closure(parent.as_ref(), gens))
}

/// Every subgroup of `g` (itself a subgroup of some parent), sorted by
/// `(size, element list)`.
pub fn subgroups_of(g: &SubgroupRef) -> Result<Vec<SubgroupRef>> {
    Ok(subgroup_lists(g.parent.as_ref(), &g.elements)?
        .into_iter()
        .map(|e| SubgroupRef::from_sorted(&g.parent, e))
        .collect())
}

pub fn subgroups(g: &Arc<FiniteGroup>) -> Result<Vec<SubgroupRef>> {
    subgroups_of(&g.whole())
}

/// A homomorphism given by one image per source element (aligned with
/// `source.elements`).
#[derive(Clone, Debug)]
pub struct GroupMap {
    pub source: SubgroupRef,
    pub target: SubgroupRef,
    pub images: Vec<u32>,
}

impl GroupMap {
    pub fn apply(&self, x: u32) -> Option<u32> {
        self.source.elements.binary_search(&x).ok().map(|i| self.images[i])
    }

    pub fn is_homomorphism(&self) -> bool {
        let (s, t) = (&self.source.parent, &self.target.parent);
        if self.apply(0) != Some(0) {
            return false;
        }
        self.source.elements.iter().enumerate().all(|(i, &x)| {
            self.source.elements.iter().enumerate().all(|(j, &y)| {
                self.apply(s.mul(x, y)) == Some(t.mul(self.images[i], self.images[j]))
            })
        })
    }

    pub fn is_bijective(&self) -> bool {
        let mut im = self.images.clone();
        im.sort_unstable();
        im.dedup();
        im == self.target.elements && self.source.order() == self.target.order()
    }
}

/// `P/N` for `N ⊴ P`. Quotient elements are numbered in the order of their
/// least coset representatives in the parent of `P`.
pub fn quotient(p: &SubgroupRef, n: &SubgroupRef) -> Result<(Arc<FiniteGroup>, GroupMap)> {
    if !n.is_normal_in(p) {
        return Err(Error::NotNormal(format!("{n:?} in {p:?}")));
    }
    let reps = p.left_coset_reps(n);
    let par = &p.parent;
    let mut class_of = vec![u32::MAX; par.order];
    for (i, &r) in reps.iter().enumerate() {
        for &y in &n.elements {
            class_of[par.mul(r, y) as usize] = i as u32;
        }
    }
    let m = reps.len();
    let mut table = vec![0u32; m * m];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * m + j] = class_of[par.mul(a, b) as usize];
        }
    }
    let label = if n.is_trivial() && p.is_whole() {
        par.label.clone()
    } else {
        format!("{}/{}", p_label(p), n.order())
    };
    let q = Arc::new(FiniteGroup::from_table(label, m, table)?);
    let images = p.elements.iter().map(|&x| class_of[x as usize]).collect();
    Ok((q.clone(), GroupMap { source: p.clone(), target: q.whole(), images }))
}

fn p_label(p: &SubgroupRef) -> String {
    if p.is_whole() {
        p.parent.label.clone()
    } else {
        format!("{}<{}>", p.parent.label, p.order())
    }
}

/// `K × L` inside `parent(K) × parent(L)`.
pub fn product_subgroup(k: &SubgroupRef, l: &SubgroupRef) -> SubgroupRef {
    let prod = direct_product(&k.parent, &l.parent);
    let n = l.parent.order as u32;
    let mut els: Vec<u32> = k.elements.iter().flat_map(|&a| l.elements.iter().map(move |&b| a * n + b)).collect();
    els.sort_unstable();
    SubgroupRef { parent: prod, elements: els }
}

/// Projections and embeddings of a direct product.
pub fn p1(prod: &FiniteGroup, e: u32) -> u32 {
    let n = prod.product_meta.as_ref().expect("not a product").right.order as u32;
    e / n
}
pub fn p2(prod: &FiniteGroup, e: u32) -> u32 {
    let n = prod.product_meta.as_ref().expect("not a product").right.order as u32;
    e % n
}
pub fn embed_left(prod: &FiniteGroup, g: u32) -> u32 {
    g * prod.product_meta.as_ref().expect("not a product").right.order as u32
}
pub fn embed_right(_prod: &FiniteGroup, h: u32) -> u32 {
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        build_group("S3").unwrap()
    }

    /// Index of a permutation of {0,1,2} given in one-line notation.
    fn perm(p: [usize; 3]) -> u32 {
        permutations(3).iter().position(|q| q[..] == p[..]).unwrap() as u32
    }

    #[test]
    fn small_constructors() {
        let c2 = build_group("C2").unwrap();
        assert_eq!(c2.table(), &[0, 1, 1, 0]);
        let s3 = s3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let v = build_group("C2xC2").unwrap();
        assert_eq!(v.order(), 4);
        assert!((1..4).all(|x| v.inv(x) == x));
        assert_eq!(build_group("D8").unwrap().order(), 8);
        assert_eq!(build_group("Q8").unwrap().center().len(), 2);
        assert_eq!(build_group("S4").unwrap().order(), 24);
        assert!(build_group("S5").is_err());
        assert!(build_group("C2x").is_err());
        assert!(build_group("Z3").is_err());
    }

    #[test]
    fn whitespace_and_associativity_of_spec() {
        let a = build_group("C2 x C3").unwrap();
        let b = build_group("C2xC3").unwrap();
        assert_eq!(*a, *b);
        assert!(a.is_abelian());
        assert_eq!(a.order(), 6);
        let c = build_group("S3xC2").unwrap();
        assert_eq!(c.center().len(), 2);
        let t = build_group("C2xC2xC2").unwrap();
        assert_eq!(t.product_meta().unwrap().left.order(), 4);
    }

    #[test]
    fn product_encoding() {
        let g = build_group("S3").unwrap();
        let h = build_group("C3").unwrap();
        let p = direct_product(&g, &h);
        for x in 0..6 {
            for y in 0..3 {
                let e = x * 3 + y;
                assert_eq!(p1(&p, e), x);
                assert_eq!(p2(&p, e), y);
            }
        }
        assert!(Arc::ptr_eq(&p, &direct_product(&g, &h)));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(subgroups(&build_group("C2").unwrap()).unwrap().len(), 2);
        let s = subgroups(&s3()).unwrap();
        let sizes: Vec<usize> = s.iter().map(|x| x.order()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(subgroups(&build_group("C2xC2").unwrap()).unwrap().len(), 5);
        assert_eq!(subgroups(&build_group("D8").unwrap()).unwrap().len(), 10);
        assert_eq!(subgroups(&build_group("S4").unwrap()).unwrap().len(), 30);
        assert_eq!(subgroups(&build_group("C4xC4").unwrap()).unwrap().len(), 15);
    }

    #[test]
    fn quotients() {
        let g = s3();
        let c3 = subgroups(&g).unwrap().into_iter().find(|s| s.order() == 3).unwrap();
        let (q, pi) = quotient(&g.whole(), &c3).unwrap();
        assert_eq!(q.order(), 2);
        assert!(pi.is_homomorphism());
        let (q1, pi1) = quotient(&g.whole(), &g.trivial_subgroup()).unwrap();
        assert_eq!(q1.order(), 6);
        assert!(pi1.is_bijective());
        let (qg, _) = quotient(&g.whole(), &g.whole()).unwrap();
        assert_eq!(qg.order(), 1);
        let c2 = generated(&g, &[perm([1, 0, 2])]);
        assert!(quotient(&g.whole(), &c2).is_err());
    }

    #[test]
    fn double_cosets_and_conjugates() {
        let g = s3();
        let t12 = generated(&g, &[perm([1, 0, 2])]);
        assert_eq!(g.whole().double_coset_reps(&t12, &t12).len(), 2);
        let one = g.trivial_subgroup();
        assert_eq!(g.whole().double_coset_reps(&one, &one).len(), 6);
        let t13 = perm([2, 1, 0]);
        let t23 = generated(&g, &[perm([0, 2, 1])]);
        assert_eq!(t12.conjugate(t13), t23);
        assert_eq!(t12.conjugate(0), t12);
    }
}
