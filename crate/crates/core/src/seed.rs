//! Seed data `(G, S)`: a family of groups with chosen pair sets, the axiom
//! checker, and the lower-plus, upper-plus and minus transforms.
//!
//! Membership is evaluated lazily. A base seed is a rule (`all`, `k2only`)
//! or an explicit conjugation-closed list; derived seeds wrap their base.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fiber::{greedy_generators, FiberGroup};
use crate::group::{build_group, subgroups_of, GroupHandle, SubgroupRef};
use crate::pairs::{all_pairs, diagonal_pair, identity_pair, pair_classes, FiberedPair, PairClass, PairKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    All,
    K2Only,
}

#[derive(Clone, Debug)]
pub enum Selector {
    All,
    K2Only,
    Explicit(Vec<FiberedPair>),
}

impl Selector {
    pub fn parse(s: &str) -> Result<Selector> {
        match s {
            "all" => Ok(Selector::All),
            "k2only" | "k2" => Ok(Selector::K2Only),
            _ => Err(Error::Parse(format!("selector must be all or k2only, got '{s}'"))),
        }
    }
}

enum Membership {
    Rule(Rule),
    Explicit(HashMap<(SubgroupRef, SubgroupRef), HashSet<PairKey>>),
    Plus(Arc<SeedData>),
    Upper(Arc<SeedData>),
    Minus(Arc<SeedData>),
}

pub struct SeedData {
    family: Vec<SubgroupRef>,
    open: bool,
    fiber: FiberGroup,
    membership: Membership,
    name: String,
    members_cache: Mutex<HashMap<(SubgroupRef, SubgroupRef), Arc<Vec<FiberedPair>>>>,
}

impl fmt::Debug for SeedData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed({}, {} groups{})", self.name, self.family.len(), if self.open { ", open" } else { "" })
    }
}

/// Every subgroup of every listed group, deduplicated, in list order.
pub fn subgroup_closure(groups: &[SubgroupRef]) -> Result<Vec<SubgroupRef>> {
    let mut out: Vec<SubgroupRef> = Vec::new();
    for g in groups {
        for s in subgroups_of(g)? {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Family spec: comma list of group specs; an entry `G-closure` contributes
/// every subgroup of `G`.
pub fn parse_family(spec: &str) -> Result<Vec<SubgroupRef>> {
    let mut out: Vec<SubgroupRef> = Vec::new();
    for tok in spec.split(',') {
        let tok = tok.trim();
        let (name, closed) = match tok.strip_suffix("-closure") {
            Some(n) => (n, true),
            None => (tok, false),
        };
        let g = build_group(name)?.whole();
        let add = if closed { subgroup_closure(&[g])? } else { vec![g] };
        for s in add {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

impl SeedData {
    fn wrap(base: &Arc<SeedData>, membership: Membership, tag: &str) -> SeedData {
        SeedData {
            family: base.family.clone(),
            open: base.open,
            fiber: base.fiber.clone(),
            membership,
            name: format!("{}{}", base.name, tag),
            members_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn family(&self) -> &[SubgroupRef] {
        &self.family
    }
    pub fn fiber(&self) -> &FiberGroup {
        &self.fiber
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn is_open(&self) -> bool {
        self.open
    }

    pub fn contains_group(&self, g: &SubgroupRef) -> bool {
        self.open || self.family.contains(g)
    }

    /// `Σ(H)`: family members contained in `H`.
    pub fn sigma(&self, h: &SubgroupRef) -> Result<Vec<SubgroupRef>> {
        if self.open {
            return subgroups_of(h);
        }
        Ok(self.family.iter().filter(|k| k.is_subgroup_of(h)).cloned().collect())
    }

    /// `(D, φ) ∈ S(G, H)` for the groups the pair is declared over.
    pub fn contains(&self, p: &FiberedPair) -> bool {
        if p.fiber != self.fiber || !self.contains_group(&p.left) || !self.contains_group(&p.right) {
            return false;
        }
        match &self.membership {
            Membership::Rule(Rule::All) => true,
            Membership::Rule(Rule::K2Only) => p.k2().is_trivial(),
            Membership::Explicit(m) => m
                .get(&(p.left.clone(), p.right.clone()))
                .is_some_and(|s| s.contains(&p.canonical().key)),
            Membership::Plus(b) => {
                let p1 = p.p1();
                b.contains_group(&p1) && p.rebase(&p1, &p.right).is_ok_and(|q| b.contains(&q))
            }
            Membership::Upper(b) => {
                let (p1, p2) = (p.p1(), p.p2());
                b.contains_group(&p1) && b.contains_group(&p2) && p.rebase(&p1, &p2).is_ok_and(|q| b.contains(&q))
            }
            Membership::Minus(b) => p.p1() == p.left && b.contains(p),
        }
    }

    /// Every member of `S(G, H)`.
    pub fn members(&self, g: &SubgroupRef, h: &SubgroupRef) -> Result<Arc<Vec<FiberedPair>>> {
        let key = (g.clone(), h.clone());
        if let Some(v) = self.members_cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v: Vec<FiberedPair> = if self.contains_group(g) && self.contains_group(h) {
            all_pairs(g, h, &self.fiber)?.into_iter().filter(|p| self.contains(p)).collect()
        } else {
            Vec::new()
        };
        let v = Arc::new(v);
        self.members_cache.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// Classes of `S(G, H)`.
    pub fn classes(&self, g: &SubgroupRef, h: &SubgroupRef) -> Result<Vec<PairClass>> {
        if !self.contains_group(g) || !self.contains_group(h) {
            return Ok(Vec::new());
        }
        Ok(pair_classes(g, h, &self.fiber)?.iter().filter(|c| self.contains(&c.pair)).cloned().collect())
    }

    /// Class lists over every ordered pair of family members.
    pub fn class_table(&self) -> Result<BTreeMap<(usize, usize), Vec<PairKey>>> {
        let mut out = BTreeMap::new();
        for (i, g) in self.family.iter().enumerate() {
            for (j, h) in self.family.iter().enumerate() {
                out.insert((i, j), self.classes(g, h)?.into_iter().map(|c| c.pair.key).collect());
            }
        }
        Ok(out)
    }
}

pub fn make_seed(family: Vec<SubgroupRef>, fiber: &FiberGroup, selector: Selector) -> Result<Arc<SeedData>> {
    for (i, g) in family.iter().enumerate() {
        if family[..i].contains(g) {
            return Err(Error::Precondition(format!("family lists {g:?} twice")));
        }
    }
    let (membership, name) = match selector {
        Selector::All => (Membership::Rule(Rule::All), "all".to_string()),
        Selector::K2Only => (Membership::Rule(Rule::K2Only), "k2only".to_string()),
        Selector::Explicit(pairs) => {
            let mut m: HashMap<(SubgroupRef, SubgroupRef), HashSet<PairKey>> = HashMap::new();
            for p in pairs {
                if !family.contains(&p.left) || !family.contains(&p.right) {
                    return Err(Error::Precondition(format!("{p:?} not over family groups")));
                }
                if p.fiber != *fiber {
                    return Err(Error::FiberMismatch);
                }
                m.entry((p.left.clone(), p.right.clone())).or_default().insert(p.canonical().key);
            }
            (Membership::Explicit(m), "explicit".to_string())
        }
    };
    Ok(Arc::new(SeedData {
        family,
        open: false,
        fiber: fiber.clone(),
        membership,
        name,
        members_cache: Mutex::new(HashMap::new()),
    }))
}

/// A seed in which every group is a member; `family` is only used where a
/// finite enumeration is needed.
pub fn open_seed(family: Vec<SubgroupRef>, fiber: &FiberGroup, rule: Rule) -> Arc<SeedData> {
    Arc::new(SeedData {
        family,
        open: true,
        fiber: fiber.clone(),
        membership: Membership::Rule(rule),
        name: format!("open-{}", if rule == Rule::All { "all" } else { "k2only" }),
        members_cache: Mutex::new(HashMap::new()),
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Verdict {
    pub axiom: &'static str,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub seed: String,
    pub verdicts: Vec<Verdict>,
}

impl AxiomReport {
    pub fn holds(&self, axiom: &str) -> bool {
        self.verdicts.iter().any(|v| v.axiom == axiom && v.holds)
    }
    pub fn all_hold(&self, axioms: &[&str]) -> bool {
        axioms.iter().all(|a| self.holds(a))
    }
    pub fn failing(&self) -> Vec<&'static str> {
        self.verdicts.iter().filter(|v| !v.holds).map(|v| v.axiom).collect()
    }
}

pub const AXIOMS: [&str; 9] = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "k2"];

type Check<'a> = Box<dyn Fn(&SeedData) -> Result<Option<String>> + 'a>;

/// `{g : ∃k ∈ K, (g,k) ∈ D}` for `K` inside the right group.
pub fn left_image(d: &FiberedPair, k: &SubgroupRef) -> SubgroupRef {
    let mut v: Vec<u32> = d.triples().filter(|t| k.contains(t.1)).map(|t| t.0).collect();
    v.sort_unstable();
    v.dedup();
    SubgroupRef { parent: d.left.parent.clone(), elements: v }
}

/// `{h : ∃k ∈ K, (k,h) ∈ D}` for `K` inside the left group.
pub fn right_image(d: &FiberedPair, k: &SubgroupRef) -> SubgroupRef {
    let mut v: Vec<u32> = d.triples().filter(|t| k.contains(t.0)).map(|t| t.1).collect();
    v.sort_unstable();
    v.dedup();
    SubgroupRef { parent: d.right.parent.clone(), elements: v }
}

/// `(D, φ) ∗ (Δ(K), 1)` viewed over `(D∗K, K)`.
pub fn cut_right(d: &FiberedPair, k: &SubgroupRef) -> Result<FiberedPair> {
    let dk = left_image(d, k);
    let delta = diagonal_pair(k, None, &d.right, k, &d.fiber)?;
    let s = d.star(&delta)?.ok_or_else(|| Error::Invariant("diagonal star incompatible".into()))?;
    s.rebase(&dk, k)
}

/// `(Δ(K), 1) ∗ (D, φ)` viewed over `(K, K∗D)`.
pub fn cut_left(d: &FiberedPair, k: &SubgroupRef) -> Result<FiberedPair> {
    let kd = right_image(d, k);
    let delta = diagonal_pair(k, None, k, &d.left, &d.fiber)?;
    let s = delta.star(d)?.ok_or_else(|| Error::Invariant("diagonal star incompatible".into()))?;
    s.rebase(k, &kd)
}

fn checks<'a>() -> Vec<(&'static str, Check<'a>)> {
    vec![
        ("i", Box::new(|s: &SeedData| {
            for g in &s.family {
                if !s.contains(&identity_pair(g, &s.fiber)) {
                    return Ok(Some(format!("(Δ({g:?}),1) missing")));
                }
            }
            Ok(None)
        })),
        ("ii", Box::new(|s: &SeedData| {
            for g in &s.family {
                for h in &s.family {
                    let gg = greedy_generators(g.parent.as_ref(), &g.elements);
                    let hg = greedy_generators(h.parent.as_ref(), &h.elements);
                    for p in s.members(g, h)?.iter() {
                        for c in gg.iter().map(|&x| (x, 0)).chain(hg.iter().map(|&y| (0, y))) {
                            if !s.contains(&p.conj(c.0, c.1)) {
                                return Ok(Some(format!("{p:?} conjugated by {c:?}")));
                            }
                        }
                    }
                }
            }
            Ok(None)
        })),
        ("iii", Box::new(|s: &SeedData| {
            for g in &s.family {
                for h in &s.family {
                    let left = s.members(g, h)?;
                    if left.is_empty() {
                        continue;
                    }
                    for k in &s.family {
                        for q in s.members(h, k)?.iter() {
                            for p in left.iter() {
                                if let Some(r) = p.star(q)? {
                                    if !s.contains(&r) {
                                        return Ok(Some(format!("{p:?} * {q:?}")));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Ok(None)
        })),
        ("iv", Box::new(|s: &SeedData| {
            for g in &s.family {
                for h in &s.family {
                    for d in s.members(g, h)?.iter() {
                        for k in s.sigma(h)? {
                            if let Some(w) = cut_right_ok(s, d, &k)? {
                                return Ok(Some(w));
                            }
                        }
                    }
                }
            }
            Ok(None)
        })),
        ("v", Box::new(|s: &SeedData| {
            for g in &s.family {
                for h in s.sigma(g)? {
                    if !s.contains(&diagonal_pair(&h, None, g, &h, &s.fiber)?) {
                        return Ok(Some(format!("(Δ({h:?}),1) over ({g:?},{h:?})")));
                    }
                }
            }
            Ok(None)
        })),
        ("vi", Box::new(|s: &SeedData| {
            for g in &s.family {
                for h in s.sigma(g)? {
                    if !s.contains(&diagonal_pair(&h, None, &h, g, &s.fiber)?) {
                        return Ok(Some(format!("(Δ({h:?}),1) over ({h:?},{g:?})")));
                    }
                }
            }
            Ok(None)
        })),
        ("vii", Box::new(|s: &SeedData| {
            for g in &s.family {
                for h in &s.family {
                    for d in s.members(g, h)?.iter() {
                        let p2 = d.p2();
                        if !s.contains_group(&p2) {
                            return Ok(Some(format!("p2 of {d:?} not in family")));
                        }
                        for k in s.sigma(&p2)? {
                            if let Some(w) = cut_right_ok(s, d, &k)? {
                                return Ok(Some(w));
                            }
                        }
                    }
                }
            }
            Ok(None)
        })),
        ("viii", Box::new(|s: &SeedData| {
            for g in &s.family {
                for h in &s.family {
                    for d in s.members(g, h)?.iter() {
                        let p1 = d.p1();
                        if !s.contains_group(&p1) {
                            return Ok(Some(format!("p1 of {d:?} not in family")));
                        }
                        for k in s.sigma(&p1)? {
                            let kd = right_image(d, &k);
                            if !s.contains_group(&kd) {
                                return Ok(Some(format!("{k:?}*{d:?} not in family")));
                            }
                            let c = cut_left(d, &k)?;
                            if !s.contains(&c) {
                                return Ok(Some(format!("(Δ({k:?}),1)*{d:?}")));
                            }
                        }
                    }
                }
            }
            Ok(None)
        })),
        ("k2", Box::new(|s: &SeedData| {
            for g in &s.family {
                for h in &s.family {
                    if let Some(d) = s.members(g, h)?.iter().find(|d| !d.k2().is_trivial()) {
                        return Ok(Some(format!("k2 of {d:?} nontrivial")));
                    }
                }
            }
            Ok(None)
        })),
    ]
}

fn cut_right_ok(s: &SeedData, d: &FiberedPair, k: &SubgroupRef) -> Result<Option<String>> {
    let dk = left_image(d, k);
    if !s.contains_group(&dk) {
        return Ok(Some(format!("{d:?}*{k:?} not in family")));
    }
    let c = cut_right(d, k)?;
    if !s.contains(&c) {
        return Ok(Some(format!("{d:?}*(Δ({k:?}),1)")));
    }
    Ok(None)
}

/// Exhaustive check of the selected axioms over the family.
pub fn check_some(seed: &SeedData, which: &[&str]) -> Result<AxiomReport> {
    let mut verdicts = Vec::new();
    for (name, f) in checks() {
        if !which.contains(&name) {
            continue;
        }
        let w = f(seed)?;
        verdicts.push(Verdict { axiom: name, holds: w.is_none(), witness: w });
    }
    Ok(AxiomReport { seed: seed.name.clone(), verdicts })
}

pub fn check_axioms(seed: &SeedData) -> Result<AxiomReport> {
    check_some(seed, &AXIOMS)
}

fn require(seed: &Arc<SeedData>, axioms: &[&str]) -> Result<()> {
    if seed.open {
        return Ok(());
    }
    let r = check_some(seed, axioms)?;
    let bad = r.failing();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("seed {} fails axioms {:?}", seed.name, bad)))
    }
}

/// `S₊`. Requires (i)–(iv).
pub fn lift_plus(seed: &Arc<SeedData>) -> Result<Arc<SeedData>> {
    require(seed, &["i", "ii", "iii", "iv"])?;
    Ok(Arc::new(SeedData::wrap(seed, Membership::Plus(seed.clone()), "+lower")))
}

/// `S⁺`. Requires (i)–(iii), (vii), (viii) and an intersection-closed family.
pub fn lift_upper(seed: &Arc<SeedData>) -> Result<Arc<SeedData>> {
    require(seed, &["i", "ii", "iii", "vii", "viii"])?;
    if !seed.open {
        for g in &seed.family {
            for h in &seed.family {
                if g.same_parent(h) && !seed.family.contains(&g.intersect(h)) {
                    return Err(Error::Precondition("family not closed under intersection".into()));
                }
            }
        }
    }
    Ok(Arc::new(SeedData::wrap(seed, Membership::Upper(seed.clone()), "+upper")))
}

/// `S₋`: pairs with `p₁(D) = G`. Requires (i)–(iv).
pub fn restrict_minus(seed: &Arc<SeedData>) -> Result<Arc<SeedData>> {
    require(seed, &["i", "ii", "iii", "iv"])?;
    Ok(Arc::new(SeedData::wrap(seed, Membership::Minus(seed.clone()), "-minus")))
}

/// Family of all subgroups of `G` as a convenience.
pub fn closure_family(spec: &str) -> Result<Vec<SubgroupRef>> {
    subgroup_closure(&[build_group(spec)?.whole()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiberGroup {
        FiberGroup::parse("2").unwrap()
    }

    #[test]
    fn small_family_classes() {
        let fam = parse_family("C2-closure").unwrap();
        assert_eq!(fam.len(), 2);
        let s = make_seed(fam.clone(), &z2(), Selector::All).unwrap();
        assert_eq!(s.members(&fam[1], &fam[1]).unwrap().len(), 11);
        let k = make_seed(fam.clone(), &z2(), Selector::K2Only).unwrap();
        assert_eq!(k.classes(&fam[1], &fam[0]).unwrap().len(), s.classes(&fam[1], &fam[0]).unwrap().len());
    }

    #[test]
    fn missing_identity_breaks_axiom_one() {
        let fam = parse_family("C2").unwrap();
        let g = &fam[0];
        let free = FiberedPair::new(g, g, &z2(), [(0, 0, 0)]).unwrap();
        let s = make_seed(fam.clone(), &z2(), Selector::Explicit(vec![free])).unwrap();
        let r = check_axioms(&s).unwrap();
        assert!(!r.holds("i"));
        assert!(r.verdicts[0].witness.is_some());
        assert!(lift_plus(&s).is_err());
    }

    #[test]
    fn c2_closure_all_passes() {
        let s = make_seed(parse_family("C2-closure").unwrap(), &z2(), Selector::All).unwrap();
        let r = check_axioms(&s).unwrap();
        assert_eq!(r.failing(), vec!["k2"]);
    }
}
