//! `F⁺`: conjugation-equivariant tuples over `M′(G)`, the action of `S⁺`,
//! the Green cross product, and the mark and Möbius maps between `F₊` and
//! `F⁺`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::burnside::{BurnsideElt, Coeff};
use crate::error::{Error, Result};
use crate::fiber::{homs_to_fiber, FiberChar};
use crate::functor::{diagonal_embedding, show_char, unit_vector, FunctorSpec};
use crate::group::{product_subgroup, trivial_group, GroupHandle, SubgroupRef};
use crate::oracle::realize;
use crate::pairs::{char_of_pair, mprime_cached, pair_of_char, FiberedPair, MPrimePoset};
use crate::plus::{plus_basis, PlusElt};
use crate::seed::{cut_left, right_image};

/// One `F(K)`-vector per orbit representative `(K, λ)` of `M′(G)`, in the
/// order of `MPrimePoset::orbit_reps`.
#[derive(Clone)]
pub struct GhostElt {
    pub group: SubgroupRef,
    pub poset: Arc<MPrimePoset>,
    pub reps: Vec<usize>,
    pub entries: Vec<Vec<Coeff>>,
}

impl PartialEq for GhostElt {
    fn eq(&self, o: &Self) -> bool {
        self.group == o.group && self.entries == o.entries
    }
}
impl Eq for GhostElt {}

impl fmt::Debug for GhostElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .reps
            .iter()
            .zip(&self.entries)
            .filter(|(_, v)| v.iter().any(|a| !a.is_zero()))
            .map(|(&r, v)| format!("{}->{:?}", show_char(&self.poset.nodes[r]), v.iter().map(|a| a.to_string()).collect::<Vec<_>>()))
            .collect();
        write!(f, "Ghost{{{}}}", parts.join(", "))
    }
}

impl GhostElt {
    pub fn zero(f: &FunctorSpec, g: &SubgroupRef) -> Result<Self> {
        let poset = mprime_cached(g, f.fiber())?;
        let reps = poset.orbit_reps();
        let entries = reps.iter().map(|&r| Ok(vec![Coeff::zero(); f.rank(&poset.nodes[r].domain)?])).collect::<Result<_>>()?;
        Ok(GhostElt { group: g.clone(), poset, reps, entries })
    }

    /// Validating constructor.
    pub fn new(f: &FunctorSpec, g: &SubgroupRef, entries: Vec<Vec<Coeff>>) -> Result<Self> {
        let mut x = Self::zero(f, g)?;
        if entries.len() != x.reps.len() {
            return Err(Error::Precondition(format!("{} entries for {} orbit representatives", entries.len(), x.reps.len())));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.len() != x.entries[i].len() {
                return Err(Error::Precondition(format!("entry {i} has length {}", e.len())));
            }
        }
        x.entries = entries;
        if let Some((i, s)) = x.stabilizer_violation(f)? {
            return Err(Error::Precondition(format!(
                "entry at {} not fixed by conjugation with {s}",
                show_char(&x.poset.nodes[x.reps[i]])
            )));
        }
        Ok(x)
    }

    /// First `(entry, g)` with `g` stabilizing the node but moving the entry.
    pub fn stabilizer_violation(&self, f: &FunctorSpec) -> Result<Option<(usize, u32)>> {
        for (i, &r) in self.reps.iter().enumerate() {
            let k = &self.poset.nodes[r].domain;
            for s in self.poset.stabilizer(r) {
                if s != 0 && f.conj(s, k, &self.entries[i])? != self.entries[i] {
                    return Ok(Some((i, s)));
                }
            }
        }
        Ok(None)
    }

    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.len()).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn slot(&self, rep: usize) -> usize {
        self.reps.binary_search(&rep).expect("orbit representative")
    }

    /// `x_{(K,λ)}` at any node, transported from its representative.
    pub fn value(&self, f: &FunctorSpec, c: &FiberChar) -> Result<Vec<Coeff>> {
        let (rep, g) = self.poset.canonical_node(c);
        let x = &self.entries[self.slot(rep)];
        let gi = self.poset.group.parent.inv(g);
        f.conj(gi, &self.poset.nodes[rep].domain, x)
    }

    pub fn to_vector(&self) -> Vec<Coeff> {
        self.entries.concat()
    }

    /// Inverse of `to_vector`, without validation.
    pub fn from_vector(f: &FunctorSpec, g: &SubgroupRef, v: &[Coeff]) -> Result<Self> {
        let mut x = Self::zero(f, g)?;
        let mut i = 0;
        for e in x.entries.iter_mut() {
            let n = e.len();
            e.copy_from_slice(&v[i..i + n]);
            i += n;
        }
        Ok(x)
    }

    pub fn add(&self, o: &GhostElt) -> Result<GhostElt> {
        if self.group != o.group {
            return Err(Error::GroupMismatch("ghost elements over different groups".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&o.entries) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Coeff) -> GhostElt {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            for x in e.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    /// Labels of the coordinates of `to_vector`.
    pub fn labels(&self, f: &FunctorSpec) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for &r in &self.reps {
            let c = &self.poset.nodes[r];
            for l in f.labels(&c.domain)? {
                out.push(format!("{}:{l}", show_char(c)));
            }
        }
        Ok(out)
    }
}

/// How `upper_act` enumerates the `(A, H)`-orbits of the realized biset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitSource {
    /// Left cosets of `p₁(D)`.
    Cosets,
    /// Orbit representatives of the explicit realization.
    Realized,
}

/// Stabilizing pairs of the `(A, H)`-orbit representatives of `G×H/(D,φ)`.
fn orbit_pairs(p: &FiberedPair, how: OrbitSource) -> Result<Vec<FiberedPair>> {
    match how {
        OrbitSource::Cosets => Ok(p.left.left_coset_reps(&p.p1()).into_iter().map(|g| p.conj(g, 0)).collect()),
        OrbitSource::Realized => {
            let x = realize(p)?;
            Ok(x.orbit_reps(false, true, true).into_iter().map(|u| x.stab_pair(u)).collect())
        }
    }
}

/// `F⁺(u)(x)` for `u` over `(G, H)` supported on `S⁺`.
pub fn upper_act(f: &FunctorSpec, u: &BurnsideElt, x: &GhostElt) -> Result<GhostElt> {
    upper_act_with(f, u, x, OrbitSource::Cosets)
}

pub fn upper_act_with(f: &FunctorSpec, u: &BurnsideElt, x: &GhostElt, how: OrbitSource) -> Result<GhostElt> {
    if u.right != x.group {
        return Err(Error::GroupMismatch(format!("{:?} vs {:?}", u.right, x.group)));
    }
    let mut out = GhostElt::zero(f, &u.left)?;
    let one = trivial_group().whole();
    let a = f.fiber();
    let terms: Vec<(FiberedPair, Coeff)> = u.terms().collect();
    let orbits: Vec<Vec<FiberedPair>> = terms.iter().map(|(p, _)| orbit_pairs(p, how)).collect::<Result<_>>()?;
    for (slot, &rep) in out.reps.clone().iter().enumerate() {
        let alpha = out.poset.nodes[rep].clone();
        let k = &alpha.domain;
        for ((_, c), stabs) in terms.iter().zip(&orbits) {
            for s in stabs {
                if !k.is_subgroup_of(&s.p1()) {
                    continue;
                }
                let ku = right_image(s, k);
                let t = cut_left(s, k)?;
                let mut hits = 0;
                for lam in homs_to_fiber(&ku, a) {
                    let q = pair_of_char(&lam, &ku, &one, a);
                    let Some(r) = t.star(&q)? else { continue };
                    if char_of_pair(&r) != alpha {
                        continue;
                    }
                    hits += 1;
                    let y = f.act_on(&t, &x.value(f, &lam)?)?;
                    for (o, v) in out.entries[slot].iter_mut().zip(y) {
                        *o += v * c;
                    }
                }
                debug_assert!(hits <= 1 || !s.k2().is_trivial(), "several characters for one orbit under k2");
            }
        }
    }
    Ok(out)
}

/// Number of characters `λ` of `K^u` matching `α`, for each orbit of `p`
/// and each representative `(K, α)`; at most one under condition k₂.
pub fn lambda_multiplicities(f: &FunctorSpec, p: &FiberedPair) -> Result<Vec<usize>> {
    let poset = mprime_cached(&p.left, f.fiber())?;
    let one = trivial_group().whole();
    let mut out = Vec::new();
    for s in orbit_pairs(p, OrbitSource::Cosets)? {
        for rep in poset.orbit_reps() {
            let alpha = &poset.nodes[rep];
            if !alpha.domain.is_subgroup_of(&s.p1()) {
                continue;
            }
            let ku = right_image(&s, &alpha.domain);
            let t = cut_left(&s, &alpha.domain)?;
            let mut n = 0;
            for lam in homs_to_fiber(&ku, f.fiber()) {
                if let Some(r) = t.star(&pair_of_char(&lam, &ku, &one, f.fiber()))? {
                    n += usize::from(char_of_pair(&r) == *alpha);
                }
            }
            out.push(n);
        }
    }
    Ok(out)
}

/// Image of `t ≤ G×H` in `G` (`left`) or `H`.
fn project(t: &SubgroupRef, g: &SubgroupRef, h: &SubgroupRef, left: bool) -> SubgroupRef {
    let n = h.parent.order() as u32;
    let mut els: Vec<u32> = t.elements.iter().map(|&e| if left { e / n } else { e % n }).collect();
    els.sort_unstable();
    els.dedup();
    let parent = if left { g.parent.clone() } else { h.parent.clone() };
    SubgroupRef { parent, elements: els }
}

/// `a × b ∈ F⁺(G × H)`, summing over every factorization `α = λ × β` on `T`.
pub fn upper_cross(f: &FunctorSpec, a: &GhostElt, b: &GhostElt) -> Result<GhostElt> {
    if !f.has_green() {
        return Err(Error::NoGreen);
    }
    let gh = product_subgroup(&a.group, &b.group);
    let mut out = GhostElt::zero(f, &gh)?;
    let fib = f.fiber();
    for (slot, &rep) in out.reps.clone().iter().enumerate() {
        let alpha = out.poset.nodes[rep].clone();
        let t = &alpha.domain;
        let n = b.group.parent.order() as u32;
        let t1 = project(t, &a.group, &b.group, true);
        let t2 = project(t, &a.group, &b.group, false);
        let t1t2 = product_subgroup(&t1, &t2);
        for lam in homs_to_fiber(&t1, fib) {
            let av = a.value(f, &lam)?;
            if av.iter().all(|v| v.is_zero()) {
                continue;
            }
            for beta in homs_to_fiber(&t2, fib) {
                if !t.elements.iter().all(|&e| fib.add(lam.value(e / n), beta.value(e % n)) == alpha.value(e)) {
                    continue;
                }
                let bv = b.value(f, &beta)?;
                let c = f.res(t, &t1t2, &f.cross(&t1, &av, &t2, &bv)?)?;
                for (o, v) in out.entries[slot].iter_mut().zip(c) {
                    *o += v;
                }
            }
        }
    }
    Ok(out)
}

/// `a · b = F⁺(Δ_G)(a × b)` over the same group.
pub fn upper_dot(f: &FunctorSpec, a: &GhostElt, b: &GhostElt) -> Result<GhostElt> {
    if a.group != b.group {
        return Err(Error::GroupMismatch("dot of ghosts over different groups".into()));
    }
    let g = &a.group;
    let gg = product_subgroup(g, g);
    let d = diagonal_embedding(g, &gg, f.fiber())?;
    upper_act(f, &BurnsideElt::basis(&d, crate::burnside::Ring::Z), &upper_cross(f, a, b)?)
}

/// The ghost unit: `E_F` at `(1, 1)`.
pub fn upper_unit(f: &FunctorSpec) -> Result<GhostElt> {
    let one = trivial_group().whole();
    GhostElt::new(f, &one, vec![f.unit()?])
}

/// The mark morphism `F₊(G) → F⁺(G)`.
pub fn mark(f: &FunctorSpec, x: &PlusElt) -> Result<GhostElt> {
    let g = &x.group;
    let mut out = GhostElt::zero(f, g)?;
    for (k, c) in x.terms() {
        let (h, phi) = (&k.chi.domain, &k.chi);
        let e = unit_vector(f.rank(h)?, k.basis);
        for t in g.left_coset_reps(h) {
            let th = h.conjugate(t);
            let tphi = phi.conjugate(t);
            let te = f.conj(t, h, &e)?;
            for (slot, &rep) in out.reps.clone().iter().enumerate() {
                let lam = &out.poset.nodes[rep];
                let l = &lam.domain;
                if !l.is_subgroup_of(&th) || tphi.restrict(l) != *lam {
                    continue;
                }
                let y = f.res(l, &th, &te)?;
                for (o, v) in out.entries[slot].iter_mut().zip(y) {
                    *o += v * c;
                }
            }
        }
    }
    Ok(out)
}

/// The Möbius map `F⁺(G) → F₊(G)`.
pub fn nmap(f: &FunctorSpec, a: &GhostElt) -> Result<PlusElt> {
    let g = &a.group;
    let b = plus_basis(f, g)?;
    let poset = &a.poset;
    let mut out = PlusElt::zero(g);
    for j in 0..poset.len() {
        let kl = &poset.nodes[j];
        let x = a.value(f, kl)?;
        if x.iter().all(|v| v.is_zero()) {
            continue;
        }
        for i in 0..poset.len() {
            if !poset.leq(i, j) {
                continue;
            }
            let lp = &poset.nodes[i];
            let c = Coeff::from_integer(lp.domain.order() as i64 * poset.moebius(i, j)?);
            b.add_raw(f, &mut out, lp, &f.res(&lp.domain, &kl.domain, &x)?, c)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::FiberGroup;
    use crate::group::build_group;
    use crate::seed::{make_seed, parse_family, restrict_minus, Selector};
    use num_traits::One;

    fn trivial_c2() -> (Arc<FunctorSpec>, SubgroupRef) {
        let a = FiberGroup::parse("2").unwrap();
        let s = make_seed(parse_family("C2-closure").unwrap(), &a, Selector::K2Only).unwrap();
        (FunctorSpec::trivial(&restrict_minus(&s).unwrap()).unwrap(), build_group("C2").unwrap().whole())
    }

    fn ints(v: &[i64]) -> Vec<Coeff> {
        v.iter().map(|&x| Coeff::from_integer(x)).collect()
    }

    #[test]
    fn marks_on_c2() {
        let (f, c2) = trivial_c2();
        let b = plus_basis(&f, &c2).unwrap();
        let cols: Vec<Vec<Coeff>> =
            b.keys.iter().map(|k| mark(&f, &PlusElt::single(&c2, k.clone(), Coeff::one())).unwrap().to_vector()).collect();
        assert_eq!(cols, vec![ints(&[2, 0, 0]), ints(&[1, 1, 0]), ints(&[1, 0, 1])]);
    }

    #[test]
    fn nmap_of_indicator() {
        let (f, c2) = trivial_c2();
        let x = GhostElt::from_vector(&f, &c2, &ints(&[0, 1, 0])).unwrap();
        let y = nmap(&f, &x).unwrap();
        let got: Vec<(usize, i64)> = y.terms().map(|(k, c)| (k.chi.domain.order(), *c.numer())).collect();
        assert_eq!(got, vec![(1, -1), (2, 2)]);
        assert_eq!(mark(&f, &y).unwrap(), x.scale(Coeff::from_integer(2)));
    }

    #[test]
    fn validator_rejects_non_invariant_entries() {
        // With A = Z/3, N(C3) = S3 swaps the two faithful characters of C3.
        let a = FiberGroup::parse("3").unwrap();
        let s = make_seed(parse_family("S3-closure").unwrap(), &a, Selector::All).unwrap();
        let f = FunctorSpec::burnside(&s);
        let s3 = build_group("S3").unwrap().whole();
        let z = GhostElt::zero(&f, &s3).unwrap();
        // A basis vector moved by its node's stabilizer.
        let bad = z.reps.iter().enumerate().find_map(|(i, &r)| {
            let k = &z.poset.nodes[r].domain;
            let n = z.entries[i].len();
            (0..n).find_map(|j| {
                let v = unit_vector(n, j);
                z.poset.stabilizer(r).into_iter().any(|h| f.conj(h, k, &v).unwrap() != v).then_some((i, v))
            })
        });
        let (i, v) = bad.expect("some stabilizer moves a basis vector");
        let mut entries = z.entries.clone();
        entries[i] = v;
        assert!(GhostElt::new(&f, &s3, entries).is_err());
        assert!(GhostElt::new(&f, &s3, z.entries.clone()).is_ok());
    }

    #[test]
    fn unit_is_one_at_the_trivial_group() {
        let (f, _) = trivial_c2();
        let u = upper_unit(&f).unwrap();
        assert_eq!(u.to_vector(), ints(&[1]));
        let one = trivial_group().whole();
        assert_eq!(u.group, one);
    }
}
