//! `F₊`: coinvariant triples `[H, φ, x]_G`, the action of `S₊`, Green
//! lifts, the unit `η`, and extension of natural maps along `η`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::burnside::{BurnsideElt, Coeff};
use crate::error::{Error, Result};
use crate::fiber::{FiberChar, FiberGroup};
use crate::functor::{conj_pair, dot_in, show_char, unit_vector, FunctorSpec, Matrix};
use crate::group::{product_subgroup, trivial_group, GroupHandle, SubgroupRef};
use crate::oracle::ExplicitBiset;
use crate::pairs::{char_of_pair, diagonal_pair, mprime_cached, pair_of_char, FiberedPair, MPrimePoset};
use crate::seed::cut_right;

/// Basis element of `F₊(G)`: an orbit-representative node of `M′(G)` and a
/// representative basis index of `F(H)` modulo the node's stabilizer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TripleKey {
    pub node: usize,
    pub chi: FiberChar,
    pub basis: usize,
}

impl Ord for TripleKey {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.node, self.basis).cmp(&(o.node, o.basis))
    }
}
impl PartialOrd for TripleKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for TripleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", show_char(&self.chi), self.basis)
    }
}

impl TripleKey {
    pub fn label(&self) -> String {
        format!("{self:?}")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PlusElt {
    pub group: SubgroupRef,
    pub coeffs: BTreeMap<TripleKey, Coeff>,
}

impl fmt::Debug for PlusElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(k, c)| format!("{c}{k:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl PlusElt {
    pub fn zero(g: &SubgroupRef) -> Self {
        PlusElt { group: g.clone(), coeffs: BTreeMap::new() }
    }
    pub fn single(g: &SubgroupRef, k: TripleKey, c: Coeff) -> Self {
        let mut x = Self::zero(g);
        x.add_key(k, c);
        x
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn add_key(&mut self, k: TripleKey, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k.clone()).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }
    pub fn add(&self, o: &PlusElt) -> Result<PlusElt> {
        if self.group != o.group {
            return Err(Error::GroupMismatch("plus elements over different groups".into()));
        }
        let mut out = self.clone();
        for (k, &c) in &o.coeffs {
            out.add_key(k.clone(), c);
        }
        Ok(out)
    }
    pub fn scale(&self, c: Coeff) -> PlusElt {
        let mut out = Self::zero(&self.group);
        for (k, &v) in &self.coeffs {
            out.add_key(k.clone(), v * c);
        }
        out
    }
    pub fn sub(&self, o: &PlusElt) -> Result<PlusElt> {
        self.add(&o.scale(-Coeff::one()))
    }
    pub fn terms(&self) -> impl Iterator<Item = (&TripleKey, Coeff)> {
        self.coeffs.iter().map(|(k, &c)| (k, c))
    }
}

/// Canonical basis of `F₊(G)`.
pub struct PlusBasis {
    pub group: SubgroupRef,
    pub poset: Arc<MPrimePoset>,
    pub keys: Vec<TripleKey>,
    index: HashMap<(usize, usize), usize>,
    /// Orbit-least basis index per representative node.
    fold: HashMap<usize, Vec<usize>>,
}

impl PlusBasis {
    fn build(f: &FunctorSpec, g: &SubgroupRef) -> Result<Self> {
        let poset = mprime_cached(g, f.fiber())?;
        let mut keys = Vec::new();
        let mut fold = HashMap::new();
        for rep in poset.orbit_reps() {
            let chi = &poset.nodes[rep];
            let h = &chi.domain;
            let n = f.rank(h)?;
            let mut least: Vec<usize> = (0..n).collect();
            for s in poset.stabilizer(rep) {
                if s == 0 {
                    continue;
                }
                let m = f.act(&conj_pair(s, h, f.fiber())?)?;
                let sigma = m.as_permutation().ok_or_else(|| {
                    Error::Unsupported(format!("conjugation by {s} on F({h:?}) is not a permutation of the basis"))
                })?;
                for i in 0..n {
                    least[i] = least[i].min(sigma[i]);
                }
            }
            for i in 0..n {
                if least[i] == i {
                    keys.push(TripleKey { node: rep, chi: chi.clone(), basis: i });
                }
            }
            fold.insert(rep, least);
        }
        let index = keys.iter().enumerate().map(|(i, k)| ((k.node, k.basis), i)).collect();
        Ok(PlusBasis { group: g.clone(), poset, keys, index, fold })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }
    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
    pub fn position(&self, k: &TripleKey) -> Option<usize> {
        self.index.get(&(k.node, k.basis)).copied()
    }

    pub fn to_vector(&self, x: &PlusElt) -> Result<Vec<Coeff>> {
        if x.group != self.group {
            return Err(Error::GroupMismatch(format!("{:?} vs {:?}", x.group, self.group)));
        }
        let mut v = vec![Coeff::zero(); self.len()];
        for (k, c) in x.terms() {
            let i = self.position(k).ok_or_else(|| Error::Invariant(format!("key {k:?} not in basis")))?;
            v[i] += c;
        }
        Ok(v)
    }

    pub fn from_vector(&self, g: &SubgroupRef, v: &[Coeff]) -> PlusElt {
        let mut x = PlusElt::zero(g);
        for (k, &c) in self.keys.iter().zip(v) {
            x.add_key(k.clone(), c);
        }
        x
    }

    /// `x += c·[K, ψ, v]` for any (not necessarily canonical) `(K, ψ)`.
    pub fn add_raw(&self, f: &FunctorSpec, x: &mut PlusElt, chi: &FiberChar, v: &[Coeff], c: Coeff) -> Result<()> {
        if c.is_zero() || v.iter().all(|a| a.is_zero()) {
            return Ok(());
        }
        let (rep, g) = self.poset.canonical_node(chi);
        let w = f.conj(g, &chi.domain, v)?;
        let least = &self.fold[&rep];
        let node = &self.poset.nodes[rep];
        for (i, a) in w.into_iter().enumerate() {
            if !a.is_zero() {
                x.add_key(TripleKey { node: rep, chi: node.clone(), basis: least[i] }, a * c);
            }
        }
        Ok(())
    }

    pub fn raw(&self, f: &FunctorSpec, chi: &FiberChar, v: &[Coeff]) -> Result<PlusElt> {
        let mut x = PlusElt::zero(&self.group);
        self.add_raw(f, &mut x, chi, v, Coeff::one())?;
        Ok(x)
    }
}

/// Cached basis of `F₊(G)`.
pub fn plus_basis(f: &FunctorSpec, g: &SubgroupRef) -> Result<Arc<PlusBasis>> {
    if let Some(b) = f.plus_bases.lock().unwrap().get(g) {
        return Ok(b.clone());
    }
    let b = Arc::new(PlusBasis::build(f, g)?);
    f.plus_bases.lock().unwrap().insert(g.clone(), b.clone());
    Ok(b)
}

/// `(F(H)-vector, key)` view of a basis triple.
fn key_vector(f: &FunctorSpec, k: &TripleKey) -> Result<Vec<Coeff>> {
    Ok(unit_vector(f.rank(&k.chi.domain)?, k.basis))
}

/// Terms of `F₊([G×H/(D,φ)])([K,ψ,a])` before canonicalization.
pub fn transitive_plus_terms(
    f: &FunctorSpec,
    p: &FiberedPair,
    psi: &FiberChar,
    a: &[Coeff],
) -> Result<Vec<(FiberChar, Vec<Coeff>)>> {
    let h = &p.right;
    let k = &psi.domain;
    let one = trivial_group().whole();
    let mut out = Vec::new();
    for t in h.double_coset_reps(&p.p2(), k) {
        let (tk, tpsi) = (k.conjugate(t), psi.conjugate(t));
        let q = pair_of_char(&tpsi, h, &one, f.fiber());
        let Some(r) = p.star(&q)? else { continue };
        let x = f.act_on(&cut_right(p, &tk)?, &f.conj(t, k, a)?)?;
        out.push((char_of_pair(&r), x));
    }
    Ok(out)
}

/// `F₊(u)(x)` for `u` over `(G, H)` supported on `S₊`.
pub fn plus_act(f: &FunctorSpec, u: &BurnsideElt, x: &PlusElt) -> Result<PlusElt> {
    if u.right != x.group {
        return Err(Error::GroupMismatch(format!("{:?} vs {:?}", u.right, x.group)));
    }
    let seed = f.plus_seed()?;
    let dst = plus_basis(f, &u.left)?;
    let mut out = PlusElt::zero(&u.left);
    for (p, c) in u.terms() {
        if !seed.contains(&p) {
            return Err(Error::NotInSeed(format!("{p:?}")));
        }
        for (k, d) in x.terms() {
            for (chi, v) in transitive_plus_terms(f, &p, &k.chi, &key_vector(f, k)?)? {
                dst.add_raw(f, &mut out, &chi, &v, c * d)?;
            }
        }
    }
    Ok(out)
}

/// `Σ [G_x, φ_x, s(x)]` over `(G×A)`-orbit representatives of a fibered
/// `G`-set, after checking that `s` is `(G, A)`-invariant.
pub fn plus_from_section(
    f: &FunctorSpec,
    x: &ExplicitBiset,
    s: &dyn Fn(u32) -> Vec<Coeff>,
) -> Result<PlusElt> {
    if x.right.order() != 1 {
        return Err(Error::Precondition("section input must be a left set".into()));
    }
    let g = &x.left;
    let stabs: Vec<FiberChar> = (0..x.len() as u32).map(|i| char_of_pair(&x.stab_pair(i))).collect();
    for i in 0..x.len() as u32 {
        let si = s(i);
        for a in 0..f.fiber().order() as u32 {
            if s(x.fiber_act(a, i)) != si {
                return Err(Error::Precondition(format!("section differs on fiber orbit of point {i}")));
            }
        }
        for &h in &g.elements {
            let j = x.act(h, 0, i);
            if f.conj(h, &stabs[i as usize].domain, &si)? != s(j) {
                return Err(Error::Precondition(format!("section not invariant: g={h} at point {i}")));
            }
        }
    }
    let b = plus_basis(f, g)?;
    let mut out = PlusElt::zero(g);
    for i in x.orbit_reps(true, false, true) {
        b.add_raw(f, &mut out, &stabs[i as usize], &s(i), Coeff::one())?;
    }
    Ok(out)
}

/// Same-group product on `F₊(G)` by the double-coset formula.
pub fn plus_dot(f: &FunctorSpec, x: &PlusElt, y: &PlusElt) -> Result<PlusElt> {
    if !f.has_green() {
        return Err(Error::NoGreen);
    }
    if x.group != y.group {
        return Err(Error::GroupMismatch("dot of elements over different groups".into()));
    }
    let g = &x.group;
    let b = plus_basis(f, g)?;
    let mut out = PlusElt::zero(g);
    for (kx, cx) in x.terms() {
        let (h, phi) = (&kx.chi.domain, &kx.chi);
        let xv = key_vector(f, kx)?;
        for (ky, cy) in y.terms() {
            let (k, psi) = (&ky.chi.domain, &ky.chi);
            let yv = key_vector(f, ky)?;
            for t in g.double_coset_reps(h, k) {
                let tk = k.conjugate(t);
                let l = h.intersect(&tk);
                let lam = phi.restrict(&l).times(&psi.conjugate(t).restrict(&l), f.fiber());
                let xl = f.res(&l, h, &xv)?;
                let yl = f.res(&l, &tk, &f.conj(t, k, &yv)?)?;
                b.add_raw(f, &mut out, &lam, &dot_in(f, &l, &xl, &yl)?, cx * cy)?;
            }
        }
    }
    Ok(out)
}

/// `φ × ψ` on `H × K`.
pub fn char_cross(phi: &FiberChar, psi: &FiberChar, f: &FunctorSpec) -> FiberChar {
    let hk = product_subgroup(&phi.domain, &psi.domain);
    let n = psi.domain.parent.order() as u32;
    let values = hk.elements.iter().map(|&e| f.fiber().add(phi.value(e / n), psi.value(e % n))).collect();
    FiberChar { domain: hk, values }
}

/// `x × y ∈ F₊(G × G′)`.
pub fn plus_cross(f: &FunctorSpec, x: &PlusElt, y: &PlusElt) -> Result<PlusElt> {
    if !f.has_green() {
        return Err(Error::NoGreen);
    }
    let gh = product_subgroup(&x.group, &y.group);
    let b = plus_basis(f, &gh)?;
    let mut out = PlusElt::zero(&gh);
    for (kx, cx) in x.terms() {
        for (ky, cy) in y.terms() {
            let v = f.cross(&kx.chi.domain, &key_vector(f, kx)?, &ky.chi.domain, &key_vector(f, ky)?)?;
            b.add_raw(f, &mut out, &char_cross(&kx.chi, &ky.chi, f), &v, cx * cy)?;
        }
    }
    Ok(out)
}

/// `[1, 1, E_F]`.
pub fn plus_unit(f: &FunctorSpec) -> Result<PlusElt> {
    let one = trivial_group().whole();
    plus_basis(f, &one)?.raw(f, &FiberChar::trivial(&one), &f.unit()?)
}

/// `η_G(a) = [G, 1, a]`.
pub fn eta(f: &FunctorSpec, g: &SubgroupRef, a: &[Coeff]) -> Result<PlusElt> {
    plus_basis(f, g)?.raw(f, &FiberChar::trivial(g), a)
}

/// The other side of the unit square for `(D, φ)` over `(G, H)` with full
/// left projection: `[G, φ∗1, F(X)(a)]` with `X = (D,φ)∗(Δ(H),1)`, or zero
/// when `φ₂` is nontrivial on `k₂(D)`.
pub fn eta_twisted(f: &FunctorSpec, p: &FiberedPair, a: &[Coeff]) -> Result<PlusElt> {
    let g = &p.left;
    if p.p1() != *g {
        return Err(Error::Precondition(format!("{p:?} does not have full left projection")));
    }
    let one = trivial_group().whole();
    let q = pair_of_char(&FiberChar::trivial(&p.right), &p.right, &one, f.fiber());
    let Some(r) = p.star(&q)? else { return Ok(PlusElt::zero(g)) };
    let v = f.act_on(&cut_right(p, &p.right)?, a)?;
    plus_basis(f, g)?.raw(f, &char_of_pair(&r), &v)
}

pub type GroupMaps = HashMap<SubgroupRef, Matrix>;

fn neg_char(chi: &FiberChar, a: &FiberGroup) -> FiberChar {
    FiberChar { domain: chi.domain.clone(), values: chi.values.iter().map(|&v| a.neg(v)).collect() }
}

/// The twist `(Δ(G), χ∘diag)` over `(G, G)`.
pub fn twist_pair(chi: &FiberChar, a: &FiberGroup) -> Result<FiberedPair> {
    diagonal_pair(&chi.domain, Some(chi), &chi.domain, &chi.domain, a)
}

/// For an `S₋` class `p = (D,φ)` over `(G,H)`, the pair `(M(T_χ), F(T_χ⁻¹)∘F(X))`
/// with `χ = φ∗1` and `X` as in [`eta_twisted`], so that the square for `p`
/// reads `M(p)∘ψ_H = M(T_χ)∘ψ_G∘F(T_χ⁻¹)∘F(X)`. `None` when `η`'s side vanishes.
fn twisted_side(f: &FunctorSpec, m: &FunctorSpec, p: &FiberedPair) -> Result<Option<(Matrix, Matrix)>> {
    let one = trivial_group().whole();
    let q = pair_of_char(&FiberChar::trivial(&p.right), &p.right, &one, f.fiber());
    let Some(r) = p.star(&q)? else { return Ok(None) };
    let chi = char_of_pair(&r);
    let x = f.act(&cut_right(p, &p.right)?)?;
    let n = f.act(&twist_pair(&neg_char(&chi, f.fiber()), f.fiber())?)?.mul(&x)?;
    let mt = (*m.act(&twist_pair(&chi, f.fiber())?)?).clone();
    Ok(Some((mt, n)))
}

/// First `S₋` class `(D,φ)` over `groups` whose square fails for `ψ`.
/// Untwisted classes give the plain square `M(D,φ)∘ψ_H = ψ_G∘F(D,φ)`.
pub fn naturality_witness(
    f: &FunctorSpec,
    m: &FunctorSpec,
    psi: &GroupMaps,
    groups: &[SubgroupRef],
) -> Result<Option<FiberedPair>> {
    let get = |g: &SubgroupRef| psi.get(g).ok_or_else(|| Error::Precondition(format!("ψ missing at {g:?}")));
    for g in groups {
        for h in groups {
            for c in f.seed().classes(g, h)?.into_iter().filter(|c| c.pair.p1() == *g) {
                let l = m.act(&c.pair)?.mul(get(h)?)?;
                let r = match twisted_side(f, m, &c.pair)? {
                    Some((mt, n)) => mt.mul(&get(g)?.mul(&n)?)?,
                    None => Matrix::zeros(l.rows, l.cols),
                };
                if l != r {
                    return Ok(Some(c.pair));
                }
            }
        }
    }
    Ok(None)
}

/// `Φ_G([H, φ, a]) = M((Δ(H), φ∘diag) over (G, H))(ψ_H(F(T_φ⁻¹)(a)))` on each group.
pub fn extend_nat(f: &FunctorSpec, m: &FunctorSpec, psi: &GroupMaps, groups: &[SubgroupRef]) -> Result<GroupMaps> {
    if let Some(w) = naturality_witness(f, m, psi, groups)? {
        return Err(Error::Precondition(format!("ψ is not natural at {w:?}")));
    }
    let mut out = HashMap::new();
    for g in groups {
        let b = plus_basis(f, g)?;
        let mut cols = Vec::with_capacity(b.len());
        for k in &b.keys {
            let h = &k.chi.domain;
            let ph = psi.get(h).ok_or_else(|| Error::Precondition(format!("ψ missing at {h:?}")))?;
            let ind = diagonal_pair(h, Some(&k.chi), g, h, f.fiber())?;
            let a = f.act_on(&twist_pair(&neg_char(&k.chi, f.fiber()), f.fiber())?, &key_vector(f, k)?)?;
            cols.push(m.act_on(&ind, &ph.apply(&a))?);
        }
        out.insert(g.clone(), Matrix::from_columns(m.rank(g)?, &cols));
    }
    Ok(out)
}

/// A basis of the maps `ψ: F → M` satisfying the `S₋` squares of
/// [`naturality_witness`] over `groups` (each group must appear with all its
/// subgroups).
pub fn natural_maps(f: &FunctorSpec, m: &FunctorSpec, groups: &[SubgroupRef]) -> Result<Vec<GroupMaps>> {
    let mut offset = Vec::with_capacity(groups.len());
    let mut n = 0;
    for g in groups {
        let (r, c) = (m.rank(g)?, f.rank(g)?);
        offset.push((n, r, c));
        n += r * c;
    }
    let pos = |gi: usize, i: usize, j: usize| offset[gi].0 + i * offset[gi].2 + j;
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    for (gi, g) in groups.iter().enumerate() {
        for (hi, h) in groups.iter().enumerate() {
            for c in f.seed().classes(g, h)?.into_iter().filter(|c| c.pair.p1() == *g) {
                let mu = m.act(&c.pair)?;
                let side = twisted_side(f, m, &c.pair)?;
                let (rg, cg) = (offset[gi].1, offset[gi].2);
                let (rh, ch) = (offset[hi].1, offset[hi].2);
                // (M(u) ψ_H)_{ij} - (M(T) ψ_G N)_{ij} = 0
                for i in 0..rg {
                    for j in 0..ch {
                        let mut row = vec![Coeff::zero(); n];
                        for k in 0..rh {
                            row[pos(hi, k, j)] += mu.get(i, k);
                        }
                        if let Some((mt, nn)) = &side {
                            for k in 0..rg {
                                let t = mt.get(i, k);
                                if t.is_zero() {
                                    continue;
                                }
                                for l in 0..cg {
                                    row[pos(gi, k, l)] -= t * nn.get(l, j);
                                }
                            }
                        }
                        if row.iter().any(|v| !v.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for v in crate::functor::nullspace(&rows, n) {
        let mut maps = HashMap::new();
        for (gi, g) in groups.iter().enumerate() {
            let (o, r, c) = offset[gi];
            let rows: Vec<Vec<Coeff>> = (0..r).map(|i| v[o + i * c..o + (i + 1) * c].to_vec()).collect();
            let mut mat = Matrix::zeros(r, c);
            for (i, row) in rows.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    mat.set(i, j, a);
                }
            }
            maps.insert(g.clone(), mat);
        }
        out.push(maps);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::seed::{make_seed, parse_family, restrict_minus, Selector};

    fn z2() -> FiberGroup {
        FiberGroup::parse("2").unwrap()
    }

    fn g(s: &str) -> SubgroupRef {
        build_group(s).unwrap().whole()
    }

    fn trivial(fam: &str) -> Arc<FunctorSpec> {
        let s = make_seed(parse_family(fam).unwrap(), &z2(), Selector::K2Only).unwrap();
        FunctorSpec::trivial(&restrict_minus(&s).unwrap()).unwrap()
    }

    fn burnside(fam: &str) -> Arc<FunctorSpec> {
        FunctorSpec::burnside(&make_seed(parse_family(fam).unwrap(), &z2(), Selector::All).unwrap())
    }

    #[test]
    fn ranks() {
        for (name, rt, rb) in [("C2", 3, 7), ("S3", 6, 21), ("C2xC2", 11, 63)] {
            let fam = format!("{name}-closure");
            assert_eq!(plus_basis(&trivial(&fam), &g(name)).unwrap().len(), rt, "{name}");
            assert_eq!(plus_basis(&burnside(&fam), &g(name)).unwrap().len(), rb, "{name}");
        }
    }

    #[test]
    fn sign_squared_is_one() {
        let open = crate::seed::open_seed(parse_family("C2-closure").unwrap(), &z2(), crate::seed::Rule::All);
        let f = FunctorSpec::trivial(&restrict_minus(&open).unwrap()).unwrap();
        let c2 = g("C2");
        let b = plus_basis(&f, &c2).unwrap();
        let key = |vals: [u32; 2]| b.keys.iter().find(|k| k.chi.domain == c2 && k.chi.values == vals).unwrap().clone();
        let sign = PlusElt::single(&c2, key([0, 1]), Coeff::one());
        let triv = PlusElt::single(&c2, key([0, 0]), Coeff::one());
        assert_eq!(plus_dot(&f, &sign, &sign).unwrap(), triv);
    }

    #[test]
    fn eta_is_the_whole_group_triple() {
        let f = burnside("C2-closure");
        let c2 = g("C2");
        let x = eta(&f, &c2, &unit_vector(f.rank(&c2).unwrap(), 1)).unwrap();
        let (k, c) = x.terms().next().unwrap();
        assert_eq!(x.coeffs.len(), 1);
        assert!(k.chi.domain == c2 && k.chi.is_trivial() && c == Coeff::one());
    }

    #[test]
    fn extension_of_eta_is_identity() {
        let f = trivial("S3-closure");
        let m = FunctorSpec::plus(&f).unwrap();
        let fam = parse_family("S3-closure").unwrap();
        let maps = natural_maps(&f, &m, &fam).unwrap();
        assert_eq!(maps.len(), 1);
        let etas: GroupMaps = fam
            .iter()
            .map(|h| {
                let b = plus_basis(&f, h).unwrap();
                (h.clone(), Matrix::from_columns(b.len(), &[b.to_vector(&eta(&f, h, &[Coeff::one()]).unwrap()).unwrap()]))
            })
            .collect();
        assert!(naturality_witness(&f, &m, &etas, &fam).unwrap().is_none());
        let phi = extend_nat(&f, &m, &etas, &fam).unwrap();
        for h in &fam {
            assert_eq!(phi[h], Matrix::identity(plus_basis(&f, h).unwrap().len()));
        }
    }

    #[test]
    fn unnatural_psi_is_rejected() {
        let f = trivial("C2-closure");
        let m = FunctorSpec::plus(&f).unwrap();
        let fam = parse_family("C2-closure").unwrap();
        // η on C1 but zero on C2 breaks the restriction square.
        let psi: GroupMaps = fam
            .iter()
            .map(|h| {
                let b = plus_basis(&f, h).unwrap();
                let col = if h.order() == 1 { b.to_vector(&eta(&f, h, &[Coeff::one()]).unwrap()).unwrap() } else { vec![Coeff::zero(); b.len()] };
                (h.clone(), Matrix::from_columns(b.len(), &[col]))
            })
            .collect();
        assert!(matches!(extend_nat(&f, &m, &psi, &fam), Err(Error::Precondition(_))));
    }
}
