//! Explicit fibered bisets: realization of transitive classes as coset
//! spaces, tensor products by orbit enumeration, and decomposition through
//! stabilizing pairs. Slow and literal on purpose.

use std::fmt;

use crate::burnside::{BurnsideElt, Coeff, Ring};
use crate::error::{Error, Result};
use crate::fiber::{greedy_generators, FiberGroup};
use crate::group::{GroupOps, SubgroupRef};
use crate::pairs::{FiberedPair, ProductView};

/// Bound on `|G|·|H|·|A|` for realizations.
pub const REALIZE_BOUND: usize = 4096;
/// Bound on `|X|·|Y|` for tensor products.
pub const TENSOR_BOUND: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointLabel {
    /// The coset `(g, h, a)·{(u, φ(u)⁻¹)}` with `(g,h)` least in its coset.
    Coset(u32, u32, u32),
    /// `x ⊗ y` with `(x, y)` the least member of the orbit.
    Tensor(u32, u32),
    /// Point `i` of summand `s` of a disjoint union.
    Summand(usize, u32),
}

/// A finite `(G×H×A)`-set. `lact[i]` is the action of `left.elements[i]`,
/// `ract[j]` the action of `(1, right.elements[j])` (so `x·h⁻¹` in biset
/// notation), `fact[a]` the action of `a ∈ A`.
#[derive(Clone)]
pub struct ExplicitBiset {
    pub left: SubgroupRef,
    pub right: SubgroupRef,
    pub fiber: FiberGroup,
    pub labels: Vec<PointLabel>,
    pub lact: Vec<Vec<u32>>,
    pub ract: Vec<Vec<u32>>,
    pub fact: Vec<Vec<u32>>,
}

impl fmt::Debug for ExplicitBiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Biset({:?},{:?}; {} points)", self.left, self.right, self.len())
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }
    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut y = x;
        while self.0[y as usize] != r {
            let n = self.0[y as usize];
            self.0[y as usize] = r;
            y = n;
        }
        r
    }
    /// Keeps the smaller index as root.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.0[rb as usize] = ra;
        } else if rb < ra {
            self.0[ra as usize] = rb;
        }
    }
}

fn pos(s: &SubgroupRef, x: u32) -> usize {
    s.elements.binary_search(&x).expect("element outside group")
}

fn fiber_generators(a: &FiberGroup) -> Vec<u32> {
    let all: Vec<u32> = (0..a.order() as u32).collect();
    greedy_generators(a, &all)
}

impl ExplicitBiset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `(g, h)·x`, i.e. `g x h⁻¹`.
    pub fn act(&self, g: u32, h: u32, x: u32) -> u32 {
        self.lact[pos(&self.left, g)][self.ract[pos(&self.right, h)][x as usize] as usize]
    }
    pub fn fiber_act(&self, a: u32, x: u32) -> u32 {
        self.fact[a as usize][x as usize]
    }

    /// Action axioms, commutation and fiber-freeness.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let bad = |m: &str| Err(Error::Invariant(format!("{self:?}: {m}")));
        let a = &self.fiber;
        let (lp, rp) = (&self.left.parent, &self.right.parent);
        for (i, &g) in self.left.elements.iter().enumerate() {
            for (j, &h) in self.left.elements.iter().enumerate() {
                let k = pos(&self.left, lp.mul(g, h));
                if (0..n).any(|x| self.lact[k][x] != self.lact[i][self.lact[j][x] as usize]) {
                    return bad("left action not a homomorphism");
                }
            }
        }
        for (i, &g) in self.right.elements.iter().enumerate() {
            for (j, &h) in self.right.elements.iter().enumerate() {
                let k = pos(&self.right, rp.mul(g, h));
                if (0..n).any(|x| self.ract[k][x] != self.ract[i][self.ract[j][x] as usize]) {
                    return bad("right action not a homomorphism");
                }
            }
        }
        for s in 0..a.order() as u32 {
            for t in 0..a.order() as u32 {
                let k = a.add(s, t) as usize;
                if (0..n).any(|x| self.fact[k][x] != self.fact[s as usize][self.fact[t as usize][x] as usize]) {
                    return bad("fiber action not a homomorphism");
                }
            }
            if s != 0 && (0..n).any(|x| self.fact[s as usize][x] == x as u32) {
                return bad("fiber action not free");
            }
        }
        for l in &self.lact {
            for r in &self.ract {
                if (0..n).any(|x| l[r[x] as usize] != r[l[x] as usize]) {
                    return bad("left and right actions do not commute");
                }
            }
            for f in &self.fact {
                if (0..n).any(|x| l[f[x] as usize] != f[l[x] as usize]) {
                    return bad("left and fiber actions do not commute");
                }
            }
        }
        for r in &self.ract {
            for f in &self.fact {
                if (0..n).any(|x| r[f[x] as usize] != f[r[x] as usize]) {
                    return bad("right and fiber actions do not commute");
                }
            }
        }
        Ok(())
    }

    /// `((G×H)_x, φ_x)` with `(g,h)x = φ_x(g,h)·x`.
    pub fn stab_pair(&self, x: u32) -> FiberedPair {
        let mut orbit = vec![u32::MAX; self.len()];
        for a in 0..self.fiber.order() as u32 {
            orbit[self.fact[a as usize][x as usize] as usize] = a;
        }
        let mut triples = Vec::new();
        for (i, &g) in self.left.elements.iter().enumerate() {
            for (j, &h) in self.right.elements.iter().enumerate() {
                let y = self.lact[i][self.ract[j][x as usize] as usize];
                let a = orbit[y as usize];
                if a != u32::MAX {
                    triples.push((g, h, a));
                }
            }
        }
        FiberedPair::new(&self.left, &self.right, &self.fiber, triples).expect("stabilizer is a pair")
    }

    /// Representatives (least points) of the orbits of the subgroup of
    /// `G×H×A` generated by the selected factors.
    pub fn orbit_reps(&self, left: bool, right: bool, fiber: bool) -> Vec<u32> {
        let mut uf = UnionFind::new(self.len());
        let mut moves: Vec<&Vec<u32>> = Vec::new();
        if left {
            for g in greedy_generators(self.left.parent.as_ref(), &self.left.elements) {
                moves.push(&self.lact[pos(&self.left, g)]);
            }
        }
        if right {
            for h in greedy_generators(self.right.parent.as_ref(), &self.right.elements) {
                moves.push(&self.ract[pos(&self.right, h)]);
            }
        }
        if fiber {
            for a in fiber_generators(&self.fiber) {
                moves.push(&self.fact[a as usize]);
            }
        }
        for m in moves {
            for x in 0..self.len() as u32 {
                uf.union(x, m[x as usize]);
            }
        }
        (0..self.len() as u32).filter(|&x| uf.find(x) == x).collect()
    }
}

/// The coset space `(G×H×A)/{(u, φ(u)⁻¹)}`.
pub fn realize(p: &FiberedPair) -> Result<ExplicitBiset> {
    let (g, h, a) = (&p.left, &p.right, &p.fiber);
    let na = a.order();
    if g.order() * h.order() * na > REALIZE_BOUND {
        return Err(Error::Bound(format!("realize {}·{}·{}", g.order(), h.order(), na)));
    }
    let v: ProductView = p.view();
    let size = g.parent.order() * h.parent.order();
    let mut coset = vec![u32::MAX; size];
    let mut offset = vec![0u32; size];
    let mut reps: Vec<(u32, u32)> = Vec::new();
    for &x in &g.elements {
        for &y in &h.elements {
            let c = v.enc(x, y);
            if coset[c as usize] != u32::MAX {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push((x, y));
            for (&u, &val) in p.key.elems.iter().zip(&p.key.vals) {
                let z = v.op(c, u) as usize;
                coset[z] = idx;
                offset[z] = val;
            }
        }
    }
    // point of (x, b): x = c·u gives (c, b·φ(u))
    let point = |x: u32, b: u32| coset[x as usize] * na as u32 + a.add(b, offset[x as usize]);
    let n = reps.len() * na;
    let mut labels = Vec::with_capacity(n);
    for &(x, y) in &reps {
        for b in 0..na as u32 {
            labels.push(PointLabel::Coset(x, y, b));
        }
    }
    let base = |i: usize| {
        let (x, y) = reps[i / na];
        (v.enc(x, y), (i % na) as u32)
    };
    let lact = g
        .elements
        .iter()
        .map(|&s| (0..n).map(|i| { let (c, b) = base(i); point(v.op(v.enc(s, 0), c), b) }).collect())
        .collect();
    let ract = h
        .elements
        .iter()
        .map(|&t| (0..n).map(|i| { let (c, b) = base(i); point(v.op(v.enc(0, t), c), b) }).collect())
        .collect();
    let fact = (0..na as u32)
        .map(|s| (0..n).map(|i| { let (c, b) = base(i); point(c, a.add(s, b)) }).collect())
        .collect();
    Ok(ExplicitBiset { left: g.clone(), right: h.clone(), fiber: a.clone(), labels, lact, ract, fact })
}

/// Disjoint union.
pub fn disjoint_union(xs: &[ExplicitBiset]) -> Result<ExplicitBiset> {
    let first = xs.first().ok_or_else(|| Error::Precondition("empty union".into()))?;
    let mut out = ExplicitBiset {
        left: first.left.clone(),
        right: first.right.clone(),
        fiber: first.fiber.clone(),
        labels: Vec::new(),
        lact: vec![Vec::new(); first.lact.len()],
        ract: vec![Vec::new(); first.ract.len()],
        fact: vec![Vec::new(); first.fact.len()],
    };
    for (s, x) in xs.iter().enumerate() {
        if x.left != first.left || x.right != first.right || x.fiber != first.fiber {
            return Err(Error::GroupMismatch("union of bisets over different groups".into()));
        }
        let off = out.labels.len() as u32;
        out.labels.extend((0..x.len() as u32).map(|i| PointLabel::Summand(s, i)));
        for (dst, src) in out.lact.iter_mut().zip(&x.lact) {
            dst.extend(src.iter().map(|&y| y + off));
        }
        for (dst, src) in out.ract.iter_mut().zip(&x.ract) {
            dst.extend(src.iter().map(|&y| y + off));
        }
        for (dst, src) in out.fact.iter_mut().zip(&x.fact) {
            dst.extend(src.iter().map(|&y| y + off));
        }
    }
    Ok(out)
}

/// Realization of an element with non-negative integer coefficients.
pub fn realize_elt(x: &BurnsideElt) -> Result<ExplicitBiset> {
    let mut parts = Vec::new();
    for (p, c) in x.terms() {
        if !c.is_integer() || c < Coeff::from_integer(0) {
            return Err(Error::Precondition("only non-negative integer sums are realizable".into()));
        }
        let r = realize(&p)?;
        for _ in 0..c.to_integer() {
            parts.push(r.clone());
        }
    }
    if parts.is_empty() {
        return Ok(ExplicitBiset {
            left: x.left.clone(),
            right: x.right.clone(),
            fiber: x.fiber.clone(),
            labels: Vec::new(),
            lact: vec![Vec::new(); x.left.order()],
            ract: vec![Vec::new(); x.right.order()],
            fact: vec![Vec::new(); x.fiber.order()],
        });
    }
    disjoint_union(&parts)
}

/// `X ⊗_{AH} Y`: the `A`-free orbits of `H×A` on `X×Y` under
/// `(h,a)(x,y) = (x(ha)⁻¹, hay)`.
pub fn tensor(x: &ExplicitBiset, y: &ExplicitBiset) -> Result<ExplicitBiset> {
    if x.right != y.left {
        return Err(Error::GroupMismatch(format!("{:?} vs {:?}", x.right, y.left)));
    }
    if x.fiber != y.fiber {
        return Err(Error::FiberMismatch);
    }
    let (nx, ny) = (x.len(), y.len());
    if nx * ny > TENSOR_BOUND {
        return Err(Error::Bound(format!("tensor {nx}x{ny}")));
    }
    let a = &x.fiber;
    let h = &x.right;
    let idx = |p: usize, q: usize| (p * ny + q) as u32;
    let mut uf = UnionFind::new(nx * ny);
    for t in greedy_generators(h.parent.as_ref(), &h.elements) {
        // (t,1): ((1,t)x, (t,1)y)
        let (rx, ly) = (&x.ract[pos(h, t)], &y.lact[pos(&y.left, t)]);
        for p in 0..nx {
            for q in 0..ny {
                uf.union(idx(p, q), idx(rx[p] as usize, ly[q] as usize));
            }
        }
    }
    for s in fiber_generators(a) {
        let (fx, fy) = (&x.fact[a.neg(s) as usize], &y.fact[s as usize]);
        for p in 0..nx {
            for q in 0..ny {
                uf.union(idx(p, q), idx(fx[p] as usize, fy[q] as usize));
            }
        }
    }
    let mut new_index = vec![u32::MAX; nx * ny];
    let mut labels = Vec::new();
    let mut reps = Vec::new();
    for r in 0..(nx * ny) as u32 {
        if uf.find(r) != r {
            continue;
        }
        let (p, q) = (r as usize / ny, r as usize % ny);
        let free = (1..a.order()).all(|s| uf.find(idx(x.fact[s][p] as usize, q)) != r);
        if free {
            new_index[r as usize] = labels.len() as u32;
            labels.push(PointLabel::Tensor(p as u32, q as u32));
            reps.push((p, q));
        }
    }
    let mut look = |p: usize, q: usize| new_index[uf.find(idx(p, q)) as usize];
    let lact = x
        .lact
        .iter()
        .map(|l| reps.iter().map(|&(p, q)| look(l[p] as usize, q)).collect())
        .collect();
    let ract = y
        .ract
        .iter()
        .map(|r| reps.iter().map(|&(p, q)| look(p, r[q] as usize)).collect())
        .collect();
    let fact = x
        .fact
        .iter()
        .map(|f| reps.iter().map(|&(p, q)| look(f[p] as usize, q)).collect())
        .collect();
    Ok(ExplicitBiset { left: x.left.clone(), right: y.right.clone(), fiber: a.clone(), labels, lact, ract, fact })
}

/// Sum over `(G×H×A)`-orbits of the classes of their stabilizing pairs.
pub fn decompose(x: &ExplicitBiset, ring: Ring) -> BurnsideElt {
    let mut out = BurnsideElt::zero(&x.left, &x.right, &x.fiber, ring);
    for r in x.orbit_reps(true, true, true) {
        out.add_pair(&x.stab_pair(r), Coeff::from_integer(1));
    }
    out
}

/// `decompose(tensor(realize(x), realize(y)))` for basis classes.
pub fn oracle_product(p: &FiberedPair, q: &FiberedPair, ring: Ring) -> Result<BurnsideElt> {
    Ok(decompose(&tensor(&realize(p)?, &realize(q)?)?, ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::{elementary_pair, mackey_product, ElementaryKind};
    use crate::fiber::homs_to_fiber;
    use crate::group::{build_group, generated, permutations, GroupHandle};
    use crate::pairs::{diagonal_pair, identity_pair};

    fn z2() -> FiberGroup {
        FiberGroup::parse("2").unwrap()
    }

    #[test]
    fn realize_sizes() {
        let c2 = build_group("C2").unwrap().whole();
        let id = identity_pair(&c2, &z2());
        let x = realize(&id).unwrap();
        assert_eq!(x.len(), 4);
        x.validate().unwrap();
        let free = FiberedPair::new(&c2, &c2, &z2(), [(0, 0, 0)]).unwrap();
        let y = realize(&free).unwrap();
        assert_eq!(y.len(), 8);
        y.validate().unwrap();
        assert_eq!(y.stab_pair(0), free);
        assert_eq!(decompose(&y, Ring::Z), BurnsideElt::basis(&free, Ring::Z));
    }

    #[test]
    fn stab_of_base_point_is_the_pair() {
        let s3 = build_group("S3").unwrap().whole();
        for c in crate::pairs::pair_classes(&s3, &s3, &z2()).unwrap().iter() {
            let x = realize(&c.pair).unwrap();
            assert_eq!(x.len(), 36 * 2 / c.pair.order());
            assert_eq!(x.stab_pair(0), c.pair);
        }
    }

    #[test]
    fn res_ind_tensor_has_two_pieces() {
        let s3 = build_group("S3").unwrap();
        let g = s3.whole();
        let t = permutations(3).iter().position(|q| q[..] == [1, 0, 2]).unwrap() as u32;
        let c2 = generated(&s3, &[t]);
        let res = elementary_pair(&ElementaryKind::Res { g: g.clone(), k: c2.clone() }, &z2()).unwrap();
        let ind = elementary_pair(&ElementaryKind::Ind { g: g.clone(), k: c2.clone() }, &z2()).unwrap();
        let d = oracle_product(&res, &ind, Ring::Z).unwrap();
        assert_eq!(d.coeffs.len(), 2);
        let m = mackey_product(&BurnsideElt::basis(&res, Ring::Z), &BurnsideElt::basis(&ind, Ring::Z)).unwrap();
        assert_eq!(d, m);
    }

    #[test]
    fn character_mismatch_discards_everything() {
        let c2 = build_group("C2").unwrap().whole();
        let sigma = homs_to_fiber(&c2, &z2())[1].clone();
        // k2 = C2 with φ₂ = σ on the left factor, k1 = C2 with ψ₁ = 1 on the right
        let full_sigma = FiberedPair::new(&c2, &c2, &z2(), (0..2).flat_map(|g| (0..2).map(move |h| (g, h, h)))).unwrap();
        let full_one = FiberedPair::new(&c2, &c2, &z2(), (0..2).flat_map(|g| (0..2).map(move |h| (g, h, 0)))).unwrap();
        let d = oracle_product(&full_sigma, &full_one, Ring::Z).unwrap();
        assert!(d.is_zero());
        let tw = diagonal_pair(&c2, Some(&sigma), &c2, &c2, &z2()).unwrap();
        assert!(!oracle_product(&tw, &full_one, Ring::Z).unwrap().is_zero());
    }
}
