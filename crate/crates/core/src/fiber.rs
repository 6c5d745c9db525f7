//! The fiber group `A` (a finite product of cyclic groups) and characters
//! into it.
//!
//! Elements of `A` are stored as a single mixed-radix index; the group law is
//! componentwise addition. Displays are multiplicative only in docs.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::group::{closure, FiniteGroup, GroupOps, SubgroupRef};

/// Bound on `|A|`.
pub const FIBER_BOUND: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiberGroup {
    orders: Arc<[u32]>,
    size: u32,
}

impl fmt::Debug for FiberGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{:?}", &self.orders[..])
    }
}

impl FiberGroup {
    pub fn new(orders: &[u32]) -> Result<Self> {
        if orders.iter().any(|&n| n < 2) {
            return Err(Error::Parse("fiber cyclic orders must be >= 2".into()));
        }
        let size: u32 = orders.iter().product();
        if size as usize > FIBER_BOUND {
            return Err(Error::Bound(format!("fiber of order {size}")));
        }
        Ok(FiberGroup { orders: orders.into(), size })
    }

    pub fn trivial() -> Self {
        FiberGroup { orders: Arc::from(Vec::new()), size: 1 }
    }

    /// `"2"`, `"4"`, `"2,3"`; `"1"` or `""` is the trivial fiber.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() || spec == "1" {
            return Ok(Self::trivial());
        }
        let orders = spec
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad fiber '{spec}'"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&orders)
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }
    pub fn order(&self) -> usize {
        self.size as usize
    }
    pub fn spec(&self) -> String {
        if self.orders.is_empty() {
            "1".into()
        } else {
            self.orders.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn components(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        let mut out = vec![0; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            out[i] = a % self.orders[i];
            a /= self.orders[i];
        }
        out
    }

    pub fn from_components(&self, c: &[u32]) -> u32 {
        c.iter().zip(self.orders.iter()).fold(0, |acc, (&x, &n)| acc * n + x % n)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.orders.len() == 1 {
            return (a + b) % self.size;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut radix = 1;
        for &n in self.orders.iter().rev() {
            out += ((a % n + b % n) % n) * radix;
            radix *= n;
            a /= n;
            b /= n;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.orders.len() == 1 {
            return (self.size - a) % self.size;
        }
        let (mut a, mut out, mut radix) = (a, 0, 1);
        for &n in self.orders.iter().rev() {
            out += ((n - a % n) % n) * radix;
            radix *= n;
            a /= n;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Human form of an element: `0`, `1`, or `(1,2)` for several factors.
    pub fn show(&self, a: u32) -> String {
        let c = self.components(a);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

impl GroupOps for FiberGroup {
    fn size(&self) -> usize {
        self.size as usize
    }
    fn op(&self, a: u32, b: u32) -> u32 {
        self.add(a, b)
    }
    fn invert(&self, a: u32) -> u32 {
        self.neg(a)
    }
}

/// Greedy small generating set of the subgroup `elements` of `t`.
pub fn greedy_generators<T: GroupOps + ?Sized>(t: &T, elements: &[u32]) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut span = vec![0u32];
    while span.len() < elements.len() {
        let mut best: Option<(usize, u32)> = None;
        for &x in elements {
            if span.binary_search(&x).is_ok() {
                continue;
            }
            let mut g = gens.clone();
            g.push(x);
            let n = closure(t, &g).len();
            if best.map_or(true, |(m, _)| n > m) {
                best = Some((n, x));
            }
        }
        let (_, x) = best.expect("elements not a subgroup");
        gens.push(x);
        span = closure(t, &gens);
    }
    gens
}

/// All homomorphisms from the subgroup `elements` of `t` into `a`, each as a
/// value list aligned with `elements`. Sorted by value list.
pub fn homs_generic<T: GroupOps + ?Sized>(t: &T, elements: &[u32], a: &FiberGroup) -> Vec<Vec<u32>> {
    if a.order() == 1 {
        return vec![vec![0; elements.len()]];
    }
    let gens = greedy_generators(t, elements);
    let idx = |x: u32| elements.binary_search(&x).expect("not closed");
    let mut out = Vec::new();
    let k = gens.len();
    let total = (a.order() as u64).pow(k as u32);
    let mut vals = vec![u32::MAX; elements.len()];
    let mut queue = Vec::with_capacity(elements.len());
    'assign: for code in 0..total {
        let mut c = code;
        let imgs: Vec<u32> = (0..k)
            .map(|_| {
                let v = (c % a.order() as u64) as u32;
                c /= a.order() as u64;
                v
            })
            .collect();
        vals.iter_mut().for_each(|v| *v = u32::MAX);
        vals[0] = 0;
        queue.clear();
        queue.push(0u32);
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            let vx = vals[idx(x)];
            for (j, &g) in gens.iter().enumerate() {
                let y = t.op(x, g);
                let want = a.add(vx, imgs[j]);
                let slot = &mut vals[idx(y)];
                if *slot == u32::MAX {
                    *slot = want;
                    queue.push(y);
                } else if *slot != want {
                    continue 'assign;
                }
            }
        }
        debug_assert!(elements.iter().enumerate().all(|(i, &x)| elements
            .iter()
            .enumerate()
            .all(|(j, &y)| vals[idx(t.op(x, y))] == a.add(vals[i], vals[j]))));
        out.push(vals.clone());
    }
    out.sort();
    out.dedup();
    out
}

type HomKey = (usize, Vec<u32>, FiberGroup);

fn hom_cache() -> &'static Mutex<HashMap<HomKey, (Arc<FiniteGroup>, Arc<Vec<Vec<u32>>>)>> {
    static C: OnceLock<Mutex<HashMap<HomKey, (Arc<FiniteGroup>, Arc<Vec<Vec<u32>>>)>>> =
        OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A homomorphism from a subgroup into `A`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiberChar {
    pub domain: SubgroupRef,
    pub values: Vec<u32>,
}

impl fmt::Debug for FiberChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?})", self.domain, self.values)
    }
}

impl FiberChar {
    pub fn trivial(domain: &SubgroupRef) -> Self {
        FiberChar { domain: domain.clone(), values: vec![0; domain.order()] }
    }
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
    pub fn value(&self, x: u32) -> u32 {
        self.values[self.domain.elements.binary_search(&x).expect("outside domain")]
    }
    pub fn restrict(&self, l: &SubgroupRef) -> FiberChar {
        FiberChar { domain: l.clone(), values: l.elements.iter().map(|&x| self.value(x)).collect() }
    }
    /// `^gλ`, the character `g x g⁻¹ ↦ λ(x)` on `^gK`.
    pub fn conjugate(&self, g: u32) -> FiberChar {
        let p = &self.domain.parent;
        let mut pairs: Vec<(u32, u32)> =
            self.domain.elements.iter().zip(&self.values).map(|(&x, &v)| (p.conj(g, x), v)).collect();
        pairs.sort_unstable();
        FiberChar {
            domain: SubgroupRef { parent: p.clone(), elements: pairs.iter().map(|x| x.0).collect() },
            values: pairs.iter().map(|x| x.1).collect(),
        }
    }
    pub fn times(&self, other: &FiberChar, a: &FiberGroup) -> FiberChar {
        assert_eq!(self.domain, other.domain);
        FiberChar {
            domain: self.domain.clone(),
            values: self.values.iter().zip(&other.values).map(|(&x, &y)| a.add(x, y)).collect(),
        }
    }
    pub fn kernel(&self) -> SubgroupRef {
        let els = self.domain.elements.iter().zip(&self.values).filter(|(_, &v)| v == 0).map(|(&x, _)| x);
        SubgroupRef { parent: self.domain.parent.clone(), elements: els.collect() }
    }
    pub fn is_homomorphism(&self, a: &FiberGroup) -> bool {
        let p = &self.domain.parent;
        self.domain.elements.iter().zip(&self.values).all(|(&x, &vx)| {
            self.domain.elements.iter().zip(&self.values).all(|(&y, &vy)| self.value(p.mul(x, y)) == a.add(vx, vy))
        })
    }
}

/// `Hom(H, A)`, sorted with the trivial character first.
pub fn homs_to_fiber(h: &SubgroupRef, a: &FiberGroup) -> Vec<FiberChar> {
    let key = (Arc::as_ptr(&h.parent) as usize, h.elements.clone(), a.clone());
    let cached = hom_cache().lock().unwrap().get(&key).map(|(_, v)| v.clone());
    let vals = match cached {
        Some(v) => v,
        None => {
            let v = Arc::new(homs_generic(h.parent.as_ref(), &h.elements, a));
            hom_cache().lock().unwrap().insert(key, (h.parent.clone(), v.clone()));
            v
        }
    };
    vals.iter().map(|v| FiberChar { domain: h.clone(), values: v.clone() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, subgroups, GroupHandle};

    #[test]
    fn fiber_arithmetic() {
        let a = FiberGroup::parse("2,3").unwrap();
        assert_eq!(a.order(), 6);
        for x in 0..6 {
            assert_eq!(a.add(x, a.neg(x)), 0);
            for y in 0..6 {
                assert_eq!(a.add(x, y), a.add(y, x));
            }
        }
        assert_eq!(a.components(a.from_components(&[1, 2])), vec![1, 2]);
        assert_eq!(FiberGroup::parse("1").unwrap().order(), 1);
        assert!(FiberGroup::parse("0").is_err());
        assert!(FiberGroup::parse("x").is_err());
    }

    #[test]
    fn hom_counts() {
        let z2 = FiberGroup::parse("2").unwrap();
        let c2 = build_group("C2").unwrap();
        assert_eq!(homs_to_fiber(&c2.whole(), &z2).len(), 2);
        let c3 = build_group("C3").unwrap();
        assert_eq!(homs_to_fiber(&c3.whole(), &z2).len(), 1);
        let s3 = build_group("S3").unwrap();
        let hs = homs_to_fiber(&s3.whole(), &z2);
        assert_eq!(hs.len(), 2);
        assert!(hs[0].is_trivial());
        let z4 = FiberGroup::parse("4").unwrap();
        let c4c2 = build_group("C4xC2").unwrap();
        // Hom(C4 x C2, Z/4) = Z/4 x Z/2
        assert_eq!(homs_to_fiber(&c4c2.whole(), &z4).len(), 8);
        let q8 = build_group("Q8").unwrap();
        assert_eq!(homs_to_fiber(&q8.whole(), &z4).len(), 4);
        for h in subgroups(&build_group("D8").unwrap()).unwrap() {
            for c in homs_to_fiber(&h, &z4) {
                assert!(c.is_homomorphism(&z4));
            }
        }
    }

    #[test]
    fn char_conjugate_and_kernel() {
        let z2 = FiberGroup::parse("2").unwrap();
        let s3 = build_group("S3").unwrap();
        let sign = homs_to_fiber(&s3.whole(), &z2)[1].clone();
        assert_eq!(sign.kernel().order(), 3);
        for g in 0..6 {
            assert_eq!(sign.conjugate(g), sign);
        }
    }
}
