//! Verification suites. Each suite returns one record per case with a
//! pass flag, a count of checks and the first failure witness.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::burnside::{butterfly, mackey_chain, mackey_product, BurnsideElt, Coeff, Ring};
use crate::error::{Error, Result};
use crate::fiber::{FiberChar, FiberGroup};
use crate::functor::{check_functor, check_green, unit_vector, FunctorSpec, Matrix};
use crate::group::{build_group, quotient, subgroups_of, GroupHandle, SubgroupRef};
use crate::oracle::oracle_product;
use crate::pairs::{identity_pair, pair_classes, pair_cross, pair_of_char, FiberedPair};
use crate::plus::{
    eta, eta_twisted, extend_nat, natural_maps, plus_act, plus_basis, plus_cross, plus_dot, plus_unit,
    transitive_plus_terms, GroupMaps, PlusElt,
};
use crate::seed::{
    check_axioms, check_some, lift_plus, lift_upper, make_seed, open_seed, parse_family, restrict_minus,
    subgroup_closure, Rule, SeedData, Selector,
};
use crate::upper::{mark, nmap, upper_act, upper_act_with, upper_cross, upper_dot, upper_unit, GhostElt, OrbitSource};

pub const SUITES: [&str; 9] = [
    "mackey",
    "axioms",
    "plus-functorial",
    "upper-functorial",
    "mark-square",
    "mobius-inverse",
    "green",
    "monomial",
    "adjunction",
];

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Case {
    pub suite: String,
    pub case: String,
    pub pass: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub family: Option<String>,
    pub group: Option<String>,
    pub fiber: FiberGroup,
    pub selector: Option<String>,
    pub samples: Option<usize>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            family: None,
            group: None,
            fiber: FiberGroup::parse("2").unwrap(),
            selector: None,
            samples: None,
            seed: 0,
        }
    }
}

struct Cases {
    suite: &'static str,
    out: Vec<Case>,
}

impl Cases {
    fn new(suite: &'static str) -> Self {
        Cases { suite, out: Vec::new() }
    }
    fn push(&mut self, case: impl Into<String>, checked: usize, witness: Option<String>) {
        self.out.push(Case { suite: self.suite.into(), case: case.into(), pass: witness.is_none(), checked, witness });
    }
}

/// Tally of checks with the first failure.
#[derive(Default)]
struct Tally {
    n: usize,
    witness: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.n += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(what());
        }
    }
}

pub fn run_suite(name: &str, o: &Options) -> Result<Vec<Case>> {
    match name {
        "mackey" => mackey_suite(o),
        "axioms" => axioms_suite(o),
        "plus-functorial" => plus_functorial_suite(o),
        "upper-functorial" => upper_functorial_suite(o),
        "mark-square" => mark_square_suite(o),
        "mobius-inverse" => mobius_suite(o),
        "green" => green_suite(o),
        "monomial" => monomial_suite(o),
        "adjunction" => adjunction_suite(o),
        _ => Err(Error::Parse(format!("unknown suite '{name}'"))),
    }
}

fn rng(o: &Options) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(o.seed)
}

fn family_or(o: &Options, default: &str) -> Result<Vec<SubgroupRef>> {
    parse_family(o.family.as_deref().unwrap_or(default))
}

fn group_list(o: &Options, default: &[&str]) -> Result<Vec<SubgroupRef>> {
    match &o.group {
        Some(g) => Ok(vec![build_group(g)?.whole()]),
        None => default.iter().map(|s| Ok(build_group(s)?.whole())).collect(),
    }
}

/// The trivial functor on `S₋` of the k2only seed over `family`.
pub fn trivial_on(family: Vec<SubgroupRef>, a: &FiberGroup) -> Result<Arc<FunctorSpec>> {
    FunctorSpec::trivial(&restrict_minus(&make_seed(family, a, Selector::K2Only)?)?)
}

fn random_plus(f: &FunctorSpec, g: &SubgroupRef, r: &mut ChaCha8Rng) -> Result<PlusElt> {
    let b = plus_basis(f, g)?;
    let mut x = PlusElt::zero(g);
    for _ in 0..r.gen_range(1..=3) {
        let k = b.keys[r.gen_range(0..b.len())].clone();
        x.add_key(k, Coeff::from_integer(r.gen_range(-3..=3)));
    }
    Ok(x)
}

/// Random element of `F⁺(G)`: stabilizer sums of random integer vectors.
fn random_ghost(f: &FunctorSpec, g: &SubgroupRef, r: &mut ChaCha8Rng) -> Result<GhostElt> {
    let mut x = GhostElt::zero(f, g)?;
    for (i, &rep) in x.reps.clone().iter().enumerate() {
        let k = x.poset.nodes[rep].domain.clone();
        let n = x.entries[i].len();
        let v: Vec<Coeff> = (0..n).map(|_| Coeff::from_integer(r.gen_range(-2..=2))).collect();
        let mut s = vec![Coeff::zero(); n];
        for h in x.poset.stabilizer(rep) {
            for (a, b) in s.iter_mut().zip(f.conj(h, &k, &v)?) {
                *a += b;
            }
        }
        x.entries[i] = s;
    }
    Ok(x)
}

/// Basis of `F⁺(G)`: stabilizer-orbit sums at each representative.
pub fn ghost_basis(f: &FunctorSpec, g: &SubgroupRef) -> Result<Vec<GhostElt>> {
    let z = GhostElt::zero(f, g)?;
    let mut out = Vec::new();
    for (i, &rep) in z.reps.iter().enumerate() {
        let k = &z.poset.nodes[rep].domain;
        let n = z.entries[i].len();
        let mut seen = vec![false; n];
        for j in 0..n {
            if seen[j] {
                continue;
            }
            let mut v = vec![Coeff::zero(); n];
            for h in z.poset.stabilizer(rep) {
                let w = f.conj(h, k, &unit_vector(n, j))?;
                let t = w.iter().position(|c| !c.is_zero()).expect("permutation action");
                if !seen[t] {
                    seen[t] = true;
                    v[t] = Coeff::one();
                }
            }
            let mut x = z.clone();
            x.entries[i] = v;
            out.push(x);
        }
    }
    Ok(out)
}

/// Random class `(G, H, p)` of the seed over random family members.
fn random_class(seed: &SeedData, groups: &[SubgroupRef], r: &mut ChaCha8Rng) -> Result<Option<FiberedPair>> {
    let g = groups.choose(r).unwrap();
    let h = groups.choose(r).unwrap();
    let cl = seed.classes(g, h)?;
    Ok(cl.choose(r).map(|c| c.pair.clone()))
}

fn random_composable(
    seed: &SeedData,
    groups: &[SubgroupRef],
    r: &mut ChaCha8Rng,
) -> Result<Option<(FiberedPair, FiberedPair)>> {
    let (g, h, k) = (groups.choose(r).unwrap(), groups.choose(r).unwrap(), groups.choose(r).unwrap());
    let (cu, cv) = (seed.classes(g, h)?, seed.classes(h, k)?);
    match (cu.choose(r), cv.choose(r)) {
        (Some(u), Some(v)) => Ok(Some((u.pair.clone(), v.pair.clone()))),
        _ => Ok(None),
    }
}

fn basis(p: &FiberedPair) -> BurnsideElt {
    BurnsideElt::basis(p, Ring::Z)
}

fn in_seed(seed: &SeedData, u: &BurnsideElt) -> bool {
    u.terms().all(|(p, _)| seed.contains(&p))
}

fn mackey_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("mackey");
    let fam = family_or(o, "C2,C4,C2xC2,S3")?;
    let mut t = Tally::default();
    for g in &fam {
        for h in &fam {
            for k in &fam {
                let (cu, cv) = (pair_classes(g, h, &o.fiber)?, pair_classes(h, k, &o.fiber)?);
                for u in cu.iter() {
                    for v in cv.iter() {
                        let lhs = mackey_product(&basis(&u.pair), &basis(&v.pair))?;
                        let rhs = oracle_product(&u.pair, &v.pair, Ring::Z)?;
                        t.check(lhs == rhs, || format!("{:?} ⊗ {:?}", u.pair, v.pair));
                    }
                }
            }
        }
    }
    c.push(format!("exhaustive fiber {}", o.fiber.spec()), t.n, t.witness);

    let a4 = FiberGroup::parse("4")?;
    let mut r = rng(o);
    let mut t = Tally::default();
    let want = o.samples.unwrap_or(50);
    while t.n < want {
        let (g, h, k) = (fam.choose(&mut r).unwrap(), fam.choose(&mut r).unwrap(), fam.choose(&mut r).unwrap());
        let (cu, cv) = (pair_classes(g, h, &a4)?, pair_classes(h, k, &a4)?);
        let u = &cu[r.gen_range(0..cu.len())].pair;
        let v = &cv[r.gen_range(0..cv.len())].pair;
        let lhs = mackey_product(&basis(u), &basis(v))?;
        t.check(lhs == oracle_product(u, v, Ring::Z)?, || format!("{u:?} ⊗ {v:?}"));
    }
    c.push("sampled fiber 4", t.n, t.witness);

    // Identity and associativity over small groups.
    let small: Vec<SubgroupRef> =
        ["C2", "C3", "C4", "C2xC2", "S3", "C6"].iter().map(|s| Ok(build_group(s)?.whole())).collect::<Result<_>>()?;
    let mut t = Tally::default();
    let want = o.samples.map_or(200, |s| s.max(200));
    while t.n < want {
        let gs: Vec<&SubgroupRef> = (0..4).map(|_| small.choose(&mut r).unwrap()).collect();
        let pick = |g: &SubgroupRef, h: &SubgroupRef, r: &mut ChaCha8Rng| -> Result<FiberedPair> {
            let cl = pair_classes(g, h, &o.fiber)?;
            Ok(cl[r.gen_range(0..cl.len())].pair.clone())
        };
        let (x, y, z) = (pick(gs[0], gs[1], &mut r)?, pick(gs[1], gs[2], &mut r)?, pick(gs[2], gs[3], &mut r)?);
        let (x, y, z) = (basis(&x), basis(&y), basis(&z));
        let l = mackey_product(&mackey_product(&x, &y)?, &z)?;
        let rr = mackey_product(&x, &mackey_product(&y, &z)?)?;
        let id = BurnsideElt::identity(gs[0], &o.fiber, Ring::Z);
        let idr = BurnsideElt::identity(gs[1], &o.fiber, Ring::Z);
        let ok = l == rr && mackey_product(&id, &x)? == x && mackey_product(&x, &idr)? == x;
        t.check(ok, || format!("{x:?}, {y:?}, {z:?}"));
    }
    c.push("category laws", t.n, t.witness);

    // Butterfly recomposition.
    let mut t = Tally::default();
    for (gs, hs) in [("S3", "S3"), ("D8", "C2xC2")] {
        let (g, h) = (build_group(gs)?.whole(), build_group(hs)?.whole());
        for cl in pair_classes(&g, &h, &o.fiber)?.iter() {
            let prod = mackey_chain(&butterfly(&cl.pair, Ring::Z)?)?;
            t.check(prod == basis(&cl.pair), || format!("{:?}", cl.pair));
        }
    }
    c.push("butterfly", t.n, t.witness);
    Ok(c.out)
}

fn axioms_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("axioms");
    let fam = family_or(o, "S3-closure")?;
    let sels: Vec<String> = match &o.selector {
        Some(s) => vec![s.clone()],
        None => vec!["all".into(), "k2only".into()],
    };
    let lower = ["i", "ii", "iii", "iv"];
    let upper = ["i", "ii", "iii", "vii", "viii"];
    for sel in sels {
        let s = make_seed(fam.clone(), &o.fiber, Selector::parse(&sel)?)?;
        let rep = check_axioms(&s)?;
        let expect: Vec<&str> = if sel == "all" {
            vec!["i", "ii", "iii", "iv", "v", "vi", "vii", "viii"]
        } else {
            vec!["i", "ii", "iii", "vii", "viii", "k2"]
        };
        for v in &rep.verdicts {
            if expect.contains(&v.axiom) {
                c.push(format!("{sel} axiom {}", v.axiom), 1, (!v.holds).then(|| v.witness.clone().unwrap_or_default()));
            }
        }
        if rep.all_hold(&lower) {
            let p = lift_plus(&s)?;
            let r = check_some(&p, &lower)?;
            c.push(format!("{sel} lift-plus axioms"), lower.len(), (!r.all_hold(&lower)).then(|| format!("{:?}", r.failing())));
            let pp = lift_plus(&p)?;
            let same = pp.class_table()? == p.class_table()?;
            c.push(format!("{sel} lift-plus idempotent"), 1, (!same).then(|| "class tables differ".into()));
            let mp = lift_plus(&restrict_minus(&s)?)?;
            let same = mp.class_table()? == p.class_table()?;
            c.push(format!("{sel} minus then plus"), 1, (!same).then(|| "class tables differ".into()));
        }
        if rep.all_hold(&upper) {
            let u = lift_upper(&s)?;
            let r = check_some(&u, &upper)?;
            c.push(format!("{sel} lift-upper axioms"), upper.len(), (!r.all_hold(&upper)).then(|| format!("{:?}", r.failing())));
            let uu = lift_upper(&u)?;
            let same = uu.class_table()? == u.class_table()?;
            c.push(format!("{sel} lift-upper idempotent"), 1, (!same).then(|| "class tables differ".into()));
        }
    }
    Ok(c.out)
}

/// Functors exercised by the F₊ suites, with their seeds.
fn plus_functors(fam: &[SubgroupRef], a: &FiberGroup) -> Result<Vec<Arc<FunctorSpec>>> {
    Ok(vec![
        trivial_on(fam.to_vec(), a)?,
        FunctorSpec::burnside(&make_seed(fam.to_vec(), a, Selector::All)?),
    ])
}

fn plus_functorial_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("plus-functorial");
    let fam = family_or(o, "S3-closure")?;
    let mut r = rng(o);
    let want = o.samples.unwrap_or(100);
    for f in plus_functors(&fam, &o.fiber)? {
        let sp = f.plus_seed()?;
        let mut t = Tally::default();
        let mut tries = 0;
        while t.n < want && tries < want * 50 {
            tries += 1;
            let Some((u, v)) = random_composable(&sp, &fam, &mut r)? else { continue };
            let uv = mackey_product(&basis(&u), &basis(&v))?;
            if !in_seed(&sp, &uv) {
                continue;
            }
            let x = random_plus(&f, &v.right, &mut r)?;
            let lhs = plus_act(&f, &uv, &x)?;
            let rhs = plus_act(&f, &basis(&u), &plus_act(&f, &basis(&v), &x)?)?;
            t.check(lhs == rhs, || format!("u={u:?} v={v:?} x={x:?}"));
        }
        if t.n < want && t.witness.is_none() {
            t.witness = Some(format!("only {} composable samples found", t.n));
        }
        c.push(format!("{} composition", f.name()), t.n, t.witness);
        let id = Tally::default();
        let mut id = id;
        for g in &fam {
            for k in plus_basis(&f, g)?.keys.iter() {
                let x = PlusElt::single(g, k.clone(), Coeff::one());
                id.check(plus_act(&f, &basis(&identity_pair(g, &o.fiber)), &x)? == x, || format!("identity at {x:?}"));
            }
        }
        c.push(format!("{} identity", f.name()), id.n, id.witness);
    }
    for (name, t) in specializations(o)? {
        c.push(name, t.n, t.witness);
    }
    Ok(c.out)
}

fn raw_sum(f: &FunctorSpec, g: &SubgroupRef, terms: &[(FiberChar, Vec<Coeff>)]) -> Result<PlusElt> {
    let b = plus_basis(f, g)?;
    let mut x = PlusElt::zero(g);
    for (chi, v) in terms {
        b.add_raw(f, &mut x, chi, v, Coeff::one())?;
    }
    Ok(x)
}

/// Closed forms for restriction, induction, inflation and deflation against
/// the general transitive formula, term by term.
fn specializations(o: &Options) -> Result<Vec<(String, Tally)>> {
    let a = &o.fiber;
    let g = build_group("S3")?.whole();
    let seed = open_seed(vec![g.clone()], a, Rule::All);
    let f = FunctorSpec::burnside(&seed);
    let subs = subgroups_of(&g)?;
    let mut out = Vec::new();

    let compare = |t: &mut Tally, gen: Vec<(FiberChar, Vec<Coeff>)>, closed: Vec<(FiberChar, Vec<Coeff>)>, grp: &SubgroupRef, what: String| -> Result<()> {
        let mut ok = gen.len() == closed.len();
        for (x, y) in gen.iter().zip(&closed) {
            ok &= raw_sum(&f, grp, std::slice::from_ref(x))? == raw_sum(&f, grp, std::slice::from_ref(y))?;
        }
        t.check(ok, || what);
        Ok(())
    };

    // Res^G_H
    let mut t = Tally::default();
    for h in &subs {
        let res = crate::pairs::diagonal_pair(h, None, h, &g, a)?;
        for k in &subs {
            for psi in crate::fiber::homs_to_fiber(k, a) {
                for i in 0..f.rank(k)? {
                    let e = unit_vector(f.rank(k)?, i);
                    let gen = transitive_plus_terms(&f, &res, &psi, &e)?;
                    let mut closed = Vec::new();
                    for x in g.double_coset_reps(h, k) {
                        let xk = k.conjugate(x);
                        let l = h.intersect(&xk);
                        let chi = psi.conjugate(x).restrict(&l);
                        closed.push((chi, f.res(&l, &xk, &f.conj(x, k, &e)?)?));
                    }
                    compare(&mut t, gen, closed, h, format!("Res to {h:?} of [{k:?},{psi:?},{i}]"))?;
                }
            }
        }
    }
    out.push(("restriction closed form".to_string(), t));

    // Ind^G_H
    let mut t = Tally::default();
    for h in &subs {
        let ind = crate::pairs::diagonal_pair(h, None, &g, h, a)?;
        for k in subgroups_of(h)? {
            for psi in crate::fiber::homs_to_fiber(&k, a) {
                for i in 0..f.rank(&k)? {
                    let e = unit_vector(f.rank(&k)?, i);
                    let gen = transitive_plus_terms(&f, &ind, &psi, &e)?;
                    compare(&mut t, gen, vec![(psi.clone(), e)], &g, format!("Ind from {h:?} of [{k:?},{psi:?},{i}]"))?;
                }
            }
        }
    }
    out.push(("induction closed form".to_string(), t));

    // Inf^G_{G/N} and Def^G_{G/N}
    let mut ti = Tally::default();
    let mut td = Tally::default();
    for n in subs.iter().filter(|n| n.is_normal_in(&g)) {
        let (q, pi) = quotient(&g, n)?;
        let qw = q.whole();
        let img = |x: u32| pi.apply(x).unwrap();
        let inf = FiberedPair::new(&g, &qw, a, g.elements.iter().map(|&x| (x, img(x), 0)))?;
        let def = FiberedPair::new(&qw, &g, a, g.elements.iter().map(|&x| (img(x), x, 0)))?;
        for kb in subgroups_of(&qw)? {
            let kfull = SubgroupRef::new(&g.parent, g.elements.iter().copied().filter(|&x| kb.contains(img(x))).collect())?;
            let graph = FiberedPair::new(&kfull, &kb, a, kfull.elements.iter().map(|&x| (x, img(x), 0)))?;
            for psi in crate::fiber::homs_to_fiber(&kb, a) {
                let lifted = FiberChar {
                    domain: kfull.clone(),
                    values: kfull.elements.iter().map(|&x| psi.value(img(x))).collect(),
                };
                for i in 0..f.rank(&kb)? {
                    let e = unit_vector(f.rank(&kb)?, i);
                    let gen = transitive_plus_terms(&f, &inf, &psi, &e)?;
                    let closed = vec![(lifted.clone(), f.act_on(&graph, &e)?)];
                    compare(&mut ti, gen, closed, &g, format!("Inf over {n:?} of [{kb:?},{psi:?},{i}]"))?;
                }
            }
        }
        for k in &subs {
            let mut kb: Vec<u32> = k.elements.iter().map(|&x| img(x)).collect();
            kb.sort_unstable();
            kb.dedup();
            let kb = SubgroupRef::new(&q, kb)?;
            let graph = FiberedPair::new(&kb, k, a, k.elements.iter().map(|&x| (img(x), x, 0)))?;
            for psi in crate::fiber::homs_to_fiber(k, a) {
                let kn = k.intersect(n);
                let closed_char = if kn.elements.iter().all(|&x| psi.value(x) == 0) {
                    let mut vals: Vec<(u32, u32)> = k.elements.iter().map(|&x| (img(x), psi.value(x))).collect();
                    vals.sort_unstable();
                    vals.dedup();
                    Some(FiberChar { domain: kb.clone(), values: vals.iter().map(|v| v.1).collect() })
                } else {
                    None
                };
                for i in 0..f.rank(k)? {
                    let e = unit_vector(f.rank(k)?, i);
                    let gen = transitive_plus_terms(&f, &def, &psi, &e)?;
                    let closed = match &closed_char {
                        Some(chi) => vec![(chi.clone(), f.act_on(&graph, &e)?)],
                        None => vec![],
                    };
                    compare(&mut td, gen, closed, &qw, format!("Def over {n:?} of [{k:?},{psi:?},{i}]"))?;
                }
            }
        }
    }
    out.push(("inflation closed form".to_string(), ti));
    out.push(("deflation closed form".to_string(), td));
    Ok(out)
}

fn k2_family(o: &Options) -> Result<Vec<SubgroupRef>> {
    match &o.family {
        Some(f) => parse_family(f),
        None => {
            let gs: Vec<SubgroupRef> =
                ["C2", "C2xC2", "S3"].iter().map(|s| Ok(build_group(s)?.whole())).collect::<Result<_>>()?;
            subgroup_closure(&gs)
        }
    }
}

fn upper_functorial_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("upper-functorial");
    let fam = k2_family(o)?;
    let base = make_seed(fam.clone(), &o.fiber, Selector::K2Only)?;
    let su = lift_upper(&base)?;
    let f = FunctorSpec::burnside(&base);
    let mut r = rng(o);
    let want = o.samples.unwrap_or(100);
    let mut t = Tally::default();
    let mut tries = 0;
    let tops: Vec<SubgroupRef> = fam.iter().filter(|g| g.is_whole()).cloned().collect();
    while t.n < want && tries < want * 50 {
        tries += 1;
        let Some((u, v)) = random_composable(&su, &fam, &mut r)? else { continue };
        let uv = mackey_product(&basis(&u), &basis(&v))?;
        if !in_seed(&su, &uv) {
            continue;
        }
        let x = random_ghost(&f, &v.right, &mut r)?;
        let lhs = upper_act(&f, &uv, &x)?;
        let rhs = upper_act(&f, &basis(&u), &upper_act(&f, &basis(&v), &x)?)?;
        t.check(lhs == rhs, || format!("u={u:?} v={v:?} x={x:?}"));
    }
    if t.n < want && t.witness.is_none() {
        t.witness = Some(format!("only {} composable samples found", t.n));
    }
    c.push("burnside composition on k2 seed", t.n, t.witness);

    let mut t = Tally::default();
    let mut u_t = Tally::default();
    for g in &tops {
        for h in &tops {
            for cl in su.classes(g, h)? {
                let x = random_ghost(&f, h, &mut r)?;
                let u = basis(&cl.pair);
                let a = upper_act_with(&f, &u, &x, OrbitSource::Cosets)?;
                let b = upper_act_with(&f, &u, &x, OrbitSource::Realized)?;
                t.check(a == b, || format!("{:?}", cl.pair));
                let m = crate::upper::lambda_multiplicities(&f, &cl.pair)?;
                u_t.check(m.iter().all(|&n| n <= 1), || format!("{:?}: {m:?}", cl.pair));
            }
        }
    }
    c.push("coset orbits match realized orbits", t.n, t.witness);
    c.push("at most one character per orbit", u_t.n, u_t.witness);

    let mut t = Tally::default();
    for g in &tops {
        for x in ghost_basis(&f, g)? {
            t.check(upper_act(&f, &basis(&identity_pair(g, &o.fiber)), &x)? == x, || format!("{x:?}"));
        }
    }
    c.push("identity", t.n, t.witness);
    Ok(c.out)
}

fn mark_square_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("mark-square");
    let fam = family_or(o, "S3-closure")?;
    let base = make_seed(fam.clone(), &o.fiber, Selector::K2Only)?;
    let (sp, su) = (lift_plus(&base)?, lift_upper(&base)?);
    let classes = o.samples.unwrap_or(50);
    let per = 20;
    let mut r = rng(o);
    for f in [trivial_on(fam.clone(), &o.fiber)?, FunctorSpec::burnside(&base)] {
        let mut t = Tally::default();
        let mut seen = 0;
        let mut tries = 0;
        while seen < classes && tries < classes * 50 {
            tries += 1;
            let Some(p) = random_class(&sp, &fam, &mut r)? else { continue };
            if !su.contains(&p) || !f.seed().contains_group(&p.right) {
                continue;
            }
            seen += 1;
            let u = basis(&p);
            for _ in 0..per {
                let x = random_plus(&f, &p.right, &mut r)?;
                let lhs = mark(&f, &plus_act(&f, &u, &x)?)?;
                let rhs = upper_act(&f, &u, &mark(&f, &x)?)?;
                t.check(lhs == rhs, || format!("u={p:?} x={x:?}"));
            }
        }
        if seen < classes && t.witness.is_none() {
            t.witness = Some(format!("only {seen} classes in both lifts"));
        }
        c.push(format!("{} square", f.name()), t.n, t.witness);

        let mut t = Tally::default();
        for g in &fam {
            let b = plus_basis(&f, g)?;
            for k in &b.keys {
                let m = mark(&f, &PlusElt::single(g, k.clone(), Coeff::one()))?;
                t.check(m.stabilizer_violation(&f)?.is_none(), || format!("mark of {k:?}"));
            }
        }
        c.push(format!("{} mark lands in the ghost", f.name()), t.n, t.witness);
    }
    Ok(c.out)
}

/// Matrix of `mark` on the basis of `F₊(G)`, rows indexed by ghost
/// coordinates.
pub fn mark_matrix(f: &FunctorSpec, g: &SubgroupRef) -> Result<Matrix> {
    let b = plus_basis(f, g)?;
    let rows = GhostElt::zero(f, g)?.len();
    let cols: Vec<Vec<Coeff>> = b
        .keys
        .iter()
        .map(|k| Ok(mark(f, &PlusElt::single(g, k.clone(), Coeff::one()))?.to_vector()))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(rows, &cols))
}

fn mobius_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("mobius-inverse");
    for g in group_list(o, &["C2", "C3", "C2xC2", "S3"])? {
        let fam = subgroup_closure(std::slice::from_ref(&g))?;
        let order = Coeff::from_integer(g.order() as i64);
        for f in plus_functors(&fam, &o.fiber)? {
            let tag = format!("{} {}", f.name(), g.parent.label());
            let b = plus_basis(&f, &g)?;
            let mut t = Tally::default();
            let mut tq = Tally::default();
            for k in &b.keys {
                let x = PlusElt::single(&g, k.clone(), Coeff::one());
                let nm = nmap(&f, &mark(&f, &x)?)?;
                t.check(nm == x.scale(order), || format!("n(m({k:?})) = {nm:?}"));
                let back = nmap(&f, &mark(&f, &x)?.scale(Coeff::one() / order))?;
                tq.check(back == x, || format!("{k:?}"));
            }
            c.push(format!("{tag} n∘m"), t.n, t.witness);
            let mut t2 = Tally::default();
            for a in ghost_basis(&f, &g)? {
                let mn = mark(&f, &nmap(&f, &a)?)?;
                t2.check(mn == a.scale(order), || format!("m(n({a:?})) = {mn:?}"));
                let back = mark(&f, &nmap(&f, &a)?.scale(Coeff::one() / order))?;
                tq.check(back == a, || format!("{a:?}"));
            }
            c.push(format!("{tag} m∘n"), t2.n, t2.witness);
            c.push(format!("{tag} rational inverse"), tq.n, tq.witness);
            if f.name() == "trivial" {
                let m = mark_matrix(&f, &g)?;
                let d = m.determinant()?;
                c.push(format!("{tag} mark determinant"), 1, d.is_zero().then(|| "singular mark matrix".to_string()));
            }
        }
    }
    Ok(c.out)
}

fn green_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("green");
    let small: Vec<SubgroupRef> =
        ["C1", "C2", "C3", "C4", "C2xC2"].iter().map(|s| Ok(build_group(s)?.whole())).collect::<Result<_>>()?;
    let open = open_seed(small.clone(), &o.fiber, Rule::All);
    let bf = FunctorSpec::burnside(&open);
    let rep = check_green(&bf, &small, o.samples.unwrap_or(50), o.seed)?;
    c.push("burnside associativity", rep.checked, (!rep.associativity).then(|| rep.witness.clone().unwrap_or_default()));
    c.push("burnside unit", rep.checked, (!rep.unit).then(|| rep.witness.clone().unwrap_or_default()));
    c.push("burnside cross functoriality", rep.checked, (!rep.functoriality).then(|| rep.witness.clone().unwrap_or_default()));

    let groups: Vec<SubgroupRef> =
        ["C2", "C3"].iter().map(|s| Ok(build_group(s)?.whole())).collect::<Result<_>>()?;
    let mut r = rng(o);
    let want = o.samples.unwrap_or(50);

    // Lower lift: unit, functoriality of cross, dot readings.
    let mut tu = Tally::default();
    let e = plus_unit(&bf)?;
    for g in &groups {
        for k in plus_basis(&bf, g)?.keys.iter() {
            let x = PlusElt::single(g, k.clone(), Coeff::one());
            tu.check(plus_cross(&bf, &e, &x)? == x && plus_cross(&bf, &x, &e)? == x, || format!("{x:?}"));
        }
    }
    c.push("lower unit", tu.n, tu.witness);

    let mut tf = Tally::default();
    let mut tries = 0;
    while tf.n < want && tries < want * 50 {
        tries += 1;
        let (g1, g) = (groups.choose(&mut r).unwrap(), groups.choose(&mut r).unwrap());
        let (h1, h) = (groups.choose(&mut r).unwrap(), groups.choose(&mut r).unwrap());
        let (cu, cv) = (pair_classes(g1, g, &o.fiber)?, pair_classes(h1, h, &o.fiber)?);
        let p = &cu[r.gen_range(0..cu.len())].pair;
        let q = &cv[r.gen_range(0..cv.len())].pair;
        let (x, y) = (random_plus(&bf, g, &mut r)?, random_plus(&bf, h, &mut r)?);
        let lhs = plus_act(&bf, &basis(&pair_cross(p, q)?), &plus_cross(&bf, &x, &y)?)?;
        let rhs = plus_cross(&bf, &plus_act(&bf, &basis(p), &x)?, &plus_act(&bf, &basis(q), &y)?)?;
        tf.check(lhs == rhs, || format!("p={p:?} q={q:?} x={x:?} y={y:?}"));
    }
    c.push("lower cross functoriality", tf.n, tf.witness);

    let mut td = Tally::default();
    for g in &groups {
        let gg = crate::group::product_subgroup(g, g);
        let d = basis(&crate::functor::diagonal_embedding(g, &gg, &o.fiber)?);
        for _ in 0..10 {
            let (x, y) = (random_plus(&bf, g, &mut r)?, random_plus(&bf, g, &mut r)?);
            let a = plus_dot(&bf, &x, &y)?;
            let b = plus_act(&bf, &d, &plus_cross(&bf, &x, &y)?)?;
            td.check(a == b, || format!("x={x:?} y={y:?}: {a:?} vs {b:?}"));
        }
    }
    c.push("lower dot matches diagonal of cross", td.n, td.witness);

    // Upper lift.
    let ue = upper_unit(&bf)?;
    let mut tu = Tally::default();
    for g in &groups {
        for a in ghost_basis(&bf, g)? {
            tu.check(upper_cross(&bf, &ue, &a)? == a && upper_cross(&bf, &a, &ue)? == a, || format!("{a:?}"));
        }
    }
    c.push("upper unit", tu.n, tu.witness);

    let mut tf = Tally::default();
    let mut tries = 0;
    while tf.n < want && tries < want * 50 {
        tries += 1;
        let (g1, g) = (groups.choose(&mut r).unwrap(), groups.choose(&mut r).unwrap());
        let (h1, h) = (groups.choose(&mut r).unwrap(), groups.choose(&mut r).unwrap());
        let (cu, cv) = (pair_classes(g1, g, &o.fiber)?, pair_classes(h1, h, &o.fiber)?);
        let p = &cu[r.gen_range(0..cu.len())].pair;
        let q = &cv[r.gen_range(0..cv.len())].pair;
        if !p.k2().is_trivial() || !q.k2().is_trivial() {
            continue;
        }
        let (x, y) = (random_ghost(&bf, g, &mut r)?, random_ghost(&bf, h, &mut r)?);
        let lhs = upper_act(&bf, &basis(&pair_cross(p, q)?), &upper_cross(&bf, &x, &y)?)?;
        let rhs = upper_cross(&bf, &upper_act(&bf, &basis(p), &x)?, &upper_act(&bf, &basis(q), &y)?)?;
        tf.check(lhs == rhs, || format!("p={p:?} q={q:?}"));
    }
    c.push("upper cross functoriality on k2 classes", tf.n, tf.witness);

    // Mark multiplicativity.
    let mut tm = Tally::default();
    let mut tdot = Tally::default();
    while tm.n < want {
        let (g, h) = (groups.choose(&mut r).unwrap(), groups.choose(&mut r).unwrap());
        let (x, y) = (random_plus(&bf, g, &mut r)?, random_plus(&bf, h, &mut r)?);
        let lhs = mark(&bf, &plus_cross(&bf, &x, &y)?)?;
        let rhs = upper_cross(&bf, &mark(&bf, &x)?, &mark(&bf, &y)?)?;
        tm.check(lhs == rhs, || format!("x={x:?} y={y:?}"));
        if g == h {
            let lhs = mark(&bf, &plus_dot(&bf, &x, &y)?)?;
            let rhs = upper_dot(&bf, &mark(&bf, &x)?, &mark(&bf, &y)?)?;
            tdot.check(lhs == rhs, || format!("x={x:?} y={y:?}"));
        }
    }
    c.push("mark multiplicative for cross", tm.n, tm.witness);
    c.push("mark multiplicative for dot", tdot.n, tdot.witness);
    Ok(c.out)
}

fn monomial_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("monomial");
    let one = crate::group::trivial_group().whole();
    for g in group_list(o, &["C2", "C2xC2", "S3"])? {
        let fam = subgroup_closure(std::slice::from_ref(&g))?;
        let f = trivial_on(fam.clone(), &o.fiber)?;
        let sp = f.plus_seed()?;
        let tag = g.parent.label().to_string();
        let (rp, rb) = (plus_basis(&f, &g)?.len(), pair_classes(&g, &one, &o.fiber)?.len());
        c.push(format!("{tag} rank {rp}"), 1, (rp != rb).then(|| format!("F₊ rank {rp}, Burnside rank {rb}")));
        let to_burnside = |x: &PlusElt| -> BurnsideElt {
            let mut out = BurnsideElt::zero(&x.group, &one, &o.fiber, Ring::Z);
            for (k, c) in x.terms() {
                out.add_pair(&pair_of_char(&k.chi, &x.group, &one, &o.fiber), c);
            }
            out
        };
        let mut t = Tally::default();
        for a in &fam {
            for b in &fam {
                for cl in sp.classes(a, b)? {
                    let u = basis(&cl.pair);
                    for k in plus_basis(&f, b)?.keys.iter() {
                        let x = PlusElt::single(b, k.clone(), Coeff::one());
                        let lhs = to_burnside(&plus_act(&f, &u, &x)?);
                        let rhs = mackey_product(&u, &to_burnside(&x))?;
                        t.check(lhs == rhs, || format!("u={:?} x={x:?}", cl.pair));
                    }
                }
            }
        }
        c.push(format!("{tag} intertwining"), t.n, t.witness);
    }
    Ok(c.out)
}

fn adjunction_suite(o: &Options) -> Result<Vec<Case>> {
    let mut c = Cases::new("adjunction");
    let fam = family_or(o, "S3-closure")?;
    let mut r = rng(o);
    for f in plus_functors(&fam, &o.fiber)? {
        let minus = restrict_minus(&make_seed(fam.clone(), &o.fiber, Selector::All)?)?;
        let (mut tw, mut plain, mut twisted) = (Tally::default(), Tally::default(), 0);
        for g in &fam {
            for h in &fam {
                for cl in minus.classes(g, h)? {
                    if !f.seed().contains(&cl.pair) {
                        continue;
                    }
                    let p = &cl.pair;
                    for i in 0..f.rank(h)? {
                        let a = unit_vector(f.rank(h)?, i);
                        let lhs = plus_act(&f, &basis(p), &eta(&f, h, &a)?)?;
                        tw.check(lhs == eta_twisted(&f, p, &a)?, || format!("{p:?} at {i}"));
                        let straight = eta(&f, g, &f.act_on(p, &a)?)?;
                        if lhs != straight {
                            twisted += 1;
                        }
                        if p.triples().all(|t| t.2 == 0) {
                            plain.check(lhs == straight, || format!("{p:?} at {i}"));
                        }
                    }
                }
            }
        }
        c.push(format!("{} unit square", f.name()), tw.n, tw.witness);
        c.push(format!("{} plain square on untwisted classes ({twisted} twisted failures)", f.name()), plain.n, plain.witness);

        let m = FunctorSpec::plus(&f)?;
        let mut unit = Tally::default();
        let etas: GroupMaps = fam
            .iter()
            .map(|g| {
                let pb = plus_basis(&f, g)?;
                let n = f.rank(g)?;
                let cols = (0..n).map(|i| pb.to_vector(&eta(&f, g, &unit_vector(n, i))?)).collect::<Result<Vec<_>>>()?;
                Ok((g.clone(), Matrix::from_columns(pb.len(), &cols)))
            })
            .collect::<Result<_>>()?;
        let ext = extend_nat(&f, &m, &etas, &fam)?;
        for g in &fam {
            unit.check(ext[g] == Matrix::identity(plus_basis(&f, g)?.len()), || format!("{g:?}"));
        }
        c.push(format!("{} extension of η is the identity", f.name()), unit.n, unit.witness);
        let basis_maps = natural_maps(&f, &m, &fam)?;
        let want = o.samples.unwrap_or(20);
        let (mut te, mut tn) = (Tally::default(), Tally::default());
        if basis_maps.is_empty() {
            te.witness = Some("no nonzero natural maps".into());
        }
        for _ in 0..want {
            if basis_maps.is_empty() {
                break;
            }
            let mut psi: GroupMaps = basis_maps[0].iter().map(|(g, mm)| (g.clone(), mm.scale(Coeff::zero()))).collect();
            for b in &basis_maps {
                let k = Coeff::from_integer(r.gen_range(-3..=3));
                for (g, mm) in b {
                    let cur = psi.get(g).unwrap().add(&mm.scale(k))?;
                    psi.insert(g.clone(), cur);
                }
            }
            let phi = extend_nat(&f, &m, &psi, &fam)?;
            for g in &fam {
                for i in 0..f.rank(g)? {
                    let a = unit_vector(f.rank(g)?, i);
                    let pb = plus_basis(&f, g)?;
                    let lhs = phi[g].apply(&pb.to_vector(&eta(&f, g, &a)?)?);
                    te.check(lhs == psi[g].apply(&a), || format!("Φ∘η at {g:?}"));
                }
            }
            let sp = f.plus_seed()?;
            for _ in 0..10 {
                let Some(p) = random_class(&sp, &fam, &mut r)? else { continue };
                let u = basis(&p);
                let pb = plus_basis(&f, &p.right)?;
                let x = random_plus(&f, &p.right, &mut r)?;
                let lhs = phi[&p.left].apply(&plus_basis(&f, &p.left)?.to_vector(&plus_act(&f, &u, &x)?)?);
                let rhs = m.act_on(&p, &phi[&p.right].apply(&pb.to_vector(&x)?))?;
                tn.check(lhs == rhs, || format!("Φ at {p:?}"));
            }
        }
        c.push(format!("{} extension restricts to ψ ({} natural maps)", f.name(), basis_maps.len()), te.n, te.witness);
        c.push(format!("{} extension is natural", f.name()), tn.n, tn.witness);
    }
    Ok(c.out)
}

/// `check_functor` for the built-in functors over a family, used by the CLI.
pub fn functor_reports(fam: &[SubgroupRef], a: &FiberGroup, samples: usize, seed: u64) -> Result<Vec<Case>> {
    let mut c = Cases::new("functor");
    for f in plus_functors(fam, a)? {
        let r = check_functor(&f, samples, seed)?;
        c.push(format!("{} laws", f.name()), r.checked, (!r.passed()).then(|| r.witness.unwrap_or_default()));
    }
    Ok(c.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &Options::default()), Err(Error::Parse(_))));
    }

    #[test]
    fn mark_determinants() {
        for (name, det) in [("C2", 2), ("S3", 12), ("C2xC2", 256)] {
            let f = trivial_on(parse_family(&format!("{name}-closure")).unwrap(), &FiberGroup::parse("2").unwrap()).unwrap();
            let g = build_group(name).unwrap().whole();
            assert_eq!(mark_matrix(&f, &g).unwrap().determinant().unwrap(), Coeff::from_integer(det), "{name}");
        }
    }

    #[test]
    fn monomial_on_one_group() {
        let o = Options { group: Some("C2".into()), ..Options::default() };
        let cases = run_suite("monomial", &o).unwrap();
        assert_eq!(cases.len(), 2);
        assert!(cases.iter().all(|c| c.pass && c.suite == "monomial"));
    }

    #[test]
    fn ghost_basis_spans_the_ghost() {
        let f = trivial_on(parse_family("S3-closure").unwrap(), &FiberGroup::parse("2").unwrap()).unwrap();
        let g = build_group("S3").unwrap().whole();
        // Stabilizers act trivially on rank-one values, so one vector per node.
        assert_eq!(ghost_basis(&f, &g).unwrap().len(), GhostElt::zero(&f, &g).unwrap().len());
    }
}
