use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;

use fibrator::burnside::{mackey_product, BurnsideElt, Coeff, Ring};
use fibrator::fiber::{homs_to_fiber, FiberGroup};
use fibrator::functor::FunctorSpec;
use fibrator::group::{build_group, GroupHandle, SubgroupRef};
use fibrator::oracle::oracle_product;
use fibrator::pairs::{pair_classes, FiberedPair};
use fibrator::plus::{plus_act, plus_basis};
use fibrator::seed::{parse_family, Selector};
use fibrator::upper::{mark, nmap};
use fibrator::verify::{ghost_basis, trivial_on};

const SMALL: [&str; 6] = ["C1", "C2", "C3", "C4", "C2xC2", "S3"];

fn g(s: &str) -> SubgroupRef {
    build_group(s).unwrap().whole()
}

fn class(l: &str, r: &str, a: &FiberGroup, i: usize) -> FiberedPair {
    let cl = pair_classes(&g(l), &g(r), a).unwrap();
    cl[i % cl.len()].pair.clone()
}

fn coeffs(v: &[i64]) -> Vec<Coeff> {
    v.iter().map(|&x| Coeff::from_integer(x)).collect()
}

fn group_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(SMALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn mackey_agrees_with_oracle(
        l in group_name(), m in group_name(), r in group_name(),
        fiber in prop::sample::select(vec!["1", "2", "3", "4"]),
        i in any::<usize>(), j in any::<usize>(),
    ) {
        let a = FiberGroup::parse(fiber).unwrap();
        let (u, v) = (class(l, m, &a, i), class(m, r, &a, j));
        let lhs = mackey_product(&BurnsideElt::basis(&u, Ring::Z), &BurnsideElt::basis(&v, Ring::Z)).unwrap();
        prop_assert_eq!(lhs, oracle_product(&u, &v, Ring::Z).unwrap());
    }

    #[test]
    fn mackey_is_associative(
        gs in prop::array::uniform4(prop::sample::select(vec!["C1", "C2", "C3", "S3"])),
        ix in prop::array::uniform3(any::<usize>()),
    ) {
        let a = FiberGroup::parse("2").unwrap();
        let x = BurnsideElt::basis(&class(gs[0], gs[1], &a, ix[0]), Ring::Z);
        let y = BurnsideElt::basis(&class(gs[1], gs[2], &a, ix[1]), Ring::Z);
        let z = BurnsideElt::basis(&class(gs[2], gs[3], &a, ix[2]), Ring::Z);
        let left = mackey_product(&mackey_product(&x, &y).unwrap(), &z).unwrap();
        let right = mackey_product(&x, &mackey_product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn group_tables_are_groups(name in group_name(), xs in prop::array::uniform3(any::<u32>())) {
        let grp = build_group(name).unwrap();
        let n = grp.order() as u32;
        let (a, b, c) = (xs[0] % n, xs[1] % n, xs[2] % n);
        prop_assert_eq!(grp.mul(grp.mul(a, b), c), grp.mul(a, grp.mul(b, c)));
        prop_assert_eq!(grp.mul(a, grp.inv(a)), grp.identity());
        prop_assert_eq!(grp.mul(grp.identity(), a), a);
    }

    #[test]
    fn characters_are_homomorphisms(name in group_name(), fiber in prop::sample::select(vec!["2", "3", "2,2"])) {
        let a = FiberGroup::parse(fiber).unwrap();
        for chi in homs_to_fiber(&g(name), &a) {
            prop_assert!(chi.is_homomorphism(&a));
        }
    }

    #[test]
    fn mobius_inverts_mark(
        name in prop::sample::select(vec!["C2", "C3", "C2xC2", "S3"]),
        v in prop::collection::vec(-5i64..=5, 16),
    ) {
        let f = trivial_on(parse_family(&format!("{name}-closure")).unwrap(), &FiberGroup::parse("2").unwrap()).unwrap();
        let grp = g(name);
        let order = Coeff::from_integer(grp.order() as i64);
        let b = plus_basis(&f, &grp).unwrap();
        let x = b.from_vector(&grp, &coeffs(&v[..b.len()]));
        prop_assert_eq!(nmap(&f, &mark(&f, &x).unwrap()).unwrap(), x.scale(order));

        let basis = ghost_basis(&f, &grp).unwrap();
        let mut y = basis[0].scale(Coeff::zero());
        for (e, &c) in basis.iter().zip(v.iter().cycle()) {
            y = y.add(&e.scale(Coeff::from_integer(c))).unwrap();
        }
        prop_assert_eq!(mark(&f, &nmap(&f, &y).unwrap()).unwrap(), y.scale(order));
    }

    #[test]
    fn plus_act_is_linear(
        i in any::<usize>(),
        v in prop::collection::vec(-3i64..=3, 21),
        w in prop::collection::vec(-3i64..=3, 21),
    ) {
        let f = burnside_s3();
        let (s3, c2) = (g("S3"), subgroup_c2());
        let sp = f.plus_seed().unwrap();
        let cl = sp.classes(&s3, &c2).unwrap();
        let u = BurnsideElt::basis(&cl[i % cl.len()].pair, Ring::Z);
        let b = plus_basis(&f, &c2).unwrap();
        let x = b.from_vector(&c2, &coeffs(&v[..b.len()]));
        let y = b.from_vector(&c2, &coeffs(&w[..b.len()]));
        let lhs = plus_act(&f, &u, &x.add(&y).unwrap()).unwrap();
        let rhs = plus_act(&f, &u, &x).unwrap().add(&plus_act(&f, &u, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

fn burnside_s3() -> Arc<FunctorSpec> {
    let fam = parse_family("S3-closure").unwrap();
    FunctorSpec::burnside(&fibrator::seed::make_seed(fam, &FiberGroup::parse("2").unwrap(), Selector::All).unwrap())
}

fn subgroup_c2() -> SubgroupRef {
    parse_family("S3-closure").unwrap().into_iter().find(|h| h.order() == 2).unwrap()
}
