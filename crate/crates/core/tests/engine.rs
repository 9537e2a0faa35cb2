mod common;

use abelaut::claims::analyze;
use abelaut::constructions::{special_presentation, to_w, BuiltGroup, ConstructionTag};
use abelaut::exterior::wedge;
use abelaut::group::{GroupElement, PcPresentation};
use abelaut::tat::transport_tat;
use abelaut::{FpMatrix, FpVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn triple(pres: &PcPresentation, seed: u64) -> [GroupElement; 3] {
    let mut r = rng(seed);
    [
        pres.random_element(&mut r),
        pres.random_element(&mut r),
        pres.random_element(&mut r),
    ]
}

/// `[g, h]` predicted from the exponent vectors alone.
fn predicted_commutator(group: &BuiltGroup, g: &GroupElement, h: &GroupElement) -> FpVector {
    let t = &group.tat;
    let p = t.p();
    let n = t.n();
    let bar = |x: &GroupElement| FpVector::new(p, &x.exps[..n].iter().map(|&a| a as i64).collect::<Vec<_>>());
    let mut c = to_w(t.k(), &wedge(&bar(g), &bar(h)).unwrap());
    if let ConstructionTag::Extension { .. } = group.tag {
        let gamma = group.gamma.as_ref().unwrap();
        let (gy, hy) = (g.exps[n] as u32, h.exps[n] as u32);
        for i in 0..n {
            let coeff = p.sub(p.mul(bar(g).get(i), hy), p.mul(bar(h).get(i), gy));
            c = c.add(&gamma.row_vector(i).scale(coeff));
        }
    }
    c
}

#[test]
fn multiplication_is_associative_on_many_triples() {
    for group in common::groups() {
        let pres = &group.pres;
        let mut r = rng(1);
        for _ in 0..10_000 {
            let (a, b, c) = (
                pres.random_element(&mut r),
                pres.random_element(&mut r),
                pres.random_element(&mut r),
            );
            assert_eq!(
                pres.mul(&pres.mul(&a, &b), &c),
                pres.mul(&a, &pres.mul(&b, &c)),
                "{}",
                group.tag.name()
            );
        }
    }
}

#[test]
fn group_orders_add_up() {
    let expected = [10, 14, 11, 12];
    for (group, e) in common::groups().iter().zip(expected) {
        let pres = &group.pres;
        assert_eq!(pres.order_exponent(), e);
        assert_eq!(
            pres.order_exponent(),
            pres.heights().iter().sum::<u32>() + pres.w_dim() as u32
        );
        let a = analyze(pres);
        assert_eq!(a.order.exponent, e);
        assert!(a.derived.exponent <= a.frattini.exponent);
        assert!(a.agemo.exponent <= a.frattini.exponent);
        assert!(a.omega1.exponent <= a.omega2.exponent);
        // Φ = Gᵖ G′.
        let both = pres.agemo().intersection(&pres.derived_subgroup()).order_exponent();
        assert_eq!(a.frattini.exponent, a.agemo.exponent + a.derived.exponent - both);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_and_inverse(seed in any::<u64>(), which in 0usize..4) {
        let pres = &common::groups()[which].pres;
        let [g, _, _] = triple(pres, seed);
        let e = pres.identity();
        prop_assert_eq!(pres.mul(&g, &e), g.clone());
        prop_assert_eq!(pres.mul(&e, &g), g.clone());
        prop_assert!(pres.mul(&g, &pres.inverse(&g)).is_identity());
        prop_assert!(pres.mul(&pres.inverse(&g), &g).is_identity());
    }

    #[test]
    fn power_map_is_a_homomorphism(seed in any::<u64>(), which in 0usize..4) {
        let pres = &common::groups()[which].pres;
        let q = pres.p().get() as u64;
        let [g, h, _] = triple(pres, seed);
        prop_assert_eq!(pres.power(&pres.mul(&g, &h), q), pres.mul(&pres.power(&g, q), &pres.power(&h, q)));
    }

    #[test]
    fn commutator_is_bilinear_and_central(seed in any::<u64>(), which in 0usize..4) {
        let pres = &common::groups()[which].pres;
        let [g, h, k] = triple(pres, seed);
        let c = |a: &GroupElement, b: &GroupElement| pres.commutator(a, b);
        prop_assert_eq!(c(&pres.mul(&g, &h), &k), pres.mul(&c(&g, &k), &c(&h, &k)));
        prop_assert_eq!(c(&g, &pres.mul(&h, &k)), pres.mul(&c(&g, &h), &c(&g, &k)));
        prop_assert_eq!(c(&g, &h), pres.inverse(&c(&h, &g)));
        prop_assert!(pres.center().contains(&c(&g, &h)));
        prop_assert!(pres.derived_subgroup().contains(&c(&g, &h)));
        // [g, h] = g⁻¹ h⁻¹ g h
        let direct = pres.mul(&pres.mul(&pres.inverse(&g), &pres.inverse(&h)), &pres.mul(&g, &h));
        prop_assert_eq!(c(&g, &h), direct);
    }

    #[test]
    fn commutators_follow_the_wedge(seed in any::<u64>(), which in 0usize..4) {
        let group = &common::groups()[which];
        let pres = &group.pres;
        let [g, h, _] = triple(pres, seed);
        let c = pres.commutator(&g, &h);
        prop_assert!(c.exps.iter().all(|&a| a == 0));
        let tail = FpVector::from_residues(pres.p(), c.tail.clone());
        prop_assert_eq!(tail, predicted_commutator(group, &g, &h));
    }

    #[test]
    fn membership_matches_element_behaviour(seed in any::<u64>(), which in 0usize..4) {
        let pres = &common::groups()[which].pres;
        let q = pres.p().get() as u64;
        let [g, h, _] = triple(pres, seed);
        prop_assert!(pres.agemo().contains(&pres.power(&g, q)));
        prop_assert!(pres.frattini().contains(&pres.power(&g, q)));
        for k in 1..=3u32 {
            let killed = pres.power(&g, q.pow(k)).is_identity();
            prop_assert_eq!(pres.omega(k).contains(&g), killed);
        }
        let central = (0..pres.rank()).all(|i| pres.commutator(&g, &pres.generator(i)).is_identity());
        prop_assert_eq!(pres.center().contains(&g), central);
        let ord = pres.element_order(&g);
        let mut rest = ord;
        while rest.is_multiple_of(q) {
            rest /= q;
        }
        prop_assert_eq!(rest, 1);
        prop_assert!(ord == 1 || !pres.power(&g, ord / q).is_identity());
        prop_assert!(pres.power(&g, ord).is_identity());
        let gh = pres.mul(&g, &h);
        for s in [pres.center(), pres.derived_subgroup(), pres.frattini(), pres.omega(1), pres.omega(2)] {
            if s.contains(&g) && s.contains(&h) {
                prop_assert!(s.contains(&gh));
            }
        }
    }

    #[test]
    fn subgroup_orders_survive_a_change_of_basis(seed in any::<u64>()) {
        let t = common::tat();
        let p = t.p();
        let n = t.n();
        let mut r = rng(seed);
        let beta = loop {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rand::Rng::gen_range(&mut r, 0..p.get() as i64)).collect())
                .collect();
            let m = FpMatrix::from_rows(p, &rows).unwrap();
            if m.is_invertible() {
                break m;
            }
        };
        let moved = transport_tat(t, &beta).unwrap();
        let before = special_presentation(t.k(), t.f(), 1).unwrap();
        let after = special_presentation(moved.k(), moved.f(), 1).unwrap();
        prop_assert_eq!(analyze(&before), analyze(&after));
        let tall = special_presentation(moved.k(), moved.f(), 2).unwrap();
        prop_assert_eq!(analyze(&special_presentation(t.k(), t.f(), 2).unwrap()), analyze(&tall));
    }
}
