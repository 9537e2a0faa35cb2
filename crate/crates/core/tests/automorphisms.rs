mod common;

use abelaut::aut::{
    autc_order, circle, circle_order, compose, hom_space, to_automorphism, verify_aut_central, CentralHom, Structure,
};
use abelaut::claims::{analyze, check_claims, zurek_witness};
use abelaut::constructions::{build_extension, check_gamma, claim_sheet};
use abelaut::exterior::{wedge, wedge_dim};
use abelaut::{Error, FpMatrix, FpVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn every_claim_holds_for_every_construction() {
    for group in common::groups() {
        let cert = verify_aut_central(group, &common::opts()).unwrap();
        let analysis = analyze(&group.pres);
        for c in check_claims(group, &analysis, &cert).unwrap() {
            assert!(
                c.pass,
                "{}: {} expected {} found {}",
                group.tag.name(),
                c.claim,
                c.expected,
                c.found
            );
        }
        assert_eq!(cert.structure, claim_sheet(group.tag).structure);
        if let Some(w) = &cert.witness {
            assert!(w.reverify(&group.pres));
        }
    }
}

#[test]
fn inner_gammas_are_rejected() {
    let t = common::tat();
    let (p, n) = (t.p(), t.n());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tried = 0;
    while tried < 20 {
        let v = FpVector::new(p, &(0..n).map(|_| rng.gen_range(0..3)).collect::<Vec<i64>>());
        if v.entries().iter().all(|&x| x == 0) {
            continue;
        }
        tried += 1;
        let rows: Vec<FpVector> = (0..n).map(|i| wedge(&FpVector::unit(p, n, i), &v).unwrap()).collect();
        let gamma = FpMatrix::from_vectors(p, wedge_dim(n), &rows);
        assert!(matches!(check_gamma(&gamma), Err(Error::BadGamma(_))));
        assert!(matches!(
            build_extension(t, 2, Some(&gamma), &common::opts()),
            Err(Error::BadGamma(_))
        ));
    }
}

#[test]
fn z_is_central() {
    let group = &common::groups()[2];
    let pres = &group.pres;
    let z = pres.generator(pres.index_of("z").unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let g = pres.random_element(&mut rng);
        assert_eq!(pres.mul(&z, &g), pres.mul(&g, &z));
    }
}

#[test]
fn circle_matches_composition_of_automorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for group in common::groups() {
        let pres = &group.pres;
        let space = hom_space(pres).unwrap();
        for _ in 0..100 {
            let (g, d) = (space.random(pres, &mut rng), space.random(pres, &mut rng));
            let lhs = to_automorphism(pres, &g)
                .unwrap()
                .then(pres, &to_automorphism(pres, &d).unwrap());
            let rhs = to_automorphism(pres, &circle(pres, &g, &d)).unwrap();
            let x = pres.random_element(&mut rng);
            assert_eq!(lhs.apply(pres, &x), rhs.apply(pres, &x));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn central_homs_form_a_group_under_circle() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for group in common::groups() {
        let pres = &group.pres;
        let space = hom_space(pres).unwrap();
        let zero = CentralHom::zero(pres);
        for _ in 0..30 {
            let (a, b, c) = (
                space.random(pres, &mut rng),
                space.random(pres, &mut rng),
                space.random(pres, &mut rng),
            );
            assert_eq!(
                circle(pres, &circle(pres, &a, &b), &c),
                circle(pres, &a, &circle(pres, &b, &c))
            );
            assert_eq!(circle(pres, &a, &zero), a);
            assert_eq!(circle(pres, &zero, &a), a);
            let ab = circle(pres, &a, &b);
            assert!(CentralHom::new(pres, ab.images.clone()).is_ok());
            // compose is additive in each argument.
            assert_eq!(
                compose(pres, &a.add(pres, &b), &c),
                compose(pres, &a, &c).add(pres, &compose(pres, &b, &c))
            );
            assert_eq!(
                compose(pres, &a, &b.add(pres, &c)),
                compose(pres, &a, &b).add(pres, &compose(pres, &a, &c))
            );
            // a has a circle inverse among its circle powers.
            let order = circle_order(pres, &a);
            let mut power = zero.clone();
            for _ in 0..order {
                power = circle(pres, &power, &a);
            }
            assert_eq!(power, zero);
        }
    }
}

#[test]
fn zurek_witness_does_not_commute() {
    let pres = &common::groups()[1].pres;
    let q = pres.p().get() as u64;
    let (g, d) = zurek_witness(pres).unwrap();
    let gd = compose(pres, &g, &d);
    let dg = compose(pres, &d, &g);
    assert_ne!(gd, dg);
    let x2pp = pres.power(&pres.generator(1), q * q);
    assert!(!x2pp.is_identity());
    assert_eq!(gd.images[0], x2pp);
    assert!(dg.images[0].is_identity());
}

#[test]
fn special_autc_order_is_n_times_quotient_dim() {
    let group = &common::groups()[0];
    let pres = &group.pres;
    let space = hom_space(pres).unwrap();
    let order = autc_order(pres, &space).unwrap();
    let t = &group.tat;
    assert_eq!(order.exponent as usize, t.n() * t.k().quotient_dim());
    assert_eq!(order.exponent, 24);
    let cert = verify_aut_central(group, &common::opts()).unwrap();
    assert_eq!(cert.structure, Structure::ElementaryAbelian);
}
