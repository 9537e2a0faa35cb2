mod common;

use abelaut::claims::analyze;
use abelaut::constructions::{special_presentation, Lattice};
use abelaut::exterior::{check_wedge_condition, pair_index, wedge_dim, QuotientSpace};
use abelaut::group::SubgroupRelation;
use abelaut::tat::{verify, TatCandidate};
use abelaut::{FieldPrime, FpMatrix, FpVector, Subspace};
use proptest::prelude::*;

fn gf3() -> FieldPrime {
    FieldPrime::new(3).unwrap()
}

fn vectors(p: FieldPrime, len: usize, raw: &[Vec<u8>]) -> Vec<FpVector> {
    raw.iter()
        .map(|r| FpVector::new(p, &r[..len].iter().map(|&x| x as i64).collect::<Vec<_>>()))
        .collect()
}

/// `span{e1∧e2, e1∧e3, e1∧e4}`: `e1 ∧ V ⊆ K`.
fn bad_k() -> QuotientSpace {
    let p = gf3();
    let d = wedge_dim(4);
    QuotientSpace::new(
        p,
        4,
        (1..4).map(|j| FpVector::unit(p, d, pair_index(4, 0, j))).collect(),
    )
    .unwrap()
}

#[test]
fn bad_k_breaks_the_centre() {
    let k = bad_k();
    assert!(!check_wedge_condition(&k));
    let p = gf3();
    // Λ²V/K has dimension 3, so no f is injective here.
    let rows: Vec<FpVector> = (0..4).map(|i| k.project(&FpVector::unit(p, 6, (i + 3) % 6))).collect();
    let f = FpMatrix::from_vectors(p, 6, &rows);
    let t = TatCandidate::new(k.clone(), f.clone()).unwrap();
    let verdict = verify(&t, &common::opts()).unwrap();
    assert!(verdict.dimension_ok);
    assert!(!verdict.wedge_condition);
    assert!(!verdict.injective);
    assert!(!verdict.is_tat());

    let pres = special_presentation(&k, &f, 1).unwrap();
    let a = analyze(&pres);
    assert_eq!(a.frattini_vs_center, SubgroupRelation::ProperSubset);
    assert!(a.center.exponent > a.frattini.exponent);
    assert!(!a.purely_nonabelian_certificate);
    assert_eq!(a.lattice, Lattice::CentreAbove);
}

#[test]
fn non_injective_f_shrinks_the_agemo() {
    let t = common::tat();
    let mut rows = t.f().row_vectors();
    rows[3] = rows[0].add(&rows[1]);
    let f = FpMatrix::from_vectors(t.p(), t.f().cols(), &rows);
    let bad = TatCandidate::new(t.k().clone(), f.clone()).unwrap();
    let verdict = verify(&bad, &common::opts()).unwrap();
    assert!(verdict.wedge_condition);
    assert!(!verdict.injective);
    assert!(!verdict.is_tat());
    let pres = special_presentation(t.k(), &f, 1).unwrap();
    assert!(pres.agemo().order_exponent() < t.n() as u32);
    assert_eq!(pres.agemo().order_exponent(), 3);

    let good = special_presentation(t.k(), t.f(), 1).unwrap();
    assert_eq!(good.agemo().order_exponent(), t.n() as u32);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// For the special group of `(K, f)`, `Z(G) = Φ(G)` exactly when
    /// `v ∧ V ⊄ K` for every nonzero v.
    #[test]
    fn wedge_condition_iff_centre_is_frattini(
        k_raw in prop::collection::vec(prop::collection::vec(0u8..3, 6), 0..4),
        f_raw in prop::collection::vec(prop::collection::vec(0u8..3, 6), 4),
    ) {
        let p = gf3();
        let k = QuotientSpace::new(p, 4, vectors(p, 6, &k_raw)).unwrap();
        let rows: Vec<FpVector> = vectors(p, 6, &f_raw).iter().map(|r| k.project(r)).collect();
        let f = FpMatrix::from_vectors(p, 6, &rows);
        let pres = special_presentation(&k, &f, 1).unwrap();
        prop_assert_eq!(check_wedge_condition(&k), pres.center() == pres.frattini());
        prop_assert!(pres.frattini().is_subgroup_of(&pres.center()));
        // |Gᵖ| = p^rank(f mod K).
        let reduced = Subspace::span(p, 6, rows.clone());
        prop_assert_eq!(pres.agemo().order_exponent() as usize, reduced.dim());
    }
}
