//! Subgroup reports and the checklist of expected properties for each
//! construction.

use serde::{Deserialize, Serialize};

use crate::aut::{compose, AutCertificate, CentralHom, PPower};
use crate::constructions::{claim_sheet, BuiltGroup, ConstructionTag, Lattice};
use crate::error::Result;
use crate::exterior::wedge_dim;
use crate::group::{PcPresentation, StandardSubgroup, SubgroupRelation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAnalysis {
    pub order: PPower,
    pub derived: PPower,
    pub center: PPower,
    pub frattini: PPower,
    pub agemo: PPower,
    pub omega1: PPower,
    pub omega2: PPower,
    pub derived_vs_frattini: SubgroupRelation,
    pub frattini_vs_center: SubgroupRelation,
    pub lattice: Lattice,
    pub is_special: bool,
    pub purely_nonabelian_certificate: bool,
}

pub fn analyze(pres: &PcPresentation) -> GroupAnalysis {
    let p = pres.p().get();
    let size = |s: &StandardSubgroup| PPower {
        p,
        exponent: s.order_exponent(),
    };
    let (d, z, phi) = (pres.derived_subgroup(), pres.center(), pres.frattini());
    GroupAnalysis {
        order: PPower {
            p,
            exponent: pres.order_exponent(),
        },
        derived: size(&d),
        center: size(&z),
        frattini: size(&phi),
        agemo: size(&pres.agemo()),
        omega1: size(&pres.omega(1)),
        omega2: size(&pres.omega(2)),
        derived_vs_frattini: d.compare(&phi),
        frattini_vs_center: phi.compare(&z),
        lattice: Lattice::of(pres),
        is_special: pres.is_special(),
        purely_nonabelian_certificate: pres.is_purely_nonabelian_certificate(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

fn check(claim: &str, expected: impl ToString, found: impl ToString) -> ClaimCheck {
    let (expected, found) = (expected.to_string(), found.to_string());
    ClaimCheck {
        claim: claim.to_string(),
        pass: expected == found,
        expected,
        found,
    }
}

/// `γ: x1 ↦ x1^p` and `δ: x1 ↦ x2^p`, all other generators to 1.
pub fn zurek_witness(pres: &PcPresentation) -> Result<(CentralHom, CentralHom)> {
    let q = pres.p().get() as u64;
    let mut g = CentralHom::zero(pres).images;
    let mut d = g.clone();
    g[0] = pres.power(&pres.generator(0), q);
    d[0] = pres.power(&pres.generator(1), q);
    Ok((CentralHom::new(pres, g)?, CentralHom::new(pres, d)?))
}

/// Every expected property of `group`, checked against its analysis and
/// automorphism certificate.
pub fn check_claims(group: &BuiltGroup, analysis: &GroupAnalysis, cert: &AutCertificate) -> Result<Vec<ClaimCheck>> {
    let pres = &group.pres;
    let sheet = claim_sheet(group.tag);
    let p = pres.p().get();
    let n = group.tat.n();
    let q = p as u64;
    let dq = group.tat.k().quotient_dim() as u32;
    let mut out = vec![
        check("lattice of G', Phi(G), Z(G)", sheet.lattice, analysis.lattice),
        check(
            "Z(G) <= Phi(G)",
            sheet.purely_nonabelian_certificate,
            analysis.purely_nonabelian_certificate,
        ),
        check("Aut(G) = Aut_c(G)", sheet.aut_equals_autc, cert.aut_equals_autc),
        check("structure of Aut(G)", sheet.structure, cert.structure),
        check("|G'| = |Λ²V/K|", dq, analysis.derived.exponent),
    ];
    let x = |i: usize| pres.generator(i);
    match group.tag {
        ConstructionTag::Special => {
            let z = pres.center();
            out.push(check("G is special", true, analysis.is_special));
            out.push(check("Omega_1(G) = Z(G)", true, pres.omega(1) == z));
            out.push(check(
                "log_p |G/G'|",
                n,
                analysis.order.exponent - analysis.derived.exponent,
            ));
            out.push(check("log_p |G^p|", n, analysis.agemo.exponent));
            out.push(check(
                "log_p |Aut_c(G)| = n dim(Λ²V/K)",
                n as u32 * dq,
                cert.autc_order.exponent,
            ));
        }
        ConstructionTag::Zurek => {
            let (gamma, delta) = zurek_witness(pres)?;
            let gd = compose(pres, &gamma, &delta);
            let dg = compose(pres, &delta, &gamma);
            let x2pp = pres.power(&x(1), q * q);
            out.push(check("x1^(γδ) = x2^(p²)", true, gd.images[0] == x2pp));
            out.push(check("x2^(p²) != 1", true, !x2pp.is_identity()));
            out.push(check("x1^(δγ) = 1", true, dg.images[0].is_identity()));
            out.push(check("order of x1", q * q * q, pres.element_order(&x(0))));
        }
        ConstructionTag::CentralProduct => {
            let zi = pres.index_of("z").expect("generator z");
            let z = pres.generator(zi);
            out.push(check("order of z", q * q, pres.element_order(&z)));
            out.push(check("z in Z(G)", true, pres.center().contains(&z)));
            out.push(check(
                "log_p |Z(G) : G'|",
                1,
                analysis.center.exponent - analysis.derived.exponent,
            ));
            out.push(check(
                "unique block (α, λ, μ) = (1, 0, 1)",
                true,
                unique_identity_block(cert),
            ));
            out.push(check(
                "log_p |Aut_c(G)| = log_p |Hom(G/G', G')|",
                (n as u32 + 1) * dq,
                cert.autc_order.exponent,
            ));
        }
        ConstructionTag::Extension { m } => {
            let yi = pres.index_of("y").expect("generator y");
            let y = pres.generator(yi);
            let omega2 = pres.omega(2);
            let phi = pres.frattini();
            out.push(check("|G'| = p^C(n,2)", wedge_dim(n) as u32, analysis.derived.exponent));
            out.push(check("y^p in Phi(G)", true, phi.contains(&pres.power(&y, q))));
            out.push(check(
                "log_p |Phi(G) : G'|",
                m - 1,
                analysis.frattini.exponent - analysis.derived.exponent,
            ));
            out.push(check("y in Omega_2(G)", false, omega2.contains(&y)));
            out.push(check(
                "all x_i in Omega_2(G)",
                true,
                (0..n).all(|i| omega2.contains(&x(i))),
            ));
            let shape = crate::aut::hom_space(pres)?.spanning.iter().all(|h| {
                let derived = pres.derived_subgroup();
                (0..n).all(|i| derived.contains(&h.images[i])) && {
                    let img = &h.images[yi];
                    (0..n).all(|i| img.exps[i] == 0) && img.exps[yi] % q == 0
                }
            });
            out.push(check("homs: y ↦ y^(ps), x_i ↦ 1 mod G'", true, shape));
            out.push(check(
                "unique block (τ, σ, α) = (1, 0, 1)",
                true,
                unique_identity_block(cert),
            ));
        }
    }
    Ok(out)
}

fn unique_identity_block(cert: &AutCertificate) -> bool {
    cert.block_solutions.len() == 1 && cert.block_solutions[0].is_identity() && cert.block_shape == Some(true)
}
