//! Central automorphisms through `Hom(G, Z(G))`.
//!
//! For `γ ∈ Hom(G, Z(G))` the map `g ↦ g · gγ` is an endomorphism, and
//! `(1+γ)(1+δ) = 1 + (γ + δ + γδ)`, where `γδ` means "γ, then δ". The
//! group `Aut_c(G)` of central automorphisms is therefore modelled by
//! `(Hom(G, Z(G)), ∘)` with `γ ∘ δ = γ + δ + γδ`.
//!
//! All groups handled here have `W = G'`, so homomorphisms kill the tail
//! and are determined by generator images `z_i ∈ Z(G)` with
//! `z_i^{p^{e_i}} = 1`. Hence `Hom(G, Z(G)) = Π_i (Z(G) ∩ Ω_{e_i}(G))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{BuiltGroup, ConstructionTag};
use crate::error::{Error, Result};
use crate::exterior::{induced_map, wedge};
use crate::field::FieldPrime;
use crate::group::{GroupElement, PcPresentation, StandardSubgroup};
use crate::linalg::{solve_linear, FpMatrix, FpVector, Subspace};
use crate::tat::{CentralizerProblem, CentralizerReport, SearchOptions};

/// Most block solutions examined before giving up.
const BLOCK_CAP: usize = 4096;
/// Random homomorphisms tried when looking for an element of order above p.
const RANDOM_ORDER_PROBES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    ElementaryAbelian,
    Abelian,
    Nonabelian,
}

impl std::fmt::Display for Structure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Structure::ElementaryAbelian => "elementary abelian",
            Structure::Abelian => "abelian",
            Structure::Nonabelian => "non-abelian",
        })
    }
}

/// `p^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PPower {
    pub p: u32,
    pub exponent: u32,
}

impl std::fmt::Display for PPower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{}", self.p, self.exponent)
    }
}

/// A homomorphism `G → Z(G)`, stored by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CentralHom {
    pub images: Vec<GroupElement>,
}

impl CentralHom {
    pub fn zero(pres: &PcPresentation) -> Self {
        CentralHom {
            images: vec![pres.identity(); pres.rank()],
        }
    }

    /// Checks that the images are central and respect the power relations.
    pub fn new(pres: &PcPresentation, images: Vec<GroupElement>) -> Result<Self> {
        require_tail_is_derived(pres)?;
        if images.len() != pres.rank() {
            return Err(Error::DimensionMismatch {
                expected: pres.rank(),
                found: images.len(),
            });
        }
        let z = pres.center();
        for (i, img) in images.iter().enumerate() {
            pres.multiply(img, img)?;
            if !z.contains(img) {
                return Err(Error::InvalidParameter(format!(
                    "image of {} is not central",
                    pres.names()[i]
                )));
            }
            let q = pres.p().get() as u64;
            if !pres.power(img, q.pow(pres.heights()[i])).is_identity() {
                return Err(Error::InvalidParameter(format!(
                    "image of {} violates its power relation",
                    pres.names()[i]
                )));
            }
        }
        Ok(CentralHom { images })
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(GroupElement::is_identity)
    }

    /// `g γ = Π (g_i γ)^{a_i}`; the tail of g lies in `G' ≤ ker γ`.
    pub fn eval(&self, pres: &PcPresentation, g: &GroupElement) -> GroupElement {
        let mut acc = pres.identity();
        for (img, &a) in self.images.iter().zip(&g.exps) {
            if a != 0 {
                acc = pres.mul(&acc, &pres.power(img, a));
            }
        }
        acc
    }

    /// Pointwise product.
    pub fn add(&self, pres: &PcPresentation, other: &CentralHom) -> CentralHom {
        CentralHom {
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| pres.mul(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, pres: &PcPresentation, k: u64) -> CentralHom {
        CentralHom {
            images: self.images.iter().map(|a| pres.power(a, k)).collect(),
        }
    }
}

/// `γδ`: first γ, then δ.
pub fn compose(pres: &PcPresentation, gamma: &CentralHom, delta: &CentralHom) -> CentralHom {
    CentralHom {
        images: gamma.images.iter().map(|z| delta.eval(pres, z)).collect(),
    }
}

/// `γ ∘ δ = γ + δ + γδ`.
pub fn circle(pres: &PcPresentation, gamma: &CentralHom, delta: &CentralHom) -> CentralHom {
    gamma.add(pres, delta).add(pres, &compose(pres, gamma, delta))
}

fn require_tail_is_derived(pres: &PcPresentation) -> Result<()> {
    if !pres.commutator_span().is_full() {
        return Err(Error::InvalidParameter("the tail is larger than G'".into()));
    }
    Ok(())
}

/// A spanning set of `(Hom(G, Z(G)), +)`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    /// `Z(G) ∩ Ω_{e_i}(G)` for each generator.
    pub factors: Vec<StandardSubgroup>,
    pub spanning: Vec<CentralHom>,
    /// `log_p |Hom(G, Z(G))|`.
    pub order_exponent: u32,
}

pub fn hom_space(pres: &PcPresentation) -> Result<HomSpace> {
    require_tail_is_derived(pres)?;
    let z = pres.center();
    let factors: Vec<StandardSubgroup> = pres.heights().iter().map(|&e| z.intersection(&pres.omega(e))).collect();
    let mut spanning = Vec::new();
    for (i, s) in factors.iter().enumerate() {
        for g in s.generators(pres) {
            let mut h = CentralHom::zero(pres);
            h.images[i] = g;
            spanning.push(h);
        }
    }
    let order_exponent = factors.iter().map(StandardSubgroup::order_exponent).sum();
    Ok(HomSpace {
        factors,
        spanning,
        order_exponent,
    })
}

impl HomSpace {
    /// A random element `Σ c_k γ_k`.
    pub fn random<R: Rng + ?Sized>(&self, pres: &PcPresentation, rng: &mut R) -> CentralHom {
        let bound = pres.p().pow(pres.heights().iter().copied().max().unwrap_or(1));
        self.spanning.iter().fold(CentralHom::zero(pres), |acc, g| {
            acc.add(pres, &g.scale(pres, rng.gen_range(0..bound)))
        })
    }
}

/// The map `a ↦ a mod p` on exponent vectors, i.e. `G → G/Φ(G)` when the
/// tail is `G'`.
fn frattini_coordinates(pres: &PcPresentation, g: &GroupElement) -> FpVector {
    FpVector::new(
        pres.p(),
        &g.exps
            .iter()
            .map(|&a| (a % pres.p().get() as u64) as i64)
            .collect::<Vec<_>>(),
    )
}

/// Image of a subgroup in `G/Φ(G)`.
pub fn frattini_image(pres: &PcPresentation, s: &StandardSubgroup) -> Subspace {
    Subspace::span(
        pres.p(),
        pres.rank(),
        s.generators(pres).iter().map(|g| frattini_coordinates(pres, g)),
    )
}

/// The central endomorphism `g ↦ g · gγ`, known to be bijective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralAutomorphism {
    pub images: Vec<GroupElement>,
}

impl CentralAutomorphism {
    pub fn apply(&self, pres: &PcPresentation, g: &GroupElement) -> GroupElement {
        let mut acc = pres.identity();
        for (img, &a) in self.images.iter().zip(&g.exps) {
            if a != 0 {
                acc = pres.mul(&acc, &pres.power(img, a));
            }
        }
        pres.mul(
            &acc,
            &GroupElement {
                exps: vec![0; pres.rank()],
                tail: g.tail.clone(),
            },
        )
    }

    /// First `self`, then `other`.
    pub fn then(&self, pres: &PcPresentation, other: &CentralAutomorphism) -> CentralAutomorphism {
        CentralAutomorphism {
            images: self.images.iter().map(|g| other.apply(pres, g)).collect(),
        }
    }
}

/// Accepts `1 + γ` when it is invertible on `G/Φ(G)`.
pub fn to_automorphism(pres: &PcPresentation, gamma: &CentralHom) -> Result<CentralAutomorphism> {
    require_tail_is_derived(pres)?;
    let r = pres.rank();
    let rows: Vec<FpVector> = (0..r)
        .map(|i| FpVector::unit(pres.p(), r, i).add(&frattini_coordinates(pres, &gamma.images[i])))
        .collect();
    if !FpMatrix::from_vectors(pres.p(), r, &rows).is_invertible() {
        return Err(Error::NotBijective);
    }
    Ok(CentralAutomorphism {
        images: (0..r).map(|i| pres.mul(&pres.generator(i), &gamma.images[i])).collect(),
    })
}

/// `log_p |Aut_c(G)|` when every homomorphism yields an automorphism.
pub fn autc_order(pres: &PcPresentation, space: &HomSpace) -> Result<PPower> {
    let phi = pres.frattini();
    let all_in_phi = space.spanning.iter().all(|h| h.images.iter().all(|z| phi.contains(z)));
    if !all_in_phi {
        return Err(Error::Inconclusive(
            "some homomorphism leaves Φ(G), so 1 + γ need not be bijective".into(),
        ));
    }
    Ok(PPower {
        p: pres.p().get(),
        exponent: space.order_exponent,
    })
}

/// Order of `1 + γ` in `(Hom, ∘)`.
pub fn circle_order(pres: &PcPresentation, gamma: &CentralHom) -> u64 {
    let mut power = gamma.clone();
    let mut k = 1;
    while !power.is_zero() && k < 1 << 20 {
        power = circle(pres, &power, gamma);
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `γδ ≠ δγ`.
    NonCommuting {
        gamma: CentralHom,
        delta: CentralHom,
        gamma_delta: CentralHom,
        delta_gamma: CentralHom,
    },
    /// `1 + γ` has order above p.
    Order { gamma: CentralHom, order: u64 },
}

impl Witness {
    pub fn reverify(&self, pres: &PcPresentation) -> bool {
        match self {
            Witness::NonCommuting {
                gamma,
                delta,
                gamma_delta,
                delta_gamma,
            } => {
                let gd = compose(pres, gamma, delta);
                let dg = compose(pres, delta, gamma);
                gd == *gamma_delta && dg == *delta_gamma && gd != dg
            }
            Witness::Order { gamma, order } => {
                CentralHom::new(pres, gamma.images.clone()).is_ok() && circle_order(pres, gamma) == *order
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub structure: Structure,
    pub witness: Option<Witness>,
}

/// Decides the isomorphism type class of `(Hom(G, Z(G)), ∘)`.
///
/// Composition is additive in each argument, so commuting on a spanning set
/// means commuting everywhere.
pub fn aut_structure(pres: &PcPresentation, space: &HomSpace) -> Result<StructureReport> {
    let q = pres.p().get() as u64;
    let mut all_zero = true;
    for (a, g) in space.spanning.iter().enumerate() {
        for d in &space.spanning[a..] {
            let gd = compose(pres, g, d);
            let dg = compose(pres, d, g);
            if gd != dg {
                return Ok(StructureReport {
                    structure: Structure::Nonabelian,
                    witness: Some(Witness::NonCommuting {
                        gamma: g.clone(),
                        delta: d.clone(),
                        gamma_delta: gd,
                        delta_gamma: dg,
                    }),
                });
            }
            all_zero &= gd.is_zero();
        }
    }
    if all_zero && space.spanning.iter().all(|g| g.scale(pres, q).is_zero()) {
        return Ok(StructureReport {
            structure: Structure::ElementaryAbelian,
            witness: None,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let probes = space
        .spanning
        .iter()
        .cloned()
        .chain((0..RANDOM_ORDER_PROBES).map(|_| space.random(pres, &mut rng)));
    for g in probes {
        let order = circle_order(pres, &g);
        if order > q {
            return Ok(StructureReport {
                structure: Structure::Abelian,
                witness: Some(Witness::Order { gamma: g, order }),
            });
        }
    }
    Err(Error::Inconclusive(
        "abelian, but no element of order above p was found".into(),
    ))
}

/// One solution of the block equations for an automorphism of `G/G'`
/// (central product) or `G/Φ(G)` (extension).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockSolution {
    /// `x_i ↦ x_i α + λ_i z`, `z ↦ z^μ`.
    CentralProduct { alpha: FpMatrix, lambda: Vec<u32>, mu: u32 },
    /// `y ↦ y^τ x^σ`, `x_i ↦ x_i α`.
    Extension { alpha: FpMatrix, tau: u32, sigma: Vec<u32> },
}

impl BlockSolution {
    pub fn is_identity(&self) -> bool {
        match self {
            BlockSolution::CentralProduct { alpha, lambda, mu } => {
                alpha.is_identity() && lambda.iter().all(|&l| l == 0) && *mu == 1
            }
            BlockSolution::Extension { alpha, tau, sigma } => {
                alpha.is_identity() && *tau == 1 && sigma.iter().all(|&s| s == 0)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutCertificate {
    pub construction: ConstructionTag,
    pub aut_equals_autc: bool,
    pub method: String,
    pub structure: Structure,
    pub autc_order: PPower,
    pub witness: Option<Witness>,
    pub centralizer: CentralizerReport,
    /// Whether the characteristic subgroup behind the block shape was
    /// checked to have the expected image.
    pub block_shape: Option<bool>,
    pub block_solutions: Vec<BlockSolution>,
}

/// Decides `Aut(G) = Aut_c(G)` and the structure of `Aut_c(G)`.
pub fn verify_aut_central(group: &BuiltGroup, opts: &SearchOptions) -> Result<AutCertificate> {
    let pres = &group.pres;
    let (method, centralizer, block_shape, block_solutions, equal) = match group.tag {
        ConstructionTag::Special | ConstructionTag::Zurek => {
            let report = group.tat.problem().run(opts)?;
            let equal = report.complete && report.count == 1;
            (
                "centralizer of f in GL(V) preserving K".to_string(),
                report,
                None,
                Vec::new(),
                equal,
            )
        }
        ConstructionTag::CentralProduct => {
            let (report, sols) = central_product_blocks(group, opts)?;
            let z = pres.index_of("z").expect("built with z");
            let expected = Subspace::span(pres.p(), pres.rank(), [FpVector::unit(pres.p(), pres.rank(), z)]);
            let shape = frattini_image(pres, &pres.center()) == expected;
            let equal = shape && sols.len() == 1 && sols[0].is_identity();
            (
                "block solve on G/G' = V ⊕ <w> over the centralizer modulo K + <c0>".to_string(),
                report,
                Some(shape),
                sols,
                equal,
            )
        }
        ConstructionTag::Extension { .. } => {
            let (report, sols) = extension_blocks(group, opts)?;
            let n = group.tat.n();
            let expected = Subspace::span(
                pres.p(),
                pres.rank(),
                (0..n).map(|i| FpVector::unit(pres.p(), pres.rank(), i)),
            );
            let shape = frattini_image(pres, &pres.omega(2)) == expected;
            let equal = shape && sols.len() == 1 && sols[0].is_identity();
            (
                "block solve on G/Φ(G) = <u> ⊕ V over the centralizer modulo <c0>".to_string(),
                report,
                Some(shape),
                sols,
                equal,
            )
        }
    };
    let space = hom_space(pres)?;
    let structure = aut_structure(pres, &space)?;
    Ok(AutCertificate {
        construction: group.tag,
        aut_equals_autc: equal,
        method,
        structure: structure.structure,
        autc_order: autc_order(pres, &space)?,
        witness: structure.witness,
        centralizer,
        block_shape,
        block_solutions,
    })
}

fn block_options(opts: &SearchOptions) -> SearchOptions {
    SearchOptions {
        cap: BLOCK_CAP,
        stop_after: None,
        ..*opts
    }
}

fn all_elements(report: &CentralizerReport) -> Result<&[FpMatrix]> {
    if !report.complete || report.elements.len() as u64 != report.count {
        return Err(Error::Inconclusive(format!(
            "{} candidate blocks, more than can be examined",
            report.count
        )));
    }
    Ok(&report.elements)
}

/// `t` with `a ≡ t b (mod S)`, for `b ∉ S`.
fn scalar_multiple(p: FieldPrime, s: &Subspace, a: &FpVector, b: &FpVector) -> Option<u32> {
    let (a, b) = (s.reduce(a), s.reduce(b));
    let c = b.leading()?;
    let t = p.mul(a.get(c), p.inv(b.get(c))?);
    (a == b.scale(t)).then_some(t)
}

/// Solutions `(α, λ, μ)` of
/// `(e_i α) f + λ_i c₀ ≡ (e_i f) α̂`, `μ c₀ ≡ c₀ α̂ (mod K)`, `K α̂ = K`.
///
/// Reducing modulo `K + ⟨c₀⟩` leaves a centralizer problem for α alone.
pub fn central_product_blocks(
    group: &BuiltGroup,
    opts: &SearchOptions,
) -> Result<(CentralizerReport, Vec<BlockSolution>)> {
    let t = &group.tat;
    let p = t.p();
    let c0 = group
        .c0
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("no amalgam vector".into()))?;
    let k = t.k().k().clone();
    let m = k.with_vector(c0);
    let report = CentralizerProblem::new(t.f().clone(), m.clone(), vec![k.clone(), m])?.run(&block_options(opts))?;
    let mut sols = Vec::new();
    for alpha in all_elements(&report)? {
        let hat = induced_map(alpha)?;
        let lhs = alpha.mul(t.f())?;
        let rhs = t.f().mul(&hat)?;
        let lambda: Option<Vec<u32>> = (0..t.n())
            .map(|i| scalar_multiple(p, &k, &rhs.row_vector(i).sub(&lhs.row_vector(i)), c0))
            .collect();
        let mu = scalar_multiple(p, &k, &c0.mul_matrix(&hat), c0);
        if let (Some(lambda), Some(mu)) = (lambda, mu) {
            sols.push(BlockSolution::CentralProduct {
                alpha: alpha.clone(),
                lambda,
                mu,
            });
        }
    }
    Ok((report, sols))
}

/// Solutions `(τ, σ, α)` of `c₀ α̂ = τ c₀`, `(e_i α) f ≡ (e_i f) α̂ (mod ⟨c₀⟩)`
/// and `τ (e_i α) γ + (e_i α) ∧ σ = (e_i γ) α̂`.
pub fn extension_blocks(group: &BuiltGroup, opts: &SearchOptions) -> Result<(CentralizerReport, Vec<BlockSolution>)> {
    let t = &group.tat;
    let p = t.p();
    let n = t.n();
    let c0 = group
        .c0
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("no amalgam vector".into()))?;
    let gamma = group
        .gamma
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("no commutator map".into()))?;
    let d = gamma.cols();
    let zero = Subspace::zero(p, d);
    let m = zero.with_vector(c0);
    let report = CentralizerProblem::new(t.f().clone(), m.clone(), vec![m])?.run(&block_options(opts))?;
    let mut sols = Vec::new();
    for alpha in all_elements(&report)? {
        let hat = induced_map(alpha)?;
        let Some(tau) = scalar_multiple(p, &zero, &c0.mul_matrix(&hat), c0) else {
            continue;
        };
        // Unknown σ: Σ_j σ_j (α_i ∧ e_j) = (e_i γ) α̂ - τ α_i γ for every i.
        let target = gamma.mul(&hat)?;
        let ag = alpha.mul(gamma)?;
        let mut a = FpMatrix::zeros(p, n * d, n);
        let mut b = FpVector::zeros(p, n * d);
        for i in 0..n {
            let ai = alpha.row_vector(i);
            for j in 0..n {
                let w = wedge(&ai, &FpVector::unit(p, n, j))?;
                for c in 0..d {
                    a.set(i * d + c, j, w.get(c));
                }
            }
            let rhs = target.row_vector(i).sub(&ag.row_vector(i).scale(tau));
            for c in 0..d {
                b.set(i * d + c, rhs.get(c));
            }
        }
        if let Some(set) = solve_linear(&a, &b)? {
            debug_assert!(set.nullspace.is_empty());
            sols.push(BlockSolution::Extension {
                alpha: alpha.clone(),
                tau,
                sigma: set.particular.to_u32s(),
            });
        }
    }
    Ok((report, sols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldPrime;

    /// x, y of height 1 with x^3 = [x, y] = w over GF(3): W = G' = Z.
    fn small() -> PcPresentation {
        let p = FieldPrime::new(3).unwrap();
        PcPresentation::new(
            p,
            vec![
                ("x".into(), 1, FpVector::new(p, &[1])),
                ("y".into(), 1, FpVector::new(p, &[0])),
            ],
            1,
            &[(0, 1, FpVector::new(p, &[1]))],
        )
        .unwrap()
    }

    #[test]
    fn hom_space_counts() {
        let g = small();
        let space = hom_space(&g).unwrap();
        // each generator may go anywhere in Z = G' of order 3
        assert_eq!(space.order_exponent, 2);
        assert_eq!(space.spanning.len(), 2);
        let report = aut_structure(&g, &space).unwrap();
        assert_eq!(report.structure, Structure::ElementaryAbelian);
        assert_eq!(autc_order(&g, &space).unwrap(), PPower { p: 3, exponent: 2 });
    }

    #[test]
    fn hom_validation() {
        let g = small();
        assert!(CentralHom::new(&g, vec![g.generator(1), g.identity()]).is_err());
        let w = g.tail_element(&FpVector::new(g.p(), &[1]));
        let h = CentralHom::new(&g, vec![w.clone(), g.identity()]).unwrap();
        // x ↦ x w: eval on x^2 y is w^2
        let e = g.element(vec![2, 1], &[0]).unwrap();
        assert_eq!(h.eval(&g, &e), g.power(&w, 2));
        assert_eq!(circle(&g, &h, &CentralHom::zero(&g)), h);
    }

    #[test]
    fn non_bijective_rejected() {
        let p = FieldPrime::new(3).unwrap();
        // z central of order 3 in an abelian factor: γ: z ↦ z^{-1} kills z mod Φ.
        let g = PcPresentation::new(
            p,
            vec![
                ("x".into(), 1, FpVector::new(p, &[0])),
                ("y".into(), 1, FpVector::new(p, &[0])),
                ("z".into(), 1, FpVector::new(p, &[0])),
            ],
            1,
            &[(0, 1, FpVector::new(p, &[1]))],
        )
        .unwrap();
        let zinv = g.inverse(&g.generator(2));
        let gamma = CentralHom::new(&g, vec![g.identity(), g.identity(), zinv]).unwrap();
        assert_eq!(to_automorphism(&g, &gamma), Err(Error::NotBijective));
        let space = hom_space(&g).unwrap();
        assert!(matches!(autc_order(&g, &space), Err(Error::Inconclusive(_))));
    }
}
