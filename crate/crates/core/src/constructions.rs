//! The four group families built from a trivial automorphism triple.
//!
//! | tag | generators | relations |
//! |---|---|---|
//! | special | `x1..xn` | `x_i^p = e_i f`, `[x_i, x_j] = e_i ∧ e_j` mod K |
//! | zurek | `x1..xn` | `x_i^{p²} = e_i f`, same commutators |
//! | central product | `x1..xn, z` | special relations, `z^p = c₀`, z central |
//! | extension(m) | `x1..xn, y` | special relations with K = 0, `y^{p^m} = c₀`, `[x_i, y] = e_i γ` |
//!
//! The tail W is `Λ²V/K`, written in the free coordinates of the canonical
//! representatives. `c₀` is the lexicographically first representative
//! outside `K + Vf`.

use serde::{Deserialize, Serialize};

use crate::aut::Structure;
use crate::error::{Error, Result};
use crate::exterior::{pair_index, wedge_dim, QuotientSpace};
use crate::field::FieldPrime;
use crate::group::{PcPresentation, PresentationData, SubgroupRelation};
use crate::linalg::{solve_linear, FpMatrix, FpVector, Subspace};
use crate::tat::{is_tat, SearchOptions, TatCandidate, TatFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionTag {
    Special,
    Zurek,
    CentralProduct,
    Extension { m: u32 },
}

impl ConstructionTag {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionTag::Special => "special",
            ConstructionTag::Zurek => "zurek",
            ConstructionTag::CentralProduct => "central_product",
            ConstructionTag::Extension { .. } => "extension",
        }
    }

    /// Parses `special`, `zurek`, `central_product` or `extension` (with `m`).
    pub fn parse(name: &str, m: u32) -> Result<Self> {
        match name {
            "special" => Ok(ConstructionTag::Special),
            "zurek" => Ok(ConstructionTag::Zurek),
            "central_product" | "central-product" => Ok(ConstructionTag::CentralProduct),
            "extension" => Ok(ConstructionTag::Extension { m }),
            other => Err(Error::InvalidParameter(format!("unknown construction {other:?}"))),
        }
    }

    pub fn all(m: u32) -> [ConstructionTag; 4] {
        [
            ConstructionTag::Special,
            ConstructionTag::Zurek,
            ConstructionTag::CentralProduct,
            ConstructionTag::Extension { m },
        ]
    }
}

/// Relative position of `G'`, `Φ(G)` and `Z(G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lattice {
    #[serde(rename = "G'=Phi=Z")]
    AllEqual,
    #[serde(rename = "G'<Phi=Z")]
    DerivedBelow,
    #[serde(rename = "G'=Phi<Z")]
    CentreAbove,
    #[serde(rename = "other")]
    Other,
}

impl Lattice {
    pub fn of(pres: &PcPresentation) -> Lattice {
        let d = pres.derived_subgroup();
        let phi = pres.frattini();
        let z = pres.center();
        use SubgroupRelation::*;
        match (d.compare(&phi), phi.compare(&z)) {
            (Equal, Equal) => Lattice::AllEqual,
            (ProperSubset, Equal) => Lattice::DerivedBelow,
            (Equal, ProperSubset) => Lattice::CentreAbove,
            _ => Lattice::Other,
        }
    }
}

impl std::fmt::Display for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Lattice::AllEqual => "G′ = Φ(G) = Z(G)",
            Lattice::DerivedBelow => "G′ < Φ(G) = Z(G)",
            Lattice::CentreAbove => "G′ = Φ(G) < Z(G)",
            Lattice::Other => "other",
        })
    }
}

/// What each construction is expected to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSheet {
    pub aut_equals_autc: bool,
    pub structure: Structure,
    pub lattice: Lattice,
    /// Expected value of `Z(G) ≤ Φ(G)`.
    pub purely_nonabelian_certificate: bool,
}

pub fn claim_sheet(tag: ConstructionTag) -> ClaimSheet {
    let (structure, lattice, certificate) = match tag {
        ConstructionTag::Special => (Structure::ElementaryAbelian, Lattice::AllEqual, true),
        ConstructionTag::Zurek => (Structure::Nonabelian, Lattice::DerivedBelow, true),
        ConstructionTag::CentralProduct => (Structure::ElementaryAbelian, Lattice::CentreAbove, false),
        ConstructionTag::Extension { .. } => (Structure::Abelian, Lattice::DerivedBelow, true),
    };
    ClaimSheet {
        aut_equals_autc: true,
        structure,
        lattice,
        purely_nonabelian_certificate: certificate,
    }
}

/// A presentation together with the data it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltGroup {
    pub tag: ConstructionTag,
    pub tat: TatCandidate,
    pub pres: PcPresentation,
    /// Power tail of z or y, as a representative in Λ²V.
    pub c0: Option<FpVector>,
    /// Commutator map of the extension, `n × C(n,2)`.
    pub gamma: Option<FpMatrix>,
}

/// On-disk form of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default = "schema_one")]
    pub schema: u32,
    #[serde(flatten)]
    pub presentation: PresentationData,
    pub construction: ConstructionTag,
    pub tat: TatFile,
}

fn schema_one() -> u32 {
    1
}

impl BuiltGroup {
    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            schema: 1,
            presentation: self.pres.to_data(),
            construction: self.tag,
            tat: self.tat.to_file(),
        }
    }

    /// Rebuilds from the embedded triple and checks the stored presentation.
    /// The triple itself is not re-verified.
    pub fn from_file(file: &GroupFile) -> Result<Self> {
        let tat = TatCandidate::from_file(&file.tat)?;
        let pres = PcPresentation::from_data(&file.presentation)?;
        let k = tat.k();
        let n = tat.n();
        let rebuilt = match file.construction {
            ConstructionTag::Special | ConstructionTag::Zurek => {
                let height = if file.construction == ConstructionTag::Special {
                    1
                } else {
                    2
                };
                BuiltGroup {
                    tag: file.construction,
                    pres: special_presentation(k, tat.f(), height)?,
                    tat,
                    c0: None,
                    gamma: None,
                }
            }
            ConstructionTag::CentralProduct => {
                let z = pres
                    .index_of("z")
                    .ok_or_else(|| Error::Malformed("no generator z".into()))?;
                let c0 = from_w(k, &pres.power_tail(z));
                BuiltGroup {
                    tag: file.construction,
                    pres: central_product_presentation(k, tat.f(), &c0)?,
                    tat,
                    c0: Some(c0),
                    gamma: None,
                }
            }
            ConstructionTag::Extension { m } => {
                let y = pres
                    .index_of("y")
                    .ok_or_else(|| Error::Malformed("no generator y".into()))?;
                if pres.w_dim() != wedge_dim(n) || y != n {
                    return Err(Error::Malformed("extension needs K = 0 and y last".into()));
                }
                let c0 = pres.power_tail(y);
                let rows: Vec<FpVector> = (0..n).map(|i| pres.comm_tail(i, y)).collect();
                let gamma = FpMatrix::from_vectors(tat.p(), wedge_dim(n), &rows);
                BuiltGroup {
                    tag: file.construction,
                    pres: extension_presentation(tat.f(), m, &gamma, &c0)?,
                    tat,
                    c0: Some(c0),
                    gamma: Some(gamma),
                }
            }
        };
        if rebuilt.pres != pres {
            return Err(Error::Malformed(format!(
                "presentation does not match a {} group on the embedded triple",
                file.construction.name()
            )));
        }
        Ok(rebuilt)
    }
}

/// Representative in Λ²V to coordinates of `Λ²V/K`.
pub fn to_w(k: &QuotientSpace, v: &FpVector) -> FpVector {
    let rep = k.project(v);
    let entries = k.free_coordinates().iter().map(|&c| rep.get(c) as u8).collect();
    FpVector::from_residues(v.p(), entries)
}

/// Coordinates of `Λ²V/K` to the canonical representative.
pub fn from_w(k: &QuotientSpace, w: &FpVector) -> FpVector {
    let mut v = FpVector::zeros(k.p(), wedge_dim(k.n()));
    for (t, &c) in k.free_coordinates().iter().enumerate() {
        v.set(c, w.get(t));
    }
    v
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn wedge_commutators(k: &QuotientSpace) -> Vec<(usize, usize, FpVector)> {
    let n = k.n();
    let p = k.p();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let e = FpVector::unit(p, wedge_dim(n), pair_index(n, i, j));
            out.push((i, j, to_w(k, &e)));
        }
    }
    out
}

/// `⟨x : x^{p^h} = x f, K⟩` with no checks on `(K, f)`.
pub fn special_presentation(k: &QuotientSpace, f: &FpMatrix, height: u32) -> Result<PcPresentation> {
    let n = k.n();
    check_f(k, f)?;
    let gens = names(n)
        .into_iter()
        .enumerate()
        .map(|(i, name)| (name, height, to_w(k, &f.row_vector(i))))
        .collect();
    PcPresentation::new(k.p(), gens, k.quotient_dim(), &wedge_commutators(k))
}

/// The special group with a central `z`, `z^p = c₀`, no checks on the data.
pub fn central_product_presentation(k: &QuotientSpace, f: &FpMatrix, c0: &FpVector) -> Result<PcPresentation> {
    let n = k.n();
    check_f(k, f)?;
    let mut gens: Vec<(String, u32, FpVector)> = names(n)
        .into_iter()
        .enumerate()
        .map(|(i, name)| (name, 1, to_w(k, &f.row_vector(i))))
        .collect();
    gens.push(("z".into(), 1, to_w(k, c0)));
    PcPresentation::new(k.p(), gens, k.quotient_dim(), &wedge_commutators(k))
}

/// The extension of `⟨x : x^p = x f⟩` by `y`, no checks on the data.
pub fn extension_presentation(f: &FpMatrix, m: u32, gamma: &FpMatrix, c0: &FpVector) -> Result<PcPresentation> {
    let n = f.rows();
    let p = f.p();
    let k = QuotientSpace::trivial(p, n);
    check_f(&k, f)?;
    check_f(&k, gamma)?;
    let mut gens: Vec<(String, u32, FpVector)> = names(n)
        .into_iter()
        .enumerate()
        .map(|(i, name)| (name, 1, f.row_vector(i)))
        .collect();
    gens.push(("y".into(), m, c0.clone()));
    let mut comm = wedge_commutators(&k);
    comm.extend((0..n).map(|i| (i, n, gamma.row_vector(i))));
    PcPresentation::new(p, gens, wedge_dim(n), &comm)
}

fn check_f(k: &QuotientSpace, f: &FpMatrix) -> Result<()> {
    let (n, d) = (k.n(), wedge_dim(k.n()));
    if f.rows() != n || f.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: n * d,
            found: f.rows() * f.cols(),
        });
    }
    Ok(())
}

fn require_tat(t: &TatCandidate, opts: &SearchOptions) -> Result<()> {
    if !is_tat(t, opts)? {
        return Err(Error::InvalidTat("not a trivial automorphism triple".into()));
    }
    Ok(())
}

/// The lexicographically first representative of `Λ²V/K` outside `Vf`,
/// or `None` when `K + Vf = Λ²V`.
pub fn amalgam_vector(t: &TatCandidate) -> Option<FpVector> {
    let k = t.k();
    let p = t.p();
    let dq = k.quotient_dim();
    let image = Subspace::span(p, dq, t.f().row_vectors().iter().map(|r| to_w(k, r)));
    if image.is_full() {
        return None;
    }
    // Lex order puts the vectors supported on the last j coordinates first;
    // one of the first p^(dim+1) is outside the image.
    let q = p.get() as u64;
    (1..q.pow(dq.min(image.dim() + 1) as u32))
        .map(|mut code| {
            let mut w = FpVector::zeros(p, dq);
            for c in (0..dq).rev() {
                w.set(c, (code % q) as u32);
                code /= q;
            }
            w
        })
        .find(|w| !image.contains(w))
        .map(|w| from_w(k, &w))
}

pub fn build_special(t: &TatCandidate, opts: &SearchOptions) -> Result<BuiltGroup> {
    require_tat(t, opts)?;
    Ok(BuiltGroup {
        tag: ConstructionTag::Special,
        pres: special_presentation(t.k(), t.f(), 1)?,
        tat: t.clone(),
        c0: None,
        gamma: None,
    })
}

pub fn build_zurek(t: &TatCandidate, opts: &SearchOptions) -> Result<BuiltGroup> {
    require_tat(t, opts)?;
    Ok(BuiltGroup {
        tag: ConstructionTag::Zurek,
        pres: special_presentation(t.k(), t.f(), 2)?,
        tat: t.clone(),
        c0: None,
        gamma: None,
    })
}

pub fn build_central_product(t: &TatCandidate, opts: &SearchOptions) -> Result<BuiltGroup> {
    require_tat(t, opts)?;
    let c0 = amalgam_vector(t).ok_or(Error::AmalgamObstruction)?;
    Ok(BuiltGroup {
        tag: ConstructionTag::CentralProduct,
        pres: central_product_presentation(t.k(), t.f(), &c0)?,
        tat: t.clone(),
        c0: Some(c0),
        gamma: None,
    })
}

/// `γ = f` when `gamma` is `None`.
pub fn build_extension(t: &TatCandidate, m: u32, gamma: Option<&FpMatrix>, opts: &SearchOptions) -> Result<BuiltGroup> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m = {m}, need m > 1")));
    }
    if t.k().k_dim() != 0 {
        return Err(Error::InvalidTat("the extension needs K = 0".into()));
    }
    let gamma = gamma.unwrap_or(t.f()).clone();
    check_gamma(&gamma)?;
    require_tat(t, opts)?;
    let c0 = amalgam_vector(t).ok_or(Error::AmalgamObstruction)?;
    Ok(BuiltGroup {
        tag: ConstructionTag::Extension { m },
        pres: extension_presentation(t.f(), m, &gamma, &c0)?,
        tat: t.clone(),
        c0: Some(c0),
        gamma: Some(gamma),
    })
}

/// Rejects `x ↦ x ∧ v` and non-injective maps `V → Λ²V`.
pub fn check_gamma(gamma: &FpMatrix) -> Result<()> {
    let n = gamma.rows();
    let p = gamma.p();
    let d = wedge_dim(n);
    if gamma.cols() != d {
        return Err(Error::BadGamma(format!("expected {n} rows of length {d}")));
    }
    if let Some(v) = inner_vector(p, gamma) {
        return Err(Error::BadGamma(format!("inner map x ↦ x ∧ {v}")));
    }
    if gamma.rank() != n {
        return Err(Error::BadGamma("not injective".into()));
    }
    Ok(())
}

/// `v` with `e_i γ = e_i ∧ v` for all i, if one exists.
fn inner_vector(p: FieldPrime, gamma: &FpMatrix) -> Option<FpVector> {
    let n = gamma.rows();
    let d = wedge_dim(n);
    // Unknown v; equation (i, pair) reads Σ_j v_j (e_i ∧ e_j)[pair] = γ_i[pair].
    let mut a = FpMatrix::zeros(p, n * d, n);
    let mut b = FpVector::zeros(p, n * d);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, p.get() - 1) };
            a.set(i * d + pair_index(n, lo, hi), j, s);
        }
        for c in 0..d {
            b.set(i * d + c, gamma.get(i, c));
        }
    }
    solve_linear(&a, &b).ok().flatten().map(|s| s.particular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::wedge;

    fn gf(p: u32) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    #[test]
    fn w_coordinates_round_trip() {
        let p = gf(3);
        let e = |c| FpVector::unit(p, 6, c);
        let k = QuotientSpace::new(p, 4, vec![e(0).add(&e(5))]).unwrap();
        for c in 0..6 {
            let w = to_w(&k, &e(c));
            assert_eq!(w.len(), 5);
            assert_eq!(to_w(&k, &from_w(&k, &w)), w);
            assert_eq!(from_w(&k, &w), k.project(&e(c)));
        }
    }

    #[test]
    fn inner_maps_are_detected() {
        let p = gf(5);
        let n = 4;
        let v = FpVector::new(p, &[1, 2, 0, 4]);
        let rows: Vec<FpVector> = (0..n).map(|i| wedge(&FpVector::unit(p, n, i), &v).unwrap()).collect();
        let gamma = FpMatrix::from_vectors(p, 6, &rows);
        assert_eq!(inner_vector(p, &gamma), Some(v));
        assert!(matches!(check_gamma(&gamma), Err(Error::BadGamma(_))));
        let zero = FpMatrix::zeros(p, n, 6);
        assert!(matches!(check_gamma(&zero), Err(Error::BadGamma(_))));
        let injective = FpMatrix::from_rows(
            p,
            &[
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 0, 1],
            ],
        )
        .unwrap();
        assert!(check_gamma(&injective).is_ok());
    }

    #[test]
    fn tag_parsing() {
        assert_eq!(
            ConstructionTag::parse("extension", 3).unwrap(),
            ConstructionTag::Extension { m: 3 }
        );
        assert!(ConstructionTag::parse("bogus", 2).is_err());
        let json = serde_json::to_string(&ConstructionTag::Extension { m: 2 }).unwrap();
        assert_eq!(json, r#"{"kind":"extension","m":2}"#);
    }

    #[test]
    fn claim_sheets() {
        assert_eq!(claim_sheet(ConstructionTag::Zurek).structure, Structure::Nonabelian);
        assert_eq!(
            claim_sheet(ConstructionTag::CentralProduct).structure,
            Structure::ElementaryAbelian
        );
        assert_eq!(
            claim_sheet(ConstructionTag::Extension { m: 2 }).structure,
            Structure::Abelian
        );
        assert_eq!(claim_sheet(ConstructionTag::Special).lattice, Lattice::AllEqual);
    }
}
