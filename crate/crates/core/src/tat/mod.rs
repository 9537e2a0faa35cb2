//! Trivial automorphism triples `(V, K, f)`.
//!
//! A candidate is a subspace `K ≤ Λ²V` together with a linear map
//! `f : V → Λ²V/K`, stored as an `n × C(n,2)` matrix whose rows are canonical
//! coset representatives. It is a trivial automorphism triple when
//!
//! 1. `n ≥ 4`,
//! 2. `v ∧ V ⊄ K` for every nonzero `v`,
//! 3. `f` is injective, and
//! 4. the only α ∈ GL(V) with `K α̂ = K` and `α f = f ᾱ` is the identity.
//!
//! Condition 4 is decided by exhaustive search, see [`centralizer`].

pub mod centralizer;

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{check_wedge_condition, induced_map, wedge_dim, QuotientSpace};
use crate::field::FieldPrime;
use crate::linalg::{FpMatrix, FpVector, Subspace};

pub use centralizer::{CentralizerProblem, SearchOptions, DEFAULT_BUDGET};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TatCandidate {
    k: QuotientSpace,
    f: FpMatrix,
}

/// Outcome of a centralizer search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerReport {
    pub count: u64,
    /// False when the search stopped early.
    pub complete: bool,
    /// The first elements in enumeration order, up to the configured cap.
    pub elements: Vec<FpMatrix>,
    pub search_space: u128,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TatCandidate {
    /// Projects the rows of `f` to canonical representatives modulo K.
    pub fn new(k: QuotientSpace, f: FpMatrix) -> Result<Self> {
        let n = k.n();
        if f.rows() != n || f.cols() != wedge_dim(n) {
            return Err(Error::DimensionMismatch {
                expected: n * wedge_dim(n),
                found: f.rows() * f.cols(),
            });
        }
        if f.p() != k.p() {
            return Err(Error::FieldMismatch(f.p().get(), k.p().get()));
        }
        let rows: Vec<FpVector> = f.row_vectors().iter().map(|r| k.project(r)).collect();
        let f = FpMatrix::from_vectors(k.p(), wedge_dim(n), &rows);
        Ok(TatCandidate { k, f })
    }

    #[inline]
    pub fn p(&self) -> FieldPrime {
        self.k.p()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.k.n()
    }

    pub fn k(&self) -> &QuotientSpace {
        &self.k
    }

    /// Row `i` is the coset representative of `e_i f`.
    pub fn f(&self) -> &FpMatrix {
        &self.f
    }

    /// The centralizer problem of condition 4.
    pub fn problem(&self) -> CentralizerProblem {
        let k = self.k.k().clone();
        CentralizerProblem::new(self.f.clone(), k.clone(), vec![k]).expect("dimensions checked")
    }

    pub fn to_file(&self) -> TatFile {
        TatFile {
            schema: 1,
            p: self.p().get(),
            n: self.n(),
            wedge_order: "lex".into(),
            k_basis: self.k.k().basis().iter().map(FpVector::to_u32s).collect(),
            f_rows: self.f.to_rows(),
        }
    }

    pub fn from_file(file: &TatFile) -> Result<Self> {
        if file.wedge_order != "lex" {
            return Err(Error::Malformed(format!("unknown wedge order {:?}", file.wedge_order)));
        }
        let p = FieldPrime::new(file.p)?;
        let n = file.n;
        let d = wedge_dim(n);
        let vec = |row: &Vec<u32>| -> Result<FpVector> {
            if row.len() != d {
                return Err(Error::Malformed(format!(
                    "row of length {} in Λ² of dimension {d}",
                    row.len()
                )));
            }
            Ok(FpVector::new(p, &row.iter().map(|&a| a as i64).collect::<Vec<_>>()))
        };
        let k_basis = file.k_basis.iter().map(vec).collect::<Result<Vec<_>>>()?;
        if file.f_rows.len() != n {
            return Err(Error::Malformed(format!("{} rows of f for n = {n}", file.f_rows.len())));
        }
        let f_rows = file.f_rows.iter().map(vec).collect::<Result<Vec<_>>>()?;
        let k = QuotientSpace::new(p, n, k_basis)?;
        TatCandidate::new(k, FpMatrix::from_vectors(p, d, &f_rows))
    }
}

/// On-disk form of a triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TatFile {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub p: u32,
    pub n: usize,
    #[serde(default = "lex")]
    pub wedge_order: String,
    pub k_basis: Vec<Vec<u32>>,
    pub f_rows: Vec<Vec<u32>>,
}

fn schema_one() -> u32 {
    1
}

fn lex() -> String {
    "lex".into()
}

/// Condition 3: `rank f = n`. The rows are canonical representatives, so
/// this is the rank of `f` as a map into Λ²V/K.
pub fn verify_injective(t: &TatCandidate) -> bool {
    t.f.rank() == t.n()
}

/// Condition 4 by exhaustive search over GL(n, p).
pub fn centralizer(t: &TatCandidate, opts: &SearchOptions) -> Result<CentralizerReport> {
    if !check_wedge_condition(t.k()) {
        return Err(Error::InvalidTat("v ∧ V ⊆ K for some nonzero v".into()));
    }
    if !verify_injective(t) {
        return Err(Error::InvalidTat("f is not injective".into()));
    }
    t.problem().run(opts)
}

/// Per-condition verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TatVerdict {
    pub dimension_ok: bool,
    pub wedge_condition: bool,
    pub injective: bool,
    /// `None` when conditions 2 or 3 already failed.
    pub centralizer: Option<CentralizerReport>,
}

impl TatVerdict {
    pub fn trivial_centralizer(&self) -> bool {
        self.centralizer.as_ref().is_some_and(|c| c.complete && c.count == 1)
    }

    pub fn is_tat(&self) -> bool {
        self.dimension_ok && self.wedge_condition && self.injective && self.trivial_centralizer()
    }
}

pub fn verify(t: &TatCandidate, opts: &SearchOptions) -> Result<TatVerdict> {
    let dimension_ok = t.n() >= 4;
    let wedge_condition = check_wedge_condition(t.k());
    let injective = verify_injective(t);
    let centralizer = if wedge_condition && injective {
        Some(t.problem().run(opts)?)
    } else {
        None
    };
    Ok(TatVerdict {
        dimension_ok,
        wedge_condition,
        injective,
        centralizer,
    })
}

/// Conditions 1 to 4.
pub fn is_tat(t: &TatCandidate, opts: &SearchOptions) -> Result<bool> {
    if t.n() < 4 || !check_wedge_condition(t.k()) || !verify_injective(t) {
        return Ok(false);
    }
    let quick = SearchOptions {
        stop_after: Some(2),
        ..*opts
    };
    let report = t.problem().run(&quick)?;
    Ok(report.complete && report.count == 1)
}

/// The same triple after the change of basis `v ↦ v β` on V:
/// `K' = K β̂` and `f' = β⁻¹ f β̂` reduced modulo `K'`.
pub fn transport_tat(t: &TatCandidate, beta: &FpMatrix) -> Result<TatCandidate> {
    let inv = beta.inverse()?;
    let hat = induced_map(beta)?;
    let k = QuotientSpace::from_subspace(t.n(), t.k().k().image(&hat))?;
    let f = inv.mul(&t.f)?.mul(&hat)?;
    TatCandidate::new(k, f)
}

#[derive(Clone, Debug)]
pub struct SearchParams {
    pub p: FieldPrime,
    pub n: usize,
    pub k_dim: usize,
    pub seed: u64,
    /// Number of injective candidates whose centralizer is computed.
    pub budget: u32,
    pub options: SearchOptions,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub candidate: Option<TatCandidate>,
    /// Candidates whose centralizer was computed.
    pub attempts: u32,
    /// Draws discarded because f was not injective.
    pub non_injective: u32,
    /// Draws of K discarded by the wedge condition or dependence.
    pub rejected_k: u32,
}

impl SearchOutcome {
    /// Fraction of examined candidates that were triples.
    pub fn success_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.candidate.is_some() as u32 as f64 / self.attempts as f64
        }
    }
}

const K_REJECTION_LIMIT: u32 = 1000;
const F_REJECTION_LIMIT: u32 = 1000;

pub fn check_search_params(n: usize, k_dim: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("n = {n}, need n >= 4")));
    }
    if wedge_dim(n) < k_dim + n {
        return Err(Error::InvalidParameter(format!(
            "C({n},2) - {k_dim} < {n}: no injective f exists"
        )));
    }
    Ok(())
}

/// Draws random `(K, f)` until a triple with trivial centralizer turns up
/// or the budget is spent. Deterministic in the seed.
pub fn search_tat(params: &SearchParams) -> Result<SearchOutcome> {
    let SearchParams { p, n, k_dim, .. } = *params;
    check_search_params(n, k_dim)?;
    let d = wedge_dim(n);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out = SearchOutcome {
        candidate: None,
        attempts: 0,
        non_injective: 0,
        rejected_k: 0,
    };
    let quick = SearchOptions {
        stop_after: Some(2),
        ..params.options
    };
    while out.attempts < params.budget {
        out.attempts += 1;
        let Some(k) = random_k(p, n, k_dim, &mut rng, &mut out.rejected_k) else {
            continue;
        };
        let mut f = None;
        for _ in 0..F_REJECTION_LIMIT {
            let rows: Vec<FpVector> = (0..n).map(|_| k.project(&random_vector(p, d, &mut rng))).collect();
            let m = FpMatrix::from_vectors(p, d, &rows);
            if m.rank() == n {
                f = Some(m);
                break;
            }
            out.non_injective += 1;
        }
        let Some(f) = f else { continue };
        let t = TatCandidate::new(k, f)?;
        let report = t.problem().run(&quick)?;
        if report.complete && report.count == 1 {
            out.candidate = Some(t);
            break;
        }
    }
    Ok(out)
}

fn random_vector(p: FieldPrime, len: usize, rng: &mut impl Rng) -> FpVector {
    let entries: Vec<u8> = (0..len).map(|_| rng.gen_range(0..p.get()) as u8).collect();
    FpVector::from_residues(p, entries)
}

fn random_k(p: FieldPrime, n: usize, k_dim: usize, rng: &mut impl Rng, rejected: &mut u32) -> Option<QuotientSpace> {
    let d = wedge_dim(n);
    if k_dim == 0 {
        return Some(QuotientSpace::trivial(p, n));
    }
    for _ in 0..K_REJECTION_LIMIT {
        let vs: Vec<FpVector> = (0..k_dim).map(|_| random_vector(p, d, rng)).collect();
        let k = Subspace::span(p, d, vs);
        if k.dim() == k_dim {
            let q = QuotientSpace::from_subspace(n, k).expect("ambient is C(n,2)");
            if check_wedge_condition(&q) {
                return Some(q);
            }
        }
        *rejected += 1;
    }
    None
}
