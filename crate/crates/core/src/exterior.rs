//! The exterior square Λ²V of V = GF(p)^n and its quotients Λ²V/K.
//!
//! Coordinates of Λ²V are indexed by pairs `(i, j)` with `i < j` in
//! lexicographic order: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`. This order
//! is also the on-disk order of every Λ² vector.

use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::linalg::{FpMatrix, FpVector, Subspace};

/// `C(n, 2)`
#[inline]
pub fn wedge_dim(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic index of the pair `(i, j)`, `i < j < n`.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)`, `i < j`, in coordinate order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// `u ∧ v`, with coordinate `(i, j)` equal to `u_i v_j - u_j v_i`.
pub fn wedge(u: &FpVector, v: &FpVector) -> Result<FpVector> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let p = u.p();
    let mut out = Vec::with_capacity(wedge_dim(u.len()));
    wedge_into(p, u.entries(), v.entries(), &mut out);
    Ok(FpVector::from_residues(p, out))
}

#[inline]
pub(crate) fn wedge_into(p: FieldPrime, u: &[u8], v: &[u8], out: &mut Vec<u8>) {
    let n = u.len();
    let q = p.get();
    for i in 0..n {
        for j in i + 1..n {
            let a = u[i] as u32 * v[j] as u32 + q * q;
            let b = u[j] as u32 * v[i] as u32;
            out.push(((a - b) % q) as u8);
        }
    }
}

/// The matrix of α̂ on Λ²V: row `(i, j)` is `(e_i α) ∧ (e_j α)`.
pub fn induced_map(alpha: &FpMatrix) -> Result<FpMatrix> {
    if !alpha.is_square() {
        return Err(Error::DimensionMismatch {
            expected: alpha.rows(),
            found: alpha.cols(),
        });
    }
    let n = alpha.rows();
    let p = alpha.p();
    let rows: Vec<FpVector> = pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let mut out = Vec::with_capacity(wedge_dim(n));
            wedge_into(p, alpha.row(i), alpha.row(j), &mut out);
            FpVector::from_residues(p, out)
        })
        .collect();
    Ok(FpMatrix::from_vectors(p, wedge_dim(n), &rows))
}

/// Λ²V/K for a subspace K, with canonical coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    n: usize,
    k: Subspace,
}

impl QuotientSpace {
    pub fn new(p: FieldPrime, n: usize, k_basis: Vec<FpVector>) -> Result<Self> {
        let d = wedge_dim(n);
        if let Some(bad) = k_basis.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(QuotientSpace {
            n,
            k: Subspace::span(p, d, k_basis),
        })
    }

    pub fn from_subspace(n: usize, k: Subspace) -> Result<Self> {
        if k.ambient() != wedge_dim(n) {
            return Err(Error::DimensionMismatch {
                expected: wedge_dim(n),
                found: k.ambient(),
            });
        }
        Ok(QuotientSpace { n, k })
    }

    /// K = {0}.
    pub fn trivial(p: FieldPrime, n: usize) -> Self {
        QuotientSpace {
            n,
            k: Subspace::zero(p, wedge_dim(n)),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> FieldPrime {
        self.k.p()
    }

    #[inline]
    pub fn k(&self) -> &Subspace {
        &self.k
    }

    pub fn k_dim(&self) -> usize {
        self.k.dim()
    }

    /// `dim Λ²V/K`
    pub fn quotient_dim(&self) -> usize {
        wedge_dim(self.n) - self.k.dim()
    }

    /// Canonical coset representative: pivot coordinates of RREF(K) zeroed.
    pub fn project(&self, v: &FpVector) -> FpVector {
        self.k.reduce(v)
    }

    /// Coordinates of Λ²V that survive projection, in increasing order.
    /// Representatives are exactly the vectors supported on these.
    pub fn free_coordinates(&self) -> Vec<usize> {
        (0..wedge_dim(self.n))
            .filter(|c| !self.k.pivots().contains(c))
            .collect()
    }
}

/// Nonzero vectors of GF(p)^n whose first nonzero entry is 1.
pub fn projective_points(p: FieldPrime, n: usize) -> impl Iterator<Item = FpVector> {
    let q = p.get() as u64;
    (0..n).flat_map(move |lead| {
        let tail = n - lead - 1;
        (0..q.pow(tail as u32)).map(move |mut k| {
            let mut v = FpVector::zeros(p, n);
            v.set(lead, 1);
            for i in (lead + 1..n).rev() {
                v.set(i, (k % q) as u32);
                k /= q;
            }
            v
        })
    })
}

/// True iff `v ∧ V ⊄ K` for every nonzero `v`.
pub fn check_wedge_condition(k: &QuotientSpace) -> bool {
    let n = k.n();
    let p = k.p();
    let basis: Vec<FpVector> = (0..n).map(|j| FpVector::unit(p, n, j)).collect();
    projective_points(p, n).all(|v| {
        basis.iter().any(|e| {
            let w = wedge(&v, e).expect("same length");
            !k.project(&w).is_zero()
        })
    })
}

/// True iff `K α̂ = K`.
pub fn subspace_invariant(k: &QuotientSpace, alpha: &FpMatrix) -> Result<bool> {
    let hat = induced_map(alpha)?;
    Ok(k.k().image(&hat) == *k.k())
}
