//! Dense vectors, matrices and subspaces over GF(p).
//!
//! Vectors are rows and matrices act on the right: the image of `v` under
//! `m` is `v.mul_matrix(&m)`. Residues are stored as bytes and reduced
//! eagerly, so equality is plain structural equality.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldPrime;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    p: FieldPrime,
    entries: Vec<u8>,
}

impl FpVector {
    /// Reduces arbitrary integers into `[0, p)`.
    pub fn new(p: FieldPrime, entries: &[i64]) -> Self {
        FpVector {
            p,
            entries: entries.iter().map(|&a| p.reduce(a) as u8).collect(),
        }
    }

    /// Takes residues that are already reduced.
    pub fn from_residues(p: FieldPrime, entries: Vec<u8>) -> Self {
        debug_assert!(entries.iter().all(|&a| (a as u32) < p.get()));
        FpVector { p, entries }
    }

    pub fn zeros(p: FieldPrime, len: usize) -> Self {
        FpVector {
            p,
            entries: vec![0; len],
        }
    }

    pub fn unit(p: FieldPrime, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(p, len);
        v.entries[i] = 1;
        v
    }

    #[inline]
    pub fn p(&self) -> FieldPrime {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.entries[i] as u32
    }

    #[inline]
    pub fn set(&mut self, i: usize, a: u32) {
        self.entries[i] = (a % self.p.get()) as u8;
    }

    #[inline]
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn to_u32s(&self) -> Vec<u32> {
        self.entries.iter().map(|&a| a as u32).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&a| a == 0)
    }

    /// Index of the first nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        self.entries.iter().position(|&a| a != 0)
    }

    fn check_len(&self, other: &FpVector) {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        assert_eq!(self.p, other.p, "field mismatch");
    }

    pub fn add(&self, other: &FpVector) -> FpVector {
        let mut out = self.clone();
        out.add_scaled_assign(1, other);
        out
    }

    pub fn sub(&self, other: &FpVector) -> FpVector {
        let mut out = self.clone();
        out.add_scaled_assign(self.p.neg(1), other);
        out
    }

    pub fn scale(&self, c: u32) -> FpVector {
        let p = self.p;
        let c = c % p.get();
        FpVector {
            p,
            entries: self.entries.iter().map(|&a| p.mul(a as u32, c) as u8).collect(),
        }
    }

    pub fn neg(&self) -> FpVector {
        self.scale(self.p.neg(1))
    }

    /// `self += c * other`
    pub fn add_scaled_assign(&mut self, c: u32, other: &FpVector) {
        self.check_len(other);
        let p = self.p;
        let c = c % p.get();
        if c == 0 {
            return;
        }
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = p.add(*a as u32, p.mul(c, b as u32)) as u8;
        }
    }

    pub fn dot(&self, other: &FpVector) -> u32 {
        self.check_len(other);
        let s: u64 = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum();
        (s % self.p.get() as u64) as u32
    }

    /// The row vector `self * m`.
    pub fn mul_matrix(&self, m: &FpMatrix) -> FpVector {
        assert_eq!(self.len(), m.rows, "vector/matrix dimension mismatch");
        let p = self.p.get() as u64;
        let mut acc = vec![0u64; m.cols];
        for (i, &a) in self.entries.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (s, &b) in acc.iter_mut().zip(m.row(i)) {
                *s += a as u64 * b as u64;
            }
        }
        FpVector {
            p: self.p,
            entries: acc.into_iter().map(|s| (s % p) as u8).collect(),
        }
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Row-major dense matrix over GF(p).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    p: FieldPrime,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Reduced row-echelon form with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Solution set of a consistent linear system: `particular + span(nullspace)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: FpVector,
    pub nullspace: Vec<FpVector>,
}

impl FpMatrix {
    pub fn zeros(p: FieldPrime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: FieldPrime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(p: FieldPrime, diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(p, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = p.reduce(d) as u8;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing each entry.
    pub fn from_rows<R: AsRef<[i64]>>(p: FieldPrime, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&a| p.reduce(a) as u8));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Stacks vectors as rows; `cols` is needed when the list is empty.
    pub fn from_vectors(p: FieldPrime, cols: usize, vectors: &[FpVector]) -> Self {
        let mut data = Vec::with_capacity(vectors.len() * cols);
        for v in vectors {
            assert_eq!(v.len(), cols, "row length mismatch");
            data.extend_from_slice(v.entries());
        }
        FpMatrix {
            p,
            rows: vectors.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn p(&self) -> FieldPrime {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c] as u32
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, a: u32) {
        self.data[r * self.cols + c] = (a % self.p.get()) as u8;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> FpVector {
        FpVector::from_residues(self.p, self.row(r).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<FpVector> {
        (0..self.rows).map(|r| self.row_vector(r)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&a| a as u32).collect())
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.p, self.rows)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.p != other.p {
            return Err(Error::FieldMismatch(self.p.get(), other.p.get()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let p = self.p.get() as u64;
        let mut data = Vec::with_capacity(self.rows * other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|s| *s = 0);
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (s, &b) in acc.iter_mut().zip(other.row(k)) {
                    *s += a as u64 * b as u64;
                }
            }
            data.extend(acc.iter().map(|s| (s % p) as u8));
        }
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// The column vector `self * x`.
    pub fn mul_column(&self, x: &FpVector) -> FpVector {
        assert_eq!(x.len(), self.cols, "matrix/vector dimension mismatch");
        let entries = (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(x.entries())
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % self.p.get() as u64) as u8
            })
            .collect();
        FpVector::from_residues(self.p, entries)
    }

    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| m.data[r * m.cols + col] != 0) else {
                continue;
            };
            m.swap_rows(found, pivot_row);
            let inv = p.inv(m.get(pivot_row, col)).expect("nonzero pivot");
            m.scale_row(pivot_row, inv);
            for r in 0..m.rows {
                if r != pivot_row {
                    let c = m.get(r, col);
                    if c != 0 {
                        m.add_row_multiple(r, pivot_row, p.neg(c));
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        let rank = pivots.len();
        Rref {
            matrix: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for r in 0..n {
            aug.data[r * 2 * n..r * 2 * n + n].copy_from_slice(self.row(r));
            aug.data[r * 2 * n + n + r] = 1;
        }
        let red = aug.rref();
        if red.pivots.iter().take_while(|&&c| c < n).count() < n {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Self::zeros(self.p, n, n);
        for r in 0..n {
            inv.data[r * n..(r + 1) * n].copy_from_slice(&red.matrix.row(r)[n..]);
        }
        Ok(inv)
    }

    /// Basis of `{x : self * x = 0}` (column convention).
    pub fn nullspace(&self) -> Vec<FpVector> {
        let red = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = FpVector::zeros(p, self.cols);
                x.set(fc, 1);
                for (r, &pc) in red.pivots.iter().enumerate() {
                    x.set(pc, p.neg(red.matrix.get(r, fc)));
                }
                x
            })
            .collect()
    }

    /// Basis of `{v : v * self = 0}` (row convention).
    pub fn left_nullspace(&self) -> Vec<FpVector> {
        self.transpose().nullspace()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: u32) {
        let p = self.p;
        for a in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *a = p.mul(*a as u32, c) as u8;
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, c: u32) {
        let p = self.p;
        for k in 0..self.cols {
            let b = self.data[src * self.cols + k] as u32;
            let a = &mut self.data[dst * self.cols + k];
            *a = p.add(*a as u32, p.mul(c, b)) as u8;
        }
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|a| a.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    p: u32,
    rows: Vec<Vec<i64>>,
}

impl Serialize for FpMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            p: self.p.get(),
            rows: (0..self.rows)
                .map(|r| self.row(r).iter().map(|&a| a as i64).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FpMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let p = FieldPrime::new(repr.p).map_err(serde::de::Error::custom)?;
        FpMatrix::from_rows(p, &repr.rows).map_err(serde::de::Error::custom)
    }
}

/// Solves `a * x = b` for a column vector `x`. `None` means inconsistent.
pub fn solve_linear(a: &FpMatrix, b: &FpVector) -> Result<Option<SolutionSet>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let p = a.p();
    let n = a.cols();
    let mut aug = FpMatrix::zeros(p, a.rows(), n + 1);
    for r in 0..a.rows() {
        for c in 0..n {
            aug.set(r, c, a.get(r, c));
        }
        aug.set(r, n, b.get(r));
    }
    let red = aug.rref();
    if red.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut particular = FpVector::zeros(p, n);
    for (r, &pc) in red.pivots.iter().enumerate() {
        particular.set(pc, red.matrix.get(r, n));
    }
    Ok(Some(SolutionSet {
        particular,
        nullspace: a.nullspace(),
    }))
}

/// A subspace of GF(p)^ambient, stored as its reduced row-echelon basis.
///
/// The stored basis is canonical, so two subspaces are equal exactly when
/// the structs compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: FieldPrime,
    ambient: usize,
    basis: Vec<FpVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: FieldPrime, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: FieldPrime, ambient: usize) -> Self {
        Self::span(p, ambient, (0..ambient).map(|i| FpVector::unit(p, ambient, i)))
    }

    pub fn span<I: IntoIterator<Item = FpVector>>(p: FieldPrime, ambient: usize, vectors: I) -> Self {
        let vs: Vec<FpVector> = vectors.into_iter().collect();
        if vs.is_empty() {
            return Self::zero(p, ambient);
        }
        let red = FpMatrix::from_vectors(p, ambient, &vs).rref();
        let basis = (0..red.rank).map(|r| red.matrix.row_vector(r)).collect();
        Subspace {
            p,
            ambient,
            basis,
            pivots: red.pivots,
        }
    }

    #[inline]
    pub fn p(&self) -> FieldPrime {
        self.p
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical representative of `v + self`: reduce against the basis,
    /// which zeroes every pivot coordinate. Linear and idempotent.
    pub fn reduce(&self, v: &FpVector) -> FpVector {
        let mut out = v.clone();
        self.reduce_in_place(&mut out);
        out
    }

    pub fn reduce_in_place(&self, v: &mut FpVector) {
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = v.get(pc);
            if c != 0 {
                v.add_scaled_assign(self.p.neg(c), b);
            }
        }
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::span(self.p, self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn with_vector(&self, v: &FpVector) -> Subspace {
        Self::span(self.p, self.ambient, self.basis.iter().cloned().chain([v.clone()]))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.p, self.ambient);
        }
        // Relations a*U + b*W = 0 give a*U in both.
        let stacked: Vec<FpVector> = self.basis.iter().chain(&other.basis).cloned().collect();
        let m = FpMatrix::from_vectors(self.p, self.ambient, &stacked);
        let k = self.dim();
        let own = FpMatrix::from_vectors(self.p, self.ambient, &self.basis);
        let vecs = m.left_nullspace().into_iter().map(|rel| {
            let a = FpVector::from_residues(self.p, rel.entries()[..k].to_vec());
            a.mul_matrix(&own)
        });
        Self::span(self.p, self.ambient, vecs)
    }

    /// The image `self * m`.
    pub fn image(&self, m: &FpMatrix) -> Subspace {
        Self::span(self.p, m.cols(), self.basis.iter().map(|b| b.mul_matrix(m)))
    }

    /// All elements, in the order of coefficient tuples. Only for small spaces.
    pub fn elements(&self) -> Vec<FpVector> {
        let mut out = vec![FpVector::zeros(self.p, self.ambient)];
        for b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * self.p.get() as usize);
            for c in 0..self.p.get() {
                for v in &out {
                    let mut w = v.clone();
                    w.add_scaled_assign(c, b);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}
