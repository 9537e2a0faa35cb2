//! Exhaustive, partitioned enumeration of GL(n, p).
//!
//! Matrices are built row by row; every row is a vector of GF(p)^n encoded
//! as an integer "code" whose base-p digits are its coordinates (first
//! coordinate most significant), so increasing codes are lexicographic order.
//! A row is admissible when it lies outside the span of the rows above it.
//!
//! Work is split by the first row: the nonzero first rows are numbered
//! `0, 1, 2, ...` in code order and worker `w` of `k` (1-based) owns those with
//! number `≡ w - 1 (mod k)`. The union over workers is all of GL(n, p) and the
//! order inside each worker depends only on `(n, p, k)`.

use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::linalg::FpMatrix;

/// `|GL(n, p)| = (p^n - 1)(p^n - p)...(p^n - p^(n-1))`, saturating.
pub fn gl_order(n: usize, p: FieldPrime) -> u128 {
    let q = p.get() as u128;
    let Some(pn) = q.checked_pow(n as u32) else {
        return u128::MAX;
    };
    let mut order: u128 = 1;
    let mut pi: u128 = 1;
    for _ in 0..n {
        order = order.saturating_mul(pn - pi);
        pi *= q;
    }
    order
}

/// All vectors of GF(p)^n, decoded once.
#[derive(Clone, Debug)]
pub struct VectorTable {
    p: FieldPrime,
    n: usize,
    size: u32,
    digits: Vec<u8>,
}

impl VectorTable {
    /// Refuses spaces with more than 2^24 vectors.
    pub fn new(n: usize, p: FieldPrime) -> Result<Self> {
        let size = p.pow(n as u32);
        if n == 0 || size > 1 << 24 {
            return Err(Error::InvalidParameter(format!(
                "vector table for GF({p})^{n} is out of range"
            )));
        }
        let size = size as u32;
        let mut digits = vec![0u8; size as usize * n];
        for code in 0..size {
            let mut c = code;
            for i in (0..n).rev() {
                digits[code as usize * n + i] = (c % p.get()) as u8;
                c /= p.get();
            }
        }
        Ok(VectorTable { p, n, size, digits })
    }

    #[inline]
    pub fn p(&self) -> FieldPrime {
        self.p
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vectors, `p^n`.
    #[inline]
    pub fn size(&self) -> u32 {
        self.size
    }

    #[inline]
    pub fn digits(&self, code: u32) -> &[u8] {
        let s = code as usize * self.n;
        &self.digits[s..s + self.n]
    }

    pub fn encode(&self, digits: &[u8]) -> u32 {
        digits.iter().fold(0u32, |acc, &d| acc * self.p.get() + d as u32)
    }

    /// Code of `a + t * b`.
    #[inline]
    pub fn add_scaled(&self, a: u32, t: u32, b: u32) -> u32 {
        let p = self.p.get();
        let (da, db) = (self.digits(a), self.digits(b));
        let mut code = 0u32;
        for i in 0..self.n {
            code = code * p + (da[i] as u32 + t * db[i] as u32) % p;
        }
        code
    }
}

/// Incremental span bookkeeping for row-by-row construction.
///
/// `level[c]` is the least `k` such that vector `c` lies in the span of the
/// first `k` chosen rows, or `UNSET`.
#[derive(Clone, Debug)]
pub(crate) struct SpanTracker {
    level: Vec<u8>,
    added: Vec<Vec<u32>>,
}

impl SpanTracker {
    pub(crate) const UNSET: u8 = u8::MAX;

    pub(crate) fn new(table: &VectorTable) -> Self {
        let mut level = vec![Self::UNSET; table.size() as usize];
        level[0] = 0;
        SpanTracker {
            level,
            added: vec![Vec::new(); table.n()],
        }
    }

    /// Is `code` in the span of the first `depth` rows?
    #[inline]
    pub(crate) fn in_span(&self, code: u32, depth: usize) -> bool {
        (self.level[code as usize] as usize) <= depth
    }

    /// Records `row` as row number `depth`, extending the span.
    pub(crate) fn push(&mut self, table: &VectorTable, depth: usize, row: u32) {
        let mut added = std::mem::take(&mut self.added[depth]);
        added.clear();
        let p = table.p().get();
        let old_len = 1 + self.added[..depth].iter().map(Vec::len).sum::<usize>();
        added.reserve(old_len * (p as usize - 1));
        let push_from = |s: u32, added: &mut Vec<u32>| {
            for t in 1..p {
                added.push(table.add_scaled(s, t, row));
            }
        };
        push_from(0, &mut added);
        for prev in &self.added[..depth] {
            for &s in prev {
                push_from(s, &mut added);
            }
        }
        for &c in &added {
            self.level[c as usize] = depth as u8 + 1;
        }
        self.added[depth] = added;
    }

    /// Vectors added by each of the first `depth` rows, in generation order.
    pub(crate) fn added_lists(&self, depth: usize) -> &[Vec<u32>] {
        &self.added[..depth]
    }

    /// Forgets row number `depth`.
    pub(crate) fn pop(&mut self, depth: usize) {
        for &c in &self.added[depth] {
            self.level[c as usize] = Self::UNSET;
        }
        self.added[depth].clear();
    }
}

/// Does this worker own the nonzero first row `code`?
#[inline]
pub(crate) fn owns_first_row(code: u32, worker: usize, workers: usize) -> bool {
    (code as usize - 1) % workers == worker - 1
}

pub(crate) fn check_partition(worker: usize, workers: usize) -> Result<()> {
    if workers == 0 || worker == 0 || worker > workers {
        return Err(Error::InvalidParameter(format!(
            "worker index {worker} outside 1..={workers}"
        )));
    }
    Ok(())
}

/// The share of GL(n, p) owned by `worker` (1-based) out of `workers`.
pub fn gl_enumerate(n: usize, p: FieldPrime, worker: usize, workers: usize) -> Result<GlEnumerator> {
    check_partition(worker, workers)?;
    let table = VectorTable::new(n, p)?;
    let tracker = SpanTracker::new(&table);
    Ok(GlEnumerator {
        rows: Vec::with_capacity(n),
        table,
        tracker,
        worker,
        workers,
        started: false,
    })
}

/// Iterator over the rows-codes of a GL(n, p) partition.
#[derive(Clone, Debug)]
pub struct GlEnumerator {
    table: VectorTable,
    tracker: SpanTracker,
    rows: Vec<u32>,
    worker: usize,
    workers: usize,
    started: bool,
}

impl GlEnumerator {
    pub fn table(&self) -> &VectorTable {
        &self.table
    }

    fn admissible(&self, depth: usize, code: u32) -> bool {
        if depth == 0 {
            code != 0 && owns_first_row(code, self.worker, self.workers)
        } else {
            !self.tracker.in_span(code, depth)
        }
    }

    fn first_from(&self, depth: usize, start: u32) -> Option<u32> {
        (start..self.table.size()).find(|&c| self.admissible(depth, c))
    }

    /// Fills rows from `self.rows.len()` down to `n`, backtracking as needed.
    fn descend(&mut self) -> bool {
        let n = self.table.n();
        while self.rows.len() < n {
            let depth = self.rows.len();
            match self.first_from(depth, 0) {
                Some(c) => self.set_row(depth, c),
                None => {
                    if !self.advance() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn set_row(&mut self, depth: usize, code: u32) {
        self.rows.push(code);
        if depth + 1 < self.table.n() {
            self.tracker.push(&self.table, depth, code);
        }
    }

    /// Moves the deepest row to its next admissible value, popping levels
    /// that are exhausted. Returns false when the enumeration is over.
    fn advance(&mut self) -> bool {
        let n = self.table.n();
        while let Some(code) = self.rows.pop() {
            let depth = self.rows.len();
            if depth + 1 < n {
                self.tracker.pop(depth);
            }
            if let Some(c) = self.first_from(depth, code + 1) {
                self.set_row(depth, c);
                return true;
            }
        }
        false
    }

    /// Next element as row codes into [`Self::table`].
    pub fn next_codes(&mut self) -> Option<&[u32]> {
        let ok = if !self.started {
            self.started = true;
            self.descend()
        } else {
            self.advance() && self.descend()
        };
        ok.then_some(&self.rows[..])
    }
}

impl Iterator for GlEnumerator {
    type Item = FpMatrix;

    fn next(&mut self) -> Option<FpMatrix> {
        let n = self.table.n();
        let p = self.table.p();
        let rows: Vec<u32> = self.next_codes()?.to_vec();
        let mut m = FpMatrix::zeros(p, n, n);
        for (r, &code) in rows.iter().enumerate() {
            for (c, &d) in self.table.digits(code).iter().enumerate() {
                m.set(r, c, d as u32);
            }
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn gf(p: u32) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    /// Brute-force count: every n×n matrix, kept when its rank is n.
    fn brute_force_gl(n: usize, p: FieldPrime) -> BTreeSet<FpMatrix> {
        let q = p.get() as u64;
        let total = q.pow((n * n) as u32);
        (0..total)
            .map(|mut k| {
                let mut m = FpMatrix::zeros(p, n, n);
                for i in 0..n * n {
                    m.set(i / n, i % n, (k % q) as u32);
                    k /= q;
                }
                m
            })
            .filter(|m| m.is_invertible())
            .collect()
    }

    #[test]
    fn orders() {
        assert_eq!(gl_order(1, gf(3)), 2);
        assert_eq!(gl_order(2, gf(3)), 48);
        assert_eq!(gl_order(4, gf(3)), 80 * 78 * 72 * 54);
        assert_eq!(gl_order(4, gf(3)), 24_261_120);
    }

    #[test]
    fn gl1_gf3() {
        let all: Vec<FpMatrix> = gl_enumerate(1, gf(3), 1, 1).unwrap().collect();
        assert_eq!(
            all,
            vec![FpMatrix::diagonal(gf(3), &[1]), FpMatrix::diagonal(gf(3), &[2])]
        );
    }

    #[test]
    fn matches_brute_force() {
        for (n, p) in [(2, 3), (2, 5), (3, 3)] {
            let p = gf(p);
            let expected = brute_force_gl(n, p);
            let got: Vec<FpMatrix> = gl_enumerate(n, p, 1, 1).unwrap().collect();
            assert_eq!(got.len(), expected.len());
            assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), expected);
        }
        assert_eq!(brute_force_gl(2, gf(3)).len(), 48);
    }

    #[test]
    fn partitions_are_disjoint_and_cover() {
        for (n, p) in [(2, 3), (3, 3), (2, 7)] {
            let p = gf(p);
            let order = gl_order(n, p) as usize;
            for workers in [1, 2, 8] {
                let mut union = BTreeSet::new();
                let mut total = 0;
                for w in 1..=workers {
                    for m in gl_enumerate(n, p, w, workers).unwrap() {
                        total += 1;
                        union.insert(m);
                    }
                }
                assert_eq!(total, order);
                assert_eq!(union.len(), order);
            }
        }
    }

    #[test]
    fn deterministic_order() {
        let a: Vec<FpMatrix> = gl_enumerate(3, gf(3), 2, 8).unwrap().collect();
        let b: Vec<FpMatrix> = gl_enumerate(3, gf(3), 2, 8).unwrap().collect();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bad_partition() {
        assert!(gl_enumerate(2, gf(3), 0, 1).is_err());
        assert!(gl_enumerate(2, gf(3), 3, 2).is_err());
    }
}
