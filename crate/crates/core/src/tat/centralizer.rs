//! Exhaustive search for the α ∈ GL(n, p) with `(v α) f ≡ (v f) α̂` modulo a
//! subspace M of Λ²V, for all v, and with prescribed subspaces of Λ²V left
//! invariant by α̂.
//!
//! α is built one row at a time over a partition of GL(n, p). Two prunings
//! are applied as rows are fixed:
//!
//! * The switch condition on the basis vector `e_i` involves row `i` of α and
//!   the rows named by the support of `e_i f`; it is tested as soon as those
//!   rows are known.
//! * When α̂ must fix M, the minimal rank over the coset `v f + M` (viewing
//!   Λ²V as alternating forms) is an invariant: it must agree for `v` and
//!   `v α`. Ranks are tabulated once for every v, so the test is a lookup.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::{induced_map, pair_index, pairs, projective_points, wedge, wedge_dim, wedge_into};
use crate::field::FieldPrime;
use crate::gl::{check_partition, gl_order, owns_first_row, SpanTracker, VectorTable};
use crate::linalg::{solve_linear, FpMatrix, FpVector, Subspace};

use super::CentralizerReport;

/// Default upper bound on `|GL(n, p)|` for a single search.
pub const DEFAULT_BUDGET: u128 = 10_000_000_000;

/// Largest coset size for which rank classes are tabulated.
const CLASS_COSET_LIMIT: usize = 4096;

/// Largest squared number of projective points for which the first two
/// basis vectors are chosen jointly.
const PAIR_LIMIT: usize = 250_000;

/// One instance of the centralizer search.
#[derive(Clone, Debug)]
pub struct CentralizerProblem {
    pub p: FieldPrime,
    pub n: usize,
    /// `n × C(n,2)`, row `i` is `e_i f`.
    pub f: FpMatrix,
    /// The switch condition is required modulo this subspace.
    pub modulus: Subspace,
    /// Subspaces `S` with `S α̂ = S` required.
    pub invariant: Vec<Subspace>,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub workers: usize,
    /// Maximum number of elements listed in the report.
    pub cap: usize,
    pub budget: u128,
    /// Stop once this many elements have been found.
    pub stop_after: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: 1,
            cap: 16,
            budget: DEFAULT_BUDGET,
            stop_after: None,
        }
    }
}

impl CentralizerProblem {
    pub fn new(f: FpMatrix, modulus: Subspace, invariant: Vec<Subspace>) -> Result<Self> {
        let n = f.rows();
        let d = wedge_dim(n);
        if f.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: f.cols(),
            });
        }
        for s in invariant.iter().chain([&modulus]) {
            if s.ambient() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.ambient(),
                });
            }
        }
        Ok(CentralizerProblem {
            p: f.p(),
            n,
            f,
            modulus,
            invariant,
        })
    }

    /// Direct test of one matrix, independent of the search machinery.
    pub fn admits(&self, alpha: &FpMatrix) -> Result<bool> {
        if !alpha.is_invertible() {
            return Ok(false);
        }
        let hat = induced_map(alpha)?;
        for s in &self.invariant {
            if s.image(&hat) != *s {
                return Ok(false);
            }
        }
        let lhs = alpha.mul(&self.f)?;
        let rhs = self.f.mul(&hat)?;
        Ok((0..self.n).all(|i| {
            let diff = lhs.row_vector(i).sub(&rhs.row_vector(i));
            self.modulus.contains(&diff)
        }))
    }

    pub fn run(&self, opts: &SearchOptions) -> Result<CentralizerReport> {
        self.run_with(opts, true)
    }

    pub(crate) fn run_with(&self, opts: &SearchOptions, forcing: bool) -> Result<CentralizerReport> {
        let start = Instant::now();
        let size = gl_order(self.n, self.p);
        if size > opts.budget {
            return Err(Error::SearchSpaceTooLarge {
                n: self.n,
                p: self.p.get(),
                size,
                budget: opts.budget,
            });
        }
        let workers = opts.workers.max(1);
        check_partition(1, workers)?;
        let beta = if forcing { self.forcing_basis()? } else { None };
        let work = match &beta {
            Some(b) => self.transport(b)?,
            None => self.clone(),
        };
        let search = Search::prepare(&work, beta.is_some())?;
        let found = AtomicU64::new(0);
        let run = |w: usize| search.run_worker(w, workers, opts, &found);
        let parts: Vec<WorkerResult> = if workers == 1 {
            vec![run(1)]
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            pool.install(|| (1..=workers).into_par_iter().map(run).collect())
        };
        let mut count = 0;
        let mut complete = true;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for part in parts {
            count += part.count;
            complete &= part.complete;
            rows.extend(part.elements);
        }
        let mut elements: Vec<FpMatrix> = rows.iter().map(|r| search.to_matrix(r)).collect();
        if let Some(b) = &beta {
            let inv = b.inverse()?;
            elements = elements
                .iter()
                .map(|a| inv.mul(a).and_then(|x| x.mul(b)))
                .collect::<Result<_>>()?;
        }
        elements.sort();
        elements.truncate(opts.cap);
        Ok(CentralizerReport {
            count,
            complete,
            elements,
            search_space: size,
            elapsed: start.elapsed(),
        })
    }

    /// The same problem in the basis given by the rows of `beta`: solutions
    /// correspond through `α ↦ β α β⁻¹`.
    fn transport(&self, beta: &FpMatrix) -> Result<Self> {
        let inv_hat = induced_map(&beta.inverse()?)?;
        let f = beta.mul(&self.f)?.mul(&inv_hat)?;
        let modulus = self.modulus.image(&inv_hat);
        let invariant = self.invariant.iter().map(|s| s.image(&inv_hat)).collect();
        CentralizerProblem::new(f, modulus, invariant)
    }

    fn modulus_fixed(&self) -> bool {
        self.modulus.dim() == 0 || self.invariant.contains(&self.modulus)
    }

    fn reduced_rows(&self, t: &Subspace) -> FpMatrix {
        let rows: Vec<FpVector> = (0..self.n).map(|i| t.reduce(&self.f.row_vector(i))).collect();
        FpMatrix::from_vectors(self.p, wedge_dim(self.n), &rows)
    }

    /// Basis of V, as rows, in which many rows of α are determined by the
    /// earlier ones. `None` when `v ↦ v f mod M` is not injective or M is
    /// not required to be invariant.
    fn forcing_basis(&self) -> Result<Option<FpMatrix>> {
        let (n, p) = (self.n, self.p);
        if n < 3 || !self.modulus_fixed() || self.reduced_rows(&self.modulus).rank() < n {
            return Ok(None);
        }
        let coset = class_coset(self);
        let points: Vec<FpVector> = projective_points(p, n).collect();
        let classes: Vec<usize> = points
            .iter()
            .map(|v| coset_class(n, &self.modulus.reduce(&v.mul_matrix(&self.f)), &coset))
            .collect();
        let mut freq = vec![0usize; n + 1];
        classes.iter().for_each(|&c| freq[c] += 1);
        let weight = |i: usize| freq[classes[i]];

        let mut chosen: Vec<FpVector> = Vec::new();
        while chosen.len() < n {
            let span = Subspace::span(p, n, chosen.clone());
            let mut best: Option<(Score, Vec<FpVector>)> = None;
            let mut consider = |trial: Vec<FpVector>, rarity: usize| {
                let closed = self.closure(trial);
                let score = (closed.len(), std::cmp::Reverse(rarity));
                if best.as_ref().is_none_or(|(s, _)| score > *s) {
                    best = Some((score, closed));
                }
            };
            if chosen.is_empty() && points.len() * points.len() <= PAIR_LIMIT {
                for a in 0..points.len() {
                    for b in a + 1..points.len() {
                        consider(vec![points[a].clone(), points[b].clone()], weight(a) + weight(b));
                    }
                }
            } else {
                for (i, w) in points.iter().enumerate() {
                    if span.contains(w) {
                        continue;
                    }
                    let mut trial = chosen.clone();
                    trial.push(w.clone());
                    consider(trial, weight(i));
                }
            }
            chosen = best.expect("a vector outside a proper subspace").1;
        }
        Ok(Some(FpMatrix::from_vectors(p, n, &chosen)))
    }

    /// Extends `chosen` by vectors `v` with `v f ∈ Λ²⟨chosen⟩ + M` while
    /// such vectors lie outside the span.
    fn closure(&self, mut chosen: Vec<FpVector>) -> Vec<FpVector> {
        let (n, p, d) = (self.n, self.p, wedge_dim(self.n));
        while chosen.len() < n {
            let mut gens: Vec<FpVector> = self.modulus.basis().to_vec();
            for j in 0..chosen.len() {
                for k in j + 1..chosen.len() {
                    gens.push(wedge(&chosen[j], &chosen[k]).expect("same length"));
                }
            }
            let t = Subspace::span(p, d, gens);
            let span = Subspace::span(p, n, chosen.clone());
            match self
                .reduced_rows(&t)
                .left_nullspace()
                .into_iter()
                .find(|v| !span.contains(v))
            {
                Some(v) => chosen.push(v),
                None => break,
            }
        }
        chosen
    }
}

/// `λ ∈ Λ²⟨e_0, .., e_{r-1}⟩` with `e_r f ≡ λ (mod M)`, if there is one.
fn early_part(prob: &CentralizerProblem, r: usize) -> Result<Option<FpVector>> {
    let (p, n, d) = (prob.p, prob.n, wedge_dim(prob.n));
    let early: Vec<usize> = (0..r).flat_map(|k| (0..k).map(move |j| pair_index(n, j, k))).collect();
    let mut gens: Vec<FpVector> = early.iter().map(|&c| FpVector::unit(p, d, c)).collect();
    gens.extend(prob.modulus.basis().iter().cloned());
    let a = FpMatrix::from_vectors(p, d, &gens).transpose();
    Ok(solve_linear(&a, &prob.f.row_vector(r))?.map(|sol| {
        let mut lambda = FpVector::zeros(p, d);
        for (t, &c) in early.iter().enumerate() {
            lambda.set(c, sol.particular.get(t));
        }
        lambda
    }))
}

/// Forced closure length, then rarity of the rank class.
type Score = (usize, std::cmp::Reverse<usize>);

/// Elements of M when the minimal-rank class is usable, otherwise empty.
fn class_coset(prob: &CentralizerProblem) -> Vec<FpVector> {
    let small = (prob.p.get() as usize)
        .checked_pow(prob.modulus.dim() as u32)
        .is_some_and(|s| s <= CLASS_COSET_LIMIT);
    if prob.modulus_fixed() && small {
        prob.modulus.elements()
    } else {
        Vec::new()
    }
}

fn coset_class(n: usize, w: &FpVector, coset: &[FpVector]) -> usize {
    coset.iter().map(|m| alternating_rank(n, &w.add(m))).min().unwrap_or(0)
}

struct WorkerResult {
    count: u64,
    complete: bool,
    elements: Vec<Vec<u32>>,
}

/// Immutable tables shared by all workers.
struct Search {
    table: VectorTable,
    n: usize,
    d: usize,
    q: u32,
    /// `proj(v f)` for every code v, flattened.
    fimg: Vec<u8>,
    /// Rank class of every code, or all zero when disabled.
    class: Vec<u8>,
    /// For each depth r, the classes of `e_r + s` for s running over the
    /// span of `e_0..e_{r-1}` in `SpanTracker` order.
    class_targets: Vec<Vec<u8>>,
    class_enabled: bool,
    needs_wedges: bool,
    /// `f[i][pair]`, kept as sparse `(pair, coefficient)` lists.
    f_terms: Vec<Vec<(usize, u32)>>,
    /// Conditions that become checkable at each depth.
    ready: Vec<Vec<usize>>,
    /// For depths whose row is determined by the earlier rows, the terms of
    /// `e_r f` inside `Λ²⟨e_0, .., e_{r-1}⟩` modulo M.
    forced: Vec<Option<Vec<(usize, u32)>>>,
    /// Code of v from `proj(v f)`, filled when some row is forced.
    lookup: HashMap<Vec<u8>, u32>,
    modulus: Subspace,
    invariant: Vec<Subspace>,
}

impl Search {
    fn prepare(prob: &CentralizerProblem, forcing: bool) -> Result<Self> {
        let n = prob.n;
        let d = wedge_dim(n);
        let p = prob.p;
        let table = VectorTable::new(n, p)?;
        let size = table.size() as usize;

        let mut fimg = Vec::with_capacity(size * d);
        for code in 0..table.size() {
            let v = FpVector::from_residues(p, table.digits(code).to_vec());
            let img = prob.modulus.reduce(&v.mul_matrix(&prob.f));
            fimg.extend_from_slice(img.entries());
        }

        let invariant: Vec<Subspace> = prob
            .invariant
            .iter()
            .filter(|s| s.dim() > 0 && !s.is_full())
            .cloned()
            .collect();
        let coset = class_coset(prob);
        let mut class_enabled = !coset.is_empty();
        let class: Vec<u8> = (0..size)
            .map(|code| {
                if !class_enabled {
                    return 0;
                }
                let w = FpVector::from_residues(p, fimg[code * d..(code + 1) * d].to_vec());
                coset_class(n, &w, &coset) as u8
            })
            .collect();

        // A constant class carries no information.
        if class.iter().all(|&c| c == class[0]) {
            class_enabled = false;
        }

        let unit = |i: usize| p.pow((n - 1 - i) as u32) as u32;
        let mut tracker = SpanTracker::new(&table);
        let mut class_targets = Vec::with_capacity(n);
        let mut span_codes = vec![0u32];
        for r in 0..n {
            class_targets.push(
                span_codes
                    .iter()
                    .map(|&s| class[table.add_scaled(s, 1, unit(r)) as usize])
                    .collect(),
            );
            if r + 1 < n {
                tracker.push(&table, r, unit(r));
                span_codes = tracker_order(&tracker, r + 1);
            }
        }

        let sparse = |v: &FpVector| -> Vec<(usize, u32)> {
            (0..d)
                .filter_map(|c| (v.get(c) != 0).then_some((c, v.get(c))))
                .collect()
        };
        let mut f_terms: Vec<Vec<(usize, u32)>> = (0..n).map(|i| sparse(&prob.f.row_vector(i))).collect();
        let mut forced: Vec<Option<Vec<(usize, u32)>>> = vec![None; n];
        if forcing {
            for (r, slot) in forced.iter_mut().enumerate().skip(2) {
                if let Some(lambda) = early_part(prob, r)? {
                    f_terms[r] = sparse(&lambda);
                    *slot = Some(f_terms[r].clone());
                }
            }
        }
        let lookup: HashMap<Vec<u8>, u32> = if forced.iter().any(Option::is_some) {
            (0..table.size())
                .map(|c| (fimg[c as usize * d..(c as usize + 1) * d].to_vec(), c))
                .collect()
        } else {
            HashMap::new()
        };
        let needs_wedges = f_terms.iter().any(|t| !t.is_empty());
        let all_pairs = pairs(n);
        let mut ready = vec![Vec::new(); n];
        for (i, terms) in f_terms.iter().enumerate() {
            let depth = terms.iter().map(|&(c, _)| all_pairs[c].1).chain([i]).max().unwrap_or(i);
            ready[depth].push(i);
        }

        Ok(Search {
            table,
            n,
            d,
            q: p.get(),
            fimg,
            class,
            class_targets,
            class_enabled,
            needs_wedges,
            f_terms,
            ready,
            forced,
            lookup,
            modulus: prob.modulus.clone(),
            invariant,
        })
    }

    fn to_matrix(&self, rows: &[u32]) -> FpMatrix {
        let p = self.table.p();
        let mut m = FpMatrix::zeros(p, self.n, self.n);
        for (r, &code) in rows.iter().enumerate() {
            for (c, &a) in self.table.digits(code).iter().enumerate() {
                m.set(r, c, a as u32);
            }
        }
        m
    }

    fn run_worker(&self, worker: usize, workers: usize, opts: &SearchOptions, found: &AtomicU64) -> WorkerResult {
        let mut state = WorkerState {
            rows: vec![0; self.n],
            wedges: vec![0; self.d * self.d],
            tracker: SpanTracker::new(&self.table),
            span_codes: vec![vec![0]; self.n],
            count: 0,
            elements: Vec::new(),
            stopped: false,
            buf: Vec::with_capacity(self.d),
            acc: vec![0; self.d],
        };
        for code in 1..self.table.size() {
            if !owns_first_row(code, worker, workers) {
                continue;
            }
            self.visit(&mut state, 0, code, opts, found);
            if state.stopped {
                break;
            }
        }
        WorkerResult {
            count: state.count,
            complete: !state.stopped,
            elements: state.elements,
        }
    }

    /// Tries `code` as row `depth`, recursing on success.
    fn visit(&self, st: &mut WorkerState, depth: usize, code: u32, opts: &SearchOptions, found: &AtomicU64) {
        if self.class_enabled && !self.class_ok(st, depth, code) {
            return;
        }
        st.rows[depth] = code;
        if self.needs_wedges {
            self.fill_wedges(st, depth);
        }
        for &i in &self.ready[depth] {
            if !self.switch_holds(st, i) {
                return;
            }
        }
        if depth + 1 == self.n {
            if !self.invariants_hold(st) {
                return;
            }
            st.count += 1;
            if st.elements.len() < opts.cap {
                st.elements.push(st.rows.clone());
            }
            let total = found.fetch_add(1, Ordering::Relaxed) + 1;
            if opts.stop_after.is_some_and(|s| total >= s) {
                st.stopped = true;
            }
            return;
        }
        st.tracker.push(&self.table, depth, code);
        let next = tracker_order(&st.tracker, depth + 1);
        st.span_codes[depth + 1] = next;
        if let Some(terms) = &self.forced[depth + 1] {
            if let Some(c) = self.forced_row(st, terms) {
                if !st.tracker.in_span(c, depth + 1) {
                    self.visit(st, depth + 1, c, opts, found);
                }
            }
            st.tracker.pop(depth);
            return;
        }
        for c in 1..self.table.size() {
            if st.tracker.in_span(c, depth + 1) {
                continue;
            }
            self.visit(st, depth + 1, c, opts, found);
            if st.stopped {
                break;
            }
            if opts.stop_after.is_some_and(|s| found.load(Ordering::Relaxed) >= s) {
                st.stopped = true;
                break;
            }
        }
        st.tracker.pop(depth);
    }

    fn class_ok(&self, st: &WorkerState, depth: usize, code: u32) -> bool {
        let targets = &self.class_targets[depth];
        if self.class[code as usize] != targets[0] {
            return false;
        }
        let spans = &st.span_codes[depth];
        spans
            .iter()
            .zip(targets)
            .skip(1)
            .all(|(&s, &t)| self.class[self.table.add_scaled(s, 1, code) as usize] == t)
    }

    /// Stores `α_j ∧ α_depth` for `j < depth` at `wedges[pair(j, depth)]`.
    fn fill_wedges(&self, st: &mut WorkerState, depth: usize) {
        let p = self.table.p();
        let v = self.table.digits(st.rows[depth]);
        for j in 0..depth {
            let u = self.table.digits(st.rows[j]);
            st.buf.clear();
            wedge_into(p, u, v, &mut st.buf);
            let at = pair_index(self.n, j, depth) * self.d;
            st.wedges[at..at + self.d].copy_from_slice(&st.buf);
        }
    }

    /// The only row `e_r α` compatible with `(e_r α) f ≡ (e_r f) α̂`.
    fn forced_row(&self, st: &mut WorkerState, terms: &[(usize, u32)]) -> Option<u32> {
        st.acc.iter_mut().for_each(|a| *a = 0);
        self.accumulate(st, terms);
        st.buf.clear();
        st.buf.extend(st.acc.iter().map(|&a| a as u8));
        self.lookup.get(&st.buf[..]).copied()
    }

    /// Adds `Σ coeff (α_j ∧ α_k)` to the accumulator and reduces it modulo M.
    fn accumulate(&self, st: &mut WorkerState, terms: &[(usize, u32)]) {
        let d = self.d;
        let q = self.q;
        for &(pair, coeff) in terms {
            let w = &st.wedges[pair * d..(pair + 1) * d];
            for (a, &x) in st.acc.iter_mut().zip(w) {
                *a += coeff * x as u32;
            }
        }
        st.acc.iter_mut().for_each(|a| *a %= q);
        for (b, &pc) in self.modulus.basis().iter().zip(self.modulus.pivots()) {
            let c = st.acc[pc];
            if c != 0 {
                for (a, &x) in st.acc.iter_mut().zip(b.entries()) {
                    *a = (*a + (q - c) * x as u32) % q;
                }
            }
        }
    }

    /// `(e_i α) f ≡ (e_i f) α̂ (mod M)`.
    fn switch_holds(&self, st: &mut WorkerState, i: usize) -> bool {
        let d = self.d;
        let q = self.q;
        let lhs = &self.fimg[st.rows[i] as usize * d..(st.rows[i] as usize + 1) * d];
        st.acc.iter_mut().zip(lhs).for_each(|(a, &l)| *a = q * q - l as u32);
        self.accumulate(st, &self.f_terms[i]);
        st.acc.iter().all(|&a| a == 0)
    }

    fn invariants_hold(&self, st: &WorkerState) -> bool {
        if self.invariant.is_empty() {
            return true;
        }
        let hat = induced_map(&self.to_matrix(&st.rows)).expect("square");
        self.invariant
            .iter()
            .all(|s| s.basis().iter().all(|b| s.contains(&b.mul_matrix(&hat))))
    }
}

struct WorkerState {
    rows: Vec<u32>,
    /// `C(n,2) × C(n,2)`, indexed by pair then coordinate.
    wedges: Vec<u8>,
    tracker: SpanTracker,
    span_codes: Vec<Vec<u32>>,
    count: u64,
    elements: Vec<Vec<u32>>,
    stopped: bool,
    buf: Vec<u8>,
    acc: Vec<u32>,
}

/// Span of the first `depth` rows, listed as `SpanTracker` generated it.
fn tracker_order(tracker: &SpanTracker, depth: usize) -> Vec<u32> {
    let mut out = vec![0];
    for added in tracker.added_lists(depth) {
        out.extend_from_slice(added);
    }
    out
}

/// Rank of the alternating form with Λ² coordinates `w`.
fn alternating_rank(n: usize, w: &FpVector) -> usize {
    let p = w.p();
    let mut m = FpMatrix::zeros(p, n, n);
    for (k, (i, j)) in pairs(n).into_iter().enumerate() {
        let a = w.get(k);
        m.set(i, j, a);
        m.set(j, i, p.neg(a));
    }
    m.rank()
}
