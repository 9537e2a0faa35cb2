//! Collection arithmetic for class-two p-groups with an elementary abelian
//! central tail.
//!
//! A presentation has generators `g_1..g_r` with heights `e_i`, a central
//! subspace `W ≅ GF(p)^d`, power relations `g_i^{p^{e_i}} = w_i ∈ W` and
//! commutator relations `[g_i, g_j] = w_ij ∈ W` for `i < j`. Every element has
//! the unique normal form `g_1^{a_1} ⋯ g_r^{a_r} · c` with `0 ≤ a_i < p^{e_i}`
//! and `c ∈ W`, and the group order is `p^(Σ e_i + d)`.
//!
//! Commutators are `[g, h] = g⁻¹h⁻¹gh`.

mod subgroup;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::linalg::{FpVector, Subspace};

pub use subgroup::{StandardSubgroup, SubgroupRelation};

/// Largest supported `p^{e_i}`.
const MAX_GENERATOR_ORDER: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    /// Height: `g^{p^e}` lies in the tail.
    pub e: u32,
    /// `g^{p^e}` as a vector of `W`.
    pub power_tail: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub exps: Vec<u64>,
    pub tail: Vec<u8>,
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&a| a == 0) && self.tail.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, " |")?;
        for c in &self.tail {
            write!(f, " {c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    p: FieldPrime,
    names: Vec<String>,
    heights: Vec<u32>,
    /// `p^{e_i}`.
    moduli: Vec<u64>,
    power_tails: Vec<Vec<u8>>,
    w_dim: usize,
    /// `w_ij` at `i * r + j`, with `w_ji = -w_ij` and `w_ii = 0`.
    comm: Vec<Vec<u8>>,
}

/// One entry of the commutator table, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommEntry {
    pub i: usize,
    pub j: usize,
    pub tail: Vec<u32>,
}

/// Serialized presentation data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationData {
    pub p: u32,
    pub generators: Vec<Generator>,
    pub w_dim: usize,
    /// Entries with `i < j`; absent pairs commute.
    pub comm_table: Vec<CommEntry>,
}

impl PcPresentation {
    /// `comm` lists `(i, j, w_ij)` with `i < j`, 0-based; missing pairs commute.
    pub fn new(
        p: FieldPrime,
        generators: Vec<(String, u32, FpVector)>,
        w_dim: usize,
        comm: &[(usize, usize, FpVector)],
    ) -> Result<Self> {
        let r = generators.len();
        let mut names = Vec::with_capacity(r);
        let mut heights = Vec::with_capacity(r);
        let mut moduli = Vec::with_capacity(r);
        let mut power_tails = Vec::with_capacity(r);
        for (name, e, tail) in generators {
            check_vector(p, w_dim, &tail)?;
            let m = p.pow(e);
            if e == 0 || m > MAX_GENERATOR_ORDER {
                return Err(Error::InvalidParameter(format!("height {e} of {name} out of range")));
            }
            names.push(name);
            heights.push(e);
            moduli.push(m);
            power_tails.push(tail.entries().to_vec());
        }
        let mut table = vec![vec![0u8; w_dim]; r * r];
        for (i, j, w) in comm {
            check_vector(p, w_dim, w)?;
            if i >= j || *j >= r {
                return Err(Error::InvalidParameter(format!(
                    "commutator index ({i}, {j}) for {r} generators"
                )));
            }
            table[i * r + j] = w.entries().to_vec();
            table[j * r + i] = w.neg().entries().to_vec();
        }
        Ok(PcPresentation {
            p,
            names,
            heights,
            moduli,
            power_tails,
            w_dim,
            comm: table,
        })
    }

    pub fn from_data(data: &PresentationData) -> Result<Self> {
        let p = FieldPrime::new(data.p)?;
        let vec = |v: &[u32]| -> Result<FpVector> {
            if v.len() != data.w_dim {
                return Err(Error::Malformed(format!(
                    "tail of length {} in W of dimension {}",
                    v.len(),
                    data.w_dim
                )));
            }
            Ok(FpVector::new(p, &v.iter().map(|&a| a as i64).collect::<Vec<_>>()))
        };
        let gens = data
            .generators
            .iter()
            .map(|g| Ok((g.name.clone(), g.e, vec(&g.power_tail)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut comm = Vec::with_capacity(data.comm_table.len());
        for c in &data.comm_table {
            if c.i == 0 || c.j == 0 {
                return Err(Error::Malformed("commutator indices are 1-based".into()));
            }
            comm.push((c.i - 1, c.j - 1, vec(&c.tail)?));
        }
        PcPresentation::new(p, gens, data.w_dim, &comm).map_err(|e| match e {
            Error::InvalidParameter(s) => Error::Malformed(s),
            e => e,
        })
    }

    pub fn to_data(&self) -> PresentationData {
        let r = self.rank();
        let generators = (0..r)
            .map(|i| Generator {
                name: self.names[i].clone(),
                e: self.heights[i],
                power_tail: to_u32s(&self.power_tails[i]),
            })
            .collect();
        let mut comm_table = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let w = &self.comm[i * r + j];
                if w.iter().any(|&c| c != 0) {
                    comm_table.push(CommEntry {
                        i: i + 1,
                        j: j + 1,
                        tail: to_u32s(w),
                    });
                }
            }
        }
        PresentationData {
            p: self.p.get(),
            generators,
            w_dim: self.w_dim,
            comm_table,
        }
    }

    #[inline]
    pub fn p(&self) -> FieldPrime {
        self.p
    }

    /// Number of generators.
    #[inline]
    pub fn rank(&self) -> usize {
        self.heights.len()
    }

    #[inline]
    pub fn w_dim(&self) -> usize {
        self.w_dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    /// `p^{e_i}`.
    pub fn modulus(&self, i: usize) -> u64 {
        self.moduli[i]
    }

    /// Index of the generator called `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn power_tail(&self, i: usize) -> FpVector {
        FpVector::from_residues(self.p, self.power_tails[i].clone())
    }

    /// `w_ij = [g_i, g_j]` for any `i, j`.
    pub fn comm_tail(&self, i: usize, j: usize) -> FpVector {
        FpVector::from_residues(self.p, self.comm[i * self.rank() + j].clone())
    }

    /// Span of the commutator tails.
    pub fn commutator_span(&self) -> Subspace {
        let r = self.rank();
        let vs = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j)));
        Subspace::span(self.p, self.w_dim, vs.map(|(i, j)| self.comm_tail(i, j)))
    }

    /// Span of the power tails.
    pub fn power_span(&self) -> Subspace {
        Subspace::span(self.p, self.w_dim, (0..self.rank()).map(|i| self.power_tail(i)))
    }

    /// `log_p |G|`.
    pub fn order_exponent(&self) -> u32 {
        self.heights.iter().sum::<u32>() + self.w_dim as u32
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            exps: vec![0; self.rank()],
            tail: vec![0; self.w_dim],
        }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut g = self.identity();
        g.exps[i] = 1;
        g
    }

    /// The central element `(0, c)`.
    pub fn tail_element(&self, c: &FpVector) -> GroupElement {
        assert_eq!(c.len(), self.w_dim, "tail length");
        GroupElement {
            exps: vec![0; self.rank()],
            tail: c.entries().to_vec(),
        }
    }

    /// Validates and builds an element in normal form.
    pub fn element(&self, exps: Vec<u64>, tail: &[i64]) -> Result<GroupElement> {
        if exps.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: exps.len(),
            });
        }
        if tail.len() != self.w_dim {
            return Err(Error::DimensionMismatch {
                expected: self.w_dim,
                found: tail.len(),
            });
        }
        if let Some(i) = (0..self.rank()).find(|&i| exps[i] >= self.moduli[i]) {
            return Err(Error::InvalidParameter(format!(
                "exponent {} of {} is not below {}",
                exps[i], self.names[i], self.moduli[i]
            )));
        }
        Ok(GroupElement {
            exps,
            tail: tail.iter().map(|&c| self.p.reduce(c) as u8).collect(),
        })
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.exps.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: g.exps.len(),
            });
        }
        if g.tail.len() != self.w_dim {
            return Err(Error::DimensionMismatch {
                expected: self.w_dim,
                found: g.tail.len(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    /// Product of two elements already known to belong to the group.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let r = self.rank();
        let q = self.p.get();
        let mut tail: Vec<u32> = g.tail.iter().zip(&h.tail).map(|(&a, &b)| a as u32 + b as u32).collect();
        let mut exps = Vec::with_capacity(r);
        for i in 0..r {
            let mut s = g.exps[i] + h.exps[i];
            if s >= self.moduli[i] {
                s -= self.moduli[i];
                add_scaled(&mut tail, 1, &self.power_tails[i]);
            }
            exps.push(s);
        }
        // Moving h's g_i^{b_i} left past g's g_j^{a_j} (j > i) costs [g_j, g_i]^{a_j b_i}.
        for i in 0..r {
            let b = (h.exps[i] % q as u64) as u32;
            if b == 0 {
                continue;
            }
            for j in i + 1..r {
                let a = (g.exps[j] % q as u64) as u32;
                if a != 0 {
                    add_scaled(&mut tail, a * b % q, &self.comm[j * r + i]);
                }
            }
        }
        GroupElement {
            exps,
            tail: tail.into_iter().map(|c| (c % q) as u8).collect(),
        }
    }

    pub fn power(&self, g: &GroupElement, k: u64) -> GroupElement {
        let mut acc = self.identity();
        let mut base = g.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let exps: Vec<u64> = g
            .exps
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| if a == 0 { 0 } else { m - a })
            .collect();
        let h = GroupElement {
            exps,
            tail: vec![0; self.w_dim],
        };
        // g·h = (0, t) with t central, so g⁻¹ = h·(0, -t).
        let t = self.mul(g, &h).tail;
        let q = self.p.get() as u8;
        GroupElement {
            exps: h.exps,
            tail: t.iter().map(|&c| if c == 0 { 0 } else { q - c }).collect(),
        }
    }

    /// `[g, h] = (0, Σ_{i<j} (a_i b_j - a_j b_i) w_ij)`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let r = self.rank();
        let q = self.p.get();
        let mut tail = vec![0u32; self.w_dim];
        for i in 0..r {
            let ai = (g.exps[i] % q as u64) as u32;
            let bi = (h.exps[i] % q as u64) as u32;
            for j in i + 1..r {
                let aj = (g.exps[j] % q as u64) as u32;
                let bj = (h.exps[j] % q as u64) as u32;
                let c = (ai * bj + (q - aj) * bi) % q;
                if c != 0 {
                    add_scaled(&mut tail, c, &self.comm[i * r + j]);
                }
            }
        }
        GroupElement {
            exps: vec![0; r],
            tail: tail.into_iter().map(|c| (c % q) as u8).collect(),
        }
    }

    /// The least `p^k` with `g^{p^k} = 1`.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        let q = self.p.get() as u64;
        let mut order = 1;
        let mut h = g.clone();
        while !h.is_identity() {
            h = self.power(&h, q);
            order *= q;
        }
        order
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        GroupElement {
            exps: self.moduli.iter().map(|&m| rng.gen_range(0..m)).collect(),
            tail: (0..self.w_dim).map(|_| rng.gen_range(0..self.p.get()) as u8).collect(),
        }
    }

    /// Subgroup `G'`: tails in the commutator span.
    pub fn derived_subgroup(&self) -> StandardSubgroup {
        StandardSubgroup::new(self, self.heights.clone(), Vec::new(), self.commutator_span())
    }

    /// `Z(G)`: exponent vectors in the radical of the commutator form.
    pub fn center(&self) -> StandardSubgroup {
        let r = self.rank();
        let mut functionals = Vec::with_capacity(r * self.w_dim);
        for j in 0..r {
            for t in 0..self.w_dim {
                let row: Vec<u8> = (0..r).map(|i| self.comm[i * r + j][t]).collect();
                functionals.push(FpVector::from_residues(self.p, row));
            }
        }
        StandardSubgroup::new(self, vec![0; r], functionals, Subspace::full(self.p, self.w_dim))
    }

    /// `Gᵖ`, the image of the p-th power map.
    pub fn agemo(&self) -> StandardSubgroup {
        StandardSubgroup::new(self, vec![1; self.rank()], Vec::new(), self.power_span())
    }

    /// `Φ(G) = Gᵖ G'`.
    pub fn frattini(&self) -> StandardSubgroup {
        let tail = self.power_span().sum(&self.commutator_span());
        StandardSubgroup::new(self, vec![1; self.rank()], Vec::new(), tail)
    }

    /// `Ω_k(G)`, the kernel of the `p^k`-th power map, for `k ≥ 1`.
    pub fn omega(&self, k: u32) -> StandardSubgroup {
        assert!(k >= 1, "omega needs k >= 1");
        let r = self.rank();
        let levels: Vec<u32> = self.heights.iter().map(|&e| e.saturating_sub(k)).collect();
        let functionals = (0..self.w_dim)
            .map(|t| {
                let row: Vec<u8> = (0..r)
                    .map(|i| {
                        if self.heights[i] >= k {
                            self.power_tails[i][t]
                        } else {
                            0
                        }
                    })
                    .collect();
                FpVector::from_residues(self.p, row)
            })
            .collect();
        StandardSubgroup::new(self, levels, functionals, Subspace::full(self.p, self.w_dim))
    }

    /// `Gᵖ ≤ G' = Z(G)`.
    pub fn is_special(&self) -> bool {
        let derived = self.derived_subgroup();
        self.agemo().is_subgroup_of(&derived) && derived == self.center()
    }

    /// `Z(G) ≤ Φ(G)`, which rules out abelian direct factors.
    pub fn is_purely_nonabelian_certificate(&self) -> bool {
        self.center().is_subgroup_of(&self.frattini())
    }
}

fn check_vector(p: FieldPrime, len: usize, v: &FpVector) -> Result<()> {
    if v.p() != p {
        return Err(Error::FieldMismatch(p.get(), v.p().get()));
    }
    if v.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: v.len(),
        });
    }
    Ok(())
}

#[inline]
fn add_scaled(acc: &mut [u32], c: u32, w: &[u8]) {
    for (a, &x) in acc.iter_mut().zip(w) {
        *a += c * x as u32;
    }
}

fn to_u32s(v: &[u8]) -> Vec<u32> {
    v.iter().map(|&c| c as u32).collect()
}
