use crate::field::FieldPrime;
use crate::linalg::{FpMatrix, FpVector, Subspace};

use super::{GroupElement, PcPresentation};

/// A subgroup given by congruences on the normal form.
///
/// `(a, c)` belongs when every `a_i` is divisible by `p^{levels[i]}`, the
/// vector of digits `D_i = ⌊a_i / p^{levels[i]}⌋ mod p` is killed by every
/// constraint, and `c ∈ tail`. A level equal to the height forces `a_i = 0`.
#[derive(Clone, Debug)]
pub struct StandardSubgroup {
    p: FieldPrime,
    heights: Vec<u32>,
    levels: Vec<u32>,
    /// Functionals on the digit vector, zero on inactive coordinates.
    constraints: Subspace,
    tail: Subspace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupRelation {
    Equal,
    ProperSubset,
    Superset,
    Incomparable,
}

impl StandardSubgroup {
    pub(crate) fn new(pres: &PcPresentation, levels: Vec<u32>, constraints: Vec<FpVector>, tail: Subspace) -> Self {
        let heights = pres.heights().to_vec();
        let levels: Vec<u32> = levels.iter().zip(&heights).map(|(&v, &e)| v.min(e)).collect();
        let p = pres.p();
        let r = heights.len();
        let masked = constraints.into_iter().map(|c| {
            let row: Vec<u8> = (0..r)
                .map(|i| if levels[i] < heights[i] { c.get(i) as u8 } else { 0 })
                .collect();
            FpVector::from_residues(p, row)
        });
        StandardSubgroup {
            p,
            constraints: Subspace::span(p, r, masked),
            heights,
            levels,
            tail,
        }
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn tail(&self) -> &Subspace {
        &self.tail
    }

    fn active(&self, i: usize) -> bool {
        self.levels[i] < self.heights[i]
    }

    /// `log_p` of the order.
    pub fn order_exponent(&self) -> u32 {
        let free: u32 = (0..self.heights.len()).map(|i| self.heights[i] - self.levels[i]).sum();
        free - self.constraints.dim() as u32 + self.tail.dim() as u32
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        let q = self.p.get() as u64;
        let mut digits = Vec::with_capacity(self.levels.len());
        for (i, &a) in g.exps.iter().enumerate() {
            let unit = q.pow(self.levels[i]);
            if a % unit != 0 {
                return false;
            }
            digits.push(if self.active(i) { ((a / unit) % q) as u8 } else { 0 });
        }
        let d = FpVector::from_residues(self.p, digits);
        self.constraints.basis().iter().all(|c| c.dot(&d) == 0)
            && self.tail.contains(&FpVector::from_residues(self.p, g.tail.clone()))
    }

    pub fn intersection(&self, other: &StandardSubgroup) -> StandardSubgroup {
        let r = self.levels.len();
        let levels: Vec<u32> = (0..r).map(|i| self.levels[i].max(other.levels[i])).collect();
        let heights = &self.heights;
        let mut rows = Vec::new();
        for s in [self, other] {
            for c in s.constraints.basis() {
                let row: Vec<u8> = (0..r)
                    .map(|i| {
                        if s.levels[i] == levels[i] && levels[i] < heights[i] {
                            c.get(i) as u8
                        } else {
                            0
                        }
                    })
                    .collect();
                rows.push(FpVector::from_residues(self.p, row));
            }
        }
        StandardSubgroup {
            p: self.p,
            heights: heights.clone(),
            constraints: Subspace::span(self.p, r, rows),
            levels,
            tail: self.tail.intersection(&other.tail),
        }
    }

    pub fn is_subgroup_of(&self, other: &StandardSubgroup) -> bool {
        self.intersection(other).order_exponent() == self.order_exponent()
    }

    pub fn compare(&self, other: &StandardSubgroup) -> SubgroupRelation {
        let both = self.intersection(other).order_exponent();
        let (a, b) = (self.order_exponent(), other.order_exponent());
        match (both == a, both == b) {
            (true, true) => SubgroupRelation::Equal,
            (true, false) => SubgroupRelation::ProperSubset,
            (false, true) => SubgroupRelation::Superset,
            (false, false) => SubgroupRelation::Incomparable,
        }
    }

    /// A generating set; the subgroup is abelian whenever it is central.
    pub fn generators(&self, pres: &PcPresentation) -> Vec<GroupElement> {
        let r = self.levels.len();
        let q = self.p.get() as u64;
        let mut gens = Vec::new();
        for i in 0..r {
            if self.levels[i] + 1 < self.heights[i] {
                let mut g = pres.identity();
                g.exps[i] = q.pow(self.levels[i] + 1);
                gens.push(g);
            }
        }
        let active: Vec<usize> = (0..r).filter(|&i| self.active(i)).collect();
        if !active.is_empty() {
            let cols: Vec<FpVector> = self
                .constraints
                .basis()
                .iter()
                .map(|c| FpVector::from_residues(self.p, active.iter().map(|&i| c.get(i) as u8).collect()))
                .collect();
            let system = FpMatrix::from_vectors(self.p, active.len(), &cols);
            for s in system.nullspace() {
                let mut g = pres.identity();
                for (k, &i) in active.iter().enumerate() {
                    g.exps[i] = s.get(k) as u64 * q.pow(self.levels[i]);
                }
                gens.push(g);
            }
        }
        for c in self.tail.basis() {
            gens.push(pres.tail_element(c));
        }
        gens
    }
}

impl PartialEq for StandardSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == SubgroupRelation::Equal
    }
}

impl Eq for StandardSubgroup {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldPrime;
    use std::collections::BTreeSet;

    fn small() -> PcPresentation {
        let p = FieldPrime::new(3).unwrap();
        PcPresentation::new(
            p,
            vec![
                ("x".into(), 1, FpVector::new(p, &[1, 0])),
                ("y".into(), 2, FpVector::new(p, &[0, 1])),
            ],
            2,
            &[(0, 1, FpVector::new(p, &[1, 0]))],
        )
        .unwrap()
    }

    fn all_elements(g: &PcPresentation) -> Vec<GroupElement> {
        let mut out = vec![g.identity()];
        for i in 0..g.rank() {
            let mut next = Vec::new();
            for e in &out {
                for a in 0..g.modulus(i) {
                    let mut h = e.clone();
                    h.exps[i] = a;
                    next.push(h);
                }
            }
            out = next;
        }
        let q = g.p().get() as u8;
        let mut full = Vec::new();
        for e in out {
            for code in 0..(q as usize).pow(g.w_dim() as u32) {
                let mut h = e.clone();
                let mut c = code;
                for t in (0..g.w_dim()).rev() {
                    h.tail[t] = (c % q as usize) as u8;
                    c /= q as usize;
                }
                full.push(h);
            }
        }
        full
    }

    /// Brute-force oracles on the full element list.
    #[test]
    fn matches_brute_force() {
        let g = small();
        let elems = all_elements(&g);
        assert_eq!(elems.len(), 3usize.pow(g.order_exponent()));
        let q = g.p().get() as u64;

        let centre: BTreeSet<_> = elems
            .iter()
            .filter(|a| elems.iter().all(|b| g.mul(a, b) == g.mul(b, a)))
            .cloned()
            .collect();
        let derived: BTreeSet<_> = elems
            .iter()
            .flat_map(|a| elems.iter().map(|b| g.commutator(a, b)))
            .collect();
        let powers: BTreeSet<_> = elems.iter().map(|a| g.power(a, q)).collect();
        let omega1: BTreeSet<_> = elems.iter().filter(|a| g.power(a, q).is_identity()).cloned().collect();
        let omega2: BTreeSet<_> = elems
            .iter()
            .filter(|a| g.power(a, q * q).is_identity())
            .cloned()
            .collect();

        for (name, s, expected) in [
            ("Z", g.center(), &centre),
            ("G'", g.derived_subgroup(), &derived),
            ("G^p", g.agemo(), &powers),
            ("Omega1", g.omega(1), &omega1),
            ("Omega2", g.omega(2), &omega2),
        ] {
            let got: BTreeSet<_> = elems.iter().filter(|a| s.contains(a)).cloned().collect();
            assert_eq!(&got, expected, "{name}");
            assert_eq!(3usize.pow(s.order_exponent()), got.len(), "{name} order");
        }
    }

    #[test]
    fn compare_and_intersect() {
        let g = small();
        let (d, phi, z) = (g.derived_subgroup(), g.frattini(), g.center());
        assert_eq!(d.compare(&d), SubgroupRelation::Equal);
        assert_eq!(d.compare(&phi), SubgroupRelation::ProperSubset);
        assert_eq!(phi.compare(&d), SubgroupRelation::Superset);
        let elems = all_elements(&g);
        let both = z.intersection(&g.omega(1));
        for a in &elems {
            assert_eq!(both.contains(a), z.contains(a) && g.omega(1).contains(a));
        }
    }

    #[test]
    fn generators_span() {
        let g = small();
        for s in [g.center(), g.frattini(), g.omega(1), g.omega(2)] {
            let mut seen: BTreeSet<GroupElement> = [g.identity()].into();
            let gens = s.generators(&g);
            let mut frontier: Vec<GroupElement> = seen.iter().cloned().collect();
            while let Some(a) = frontier.pop() {
                for b in &gens {
                    let c = g.mul(&a, b);
                    if seen.insert(c.clone()) {
                        frontier.push(c);
                    }
                }
            }
            assert_eq!(seen.len(), 3usize.pow(s.order_exponent()));
            assert!(seen.iter().all(|a| s.contains(a)));
        }
    }
}
