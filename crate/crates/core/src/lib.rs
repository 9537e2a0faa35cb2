//! Finite p-groups whose automorphisms are all central.
//!
//! The crate works with groups of nilpotence class two whose derived
//! subgroup is an elementary abelian p-group, for odd p. Such a group with
//! `V = G/G'` is governed by linear data over GF(p): the exterior square
//! `Λ²V`, a subspace `K ≤ Λ²V` of relations among commutators, and the
//! p-th power map `f : V → Λ²V/K`. When only the identity of GL(V) is
//! compatible with `f` and `K`, every automorphism of the group is central.
//!
//! Modules, bottom up:
//!
//! * [`field`], [`linalg`], [`gl`]: arithmetic over GF(p), dense linear
//!   algebra, and partitioned enumeration of GL(n, p).
//! * [`exterior`]: `Λ²V`, induced maps `α̂`, quotients `Λ²V/K`.
//! * [`tat`]: trivial automorphism triples and the exhaustive centralizer
//!   search.
//! * [`group`]: a collection engine for the class-two groups built here,
//!   with the characteristic subgroups `G'`, `Z(G)`, `Φ(G)`, `Gᵖ`, `Ω_k`.
//! * [`constructions`]: four group families built from one triple.
//! * [`aut`]: central homomorphisms under the circle operation and
//!   certificates that `Aut(G) = Aut_c(G)`.

pub mod aut;
pub mod claims;
pub mod constructions;
pub mod error;
pub mod exterior;
pub mod field;
pub mod gl;
pub mod group;
pub mod linalg;
pub mod tat;

pub use error::{Error, Result};
pub use field::FieldPrime;
pub use linalg::{FpMatrix, FpVector, Subspace};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exterior-square.md")]
    mod exterior_square {}
    #[doc = include_str!("../../../book/src/triples.md")]
    mod triples {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/automorphisms.md")]
    mod automorphisms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
