#![allow(dead_code)]

use std::sync::OnceLock;

use abelaut::constructions::{build_central_product, build_extension, build_special, build_zurek, BuiltGroup};
use abelaut::tat::{search_tat, SearchOptions, SearchParams, TatCandidate};
use abelaut::FieldPrime;

pub fn opts() -> SearchOptions {
    SearchOptions {
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..SearchOptions::default()
    }
}

/// The triple found at p = 3, n = 4, K = 0 with seed 7.
pub fn tat() -> &'static TatCandidate {
    static TAT: OnceLock<TatCandidate> = OnceLock::new();
    TAT.get_or_init(|| {
        let outcome = search_tat(&SearchParams {
            p: FieldPrime::new(3).unwrap(),
            n: 4,
            k_dim: 0,
            seed: 7,
            budget: 500,
            options: opts(),
        })
        .unwrap();
        outcome.candidate.expect("a triple at p = 3, n = 4")
    })
}

/// special, zurek, central product and extension (m = 2), in that order.
pub fn groups() -> &'static [BuiltGroup; 4] {
    static GROUPS: OnceLock<[BuiltGroup; 4]> = OnceLock::new();
    GROUPS.get_or_init(|| {
        let t = tat();
        let o = opts();
        [
            build_special(t, &o).unwrap(),
            build_zurek(t, &o).unwrap(),
            build_central_product(t, &o).unwrap(),
            build_extension(t, 2, None, &o).unwrap(),
        ]
    })
}
