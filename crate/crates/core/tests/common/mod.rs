#![allow(dead_code)]

use genpi_core::linalg::{Rat, SparseVec};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// Fixed seed, no persistence: every run draws the same cases.
pub fn config(cases: u32, seed: u64) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, prop_oneof![3 => Just(1i64), 1 => 1i64..=3])
        .prop_map(|(p, q)| Rat::new(BigInt::from(p), BigInt::from(q)))
}

pub fn vector(dim: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(small_rat(), dim)
}

pub fn sparse(dim: usize) -> impl Strategy<Value = SparseVec> {
    vector(dim).prop_map(|v| SparseVec::from_dense(&v))
}

pub const ALGEBRAS: [&str; 11] = [
    "ut:2",
    "ut:3",
    "mat:2",
    "block_ut:1,2",
    "grassmann:2",
    "grassmann_unital:2",
    "grassmann_unital:3",
    "zero_mult:1",
    "zero_mult:2",
    "diag_D",
    "sub_C",
];

pub const PRESETS: [&str; 10] = [
    "ut2F",
    "ut2D",
    "ut2C",
    "ut2full",
    "grassmann_Ek(1,3)",
    "grassmann_Ek(2,4)",
    "grassmann_full(2)",
    "full:ut:3",
    "full:mat:2",
    "full:block_ut:1,2",
];
