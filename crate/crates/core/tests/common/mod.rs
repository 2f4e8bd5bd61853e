#![allow(dead_code)]

use std::path::PathBuf;

use circulant_core::fixtures::{load_errata, load_fixtures, Erratum, FixturePair};
use circulant_core::{ConnectionSet, Modulus};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> Vec<FixturePair> {
    load_fixtures(&fixture_dir().join(name)).expect("fixture parses")
}

pub fn errata() -> Vec<Erratum> {
    load_errata(&fixture_dir().join("errata.tsv")).expect("errata parse")
}

pub fn md(n: u64) -> Modulus {
    Modulus::new(n).unwrap()
}

pub fn cs(n: u64, jumps: &[u64]) -> ConnectionSet {
    ConnectionSet::new(md(n), jumps.iter().copied()).unwrap()
}

pub fn raw(n: u64, values: &[i64]) -> ConnectionSet {
    ConnectionSet::from_values(md(n), values.iter().copied()).unwrap()
}
