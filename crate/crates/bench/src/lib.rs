//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use lpp_core::generate::{generate, GeneratorParams, RegimeTarget};
use lpp_core::io::read_instance;
use lpp_core::LppInstance;

pub fn fixture(name: &str) -> LppInstance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    read_instance(&path).expect("fixture parses").instance
}

/// A reproducible instance with `n` producers, three resources and three goods.
pub fn random(n: usize, target: RegimeTarget, seed: u64) -> LppInstance {
    let params = GeneratorParams::new(n, 3, 3, target);
    (seed..seed + 200)
        .find_map(|s| generate(&params, s).ok())
        .expect("generator finds an instance")
}
