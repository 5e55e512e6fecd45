#![allow(dead_code)]

use std::path::PathBuf;

use lpp_core::io::{read_instance, InstanceDocument};
use lpp_core::rational::parse_rational;
use lpp_core::{Coalition, Rational};

pub fn fixture(name: &str) -> InstanceDocument {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    read_instance(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

pub fn qs(texts: &[&str]) -> Vec<Rational> {
    texts.iter().map(|t| q(t)).collect()
}

pub fn c(labels: &[usize]) -> Coalition {
    Coalition::from_labels(labels)
}

/// Coalitions of a three-player game in the order the examples list them:
/// 1, 2, 3, 12, 13, 23, N.
pub fn order3() -> Vec<Coalition> {
    vec![c(&[1]), c(&[2]), c(&[3]), c(&[1, 2]), c(&[1, 3]), c(&[2, 3]), c(&[1, 2, 3])]
}
pub mod oracle;

use lpp_core::generate::{generate, GeneratorParams, RegimeTarget};
use lpp_core::{DemandProfile, LppInstance};

/// Shape of the `k`-th instance of a suite: n in 1..=4, q and g in 1..=3.
pub fn shape(k: usize) -> (usize, usize, usize) {
    (1 + k % 4, 1 + (k / 4) % 3, 1 + (k / 12) % 3)
}

/// `count` generated instances hitting `target`, with shapes from `shape`
/// restricted to player counts accepted by `keep_n`. Shapes for which the
/// generator cannot reach the target (e.g. additive demands when q = g = 1)
/// are skipped.
pub fn suite(
    target: RegimeTarget,
    count: usize,
    seed: u64,
    keep_n: impl Fn(usize) -> bool,
) -> Vec<(LppInstance, DemandProfile)> {
    let mut out = Vec::with_capacity(count);
    let mut k = 0;
    while out.len() < count {
        let (n, q, g) = shape(k);
        k += 1;
        if !keep_n(n) {
            continue;
        }
        let mut params = GeneratorParams::new(n, q, g, target);
        params.attempts = 60;
        let inst = match generate(&params, seed.wrapping_mul(1_000_003).wrapping_add(k as u64)) {
            Ok(inst) => inst,
            Err(lpp_core::Error::GeneratorExhausted { .. }) => continue,
            Err(e) => panic!("{target} n={n} q={q} g={g}: {e}"),
        };
        let profile = DemandProfile::compute(&inst).unwrap();
        out.push((inst, profile));
    }
    out
}
