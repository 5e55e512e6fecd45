//! Seeded random instances that satisfy the model assumptions, with the
//! stock drawn to land in a requested regime.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::DEFAULT_PARTITION_CAP;
use crate::demand::{compute_m_min_for_stock, DemandProfile, Regime};
use crate::error::{Error, Result};
use crate::model::LppInstance;
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTarget {
    /// `M^min = ∅`.
    Unconstrained,
    /// `M^min = {{N}}`.
    GrandOnly,
    /// Some partition other than `{N}` is in `M^min`.
    General,
    /// `d_N ≤ r`.
    Sufficient,
    /// `d_N > r`.
    Scarce,
    /// `d_N > r` and `Σ_i d_{i} ≥ r`.
    ScarceWithClaims,
}

impl RegimeTarget {
    pub fn name(self) -> &'static str {
        match self {
            RegimeTarget::Unconstrained => "unconstrained",
            RegimeTarget::GrandOnly => "grand-only",
            RegimeTarget::General => "general",
            RegimeTarget::Sufficient => "sufficient",
            RegimeTarget::Scarce => "scarce",
            RegimeTarget::ScarceWithClaims => "scarce-with-claims",
        }
    }

    fn accepts(self, profile: &DemandProfile, stock: &Rational) -> Result<bool> {
        let d_n = profile.grand_demand();
        Ok(match self {
            RegimeTarget::Sufficient => d_n <= stock,
            RegimeTarget::Scarce => d_n > stock,
            RegimeTarget::ScarceWithClaims => d_n > stock && profile.singleton_total() >= *stock,
            regime => {
                let report = compute_m_min_for_stock(profile, stock, DEFAULT_PARTITION_CAP)?;
                let wanted = match regime {
                    RegimeTarget::Unconstrained => Regime::Unconstrained,
                    RegimeTarget::GrandOnly => Regime::GrandOnly,
                    _ => Regime::General,
                };
                report.regime == wanted
            }
        })
    }
}

impl fmt::Display for RegimeTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegimeTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            RegimeTarget::Unconstrained,
            RegimeTarget::GrandOnly,
            RegimeTarget::General,
            RegimeTarget::Sufficient,
            RegimeTarget::Scarce,
            RegimeTarget::ScarceWithClaims,
        ];
        all.into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown regime {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub n: usize,
    pub q: usize,
    pub g: usize,
    pub target: RegimeTarget,
    /// Technology/endowment draws before giving up.
    pub attempts: usize,
}

impl GeneratorParams {
    pub fn new(n: usize, q: usize, g: usize, target: RegimeTarget) -> Self {
        GeneratorParams {
            n,
            q,
            g,
            target,
            attempts: 500,
        }
    }
}

/// Stock draws per technology draw; stocks are quarter-integers.
const STOCK_DRAWS: usize = 64;

pub fn generate(params: &GeneratorParams, seed: u64) -> Result<LppInstance> {
    let GeneratorParams { n, q, g, .. } = *params;
    if n == 0 || q == 0 || g == 0 || n > DEFAULT_PARTITION_CAP {
        return Err(Error::Domain(format!(
            "generator needs 1 <= n <= {DEFAULT_PARTITION_CAP}, q >= 1, g >= 1 (got n={n}, q={q}, g={g})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..params.attempts {
        let Some((instance, profile)) = draw_technology(&mut rng, n, q, g)? else {
            continue;
        };
        let top = profile.max_partition_demand(instance.grand());
        let quarters = (top.ceil().to_integer().to_i64().unwrap_or(i64::MAX / 8) + 2) * 4;
        for _ in 0..STOCK_DRAWS {
            let stock = ratio(rng.gen_range(1..=quarters), 4);
            if params.target.accepts(&profile, &stock)? {
                return Ok(instance.with_stock(stock));
            }
        }
    }
    Err(Error::GeneratorExhausted {
        regime: params.target.name().to_string(),
        attempts: params.attempts,
    })
}

fn draw_technology(
    rng: &mut ChaCha8Rng,
    n: usize,
    q: usize,
    g: usize,
) -> Result<Option<(LppInstance, DemandProfile)>> {
    let cost = rng.gen_range(0..=3i64);
    let essential = rng.gen_range(0..q);
    let mut a: Vec<Vec<Rational>> = (0..q)
        .map(|t| {
            (0..g)
                .map(|_| int(if t == essential { rng.gen_range(1..=5) } else { rng.gen_range(0..=5) }))
                .collect()
        })
        .collect();
    let pool: Vec<i64> = (0..g).map(|_| rng.gen_range(1..=5)).collect();
    a.push(pool.iter().map(|&v| int(v)).collect());
    let p = pool.iter().map(|&v| int(v * cost + rng.gen_range(1..=10))).collect();
    let mut b: Vec<Vec<Rational>> = Vec::with_capacity(q);
    for _ in 0..q {
        let mut row: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=20)).collect();
        if row.iter().all(|&v| v == 0) {
            let owner = rng.gen_range(0..n);
            row[owner] = rng.gen_range(1..=20);
        }
        b.push(row.into_iter().map(int).collect());
    }
    let instance = LppInstance::new(a, b, p, int(cost), int(1))?;
    if !instance.is_valid() {
        return Ok(None);
    }
    let profile = DemandProfile::compute(&instance)?;
    Ok(Some((instance, profile)))
}
