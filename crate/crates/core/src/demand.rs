//! Coalition values and optimal common-pool demands.
//!
//! `value(S; z)` is the best profit coalition `S` makes with its pooled
//! endowment when it may buy up to `z` units of the common-pool resource.
//! The cost `c` is charged on what the production plan actually uses, so
//! `value(S; ·)` is nondecreasing, concave, and flat from `d_S` on.
//! `d_S` is the least amount at which that maximum is reached.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::coalition::{check_cap, Coalition, Partition, Partitions};
use crate::error::{Error, Result};
use crate::lp::{self, Direction, LpOutcome, LpStatus, StandardLp};
use crate::model::{require_nonnegative, zeros, LppInstance};
use crate::rational::{format_rational, Rational};

/// Coalition program with free pool purchase `z`: variables `(x_1..x_g, z)`,
/// rows `A_t x ≤ b^S_t` for each resource then `a_(q+1)·x - z ≤ 0`.
pub fn coalition_program(instance: &LppInstance, coalition: Coalition) -> Result<StandardLp> {
    let resources = instance.coalition_resources(coalition)?;
    let (q, g) = (instance.q(), instance.g());
    let mut objective = instance.prices().to_vec();
    objective.push(-instance.cost().clone());
    let mut lp = StandardLp::new(objective);
    for (t, bound) in resources.into_iter().enumerate() {
        let mut row = instance.a()[t].clone();
        row.push(Rational::zero());
        lp.add_le(row, bound);
    }
    let mut pool = instance.a()[q].clone();
    pool.push(-Rational::one());
    lp.add_le(pool, Rational::zero());
    debug_assert_eq!(lp.num_vars(), g + 1);
    Ok(lp)
}

fn expect_optimal(outcome: LpOutcome, coalition: Coalition) -> Result<LpOutcome> {
    match outcome.status {
        LpStatus::Optimal => Ok(outcome),
        status => Err(Error::LpStatus {
            context: format!("coalition {coalition}"),
            status,
        }),
    }
}

/// Solves the coalition program with unrestricted pool purchase.
pub fn solve_coalition(instance: &LppInstance, coalition: Coalition) -> Result<LpOutcome> {
    let lp = coalition_program(instance, coalition)?;
    expect_optimal(lp::solve(&lp)?, coalition)
}

/// Optimal profit with unrestricted pool purchase, i.e. `value(S; d_S)`.
pub fn max_profit(instance: &LppInstance, coalition: Coalition) -> Result<Rational> {
    Ok(solve_coalition(instance, coalition)?.value.expect("optimal"))
}

/// `value(S; z)`.
pub fn value_of(instance: &LppInstance, coalition: Coalition, z: &Rational) -> Result<Rational> {
    require_nonnegative(z, "common-pool amount z")?;
    let mut lp = coalition_program(instance, coalition)?;
    let mut cap = zeros(instance.g());
    cap.push(Rational::one());
    lp.add_le(cap, z.clone());
    let outcome = expect_optimal(lp::solve(&lp)?, coalition)?;
    Ok(outcome.value.expect("optimal"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Demand {
    /// `d_S`.
    pub amount: Rational,
    /// `value(S; d_S)`.
    pub profit: Rational,
}

/// `d_S`: solve the coalition program, then minimize `z` among its optimal
/// plans.
pub fn optimal_demand(instance: &LppInstance, coalition: Coalition) -> Result<Demand> {
    let lp = coalition_program(instance, coalition)?;
    let first = expect_optimal(lp::solve(&lp)?, coalition)?;
    let profit = first.value.expect("optimal");
    let mut minimize_z = zeros(instance.g());
    minimize_z.push(Rational::one());
    let second = lp::solve_with_value_constraint(&lp, &profit, &minimize_z, Direction::Minimize)?;
    let second = expect_optimal(second, coalition)?;
    Ok(Demand {
        amount: second.value.expect("optimal"),
        profit,
    })
}

/// `d_S` and `value(S; d_S)` for every non-empty coalition, indexed by
/// coalition mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandProfile {
    n: usize,
    demands: Vec<Rational>,
    profits: Vec<Rational>,
}

impl DemandProfile {
    pub fn compute(instance: &LppInstance) -> Result<Self> {
        let n = instance.n();
        let solved: Vec<Demand> = (1..1u32 << n)
            .into_par_iter()
            .map(|mask| optimal_demand(instance, Coalition::from_mask(mask)))
            .collect::<Result<_>>()?;
        let mut demands = vec![Rational::zero()];
        let mut profits = vec![Rational::zero()];
        for d in solved {
            demands.push(d.amount);
            profits.push(d.profit);
        }
        Ok(DemandProfile { n, demands, profits })
    }

    /// Builds a profile from known demands (profits unknown, set to zero).
    /// Meant for exercising the combinatorial operations on given numbers.
    pub fn from_demands(n: usize, demands: Vec<Rational>) -> Result<Self> {
        if demands.len() != 1 << n {
            return Err(Error::Structure(format!(
                "expected 2^{n} demand entries indexed by mask, got {}",
                demands.len()
            )));
        }
        Ok(DemandProfile {
            n,
            profits: zeros(demands.len()),
            demands,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn demand(&self, coalition: Coalition) -> &Rational {
        &self.demands[coalition.index()]
    }

    pub fn profit(&self, coalition: Coalition) -> &Rational {
        &self.profits[coalition.index()]
    }

    pub fn grand_demand(&self) -> &Rational {
        self.demand(Coalition::grand(self.n))
    }

    /// `d(P) = Σ_{S∈P} d_S`.
    pub fn partition_demand(&self, partition: &Partition) -> Rational {
        partition.blocks().iter().map(|&b| self.demand(b)).sum()
    }

    /// `Σ_i d_{{i}}`.
    pub fn singleton_total(&self) -> Rational {
        (0..self.n).map(|i| self.demand(Coalition::singleton(i))).sum()
    }

    /// `max d(P)` over partitions of `ground` (zero for the empty set).
    pub fn max_partition_demand(&self, ground: Coalition) -> Rational {
        Partitions::of(ground)
            .map(|p| self.partition_demand(&p))
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Regime {
    /// `M^min = ∅`: the stock covers every partition's demand.
    Unconstrained,
    /// `M^min = {{N}}`: only the grand coalition's demand exceeds the stock.
    GrandOnly,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeReport {
    pub m_min: Vec<Partition>,
    pub regime: Regime,
}

/// Calls `visit` on every refinement of `partition` (itself included) until
/// it returns true.
fn any_refinement(blocks: &[Coalition], acc: &mut Vec<Coalition>, visit: &mut dyn FnMut(&[Coalition]) -> bool) -> bool {
    let Some((&first, rest)) = blocks.split_first() else {
        return visit(acc);
    };
    for split in Partitions::of(first) {
        let mark = acc.len();
        acc.extend_from_slice(split.blocks());
        let hit = any_refinement(rest, acc, visit);
        acc.truncate(mark);
        if hit {
            return true;
        }
    }
    false
}

/// `M^min` for the given stock: partitions whose demand exceeds `stock`
/// and none of whose strict refinements does. Refinements are enumerated
/// explicitly because `d` is not monotone along the lattice.
pub fn compute_m_min_for_stock(profile: &DemandProfile, stock: &Rational, cap: usize) -> Result<RegimeReport> {
    let n = profile.n();
    check_cap(n, cap)?;
    let mut m_min = Vec::new();
    for partition in Partitions::of(Coalition::grand(n)) {
        if profile.partition_demand(&partition) <= *stock {
            continue;
        }
        let size = partition.len();
        let mut acc = Vec::with_capacity(n);
        let refined_exceeds = any_refinement(partition.blocks(), &mut acc, &mut |blocks| {
            blocks.len() > size
                && blocks.iter().map(|&b| profile.demand(b)).sum::<Rational>() > *stock
        });
        if !refined_exceeds {
            m_min.push(partition);
        }
    }
    let regime = match m_min.as_slice() {
        [] => Regime::Unconstrained,
        [only] if only.len() == 1 => Regime::GrandOnly,
        _ => Regime::General,
    };
    Ok(RegimeReport { m_min, regime })
}

pub fn compute_m_min(instance: &LppInstance, profile: &DemandProfile, cap: usize) -> Result<RegimeReport> {
    compute_m_min_for_stock(profile, instance.stock(), cap)
}

/// Checks `value(S; k·z*/grid) > 0` for `k = 1..grid-1`, given
/// `value(S; z*) > 0`.
pub fn positivity_scan(instance: &LppInstance, coalition: Coalition, z_star: &Rational, grid: u32) -> Result<bool> {
    if grid == 0 {
        return Err(Error::Domain("grid must be a positive integer".into()));
    }
    let top = value_of(instance, coalition, z_star)?;
    if !top.is_positive() {
        return Err(Error::Domain(format!(
            "value({coalition}; {}) = {} is not positive",
            format_rational(z_star),
            format_rational(&top)
        )));
    }
    for k in 1..grid {
        let z = z_star * Rational::new(k.into(), grid.into());
        if !value_of(instance, coalition, &z)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}
