//! Core membership, core emptiness, and allocations priced from dual
//! solutions of the grand coalition's program.

use std::ops::Deref;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coalition::{Coalition, Partition};
use crate::demand::{solve_coalition, DemandProfile};
use crate::error::{Error, Result};
use crate::game::{pessimistic_and_optimistic_views, CharacteristicGame, PartitionFunctionGame};
use crate::lp::{self, dot, solve_square, LpStatus, StandardLp};
use crate::model::LppInstance;
use crate::rational::{format_rational, serde_rational_vec, Rational};

/// A payoff vector, one entry per producer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Allocation(#[serde(with = "serde_rational_vec")] pub Vec<Rational>);

impl Allocation {
    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    /// `x(S) = Σ_{i∈S} x_i`.
    pub fn coalition_total(&self, coalition: Coalition) -> Rational {
        coalition.players().map(|i| &self.0[i]).sum()
    }
}

impl Deref for Allocation {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for Allocation {
    fn from(v: Vec<Rational>) -> Self {
        Allocation(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub efficient: bool,
    /// Coalitions `S ≠ N` with `x(S) < v(S)`.
    pub violated: Vec<Coalition>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.efficient && self.violated.is_empty()
    }
}

/// Exact check of `x(N) = v(N)` and `x(S) ≥ v(S)` for all `S`.
pub fn check_core_membership(game: &CharacteristicGame, x: &Allocation) -> Result<Membership> {
    if x.len() != game.n() {
        return Err(Error::Structure(format!(
            "allocation has {} entries, game has {} players",
            x.len(),
            game.n()
        )));
    }
    let grand = Coalition::grand(game.n());
    let efficient = x.total() == *game.grand_worth();
    let violated = game
        .coalitions()
        .into_iter()
        .filter(|&s| s != grand && x.coalition_total(s) < *game.worth(s))
        .collect();
    Ok(Membership { efficient, violated })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Empty,
    NonEmpty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Provenance {
    /// Feasible point of the core's defining inequality system.
    FeasibilityLP,
    /// Endowments priced at the grand coalition's dual prices.
    OwenConstruction,
    /// Dual prices at `z = r` plus a core point of the resource game.
    ScarcePoolConstruction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreReport {
    pub verdict: Verdict,
    pub witness: Option<Allocation>,
    pub provenance: Option<Provenance>,
}

impl CoreReport {
    pub fn is_nonempty(&self) -> bool {
        self.verdict == Verdict::NonEmpty
    }

    fn empty() -> Self {
        CoreReport {
            verdict: Verdict::Empty,
            witness: None,
            provenance: None,
        }
    }

    fn witnessed(witness: Allocation, provenance: Provenance) -> Self {
        CoreReport {
            verdict: Verdict::NonEmpty,
            witness: Some(witness),
            provenance: Some(provenance),
        }
    }
}

/// Decides whether `{x : x(N) = v(N), x(S) ≥ v(S) ∀S}` is non-empty. Payoffs
/// are free, so each `x_i` is split as `x⁺_i - x⁻_i`.
pub fn core_nonempty(game: &CharacteristicGame) -> Result<CoreReport> {
    let n = game.n();
    let grand = Coalition::grand(n);
    let row = |s: Coalition| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); 2 * n];
        for i in s.players() {
            row[i] = Rational::one();
            row[n + i] = -Rational::one();
        }
        row
    };
    let mut lp = StandardLp::new(vec![Rational::zero(); 2 * n]);
    lp.add_eq(row(grand), game.grand_worth().clone());
    for s in game.coalitions() {
        if s != grand {
            lp.add_ge(row(s), game.worth(s).clone());
        }
    }
    let outcome = lp::solve(&lp)?;
    match outcome.status {
        LpStatus::Infeasible => Ok(CoreReport::empty()),
        LpStatus::Optimal => {
            let x: Vec<Rational> = (0..n)
                .map(|i| &outcome.primal[i] - &outcome.primal[n + i])
                .collect();
            Ok(CoreReport::witnessed(Allocation(x), Provenance::FeasibilityLP))
        }
        LpStatus::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

fn price_endowments(instance: &LppInstance, prices: &[Rational]) -> Allocation {
    let q = instance.q();
    Allocation(
        (0..instance.n())
            .map(|i| dot(&instance.endowment(i), &prices[..q]))
            .collect(),
    )
}

fn require_sufficient_stock(instance: &LppInstance, profile: &DemandProfile) -> Result<()> {
    let d_n = profile.grand_demand();
    if d_n > instance.stock() {
        return Err(Error::Precondition(format!(
            "d_N = {} exceeds r = {}; the dual-price construction needs d_N <= r \
             (use the scarce-pool construction with a core point of a resource game)",
            format_rational(d_n),
            format_rational(instance.stock())
        )));
    }
    Ok(())
}

/// `x_i = b^i · y_q` for the grand coalition's optimal dual prices `y`.
///
/// The prices come from the grand coalition program with free pool purchase,
/// whose dual is `min b^N·y_q  s.t. Aᵀy ≥ p, y_(q+1) ≤ c, y ≥ 0`. With
/// `d_N ≤ r` the result is efficient for `v^opt` and lies in its core (and
/// in the core of the characteristic game when the stock never binds).
pub fn owen_allocation(instance: &LppInstance, profile: &DemandProfile) -> Result<Allocation> {
    require_sufficient_stock(instance, profile)?;
    let outcome = solve_coalition(instance, instance.grand())?;
    Ok(price_endowments(instance, &outcome.dual))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OwenElement {
    #[serde(with = "serde_rational_vec")]
    pub prices: Vec<Rational>,
    pub allocation: Allocation,
}

/// Every vertex of the optimal dual face, each turned into an allocation.
/// Exhaustive over constraint bases, so limited to `n ≤ 3`.
pub fn owen_set_vertices(instance: &LppInstance, profile: &DemandProfile) -> Result<Vec<OwenElement>> {
    if instance.n() > 3 {
        return Err(Error::Precondition(format!(
            "dual vertex enumeration is limited to n <= 3, got n = {}",
            instance.n()
        )));
    }
    require_sufficient_stock(instance, profile)?;
    let (q, g) = (instance.q(), instance.g());
    let dim = q + 1;
    let target = profile.profit(instance.grand()).clone();
    let b_n = instance.coalition_resources(instance.grand())?;
    // Constraints as (row, rhs, sense) with sense +1 for ≥ and -1 for ≤.
    let mut cons: Vec<(Vec<Rational>, Rational, bool)> = Vec::new();
    for j in 0..g {
        let row = (0..dim).map(|t| instance.a()[t][j].clone()).collect();
        cons.push((row, instance.prices()[j].clone(), true));
    }
    let mut pool = vec![Rational::zero(); dim];
    pool[q] = Rational::one();
    cons.push((pool, instance.cost().clone(), false));
    for t in 0..dim {
        let mut row = vec![Rational::zero(); dim];
        row[t] = Rational::one();
        cons.push((row, Rational::zero(), true));
    }
    let feasible = |y: &[Rational]| {
        cons.iter().all(|(row, rhs, ge)| {
            let lhs = dot(row, y);
            if *ge {
                lhs >= *rhs
            } else {
                lhs <= *rhs
            }
        })
    };
    let mut found: Vec<Vec<Rational>> = Vec::new();
    for subset in combinations(cons.len(), dim) {
        let m = subset.iter().map(|&k| cons[k].0.clone()).collect();
        let rhs = subset.iter().map(|&k| cons[k].1.clone()).collect();
        let Some(y) = solve_square(m, rhs) else { continue };
        if feasible(&y) && dot(&b_n, &y[..q]) == target && !found.contains(&y) {
            found.push(y);
        }
    }
    found.sort();
    Ok(found
        .into_iter()
        .map(|y| OwenElement {
            allocation: price_endowments(instance, &y),
            prices: y,
        })
        .collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Allocation for a resource game `R` when the stock is scarce (`d_N > r`):
/// `x_i = b^i·y*_q + u_i (y*_(q+1) - c)`, where `y*` is an optimal dual of
/// the grand coalition program at fixed pool amount `r` and `u ∈ C(R)` with
/// `u(N) = r`. The result lies in the core of `v^R`.
pub fn scarce_pool_allocation(
    instance: &LppInstance,
    profile: &DemandProfile,
    resource: &CharacteristicGame,
    u: &Allocation,
) -> Result<Allocation> {
    let (n, q) = (instance.n(), instance.q());
    let r = instance.stock();
    if profile.grand_demand() <= r {
        return Err(Error::Precondition(format!(
            "d_N = {} does not exceed r = {}; use the Owen construction",
            format_rational(profile.grand_demand()),
            format_rational(r)
        )));
    }
    if u.len() != n || resource.n() != n {
        return Err(Error::Structure(format!(
            "u has {} entries and R has {} players, instance has {n}",
            u.len(),
            resource.n()
        )));
    }
    if u.total() != *r {
        return Err(Error::Precondition(format!(
            "u(N) = {} must equal r = {}",
            format_rational(&u.total()),
            format_rational(r)
        )));
    }
    let membership = check_core_membership(resource, u)?;
    if !membership.is_member() {
        let detail = match membership.violated.first() {
            Some(s) => format!("u({s}) < R({s})"),
            None => "u(N) != R(N)".to_string(),
        };
        return Err(Error::Domain(format!("u is not in the core of R: {detail}")));
    }
    let b_n = instance.coalition_resources(instance.grand())?;
    let mut lp = StandardLp::new(instance.prices().to_vec());
    for (t, bound) in b_n.into_iter().enumerate() {
        lp.add_le(instance.a()[t].clone(), bound);
    }
    lp.add_le(instance.a()[q].clone(), r.clone());
    let outcome = lp::solve(&lp)?;
    if !outcome.is_optimal() {
        return Err(Error::LpStatus {
            context: "grand coalition at z = r".into(),
            status: outcome.status,
        });
    }
    let y = &outcome.dual;
    let markup = &y[q] - instance.cost();
    if markup.is_negative() {
        return Err(Error::Precondition(format!(
            "pool shadow price {} is below c; the stock does not bind",
            format_rational(&y[q])
        )));
    }
    let base = price_endowments(instance, y);
    Ok(Allocation(
        base.0
            .into_iter()
            .zip(u.iter())
            .map(|(b, ui)| b + ui * &markup)
            .collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DominanceMode {
    /// `x'(S) ≤ V(S|P)` for every partition containing `S`.
    AllPartitions,
    /// `x'(S) ≤ V(S|P)` for at least one partition containing `S`.
    SomePartition,
}

/// Whether `challenger` dominates `x` through `coalition`.
pub fn dominates(
    challenger: &Allocation,
    x: &Allocation,
    coalition: Coalition,
    game: &PartitionFunctionGame,
    mode: DominanceMode,
) -> Result<bool> {
    let n = game.n();
    if challenger.len() != n || x.len() != n {
        return Err(Error::Structure(format!(
            "allocations must have {n} entries, got {} and {}",
            challenger.len(),
            x.len()
        )));
    }
    if coalition.is_empty() || !coalition.is_subset_of(Coalition::grand(n)) {
        return Err(Error::Structure(format!("{coalition} is not a non-empty coalition")));
    }
    if !coalition.players().all(|i| challenger[i] > x[i]) {
        return Ok(false);
    }
    let claim = challenger.coalition_total(coalition);
    let mut worths = game.worths_of(coalition);
    Ok(match mode {
        DominanceMode::AllPartitions => worths.all(|v| claim <= *v),
        DominanceMode::SomePartition => worths.any(|v| claim <= *v),
    })
}

/// Whether `x` is feasible under `partition`: `x(S) ≤ V(S|P)` for every block.
pub fn feasible_under(x: &Allocation, partition: &Partition, game: &PartitionFunctionGame) -> bool {
    partition.blocks().iter().all(|&b| {
        game.worth(b, partition)
            .is_some_and(|v| x.coalition_total(b) <= *v)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionCoreMode {
    /// `C(V)`, decided through `v⁻`.
    Pessimistic,
    /// The core under the stricter dominance, decided through `v⁺`.
    Optimistic,
}

pub fn partition_core(game: &PartitionFunctionGame, mode: PartitionCoreMode) -> Result<CoreReport> {
    let (low, high) = pessimistic_and_optimistic_views(game);
    match mode {
        PartitionCoreMode::Pessimistic => core_nonempty(&low),
        PartitionCoreMode::Optimistic => core_nonempty(&high),
    }
}
