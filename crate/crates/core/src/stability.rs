//! Reduced games under a coalition structure and partitional stability.
//!
//! When `P` forms, a union `U` of its blocks can count on what the blocks
//! outside `U` leave of the stock: `r_U = (r - Σ_{T∈P, T∩U=∅} d_T)₊`. The
//! reduced game on `U` evaluates each `T ⊆ U` at `min{d_T, r_U}`.
//! A partition is stable when every block's reduced game has a non-empty
//! core and no union of two or more blocks has one.

use std::cell::RefCell;
use std::collections::HashMap;

use serde_json::{json, Map, Value};

use crate::coalition::{check_cap, Coalition, Partition, Partitions};
use crate::demand::{value_of, DemandProfile};
use crate::error::{Error, Result};
use crate::game::CharacteristicGame;
use crate::model::LppInstance;
use crate::rational::{format_rational, positive_part, Rational};
use crate::solution::{core_nonempty, Allocation, CoreReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ReductionSemantics {
    /// Every `T ⊆ U` is evaluated at `min{d_T, r_U}`.
    #[default]
    CappedSubcoalitions,
    /// Only `U` itself is capped at `min{d_U, r_U}`; proper subsets get
    /// their full demand.
    BlockLevelCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGame {
    pub ground: Coalition,
    /// Members of `ground` in increasing order; local player `k` is
    /// `players[k]`.
    pub players: Vec<usize>,
    pub budget: Rational,
    pub game: CharacteristicGame,
}

impl ReducedGame {
    /// Local coalition of the reduced game for a global `T ⊆ U`.
    pub fn local(&self, coalition: Coalition) -> Coalition {
        Coalition::from_players(
            self.players
                .iter()
                .enumerate()
                .filter(|(_, &p)| coalition.contains(p))
                .map(|(k, _)| k),
        )
    }

    fn global(players: &[usize], local: Coalition) -> Coalition {
        Coalition::from_players(local.players().map(|k| players[k]))
    }
}

fn check_block_union(partition: &Partition, union: Coalition) -> Result<()> {
    if union.is_empty() {
        return Err(Error::Structure("the reduced coalition must be non-empty".into()));
    }
    if let Some(b) = partition
        .blocks()
        .iter()
        .find(|b| !b.is_subset_of(union) && !b.is_disjoint(union))
    {
        return Err(Error::Structure(format!(
            "{union} is not a union of blocks of {partition}: it cuts block {b}"
        )));
    }
    Ok(())
}

fn budget_for(instance: &LppInstance, profile: &DemandProfile, partition: &Partition, union: Coalition) -> Rational {
    let outside: Rational = partition
        .blocks()
        .iter()
        .filter(|b| b.is_disjoint(union))
        .map(|&b| profile.demand(b))
        .sum();
    positive_part(instance.stock() - outside)
}

struct Evaluator<'a> {
    instance: &'a LppInstance,
    profile: &'a DemandProfile,
    semantics: ReductionSemantics,
    values: RefCell<HashMap<(Coalition, Rational), Rational>>,
    cores: RefCell<HashMap<(Coalition, Rational), (CoreReport, Vec<usize>)>>,
}

impl<'a> Evaluator<'a> {
    fn new(instance: &'a LppInstance, profile: &'a DemandProfile, semantics: ReductionSemantics) -> Self {
        Evaluator {
            instance,
            profile,
            semantics,
            values: RefCell::new(HashMap::new()),
            cores: RefCell::new(HashMap::new()),
        }
    }

    fn value(&self, coalition: Coalition, z: Rational) -> Result<Rational> {
        let d = self.profile.demand(coalition);
        if z >= *d {
            return Ok(self.profile.profit(coalition).clone());
        }
        let key = (coalition, z);
        if let Some(v) = self.values.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = value_of(self.instance, coalition, &key.1)?;
        self.values.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn game(&self, union: Coalition, budget: &Rational) -> Result<ReducedGame> {
        let players: Vec<usize> = union.players().collect();
        let worth = |local: Coalition| -> Result<Rational> {
            let t = ReducedGame::global(&players, local);
            let d = self.profile.demand(t).clone();
            let z = match self.semantics {
                ReductionSemantics::CappedSubcoalitions => d.min(budget.clone()),
                ReductionSemantics::BlockLevelCap if t == union => d.min(budget.clone()),
                ReductionSemantics::BlockLevelCap => d,
            };
            self.value(t, z)
        };
        let mut worths = vec![Rational::default()];
        for mask in 1..1u32 << players.len() {
            worths.push(worth(Coalition::from_mask(mask))?);
        }
        Ok(ReducedGame {
            ground: union,
            game: CharacteristicGame::new(players.len(), worths)?,
            players,
            budget: budget.clone(),
        })
    }

    fn core(&self, union: Coalition, budget: Rational) -> Result<(CoreReport, Vec<usize>)> {
        let key = (union, budget);
        if let Some(hit) = self.cores.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let reduced = self.game(union, &key.1)?;
        let report = core_nonempty(&reduced.game)?;
        let out = (report, reduced.players);
        self.cores.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    fn verdict(&self, partition: &Partition) -> Result<StabilityVerdict> {
        let blocks = partition.blocks();
        let mut witnesses = Vec::with_capacity(blocks.len());
        for &b in blocks {
            let budget = budget_for(self.instance, self.profile, partition, b);
            let (report, players) = self.core(b, budget)?;
            match report.witness {
                Some(x) => witnesses.push(BlockWitness { block: b, players, allocation: x }),
                None => {
                    return Ok(StabilityVerdict {
                        partition: partition.clone(),
                        certificate: Certificate::EmptyBlockCore { block: b },
                    })
                }
            }
        }
        for pick in 1u32..1 << blocks.len() {
            if pick.count_ones() < 2 {
                continue;
            }
            let merged: Vec<Coalition> = (0..blocks.len())
                .filter(|k| pick & (1 << k) != 0)
                .map(|k| blocks[k])
                .collect();
            let union = merged.iter().fold(Coalition::EMPTY, |a, &b| a.union(b));
            let budget = budget_for(self.instance, self.profile, partition, union);
            let (report, players) = self.core(union, budget)?;
            if let Some(x) = report.witness {
                return Ok(StabilityVerdict {
                    partition: partition.clone(),
                    certificate: Certificate::ProfitableMerger {
                        blocks: merged,
                        witness: BlockWitness { block: union, players, allocation: x },
                    },
                });
            }
        }
        Ok(StabilityVerdict {
            partition: partition.clone(),
            certificate: Certificate::Stable { witnesses },
        })
    }
}

/// The reduced game on `union` (a union of blocks of `partition`).
pub fn reduced_game(
    instance: &LppInstance,
    profile: &DemandProfile,
    partition: &Partition,
    union: Coalition,
    semantics: ReductionSemantics,
) -> Result<ReducedGame> {
    check_block_union(partition, union)?;
    let budget = budget_for(instance, profile, partition, union);
    Evaluator::new(instance, profile, semantics).game(union, &budget)
}

/// A core point of the reduced game on `block`, over its members in
/// increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockWitness {
    pub block: Coalition,
    pub players: Vec<usize>,
    pub allocation: Allocation,
}

impl BlockWitness {
    fn to_json(&self, n: usize) -> Value {
        let mut map = Map::new();
        for (p, v) in self.players.iter().zip(self.allocation.iter()) {
            map.insert(Coalition::singleton(*p).key(n), Value::String(format_rational(v)));
        }
        json!({ "coalition": self.block.to_string(), "allocation": map })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every block's reduced core is non-empty and no merger's is.
    Stable { witnesses: Vec<BlockWitness> },
    /// Condition (1) fails at this block.
    EmptyBlockCore { block: Coalition },
    /// Condition (2) fails: merging these blocks gives a non-empty core.
    ProfitableMerger { blocks: Vec<Coalition>, witness: BlockWitness },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub partition: Partition,
    pub certificate: Certificate,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self.certificate, Certificate::Stable { .. })
    }

    pub fn to_json(&self, n: usize) -> Value {
        let certificate = match &self.certificate {
            Certificate::Stable { witnesses } => json!({
                "kind": "stable",
                "block_cores": witnesses.iter().map(|w| w.to_json(n)).collect::<Vec<_>>(),
            }),
            Certificate::EmptyBlockCore { block } => json!({
                "kind": "empty_block_core",
                "block": block.to_string(),
            }),
            Certificate::ProfitableMerger { blocks, witness } => json!({
                "kind": "profitable_merger",
                "blocks": blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "merged_core_point": witness.to_json(n),
            }),
        };
        json!({
            "partition": self.partition.to_string(),
            "stable": self.is_stable(),
            "certificate": certificate,
        })
    }
}

pub fn is_partitionally_stable(
    instance: &LppInstance,
    profile: &DemandProfile,
    partition: &Partition,
    semantics: ReductionSemantics,
    cap: usize,
) -> Result<StabilityVerdict> {
    check_cap(instance.n(), cap)?;
    if partition.ground() != instance.grand() {
        return Err(Error::Structure(format!(
            "{partition} is not a partition of the {} producers",
            instance.n()
        )));
    }
    Evaluator::new(instance, profile, semantics).verdict(partition)
}

/// Verdicts for every partition, in enumeration order.
pub fn stability_report(
    instance: &LppInstance,
    profile: &DemandProfile,
    semantics: ReductionSemantics,
    cap: usize,
) -> Result<Vec<StabilityVerdict>> {
    check_cap(instance.n(), cap)?;
    let eval = Evaluator::new(instance, profile, semantics);
    Partitions::of(instance.grand())
        .map(|p| eval.verdict(&p))
        .collect()
}

pub fn stable_partitions(
    instance: &LppInstance,
    profile: &DemandProfile,
    semantics: ReductionSemantics,
    cap: usize,
) -> Result<Vec<Partition>> {
    Ok(stability_report(instance, profile, semantics, cap)?
        .into_iter()
        .filter(StabilityVerdict::is_stable)
        .map(|v| v.partition)
        .collect())
}
