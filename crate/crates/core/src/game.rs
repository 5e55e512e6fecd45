//! Cooperative games built from a production situation.
//!
//! Characteristic-form games are dense arrays indexed by coalition mask.
//! Partition-function games store one worth per block of every partition.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::coalition::{check_cap, Coalition, EmbeddedCoalition, Partition, Partitions};
use crate::demand::{compute_m_min, value_of, DemandProfile, Regime};
use crate::error::{Error, Result};
use crate::model::LppInstance;
use crate::rational::{format_rational, parse_rational, positive_part, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicGame {
    n: usize,
    worth: Vec<Rational>,
}

impl CharacteristicGame {
    /// `worth[mask]` for every mask in `0..2^n`; `worth[0]` must be zero.
    pub fn new(n: usize, worth: Vec<Rational>) -> Result<Self> {
        if worth.len() != 1 << n {
            return Err(Error::Structure(format!(
                "a game on {n} players needs 2^{n} worths, got {}",
                worth.len()
            )));
        }
        if !worth[0].is_zero() {
            return Err(Error::Structure("the empty coalition must be worth 0".into()));
        }
        Ok(CharacteristicGame { n, worth })
    }

    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(Coalition) -> Result<Rational> + Sync,
    {
        let tail: Vec<Rational> = (1..1u32 << n)
            .into_par_iter()
            .map(|m| f(Coalition::from_mask(m)))
            .collect::<Result<_>>()?;
        let mut worth = Vec::with_capacity(1 << n);
        worth.push(Rational::zero());
        worth.extend(tail);
        Ok(CharacteristicGame { n, worth })
    }

    /// Builds a game from `(coalition, worth)` pairs covering every
    /// non-empty coalition exactly once.
    pub fn from_entries(n: usize, entries: Vec<(Coalition, Rational)>) -> Result<Self> {
        let mut worth: Vec<Option<Rational>> = vec![None; 1 << n];
        worth[0] = Some(Rational::zero());
        for (c, v) in entries {
            if c.is_empty() || !c.is_subset_of(Coalition::grand(n)) {
                return Err(Error::Structure(format!("{c} is not a coalition of {n} players")));
            }
            if worth[c.index()].replace(v).is_some() {
                return Err(Error::Structure(format!("worth of {c} given twice")));
            }
        }
        let worth = worth
            .into_iter()
            .enumerate()
            .map(|(m, v)| {
                v.ok_or_else(|| {
                    Error::Structure(format!(
                        "no worth for coalition {}",
                        Coalition::from_mask(m as u32)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Ok(CharacteristicGame { n, worth })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn worth(&self, coalition: Coalition) -> &Rational {
        &self.worth[coalition.index()]
    }

    pub fn grand_worth(&self) -> &Rational {
        self.worth(Coalition::grand(self.n))
    }

    /// Non-empty coalitions ordered by size, then by members.
    pub fn coalitions(&self) -> Vec<Coalition> {
        let mut all: Vec<Coalition> = Coalition::grand(self.n).subsets().collect();
        all.sort_by_key(|c| (c.len(), c.players().collect::<Vec<_>>()));
        all
    }

    /// `{"1": "4", "12": "22", ...}`.
    pub fn worth_json(&self) -> Value {
        let mut map = Map::new();
        for c in self.coalitions() {
            map.insert(c.key(self.n), Value::String(format_rational(self.worth(c))));
        }
        Value::Object(map)
    }

    /// `{"n": 3, "v": {...}}`.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("n".into(), Value::from(self.n));
        obj.insert("v".into(), self.worth_json());
        Value::Object(obj)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("game: missing integer \"n\"".into()))? as usize;
        let v = value
            .get("v")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("game: missing object \"v\"".into()))?;
        let mut entries = Vec::new();
        for (key, val) in v {
            let text = val
                .as_str()
                .map(str::to_string)
                .unwrap_or_else(|| val.to_string());
            let worth = parse_rational(&text).map_err(|e| Error::Parse(format!("v[{key}]: {e}")))?;
            entries.push((Coalition::parse_key(key, n)?, worth));
        }
        Self::from_entries(n, entries)
    }
}

/// `V(S|P) = value(S; z_S(P))` over every embedded coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionFunctionGame {
    n: usize,
    rule_name: String,
    entries: Vec<(Partition, Vec<Rational>)>,
    index: HashMap<Partition, usize>,
}

impl PartitionFunctionGame {
    fn from_entries(n: usize, rule_name: String, entries: Vec<(Partition, Vec<Rational>)>) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (p.clone(), i))
            .collect();
        PartitionFunctionGame {
            n,
            rule_name,
            entries,
            index,
        }
    }

    /// The partition-function view of a characteristic game: every block is
    /// worth its stand-alone value whatever the outsiders do.
    pub fn from_characteristic(game: &CharacteristicGame, cap: usize) -> Result<Self> {
        let n = game.n();
        check_cap(n, cap)?;
        let entries = Partitions::of(Coalition::grand(n))
            .map(|p| {
                let worths = p.blocks().iter().map(|&b| game.worth(b).clone()).collect();
                (p, worths)
            })
            .collect();
        Ok(Self::from_entries(n, "characteristic".into(), entries))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rule_name(&self) -> &str {
        &self.rule_name
    }

    /// Partitions with the worth of each of their blocks, in enumeration
    /// order.
    pub fn entries(&self) -> &[(Partition, Vec<Rational>)] {
        &self.entries
    }

    /// `V(S|P)`, or `None` when `S` is not a block of `P`.
    pub fn worth(&self, coalition: Coalition, partition: &Partition) -> Option<&Rational> {
        let (p, worths) = &self.entries[*self.index.get(partition)?];
        let k = p.blocks().iter().position(|&b| b == coalition)?;
        Some(&worths[k])
    }

    pub fn embedded_worth(&self, embedded: &EmbeddedCoalition) -> Option<&Rational> {
        self.worth(embedded.coalition(), embedded.partition())
    }

    /// `V(S|P)` for every partition `P` that has `S` as a block.
    pub fn worths_of(&self, coalition: Coalition) -> impl Iterator<Item = &Rational> + '_ {
        self.entries.iter().filter_map(move |(p, w)| {
            p.blocks().iter().position(|&b| b == coalition).map(|k| &w[k])
        })
    }

    pub fn grand_worth(&self) -> &Rational {
        self.worth(Coalition::grand(self.n), &Partition::grand(self.n))
            .expect("the one-block partition is always present")
    }

    /// `{"n": 3, "rule": "...", "V": {"12|{1,2}{3}": "22", ...}}`.
    pub fn to_json(&self) -> Value {
        let mut v = Map::new();
        for (p, worths) in &self.entries {
            for (b, w) in p.blocks().iter().zip(worths) {
                v.insert(format!("{}|{}", b.key(self.n), p), Value::String(format_rational(w)));
            }
        }
        let mut obj = Map::new();
        obj.insert("n".into(), Value::from(self.n));
        obj.insert("rule".into(), Value::String(self.rule_name.clone()));
        obj.insert("V".into(), Value::Object(v));
        Value::Object(obj)
    }
}

/// How the manager splits the stock among the blocks of a partition.
pub trait AllocationRule: Sync {
    fn name(&self) -> &str;

    /// `z_S(P)` for each block of `partition`, in block order.
    fn allocate(&self, partition: &Partition, profile: &DemandProfile, stock: &Rational) -> Vec<Rational>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinRule {
    /// `d_S` when `d(P) ≤ r`, else `r·d_S/d(P)`.
    DemandCappedProportional,
    /// `min{d_S, r}`, scaled down proportionally if the blocks ask for more
    /// than `r` in total.
    OptimisticEmbedded,
    /// `min{d_S, (r - Σ_{T∈P, T≠S} d_T)₊}`: what the other blocks leave.
    PessimisticEmbedded,
}

impl BuiltinRule {
    pub const ALL: [BuiltinRule; 3] = [
        BuiltinRule::DemandCappedProportional,
        BuiltinRule::OptimisticEmbedded,
        BuiltinRule::PessimisticEmbedded,
    ];
}

impl AllocationRule for BuiltinRule {
    fn name(&self) -> &str {
        match self {
            BuiltinRule::DemandCappedProportional => "proportional",
            BuiltinRule::OptimisticEmbedded => "optimistic",
            BuiltinRule::PessimisticEmbedded => "pessimistic",
        }
    }

    fn allocate(&self, partition: &Partition, profile: &DemandProfile, stock: &Rational) -> Vec<Rational> {
        let blocks = partition.blocks();
        match self {
            BuiltinRule::DemandCappedProportional => {
                let total = profile.partition_demand(partition);
                blocks
                    .iter()
                    .map(|&b| {
                        let d = profile.demand(b).clone();
                        if total <= *stock {
                            d
                        } else {
                            stock * d / &total
                        }
                    })
                    .collect()
            }
            BuiltinRule::OptimisticEmbedded => {
                let asks: Vec<Rational> = blocks
                    .iter()
                    .map(|&b| profile.demand(b).clone().min(stock.clone()))
                    .collect();
                let total: Rational = asks.iter().sum();
                if total <= *stock {
                    asks
                } else {
                    asks.into_iter().map(|a| stock * a / &total).collect()
                }
            }
            BuiltinRule::PessimisticEmbedded => {
                let total = profile.partition_demand(partition);
                blocks
                    .iter()
                    .map(|&b| {
                        let d = profile.demand(b);
                        let left = positive_part(stock - (&total - d));
                        d.clone().min(left)
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for BuiltinRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proportional" | "demand-capped-proportional" => Ok(BuiltinRule::DemandCappedProportional),
            "optimistic" | "optimistic-embedded" => Ok(BuiltinRule::OptimisticEmbedded),
            "pessimistic" | "pessimistic-embedded" => Ok(BuiltinRule::PessimisticEmbedded),
            other => Err(Error::Parse(format!(
                "unknown allocation rule {other:?} (expected proportional, optimistic or pessimistic)"
            ))),
        }
    }
}

/// `v(S) = value(S; d_S)` for `S ≠ N` and `v(N) = value(N; min{d_N, r})`.
/// Only defined when the stock binds at most for the grand coalition.
pub fn characteristic_game(instance: &LppInstance, profile: &DemandProfile, cap: usize) -> Result<CharacteristicGame> {
    let report = compute_m_min(instance, profile, cap)?;
    if report.regime == Regime::General {
        let names: Vec<String> = report.m_min.iter().map(|p| p.to_string()).collect();
        return Err(Error::Precondition(format!(
            "the stock binds below the grand coalition (M^min = {}); \
             the situation is not a characteristic-form game",
            names.join(", ")
        )));
    }
    let grand = instance.grand();
    CharacteristicGame::from_fn(instance.n(), |s| {
        let d = profile.demand(s);
        if s == grand {
            value_of(instance, s, &d.clone().min(instance.stock().clone()))
        } else {
            value_of(instance, s, d)
        }
    })
}

/// `R^opt(S) = min{d_S, r}`.
pub fn optimistic_resource_game(instance: &LppInstance, profile: &DemandProfile) -> CharacteristicGame {
    let r = instance.stock();
    CharacteristicGame::from_fn(instance.n(), |s| Ok(profile.demand(s).clone().min(r.clone())))
        .expect("infallible")
}

/// `R^pes(S) = min{ min_{P∋S} (r - Σ_{T∈P,T≠S} d_T)₊, d_S }`. The inner
/// minimum runs over the partitions of `N∖S`.
pub fn pessimistic_resource_game(
    instance: &LppInstance,
    profile: &DemandProfile,
    cap: usize,
) -> Result<CharacteristicGame> {
    let n = instance.n();
    check_cap(n, cap)?;
    let r = instance.stock();
    let grand = instance.grand();
    CharacteristicGame::from_fn(n, |s| {
        let outsiders = grand.minus(s);
        let worst = Partitions::of(outsiders)
            .map(|p| positive_part(r - profile.partition_demand(&p)))
            .min()
            .expect("at least one partition");
        Ok(worst.min(profile.demand(s).clone()))
    })
}

/// `v^R(S) = value(S; R(S))`.
pub fn lpp_game_from_resource_game(instance: &LppInstance, resource: &CharacteristicGame) -> Result<CharacteristicGame> {
    if resource.n() != instance.n() {
        return Err(Error::Structure(format!(
            "resource game has {} players, instance has {}",
            resource.n(),
            instance.n()
        )));
    }
    let r = instance.stock();
    for s in resource.coalitions() {
        let amount = resource.worth(s);
        if amount.is_negative() || amount > r {
            return Err(Error::Domain(format!(
                "R({s}) = {} lies outside [0, r = {}]",
                format_rational(amount),
                format_rational(r)
            )));
        }
    }
    CharacteristicGame::from_fn(instance.n(), |s| value_of(instance, s, resource.worth(s)))
}

/// `v^opt`, the game of the optimistic resource game.
pub fn optimistic_game(instance: &LppInstance, profile: &DemandProfile) -> Result<CharacteristicGame> {
    lpp_game_from_resource_game(instance, &optimistic_resource_game(instance, profile))
}

/// `v^pes`, the game of the pessimistic resource game.
pub fn pessimistic_game(instance: &LppInstance, profile: &DemandProfile, cap: usize) -> Result<CharacteristicGame> {
    lpp_game_from_resource_game(instance, &pessimistic_resource_game(instance, profile, cap)?)
}

pub fn partition_function_game(
    instance: &LppInstance,
    profile: &DemandProfile,
    rule: &dyn AllocationRule,
    cap: usize,
) -> Result<PartitionFunctionGame> {
    let n = instance.n();
    check_cap(n, cap)?;
    let r = instance.stock();
    let partitions: Vec<Partition> = Partitions::of(instance.grand()).collect();
    let mut allocations = Vec::with_capacity(partitions.len());
    for p in &partitions {
        let z = rule.allocate(p, profile, r);
        let total: Rational = z.iter().sum();
        if z.len() != p.len() || z.iter().any(|v| v.is_negative()) || total > *r {
            return Err(Error::RuleViolation {
                rule: rule.name().to_string(),
                partition: p.to_string(),
                total: format_rational(&total),
                stock: format_rational(r),
            });
        }
        allocations.push(z);
    }
    let mut jobs: Vec<(Coalition, Rational)> = partitions
        .iter()
        .zip(&allocations)
        .flat_map(|(p, z)| p.blocks().iter().copied().zip(z.iter().cloned()))
        .collect();
    jobs.sort();
    jobs.dedup();
    let values: HashMap<(Coalition, Rational), Rational> = jobs
        .into_par_iter()
        .map(|(s, z)| value_of(instance, s, &z).map(|v| ((s, z), v)))
        .collect::<Result<_>>()?;
    let entries = partitions
        .into_iter()
        .zip(allocations)
        .map(|(p, z)| {
            let worths = p
                .blocks()
                .iter()
                .zip(z)
                .map(|(&s, z)| values[&(s, z)].clone())
                .collect();
            (p, worths)
        })
        .collect();
    Ok(PartitionFunctionGame::from_entries(n, rule.name().to_string(), entries))
}

/// `(v⁻, v⁺)`: per coalition, the least and greatest `V(S|P)` over the
/// partitions containing `S`.
pub fn pessimistic_and_optimistic_views(game: &PartitionFunctionGame) -> (CharacteristicGame, CharacteristicGame) {
    let n = game.n();
    let mut low: Vec<Option<Rational>> = vec![None; 1 << n];
    let mut high: Vec<Option<Rational>> = vec![None; 1 << n];
    for (p, worths) in game.entries() {
        for (b, w) in p.blocks().iter().zip(worths) {
            let i = b.index();
            if low[i].as_ref().is_none_or(|cur| w < cur) {
                low[i] = Some(w.clone());
            }
            if high[i].as_ref().is_none_or(|cur| w > cur) {
                high[i] = Some(w.clone());
            }
        }
    }
    let finish = |v: Vec<Option<Rational>>| {
        let worth = v.into_iter().map(|w| w.unwrap_or_else(Rational::zero)).collect();
        CharacteristicGame::new(n, worth).expect("dense")
    };
    (finish(low), finish(high))
}

/// `w(S) = max{E - Σ_{i∉S} d_i, 0}`.
pub fn bankruptcy_game(estate: &Rational, claims: &[Rational]) -> Result<CharacteristicGame> {
    if estate.is_negative() {
        return Err(Error::Domain("estate must be nonnegative".into()));
    }
    if claims.iter().any(|d| d.is_negative()) {
        return Err(Error::Domain("claims must be nonnegative".into()));
    }
    let total: Rational = claims.iter().sum();
    if total < *estate {
        return Err(Error::Domain(format!(
            "claims total {} is below the estate {}",
            format_rational(&total),
            format_rational(estate)
        )));
    }
    let n = claims.len();
    CharacteristicGame::from_fn(n, |s| {
        let outside: Rational = Coalition::grand(n).minus(s).players().map(|i| &claims[i]).sum();
        Ok(positive_part(estate - outside))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn bankruptcy_formula() {
        let claims = [int(4), int(5), int(6)];
        let w = bankruptcy_game(&int(10), &claims).unwrap();
        let c = Coalition::from_labels;
        assert_eq!(w.worth(c(&[1])), &int(0));
        assert_eq!(w.worth(c(&[1, 2])), &int(4));
        assert_eq!(w.worth(c(&[2, 3])), &int(6));
        assert_eq!(w.grand_worth(), &int(10));
        let zero = bankruptcy_game(&int(0), &claims).unwrap();
        assert!(zero.coalitions().iter().all(|&s| zero.worth(s).is_zero()));
        let additive = bankruptcy_game(&int(15), &claims).unwrap();
        assert_eq!(additive.worth(c(&[1, 3])), &int(10));
        assert!(matches!(bankruptcy_game(&int(16), &claims), Err(Error::Domain(_))));
    }

    #[test]
    fn game_json_round_trip() {
        let w = bankruptcy_game(&ratio(21, 2), &[int(4), int(5), int(6)]).unwrap();
        let json = w.to_json();
        let keys: Vec<&String> = json["v"].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["1", "2", "3", "12", "13", "23", "123"]);
        assert_eq!(json["v"]["123"], "21/2");
        assert_eq!(CharacteristicGame::from_json(&json).unwrap(), w);
    }

    #[test]
    fn from_entries_requires_total_map() {
        let c = Coalition::from_labels;
        let partial = vec![(c(&[1]), int(1)), (c(&[1, 2]), int(3))];
        assert!(CharacteristicGame::from_entries(2, partial).is_err());
        assert!(CharacteristicGame::new(1, vec![int(1), int(2)]).is_err());
    }

    #[test]
    fn rules_parse_by_name() {
        for rule in BuiltinRule::ALL {
            assert_eq!(rule.name().parse::<BuiltinRule>().unwrap(), rule);
        }
        assert!("random".parse::<BuiltinRule>().is_err());
    }

    #[test]
    fn builtin_rules_on_given_demands() {
        // d_1 = 7, d_2 = 7, d_12 = 5 with r = 5.
        let profile = DemandProfile::from_demands(2, vec![int(0), int(7), int(7), int(5)]).unwrap();
        let split = Partition::singletons(2);
        let r = int(5);
        let prop = BuiltinRule::DemandCappedProportional.allocate(&split, &profile, &r);
        assert_eq!(prop, vec![ratio(5, 2), ratio(5, 2)]);
        let opt = BuiltinRule::OptimisticEmbedded.allocate(&split, &profile, &r);
        assert_eq!(opt, vec![ratio(5, 2), ratio(5, 2)]);
        let pes = BuiltinRule::PessimisticEmbedded.allocate(&split, &profile, &r);
        assert_eq!(pes, vec![int(0), int(0)]);
        let whole = Partition::grand(2);
        for rule in BuiltinRule::ALL {
            assert_eq!(rule.allocate(&whole, &profile, &r), vec![int(5)]);
        }
    }

    #[test]
    fn characteristic_views_agree() {
        let w = bankruptcy_game(&int(10), &[int(4), int(5), int(6)]).unwrap();
        let v = PartitionFunctionGame::from_characteristic(&w, 10).unwrap();
        let (low, high) = pessimistic_and_optimistic_views(&v);
        assert_eq!(low, w);
        assert_eq!(high, w);
        assert_eq!(v.to_json()["V"]["12|{1,2}{3}"], "4");
    }
}
