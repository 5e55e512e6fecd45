//! Coalitions, partitions and the partition lattice.
//!
//! Players are 0-based internally and printed 1-based. A [`Coalition`] is a
//! bitmask, so `n` is limited to [`MAX_PLAYERS`].

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_PLAYERS: usize = 20;

/// Default limit on `n` for anything that walks all partitions.
/// Bell(10) = 115975.
pub const DEFAULT_PARTITION_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    pub fn grand(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(player: usize) -> Self {
        Coalition(1 << player)
    }

    pub fn from_players<I: IntoIterator<Item = usize>>(players: I) -> Self {
        Coalition(players.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    /// Builds a coalition from 1-based labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        Self::from_players(labels.iter().map(|l| l - 1))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, player: usize) -> bool {
        self.0 & (1 << player) != 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Self {
        Coalition(self.0 & other.0)
    }

    pub fn minus(self, other: Coalition) -> Self {
        Coalition(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Coalition) -> bool {
        self.0 & other.0 == 0
    }

    /// Lowest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order (0-based).
    pub fn players(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            Some(i as usize)
        })
    }

    /// All non-empty subsets, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut cur: u32 = 0;
        let mut done = full == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            cur = cur.wrapping_sub(full) & full;
            if cur == full {
                done = true;
            }
            Some(Coalition(cur))
        })
    }

    /// Member labels joined without a separator (`"13"`) while every label
    /// is a single digit; comma separated (`"1,10"`) for `n ≥ 10`.
    pub fn key(self, n: usize) -> String {
        let labels = self.players().map(|i| (i + 1).to_string());
        if n >= 10 {
            labels.collect::<Vec<_>>().join(",")
        } else {
            labels.collect()
        }
    }

    /// Inverse of [`Coalition::key`].
    pub fn parse_key(text: &str, n: usize) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("coalition key {text:?}: {why}"));
        let labels: Vec<usize> = if text.contains(',') || n >= 10 {
            text.split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| bad("not a label list")))
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("not a digit")))
                .collect::<Result<_>>()?
        };
        if labels.is_empty() {
            return Err(bad("empty"));
        }
        let mut mask = 0u32;
        for l in labels {
            if l == 0 || l > n {
                return Err(bad("label out of range"));
            }
            if mask & (1 << (l - 1)) != 0 {
                return Err(bad("repeated label"));
            }
            mask |= 1 << (l - 1);
        }
        Ok(Coalition(mask))
    }
}

impl fmt::Display for Coalition {
    /// Set notation with 1-based labels: `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.players().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

/// Pairwise disjoint non-empty blocks covering a ground set, sorted by
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Coalition>,
}

impl Partition {
    /// Validates and canonicalizes a partition of `ground`.
    pub fn new(mut blocks: Vec<Coalition>, ground: Coalition) -> Result<Self> {
        let mut seen = Coalition::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::Structure("partition has an empty block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::Structure(format!("block {b} overlaps another block")));
            }
            seen = seen.union(b);
        }
        if seen != ground {
            return Err(Error::Structure(format!(
                "blocks cover {seen}, expected {ground}"
            )));
        }
        blocks.sort_by_key(|b| b.first());
        Ok(Partition { blocks })
    }

    fn from_sorted(blocks: Vec<Coalition>) -> Self {
        Partition { blocks }
    }

    pub fn grand(n: usize) -> Self {
        Partition::from_sorted(vec![Coalition::grand(n)])
    }

    pub fn singletons(n: usize) -> Self {
        Partition::from_sorted((0..n).map(Coalition::singleton).collect())
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn ground(&self) -> Coalition {
        self.blocks.iter().fold(Coalition::EMPTY, |a, &b| a.union(b))
    }

    pub fn contains_block(&self, block: Coalition) -> bool {
        self.blocks.contains(&block)
    }

    /// `self` refines `coarser`: every block of `self` lies inside a block of
    /// `coarser`.
    pub fn is_refinement_of(&self, coarser: &Partition) -> Result<bool> {
        if self.ground() != coarser.ground() {
            return Err(Error::Structure(format!(
                "partitions of different ground sets: {} vs {}",
                self.ground(),
                coarser.ground()
            )));
        }
        Ok(self
            .blocks
            .iter()
            .all(|b| coarser.blocks.iter().any(|c| b.is_subset_of(*c))))
    }

    /// Parses the canonical text form `{1,2}{3}`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let bad = || Error::Parse(format!("partition text {text:?}"));
        let mut blocks = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(bad)?;
            let end = body.find('}').ok_or_else(bad)?;
            let labels: Vec<usize> = body[..end]
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            if labels.iter().any(|&l| l == 0 || l > n) {
                return Err(bad());
            }
            blocks.push(Coalition::from_labels(&labels));
            rest = body[end + 1..].trim_start();
        }
        Partition::new(blocks, Coalition::grand(n))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// `(S|P)`: a coalition together with a partition that has it as a block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmbeddedCoalition {
    coalition: Coalition,
    partition: Partition,
}

impl EmbeddedCoalition {
    pub fn new(coalition: Coalition, partition: Partition) -> Result<Self> {
        if !partition.contains_block(coalition) {
            return Err(Error::Structure(format!(
                "{coalition} is not a block of {partition}"
            )));
        }
        Ok(EmbeddedCoalition {
            coalition,
            partition,
        })
    }

    pub fn coalition(&self) -> Coalition {
        self.coalition
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `"12|{1,2}{3}"`.
    pub fn key(&self, n: usize) -> String {
        format!("{}|{}", self.coalition.key(n), self.partition)
    }
}

/// Restricted growth string enumeration of the partitions of a ground set.
/// Partitions come out in lexicographic order of their growth strings, so
/// the first is the one-block partition and the last is all singletons.
#[derive(Debug, Clone)]
pub struct Partitions {
    players: Vec<usize>,
    growth: Vec<usize>,
    maxima: Vec<usize>,
    done: bool,
}

impl Partitions {
    pub fn of(ground: Coalition) -> Self {
        let players: Vec<usize> = ground.players().collect();
        let k = players.len();
        Partitions {
            players,
            growth: vec![0; k],
            maxima: vec![0; k],
            done: false,
        }
    }

    fn current(&self) -> Partition {
        let blocks_count = self.growth.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Coalition::EMPTY; blocks_count];
        for (&p, &g) in self.players.iter().zip(&self.growth) {
            blocks[g] = blocks[g].union(Coalition::singleton(p));
        }
        Partition::from_sorted(blocks)
    }

    fn advance(&mut self) -> bool {
        let k = self.growth.len();
        for i in (1..k).rev() {
            if self.growth[i] <= self.maxima[i - 1] {
                self.growth[i] += 1;
                let m = self.maxima[i - 1].max(self.growth[i]);
                self.maxima[i] = m;
                for j in i + 1..k {
                    self.growth[j] = 0;
                    self.maxima[j] = m;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = self.current();
        if !self.advance() {
            self.done = true;
        }
        Some(out)
    }
}

/// All partitions of `{1..n}`, refusing `n` above `cap`.
pub fn enumerate_partitions(n: usize, cap: usize) -> Result<Partitions> {
    check_cap(n, cap)?;
    Ok(Partitions::of(Coalition::grand(n)))
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::PartitionCap { n, cap })
    } else {
        Ok(())
    }
}

/// Bell number by the triangle recurrence.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Partition {
        Partition::parse(text, n).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(3, 10).unwrap().count(), 5);
        assert_eq!(enumerate_partitions(4, 10).unwrap().count(), 15);
        let only: Vec<_> = enumerate_partitions(1, 10).unwrap().collect();
        assert_eq!(only, vec![Partition::grand(1)]);
        assert_eq!(Partitions::of(Coalition::EMPTY).count(), 1);
        for n in 0..=7 {
            assert_eq!(Partitions::of(Coalition::grand(n)).count() as u64, bell(n));
        }
        assert_eq!(bell(10), 115975);
    }

    #[test]
    fn enumeration_order_and_uniqueness() {
        let all: Vec<_> = enumerate_partitions(4, 10).unwrap().collect();
        assert_eq!(all.first(), Some(&Partition::grand(4)));
        assert_eq!(all.last(), Some(&Partition::singletons(4)));
        let unique: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn cap_refusal() {
        assert_eq!(
            enumerate_partitions(11, 10).err(),
            Some(Error::PartitionCap { n: 11, cap: 10 })
        );
    }

    #[test]
    fn refinement_examples() {
        let finest = p("{1}{2}{3}", 3);
        let mid = p("{1,2}{3}", 3);
        let other = p("{1,3}{2}", 3);
        assert!(finest.is_refinement_of(&mid).unwrap());
        assert!(mid.is_refinement_of(&mid).unwrap());
        assert!(!mid.is_refinement_of(&other).unwrap());
        assert!(mid.is_refinement_of(&p("{1}{2}", 2)).is_err());
    }

    #[test]
    fn partition_construction_checks() {
        let n = 3;
        let g = Coalition::grand(n);
        let c = Coalition::from_labels;
        assert!(Partition::new(vec![c(&[1, 2]), c(&[2, 3])], g).is_err());
        assert!(Partition::new(vec![c(&[1, 2])], g).is_err());
        assert!(Partition::new(vec![c(&[1, 2, 3]), Coalition::EMPTY], g).is_err());
        let q = Partition::new(vec![c(&[3]), c(&[1, 2])], g).unwrap();
        assert_eq!(q.to_string(), "{1,2}{3}");
        assert!(EmbeddedCoalition::new(c(&[1]), q.clone()).is_err());
        let e = EmbeddedCoalition::new(c(&[1, 2]), q).unwrap();
        assert_eq!(e.key(3), "12|{1,2}{3}");
    }

    #[test]
    fn coalition_keys_round_trip() {
        let c = Coalition::from_labels(&[1, 3]);
        assert_eq!(c.key(3), "13");
        assert_eq!(Coalition::parse_key("13", 3).unwrap(), c);
        let wide = Coalition::from_labels(&[1, 10]);
        assert_eq!(wide.key(10), "1,10");
        assert_eq!(Coalition::parse_key("1,10", 10).unwrap(), wide);
        assert!(Coalition::parse_key("14", 3).is_err());
        assert!(Coalition::parse_key("11", 3).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        let c = Coalition::from_labels(&[1, 3, 4]);
        let subs: Vec<_> = c.subsets().collect();
        assert_eq!(subs.len(), 7);
        assert!(subs.iter().all(|s| s.is_subset_of(c) && !s.is_empty()));
        assert_eq!(Coalition::EMPTY.subsets().count(), 0);
    }
}
