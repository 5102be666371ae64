//! Riffle-shuffle types relative to an item partition `(J1, J2)`.
//!
//! A ballot that gives `J1` exactly the scores `{0, …, d1-1}` did only the
//! first step of a riffle shuffle. Any other multiset of `J1` scores records
//! which scores crossed between the blocks; its sum `T` measures how much.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rank::{MarginalsTable, Profile, Score};

/// The multiset of scores a voter gives to `J1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShuffleType {
    pub scores_j1: Vec<Score>,
    pub t: u32,
    /// Scores in `scores_j1` outside `{0, …, d1-1}`.
    pub crossed: Vec<Score>,
}

impl ShuffleType {
    /// Scores given to `J2`, the complement of `scores_j1` in `0..d`.
    pub fn scores_j2(&self, d: usize) -> Vec<Score> {
        (0..d as Score).filter(|s| !self.scores_j1.contains(s)).collect()
    }

    /// `{0,1,2,5}` style rendering.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.scores_j1.iter().map(|s| s.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Inclusive range of `T` for a block of `d1` items out of `d`.
pub fn t_bounds(d1: usize, d: usize) -> (u32, u32) {
    let d2 = d - d1;
    ((d1 * (d1 - 1) / 2) as u32, (d1 * (d2 + d - 1) / 2) as u32)
}

/// Shuffle type of one score row. `j1` must be a nonempty proper subset of the items.
pub fn shuffle_type(row: &[Score], j1: &[usize]) -> ShuffleType {
    assert!(!j1.is_empty() && j1.len() < row.len(), "J1 must be a nonempty proper subset");
    let d1 = j1.len() as Score;
    let mut scores_j1: Vec<Score> = j1.iter().map(|&j| row[j]).collect();
    scores_j1.sort_unstable();
    let t = scores_j1.iter().map(|&s| s as u32).sum();
    let crossed = scores_j1.iter().copied().filter(|&s| s >= d1).collect();
    ShuffleType { scores_j1, t, crossed }
}

/// Counts of shuffle types over a set of voters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleCensus {
    /// Ordered by `T`, then by the sorted multiset.
    pub entries: Vec<(ShuffleType, u64)>,
    pub cluster_alpha: Option<usize>,
    pub total: u64,
}

impl ShuffleCensus {
    pub fn count_of(&self, scores_j1: &[Score]) -> u64 {
        let mut key = scores_j1.to_vec();
        key.sort_unstable();
        self.entries.iter().find(|(ty, _)| ty.scores_j1 == key).map_or(0, |(_, c)| *c)
    }

    pub fn distinct_t(&self) -> Vec<u32> {
        let mut ts: Vec<u32> = self.entries.iter().map(|(ty, _)| ty.t).collect();
        ts.dedup();
        ts
    }

    pub fn with_alpha(mut self, alpha: usize) -> Self {
        self.cluster_alpha = Some(alpha);
        self
    }
}

/// Tabulates the shuffle types of the voters with the given ids.
pub fn shuffle_census(p: &Profile, voters: &[usize], j1: &[usize]) -> ShuffleCensus {
    let wanted: std::collections::HashSet<usize> = voters.iter().copied().collect();
    let mut counts: BTreeMap<(u32, Vec<Score>), (ShuffleType, u64)> = BTreeMap::new();
    for i in 0..p.n() {
        if !wanted.contains(&p.row_id(i)) {
            continue;
        }
        let ty = shuffle_type(p.row(i), j1);
        counts.entry((ty.t, ty.scores_j1.clone())).or_insert((ty, 0)).1 += 1;
    }
    let entries: Vec<(ShuffleType, u64)> = counts.into_values().collect();
    let total = entries.iter().map(|(_, c)| c).sum();
    ShuffleCensus { entries, cluster_alpha: None, total }
}

/// Per-score comparison between a census and the marginals of the same voters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// `(score, voters whose J1 multiset contains it, Σ_{j∈J1} M(score, j))`.
    pub per_score: Vec<(usize, u64, u64)>,
}

/// Checks that, for every score `s`, the number of voters whose `J1` scores
/// contain `s` equals `Σ_{j∈J1} M(s, j)`.
pub fn marginals_census_check(
    m: &MarginalsTable,
    census: &ShuffleCensus,
    j1: &[usize],
) -> Result<ConsistencyReport> {
    let mut per_score = Vec::with_capacity(m.d());
    for s in 0..m.d() {
        let from_census: u64 = census
            .entries
            .iter()
            .filter(|(ty, _)| ty.scores_j1.contains(&(s as Score)))
            .map(|(_, c)| c)
            .sum();
        let from_marginals: u64 = j1.iter().map(|&j| m.get(s, j)).sum();
        if from_census != from_marginals {
            return Err(Error::Inconsistent { score: s, census: from_census, marginals: from_marginals });
        }
        per_score.push((s, from_census, from_marginals));
    }
    Ok(ConsistencyReport { per_score })
}
