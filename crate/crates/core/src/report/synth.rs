//! Synthetic profiles with planted coherent clusters.
//!
//! Items `0..d1` form `J1`. A cluster with index `α` draws one `J1` score
//! set summing to `T = α - 1 + d1(d1-1)/2`, uniformly among all such sets.
//! Its voters then deal those scores to `J1`, and the complementary scores
//! to `J2`, in cyclically rotated orders over a seeded base arrangement, so
//! every item of a block sees every score of its block about equally often.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::parse::auto_labels;
use crate::error::{Error, Result};
use crate::rank::{Profile, Score};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedCluster {
    pub alpha: usize,
    pub t: u32,
    /// Row ids of the cluster's voters.
    pub ids: Vec<usize>,
    pub scores_j1: Vec<Score>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synthetic {
    pub profile: Profile,
    pub j1: Vec<usize>,
    pub planted: Vec<PlantedCluster>,
}

/// `counts[m][k][s]`: number of `k`-subsets of `0..m` summing to `s`.
struct SubsetCounts {
    max_sum: usize,
    k: usize,
    counts: Vec<u128>,
}

impl SubsetCounts {
    fn new(d: usize, k: usize) -> Self {
        let max_sum = d * (d - 1) / 2;
        let mut me = Self { max_sum, k, counts: vec![0; (d + 1) * (k + 1) * (max_sum + 1)] };
        *me.at(0, 0, 0) = 1;
        for m in 1..=d {
            for kk in 0..=k {
                for s in 0..=max_sum {
                    let mut c = me.get(m - 1, kk, s);
                    if kk > 0 && s >= m - 1 {
                        c = c.saturating_add(me.get(m - 1, kk - 1, s - (m - 1)));
                    }
                    *me.at(m, kk, s) = c;
                }
            }
        }
        me
    }

    fn idx(&self, m: usize, k: usize, s: usize) -> usize {
        (m * (self.k + 1) + k) * (self.max_sum + 1) + s
    }

    fn at(&mut self, m: usize, k: usize, s: usize) -> &mut u128 {
        let i = self.idx(m, k, s);
        &mut self.counts[i]
    }

    fn get(&self, m: usize, k: usize, s: usize) -> u128 {
        if s > self.max_sum {
            return 0;
        }
        self.counts[self.idx(m, k, s)]
    }

    /// Uniform `k`-subset of `0..d` with sum `s`, in increasing order.
    fn sample<R: Rng>(&self, d: usize, s: usize, rng: &mut R) -> Option<Vec<Score>> {
        let (mut k, mut s) = (self.k, s);
        let total = self.get(d, k, s);
        if total == 0 {
            return None;
        }
        let mut out = Vec::with_capacity(k);
        for m in (1..=d).rev() {
            if k == 0 {
                break;
            }
            let with = if s >= m - 1 { self.get(m - 1, k - 1, s - (m - 1)) } else { 0 };
            let without = self.get(m - 1, k, s);
            if rng.gen_range(0..with + without) < with {
                out.push((m - 1) as Score);
                k -= 1;
                s -= m - 1;
            }
        }
        out.reverse();
        Some(out)
    }
}

/// Builds a profile holding one planted cluster per `(alpha, size)` entry,
/// voters numbered consecutively in the order given.
pub fn generate_synthetic(d1: usize, d2: usize, clusters: &[(usize, usize)], seed: u64) -> Result<Synthetic> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::TrivialPartition { d1, d2 });
    }
    let d = d1 + d2;
    let slots = d1 * d2 + 1;
    let table = SubsetCounts::new(d, d1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<Score>> = Vec::new();
    let mut planted = Vec::with_capacity(clusters.len());
    for &(alpha, size) in clusters {
        if alpha == 0 || alpha > slots {
            return Err(Error::InfeasibleAlpha { alpha, slots });
        }
        let t = alpha - 1 + d1 * (d1 - 1) / 2;
        let s1 = table.sample(d, t, &mut rng).ok_or(Error::InfeasibleAlpha { alpha, slots })?;
        let s2: Vec<Score> = (0..d as Score).filter(|s| !s1.contains(s)).collect();
        let mut base1: Vec<usize> = (0..d1).collect();
        let mut base2: Vec<usize> = (d1..d).collect();
        base1.shuffle(&mut rng);
        base2.shuffle(&mut rng);
        let start = rows.len();
        for k in 0..size {
            let mut row = vec![0 as Score; d];
            for (m, &j) in base1.iter().enumerate() {
                row[j] = s1[(m + k) % d1];
            }
            for (m, &j) in base2.iter().enumerate() {
                row[j] = s2[(m + k) % d2];
            }
            rows.push(row);
        }
        planted.push(PlantedCluster { alpha, t: t as u32, ids: (start..rows.len()).collect(), scores_j1: s1 });
    }
    let profile = Profile::from_scores(auto_labels(d), rows)?;
    Ok(Synthetic { profile, j1: (0..d1).collect(), planted })
}

/// `count` ballots drawn uniformly from all permutations of `0..d`.
pub fn random_ballots(d: usize, count: usize, seed: u64) -> Vec<Vec<Score>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut row: Vec<Score> = (0..d as Score).collect();
            row.shuffle(&mut rng);
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        let t = SubsetCounts::new(10, 4);
        // 4-subsets of 0..10: 210 in all, one with the minimum sum 6
        let all: u128 = (0..=45).map(|s| t.get(10, 4, s)).sum();
        assert_eq!(all, 210);
        assert_eq!(t.get(10, 4, 6), 1);
        assert_eq!(t.get(10, 4, 8), 2);
        assert_eq!(t.get(10, 4, 5), 0);
    }

    #[test]
    fn planted_sums() {
        let syn = generate_synthetic(4, 6, &[(1, 12), (3, 10), (9, 11)], 7).unwrap();
        assert_eq!(syn.profile.n(), 33);
        for c in &syn.planted {
            assert_eq!(c.scores_j1.iter().map(|&s| s as u32).sum::<u32>(), c.t);
            for &i in &c.ids {
                let mut s: Vec<Score> = syn.j1.iter().map(|&j| syn.profile.row(i)[j]).collect();
                s.sort_unstable();
                assert_eq!(s, c.scores_j1);
            }
        }
        assert_eq!(syn.planted[0].scores_j1, vec![0, 1, 2, 3]);
        assert_eq!(syn.planted[1].ids, (12..22).collect::<Vec<_>>());
    }

    #[test]
    fn smallest_generator_case() {
        let syn = generate_synthetic(1, 2, &[(1, 2)], 0).unwrap();
        let rows: Vec<&[Score]> = syn.profile.rows().collect();
        assert_eq!(rows[0][0], 0);
        assert_eq!(rows[1][0], 0);
        assert_ne!(rows[0], rows[1]);
    }

    #[test]
    fn deterministic_and_validated() {
        let a = generate_synthetic(2, 3, &[(2, 10), (4, 10)], 42).unwrap();
        let b = generate_synthetic(2, 3, &[(2, 10), (4, 10)], 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(generate_synthetic(2, 3, &[(8, 5)], 0).unwrap_err(), Error::InfeasibleAlpha { alpha: 8, slots: 7 });
        assert_eq!(generate_synthetic(0, 3, &[(1, 5)], 0).unwrap_err(), Error::TrivialPartition { d1: 0, d2: 3 });
        assert_eq!(random_ballots(5, 3, 1), random_ballots(5, 3, 1));
    }
}
