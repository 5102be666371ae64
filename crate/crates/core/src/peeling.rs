//! Sequential extraction of coherent groups.
//!
//! Each iteration runs a first-axis TCA on what is left of the profile,
//! partitions the voters into lattice clusters, and keeps the longest run of
//! coherent clusters (in increasing `α`, empty slots skipped) as a group.
//! The loop stops when no run exists, when a group falls below the size
//! threshold, or after `max_iters` groups; the leftovers form the noisy group.

use crate::coherence::{partition_by_first_axis, test_all, CoherencyVerdict};
use crate::error::{Error, Result};
use crate::rank::{borda_scale, first_order_marginals, BordaScale, Profile};
use crate::shuffle::{marginals_census_check, shuffle_census, ShuffleCensus};
use crate::tca::{factor_scores, profile_first_axis, profile_residual, TcaOptions};
use crate::Rational;

/// One coherent cluster inside a group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCluster {
    pub alpha: usize,
    pub voters: Vec<usize>,
    pub delta1: Rational,
    pub cross: Rational,
    /// Common `J1` score sum of the cluster's voters.
    pub t: u32,
    pub census: ShuffleCensus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentGroup {
    /// 1-based extraction order.
    pub index: usize,
    pub clusters: Vec<GroupCluster>,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
    pub items: Vec<String>,
    pub beta: BordaScale,
    /// Item scores on the parent first axis, restricted to the group.
    pub g1: Vec<Rational>,
    pub delta1: Rational,
    pub cross: Rational,
    /// Dispersion of the group's own first axis, for comparison with `delta1`.
    pub own_delta1: Rational,
    pub size: usize,
}

impl CoherentGroup {
    pub fn voters(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.clusters.iter().flat_map(|c| c.voters.iter().copied()).collect();
        ids.sort_unstable();
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Group { index: usize, size: usize },
    /// The first nonempty cluster was incoherent.
    NoCoherentPrefix,
    /// A group was found but is smaller than the threshold.
    BelowThreshold { size: usize },
}

/// What happened in one peeling iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub iteration: usize,
    pub voters_in: usize,
    pub j1: Vec<usize>,
    pub delta1: Rational,
    pub verdicts: Vec<CoherencyVerdict>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeelResult {
    pub n: usize,
    pub groups: Vec<CoherentGroup>,
    /// Row ids, sorted.
    pub noisy: Vec<usize>,
    pub trace: Vec<IterationTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeelOptions {
    pub min_group_frac: Rational,
    pub max_iters: usize,
    pub tca: TcaOptions,
}

impl Default for PeelOptions {
    fn default() -> Self {
        Self { min_group_frac: Rational::new(1, 100), max_iters: 20, tca: TcaOptions::default() }
    }
}

/// Result of one extraction step.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub group: CoherentGroup,
    pub remainder: Option<Profile>,
    pub trace: IterationTrace,
}

/// Extracts the first coherent group of `p`.
///
/// On `Err(NoCoherentPrefix)` the whole of `p` belongs to the noisy pool;
/// [`extract_traced`] also returns the trace in that case.
pub fn extract_coherent_group(p: &Profile, opts: &TcaOptions) -> Result<Extraction> {
    let (ext, _) = extract_traced(p, opts, 1, 1)?;
    ext.ok_or(Error::NoCoherentPrefix)
}

/// Like [`extract_coherent_group`], with the trace returned even when no group exists.
pub fn extract_traced(
    p: &Profile,
    opts: &TcaOptions,
    iteration: usize,
    index: usize,
) -> Result<(Option<Extraction>, IterationTrace)> {
    let axis = profile_first_axis(p, opts)?;
    let part = partition_by_first_axis(p, &axis)?;
    let verdicts = test_all(p, &part, opts)?;
    let prefix = verdicts.iter().take_while(|v| v.coherent).count();
    let mut trace = IterationTrace {
        iteration,
        voters_in: p.n(),
        j1: part.j1.clone(),
        delta1: axis.delta,
        verdicts,
        outcome: Outcome::NoCoherentPrefix,
    };
    if prefix == 0 {
        return Ok((None, trace));
    }

    let mut clusters = Vec::with_capacity(prefix);
    for (cluster, verdict) in part.clusters.iter().zip(&trace.verdicts).take(prefix) {
        let census = shuffle_census(p, &cluster.voters, &part.j1).with_alpha(cluster.alpha);
        let sub = p.select_ids(&cluster.voters)?;
        marginals_census_check(&first_order_marginals(&sub), &census, &part.j1)?;
        clusters.push(GroupCluster {
            alpha: cluster.alpha,
            voters: cluster.voters.clone(),
            delta1: verdict.sub_delta,
            cross: verdict.cross,
            t: part.bounds.t_of(cluster.alpha),
            census,
        });
    }
    let ids: Vec<usize> = clusters.iter().flat_map(|c| c.voters.iter().copied()).collect();
    let members = p.select_ids(&ids)?;

    // group scores on the parent partition
    let group_axis = factor_scores(&profile_residual(&members), &axis.u)?;
    let own = profile_first_axis(&members, opts)?;
    let b = &part.bounds;
    let cross = crate::coherence::crossing_index(group_axis.delta, b.d1, b.d2, b.d)?;
    let group = CoherentGroup {
        index,
        clusters,
        j1: part.j1.clone(),
        j2: part.j2.clone(),
        items: p.items().to_vec(),
        beta: borda_scale(&members),
        g1: group_axis.g.clone(),
        delta1: group_axis.delta,
        cross,
        own_delta1: own.delta,
        size: members.n(),
    };
    trace.outcome = Outcome::Group { index, size: group.size };
    let remainder = p.without_ids(&ids);
    Ok((Some(Extraction { group, remainder, trace: trace.clone() }), trace))
}

/// Peels coherent groups off `p` until one of the stopping rules fires.
pub fn peel(p: &Profile, opts: &PeelOptions) -> Result<PeelResult> {
    let n = p.n();
    let threshold = opts.min_group_frac * Rational::from_integer(n as i128);
    let mut groups = Vec::new();
    let mut trace = Vec::new();
    let mut noisy = Vec::new();
    let mut current = Some(p.clone());
    let mut iteration = 0;
    while let Some(rest) = current.take() {
        if groups.len() >= opts.max_iters {
            noisy.extend_from_slice(rest.row_ids());
            break;
        }
        iteration += 1;
        let (ext, mut step) = extract_traced(&rest, &opts.tca, iteration, groups.len() + 1)?;
        let Some(ext) = ext else {
            trace.push(step);
            noisy.extend_from_slice(rest.row_ids());
            break;
        };
        if Rational::from_integer(ext.group.size as i128) < threshold {
            step.outcome = Outcome::BelowThreshold { size: ext.group.size };
            trace.push(step);
            noisy.extend_from_slice(rest.row_ids());
            break;
        }
        trace.push(step);
        groups.push(ext.group);
        current = ext.remainder;
    }
    noisy.sort_unstable();
    Ok(PeelResult { n, groups, noisy, trace })
}

/// Reporting view of a group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub index: usize,
    pub size: usize,
    /// `(item, β, stderr)` sorted by decreasing `β`, ties by item index.
    pub scale: Vec<(usize, Rational, f64)>,
    pub g1: Vec<Rational>,
    /// Items grouped into buckets of overlapping 95% intervals, best first.
    pub buckets: Vec<Vec<usize>>,
    pub delta1: Rational,
    pub cross: Rational,
    /// `(α, size, δ1, T, Cross)` per cluster.
    pub roster: Vec<(usize, usize, Rational, u32, Rational)>,
}

impl GroupSummary {
    /// `a ≻ {b,c} ≻ d` using the given labels.
    pub fn bucket_string(&self, items: &[String]) -> String {
        self.buckets
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|&j| items[j].as_str()).collect();
                if names.len() == 1 {
                    names[0].to_string()
                } else {
                    format!("{{{}}}", names.join(","))
                }
            })
            .collect::<Vec<_>>()
            .join(" ≻ ")
    }
}

pub fn group_summary(g: &CoherentGroup) -> GroupSummary {
    let d = g.beta.beta.len();
    let mut scale: Vec<(usize, Rational, f64)> =
        (0..d).map(|j| (j, g.beta.beta[j], g.beta.stderr[j])).collect();
    scale.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    GroupSummary {
        index: g.index,
        size: g.size,
        buckets: bucket_ranking(&scale),
        scale,
        g1: g.g1.clone(),
        delta1: g.delta1,
        cross: g.cross,
        roster: g.clusters.iter().map(|c| (c.alpha, c.voters.len(), c.delta1, c.t, c.cross)).collect(),
    }
}

/// Merges neighbours of a decreasing scale whose `β ± 1.96 se` intervals
/// overlap, transitively.
pub fn bucket_ranking(scale: &[(usize, Rational, f64)]) -> Vec<Vec<usize>> {
    const Z: f64 = 1.96;
    let mut buckets: Vec<Vec<usize>> = Vec::new();
    let mut floor = f64::INFINITY;
    for &(j, beta, se) in scale {
        let b = crate::to_f64(&beta);
        match buckets.last_mut() {
            Some(last) if b + Z * se >= floor => last.push(j),
            _ => {
                buckets.push(vec![j]);
                floor = f64::INFINITY;
            }
        }
        floor = floor.min(b - Z * se);
    }
    buckets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::{encode_profile, Preference};

    fn balanced_cluster() -> Profile {
        // J1 = {0} always last; J2 = {1,2} in both orders
        encode_profile(
            &[Preference::repeated(vec![1, 2, 0], 3), Preference::repeated(vec![2, 1, 0], 3)],
            vec!["x".into(), "y".into(), "z".into()],
        )
        .unwrap()
    }

    #[test]
    fn single_cluster_profile_is_one_group() {
        let p = balanced_cluster();
        let ext = extract_coherent_group(&p, &TcaOptions::default()).unwrap();
        assert!(ext.remainder.is_none());
        let g = &ext.group;
        assert_eq!(g.size, 6);
        assert_eq!(g.j1, vec![0]);
        assert_eq!(g.clusters.len(), 1);
        assert_eq!(g.delta1, Rational::new(2, 3));
        assert_eq!(g.cross, Rational::from_integer(0));
        assert_eq!(g.own_delta1, g.delta1);
        // affine in the Borda scale
        for j in 0..3 {
            assert_eq!(g.g1[j], Rational::new(2, 3 - 1) * g.beta.beta[j] - Rational::from_integer(1));
        }

        let res = peel(&p, &PeelOptions::default()).unwrap();
        assert_eq!(res.groups.len(), 1);
        assert!(res.noisy.is_empty());
        assert_eq!(res.trace.len(), 1);
    }

    #[test]
    fn small_groups_fall_into_noise() {
        let p = encode_profile(
            &[
                Preference::new(vec![0, 1, 2]),
                Preference::new(vec![1, 2, 0]),
                Preference::new(vec![2, 0, 1]),
                Preference::new(vec![0, 2, 1]),
            ],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        // the two ballots ranking b last form a balanced cluster; the rest are singletons
        let opts = PeelOptions { min_group_frac: Rational::new(1, 2), ..Default::default() };
        let res = peel(&p, &opts).unwrap();
        assert_eq!(res.groups.len(), 1);
        assert_eq!(res.groups[0].voters(), vec![2, 3]);
        assert_eq!(res.groups[0].j1, vec![1]);
        assert_eq!(res.noisy, vec![0, 1]);
        assert_eq!(res.trace[1].outcome, Outcome::BelowThreshold { size: 1 });
    }

    #[test]
    fn threshold_and_iteration_cap() {
        let p = balanced_cluster();
        let strict = PeelOptions { min_group_frac: Rational::from_integer(1), ..Default::default() };
        let res = peel(&p, &strict).unwrap();
        assert_eq!(res.groups.len(), 1, "size equal to the threshold is kept");
        let capped = PeelOptions { max_iters: 0, ..Default::default() };
        let res = peel(&p, &capped).unwrap();
        assert!(res.groups.is_empty());
        assert_eq!(res.noisy.len(), 6);
        assert!(res.trace.is_empty());
    }

    #[test]
    fn buckets_merge_transitively() {
        let r = |x: i128| Rational::new(x, 10);
        let scale = vec![(0, r(80), 0.1), (1, r(60), 0.5), (2, r(45), 0.3), (3, r(20), 0.1), (4, r(19), 0.1)];
        assert_eq!(bucket_ranking(&scale), vec![vec![0], vec![1, 2], vec![3, 4]]);
        let s = GroupSummary {
            index: 1,
            size: 1,
            scale: scale.clone(),
            g1: vec![],
            buckets: bucket_ranking(&scale),
            delta1: r(0),
            cross: r(0),
            roster: vec![],
        };
        let names: Vec<String> = "abcde".chars().map(String::from).collect();
        assert_eq!(s.bucket_string(&names), "a ≻ {b,c} ≻ {d,e}");
    }
}
