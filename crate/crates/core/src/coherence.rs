//! First-axis cluster lattice, coherency of clusters, crossing index.
//!
//! With `d1 = |J1|` and `d2 = |J2|`, first-axis voter scores take at most
//! `d1 d2 + 1` values, evenly spaced by `4 / (d(d-1))` from `2 d1 d2 / (d(d-1))`
//! downwards. Cluster `α` holds the voters at the `α`-th value, which are
//! exactly the voters whose `J1` scores sum to `T = α - 1 + d1(d1-1)/2`.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rank::Profile;
use crate::tca::{factor_scores, profile_first_axis, profile_residual, TcaAxis, TcaOptions};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBounds {
    pub d1: usize,
    pub d2: usize,
    pub d: usize,
    pub max_clusters: usize,
    pub f_max: Rational,
    pub f_min: Rational,
    pub gap: Rational,
}

impl LatticeBounds {
    /// `d(d-1)`, the common denominator of lattice values.
    pub fn scale(&self) -> i128 {
        (self.d * (self.d - 1)) as i128
    }

    /// Lattice numerator over `d(d-1)` for cluster `alpha`.
    pub fn numerator(&self, alpha: usize) -> i128 {
        2 * (self.d1 * self.d2) as i128 - 4 * (alpha as i128 - 1)
    }

    pub fn value(&self, alpha: usize) -> Rational {
        Rational::new(self.numerator(alpha), self.scale())
    }

    /// `T` shared by the voters of cluster `alpha`.
    pub fn t_of(&self, alpha: usize) -> u32 {
        (alpha - 1 + self.d1 * (self.d1 - 1) / 2) as u32
    }
}

pub fn lattice_bounds(d1: usize, d2: usize) -> LatticeBounds {
    assert!(d1 >= 1 && d2 >= 1, "both blocks must be nonempty");
    let d = d1 + d2;
    let scale = (d * (d - 1)) as i128;
    let f_max = Rational::new(2 * (d1 * d2) as i128, scale);
    LatticeBounds { d1, d2, d, max_clusters: d1 * d2 + 1, f_max, f_min: -f_max, gap: Rational::new(4, scale) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub alpha: usize,
    /// Row ids, in profile order.
    pub voters: Vec<usize>,
    /// First-axis score times `d(d-1)`.
    pub f1_numerator: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    /// Nonempty clusters only, in increasing `alpha`.
    pub clusters: Vec<Cluster>,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
    pub bounds: LatticeBounds,
}

impl ClusterPartition {
    pub fn cluster(&self, alpha: usize) -> Option<&Cluster> {
        self.clusters.iter().find(|c| c.alpha == alpha)
    }

    pub fn sizes(&self) -> Vec<(usize, usize)> {
        self.clusters.iter().map(|c| (c.alpha, c.voters.len())).collect()
    }
}

/// Places each voter of `p` on the lattice of `axis`, the first axis of `p`.
pub fn partition_by_first_axis(p: &Profile, axis: &TcaAxis) -> Result<ClusterPartition> {
    let (j1, j2) = (axis.j1(), axis.j2());
    if j1.is_empty() || j2.is_empty() {
        return Err(Error::TrivialPartition { d1: j1.len(), d2: j2.len() });
    }
    let bounds = lattice_bounds(j1.len(), j2.len());
    let top = bounds.numerator(1);
    let base_t = bounds.t_of(1) as i128;
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); bounds.max_clusters];
    for i in 0..p.n() {
        let off = |numerator| Error::OffLattice { voter: p.row_id(i), numerator };
        let num = axis.f_scaled(i, bounds.scale()).ok_or_else(|| off(i128::MIN))?;
        if (top - num) % 4 != 0 || num > top || num < -top {
            return Err(off(num));
        }
        let alpha = ((top - num) / 4 + 1) as usize;
        // the same index must follow from the voter's J1 scores
        let t: i128 = j1.iter().map(|&j| p.row(i)[j] as i128).sum();
        if t - base_t + 1 != alpha as i128 {
            return Err(off(num));
        }
        slots[alpha - 1].push(p.row_id(i));
    }
    let clusters = slots
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .map(|(k, voters)| Cluster { alpha: k + 1, voters, f1_numerator: bounds.numerator(k + 1) })
        .collect();
    Ok(ClusterPartition { clusters, j1, j2, bounds })
}

/// Lattice of `p` under a given item split, `u = -1` on `j1`.
///
/// The split is oriented like a first axis, so when most voters rank `j1`
/// above its complement the two sides swap.
pub fn partition_by_split(p: &Profile, j1: &[usize]) -> Result<ClusterPartition> {
    let u: Vec<i8> = (0..p.d()).map(|j| if j1.contains(&j) { -1 } else { 1 }).collect();
    let axis = factor_scores(&profile_residual(p), &u)?;
    partition_by_first_axis(p, &axis)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherencyVerdict {
    pub alpha: usize,
    pub size: usize,
    pub coherent: bool,
    pub sub_delta: Rational,
    pub sub_f_nega: Rational,
    pub theoretical_f: Rational,
    /// First voter whose own-subprofile score differs from `theoretical_f`.
    pub witness: Option<usize>,
    /// `J1` chosen by the cluster's own first axis.
    pub sub_j1: Vec<usize>,
    /// Crossing index under the parent partition when coherent, under the
    /// cluster's own partition otherwise.
    pub cross: Rational,
}

/// Tests cluster `alpha` of `part` with default TCA options.
pub fn coherency_test(p: &Profile, part: &ClusterPartition, alpha: usize) -> Result<CoherencyVerdict> {
    coherency_test_with(p, part, alpha, &TcaOptions::default())
}

pub fn coherency_test_with(
    p: &Profile,
    part: &ClusterPartition,
    alpha: usize,
    opts: &TcaOptions,
) -> Result<CoherencyVerdict> {
    let cluster = part.cluster(alpha).ok_or(Error::EmptyCluster(alpha))?;
    let sub = p.select_ids(&cluster.voters)?;
    let axis = profile_first_axis(&sub, opts)?;
    let theoretical_f = part.bounds.value(alpha);
    let n = sub.n();
    let witness = (0..n).find(|&i| axis.f[i] != theoretical_f).map(|i| sub.row_id(i));
    let all_equal = axis.f[..n].iter().all(|f| *f == axis.f[0]);
    let sub_f_nega = axis.f_nega();
    let abs_nega = sub_f_nega.abs();
    let coherent = all_equal && axis.delta == abs_nega && abs_nega == theoretical_f;
    let sub_j1 = axis.j1();
    let cross = if coherent {
        crossing_index(axis.delta, part.bounds.d1, part.bounds.d2, part.bounds.d)?
    } else {
        let (d1, d) = (sub_j1.len(), sub.d());
        crossing_index(axis.delta, d1, d - d1, d)?
    };
    Ok(CoherencyVerdict {
        alpha,
        size: n,
        coherent,
        sub_delta: axis.delta,
        sub_f_nega,
        theoretical_f,
        witness,
        sub_j1,
        cross,
    })
}

/// Verdicts for every nonempty cluster, computed concurrently per `opts.execution`.
pub fn test_all(p: &Profile, part: &ClusterPartition, opts: &TcaOptions) -> Result<Vec<CoherencyVerdict>> {
    opts.execution
        .map(part.clusters.len(), |k| coherency_test_with(p, part, part.clusters[k].alpha, opts))
        .into_iter()
        .collect()
}

/// `1 - δ1 / (2 d1 d2 / (d(d-1)))`.
pub fn crossing_index(delta1: Rational, d1: usize, d2: usize, d: usize) -> Result<Rational> {
    let max = Rational::new(2 * (d1 * d2) as i128, (d * (d - 1)) as i128);
    if delta1 > max || delta1 < Rational::from_integer(0) {
        return Err(Error::OutOfRange { delta: delta1.to_string(), max: max.to_string() });
    }
    Ok(Rational::from_integer(1) - delta1 / max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::{encode_profile, Preference};
    use crate::tca::profile_first_axis;

    fn toy() -> Profile {
        let (c, b, a) = (0, 1, 2);
        let prefs = vec![
            Preference::new(vec![a, b, c]),
            Preference::new(vec![a, c, b]),
            Preference::new(vec![b, a, c]),
            Preference::new(vec![b, c, a]),
        ];
        encode_profile(&prefs, vec!["C".into(), "B".into(), "A".into()]).unwrap()
    }

    #[test]
    fn bounds() {
        let b = lattice_bounds(4, 6);
        assert_eq!(b.max_clusters, 25);
        assert_eq!(b.f_max, Rational::new(48, 90));
        assert_eq!(b.gap, Rational::new(4, 90));
        assert_eq!(b.f_min, -b.f_max);
        assert_eq!((b.f_max - b.f_min) / b.gap, Rational::from_integer(24));
        assert_eq!(b.value(8), Rational::new(20, 90));
        assert_eq!(b.t_of(7), 12);

        let b = lattice_bounds(1, 1);
        assert_eq!((b.max_clusters, b.f_max, b.gap), (2, Rational::from_integer(1), Rational::from_integer(2)));
        let b = lattice_bounds(5, 5);
        assert_eq!((b.max_clusters, b.f_max), (26, Rational::new(50, 90)));
    }

    #[test]
    fn toy_partition() {
        let p = toy();
        let axis = profile_first_axis(&p, &TcaOptions::default()).unwrap();
        let part = partition_by_first_axis(&p, &axis).unwrap();
        assert_eq!(part.j1, vec![0]);
        assert_eq!(part.sizes(), vec![(1, 2), (2, 2)]);
        assert_eq!(part.clusters[0].voters, vec![0, 2]);
        assert_eq!(part.clusters[0].f1_numerator, 4);
        assert_eq!(part.clusters[1].f1_numerator, 0);
    }

    #[test]
    fn toy_first_cluster_is_coherent() {
        let p = toy();
        let axis = profile_first_axis(&p, &TcaOptions::default()).unwrap();
        let part = partition_by_first_axis(&p, &axis).unwrap();
        let v = coherency_test(&p, &part, 1).unwrap();
        assert!(v.coherent);
        assert_eq!(v.sub_delta, Rational::new(2, 3));
        assert_eq!(v.sub_f_nega, Rational::new(-2, 3));
        assert_eq!(v.witness, None);
        assert_eq!(v.cross, Rational::from_integer(0));

        // f = 0 cannot be coherent
        let v2 = coherency_test(&p, &part, 2).unwrap();
        assert!(!v2.coherent);
        assert!(v2.sub_delta >= v2.sub_f_nega.abs());
        assert_eq!(coherency_test(&p, &part, 3).unwrap_err(), Error::EmptyCluster(3));

        let all = test_all(&p, &part, &TcaOptions::sequential()).unwrap();
        assert_eq!(all, vec![v, v2]);
    }

    #[test]
    fn identical_ballots_form_one_cluster() {
        let p = encode_profile(&[Preference::repeated(vec![2, 0, 3, 1], 5)], (0..4).map(|j| j.to_string()).collect())
            .unwrap();
        let axis = profile_first_axis(&p, &TcaOptions::default()).unwrap();
        let part = partition_by_first_axis(&p, &axis).unwrap();
        assert_eq!(part.clusters.len(), 1);
        assert_eq!(part.clusters[0].alpha, 1);
        assert_eq!(axis.f[0], part.bounds.f_max);
    }

    #[test]
    fn crossing() {
        let c = crossing_index(Rational::new(2354, 10000), 5, 5, 10).unwrap();
        assert!((crate::to_f64(&c) - 0.5763).abs() < 5e-5);
        for alpha in 1..=7 {
            let delta = Rational::new(48 - 4 * (alpha as i128 - 1), 90);
            assert_eq!(crossing_index(delta, 4, 6, 10).unwrap(), Rational::new(alpha as i128 - 1, 12));
        }
        assert_eq!(crossing_index(Rational::new(48, 90), 4, 6, 10).unwrap(), Rational::from_integer(0));
        assert!(matches!(crossing_index(Rational::new(49, 90), 4, 6, 10), Err(Error::OutOfRange { .. })));
    }
}
