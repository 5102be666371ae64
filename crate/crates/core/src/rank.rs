//! Borda coding of linear orders and the tables derived from it.
//!
//! A ballot ranking `d` items becomes a row of Borda scores: the item in
//! position `k` (0-based, most preferred first) scores `d - 1 - k`, so each
//! row is a permutation of `0..d`. Everything downstream consumes the score
//! matrix `R`, its reverse `R̄ = (d-1) - R`, the `nega` row (column sums of
//! `R̄`) and the first-order marginals.

use crate::error::{Error, Result};
use crate::Rational;

/// Borda score of one item on one ballot.
pub type Score = u16;

/// A complete ballot, most-preferred item first, with a repetition count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preference {
    pub ordering: Vec<usize>,
    pub multiplicity: u32,
}

impl Preference {
    pub fn new(ordering: Vec<usize>) -> Self {
        Self { ordering, multiplicity: 1 }
    }

    pub fn repeated(ordering: Vec<usize>, multiplicity: u32) -> Self {
        Self { ordering, multiplicity }
    }
}

/// The voting profile: an `n x d` matrix of Borda scores.
///
/// Rows carry stable voter identifiers that survive subsetting, so a voter
/// peeled off deep in the analysis can still be named by its input position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    items: Vec<String>,
    scores: Vec<Score>,
    row_ids: Vec<usize>,
}

fn is_permutation(row: &[Score]) -> bool {
    let d = row.len();
    let mut seen = vec![false; d];
    for &s in row {
        let s = s as usize;
        if s >= d || seen[s] {
            return false;
        }
        seen[s] = true;
    }
    true
}

impl Profile {
    /// Builds a profile from score rows, numbering voters `0..n`.
    pub fn from_scores(items: Vec<String>, rows: Vec<Vec<Score>>) -> Result<Self> {
        let ids = (0..rows.len()).collect();
        Self::from_scores_with_ids(items, rows, ids)
    }

    pub fn from_scores_with_ids(
        items: Vec<String>,
        rows: Vec<Vec<Score>>,
        row_ids: Vec<usize>,
    ) -> Result<Self> {
        let d = items.len();
        if d < 2 {
            return Err(Error::TooFewItems(d));
        }
        if rows.is_empty() {
            return Err(Error::EmptyProfile);
        }
        assert_eq!(rows.len(), row_ids.len(), "one id per row");
        let mut scores = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: row.len() });
            }
            if !is_permutation(row) {
                return Err(Error::InvalidBallot { row: i, d });
            }
            scores.extend_from_slice(row);
        }
        Ok(Self { items, scores, row_ids })
    }

    pub fn n(&self) -> usize {
        self.row_ids.len()
    }

    pub fn d(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn row(&self, i: usize) -> &[Score] {
        let d = self.d();
        &self.scores[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Score]> + '_ {
        self.scores.chunks_exact(self.d())
    }

    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    pub fn row_id(&self, i: usize) -> usize {
        self.row_ids[i]
    }

    /// Recovers the ordering of ballot `i`, most-preferred item first.
    pub fn ordering(&self, i: usize) -> Vec<usize> {
        let row = self.row(i);
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by(|&x, &y| row[y].cmp(&row[x]));
        order
    }

    /// Ballot `i` written as concatenated item labels, e.g. `CAEBD`.
    pub fn ordering_label(&self, i: usize) -> String {
        self.ordering(i).into_iter().map(|j| self.items[j].as_str()).collect()
    }

    /// Sub-profile of the rows at the given positions, keeping their ids.
    pub fn select(&self, positions: &[usize]) -> Result<Profile> {
        if positions.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let d = self.d();
        let mut scores = Vec::with_capacity(positions.len() * d);
        let mut row_ids = Vec::with_capacity(positions.len());
        for &p in positions {
            scores.extend_from_slice(self.row(p));
            row_ids.push(self.row_ids[p]);
        }
        Ok(Profile { items: self.items.clone(), scores, row_ids })
    }

    /// Sub-profile of the voters with the given ids, in profile order.
    pub fn select_ids(&self, ids: &[usize]) -> Result<Profile> {
        let wanted: std::collections::HashSet<usize> = ids.iter().copied().collect();
        let positions: Vec<usize> =
            (0..self.n()).filter(|&i| wanted.contains(&self.row_ids[i])).collect();
        self.select(&positions)
    }

    /// Rows whose ids are not in `ids`; `None` when nothing remains.
    pub fn without_ids(&self, ids: &[usize]) -> Option<Profile> {
        let drop: std::collections::HashSet<usize> = ids.iter().copied().collect();
        let positions: Vec<usize> =
            (0..self.n()).filter(|&i| !drop.contains(&self.row_ids[i])).collect();
        self.select(&positions).ok()
    }

    /// Reorders the item columns: new column `k` is old column `order[k]`.
    pub fn reorder_items(&self, order: &[usize]) -> Profile {
        assert_eq!(order.len(), self.d());
        let items = order.iter().map(|&j| self.items[j].clone()).collect();
        let mut scores = Vec::with_capacity(self.scores.len());
        for row in self.rows() {
            scores.extend(order.iter().map(|&j| row[j]));
        }
        Profile { items, scores, row_ids: self.row_ids.clone() }
    }

    /// Concatenates two profiles over the same items. Ids of `other` are
    /// shifted past the largest id of `self`.
    pub fn concat(&self, other: &Profile) -> Result<Profile> {
        if self.items != other.items {
            return Err(Error::DimensionMismatch { expected: self.d(), found: other.d() });
        }
        let offset = self.row_ids.iter().max().map_or(0, |m| m + 1);
        let mut scores = self.scores.clone();
        scores.extend_from_slice(&other.scores);
        let mut row_ids = self.row_ids.clone();
        row_ids.extend(other.row_ids.iter().map(|id| id + offset));
        Ok(Profile { items: self.items.clone(), scores, row_ids })
    }
}

/// Expands ballots (with multiplicity) into a Borda score profile.
pub fn encode_profile(prefs: &[Preference], items: Vec<String>) -> Result<Profile> {
    let d = items.len();
    if prefs.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let mut rows = Vec::new();
    for (idx, pref) in prefs.iter().enumerate() {
        if pref.ordering.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: pref.ordering.len() });
        }
        let mut row = vec![Score::MAX; d];
        for (pos, &item) in pref.ordering.iter().enumerate() {
            if item >= d || row[item] != Score::MAX {
                return Err(Error::InvalidBallot { row: idx, d });
            }
            row[item] = (d - 1 - pos) as Score;
        }
        for _ in 0..pref.multiplicity {
            rows.push(row.clone());
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyProfile);
    }
    Profile::from_scores(items, rows)
}

/// `R` together with the `nega` row and the grand total of `R_nega`.
#[derive(Debug, Clone)]
pub struct NegaTable {
    pub profile: Profile,
    pub nega: Vec<u64>,
    /// Grand total `n d (d-1)` of the stacked table.
    pub t: u64,
}

/// Reverse scores `(d-1) - r_ij`, row-major.
pub fn reverse_scores(p: &Profile) -> Vec<Score> {
    let top = (p.d() - 1) as Score;
    p.rows().flatten().map(|&r| top - r).collect()
}

pub fn reverse_and_nega(p: &Profile) -> NegaTable {
    let d = p.d();
    let mut nega = vec![0u64; d];
    let top = (d - 1) as u64;
    for row in p.rows() {
        for (acc, &r) in nega.iter_mut().zip(row) {
            *acc += top - r as u64;
        }
    }
    let n = p.n() as u64;
    NegaTable { profile: p.clone(), nega, t: n * d as u64 * top }
}

/// Per-item mean Borda score and its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct BordaScale {
    pub beta: Vec<Rational>,
    pub stderr: Vec<f64>,
}

impl BordaScale {
    pub fn beta_f64(&self) -> Vec<f64> {
        self.beta.iter().map(crate::to_f64).collect()
    }

    /// Reverse scale `β̄ = (d-1) - β`.
    pub fn reverse(&self) -> Vec<Rational> {
        let top = Rational::from_integer(self.beta.len() as i128 - 1);
        self.beta.iter().map(|b| top - b).collect()
    }
}

/// Column means of `R`; standard errors use the `n-1` sample deviation over `sqrt(n)`.
pub fn borda_scale(p: &Profile) -> BordaScale {
    let d = p.d();
    let n = p.n();
    let mut sums = vec![0i128; d];
    let mut sq = vec![0i128; d];
    for row in p.rows() {
        for j in 0..d {
            let r = row[j] as i128;
            sums[j] += r;
            sq[j] += r * r;
        }
    }
    let beta = sums.iter().map(|&s| Rational::new(s, n as i128)).collect();
    let stderr = (0..d)
        .map(|j| {
            if n < 2 {
                return 0.0;
            }
            // (Σx² - (Σx)²/n) / (n-1), kept integral until the final division
            let nn = n as i128;
            let ss = sq[j] * nn - sums[j] * sums[j];
            let var = ss as f64 / (nn * (nn - 1)) as f64;
            (var / n as f64).sqrt()
        })
        .collect();
    BordaScale { beta, stderr }
}

/// `d x d` counts: entry `(s, j)` is the number of voters giving item `j` score `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalsTable {
    d: usize,
    counts: Vec<u64>,
}

impl MarginalsTable {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, score: usize, item: usize) -> u64 {
        self.counts[score * self.d + item]
    }

    pub fn score_row(&self, score: usize) -> &[u64] {
        &self.counts[score * self.d..(score + 1) * self.d]
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.d).map(|s| self.score_row(s).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.d).map(|j| (0..self.d).map(|s| self.get(s, j)).sum()).collect()
    }

    /// Borda scale recovered from the marginals, `Σ_s s M(s,j) / n`.
    pub fn beta(&self) -> Vec<Rational> {
        let n: u64 = self.score_row(0).iter().sum();
        (0..self.d)
            .map(|j| {
                let num: u64 = (0..self.d).map(|s| s as u64 * self.get(s, j)).sum();
                Rational::new(num as i128, n as i128)
            })
            .collect()
    }
}

pub fn first_order_marginals(p: &Profile) -> MarginalsTable {
    let d = p.d();
    let mut counts = vec![0u64; d * d];
    for row in p.rows() {
        for (j, &r) in row.iter().enumerate() {
            counts[r as usize * d + j] += 1;
        }
    }
    MarginalsTable { d, counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    /// Ballots over items (C, B, A) = indices (0, 1, 2).
    fn toy() -> Profile {
        let (c, b, a) = (0, 1, 2);
        let prefs = vec![
            Preference::new(vec![a, b, c]),
            Preference::new(vec![a, c, b]),
            Preference::new(vec![b, a, c]),
            Preference::new(vec![b, c, a]),
        ];
        encode_profile(&prefs, labels("CBA")).unwrap()
    }

    #[test]
    fn toy_rows() {
        let p = toy();
        let rows: Vec<Vec<Score>> = p.rows().map(|r| r.to_vec()).collect();
        assert_eq!(rows, vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 2, 1], vec![1, 2, 0]]);
    }

    #[test]
    fn toy_tables() {
        let p = toy();
        let nt = reverse_and_nega(&p);
        assert_eq!(nt.nega, vec![6, 3, 3]);
        assert_eq!(nt.t, 24);
        let bs = borda_scale(&p);
        assert_eq!(
            bs.beta,
            vec![Rational::new(1, 2), Rational::new(5, 4), Rational::new(5, 4)]
        );
        assert_eq!(bs.reverse(), vec![Rational::new(3, 2), Rational::new(3, 4), Rational::new(3, 4)]);
        let m = first_order_marginals(&p);
        assert_eq!(m.score_row(0), &[2, 1, 1]);
        assert_eq!(m.score_row(1), &[2, 1, 1]);
        assert_eq!(m.score_row(2), &[0, 2, 2]);
        assert_eq!(m.beta(), bs.beta);
    }

    #[test]
    fn smallest_ballot() {
        let p = encode_profile(&[Preference::new(vec![0, 1])], labels("AB")).unwrap();
        assert_eq!(p.row(0), &[1, 0]);
        let nt = reverse_and_nega(&p);
        assert_eq!(nt.nega, vec![0, 1]);
        let m = first_order_marginals(&p);
        assert_eq!(m.score_row(0), &[0, 1]);
        assert_eq!(m.score_row(1), &[1, 0]);
    }

    #[test]
    fn repeated_item_is_invalid() {
        let err = encode_profile(
            &[Preference::new(vec![0, 1, 2]), Preference::new(vec![0, 0, 1])],
            labels("ABC"),
        )
        .unwrap_err();
        assert_eq!(err, Error::InvalidBallot { row: 1, d: 3 });
        assert_eq!(encode_profile(&[], labels("AB")).unwrap_err(), Error::EmptyProfile);
    }

    #[test]
    fn multiplicity_expands() {
        let p = encode_profile(&[Preference::repeated(vec![2, 0, 1], 3)], labels("ABC")).unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.row_ids(), &[0, 1, 2]);
        assert!(p.rows().all(|r| r == [1, 0, 2]));
        assert_eq!(p.ordering(2), vec![2, 0, 1]);
        assert_eq!(p.ordering_label(0), "CAB");
    }

    #[test]
    fn identical_ballots_have_zero_stderr() {
        let p = encode_profile(&[Preference::repeated(vec![1, 2, 0, 3], 5)], labels("ABCD")).unwrap();
        let bs = borda_scale(&p);
        assert_eq!(bs.beta, p.row(0).iter().map(|&r| Rational::from_integer(r as i128)).collect::<Vec<_>>());
        assert!(bs.stderr.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn stderr_matches_two_pass_formula() {
        let p = Profile::from_scores(
            labels("ABC"),
            vec![vec![0, 1, 2], vec![2, 1, 0], vec![1, 2, 0], vec![0, 2, 1], vec![2, 0, 1]],
        )
        .unwrap();
        let bs = borda_scale(&p);
        for j in 0..3 {
            let xs: Vec<f64> = p.rows().map(|r| r[j] as f64).collect();
            let mean = xs.iter().sum::<f64>() / 5.0;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 4.0;
            assert!((bs.stderr[j] - (var / 5.0).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn select_keeps_ids() {
        let p = toy();
        let s = p.select(&[3, 1]).unwrap();
        assert_eq!(s.row_ids(), &[3, 1]);
        assert_eq!(s.row(0), p.row(3));
        let rest = p.without_ids(&[0, 3]).unwrap();
        assert_eq!(rest.row_ids(), &[1, 2]);
        assert!(p.without_ids(&[0, 1, 2, 3]).is_none());
    }

    #[test]
    fn reorder_items_moves_columns() {
        let p = toy().reorder_items(&[2, 1, 0]);
        assert_eq!(p.items(), &["A", "B", "C"]);
        assert_eq!(p.row(0), &[2, 1, 0]);
    }
}
