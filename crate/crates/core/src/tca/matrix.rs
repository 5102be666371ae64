use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rank::NegaTable;
use crate::Rational;

/// `P = R_nega / t` with its row and column masses.
///
/// Cells are kept as integer numerators over the common denominator `t`;
/// the last row is `nega`.
#[derive(Debug, Clone)]
pub struct CorrespondenceMatrix {
    rows: usize,
    cols: usize,
    numerators: Vec<i128>,
    total: i128,
    row_masses: Vec<Rational>,
    col_masses: Vec<Rational>,
}

pub fn build_correspondence(nt: &NegaTable) -> CorrespondenceMatrix {
    let p = &nt.profile;
    let (n, d) = (p.n(), p.d());
    let mut numerators = Vec::with_capacity((n + 1) * d);
    for row in p.rows() {
        numerators.extend(row.iter().map(|&r| r as i128));
    }
    numerators.extend(nt.nega.iter().map(|&x| x as i128));
    let mut row_masses = vec![Rational::new(1, 2 * n as i128); n];
    row_masses.push(Rational::new(1, 2));
    CorrespondenceMatrix {
        rows: n + 1,
        cols: d,
        numerators,
        total: nt.t as i128,
        row_masses,
        col_masses: vec![Rational::new(1, d as i128); d],
    }
}

impl CorrespondenceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Grand total `t` of the underlying count table.
    pub fn total(&self) -> i128 {
        self.total
    }

    pub fn cell(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.numerators[i * self.cols + j], self.total)
    }

    pub fn row_masses(&self) -> &[Rational] {
        &self.row_masses
    }

    pub fn col_masses(&self) -> &[Rational] {
        &self.col_masses
    }

    /// Number of nontrivial axes, `rank(P) - 1`.
    pub fn rank_bound(&self) -> usize {
        integer_rank(&self.numerators, self.rows, self.cols).saturating_sub(1)
    }

    /// First residual matrix `p_ij - p_i* p_*j`, scaled by `2t` to integers.
    ///
    /// For the nega-coded table this gives `2 r_ij - (d-1)` on voter rows and
    /// `2 nega_j - n(d-1)` on the nega row.
    pub fn residual(&self) -> ResidualMatrix {
        let denom = 2 * self.total;
        let mut cells = Vec::with_capacity(self.numerators.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                let centred = Rational::from_integer(self.numerators[i * self.cols + j])
                    - self.row_masses[i] * self.col_masses[j] * Rational::from_integer(self.total);
                let scaled = centred * Rational::from_integer(2);
                debug_assert!(scaled.is_integer());
                cells.push(scaled.to_integer());
            }
        }
        ResidualMatrix {
            rows: self.rows,
            cols: self.cols,
            cells,
            denom,
            row_masses: self.row_masses.clone(),
            col_masses: self.col_masses.clone(),
            axis_index: 1,
        }
    }
}

pub fn residual(cm: &CorrespondenceMatrix) -> ResidualMatrix {
    cm.residual()
}

/// A residual correspondence matrix `P_α`, stored as integers over a common
/// denominator. The last row is treated as the nega row for sign fixing.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<i128>,
    denom: i128,
    row_masses: Vec<Rational>,
    col_masses: Vec<Rational>,
    axis_index: usize,
}

impl ResidualMatrix {
    /// Wraps an arbitrary scaled matrix, e.g. for testing the engines on
    /// inputs that do not come from a profile.
    pub fn from_scaled(
        rows: usize,
        cols: usize,
        cells: Vec<i128>,
        denom: i128,
        row_masses: Vec<Rational>,
        col_masses: Vec<Rational>,
    ) -> Self {
        assert_eq!(cells.len(), rows * cols);
        assert_eq!(row_masses.len(), rows);
        assert_eq!(col_masses.len(), cols);
        assert!(denom > 0);
        Self { rows, cols, cells, denom, row_masses, col_masses, axis_index: 1 }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn denom(&self) -> i128 {
        self.denom
    }

    pub fn axis_index(&self) -> usize {
        self.axis_index
    }

    pub fn row_masses(&self) -> &[Rational] {
        &self.row_masses
    }

    pub fn col_masses(&self) -> &[Rational] {
        &self.col_masses
    }

    #[inline]
    pub fn scaled(&self, i: usize, j: usize) -> i128 {
        self.cells[i * self.cols + j]
    }

    pub fn scaled_row(&self, i: usize) -> &[i128] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scaled_cells(&self) -> &[i128] {
        &self.cells
    }

    pub fn cell(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.scaled(i, j), self.denom)
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|&c| c == 0)
    }

    /// `S u` for the scaled cells `S`.
    pub fn times_signs(&self, u: &[i8]) -> Vec<i128> {
        self.cells
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(u).map(|(&c, &s)| if s > 0 { c } else { -c }).sum())
            .collect()
    }

    /// `S' v` for the scaled cells `S`.
    pub fn transpose_times_signs(&self, v: &[i8]) -> Vec<i128> {
        let mut out = vec![0i128; self.cols];
        for (row, &s) in self.cells.chunks_exact(self.cols).zip(v) {
            if s > 0 {
                out.iter_mut().zip(row).for_each(|(o, &c)| *o += c);
            } else {
                out.iter_mut().zip(row).for_each(|(o, &c)| *o -= c);
            }
        }
        out
    }

    /// L1 norm of `S u`, the scaled TCA objective.
    pub fn objective(&self, u: &[i8]) -> i128 {
        self.times_signs(u).iter().map(|x| x.abs()).sum()
    }

    pub(crate) fn deflated(&self, cells: Vec<i128>, denom: i128) -> Self {
        let mut g = denom;
        for &c in &cells {
            g = g.gcd(&c);
            if g == 1 {
                break;
            }
        }
        let (cells, denom) = if g > 1 {
            (cells.into_iter().map(|c| c / g).collect(), denom / g)
        } else {
            (cells, denom)
        };
        Self {
            rows: self.rows,
            cols: self.cols,
            cells,
            denom,
            row_masses: self.row_masses.clone(),
            col_masses: self.col_masses.clone(),
            axis_index: self.axis_index + 1,
        }
    }

    pub fn rank(&self) -> usize {
        integer_rank(&self.cells, self.rows, self.cols)
    }
}

/// Rank of an integer matrix by fraction-free elimination.
pub(crate) fn integer_rank(cells: &[i128], rows: usize, cols: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = cells
        .chunks_exact(cols)
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        let pivot = m[rank][col..].to_vec();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            let mut g = BigInt::zero();
            for (x, q) in row[col..].iter_mut().zip(&pivot) {
                *x = &*x * &p - &f * q;
                g = g.gcd(x);
            }
            if !g.is_zero() && g.abs() != BigInt::from(1) {
                for x in &mut row[col..] {
                    *x = &*x / &g;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub(crate) fn checked_mul(a: i128, b: i128, what: &'static str) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::{encode_profile, reverse_and_nega, Preference};

    fn toy_nega() -> NegaTable {
        let prefs = vec![
            Preference::new(vec![2, 1, 0]),
            Preference::new(vec![2, 0, 1]),
            Preference::new(vec![1, 2, 0]),
            Preference::new(vec![1, 0, 2]),
        ];
        let items = ["C", "B", "A"].iter().map(|s| s.to_string()).collect();
        reverse_and_nega(&encode_profile(&prefs, items).unwrap())
    }

    #[test]
    fn toy_masses() {
        let cm = build_correspondence(&toy_nega());
        assert_eq!(cm.total(), 24);
        assert!(cm.row_masses()[..4].iter().all(|&m| m == Rational::new(1, 8)));
        assert_eq!(cm.row_masses()[4], Rational::new(1, 2));
        assert!(cm.col_masses().iter().all(|&m| m == Rational::new(1, 3)));
        let total: Rational = (0..5).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| cm.cell(i, j)).sum();
        assert_eq!(total, Rational::from_integer(1));
    }

    #[test]
    fn toy_residual() {
        let rm = residual(&build_correspondence(&toy_nega()));
        assert_eq!(rm.denom(), 48);
        assert_eq!(
            rm.scaled_cells(),
            &[-2, 0, 2, 0, -2, 2, -2, 2, 0, 0, 2, -2, 4, -2, -2]
        );
        for i in 0..5 {
            assert_eq!(rm.scaled_row(i).iter().sum::<i128>(), 0);
        }
        assert_eq!(rm.objective(&[1, 1, 1]), 0);
    }

    #[test]
    fn smallest_case() {
        let p = encode_profile(&[Preference::new(vec![0, 1])], vec!["A".into(), "B".into()]).unwrap();
        let cm = build_correspondence(&reverse_and_nega(&p));
        assert_eq!(cm.total(), 2);
        assert_eq!(cm.row_masses(), &[Rational::new(1, 2), Rational::new(1, 2)]);
        assert_eq!(cm.col_masses(), &[Rational::new(1, 2), Rational::new(1, 2)]);
        assert_eq!(cm.cell(0, 0), Rational::new(1, 2));
        assert_eq!(cm.cell(1, 1), Rational::new(1, 2));
        assert_eq!(cm.rank_bound(), 1);
    }

    #[test]
    fn sushi_sized_masses() {
        // Only the shape matters here: 5000 copies of one ballot over 10 items.
        let p = encode_profile(
            &[Preference::repeated((0..10).collect(), 5000)],
            (0..10).map(|j| format!("j{}", j + 1)).collect(),
        )
        .unwrap();
        let cm = build_correspondence(&reverse_and_nega(&p));
        assert_eq!(cm.total(), 450_000);
        assert_eq!(cm.row_masses()[0], Rational::new(1, 10_000));
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(integer_rank(&[1, 2, 2, 4], 2, 2), 1);
        assert_eq!(integer_rank(&[1, 2, 3, 4], 2, 2), 2);
        assert_eq!(integer_rank(&[0, 0, 0, 0], 2, 2), 0);
        assert_eq!(integer_rank(&[1, 0, 0, 1, 1, 1], 3, 2), 2);
    }
}
