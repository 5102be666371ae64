use num_bigint::BigInt;
use num_rational::BigRational;

use super::axis::TcaAxis;
use super::matrix::{checked_mul, CorrespondenceMatrix, ResidualMatrix};
use crate::error::{Error, Result};
use crate::Rational;

/// Removes the rank-one part of `axis` from `rm`: `P - a b' / δ`.
pub fn deflate(rm: &ResidualMatrix, axis: &TcaAxis) -> Result<ResidualMatrix> {
    assert_eq!(axis.denom, rm.denom(), "axis was computed from another matrix");
    assert_eq!(axis.a.len(), rm.rows());
    assert_eq!(axis.b.len(), rm.cols());
    let delta = axis.delta_numerator();
    if delta == 0 {
        return Err(Error::ZeroDispersion);
    }
    // (C/D) - (A/D)(B/D)' / (Δ/D) = (C Δ - A B') / (D Δ)
    let mut cells = Vec::with_capacity(rm.rows() * rm.cols());
    for i in 0..rm.rows() {
        for j in 0..rm.cols() {
            let scaled = checked_mul(rm.scaled(i, j), delta, "deflating")?;
            let outer = checked_mul(axis.a[i], axis.b[j], "deflating")?;
            cells.push(scaled.checked_sub(outer).ok_or(Error::Overflow("deflating"))?);
        }
    }
    let denom = checked_mul(rm.denom(), delta, "deflating")?;
    Ok(rm.deflated(cells, denom))
}

/// Result of the reconstitution formula.
#[derive(Debug, Clone)]
pub struct Reconstitution {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<BigRational>,
    /// False when fewer than `rank(P) - 1` axes were supplied, in which case
    /// `cells` is only an approximation of `P`.
    pub complete: bool,
}

impl Reconstitution {
    pub fn cell(&self, i: usize, j: usize) -> &BigRational {
        &self.cells[i * self.cols + j]
    }

    /// Whether every cell equals the corresponding cell of `cm`.
    pub fn matches(&self, cm: &CorrespondenceMatrix) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| *self.cell(i, j) == big(cm.cell(i, j))))
    }

    /// `Σ |P_ij - reconstructed_ij|`.
    pub fn l1_error(&self, cm: &CorrespondenceMatrix) -> BigRational {
        let mut err = BigRational::from_integer(BigInt::from(0));
        for i in 0..self.rows {
            for j in 0..self.cols {
                let diff = big(cm.cell(i, j)) - self.cell(i, j);
                err += if diff < BigRational::from_integer(BigInt::from(0)) { -diff } else { diff };
            }
        }
        err
    }
}

pub(crate) fn big(x: Rational) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// `p_ij = p_i* p_*j [1 + Σ_α f_α(i) g_α(j) / δ_α]`.
pub fn reconstitute(cm: &CorrespondenceMatrix, axes: &[TcaAxis]) -> Reconstitution {
    let (rows, cols) = (cm.rows(), cm.cols());
    let one = BigRational::from_integer(BigInt::from(1));
    let mut cells = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let mut bracket = one.clone();
            for ax in axes {
                bracket += big(ax.f[i]) * big(ax.g[j]) / big(ax.delta);
            }
            cells.push(big(cm.row_masses()[i]) * big(cm.col_masses()[j]) * bracket);
        }
    }
    Reconstitution { rows, cols, cells, complete: axes.len() >= cm.rank_bound() }
}
