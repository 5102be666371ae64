use std::cmp::Ordering;

use super::matrix::ResidualMatrix;
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Enumerate,
    Ascent,
    /// Scores evaluated at a caller-supplied sign vector.
    Fixed,
}

/// One principal axis of a residual matrix.
///
/// `a` and `b` are integer numerators over `denom`, the denominator of the
/// residual matrix the axis was computed from; `f`, `g` and `delta` are the
/// corresponding exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct TcaAxis {
    pub u: Vec<i8>,
    pub v: Vec<i8>,
    pub a: Vec<i128>,
    pub b: Vec<i128>,
    pub denom: i128,
    pub f: Vec<Rational>,
    pub g: Vec<Rational>,
    pub delta: Rational,
    pub method: Method,
    pub restarts_used: usize,
}

#[inline]
pub fn sgn(x: i128) -> i8 {
    if x > 0 {
        1
    } else {
        -1
    }
}

impl TcaAxis {
    /// `||a||_1` in units of `1/denom`.
    pub fn delta_numerator(&self) -> i128 {
        self.a.iter().map(|x| x.abs()).sum()
    }

    /// Factor score of the last (nega) row.
    pub fn f_nega(&self) -> Rational {
        *self.f.last().expect("axis has rows")
    }

    /// Items with negative weight, `{j : u_j = -1}`.
    pub fn j1(&self) -> Vec<usize> {
        (0..self.u.len()).filter(|&j| self.u[j] < 0).collect()
    }

    pub fn j2(&self) -> Vec<usize> {
        (0..self.u.len()).filter(|&j| self.u[j] > 0).collect()
    }

    /// `f_i * scale` as an integer, or `None` when it is not one.
    pub fn f_scaled(&self, i: usize, scale: i128) -> Option<i128> {
        let x = self.f[i] * Rational::from_integer(scale);
        x.is_integer().then(|| x.to_integer())
    }

    /// Whether `u = sgn(b)` and `v = sgn(a)` with `sgn(0) = -1`.
    pub fn signs_consistent(&self) -> bool {
        self.u.iter().zip(&self.b).all(|(&u, &b)| u == sgn(b))
            && self.v.iter().zip(&self.a).all(|(&v, &a)| v == sgn(a))
    }
}

/// Axis quantities at a fixed `u`, without sign fixing.
pub(crate) fn evaluate(rm: &ResidualMatrix, u: &[i8], method: Method) -> TcaAxis {
    let a = rm.times_signs(u);
    let v: Vec<i8> = a.iter().map(|&x| sgn(x)).collect();
    let b = rm.transpose_times_signs(&v);
    let denom = rm.denom();
    let delta = Rational::new(a.iter().map(|x| x.abs()).sum(), denom);
    let f = a
        .iter()
        .zip(rm.row_masses())
        .map(|(&x, m)| Rational::new(x, denom) / m)
        .collect();
    let g = b
        .iter()
        .zip(rm.col_masses())
        .map(|(&x, m)| Rational::new(x, denom) / m)
        .collect();
    TcaAxis { u: u.to_vec(), v, a, b, denom, f, g, delta, method, restarts_used: 0 }
}

/// Factor scores at `u`, oriented so the nega row scores non-positively.
pub fn factor_scores(rm: &ResidualMatrix, u: &[i8]) -> Result<TcaAxis> {
    if u.len() != rm.cols() {
        return Err(Error::SignLength { expected: rm.cols(), found: u.len() });
    }
    let axis = evaluate(rm, u, Method::Fixed);
    if *axis.a.last().unwrap() > 0 {
        let flipped: Vec<i8> = u.iter().map(|s| -s).collect();
        Ok(evaluate(rm, &flipped, Method::Fixed))
    } else {
        Ok(axis)
    }
}

/// Resolves ties among sign vectors that share the maximal objective.
///
/// Each candidate is oriented so that the nega row's basic coordinate is
/// non-positive (both orientations are kept when it is zero). The winner is
/// the one with the largest `|f(nega)|`, then one whose signs are a fixed
/// point of the transition formulae, then the smallest `J1` indicator vector
/// compared item by item.
pub(crate) fn resolve(rm: &ResidualMatrix, candidates: &[Vec<i8>], method: Method) -> TcaAxis {
    let last = rm.rows() - 1;
    let mut oriented: Vec<Vec<i8>> = Vec::new();
    for u in candidates {
        let a_nega: i128 = rm.scaled_row(last).iter().zip(u).map(|(&c, &s)| c * s as i128).sum();
        let neg: Vec<i8> = u.iter().map(|s| -s).collect();
        match a_nega.cmp(&0) {
            Ordering::Less => oriented.push(u.clone()),
            Ordering::Greater => oriented.push(neg),
            Ordering::Equal => {
                oriented.push(u.clone());
                oriented.push(neg);
            }
        }
    }
    oriented.sort();
    oriented.dedup();
    oriented
        .into_iter()
        .map(|u| evaluate(rm, &u, method))
        .min_by(tie_order)
        .expect("at least one candidate")
}

fn tie_order(x: &TcaAxis, y: &TcaAxis) -> Ordering {
    // larger delta, then larger |a(nega)|, then consistency, then smaller J1 indicator
    y.delta_numerator()
        .cmp(&x.delta_numerator())
        .then_with(|| y.a.last().unwrap().abs().cmp(&x.a.last().unwrap().abs()))
        .then_with(|| y.signs_consistent().cmp(&x.signs_consistent()))
        .then_with(|| j1_indicator(&x.u).cmp(&j1_indicator(&y.u)))
}

fn j1_indicator(u: &[i8]) -> Vec<bool> {
    u.iter().map(|&s| s < 0).collect()
}
