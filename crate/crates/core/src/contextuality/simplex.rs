//! Phase-I simplex on a dense tableau, generic over exact rationals and `f64`.

use std::fmt::Debug;

use num::rational::BigRational;
use num::{Signed, Zero};

use crate::qcore::rational_to_f64;

pub trait Field: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// -1, 0 or 1; float values within the pivot tolerance count as 0.
    fn sign(&self) -> i8;
    fn to_f64(&self) -> f64;
    fn abs_le(&self, o: &Self) -> bool;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn abs_le(&self, o: &Self) -> bool {
        self.abs() <= o.abs()
    }
}

/// Pivot tolerance for the float tableau.
pub const PIVOT_EPS: f64 = 1e-12;

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i8 {
        if *self > PIVOT_EPS {
            1
        } else if *self < -PIVOT_EPS {
            -1
        } else {
            0
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_le(&self, o: &Self) -> bool {
        self.abs() <= o.abs()
    }
}

/// Result of minimising the sum of artificial variables for `A x = b, x ≥ 0`.
#[derive(Clone, Debug)]
pub struct PhaseOne<F> {
    /// Minimum total infeasibility; zero iff the system is feasible.
    pub value: F,
    /// Values of the structural variables at the optimum.
    pub primal: Vec<F>,
    /// Optimal dual: `yᵀA ≤ 0` on every column and `yᵀb = value`.
    pub dual: Vec<F>,
    pub pivots: usize,
}

/// Solves the phase-I problem for `A x = b`, `x ≥ 0` with `b ≥ 0`, using
/// Bland's rule so degenerate problems terminate.
pub fn phase_one<F: Field>(a: &[Vec<F>], b: &[F]) -> PhaseOne<F> {
    let m = b.len();
    let n = a.first().map_or(0, Vec::len);
    debug_assert!(a.len() == m && a.iter().all(|r| r.len() == n));
    debug_assert!(b.iter().all(|x| x.sign() >= 0));
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<F>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            row.extend(a[i].iter().cloned());
            row.extend((0..m).map(|k| if k == i { F::one() } else { F::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    // Reduced costs c_j - c_Bᵀ B⁻¹ A_j; the last entry holds minus the objective.
    let mut cost: Vec<F> = vec![F::zero(); width];
    for j in (0..n).chain(std::iter::once(rhs)) {
        cost[j] = t.iter().fold(F::zero(), |s, row| s.sub(&row[j]));
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut pivots = 0;
    while let Some(enter) = (0..n + m).find(|&j| cost[j].sign() < 0) {
        let mut leave: Option<(usize, F)> = None;
        for i in 0..m {
            if t[i][enter].sign() <= 0 {
                continue;
            }
            let ratio = t[i][rhs].div(&t[i][enter]);
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    let d = ratio.sub(&lr).sign();
                    if d < 0 || (d == 0 && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        // Phase I is bounded below by zero, so an entering column always has a pivot.
        let Some((r, _)) = leave else { break };
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
        pivots += 1;
    }
    let mut primal = vec![F::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            primal[j] = t[i][rhs].clone();
        }
    }
    let dual = (0..m).map(|i| F::one().sub(&cost[n + i])).collect();
    let value = F::zero().sub(&cost[rhs]);
    PhaseOne { value, primal, dual, pivots }
}

fn pivot<F: Field>(t: &mut [Vec<F>], cost: &mut [F], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x = x.div(&p);
    }
    let prow = t[r].clone();
    let eliminate = |row: &mut Vec<F>| {
        let f = row[c].clone();
        if f.sign() == 0 && f.to_f64() == 0.0 {
            return;
        }
        for (x, y) in row.iter_mut().zip(&prow) {
            if y.sign() != 0 || y.to_f64() != 0.0 {
                *x = x.sub(&f.mul(y));
            }
        }
        row[c] = F::zero();
    };
    for (i, row) in t.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    let mut cost_row = cost.to_vec();
    eliminate(&mut cost_row);
    cost.clone_from_slice(&cost_row);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn feasible_exact() {
        // x + y = 1, x - y + z = 1/2
        let a = vec![vec![q(1, 1), q(1, 1), q(0, 1)], vec![q(1, 1), q(-1, 1), q(1, 1)]];
        let b = vec![q(1, 1), q(1, 2)];
        let r = phase_one(&a, &b);
        assert!(r.value.is_zero());
        for (i, row) in a.iter().enumerate() {
            let lhs = row.iter().zip(&r.primal).fold(q(0, 1), |s, (x, y)| s + x * y);
            assert_eq!(lhs, b[i]);
        }
    }

    #[test]
    fn infeasible_has_farkas_dual() {
        // x + y = 1, x + y = 2
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let b = vec![1.0, 2.0];
        let r = phase_one(&a, &b);
        assert!((r.value - 1.0).abs() < 1e-12);
        for j in 0..2 {
            let col: f64 = (0..2).map(|i| r.dual[i] * a[i][j]).sum();
            assert!(col <= 1e-12);
        }
        let yb: f64 = r.dual.iter().zip(&b).map(|(y, b)| y * b).sum();
        assert!((yb - r.value).abs() < 1e-12);
    }
}
