//! Phase-1 simplex on a dense exact tableau, Bland's pivot rule.

use num_traits::{One, Signed, Zero};

use super::LpOutcome;
use crate::error::Result;
use crate::rational::Rational;

pub(super) fn solve(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Result<LpOutcome> {
    let m = a.len();
    let width = n + m;
    // Rows are scaled by -1 where b is negative so the artificial basis
    // starts feasible.
    let signs: Vec<Rational> = b.iter().map(|bi| if bi.is_negative() { -Rational::one() } else { Rational::one() }).collect();
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = a[i].iter().map(|v| v * &signs[i]).collect();
            row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row.push(&b[i] * &signs[i]);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();
    // Reduced costs of the phase-1 objective Σ artificials, and its value.
    let mut cost: Vec<Rational> = (0..=width)
        .map(|j| {
            if (n..width).contains(&j) {
                Rational::zero()
            } else {
                -t.iter().fold(Rational::zero(), |acc, row| acc + &row[j])
            }
        })
        .collect();

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // The phase-1 objective is bounded below by zero.
        let (r, _) = leave.expect("phase-1 objective is bounded");
        let inv = t[r][enter].recip();
        for v in t[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= &f * p;
                }
            }
        }
        let f = cost[enter].clone();
        for (v, p) in cost.iter_mut().zip(&pivot) {
            *v -= &f * p;
        }
        basis[r] = enter;
    }

    let objective = -cost[width].clone();
    if objective.is_positive() {
        let y = (0..m)
            .map(|i| {
                let dual = t
                    .iter()
                    .zip(&basis)
                    .filter(|(_, &bv)| bv >= n)
                    .fold(Rational::zero(), |acc, (row, _)| acc + &row[n + i]);
                -(dual * &signs[i])
            })
            .collect();
        return Ok(LpOutcome::Infeasible(y));
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &bv) in t.iter().zip(&basis) {
        if bv < n {
            x[bv] = row[width].clone();
        }
    }
    Ok(LpOutcome::Feasible(x))
}
