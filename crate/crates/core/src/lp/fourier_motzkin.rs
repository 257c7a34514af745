//! Equality substitution followed by Fourier–Motzkin elimination of the
//! sign constraints, with Chernikov pruning.
//!
//! Each row remembers its multipliers on the original equalities, so the
//! row that ends as `0 <= b < 0` yields the Farkas vector directly.

use num_traits::{Signed, Zero};

use super::LpOutcome;
use crate::error::Result;
use crate::rational::Rational;

/// `coef · x <= rhs` (or `=` for equality rows), equal to
/// `Σ lambda_j (A_j x = b_j) + Σ_{k ∈ support} μ_k (-x_k <= 0)`.
#[derive(Debug, Clone)]
struct Row {
    coef: Vec<Rational>,
    rhs: Rational,
    lambda: Vec<Rational>,
    support: Vec<usize>,
}

impl Row {
    fn scaled(&self, t: &Rational) -> Row {
        Row {
            coef: self.coef.iter().map(|c| c * t).collect(),
            rhs: &self.rhs * t,
            lambda: self.lambda.iter().map(|l| l * t).collect(),
            support: self.support.clone(),
        }
    }

    fn add_scaled(&mut self, other: &Row, t: &Rational) {
        for (c, o) in self.coef.iter_mut().zip(&other.coef) {
            *c += o * t;
        }
        self.rhs += &other.rhs * t;
        for (l, o) in self.lambda.iter_mut().zip(&other.lambda) {
            *l += o * t;
        }
    }

    fn is_trivial(&self) -> bool {
        self.coef.iter().all(Zero::is_zero)
    }

    /// Positive rescaling making the first nonzero coefficient ±1.
    fn normalized(self) -> Row {
        match self.coef.iter().find(|c| !c.is_zero()) {
            Some(lead) => {
                let t = lead.abs().recip();
                self.scaled(&t)
            }
            None => self,
        }
    }
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub(super) fn solve(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Result<LpOutcome> {
    let m = a.len();
    let unit = |j: usize| (0..m).map(|i| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect();
    let mut eqs: Vec<Row> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(j, (row, bj))| Row { coef: row.clone(), rhs: bj.clone(), lambda: unit(j), support: Vec::new() })
        .collect();
    let mut ineqs: Vec<Row> = (0..n)
        .map(|k| Row {
            coef: (0..n).map(|i| if i == k { Rational::from_integer((-1).into()) } else { Rational::zero() }).collect(),
            rhs: Rational::zero(),
            lambda: vec![Rational::zero(); m],
            support: vec![k],
        })
        .collect();

    let mut pivots: Vec<(usize, Row)> = Vec::new();
    let mut live = vec![true; n];
    for i in 0..m {
        let Some(v) = eqs[i].coef.iter().position(|c| !c.is_zero()) else {
            if eqs[i].rhs.is_zero() {
                continue;
            }
            let sign = if eqs[i].rhs.is_positive() { -1 } else { 1 };
            return Ok(LpOutcome::Infeasible(eqs[i].lambda.iter().map(|l| l * Rational::from_integer(sign.into())).collect()));
        };
        let pivot = eqs[i].scaled(&eqs[i].coef[v].recip());
        for row in eqs[i + 1..].iter_mut().chain(ineqs.iter_mut()) {
            let t = -row.coef[v].clone();
            if !t.is_zero() {
                row.add_scaled(&pivot, &t);
            }
        }
        live[v] = false;
        pivots.push((v, pivot));
    }

    let mut current = Vec::new();
    for row in ineqs {
        if row.is_trivial() {
            if row.rhs.is_negative() {
                return Ok(LpOutcome::Infeasible(row.lambda));
            }
        } else {
            current.push(row.normalized());
        }
    }

    let mut stages: Vec<(usize, Vec<Row>)> = Vec::new();
    let mut eliminated = 0usize;
    for v in (0..n).filter(|&v| live[v]) {
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for row in &current {
            if row.coef[v].is_positive() {
                pos.push(row);
            } else if row.coef[v].is_negative() {
                neg.push(row);
            } else {
                next.push(row.clone());
            }
        }
        eliminated += 1;
        for p in &pos {
            for q in &neg {
                let support = union(&p.support, &q.support);
                if support.len() > eliminated + 1 {
                    continue;
                }
                let mut combo = p.scaled(&-q.coef[v].clone());
                combo.add_scaled(q, &p.coef[v]);
                combo.coef[v] = Rational::zero();
                combo.support = support;
                if combo.is_trivial() {
                    if combo.rhs.is_negative() {
                        return Ok(LpOutcome::Infeasible(combo.lambda));
                    }
                    continue;
                }
                let combo = combo.normalized();
                if !next.iter().any(|r: &Row| r.coef == combo.coef && r.rhs == combo.rhs) {
                    next.push(combo);
                }
            }
        }
        stages.push((v, std::mem::replace(&mut current, next)));
    }

    let mut x = vec![Rational::zero(); n];
    for (v, rows) in stages.iter().rev() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for row in rows {
            let c = &row.coef[*v];
            if c.is_zero() {
                continue;
            }
            let rest = row.coef.iter().zip(&x).enumerate().filter(|(k, _)| k != v).fold(Rational::zero(), |acc, (_, (ck, xk))| acc + ck * xk);
            let bound = (&row.rhs - rest) / c;
            if c.is_positive() {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            }
        }
        let mut value = Rational::zero();
        if let Some(l) = lo {
            value = value.max(l);
        }
        if let Some(h) = hi {
            value = value.min(h);
        }
        x[*v] = value;
    }
    for (v, row) in pivots.iter().rev() {
        let rest = row.coef.iter().zip(&x).enumerate().filter(|(k, _)| k != v).fold(Rational::zero(), |acc, (_, (ck, xk))| acc + ck * xk);
        x[*v] = &row.rhs - rest;
    }
    Ok(LpOutcome::Feasible(x))
}
