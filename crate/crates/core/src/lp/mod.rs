//! Exact feasibility of `A x = b, x >= 0` over the rationals.
//!
//! Both solvers return either a solution or a Farkas vector `y` with
//! `yᵀA >= 0` and `yᵀb < 0`; [`verify`] re-checks either by substitution.

mod fourier_motzkin;
mod simplex;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest unknown count handed to Fourier–Motzkin by [`Method::Auto`].
pub const MAX_FM_UNKNOWNS: usize = 12;
/// Largest unknown count accepted at all.
pub const MAX_UNKNOWNS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    /// Farkas vector, one entry per equality.
    Infeasible(Vec<Rational>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    FourierMotzkin,
    Simplex,
    /// Fourier–Motzkin up to [`MAX_FM_UNKNOWNS`], simplex above.
    Auto,
}

/// Decides `A x = b, x >= 0`. The result is verified before it is returned.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], method: Method) -> Result<LpOutcome> {
    let n = check_shape(a, b)?;
    if n > MAX_UNKNOWNS {
        return Err(Error::ResourceCap { what: "LP unknowns".into(), requested: n as u128, limit: MAX_UNKNOWNS as u128 });
    }
    let method = match method {
        Method::Auto if n <= MAX_FM_UNKNOWNS => Method::FourierMotzkin,
        Method::Auto => Method::Simplex,
        m => m,
    };
    let outcome = match method {
        Method::FourierMotzkin => fourier_motzkin::solve(a, b, n),
        _ => simplex::solve(a, b, n),
    }?;
    if !verify(a, b, &outcome) {
        return Err(Error::VerificationFailed(format!("{method:?} produced an invalid certificate")));
    }
    Ok(outcome)
}

/// Substitutes a solution or Farkas vector back into the system.
pub fn verify(a: &[Vec<Rational>], b: &[Rational], outcome: &LpOutcome) -> bool {
    let Ok(n) = check_shape(a, b) else { return false };
    match outcome {
        LpOutcome::Feasible(x) => {
            x.len() == n
                && x.iter().all(|v| !v.is_negative())
                && a.iter().zip(b).all(|(row, bi)| dot(row, x) == *bi)
        }
        LpOutcome::Infeasible(y) => {
            y.len() == a.len()
                && (0..n).all(|k| !a.iter().zip(y).fold(Rational::zero(), |acc, (row, yi)| acc + &row[k] * yi).is_negative())
                && dot(y, b).is_negative()
        }
    }
}

fn check_shape(a: &[Vec<Rational>], b: &[Rational]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::InvalidBound(format!("{} rows but {} right-hand sides", a.len(), b.len())));
    }
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidBound("ragged constraint matrix".into()));
    }
    Ok(n)
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
