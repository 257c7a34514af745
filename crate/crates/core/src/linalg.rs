//! Exact determinant and inverse of small dense rational matrices.
//!
//! Rows are first scaled to integers; elimination then stays in the
//! integers (Bareiss), with the first nonzero entry of each column as pivot.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub type Matrix = Vec<Vec<Rational>>;

fn check_square(a: &[Vec<Rational>]) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidBound(format!("matrix with {n} rows is not square")));
    }
    Ok(n)
}

/// Integer rows `s_i A_i` and the scales `s_i`.
fn integer_rows(a: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    a.iter()
        .map(|row| {
            let s = rational::common_denominator(row);
            let ints = row.iter().map(|v| (v * Rational::from_integer(s.clone())).to_integer()).collect();
            (ints, s)
        })
        .unzip()
}

/// Bareiss quotients are exact.
fn exact_div(v: BigInt, d: &BigInt) -> BigInt {
    let (q, r) = v.div_rem(d);
    debug_assert!(r.is_zero(), "inexact Bareiss division");
    q
}

pub fn determinant(a: &[Vec<Rational>]) -> Result<Rational> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut m, scales) = integer_rows(a);
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = exact_div(v, &prev);
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = if negate { -prev } else { prev };
    let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(Rational::new(det, scale))
}

pub fn inverse(a: &[Vec<Rational>]) -> Result<Matrix> {
    let n = check_square(a)?;
    let (ints, scales) = integer_rows(a);
    // [M | I] with M = diag(s) A, so A^{-1} = M^{-1} diag(s).
    let mut m: Vec<Vec<BigInt>> = ints
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::Singular)?;
        m.swap(p, k);
        for i in (0..n).filter(|&i| i != k) {
            for j in (0..2 * n).filter(|&j| j != k) {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = exact_div(v, &prev);
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    // The left block is now prev·I and the right block prev·M^{-1}.
    Ok((0..n)
        .map(|i| (0..n).map(|j| Rational::new(m[i][n + j].clone() * &scales[j], prev.clone())).collect())
        .collect())
}

pub fn multiply(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::permutations;
    use crate::rational::{int, ratio};

    fn leibniz(a: &[Vec<Rational>]) -> Rational {
        let n = a.len();
        permutations(n).into_iter().fold(Rational::zero(), |acc, p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let term = (0..n).fold(Rational::one(), |t, i| t * &a[i][p[i]]);
            if inversions % 2 == 0 { acc + term } else { acc - term }
        })
    }

    fn m(rows: &[&[(i64, i64)]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&(n, d)| ratio(n, d)).collect()).collect()
    }

    #[test]
    fn small_monomial_matrix() {
        let a = m(&[&[(1, 1), (0, 1), (0, 1)], &[(1, 4), (1, 4), (1, 4)], &[(0, 1), (0, 1), (1, 1)]]);
        assert_eq!(determinant(&a).unwrap(), ratio(1, 4));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[1], vec![int(-1), int(4), int(-1)]);
        assert_eq!(multiply(&a, &inv), identity(3));
    }

    #[test]
    fn needs_row_swaps() {
        let a = m(&[&[(0, 1), (2, 3), (1, 1)], &[(1, 2), (0, 1), (0, 1)], &[(0, 1), (1, 1), (5, 7)]]);
        assert_eq!(determinant(&a).unwrap(), leibniz(&a));
        assert_eq!(multiply(&inverse(&a).unwrap(), &a), identity(3));
    }

    #[test]
    fn singular_and_shape() {
        let a = m(&[&[(1, 2), (1, 3)], &[(1, 1), (2, 3)]]);
        assert_eq!(determinant(&a).unwrap(), int(0));
        assert_eq!(inverse(&a), Err(Error::Singular));
        assert!(determinant(&m(&[&[(1, 1), (1, 1)]])).is_err());
        assert_eq!(determinant(&[]).unwrap(), int(1));
    }

    #[test]
    fn agrees_with_leibniz_on_a_dense_example() {
        let a: Matrix = (0..5)
            .map(|i| (0..5).map(|j| ratio(((i * 7 + j * 3) % 11) as i64 - 5, (i + j + 1) as i64)).collect())
            .collect();
        assert_eq!(determinant(&a).unwrap(), leibniz(&a));
        assert_eq!(multiply(&a, &inverse(&a).unwrap()), identity(5));
    }
}
