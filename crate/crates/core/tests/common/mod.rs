#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use uli_core::combinatorics::tuples;
use uli_core::logic::AtomTable;
use uli_core::nabla::UpsilonMatrix;
use uli_core::rational::ratio;
use uli_core::{Rational, SimplexPoint, StateDescription, Valuation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sds(q: u32, n: usize) -> Vec<StateDescription> {
    StateDescription::all(q, n).unwrap().collect()
}

/// First state description with at most `n_max` constants where `f` and `g`
/// differ.
pub fn first_difference<F: Valuation + ?Sized, G: Valuation + ?Sized>(
    f: &F,
    g: &G,
    n_max: usize,
) -> Option<(StateDescription, Rational, Rational)> {
    assert_eq!(f.level(), g.level());
    (0..=n_max).flat_map(|n| sds(f.level(), n)).find_map(|sd| {
        let (a, b) = (f.eval_sd(&sd).unwrap(), g.eval_sd(&sd).unwrap());
        (a != b).then_some((sd, a, b))
    })
}

/// Nonnegative rationals with denominator `den`, summing to 1.
pub fn random_simplex(rng: &mut ChaCha8Rng, len: usize, den: i64) -> Vec<Rational> {
    let mut cuts: Vec<i64> = (0..len - 1).map(|_| rng.gen_range(0..=den)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(len);
    for c in cuts.into_iter().chain([den]) {
        out.push(ratio(c - prev, den));
        prev = c;
    }
    out
}

pub fn random_point(rng: &mut ChaCha8Rng, q: u32, den: i64) -> SimplexPoint {
    SimplexPoint::new(q, random_simplex(rng, 1 << q, den)).unwrap()
}

pub fn random_upsilon(rng: &mut ChaCha8Rng, nu: usize) -> UpsilonMatrix {
    let rows: Vec<Vec<bool>> = (0..nu).map(|_| (0..nu).map(|_| rng.gen_bool(0.5)).collect()).collect();
    UpsilonMatrix::from_dense(&rows).unwrap()
}

pub fn two_by_two() -> UpsilonMatrix {
    UpsilonMatrix::from_bit_strings(2, &[("11", 1), ("00", 1)]).unwrap()
}

fn dense_rows(u: &UpsilonMatrix) -> Vec<Vec<bool>> {
    u.rows().iter().flat_map(|r| std::iter::repeat_n(r.bits.clone(), r.mult)).collect()
}

/// Product value of the column frequencies of the picked rows, computed
/// straight from the matrix.
#[allow(clippy::needless_range_loop)]
fn pick_value(rows: &[Vec<bool>], picks: &[usize], table: &AtomTable, sd: &StateDescription) -> Rational {
    let nu = rows.len();
    let q = picks.len() as u32;
    let mut counts = vec![0i64; 1 << q];
    for column in 0..nu {
        let mask = picks.iter().enumerate().fold(0u32, |m, (i, &row)| m | ((rows[row][column] as u32) << (q - 1 - i as u32)));
        counts[table.index_of_mask(mask)] += 1;
    }
    sd.indices().iter().fold(Rational::one(), |acc, &h| acc * ratio(counts[h], nu as i64))
}

/// ∇ by averaging over every ordered pick of `q` rows.
pub fn brute_nabla(u: &UpsilonMatrix, q: u32, sd: &StateDescription, replacement: bool) -> Rational {
    let rows = dense_rows(u);
    let table = AtomTable::new(q).unwrap();
    let mut total = Rational::zero();
    let mut count = 0i64;
    for picks in tuples(rows.len(), q as usize) {
        let injective = (0..picks.len()).all(|i| !picks[..i].contains(&picks[i]));
        if replacement || injective {
            total += pick_value(&rows, &picks, &table, sd);
            count += 1;
        }
    }
    total / Rational::from_integer(BigInt::from(count))
}

/// Renders a rational for the acceptance log.
pub fn show(r: &Rational) -> String {
    uli_core::rational::format(r)
}
