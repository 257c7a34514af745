mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;

use common::{random_point, rng, sds};
use uli_core::combinatorics::permutations;
use uli_core::decompose::{choose_p_vectors, compositions, decompose_px, decompose_y};
use uli_core::linalg::{determinant, identity, inverse, multiply};
use uli_core::rational::{int, ratio};
use uli_core::{ProbabilityFunction, Rational, Valuation};

fn leibniz(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    permutations(n).into_iter().fold(Rational::zero(), |acc, p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let term = (0..n).fold(Rational::one(), |t, i| t * &a[i][p[i]]);
        if inversions % 2 == 0 { acc + term } else { acc - term }
    })
}

fn identity_holds(target: &ProbabilityFunction, lambda: &Rational, w1: &ProbabilityFunction, w2: &ProbabilityFunction, n_max: usize) -> bool {
    let one_plus = int(1) + lambda;
    (0..=n_max).flat_map(|n| sds(target.level(), n)).all(|sd| {
        target.eval_sd(&sd).unwrap() == &one_plus * w1.eval_sd(&sd).unwrap() - lambda * w2.eval_sd(&sd).unwrap()
    })
}

#[test]
fn the_solved_row_picks_out_the_all_ones_column() {
    for q in 1..=4 {
        let k = compositions(q).unwrap();
        let solved = choose_p_vectors(&k).unwrap();
        for (col, n) in k.elements().iter().enumerate() {
            let dot: Rational = solved.b.iter().zip(&solved.a).map(|(bm, row)| bm * &row[col]).sum();
            let expected = if n.iter().all(|&v| v == 1) { int(1) } else { int(0) };
            assert_eq!(dot, expected, "q = {q}, column {n:?}");
        }
        assert_eq!(multiply(&solved.a, &solved.inverse), identity(k.len()), "q = {q}");
        if k.len() <= 6 {
            assert_eq!(solved.determinant, leibniz(&solved.a), "q = {q}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lambda_does_not_depend_on_c(seeds in prop::collection::vec(any::<u64>(), 3)) {
        let lambdas: Vec<Rational> = seeds.iter().map(|&s| decompose_y(&random_point(&mut rng(s), 2, 6), 1).unwrap().lambda).collect();
        prop_assert!(lambdas.iter().all(|l| *l == lambdas[0]));
        prop_assert_eq!(&lambdas[0], &choose_p_vectors(&compositions(2).unwrap()).unwrap().lambda);
    }

    #[test]
    fn decomposition_reproduces_y_c(seed in any::<u64>(), q in 1u32..=2) {
        let c = random_point(&mut rng(seed), q, 6);
        let d = decompose_y(&c, 1).unwrap();
        let y = ProbabilityFunction::symmetrized(c).unwrap();
        prop_assert!(identity_holds(&y, &d.lambda, &d.w1, &d.w2, 3));
        // The signed sum of the terms is y_c itself.
        let coefficients: Rational = d.terms.iter().map(|t| t.coefficient.clone()).sum();
        prop_assert_eq!(coefficients, int(1));
        for sd in (0..=2).flat_map(|n| sds(q, n)) {
            let signed: Rational = d.terms.iter()
                .map(|t| &t.coefficient * ProbabilityFunction::Nabla(t.nabla.clone()).eval_sd(&sd).unwrap())
                .sum();
            prop_assert_eq!(signed, y.eval_sd(&sd).unwrap());
        }
    }

    #[test]
    fn mixtures_decompose_with_shared_vectors(a in any::<u64>(), b in any::<u64>(), w in 1i64..=5) {
        let parts = vec![
            (ratio(w, 6), ProbabilityFunction::symmetrized(random_point(&mut rng(a), 2, 4)).unwrap()),
            (ratio(6 - w, 6), ProbabilityFunction::symmetrized(random_point(&mut rng(b), 2, 3)).unwrap()),
        ];
        let target = ProbabilityFunction::mixture(parts).unwrap();
        let d = decompose_px(&target, 1).unwrap();
        prop_assert!(identity_holds(&target, &d.lambda, &d.w1, &d.w2, 3));
    }

    #[test]
    fn determinant_and_inverse_agree_with_leibniz(entries in prop::collection::vec((-6i64..=6, 1i64..=4), 16)) {
        let a: Vec<Vec<Rational>> = entries.chunks(4).map(|row| row.iter().map(|&(n, d)| ratio(n, d)).collect()).collect();
        let det = determinant(&a).unwrap();
        prop_assert_eq!(&det, &leibniz(&a));
        if det.is_zero() {
            prop_assert!(inverse(&a).is_err());
        } else {
            prop_assert_eq!(multiply(&a, &inverse(&a).unwrap()), identity(4));
        }
    }
}
