mod common;

use num_traits::Zero;
use proptest::prelude::*;

use common::{first_difference, random_point, rng, sds};
use uli_core::check::{check_additivity, check_ex, check_ip, check_px};
use uli_core::logic::{parse_formula, AtomTable};
use uli_core::prob::{restrict, total_mass};
use uli_core::rational::{int, ratio};
use uli_core::{ProbabilityFunction, Rational, SimplexPoint, Valuation};

fn point(q: u32) -> impl Strategy<Value = SimplexPoint> {
    any::<u64>().prop_map(move |seed| random_point(&mut rng(seed), q, 12))
}

fn mixture(q: u32) -> impl Strategy<Value = ProbabilityFunction> {
    prop::collection::vec((1i64..=5, point(q), any::<bool>()), 1..=3).prop_map(|parts| {
        let total: i64 = parts.iter().map(|(w, _, _)| w).sum();
        let parts = parts
            .into_iter()
            .map(|(w, x, sym)| {
                let f = if sym { ProbabilityFunction::symmetrized(x).unwrap() } else { ProbabilityFunction::product(x) };
                (ratio(w, total), f)
            })
            .collect();
        ProbabilityFunction::mixture(parts).unwrap()
    })
}

/// Marginal point on the first `q` predicates, summed straight from the atoms.
fn marginal_point(x: &SimplexPoint, q: u32) -> SimplexPoint {
    let (high, low) = (AtomTable::new(x.q()).unwrap(), AtomTable::new(q).unwrap());
    let mut out = vec![Rational::zero(); low.len()];
    for (i, v) in x.entries().iter().enumerate() {
        out[low.index_of_mask(high.mask(i) >> (x.q() - q))] += v;
    }
    SimplexPoint::new(q, out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixtures_are_additive_and_exchangeable(w in (1u32..=2).prop_flat_map(mixture)) {
        prop_assert!(check_additivity(&w, 3).unwrap().passed());
        prop_assert!(check_ex(&w, 3).unwrap().passed());
        for n in 0..=3 {
            prop_assert_eq!(total_mass(&w, n).unwrap(), int(1));
        }
    }

    #[test]
    fn products_factor_and_symmetrizations_are_px(x in (1u32..=2).prop_flat_map(point)) {
        let w = ProbabilityFunction::product(x.clone());
        prop_assert!(check_ip(&w, 3).unwrap().passed());
        for sd in sds(x.q(), 3) {
            let direct = sd.indices().iter().fold(int(1), |acc, &h| acc * &x.entries()[h]);
            prop_assert_eq!(w.eval_sd(&sd).unwrap(), direct);
        }
        prop_assert!(check_px(&ProbabilityFunction::symmetrized(x).unwrap(), 3).unwrap().passed());
    }

    #[test]
    fn sentence_and_negation_sum_to_one(x in point(2), text in prop::sample::select(vec![
        "P1(a1)", "P1(a1) & !P2(a2)", "P2(a3) -> P1(a1)", "(P1(a1) | P2(a2)) & !P1(a3)",
    ])) {
        let w = ProbabilityFunction::symmetrized(x).unwrap();
        let phi = parse_formula(text).unwrap();
        let window = [1, 2, 3];
        let yes = w.eval_sentence(&phi, &window).unwrap();
        let no = w.eval_sentence(&phi.not(), &window).unwrap();
        prop_assert_eq!(yes + no, int(1));
    }

    #[test]
    fn restricting_a_product_marginalizes_its_point((x, q) in (2u32..=4).prop_flat_map(|r| (point(r), 1..r))) {
        let restricted = restrict(&ProbabilityFunction::product(x.clone()), q).unwrap();
        let oracle = ProbabilityFunction::product(marginal_point(&x, q));
        prop_assert_eq!(first_difference(&restricted, &oracle, 3), None);
    }

    #[test]
    fn restriction_is_transitive(w in mixture(4), (mid, low) in (2u32..=3).prop_flat_map(|m| (Just(m), 1..m))) {
        let stepwise = restrict(&restrict(&w, mid).unwrap(), low).unwrap();
        let direct = restrict(&w, low).unwrap();
        prop_assert_eq!(first_difference(&stepwise, &direct, 2), None);
    }
}
