//! Writing `y_c` as `(1+λ)w₁ - λw₂` with `w₁, w₂` convex combinations of
//! ∇ functions.
//!
//! For frequency vectors `p_m`, one per composition `m` of `q` into `q`
//! parts, the functions `p_m∇` over `Υ(c)` expand as
//! `Σ_n A[m][n] · n! y_{c_n}` with `A[m][n] = Π_k p_{m,k}^{n_k}`. When `A`
//! is regular, the row of `A^{-1}` at `n = (1,…,1)` expresses `q! y_c` as a
//! signed combination of the `p_m∇`.

use num_traits::{One, Signed, Zero};
use num_bigint::BigInt;

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::logic::StateDescription;
use crate::nabla::{build_phi, build_upsilon, FrequencyVector, Nabla, Sampling, UpsilonMatrix};
use crate::prob::{Mixture, ProbabilityFunction, SimplexPoint, Valuation};
use crate::rational::{self, Rational};

pub const MAX_DECOMPOSE_LEVEL: u32 = 5;
/// Default bound on the exponent `g` tried by [`choose_p_vectors`].
pub const DEFAULT_G_CEILING: u32 = 16;

/// All `n ∈ ℕ^q` with `Σ n_i = q`, in descending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositionSet {
    q: u32,
    elements: Vec<Vec<u32>>,
}

impl CompositionSet {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn elements(&self) -> &[Vec<u32>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position of `(1,…,1)`.
    pub fn ones_index(&self) -> usize {
        self.elements.iter().position(|n| n.iter().all(|&k| k == 1)).expect("(1,…,1) is a composition")
    }
}

pub fn compositions(q: u32) -> Result<CompositionSet> {
    if q == 0 || q > MAX_DECOMPOSE_LEVEL {
        return Err(Error::LevelOutOfRange { q, max: MAX_DECOMPOSE_LEVEL });
    }
    Ok(CompositionSet { q, elements: combinatorics::compositions(q, q as usize) })
}

/// The regular matrix `A` with its frequency vectors and the solved row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub compositions: CompositionSet,
    pub g: u32,
    pub p_vectors: Vec<FrequencyVector>,
    pub a: Matrix,
    pub determinant: Rational,
    pub inverse: Matrix,
    /// Row of `A^{-1}` at `n = (1,…,1)`.
    pub b: Vec<Rational>,
    pub lambda: Rational,
}

/// `p_m ∝ (m_s/q)^g`, normalized.
pub fn p_vectors(k: &CompositionSet, g: u32) -> Result<Vec<FrequencyVector>> {
    k.elements
        .iter()
        .map(|m| {
            let powers: Vec<BigInt> = m.iter().map(|&s| BigInt::from(s).pow(g)).collect();
            let total: BigInt = powers.iter().sum();
            FrequencyVector::new(powers.into_iter().map(|v| Rational::new(v, total.clone())).collect())
        })
        .collect()
}

/// `A[m][n] = Π_k p_{m,k}^{n_k}`, with `0^0 = 1`.
pub fn monomial_matrix(k: &CompositionSet, p: &[FrequencyVector]) -> Matrix {
    p.iter()
        .map(|pm| {
            k.elements
                .iter()
                .map(|n| n.iter().zip(pm.entries()).fold(Rational::one(), |acc, (&e, x)| acc * rational::pow(x, e)))
                .collect()
        })
        .collect()
}

pub fn choose_p_vectors(k: &CompositionSet) -> Result<MonomialMatrix> {
    choose_p_vectors_with(k, DEFAULT_G_CEILING)
}

/// Tries `g = 1, 2, …` up to `ceiling` and keeps the first regular `A`.
pub fn choose_p_vectors_with(k: &CompositionSet, ceiling: u32) -> Result<MonomialMatrix> {
    for g in 1..=ceiling {
        let p = p_vectors(k, g)?;
        let a = monomial_matrix(k, &p);
        let determinant = linalg::determinant(&a)?;
        if determinant.is_zero() {
            continue;
        }
        let inverse = linalg::inverse(&a)?;
        let b = inverse[k.ones_index()].clone();
        let negative = rational::sum(b.iter().filter(|v| v.is_negative())).abs();
        let lambda = negative / Rational::from_integer(combinatorics::factorial(k.q));
        return Ok(MonomialMatrix { compositions: k.clone(), g, p_vectors: p, a, determinant, inverse, b, lambda });
    }
    Err(Error::RegularityCeiling { ceiling })
}

/// One `p_m∇` and its coefficient `b_m / q!` in the expression for `y_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub composition: Vec<u32>,
    pub p: FrequencyVector,
    pub coefficient: Rational,
    pub nabla: Nabla,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub q: u32,
    pub lambda: Rational,
    pub w1: ProbabilityFunction,
    pub w2: ProbabilityFunction,
    pub g: u32,
    pub nu: usize,
    pub p_vectors: Vec<FrequencyVector>,
    /// Empty for decompositions of mixtures.
    pub terms: Vec<DecompositionTerm>,
    pub verified_up_to: usize,
    pub verified_descriptions: usize,
}

/// `w1` from the positive coefficients and `w2` from the negative ones,
/// each normalized. With no negative coefficients `w2` is set to `w1`.
fn split(parts: Vec<(Rational, ProbabilityFunction)>) -> Result<(Rational, ProbabilityFunction, ProbabilityFunction)> {
    let (pos, neg): (Vec<_>, Vec<_>) = parts.into_iter().filter(|(c, _)| !c.is_zero()).partition(|(c, _)| c.is_positive());
    let plus = rational::sum(pos.iter().map(|(c, _)| c));
    let lambda = rational::sum(neg.iter().map(|(c, _)| c)).abs();
    let w1 = ProbabilityFunction::mixture(pos.into_iter().map(|(c, f)| (c / &plus, f)).collect())?;
    let w2 = if lambda.is_zero() {
        w1.clone()
    } else {
        ProbabilityFunction::mixture(neg.into_iter().map(|(c, f)| (-c / &lambda, f)).collect())?
    };
    Ok((lambda, w1, w2))
}

fn verify<V: Valuation + ?Sized>(
    target: &V,
    lambda: &Rational,
    w1: &ProbabilityFunction,
    w2: &ProbabilityFunction,
    verify_n: usize,
) -> Result<usize> {
    let q = target.level();
    let one_plus = Rational::one() + lambda;
    let mut count = 0;
    for n in 0..=verify_n {
        for sd in StateDescription::all(q, n)? {
            let lhs = target.value(&sd)?;
            let rhs = &one_plus * w1.value(&sd)? - lambda * w2.value(&sd)?;
            if lhs != rhs {
                return Err(Error::VerificationFailed(format!("at {sd}: target {lhs}, decomposition {rhs}")));
            }
            count += 1;
        }
    }
    Ok(count)
}

fn common_nu(c: &SimplexPoint, p: &[FrequencyVector]) -> Result<usize> {
    let denominators = c.entries().iter().chain(p.iter().flat_map(|pm| pm.entries()));
    let nu = rational::common_denominator(denominators);
    usize::try_from(nu).map_err(|_| Error::ResourceCap { what: "nu".into(), requested: u128::MAX, limit: usize::MAX as u128 })
}

/// Decomposes `y_c`, checking the identity on every state description with
/// at most `verify_n` constants.
pub fn decompose_y(c: &SimplexPoint, verify_n: usize) -> Result<Decomposition> {
    let k = compositions(c.q())?;
    let solved = choose_p_vectors(&k)?;
    decompose_y_with(c, &solved, verify_n)
}

pub fn decompose_y_with(c: &SimplexPoint, solved: &MonomialMatrix, verify_n: usize) -> Result<Decomposition> {
    let q = c.q();
    if solved.compositions.q != q {
        return Err(Error::LevelMismatch { expected: solved.compositions.q, found: q });
    }
    let nu = common_nu(c, &solved.p_vectors)?;
    let phi = build_phi(c, nu)?;
    let q_factorial = Rational::from_integer(combinatorics::factorial(q));
    let terms = solved
        .compositions
        .elements
        .iter()
        .zip(&solved.p_vectors)
        .zip(&solved.b)
        .map(|((m, p), bm)| {
            let upsilon: UpsilonMatrix = build_upsilon(&phi, p, nu)?;
            Ok(DecompositionTerm {
                composition: m.clone(),
                p: p.clone(),
                coefficient: bm / &q_factorial,
                nabla: Nabla::new(&upsilon, q, Sampling::WithReplacement)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let parts = terms.iter().map(|t| (t.coefficient.clone(), ProbabilityFunction::Nabla(t.nabla.clone()))).collect();
    let (lambda, w1, w2) = split(parts)?;
    if lambda != solved.lambda {
        return Err(Error::VerificationFailed(format!("lambda {lambda} differs from the solved {}", solved.lambda)));
    }
    let target = ProbabilityFunction::symmetrized(c.clone())?;
    let checked = verify(&target, &lambda, &w1, &w2, verify_n)?;
    Ok(Decomposition {
        q,
        lambda,
        w1,
        w2,
        g: solved.g,
        nu,
        p_vectors: solved.p_vectors.clone(),
        terms,
        verified_up_to: verify_n,
        verified_descriptions: checked,
    })
}

/// Decomposes a finite mixture `Σ μ_t y_{c_t}` (or a single `y_c`) with one
/// set of frequency vectors shared by all components.
pub fn decompose_px(w: &ProbabilityFunction, verify_n: usize) -> Result<Decomposition> {
    let components: Vec<(Rational, SimplexPoint)> = match w {
        ProbabilityFunction::Symmetrized(s) => vec![(Rational::one(), s.point().clone())],
        ProbabilityFunction::Mixture(m) => mixture_points(m)?,
        other => {
            return Err(Error::InvalidMixture(format!(
                "expected a mixture of symmetrized functions, got {}",
                other.class()
            )))
        }
    };
    let q = w.level();
    let solved = choose_p_vectors(&compositions(q)?)?;
    let mut w1_parts = Vec::new();
    let mut w2_parts = Vec::new();
    let mut nu = 1usize;
    for (mu, c) in &components {
        let d = decompose_y_with(c, &solved, 0)?;
        nu = num_integer::lcm(nu, d.nu);
        w1_parts.push((mu.clone(), d.w1));
        w2_parts.push((mu.clone(), d.w2));
    }
    let w1 = ProbabilityFunction::mixture(w1_parts)?;
    let w2 = ProbabilityFunction::mixture(w2_parts)?;
    let checked = verify(w, &solved.lambda, &w1, &w2, verify_n)?;
    Ok(Decomposition {
        q,
        lambda: solved.lambda.clone(),
        w1,
        w2,
        g: solved.g,
        nu,
        p_vectors: solved.p_vectors,
        terms: Vec::new(),
        verified_up_to: verify_n,
        verified_descriptions: checked,
    })
}

fn mixture_points(m: &Mixture) -> Result<Vec<(Rational, SimplexPoint)>> {
    m.parts()
        .iter()
        .map(|(mu, f)| match f {
            ProbabilityFunction::Symmetrized(s) => Ok((mu.clone(), s.point().clone())),
            other => Err(Error::InvalidMixture(format!("component of class {} is not symmetrized", other.class()))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn point(x: &[i64]) -> SimplexPoint {
        SimplexPoint::from_entries(x.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn composition_sets() {
        assert_eq!(compositions(1).unwrap().elements(), &[vec![1]]);
        assert_eq!(compositions(2).unwrap().elements(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(3).unwrap().len(), 10);
        assert!(compositions(6).is_err());
        assert!(compositions(0).is_err());
    }

    #[test]
    fn level_two_matrix() {
        let solved = choose_p_vectors(&compositions(2).unwrap()).unwrap();
        assert_eq!(solved.g, 1);
        let p: Vec<Vec<Rational>> = solved.p_vectors.iter().map(|p| p.entries().to_vec()).collect();
        assert_eq!(p, vec![vec![int(1), int(0)], vec![ratio(1, 2), ratio(1, 2)], vec![int(0), int(1)]]);
        assert_eq!(solved.determinant, ratio(1, 4));
        assert_eq!(solved.b, vec![int(-1), int(4), int(-1)]);
        assert_eq!(solved.lambda, int(1));
    }

    #[test]
    fn level_one_is_trivial() {
        let c = SimplexPoint::new(1, vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        let d = decompose_y(&c, 3).unwrap();
        assert_eq!(d.lambda, int(0));
        assert_eq!(d.w1, d.w2);
        for n in 0..=3 {
            for sd in StateDescription::all(1, n).unwrap() {
                assert_eq!(d.w1.eval_sd(&sd).unwrap(), ProbabilityFunction::product(c.clone()).eval_sd(&sd).unwrap());
            }
        }
    }

    #[test]
    fn level_two_example() {
        let d = decompose_y(&point(&[0, 1, 0, 0]), 3).unwrap();
        assert_eq!(d.lambda, int(1));
        assert_eq!(d.nu, 2);
        assert_eq!(d.verified_descriptions, 1 + 4 + 16 + 64);
        let ProbabilityFunction::Mixture(w1) = &d.w1 else { panic!() };
        assert_eq!(w1.parts().len(), 1);
        let ProbabilityFunction::Mixture(w2) = &d.w2 else { panic!() };
        assert_eq!(w2.parts().iter().map(|(w, _)| w.clone()).collect::<Vec<_>>(), vec![ratio(1, 2), ratio(1, 2)]);

        let degenerate = decompose_y(&point(&[1, 0, 0, 0]), 3).unwrap();
        assert_eq!(degenerate.lambda, int(1));
    }

    #[test]
    fn px_mixtures() {
        let mix = ProbabilityFunction::mixture(vec![
            (ratio(1, 2), ProbabilityFunction::symmetrized(point(&[0, 1, 0, 0])).unwrap()),
            (ratio(1, 2), ProbabilityFunction::symmetrized(point(&[1, 0, 0, 0])).unwrap()),
        ])
        .unwrap();
        assert_eq!(decompose_px(&mix, 3).unwrap().lambda, int(1));

        let single = ProbabilityFunction::symmetrized(point(&[0, 1, 0, 0])).unwrap();
        let a = decompose_px(&single, 3).unwrap();
        let b = decompose_y(&point(&[0, 1, 0, 0]), 3).unwrap();
        assert_eq!(a.lambda, b.lambda);

        let bad = ProbabilityFunction::mixture(vec![(int(1), ProbabilityFunction::product(point(&[0, 1, 0, 0])))]).unwrap();
        assert!(matches!(decompose_px(&bad, 2), Err(Error::InvalidMixture(_))));
    }

    #[test]
    fn first_exponent_is_regular_through_level_five() {
        for q in 1..=MAX_DECOMPOSE_LEVEL {
            let solved = choose_p_vectors(&compositions(q).unwrap()).unwrap();
            assert_eq!(solved.g, 1);
            assert!(!solved.lambda.is_negative());
            let ident = linalg::multiply(&solved.a, &solved.inverse);
            assert_eq!(ident, linalg::identity(solved.compositions.len()));
        }
    }
}
