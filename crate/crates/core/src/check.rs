//! Exhaustive exact checks of the rational principles within a bounded
//! window of constants.
//!
//! Every checker enumerates in a fixed order (number of constants
//! ascending, state descriptions lexicographic, permutations in
//! lexicographic one-line order) and stops at the first counterexample, so
//! witnesses are reproducible. A pass means the whole window was examined.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::logic::{apply_const_perm, apply_pred_perm, AtomTable, PredPermutation, StateDescription};
use crate::prob::{marginal_value, Pattern, Session, Valuation};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Principle {
    Ex,
    Px,
    #[serde(rename = "IP")]
    Ip,
    #[serde(rename = "WIP")]
    Wip,
    Additivity,
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Principle::Ex => "Ex",
            Principle::Px => "Px",
            Principle::Ip => "IP",
            Principle::Wip => "WIP",
            Principle::Additivity => "Additivity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// What was evaluated when a check failed. State descriptions and
/// permutations are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessInputs {
    /// `w(Θ)` against `w(τΘ)`.
    Ex { sd: Vec<usize>, tau: Vec<usize> },
    /// `w(Θ)` against `w(σΘ)`.
    Px { sd: Vec<usize>, sigma: Vec<u32> },
    /// `w(θ ∧ φ)` against `w(θ) w(φ)`, `θ` over `P_1..P_p` on the first
    /// constants and `φ` over `P_{p+1}..P_{p+r}` on the following ones.
    Wip { p: u32, r: u32, theta: Vec<usize>, phi: Vec<usize> },
    /// `w(Θ ∧ Θ')` against `w(Θ) w(Θ')`, `Θ'` on the constants after `Θ`.
    Ip { left: Vec<usize>, right: Vec<usize> },
    /// `Σ_α w(Θ ∧ α)` against `w(Θ)`, or `w(∅)` against 1.
    Additivity { sd: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(flatten)]
    pub inputs: WitnessInputs,
    #[serde(with = "rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub principle: Principle,
    pub bound: usize,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckReport {
    fn pass(principle: Principle, bound: usize) -> Self {
        Self { principle, bound, outcome: Outcome::Pass, witness: None }
    }

    fn fail(principle: Principle, bound: usize, inputs: WitnessInputs, lhs: Rational, rhs: Rational) -> Self {
        Self { principle, bound, outcome: Outcome::Fail, witness: Some(Witness { inputs, lhs, rhs }) }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

/// Upper bound on the evaluations one check may plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_cases: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_cases: 1 << 24 }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Checker {
    limits: Limits,
}

impl Checker {
    pub fn new(limits: Limits) -> Self {
        Self { limits }
    }

    fn guard(&self, what: &str, cases: u128) -> Result<()> {
        if cases > self.limits.max_cases {
            return Err(Error::ResourceCap {
                what: what.to_string(),
                requested: cases,
                limit: self.limits.max_cases,
            });
        }
        Ok(())
    }

    /// Invariance under every permutation of the constants.
    pub fn ex<V: Valuation + ?Sized>(&self, w: &V, n_max: usize) -> Result<CheckReport> {
        check_bound(n_max)?;
        let q = w.level();
        let a = atom_count(q);
        let cases = (1..=n_max).fold(0u128, |acc, n| {
            acc.saturating_add(a.saturating_pow(n as u32).saturating_mul(factorial(n)))
        });
        self.guard("constant-permutation cases", cases)?;
        let s = Session::new(w);
        for n in 1..=n_max {
            let perms: Vec<Vec<usize>> = combinatorics::permutations(n)
                .into_iter()
                .skip(1)
                .map(|p| p.into_iter().map(|i| i + 1).collect())
                .collect();
            for sd in StateDescription::all(q, n)? {
                let lhs = s.value(&sd)?;
                for tau in &perms {
                    let rhs = s.value(&apply_const_perm(tau, &sd)?)?;
                    if lhs != rhs {
                        let inputs = WitnessInputs::Ex { sd: sd.one_based(), tau: tau.clone() };
                        return Ok(CheckReport::fail(Principle::Ex, n_max, inputs, lhs, rhs));
                    }
                }
            }
        }
        Ok(CheckReport::pass(Principle::Ex, n_max))
    }

    /// Invariance under every permutation of the predicates.
    pub fn px<V: Valuation + ?Sized>(&self, w: &V, n_max: usize) -> Result<CheckReport> {
        check_bound(n_max)?;
        let q = w.level();
        let a = atom_count(q);
        let sds = (1..=n_max).fold(0u128, |acc, n| acc.saturating_add(a.saturating_pow(n as u32)));
        self.guard("predicate-permutation cases", factorial(q as usize).saturating_mul(sds))?;
        let perms: Vec<PredPermutation> = PredPermutation::all(q)?.into_iter().skip(1).collect();
        let s = Session::new(w);
        for n in 1..=n_max {
            for sd in StateDescription::all(q, n)? {
                let lhs = s.value(&sd)?;
                for sigma in &perms {
                    let rhs = s.value(&apply_pred_perm(sigma, &sd)?)?;
                    if lhs != rhs {
                        let inputs = WitnessInputs::Px { sd: sd.one_based(), sigma: sigma.images() };
                        return Ok(CheckReport::fail(Principle::Px, n_max, inputs, lhs, rhs));
                    }
                }
            }
        }
        Ok(CheckReport::pass(Principle::Px, n_max))
    }

    /// Factorization over state descriptions on disjoint blocks of
    /// constants, `m, n >= 1`, `m + n <= n_max`.
    pub fn ip<V: Valuation + ?Sized>(&self, w: &V, n_max: usize) -> Result<CheckReport> {
        check_bound(n_max)?;
        let q = w.level();
        let a = atom_count(q);
        let mut cases = 0u128;
        for t in 2..=n_max {
            for m in 1..t {
                let block = a.saturating_pow(t as u32).saturating_mul(a.saturating_pow(m as u32).saturating_add(1));
                cases = cases.saturating_add(block);
            }
        }
        self.guard("disjoint-block cases", cases)?;
        let s = Session::new(w);
        let table = AtomTable::new(q)?;
        for t in 2..=n_max {
            for m in 1..t {
                let rights: Vec<(StateDescription, Rational)> = StateDescription::all(q, t - m)?
                    .map(|right| {
                        let v = shifted_value(&s, &table, m, &right)?;
                        Ok((right, v))
                    })
                    .collect::<Result<_>>()?;
                for left in StateDescription::all(q, m)? {
                    let wl = s.value(&left)?;
                    for (right, wr) in &rights {
                        let lhs = s.value(&left.concat(right)?)?;
                        let rhs = &wl * wr;
                        if lhs != rhs {
                            let inputs = WitnessInputs::Ip { left: left.one_based(), right: right.one_based() };
                            return Ok(CheckReport::fail(Principle::Ip, n_max, inputs, lhs, rhs));
                        }
                    }
                }
            }
        }
        Ok(CheckReport::pass(Principle::Ip, n_max))
    }

    /// Factorization over sentences sharing neither constants nor
    /// predicates: `θ` over `P_1..P_p` on `a_1..a_m`, `φ` over
    /// `P_{p+1}..P_{p+r}` on `a_{m+1}..a_{m+n}`. `w` lives on `L_{p+r}`.
    pub fn wip<V: Valuation + ?Sized>(&self, w: &V, p: u32, r: u32, n_max: usize) -> Result<CheckReport> {
        check_bound(n_max)?;
        if p == 0 || r == 0 {
            return Err(Error::InvalidBound(format!("predicate blocks must be nonempty, got p = {p}, r = {r}")));
        }
        if w.level() != p + r {
            return Err(Error::LevelMismatch { expected: p + r, found: w.level() });
        }
        let a = atom_count(p + r);
        let mut cases = 0u128;
        for t in 2..=n_max {
            for m in 1..t {
                let block = a.saturating_pow(t as u32).saturating_mul(3);
                cases = cases.saturating_add(block.saturating_add(a.saturating_pow(m as u32)));
            }
        }
        self.guard("disjoint-block cases", cases)?;
        let s = Session::new(w);
        let blocks = WipBlocks::new(p, r)?;
        for t in 2..=n_max {
            for m in 1..t {
                let phis: Vec<(StateDescription, Rational)> = StateDescription::all(r, t - m)?
                    .map(|phi| {
                        let v = blocks.phi_value(&s, m, &phi)?;
                        Ok((phi, v))
                    })
                    .collect::<Result<_>>()?;
                for theta in StateDescription::all(p, m)? {
                    let wt = blocks.theta_value(&s, &theta)?;
                    for (phi, wp) in &phis {
                        let lhs = blocks.joint_value(&s, &theta, phi)?;
                        let rhs = &wt * wp;
                        if lhs != rhs {
                            let inputs = WitnessInputs::Wip { p, r, theta: theta.one_based(), phi: phi.one_based() };
                            return Ok(CheckReport::fail(Principle::Wip, n_max, inputs, lhs, rhs));
                        }
                    }
                }
            }
        }
        Ok(CheckReport::pass(Principle::Wip, n_max))
    }

    /// `w(∅) = 1` and `Σ_α w(Θ ∧ α(a_{n+1})) = w(Θ)` for every `Θ` on
    /// fewer than `n_max` constants.
    pub fn additivity<V: Valuation + ?Sized>(&self, w: &V, n_max: usize) -> Result<CheckReport> {
        check_bound(n_max)?;
        let q = w.level();
        let a = atom_count(q);
        let cases = (1..=n_max).fold(0u128, |acc, n| acc.saturating_add(a.saturating_pow(n as u32)));
        self.guard("refinement cases", cases)?;
        let s = Session::new(w);
        let empty = StateDescription::empty(q);
        let base = s.value(&empty)?;
        if !base.is_one() {
            let inputs = WitnessInputs::Additivity { sd: Vec::new() };
            return Ok(CheckReport::fail(Principle::Additivity, n_max, inputs, base, Rational::one()));
        }
        for n in 0..n_max {
            for sd in StateDescription::all(q, n)? {
                let lhs = refinement_sum(&s, &sd)?;
                let rhs = s.value(&sd)?;
                if lhs != rhs {
                    let inputs = WitnessInputs::Additivity { sd: sd.one_based() };
                    return Ok(CheckReport::fail(Principle::Additivity, n_max, inputs, lhs, rhs));
                }
            }
        }
        Ok(CheckReport::pass(Principle::Additivity, n_max))
    }
}

pub fn check_ex<V: Valuation + ?Sized>(w: &V, n_max: usize) -> Result<CheckReport> {
    Checker::default().ex(w, n_max)
}

pub fn check_px<V: Valuation + ?Sized>(w: &V, n_max: usize) -> Result<CheckReport> {
    Checker::default().px(w, n_max)
}

pub fn check_ip<V: Valuation + ?Sized>(w: &V, n_max: usize) -> Result<CheckReport> {
    Checker::default().ip(w, n_max)
}

pub fn check_wip<V: Valuation + ?Sized>(w: &V, p: u32, r: u32, n_max: usize) -> Result<CheckReport> {
    Checker::default().wip(w, p, r, n_max)
}

pub fn check_additivity<V: Valuation + ?Sized>(w: &V, n_max: usize) -> Result<CheckReport> {
    Checker::default().additivity(w, n_max)
}

/// Re-evaluates a witness from scratch, returning `(lhs, rhs)`.
pub fn reproduce<V: Valuation + ?Sized>(w: &V, witness: &WitnessInputs) -> Result<(Rational, Rational)> {
    let q = w.level();
    match witness {
        WitnessInputs::Ex { sd, tau } => {
            let sd = StateDescription::new(q, sd)?;
            Ok((w.eval_sd(&sd)?, w.eval_sd(&apply_const_perm(tau, &sd)?)?))
        }
        WitnessInputs::Px { sd, sigma } => {
            let sd = StateDescription::new(q, sd)?;
            let sigma = PredPermutation::new(q, sigma)?;
            Ok((w.eval_sd(&sd)?, w.eval_sd(&apply_pred_perm(&sigma, &sd)?)?))
        }
        WitnessInputs::Ip { left, right } => {
            let left = StateDescription::new(q, left)?;
            let right = StateDescription::new(q, right)?;
            let lhs = w.eval_sd(&left.concat(&right)?)?;
            let wr = shifted_value(w, &AtomTable::new(q)?, left.n(), &right)?;
            Ok((lhs, w.eval_sd(&left)? * wr))
        }
        WitnessInputs::Wip { p, r, theta, phi } => {
            if q != p + r {
                return Err(Error::LevelMismatch { expected: p + r, found: q });
            }
            let blocks = WipBlocks::new(*p, *r)?;
            let theta = StateDescription::new(*p, theta)?;
            let phi = StateDescription::new(*r, phi)?;
            let lhs = blocks.joint_value(w, &theta, &phi)?;
            let rhs = blocks.theta_value(w, &theta)? * blocks.phi_value(w, theta.n(), &phi)?;
            Ok((lhs, rhs))
        }
        WitnessInputs::Additivity { sd } => {
            let sd = StateDescription::new(q, sd)?;
            if sd.is_empty() {
                let base = w.eval_sd(&sd)?;
                if !base.is_one() {
                    return Ok((base, Rational::one()));
                }
            }
            Ok((refinement_sum(w, &sd)?, w.eval_sd(&sd)?))
        }
    }
}

fn check_bound(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::InvalidBound("the bound must be at least 1".into()));
    }
    Ok(())
}

fn atom_count(q: u32) -> u128 {
    1u128 << q.min(120)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

fn refinement_sum<V: Valuation + ?Sized>(w: &V, sd: &StateDescription) -> Result<Rational> {
    let mut acc = Rational::zero();
    for atom in 0..1usize << w.level() {
        acc += w.value(&sd.extended(atom))?;
    }
    Ok(acc)
}

/// `w(Θ')` for `Θ'` placed on the constants `a_{m+1}..`, the first `m`
/// constants left unconstrained.
fn shifted_value<V: Valuation + ?Sized>(w: &V, table: &AtomTable, m: usize, sd: &StateDescription) -> Result<Rational> {
    let full = (1u32 << table.q()) - 1;
    let patterns: Vec<Pattern> = std::iter::repeat_n(Pattern { value: 0, known: 0 }, m)
        .chain(sd.indices().iter().map(|&i| Pattern { value: table.mask(i), known: full }))
        .collect();
    marginal_value(w, table, &patterns)
}

/// Partial atoms of `L_{p+r}` for the two predicate blocks.
struct WipBlocks {
    r: u32,
    theta_table: AtomTable,
    phi_table: AtomTable,
    table: AtomTable,
}

impl WipBlocks {
    fn new(p: u32, r: u32) -> Result<Self> {
        Ok(Self { r, theta_table: AtomTable::new(p)?, phi_table: AtomTable::new(r)?, table: AtomTable::new(p + r)? })
    }

    fn theta_patterns(&self, theta: &StateDescription) -> impl Iterator<Item = Pattern> + '_ {
        let known = ((1u32 << self.theta_table.q()) - 1) << self.r;
        theta.indices().to_vec().into_iter().map(move |i| Pattern { value: self.theta_table.mask(i) << self.r, known })
    }

    fn phi_patterns(&self, phi: &StateDescription) -> impl Iterator<Item = Pattern> + '_ {
        let known = (1u32 << self.r) - 1;
        phi.indices().to_vec().into_iter().map(move |i| Pattern { value: self.phi_table.mask(i), known })
    }

    fn theta_value<V: Valuation + ?Sized>(&self, w: &V, theta: &StateDescription) -> Result<Rational> {
        marginal_value(w, &self.table, &self.theta_patterns(theta).collect::<Vec<_>>())
    }

    fn phi_value<V: Valuation + ?Sized>(&self, w: &V, m: usize, phi: &StateDescription) -> Result<Rational> {
        let patterns: Vec<Pattern> = std::iter::repeat_n(Pattern { value: 0, known: 0 }, m)
            .chain(self.phi_patterns(phi))
            .collect();
        marginal_value(w, &self.table, &patterns)
    }

    fn joint_value<V: Valuation + ?Sized>(&self, w: &V, theta: &StateDescription, phi: &StateDescription) -> Result<Rational> {
        let patterns: Vec<Pattern> = self.theta_patterns(theta).chain(self.phi_patterns(phi)).collect();
        marginal_value(w, &self.table, &patterns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nabla::{nabla, UpsilonMatrix};
    use crate::prob::{ProbabilityFunction, SimplexPoint, TableFunction};
    use crate::rational::{int, ratio};

    fn point(x: &[i64]) -> SimplexPoint {
        SimplexPoint::from_entries(x.iter().map(|&v| int(v)).collect()).unwrap()
    }

    fn y0100() -> ProbabilityFunction {
        ProbabilityFunction::symmetrized(point(&[0, 1, 0, 0])).unwrap()
    }

    fn two_point_mixture() -> ProbabilityFunction {
        ProbabilityFunction::mixture(vec![
            (ratio(1, 2), ProbabilityFunction::product(point(&[1, 0]))),
            (ratio(1, 2), ProbabilityFunction::product(point(&[0, 1]))),
        ])
        .unwrap()
    }

    fn witness(report: &CheckReport) -> &Witness {
        report.witness.as_ref().expect("failing report carries a witness")
    }

    #[test]
    fn px_examples() {
        assert!(check_px(&y0100(), 3).unwrap().passed());
        assert!(check_px(&ProbabilityFunction::product(SimplexPoint::uniform(2).unwrap()), 3).unwrap().passed());

        let report = check_px(&ProbabilityFunction::product(point(&[0, 1, 0, 0])), 3).unwrap();
        let w = witness(&report);
        assert_eq!(w.inputs, WitnessInputs::Px { sd: vec![2], sigma: vec![2, 1] });
        assert_eq!((w.lhs.clone(), w.rhs.clone()), (int(1), int(0)));
    }

    #[test]
    fn ip_examples() {
        let report = check_ip(&y0100(), 3).unwrap();
        let w = witness(&report);
        assert_eq!(w.inputs, WitnessInputs::Ip { left: vec![2], right: vec![2] });
        assert_eq!((w.lhs.clone(), w.rhs.clone()), (ratio(1, 2), ratio(1, 4)));

        let report = check_ip(&two_point_mixture(), 3).unwrap();
        let w = witness(&report);
        assert_eq!(w.inputs, WitnessInputs::Ip { left: vec![1], right: vec![1] });
        assert_eq!((w.lhs.clone(), w.rhs.clone()), (ratio(1, 2), ratio(1, 4)));

        let x = SimplexPoint::new(2, vec![ratio(1, 2), ratio(1, 3), ratio(1, 6), int(0)]).unwrap();
        assert!(check_ip(&ProbabilityFunction::product(x), 3).unwrap().passed());
    }

    #[test]
    fn wip_examples() {
        let u = UpsilonMatrix::from_bit_strings(2, &[("11", 1), ("00", 1)]).unwrap();
        assert!(check_wip(&nabla(&u, 2).unwrap(), 1, 1, 3).unwrap().passed());

        let report = check_wip(&y0100(), 1, 1, 3).unwrap();
        let w = witness(&report);
        assert_eq!(w.inputs, WitnessInputs::Wip { p: 1, r: 1, theta: vec![1], phi: vec![1] });
        assert_eq!((w.lhs.clone(), w.rhs.clone()), (int(0), ratio(1, 4)));

        assert!(check_wip(&ProbabilityFunction::product(point(&[0, 0, 1, 0])), 1, 1, 3).unwrap().passed());
        assert!(matches!(check_wip(&y0100(), 1, 2, 3), Err(Error::LevelMismatch { .. })));
    }

    #[test]
    fn additivity_and_ex() {
        let u = UpsilonMatrix::from_bit_strings(3, &[("110", 2), ("011", 1)]).unwrap();
        let n = nabla(&u, 2).unwrap();
        for f in [ProbabilityFunction::product(point(&[0, 1, 0, 0])), n] {
            assert!(check_ex(&f, 3).unwrap().passed());
            assert!(check_additivity(&f, 3).unwrap().passed());
        }

        let mut table = TableFunction::new(1).unwrap();
        table.set(&[1], ratio(1, 2)).unwrap();
        table.set(&[2], ratio(1, 3)).unwrap();
        let report = check_additivity(&table, 2).unwrap();
        let w = witness(&report);
        assert_eq!(w.inputs, WitnessInputs::Additivity { sd: vec![] });
        assert_eq!((w.lhs.clone(), w.rhs.clone()), (ratio(5, 6), int(1)));
    }

    #[test]
    fn ex_failure_on_an_order_dependent_table() {
        let mut table = TableFunction::new(1).unwrap();
        table.set(&[1], ratio(1, 2)).unwrap();
        table.set(&[2], ratio(1, 2)).unwrap();
        table.set(&[1, 2], ratio(1, 2)).unwrap();
        table.set(&[2, 1], int(0)).unwrap();
        let report = check_ex(&table, 2).unwrap();
        let w = witness(&report);
        assert_eq!(w.inputs, WitnessInputs::Ex { sd: vec![1, 2], tau: vec![2, 1] });
        assert_eq!(reproduce(&table, &w.inputs).unwrap(), (w.lhs.clone(), w.rhs.clone()));
    }

    #[test]
    fn witnesses_reproduce() {
        let cases: Vec<(ProbabilityFunction, CheckReport)> = vec![
            (y0100(), check_ip(&y0100(), 3).unwrap()),
            (y0100(), check_wip(&y0100(), 1, 1, 3).unwrap()),
            (
                ProbabilityFunction::product(point(&[0, 1, 0, 0])),
                check_px(&ProbabilityFunction::product(point(&[0, 1, 0, 0])), 2).unwrap(),
            ),
        ];
        for (f, report) in cases {
            let w = witness(&report);
            let (lhs, rhs) = reproduce(&f, &w.inputs).unwrap();
            assert_eq!((&lhs, &rhs), (&w.lhs, &w.rhs));
            assert_ne!(lhs, rhs);
        }
    }

    #[test]
    fn caps_and_bounds() {
        let tight = Checker::new(Limits { max_cases: 10 });
        assert!(matches!(tight.px(&y0100(), 3), Err(Error::ResourceCap { .. })));
        assert!(matches!(check_ip(&y0100(), 0), Err(Error::InvalidBound(_))));
    }

    #[test]
    fn report_json_shape() {
        let report = check_ip(&y0100(), 3).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"principle":"IP","bound":3,"outcome":"fail","witness":{"left":[2],"right":[2],"lhs":"1/2","rhs":"1/4"}}"#
        );
        let back: CheckReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        let pass = serde_json::to_string(&check_px(&y0100(), 2).unwrap()).unwrap();
        assert_eq!(pass, r#"{"principle":"Px","bound":2,"outcome":"pass"}"#);
    }
}
