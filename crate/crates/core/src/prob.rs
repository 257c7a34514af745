//! Probability functions on the state descriptions of `L_q`.
//!
//! A probability function is determined by its values on state
//! descriptions; everything here is exact. The concrete classes are
//! product functions `w_x`, their predicate-symmetrizations `y_c`, finite
//! mixtures, the row-pick averages from [`crate::nabla`], and restrictions
//! of any of these to a smaller language.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::logic::formula::{self, QfFormula};
use crate::logic::{AtomTable, PredPermutation, StateDescription};
use crate::nabla::Nabla;
use crate::rational::{self, Rational};

/// Largest level for which the `q!` predicate permutations are enumerated.
pub const MAX_SYMMETRIC_LEVEL: u32 = 7;
/// Largest level gap `r - q` a restriction may bridge.
pub const MAX_RESTRICTION_GAP: u32 = 8;
/// Cap on the refinements enumerated for one marginal value.
pub const MAX_REFINEMENTS: u128 = 1 << 24;

/// Anything that assigns exact values to the state descriptions of one
/// language. The checkers in [`crate::check`] work against this trait so
/// that arbitrary tables can be audited too.
pub trait Valuation {
    fn level(&self) -> u32;

    /// Value on a state description already known to be at [`Self::level`].
    fn value(&self, sd: &StateDescription) -> Result<Rational>;

    fn eval_sd(&self, sd: &StateDescription) -> Result<Rational> {
        if sd.q() != self.level() {
            return Err(Error::LevelMismatch { expected: self.level(), found: sd.q() });
        }
        self.value(sd)
    }
}

impl<T: Valuation + ?Sized> Valuation for &T {
    fn level(&self) -> u32 {
        (**self).level()
    }

    fn value(&self, sd: &StateDescription) -> Result<Rational> {
        (**self).value(sd)
    }
}

/// A point of the probability simplex over the `2^q` atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplexPoint {
    q: u32,
    x: Vec<Rational>,
}

impl SimplexPoint {
    pub fn new(q: u32, x: Vec<Rational>) -> Result<Self> {
        let table = AtomTable::new(q)?;
        if x.len() != table.len() {
            return Err(Error::InvalidSimplexPoint(format!(
                "L_{q} has {} atoms but {} entries were given",
                table.len(),
                x.len()
            )));
        }
        if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(Error::InvalidSimplexPoint(format!("entry {} is negative ({v})", i + 1)));
        }
        let total = rational::sum(&x);
        if !total.is_one() {
            return Err(Error::InvalidSimplexPoint(format!("entries sum to {total}, not 1")));
        }
        Ok(Self { q, x })
    }

    /// Infers `q` from the number of entries.
    pub fn from_entries(x: Vec<Rational>) -> Result<Self> {
        let len = x.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidSimplexPoint(format!(
                "{len} entries is not 2^q for any q >= 1"
            )));
        }
        Self::new(len.trailing_zeros(), x)
    }

    pub fn uniform(q: u32) -> Result<Self> {
        let count = AtomTable::new(q)?.len();
        Self::new(q, vec![rational::ratio(1, count as i64); count])
    }

    /// Point mass on the atom with 1-based index `atom`.
    pub fn dirac(q: u32, atom: usize) -> Result<Self> {
        let count = AtomTable::new(q)?.len();
        if atom == 0 || atom > count {
            return Err(Error::AtomOutOfRange { index: atom, count });
        }
        let mut x = vec![Rational::zero(); count];
        x[atom - 1] = Rational::one();
        Self::new(q, x)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn entries(&self) -> &[Rational] {
        &self.x
    }

    /// `Π_i x_i^{n_i}` for the atom counts of `sd`.
    fn monomial(&self, sd: &StateDescription) -> Rational {
        product_value(&self.x, sd)
    }
}

fn product_value(x: &[Rational], sd: &StateDescription) -> Rational {
    let mut acc = Rational::one();
    for (i, n) in sd.counts().into_iter().enumerate() {
        if n > 0 {
            if x[i].is_zero() {
                return Rational::zero();
            }
            acc *= rational::pow(&x[i], n);
        }
    }
    acc
}

/// `y_c`: the average of `w_{σc}` over all `q!` predicate permutations σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetrized {
    c: SimplexPoint,
    /// Distinct `σc` with the number of σ producing each.
    orbit: Vec<(Vec<Rational>, usize)>,
}

impl Symmetrized {
    pub fn new(c: SimplexPoint) -> Result<Self> {
        if c.q > MAX_SYMMETRIC_LEVEL {
            return Err(Error::ResourceCap {
                what: "predicate permutations (level)".into(),
                requested: c.q as u128,
                limit: MAX_SYMMETRIC_LEVEL as u128,
            });
        }
        let mut orbit: Vec<(Vec<Rational>, usize)> = Vec::new();
        for sigma in PredPermutation::all(c.q)? {
            let image = sigma.apply_vector(&c.x);
            match orbit.iter_mut().find(|(v, _)| *v == image) {
                Some((_, k)) => *k += 1,
                None => orbit.push((image, 1)),
            }
        }
        Ok(Self { c, orbit })
    }

    pub fn point(&self) -> &SimplexPoint {
        &self.c
    }

    fn value(&self, sd: &StateDescription) -> Rational {
        let (total, count) = self.orbit.iter().fold((Rational::zero(), 0usize), |(acc, n), (x, k)| {
            (acc + product_value(x, sd) * Rational::from_integer((*k).into()), n + k)
        });
        total / Rational::from_integer(count.into())
    }
}

/// A finite convex combination of probability functions on one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mixture {
    q: u32,
    parts: Vec<(Rational, ProbabilityFunction)>,
}

impl Mixture {
    pub fn new(parts: Vec<(Rational, ProbabilityFunction)>) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidMixture("no components".into()));
        };
        let q = first.level();
        if let Some((_, f)) = parts.iter().find(|(_, f)| f.level() != q) {
            return Err(Error::InvalidMixture(format!(
                "components at different levels (L_{q} and L_{})",
                f.level()
            )));
        }
        if let Some((w, _)) = parts.iter().find(|(w, _)| w.is_negative()) {
            return Err(Error::InvalidMixture(format!("negative weight {w}")));
        }
        let total = rational::sum(parts.iter().map(|(w, _)| w));
        if !total.is_one() {
            return Err(Error::InvalidMixture(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { q, parts })
    }

    pub fn parts(&self) -> &[(Rational, ProbabilityFunction)] {
        &self.parts
    }

    fn value(&self, sd: &StateDescription) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (weight, f) in &self.parts {
            if !weight.is_zero() {
                acc += weight * f.value(sd)?;
            }
        }
        Ok(acc)
    }
}

/// `w^{L_r}` restricted to the sentences of `L_q`, evaluated by summing
/// over every refinement of a level-`q` state description to level `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    source: Box<ProbabilityFunction>,
    q: u32,
    table: AtomTable,
    source_table: AtomTable,
}

impl Restriction {
    pub fn source(&self) -> &ProbabilityFunction {
        &self.source
    }

    fn value(&self, sd: &StateDescription) -> Result<Rational> {
        let gap = self.source_table.q() - self.q;
        let patterns: Vec<Pattern> = sd
            .indices()
            .iter()
            .map(|&a| Pattern::prefix(self.table.mask(a), gap))
            .collect();
        marginal_value(self.source.as_ref(), &self.source_table, &patterns)
    }
}

/// A partially specified atom: the bits selected by `known` are fixed to
/// the corresponding bits of `value`; the rest range freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pattern {
    pub value: u32,
    pub known: u32,
}

impl Pattern {
    /// First predicates fixed by `mask`, the trailing `gap` predicates free.
    pub fn prefix(mask: u32, gap: u32) -> Self {
        let known_low = (1u32 << gap) - 1;
        Self { value: mask << gap, known: !known_low }
    }
}

/// `Σ w(Φ)` over the state descriptions `Φ` of `w`'s level that agree with
/// `patterns` on the fixed bits: the probability of the conjunction of the
/// partial atoms.
pub fn marginal_value<V: Valuation + ?Sized>(
    w: &V,
    table: &AtomTable,
    patterns: &[Pattern],
) -> Result<Rational> {
    let full = (1u32 << table.q()) - 1;
    let free: Vec<Vec<u32>> = patterns
        .iter()
        .map(|p| {
            let open = full & !p.known;
            // Enumerate submasks of `open`.
            let mut subs = Vec::with_capacity(1 << open.count_ones());
            let mut s = open;
            loop {
                subs.push((p.value & p.known & full) | s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & open;
            }
            subs.reverse();
            subs
        })
        .collect();
    let total: u128 = free.iter().map(|f| f.len() as u128).product();
    if total > MAX_REFINEMENTS {
        return Err(Error::ResourceCap {
            what: "refinements".into(),
            requested: total,
            limit: MAX_REFINEMENTS,
        });
    }
    let radix: Vec<usize> = free.iter().map(Vec::len).collect();
    let mut digits = vec![0usize; patterns.len()];
    let mut acc = Rational::zero();
    loop {
        let atoms = digits
            .iter()
            .zip(&free)
            .map(|(&d, subs)| table.index_of_mask(subs[d]))
            .collect();
        acc += w.value(&StateDescription::from_indices_unchecked(table.q(), atoms))?;
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(acc);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < radix[k] {
                break;
            }
            digits[k] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbabilityFunction {
    Product(SimplexPoint),
    Symmetrized(Symmetrized),
    Mixture(Mixture),
    Nabla(Nabla),
    Restricted(Restriction),
}

impl ProbabilityFunction {
    pub fn product(x: SimplexPoint) -> Self {
        Self::Product(x)
    }

    pub fn symmetrized(c: SimplexPoint) -> Result<Self> {
        Ok(Self::Symmetrized(Symmetrized::new(c)?))
    }

    pub fn mixture(parts: Vec<(Rational, ProbabilityFunction)>) -> Result<Self> {
        Ok(Self::Mixture(Mixture::new(parts)?))
    }

    pub fn class(&self) -> &'static str {
        match self {
            Self::Product(_) => "product",
            Self::Symmetrized(_) => "symmetrized",
            Self::Mixture(_) => "mixture",
            Self::Nabla(_) => "nabla",
            Self::Restricted(_) => "restricted",
        }
    }

    pub fn eval_sentence(&self, phi: &QfFormula, constants: &[u32]) -> Result<Rational> {
        eval_sentence(self, phi, constants)
    }
}

impl Valuation for ProbabilityFunction {
    fn level(&self) -> u32 {
        match self {
            Self::Product(x) => x.q,
            Self::Symmetrized(y) => y.c.q,
            Self::Mixture(m) => m.q,
            Self::Nabla(n) => n.q(),
            Self::Restricted(r) => r.q,
        }
    }

    fn value(&self, sd: &StateDescription) -> Result<Rational> {
        if sd.is_empty() {
            return Ok(Rational::one());
        }
        match self {
            Self::Product(x) => Ok(x.monomial(sd)),
            Self::Symmetrized(y) => Ok(y.value(sd)),
            Self::Mixture(m) => m.value(sd),
            Self::Nabla(n) => Ok(n.value(sd)),
            Self::Restricted(r) => r.value(sd),
        }
    }
}

pub fn product_function(x: SimplexPoint) -> ProbabilityFunction {
    ProbabilityFunction::product(x)
}

pub fn symmetrized(c: SimplexPoint) -> Result<ProbabilityFunction> {
    ProbabilityFunction::symmetrized(c)
}

pub fn eval_sd<V: Valuation + ?Sized>(w: &V, sd: &StateDescription) -> Result<Rational> {
    w.eval_sd(sd)
}

/// `w(φ)` as the sum of `w` over the state descriptions on `constants`
/// satisfying `φ`.
pub fn eval_sentence<V: Valuation + ?Sized>(
    w: &V,
    phi: &QfFormula,
    constants: &[u32],
) -> Result<Rational> {
    let mut acc = Rational::zero();
    let mut failure = None;
    formula::for_each_model(phi, w.level(), constants, |sd| {
        if failure.is_none() {
            match w.value(&sd) {
                Ok(v) => acc += v,
                Err(e) => failure = Some(e),
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// Restricts a level-`r` function to `L_q`, `q <= r`.
pub fn restrict(w: &ProbabilityFunction, q: u32) -> Result<ProbabilityFunction> {
    let r = w.level();
    if q > r || q == 0 {
        return Err(Error::InvalidRestriction { from: r, to: q });
    }
    if q == r {
        return Ok(w.clone());
    }
    if r - q > MAX_RESTRICTION_GAP {
        return Err(Error::ResourceCap {
            what: "restriction level gap".into(),
            requested: (r - q) as u128,
            limit: MAX_RESTRICTION_GAP as u128,
        });
    }
    Ok(ProbabilityFunction::Restricted(Restriction {
        source: Box::new(w.clone()),
        q,
        table: AtomTable::new(q)?,
        source_table: AtomTable::new(r)?,
    }))
}

/// Explicit values on chosen state descriptions. State descriptions absent
/// from the table are worth 0, except the empty one which defaults to 1.
///
/// Nothing checks that a table is a probability function; that is what
/// [`crate::check::check_additivity`] is for.
#[derive(Debug, Clone, Default)]
pub struct TableFunction {
    q: u32,
    values: HashMap<Vec<usize>, Rational>,
}

impl TableFunction {
    pub fn new(q: u32) -> Result<Self> {
        AtomTable::new(q)?;
        Ok(Self { q, values: HashMap::new() })
    }

    /// Sets the value of the state description with 1-based atoms `h`.
    pub fn set(&mut self, h: &[usize], value: Rational) -> Result<()> {
        let sd = StateDescription::new(self.q, h)?;
        self.values.insert(sd.indices().to_vec(), value);
        Ok(())
    }
}

impl Valuation for TableFunction {
    fn level(&self) -> u32 {
        self.q
    }

    fn value(&self, sd: &StateDescription) -> Result<Rational> {
        Ok(match self.values.get(sd.indices()) {
            Some(v) => v.clone(),
            None if sd.is_empty() => Rational::one(),
            None => Rational::zero(),
        })
    }
}

/// A transparent cache of state-description values for one evaluation run.
pub struct Session<'a, V: Valuation + ?Sized> {
    inner: &'a V,
    cache: Mutex<HashMap<StateDescription, Rational>>,
}

impl<'a, V: Valuation + ?Sized> Session<'a, V> {
    pub fn new(inner: &'a V) -> Self {
        Self { inner, cache: Mutex::new(HashMap::new()) }
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("cache poisoned").len()
    }
}

impl<V: Valuation + ?Sized> Valuation for Session<'_, V> {
    fn level(&self) -> u32 {
        self.inner.level()
    }

    fn value(&self, sd: &StateDescription) -> Result<Rational> {
        if let Some(v) = self.cache.lock().expect("cache poisoned").get(sd) {
            return Ok(v.clone());
        }
        let v = self.inner.value(sd)?;
        self.cache.lock().expect("cache poisoned").insert(sd.clone(), v.clone());
        Ok(v)
    }
}

/// `Σ_{h ∈ atoms^n} w(h)`: total mass on `n` constants, 1 for a
/// probability function.
pub fn total_mass<V: Valuation + ?Sized>(w: &V, n: usize) -> Result<Rational> {
    let count = 1usize << w.level();
    let mut acc = Rational::zero();
    for atoms in combinatorics::tuples(count, n) {
        acc += w.value(&StateDescription::from_indices_unchecked(w.level(), atoms))?;
    }
    Ok(acc)
}
