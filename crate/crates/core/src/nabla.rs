//! Row-pick functions of a big state description Υ.
//!
//! A state description of `L_ν` on `ν` constants is a `ν × ν` 0/1 matrix
//! whose row `i` lists the signs of `P_i` on `a_1..a_ν`. Choosing `q` rows
//! (the new `P_1..P_q`) gives a state description of `L_q` on `ν`
//! constants, and its column frequencies give a product function. The
//! function ∇ averages these over all `ν^q` choices with replacement.
//!
//! Rows are stored compressed, as distinct entries with multiplicities.
//! Entries are indexed by position, so two entries may carry the same bits.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{self, binomial};
use crate::error::{Error, Result};
use crate::logic::{AtomTable, StateDescription};
use crate::prob::{ProbabilityFunction, SimplexPoint, Symmetrized, MAX_SYMMETRIC_LEVEL};
use crate::rational::{self, Rational};

/// Cap on the row-type multisets enumerated for one ∇.
pub const MAX_PICK_TYPES: u128 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpsilonRow {
    pub bits: Vec<bool>,
    pub mult: usize,
}

/// A `ν × ν` 0/1 matrix stored as rows with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpsilonMatrix {
    nu: usize,
    rows: Vec<UpsilonRow>,
}

impl UpsilonMatrix {
    pub fn new(nu: usize, rows: Vec<UpsilonRow>) -> Result<Self> {
        if nu == 0 {
            return Err(Error::InvalidUpsilon("nu must be positive".into()));
        }
        if let Some(row) = rows.iter().find(|r| r.bits.len() != nu) {
            return Err(Error::InvalidUpsilon(format!(
                "row of length {} in a matrix with nu = {nu}",
                row.bits.len()
            )));
        }
        if rows.iter().any(|r| r.mult == 0) {
            return Err(Error::InvalidUpsilon("multiplicities must be positive".into()));
        }
        let total: usize = rows.iter().map(|r| r.mult).sum();
        if total != nu {
            return Err(Error::InvalidUpsilon(format!(
                "multiplicities sum to {total}, expected nu = {nu}"
            )));
        }
        Ok(Self { nu, rows })
    }

    /// Rows given as bit-strings such as `"1101"`.
    pub fn from_bit_strings(nu: usize, rows: &[(&str, usize)]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|&(bits, mult)| Ok(UpsilonRow { bits: parse_bits(bits)?, mult }))
            .collect::<Result<_>>()?;
        Self::new(nu, rows)
    }

    /// Uncompressed `ν × ν` form; identical rows are merged in order of
    /// first appearance.
    pub fn from_dense(rows: &[Vec<bool>]) -> Result<Self> {
        let mut compressed: Vec<UpsilonRow> = Vec::new();
        for row in rows {
            match compressed.iter_mut().find(|r| &r.bits == row) {
                Some(r) => r.mult += 1,
                None => compressed.push(UpsilonRow { bits: row.clone(), mult: 1 }),
            }
        }
        Self::new(rows.len(), compressed)
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn rows(&self) -> &[UpsilonRow] {
        &self.rows
    }

    /// Blows every entry up into a `k × k` block: `ν` becomes `kν`.
    pub fn scaled(&self, k: usize) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| UpsilonRow {
                bits: r.bits.iter().flat_map(|&b| std::iter::repeat_n(b, k)).collect(),
                mult: r.mult * k,
            })
            .collect();
        Self::new(self.nu * k, rows)
    }

    /// The entry holding expanded row `index` (1-based, `1..=ν`).
    pub fn entry_of_row(&self, index: usize) -> Result<usize> {
        if index == 0 || index > self.nu {
            return Err(Error::RowOutOfRange { index, nu: self.nu });
        }
        let mut seen = 0;
        for (e, row) in self.rows.iter().enumerate() {
            seen += row.mult;
            if index <= seen {
                return Ok(e);
            }
        }
        unreachable!("multiplicities sum to nu")
    }

    pub fn bit_strings(&self) -> Vec<(String, usize)> {
        self.rows
            .iter()
            .map(|r| (r.bits.iter().map(|&b| if b { '1' } else { '0' }).collect(), r.mult))
            .collect()
    }
}

fn parse_bits(bits: &str) -> Result<Vec<bool>> {
    bits.chars()
        .map(|c| match c {
            '1' => Ok(true),
            '0' => Ok(false),
            _ => Err(Error::InvalidUpsilon(format!("row {bits:?} is not a bit-string"))),
        })
        .collect()
}

/// Atom frequencies of the columns of the matrix whose `i`-th row is
/// `rows[i]` (the signs of `P_{i+1}`).
fn column_frequencies(rows: &[&[bool]], nu: usize) -> Result<SimplexPoint> {
    let q = rows.len() as u32;
    let table = AtomTable::new(q)?;
    let mut counts = vec![0usize; table.len()];
    for column in 0..nu {
        let mask = rows
            .iter()
            .enumerate()
            .fold(0u32, |m, (i, row)| m | ((row[column] as u32) << (q - 1 - i as u32)));
        counts[table.index_of_mask(mask)] += 1;
    }
    SimplexPoint::new(q, counts.into_iter().map(|k| rational::ratio(k as i64, nu as i64)).collect())
}

/// The `q × ν` matrix whose columns run through the atoms of `L_q`, atom
/// `α_i` repeated `c_i ν` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMatrix {
    nu: usize,
    rows: Vec<Vec<bool>>,
}

impl PhiMatrix {
    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn q(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// Column frequencies after picking row `i` `n_i` times, in row order.
    pub fn pick_frequencies(&self, counts: &[u32]) -> Result<SimplexPoint> {
        let picked: Vec<&[bool]> = counts
            .iter()
            .zip(&self.rows)
            .flat_map(|(&k, row)| std::iter::repeat_n(row.as_slice(), k as usize))
            .collect();
        column_frequencies(&picked, self.nu)
    }
}

fn exact_count(value: &Rational, nu: usize, what: &str) -> Result<usize> {
    let scaled = value * Rational::from_integer(BigInt::from(nu));
    if !scaled.is_integer() {
        return Err(Error::NonIntegral(format!("{what} = {value} times nu = {nu} is {scaled}")));
    }
    usize::try_from(scaled.to_integer())
        .map_err(|_| Error::NonIntegral(format!("{what} count does not fit")))
}

pub fn build_phi(c: &SimplexPoint, nu: usize) -> Result<PhiMatrix> {
    if nu == 0 {
        return Err(Error::InvalidUpsilon("nu must be positive".into()));
    }
    let table = AtomTable::new(c.q())?;
    let mut rows = vec![Vec::with_capacity(nu); c.q() as usize];
    for (i, ci) in c.entries().iter().enumerate() {
        let copies = exact_count(ci, nu, &format!("c_{}", i + 1))?;
        for (p, row) in rows.iter_mut().enumerate() {
            row.extend(std::iter::repeat_n(table.sign(i, p as u32), copies));
        }
    }
    Ok(PhiMatrix { nu, rows })
}

/// Frequencies `p_1..p_q` with which the rows of a [`PhiMatrix`] fill Υ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrequencyVector(Vec<Rational>);

impl FrequencyVector {
    pub fn new(p: Vec<Rational>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidFrequency("empty".into()));
        }
        if p.iter().any(Signed::is_negative) {
            return Err(Error::InvalidFrequency("negative entry".into()));
        }
        let total = rational::sum(&p);
        if !total.is_one() {
            return Err(Error::InvalidFrequency(format!("entries sum to {total}, not 1")));
        }
        Ok(Self(p))
    }

    pub fn uniform(q: usize) -> Result<Self> {
        Self::new(vec![rational::ratio(1, q as i64); q])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }
}

/// Υ holding `p_i ν` copies of row `i` of Φ. Rows with `p_i = 0` are left
/// out; duplicate rows of Φ stay separate entries.
pub fn build_upsilon(phi: &PhiMatrix, p: &FrequencyVector, nu: usize) -> Result<UpsilonMatrix> {
    if nu != phi.nu {
        return Err(Error::InvalidUpsilon(format!("Phi has {} columns, not nu = {nu}", phi.nu)));
    }
    if p.0.len() != phi.rows.len() {
        return Err(Error::InvalidFrequency(format!(
            "{} frequencies for {} rows",
            p.0.len(),
            phi.rows.len()
        )));
    }
    let mut rows = Vec::new();
    for (i, (pi, row)) in p.0.iter().zip(&phi.rows).enumerate() {
        let mult = exact_count(pi, nu, &format!("p_{}", i + 1))?;
        if mult > 0 {
            rows.push(UpsilonRow { bits: row.clone(), mult });
        }
    }
    UpsilonMatrix::new(nu, rows)
}

/// `w^Υ_{⟨i_1..i_q⟩}`: the product function given by the column
/// frequencies of the rows `picks` (1-based, repeats allowed).
pub fn row_pick_function(upsilon: &UpsilonMatrix, picks: &[usize]) -> Result<ProbabilityFunction> {
    let rows = picks
        .iter()
        .map(|&i| Ok(upsilon.rows[upsilon.entry_of_row(i)?].bits.as_slice()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbabilityFunction::product(column_frequencies(&rows, upsilon.nu)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sampling {
    WithReplacement,
    WithoutReplacement,
}

/// One multiset of picked row entries: its probability and the `y_c` it
/// contributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NablaComponent {
    pub counts: Vec<u32>,
    pub weight: Rational,
    pub function: Symmetrized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nabla {
    upsilon: UpsilonMatrix,
    q: u32,
    sampling: Sampling,
    components: Vec<NablaComponent>,
}

impl Nabla {
    pub fn new(upsilon: &UpsilonMatrix, q: u32, sampling: Sampling) -> Result<Self> {
        AtomTable::new(q)?;
        if q > MAX_SYMMETRIC_LEVEL {
            return Err(Error::ResourceCap {
                what: "predicate permutations (level)".into(),
                requested: q as u128,
                limit: MAX_SYMMETRIC_LEVEL as u128,
            });
        }
        if sampling == Sampling::WithoutReplacement && q as usize > upsilon.nu {
            return Err(Error::InvalidUpsilon(format!(
                "cannot pick {q} distinct rows from nu = {}",
                upsilon.nu
            )));
        }
        let types = upsilon.rows.len() as u32;
        let multisets = binomial(types + q - 1, q);
        if multisets > BigInt::from(MAX_PICK_TYPES) {
            return Err(Error::ResourceCap {
                what: "row-type multisets".into(),
                requested: u128::try_from(multisets).unwrap_or(u128::MAX),
                limit: MAX_PICK_TYPES,
            });
        }
        let nu = upsilon.nu as u64;
        let denominator = match sampling {
            Sampling::WithReplacement => BigInt::from(nu).pow(q),
            Sampling::WithoutReplacement => combinatorics::falling(nu, q),
        };
        let mut components = Vec::new();
        for counts in combinatorics::compositions(q, types as usize) {
            let ways = counts
                .iter()
                .zip(&upsilon.rows)
                .fold(combinatorics::multinomial(&counts), |acc, (&k, row)| {
                    acc * match sampling {
                        Sampling::WithReplacement => BigInt::from(row.mult).pow(k),
                        Sampling::WithoutReplacement => combinatorics::falling(row.mult as u64, k),
                    }
                });
            if ways.is_zero() {
                continue;
            }
            let picked: Vec<&[bool]> = counts
                .iter()
                .zip(&upsilon.rows)
                .flat_map(|(&k, row)| std::iter::repeat_n(row.bits.as_slice(), k as usize))
                .collect();
            let c = column_frequencies(&picked, upsilon.nu)?;
            components.push(NablaComponent {
                counts,
                weight: Rational::new(ways, denominator.clone()),
                function: Symmetrized::new(c)?,
            });
        }
        Ok(Self { upsilon: upsilon.clone(), q, sampling, components })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn upsilon(&self) -> &UpsilonMatrix {
        &self.upsilon
    }

    pub fn sampling(&self) -> Sampling {
        self.sampling
    }

    pub fn components(&self) -> &[NablaComponent] {
        &self.components
    }

    pub(crate) fn value(&self, sd: &StateDescription) -> Rational {
        self.components.iter().fold(Rational::zero(), |acc, comp| {
            acc + &comp.weight * comp.function_value(sd)
        })
    }
}

impl NablaComponent {
    fn function_value(&self, sd: &StateDescription) -> Rational {
        use crate::prob::Valuation;
        ProbabilityFunction::Symmetrized(self.function.clone())
            .value(sd)
            .expect("symmetrized evaluation is infallible")
    }
}

/// ∇ of Υ on `L_q`: picks with replacement.
pub fn nabla(upsilon: &UpsilonMatrix, q: u32) -> Result<ProbabilityFunction> {
    Ok(ProbabilityFunction::Nabla(Nabla::new(upsilon, q, Sampling::WithReplacement)?))
}

/// Like [`nabla`] but averaging over injective picks only.
pub fn nabla_no_replacement(upsilon: &UpsilonMatrix, q: u32) -> Result<ProbabilityFunction> {
    Ok(ProbabilityFunction::Nabla(Nabla::new(upsilon, q, Sampling::WithoutReplacement)?))
}

/// One term `Π p_i^{n_i} (n_1..n_q)! y_{c_n}` of the composition expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub composition: Vec<u32>,
    pub weight: Rational,
    pub point: SimplexPoint,
}

/// The terms of the expansion of `p∇` over `Υ(c)`, zero-weight terms
/// included, in descending lexicographic order of the composition.
pub fn expansion_terms(c: &SimplexPoint, p: &FrequencyVector, nu: usize) -> Result<Vec<ExpansionTerm>> {
    let phi = build_phi(c, nu)?;
    // Validates the frequencies against nu.
    build_upsilon(&phi, p, nu)?;
    combinatorics::compositions(c.q(), c.q() as usize)
        .into_iter()
        .map(|n| {
            let monomial = n
                .iter()
                .zip(p.entries())
                .fold(Rational::one(), |acc, (&k, pk)| acc * rational::pow(pk, k));
            let weight = monomial * Rational::from_integer(combinatorics::multinomial(&n));
            let point = phi.pick_frequencies(&n)?;
            Ok(ExpansionTerm { composition: n, weight, point })
        })
        .collect()
}

/// The right-hand side of the expansion as a mixture of `y_c` functions;
/// equal to `nabla(build_upsilon(build_phi(c, ν), p, ν), q)`.
pub fn nabla_expansion(c: &SimplexPoint, p: &FrequencyVector, nu: usize) -> Result<ProbabilityFunction> {
    let parts = expansion_terms(c, p, nu)?
        .into_iter()
        .filter(|t| !t.weight.is_zero())
        .map(|t| Ok((t.weight, ProbabilityFunction::symmetrized(t.point)?)))
        .collect::<Result<Vec<_>>>()?;
    ProbabilityFunction::mixture(parts)
}
