//! Predicate-exchangeable points in the compressed form `⟨C_0..C_q⟩`, the
//! binomial transfer between levels, Bernstein points of finite measures on
//! `[0,1]`, and exact certificates for extending a point to a higher level.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::logic::AtomTable;
use crate::lp::{self, LpOutcome, Method};
use crate::prob::SimplexPoint;
use crate::rational::{self, Rational};

/// Largest target level accepted by [`extendable`].
pub const MAX_EXTENSION_LEVEL: u32 = 200;

/// `⟨C_0..C_q⟩`: the common value of the atoms with `j` negations is `C_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AltNotation {
    q: u32,
    c: Vec<Rational>,
}

/// Serialized as the list `["C_0", .., "C_q"]`.
impl Serialize for AltNotation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serde_str::vec::serialize(&self.c, s)
    }
}

impl<'de> Deserialize<'de> for AltNotation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = rational::serde_str::vec::deserialize(d)?;
        AltNotation::new(c).map_err(serde::de::Error::custom)
    }
}

impl AltNotation {
    /// Requires `C_j >= 0` and `Σ binom(q, j) C_j = 1`; `q` is `len - 1`.
    pub fn new(c: Vec<Rational>) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::InvalidAltNotation(format!("need at least 2 entries, got {}", c.len())));
        }
        let q = (c.len() - 1) as u32;
        if let Some(j) = c.iter().position(Signed::is_negative) {
            return Err(Error::InvalidAltNotation(format!("C_{j} = {} is negative", c[j])));
        }
        let total = weighted_mass(&c);
        if !total.is_one() {
            return Err(Error::InvalidAltNotation(format!("binomially weighted sum is {total}, not 1")));
        }
        Ok(Self { q, c })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn entries(&self) -> &[Rational] {
        &self.c
    }
}

fn weighted_mass(c: &[Rational]) -> Rational {
    let q = (c.len() - 1) as u32;
    c.iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (j, cj)| acc + cj * Rational::from_integer(binomial(q, j as u32)))
}

pub fn to_alt(c: &SimplexPoint) -> Result<AltNotation> {
    let table = AtomTable::new(c.q())?;
    let mut first: Vec<Option<usize>> = vec![None; c.q() as usize + 1];
    for (i, x) in c.entries().iter().enumerate() {
        let g = table.gamma(i);
        match first[g as usize] {
            None => first[g as usize] = Some(i),
            Some(f) if c.entries()[f] != *x => {
                return Err(Error::NotPredicateExchangeable { first: f + 1, second: i + 1, negations: g });
            }
            Some(_) => {}
        }
    }
    let values = first.into_iter().map(|f| c.entries()[f.expect("every gamma occurs")].clone()).collect();
    AltNotation::new(values)
}

pub fn from_alt(alt: &AltNotation) -> Result<SimplexPoint> {
    let table = AtomTable::new(alt.q)?;
    SimplexPoint::new(alt.q, table.gammas().iter().map(|&g| alt.c[g as usize].clone()).collect())
}

/// `C_j = Σ_{k=j}^{j+r-q} binom(r-q, k-j) D_k`, the level-`q` point whose
/// product function is the restriction of the level-`r` one.
pub fn transfer(d: &AltNotation, q: u32) -> Result<AltNotation> {
    let r = d.q;
    if q == 0 || q > r {
        return Err(Error::InvalidRestriction { from: r, to: q });
    }
    let gap = r - q;
    let c = (0..=q)
        .map(|j| {
            (0..=gap).fold(Rational::zero(), |acc, i| {
                acc + Rational::from_integer(binomial(gap, i)) * &d.c[(j + i) as usize]
            })
        })
        .collect();
    AltNotation::new(c)
}

/// A probability measure on `[0,1]` with finite support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteMeasure {
    support: Vec<(Rational, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct AtomWire {
    #[serde(with = "rational::serde_str")]
    x: Rational,
    #[serde(with = "rational::serde_str")]
    w: Rational,
}

impl Serialize for DiscreteMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire: Vec<AtomWire> = self.support.iter().map(|(x, w)| AtomWire { x: x.clone(), w: w.clone() }).collect();
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscreteMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = Vec::<AtomWire>::deserialize(d)?;
        DiscreteMeasure::new(wire.into_iter().map(|a| (a.x, a.w)).collect()).map_err(serde::de::Error::custom)
    }
}

impl DiscreteMeasure {
    /// `(point, weight)` pairs: distinct points in `[0,1]`, positive weights
    /// summing to 1.
    pub fn new(support: Vec<(Rational, Rational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        for (k, (x, w)) in support.iter().enumerate() {
            if !rational::is_probability(x) {
                return Err(Error::InvalidMeasure(format!("point {x} outside [0,1]")));
            }
            if !w.is_positive() {
                return Err(Error::InvalidMeasure(format!("weight {w} is not positive")));
            }
            if support[..k].iter().any(|(y, _)| y == x) {
                return Err(Error::InvalidMeasure(format!("point {x} repeated")));
            }
        }
        let total = rational::sum(support.iter().map(|(_, w)| w));
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { support })
    }

    pub fn dirac(x: Rational) -> Result<Self> {
        Self::new(vec![(x, Rational::one())])
    }

    pub fn support(&self) -> &[(Rational, Rational)] {
        &self.support
    }
}

/// Reads `[{"x":"1/2","w":"1"}, ..]`.
pub fn parse_measure(json: &str) -> Result<DiscreteMeasure> {
    let wire: Vec<AtomWire> = serde_json::from_str(json).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
    DiscreteMeasure::new(wire.into_iter().map(|a| (a.x, a.w)).collect())
}

/// `C_j = Σ w x^j (1-x)^{q-j}` over the support of `rho`.
pub fn bernstein(rho: &DiscreteMeasure, q: u32) -> Result<AltNotation> {
    if q == 0 || q > MAX_EXTENSION_LEVEL {
        return Err(Error::LevelOutOfRange { q, max: MAX_EXTENSION_LEVEL });
    }
    let c = (0..=q)
        .map(|j| {
            rho.support.iter().fold(Rational::zero(), |acc, (x, w)| {
                acc + w * rational::pow(x, j) * rational::pow(&(Rational::one() - x), q - j)
            })
        })
        .collect();
    AltNotation::new(c)
}

/// Whether some level-`r` point transfers down to a given level-`q` point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum FeasibilityCertificate {
    /// `transfer(witness, q) = C`.
    Feasible { r: u32, witness: AltNotation },
    /// `y` with `Σ_j y_j binom(r-q, k-j) >= 0` for every `k` and
    /// `Σ_j y_j C_j < 0`: no nonnegative `D` can transfer to `C`.
    Infeasible {
        r: u32,
        #[serde(with = "rational::serde_str::vec")]
        farkas: Vec<Rational>,
    },
}

impl FeasibilityCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }

    /// Re-checks the certificate against `c` by substitution.
    pub fn verify(&self, c: &AltNotation) -> bool {
        match self {
            Self::Feasible { r, witness } => {
                witness.q == *r && transfer(witness, c.q).is_ok_and(|t| t == *c)
            }
            Self::Infeasible { r, farkas } => {
                *r >= c.q
                    && lp::verify(&transfer_matrix(c.q, *r), &c.c, &LpOutcome::Infeasible(farkas.clone()))
            }
        }
    }
}

/// The `(q+1) × (r+1)` matrix of [`transfer`].
pub fn transfer_matrix(q: u32, r: u32) -> Vec<Vec<Rational>> {
    let gap = r - q;
    (0..=q)
        .map(|j| {
            (0..=r)
                .map(|k| {
                    if k >= j && k - j <= gap {
                        Rational::from_integer(binomial(gap, k - j))
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Decides whether `C` is the transfer of a nonnegative level-`r` point.
pub fn extendable(c: &AltNotation, r: u32) -> Result<FeasibilityCertificate> {
    extendable_with(c, r, Method::Auto)
}

pub fn extendable_with(c: &AltNotation, r: u32, method: Method) -> Result<FeasibilityCertificate> {
    if r < c.q {
        return Err(Error::InvalidRestriction { from: r, to: c.q });
    }
    if r > MAX_EXTENSION_LEVEL {
        return Err(Error::ResourceCap {
            what: "extension level".into(),
            requested: r as u128,
            limit: MAX_EXTENSION_LEVEL as u128,
        });
    }
    match lp::solve(&transfer_matrix(c.q, r), &c.c, method)? {
        // Σ binom(r,k) D_k = Σ binom(q,j) C_j = 1, so D is normalized.
        LpOutcome::Feasible(d) => Ok(FeasibilityCertificate::Feasible { r, witness: AltNotation::new(d)? }),
        LpOutcome::Infeasible(farkas) => Ok(FeasibilityCertificate::Infeasible { r, farkas }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn alt(c: &[(i64, i64)]) -> AltNotation {
        AltNotation::new(c.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    #[test]
    fn alt_round_trips() {
        let uniform = SimplexPoint::uniform(2).unwrap();
        assert_eq!(to_alt(&uniform).unwrap(), alt(&[(1, 4), (1, 4), (1, 4)]));
        assert_eq!(from_alt(&alt(&[(1, 4), (1, 4), (1, 4)])).unwrap(), uniform);
        let dirac = SimplexPoint::dirac(2, 1).unwrap();
        assert_eq!(to_alt(&dirac).unwrap(), alt(&[(1, 1), (0, 1), (0, 1)]));
        assert_eq!(
            to_alt(&SimplexPoint::dirac(2, 2).unwrap()),
            Err(Error::NotPredicateExchangeable { first: 2, second: 3, negations: 1 })
        );
    }

    #[test]
    fn alt_validation() {
        assert!(AltNotation::new(vec![int(1)]).is_err());
        assert!(AltNotation::new(vec![ratio(1, 2), ratio(1, 2), ratio(1, 2)]).is_err());
        assert!(AltNotation::new(vec![int(2), int(-1)]).is_err());
    }

    #[test]
    fn transfer_examples() {
        assert_eq!(transfer(&alt(&[(1, 4), (1, 4), (1, 4)]), 1).unwrap(), alt(&[(1, 2), (1, 2)]));
        assert_eq!(transfer(&alt(&[(0, 1), (1, 3), (0, 1), (0, 1)]), 1).unwrap(), alt(&[(2, 3), (1, 3)]));
        let d = alt(&[(1, 8), (1, 8), (1, 8), (1, 8)]);
        assert_eq!(transfer(&d, 3).unwrap(), d);
        assert!(transfer(&d, 4).is_err());
    }

    #[test]
    fn bernstein_examples() {
        let delta0 = DiscreteMeasure::dirac(int(0)).unwrap();
        assert_eq!(bernstein(&delta0, 3).unwrap(), alt(&[(1, 1), (0, 1), (0, 1), (0, 1)]));
        let half = DiscreteMeasure::dirac(ratio(1, 2)).unwrap();
        assert_eq!(bernstein(&half, 2).unwrap(), alt(&[(1, 4), (1, 4), (1, 4)]));
        let ends = DiscreteMeasure::new(vec![(int(0), ratio(1, 2)), (int(1), ratio(1, 2))]).unwrap();
        assert_eq!(bernstein(&ends, 2).unwrap(), alt(&[(1, 2), (0, 1), (1, 2)]));
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![(int(2), int(1))]).is_err());
        assert!(DiscreteMeasure::new(vec![(int(0), ratio(1, 2)), (int(0), ratio(1, 2))]).is_err());
        assert!(DiscreteMeasure::new(vec![(int(0), ratio(1, 2)), (int(1), int(0)), (ratio(1, 2), ratio(1, 2))]).is_err());
        assert!(DiscreteMeasure::new(vec![(int(0), ratio(1, 3))]).is_err());
        let json = serde_json::to_string(&DiscreteMeasure::dirac(ratio(1, 2)).unwrap()).unwrap();
        assert_eq!(json, r#"[{"x":"1/2","w":"1"}]"#);
        let back: DiscreteMeasure = serde_json::from_str(&json).unwrap();
        assert_eq!(back, DiscreteMeasure::dirac(ratio(1, 2)).unwrap());
        assert!(serde_json::from_str::<DiscreteMeasure>(r#"[{"x":"1/2","w":"1/2"}]"#).is_err());
    }

    #[test]
    fn extendability_examples() {
        let c = alt(&[(0, 1), (1, 2), (0, 1)]);
        for method in [Method::FourierMotzkin, Method::Simplex] {
            let cert = extendable_with(&c, 3, method).unwrap();
            assert!(!cert.is_feasible());
            assert!(cert.verify(&c));
        }

        let quarter = alt(&[(1, 4), (1, 4), (1, 4)]);
        let cert = extendable(&quarter, 6).unwrap();
        assert!(cert.is_feasible() && cert.verify(&quarter));
        let expected = bernstein(&DiscreteMeasure::dirac(ratio(1, 2)).unwrap(), 6).unwrap();
        let by_measure = FeasibilityCertificate::Feasible { r: 6, witness: expected };
        assert!(by_measure.verify(&quarter));

        let point = alt(&[(1, 1), (0, 1), (0, 1)]);
        for r in 2..=7 {
            let FeasibilityCertificate::Feasible { witness, .. } = extendable(&point, r).unwrap() else { panic!() };
            let mut expected = vec![int(0); r as usize + 1];
            expected[0] = int(1);
            assert_eq!(witness.entries(), expected.as_slice());
        }
        assert!(extendable(&point, 1).is_err());
    }

    #[test]
    fn certificate_json() {
        let c = alt(&[(0, 1), (1, 2), (0, 1)]);
        let json = serde_json::to_value(extendable(&c, 3).unwrap()).unwrap();
        assert_eq!(json["status"], "infeasible");
        assert_eq!(json["r"], 3);
        let point = alt(&[(1, 1), (0, 1), (0, 1)]);
        let json = serde_json::to_string(&extendable(&point, 3).unwrap()).unwrap();
        assert_eq!(json, r#"{"status":"feasible","r":3,"witness":["1","0","0","0"]}"#);
        assert!(serde_json::from_str::<AltNotation>(r#"["1","1"]"#).is_err());
    }
}
