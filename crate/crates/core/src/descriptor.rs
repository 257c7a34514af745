//! JSON descriptors for probability functions and Υ matrices. Rationals
//! travel as `"num/den"` strings.
//!
//! ```json
//! {"class":"product","q":2,"x":["1/4","1/4","1/4","1/4"]}
//! {"class":"symmetrized","c":["0","1","0","0"]}
//! {"class":"mixture","parts":[{"w":"1/2","f":{"class":"product","x":["1","0"]}}]}
//! {"class":"nabla","q":2,"upsilon":{"nu":2,"rows":[{"bits":"11","mult":1},{"bits":"00","mult":1}]}}
//! {"class":"restricted","q":1,"f":{"class":"product","x":["1/4","1/4","1/4","1/4"]}}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nabla::{Nabla, Sampling, UpsilonMatrix};
use crate::prob::{restrict, ProbabilityFunction, SimplexPoint, Valuation};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionDescriptor {
    Product {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<u32>,
        #[serde(with = "rational::serde_str::vec")]
        x: Vec<Rational>,
    },
    Symmetrized {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<u32>,
        #[serde(with = "rational::serde_str::vec")]
        c: Vec<Rational>,
    },
    Mixture {
        parts: Vec<PartDescriptor>,
    },
    Nabla {
        q: u32,
        upsilon: UpsilonDescriptor,
        /// Picks with replacement unless `false`.
        #[serde(default = "yes", skip_serializing_if = "is_true")]
        replacement: bool,
    },
    Restricted {
        q: u32,
        f: Box<FunctionDescriptor>,
    },
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartDescriptor {
    #[serde(with = "rational::serde_str")]
    pub w: Rational,
    pub f: FunctionDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpsilonDescriptor {
    pub nu: usize,
    pub rows: Vec<RowDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowDescriptor {
    pub bits: String,
    pub mult: usize,
}

impl UpsilonDescriptor {
    pub fn build(&self) -> Result<UpsilonMatrix> {
        let rows: Vec<(&str, usize)> = self.rows.iter().map(|r| (r.bits.as_str(), r.mult)).collect();
        UpsilonMatrix::from_bit_strings(self.nu, &rows)
    }

    pub fn describe(u: &UpsilonMatrix) -> Self {
        Self {
            nu: u.nu(),
            rows: u.bit_strings().into_iter().map(|(bits, mult)| RowDescriptor { bits, mult }).collect(),
        }
    }
}

fn point(q: Option<u32>, x: &[Rational]) -> Result<SimplexPoint> {
    match q {
        Some(q) => SimplexPoint::new(q, x.to_vec()),
        None => SimplexPoint::from_entries(x.to_vec()),
    }
}

impl FunctionDescriptor {
    pub fn build(&self) -> Result<ProbabilityFunction> {
        match self {
            Self::Product { q, x } => Ok(ProbabilityFunction::product(point(*q, x)?)),
            Self::Symmetrized { q, c } => ProbabilityFunction::symmetrized(point(*q, c)?),
            Self::Mixture { parts } => ProbabilityFunction::mixture(
                parts.iter().map(|p| Ok((p.w.clone(), p.f.build()?))).collect::<Result<_>>()?,
            ),
            Self::Nabla { q, upsilon, replacement } => {
                let sampling = if *replacement { Sampling::WithReplacement } else { Sampling::WithoutReplacement };
                Ok(ProbabilityFunction::Nabla(Nabla::new(&upsilon.build()?, *q, sampling)?))
            }
            Self::Restricted { q, f } => restrict(&f.build()?, *q),
        }
    }

    pub fn describe(f: &ProbabilityFunction) -> Self {
        match f {
            ProbabilityFunction::Product(x) => Self::Product { q: Some(x.q()), x: x.entries().to_vec() },
            ProbabilityFunction::Symmetrized(s) => {
                Self::Symmetrized { q: Some(s.point().q()), c: s.point().entries().to_vec() }
            }
            ProbabilityFunction::Mixture(m) => Self::Mixture {
                parts: m.parts().iter().map(|(w, f)| PartDescriptor { w: w.clone(), f: Self::describe(f) }).collect(),
            },
            ProbabilityFunction::Nabla(n) => Self::Nabla {
                q: n.q(),
                upsilon: UpsilonDescriptor::describe(n.upsilon()),
                replacement: n.sampling() == Sampling::WithReplacement,
            },
            ProbabilityFunction::Restricted(r) => {
                Self::Restricted { q: f.level(), f: Box::new(Self::describe(r.source())) }
            }
        }
    }
}

pub fn parse_function(json: &str) -> Result<ProbabilityFunction> {
    let d: FunctionDescriptor = serde_json::from_str(json).map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
    d.build()
}

pub fn parse_upsilon(json: &str) -> Result<UpsilonMatrix> {
    let d: UpsilonDescriptor = serde_json::from_str(json).map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
    d.build()
}
