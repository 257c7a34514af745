//! Quantifier-free sentences over unary predicates and their model sets.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! formula := disj ( "->" formula )?        right associative
//! disj    := conj ( "|" conj )*
//! conj    := unary ( "&" unary )*
//! unary   := "!" unary | "(" formula ")" | "P" <k> "(" "a" <j> ")"
//! ```
//!
//! Whitespace may separate tokens. Indices are positive decimal integers.

use std::collections::BTreeSet;
use std::fmt;

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::logic::atoms::AtomTable;
use crate::logic::state::StateDescription;

/// Refuse truth tables with more rows than this.
pub const MAX_TRUTH_TABLE_ROWS: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QfFormula {
    /// `P_pred(a_constant)`, both 1-based.
    Literal { pred: u32, constant: u32 },
    Not(Box<QfFormula>),
    And(Box<QfFormula>, Box<QfFormula>),
    Or(Box<QfFormula>, Box<QfFormula>),
    Implies(Box<QfFormula>, Box<QfFormula>),
}

impl QfFormula {
    pub fn literal(pred: u32, constant: u32) -> Self {
        Self::Literal { pred, constant }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Self::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        Self::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        Self::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        Self::Implies(Box::new(self), Box::new(other))
    }

    pub fn constants(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.visit_literals(&mut |_, c| {
            out.insert(c);
        });
        out
    }

    pub fn max_predicate(&self) -> u32 {
        let mut max = 0;
        self.visit_literals(&mut |p, _| max = max.max(p));
        max
    }

    /// Fails if the formula mentions a predicate outside `L_q`.
    pub fn check_level(&self, q: u32) -> Result<()> {
        match self.max_predicate() {
            p if p > q => Err(Error::PredicateOutOfRange { index: p, q }),
            _ => Ok(()),
        }
    }

    fn visit_literals(&self, f: &mut impl FnMut(u32, u32)) {
        match self {
            Self::Literal { pred, constant } => f(*pred, *constant),
            Self::Not(a) => a.visit_literals(f),
            Self::And(a, b) | Self::Or(a, b) | Self::Implies(a, b) => {
                a.visit_literals(f);
                b.visit_literals(f);
            }
        }
    }

    /// Truth value under an interpretation of the literals.
    pub fn eval(&self, value: &impl Fn(u32, u32) -> bool) -> bool {
        match self {
            Self::Literal { pred, constant } => value(*pred, *constant),
            Self::Not(a) => !a.eval(value),
            Self::And(a, b) => a.eval(value) && b.eval(value),
            Self::Or(a, b) => a.eval(value) || b.eval(value),
            Self::Implies(a, b) => !a.eval(value) || b.eval(value),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Self::Implies(..) => 1,
            Self::Or(..) => 2,
            Self::And(..) => 3,
            Self::Not(..) | Self::Literal { .. } => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            write!(f, "(")?;
        }
        match self {
            Self::Literal { pred, constant } => write!(f, "P{pred}(a{constant})")?,
            Self::Not(a) => {
                write!(f, "!")?;
                a.write_at(f, 4)?;
            }
            Self::And(a, b) => {
                a.write_at(f, 3)?;
                write!(f, " & ")?;
                b.write_at(f, 4)?;
            }
            Self::Or(a, b) => {
                a.write_at(f, 2)?;
                write!(f, " | ")?;
                b.write_at(f, 3)?;
            }
            Self::Implies(a, b) => {
                a.write_at(f, 2)?;
                write!(f, " -> ")?;
                b.write_at(f, 1)?;
            }
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for QfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for QfFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

pub fn parse_formula(text: &str) -> Result<QfFormula> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let formula = parser.formula()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(formula)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos + 1, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn formula(&mut self) -> Result<QfFormula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<QfFormula> {
        let mut acc = self.conjunction()?;
        while self.eat("|") {
            acc = acc.or(self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<QfFormula> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<QfFormula> {
        if self.eat("!") {
            return Ok(self.unary()?.not());
        }
        if self.eat("(") {
            let inner = self.formula()?;
            self.expect(")")?;
            return Ok(inner);
        }
        if self.eat("P") {
            let pred = self.index()?;
            self.expect("(")?;
            self.expect("a")?;
            let constant = self.index()?;
            self.expect(")")?;
            return Ok(QfFormula::literal(pred, constant));
        }
        self.skip_ws();
        if self.pos >= self.src.len() {
            Err(self.error("unexpected end of input"))
        } else {
            Err(self.error("expected '!', '(' or a literal P<k>(a<j>)"))
        }
    }

    fn index(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an index"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match digits.parse::<u32>() {
            Ok(0) | Err(_) => {
                self.pos = start;
                Err(self.error("index must be a positive integer"))
            }
            Ok(v) => Ok(v),
        }
    }
}

/// Every state description of `L_q` over `constants` (in the given order)
/// that propositionally satisfies `phi`, in lexicographic order.
///
/// The `j`-th atom of each returned description belongs to `constants[j]`.
pub fn satisfying_descriptions(
    phi: &QfFormula,
    q: u32,
    constants: &[u32],
) -> Result<Vec<StateDescription>> {
    let mut out = Vec::new();
    for_each_model(phi, q, constants, |sd| out.push(sd))?;
    Ok(out)
}

pub(crate) fn for_each_model(
    phi: &QfFormula,
    q: u32,
    constants: &[u32],
    mut f: impl FnMut(StateDescription),
) -> Result<()> {
    let table = AtomTable::new(q)?;
    phi.check_level(q)?;
    let slot = window_slots(phi, constants)?;
    let rows = (table.len() as u128).saturating_pow(constants.len() as u32);
    if rows > MAX_TRUTH_TABLE_ROWS {
        return Err(Error::ResourceCap {
            what: "truth table rows".into(),
            requested: rows,
            limit: MAX_TRUTH_TABLE_ROWS,
        });
    }
    for atoms in combinatorics::tuples(table.len(), constants.len()) {
        let holds = phi.eval(&|pred, constant| {
            let position = slot[&constant];
            table.sign(atoms[position], pred - 1)
        });
        if holds {
            f(StateDescription::from_indices_unchecked(q, atoms));
        }
    }
    Ok(())
}

fn window_slots(
    phi: &QfFormula,
    constants: &[u32],
) -> Result<std::collections::HashMap<u32, usize>> {
    let mut slot = std::collections::HashMap::new();
    for (position, &c) in constants.iter().enumerate() {
        if slot.insert(c, position).is_some() {
            return Err(Error::DuplicateConstant { constant: c });
        }
    }
    if let Some(&missing) = phi.constants().iter().find(|c| !slot.contains_key(c)) {
        return Err(Error::ConstantNotCovered { constant: missing });
    }
    Ok(slot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> QfFormula {
        parse_formula(text).unwrap()
    }

    #[test]
    fn conjunction_with_negation() {
        assert_eq!(
            p("P1(a1) & !P2(a1)"),
            QfFormula::literal(1, 1).and(QfFormula::literal(2, 1).not())
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            p("P1(a1) | P1(a1) & P2(a2)"),
            QfFormula::literal(1, 1).or(QfFormula::literal(1, 1).and(QfFormula::literal(2, 2)))
        );
        assert_eq!(
            p("P1(a1) -> P2(a1) -> P3(a1)"),
            QfFormula::literal(1, 1)
                .implies(QfFormula::literal(2, 1).implies(QfFormula::literal(3, 1)))
        );
        assert_eq!(
            p("!P1(a1) | P2(a1) -> P1(a2)"),
            QfFormula::literal(1, 1)
                .not()
                .or(QfFormula::literal(2, 1))
                .implies(QfFormula::literal(1, 2))
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(
            parse_formula("P1(a1"),
            Err(Error::Parse { offset: 6, message: "expected ')'".into() })
        );
        assert!(matches!(parse_formula(""), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(parse_formula("P1(a1) &"), Err(Error::Parse { offset: 9, .. })));
        assert!(matches!(parse_formula("P0(a1)"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_formula("P1(a1) P2(a1)"), Err(Error::Parse { offset: 8, .. })));
        assert!(matches!(parse_formula("Q1(a1)"), Err(Error::Parse { offset: 1, .. })));
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "P1(a1) & !P2(a1)",
            "P1(a1) | P1(a1) & P2(a2)",
            "(P1(a1) | P2(a1)) & P3(a2)",
            "P1(a1) & (P2(a1) & P3(a1))",
            "(P1(a1) -> P2(a1)) -> P3(a1)",
            "!(P1(a1) | !P2(a3))",
        ] {
            let f = p(text);
            assert_eq!(p(&f.to_string()), f, "{text}");
        }
        assert_eq!(p("(P1(a1))&(!P2(a1))").to_string(), "P1(a1) & !P2(a1)");
    }

    #[test]
    fn model_sets() {
        let taut = p("P1(a1) | !P1(a1)");
        assert_eq!(satisfying_descriptions(&taut, 1, &[1]).unwrap().len(), 2);
        let contra = p("P1(a1) & !P1(a1)");
        assert!(satisfying_descriptions(&contra, 1, &[1]).unwrap().is_empty());
        let lit = p("P1(a1)");
        let models = satisfying_descriptions(&lit, 2, &[1]).unwrap();
        let h: Vec<_> = models.iter().map(|m| m.one_based()).collect();
        assert_eq!(h, vec![vec![1], vec![2]]);
    }

    #[test]
    fn window_errors() {
        let f = p("P3(a1)");
        assert_eq!(
            satisfying_descriptions(&f, 2, &[1]),
            Err(Error::PredicateOutOfRange { index: 3, q: 2 })
        );
        let f = p("P1(a2)");
        assert_eq!(
            satisfying_descriptions(&f, 2, &[1]),
            Err(Error::ConstantNotCovered { constant: 2 })
        );
        assert!(satisfying_descriptions(&f, 2, &[2, 2]).is_err());
    }

    #[test]
    fn window_order_follows_constant_list() {
        let f = p("P1(a3) & !P1(a1)");
        let models = satisfying_descriptions(&f, 1, &[3, 1]).unwrap();
        assert_eq!(models.len(), 1);
        assert_eq!(models[0].one_based(), vec![1, 2]);
    }
}
