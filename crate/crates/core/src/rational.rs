//! Exact rational scalars and their wire format.
//!
//! Every probability, weight and matrix entry in this crate is a
//! [`Rational`]. On the wire a rational is always a string, either an
//! integer (`"1"`, `"-3"`) or `"num/den"` in lowest terms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a"`, `"a/b"` (optionally signed, surrounding whitespace ignored).
pub fn parse(text: &str) -> Result<Rational> {
    let bad = |message: &str| Error::InvalidRational {
        text: text.to_string(),
        message: message.to_string(),
    };
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = den.parse().map_err(|_| bad("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Parses a comma separated list such as `0,1/2,0`.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse).collect()
}

pub fn format(value: &Rational) -> String {
    value.to_string()
}

/// `base^exp` with the convention `0^0 = 1`.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    if base.is_zero() {
        return Rational::zero();
    }
    num_traits::pow(base.clone(), exp as usize)
}

pub fn is_probability(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// Serde adapters: rationals travel as strings.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::Rational;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&super::super::format(v))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| super::super::parse(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(parse("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse(" 2/4 ").unwrap(), ratio(1, 2));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(format(&ratio(2, 4)), "1/2");
        assert_eq!(format(&int(1)), "1");
        assert_eq!(parse_list("0,1/2,0").unwrap(), vec![int(0), ratio(1, 2), int(0)]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("").is_err());
        assert!(parse("a/b").is_err());
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(pow(&int(0), 0), int(1));
        assert_eq!(pow(&int(0), 3), int(0));
        assert_eq!(pow(&ratio(1, 2), 3), ratio(1, 8));
    }
}
