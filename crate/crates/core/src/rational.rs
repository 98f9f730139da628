//! Exact rationals and their canonical string form.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. On the wire a rational is the
//! decimal string `"n"` (integers) or `"n/d"`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {text:?}: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        text: text.to_string(),
        reason,
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err("empty string"));
    }
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let num: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| err("denominator is not an integer"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical form: `"n"` when the denominator is one, `"n/d"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter for a single rational stored as a canonical string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"n\" or \"n/d\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                parse_rational(v).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

/// Serde adapter for an optional rational.
pub mod serde_opt_rational {
    use super::*;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.map(|t| parse_rational(&t).map_err(de::Error::custom))
            .transpose()
    }
}

/// Serde adapter for a list of rationals.
pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts: Vec<String> = Vec::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("6/3").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert_eq!(format_rational(&parse_rational("0/7").unwrap()), "0");
        assert_eq!(format_rational(&parse_rational(" -12 ").unwrap()), "-12");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("a/b").is_err());
    }
}
