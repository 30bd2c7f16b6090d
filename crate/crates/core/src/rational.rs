//! Exact rational scalars.
//!
//! All coefficients in the crate are [`Rational`] values: arbitrary-precision
//! fractions kept in lowest terms with a positive denominator. The textual
//! form is always `"p/q"`, including integers (`"3/1"`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Formats as `p/q` with `q > 0`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let q = BigInt::from_str(q).map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

/// `(-1)^k` for a parity flag.
pub fn sign(negative: bool) -> Rational {
    if negative {
        -one()
    } else {
        one()
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Serde adapter: `#[serde(with = "crate::rational::serde_str")]`.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_positive_denominator() {
        let r = ratio(6, -4);
        assert_eq!(format(&r), "-3/2");
        assert_eq!(format(&int(3)), "3/1");
        assert_eq!(format(&zero()), "0/1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse("4").unwrap(), int(4));
        assert_eq!(parse(" 2/4 ").unwrap(), ratio(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    proptest! {
        #[test]
        fn format_parse_roundtrip(p in -10_000i64..10_000, q in 1i64..10_000) {
            let r = ratio(p, q);
            prop_assert_eq!(parse(&format(&r)).unwrap(), r);
        }
    }
}
