//! Arbitrary-precision rationals and their serialized form.
//!
//! `Rat` is always in lowest terms with a positive denominator; that is an
//! invariant of `num_rational::Ratio` itself. The canonical text form is
//! `"p"` for integers and `"p/q"` otherwise, which is what every JSON
//! artifact of this crate uses for coordinates.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` as a rational. Panics when `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical text form: `"p"` or `"p/q"` in lowest terms.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"` or `"p/q"`. Whitespace is not accepted.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidSpec(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Sign as -1, 0, or 1.
pub fn sign(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// serde adapters: a rational field serializes as its canonical string.
pub mod serde_rat {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}

/// serde adapters for `Option<Rat>`.
pub mod serde_rat_opt {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        x: &Option<Rat>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => ser.serialize_some(&format_rat(x)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Option<Rat>, D::Error> {
        let raw = Option::<String>::deserialize(de)?;
        raw.as_deref().map(parse_rat).transpose().map_err(D::Error::custom)
    }
}

/// serde adapters for `Vec<Rat>`.
pub mod serde_rat_vec {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(format_rat))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter().map(|s| parse_rat(s).map_err(D::Error::custom)).collect()
    }
}

/// serde adapters for `Vec<Vec<Rat>>`.
pub mod serde_rat_mat {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Vec<Vec<Rat>>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(|row| row.iter().map(format_rat).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Vec<Rat>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(de)?;
        raw.iter()
            .map(|row| row.iter().map(|s| parse_rat(s).map_err(D::Error::custom)).collect())
            .collect()
    }
}
