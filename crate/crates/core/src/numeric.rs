//! Serde adapters for big integers and rationals.
//!
//! Integers are written as decimal strings so that consumers never lose
//! precision. On input both JSON numbers and strings are accepted. Rationals
//! use the `"p/q"` form, or plain `"p"` when the denominator is one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => BigInt::from_str(text).ok().map(BigRational::from_integer),
    }
}

pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

struct IntVisitor;

impl<'de> Visitor<'de> for IntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        BigInt::from_str(v.trim()).map_err(|_| E::custom(format!("invalid integer `{v}`")))
    }
}

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = BigRational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a rational string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigRational, E> {
        Ok(BigRational::from_integer(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigRational, E> {
        Ok(BigRational::from_integer(BigInt::from(v)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigRational, E> {
        parse_rational(v).ok_or_else(|| E::custom(format!("invalid rational `{v}`")))
    }
}

/// `#[serde(with = "crate::numeric::int")]`
pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

/// `#[serde(with = "crate::numeric::int_vec")]`
pub mod int_vec {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Wrapped(#[serde(with = "super::int")] BigInt);

    pub fn serialize<S: Serializer>(value: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(value.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}

/// `#[serde(with = "crate::numeric::int_vec_vec")]`
pub mod int_vec_vec {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Row(#[serde(with = "super::int_vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(value: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(value.iter().map(|row| Row(row.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let raw: Vec<Row> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|r| r.0).collect())
    }
}

/// `#[serde(with = "crate::numeric::int_set")]`
pub mod int_set {
    use super::*;
    use serde::Deserialize;
    use std::collections::BTreeSet;

    pub fn serialize<S: Serializer>(value: &BTreeSet<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(value.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<BigInt>, D::Error> {
        #[derive(Deserialize)]
        #[serde(transparent)]
        struct Wrapped(#[serde(with = "super::int")] BigInt);
        let raw: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}

/// `#[serde(with = "crate::numeric::int_vec_set")]`
pub mod int_vec_set {
    use super::*;
    use serde::{Deserialize, Serialize};
    use std::collections::BTreeSet;

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Row(#[serde(with = "super::int_vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(value: &BTreeSet<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(value.iter().map(|row| Row(row.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<Vec<BigInt>>, D::Error> {
        let raw: Vec<Row> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|r| r.0).collect())
    }
}

/// `#[serde(with = "crate::numeric::opt_int")]`
pub mod opt_int {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Wrapped(#[serde(with = "super::int")] BigInt);

    pub fn serialize<S: Serializer>(value: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        value.as_ref().map(|v| Wrapped(v.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<Wrapped>::deserialize(d)?.map(|w| w.0))
    }
}

/// `#[serde(with = "crate::numeric::opt_int_vec")]`
pub mod opt_int_vec {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Wrapped(#[serde(with = "super::int_vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(value: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        value.as_ref().map(|v| Wrapped(v.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        Ok(Option::<Wrapped>::deserialize(d)?.map(|w| w.0))
    }
}

/// `#[serde(with = "crate::numeric::rat")]`
pub mod rat {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

/// `#[serde(with = "crate::numeric::rat_vec_vec")]`
pub mod rat_vec_vec {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Cell(#[serde(with = "super::rat")] BigRational);

    pub fn serialize<S: Serializer>(value: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            value
                .iter()
                .map(|row| row.iter().map(format_rational).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let raw: Vec<Vec<Cell>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.0).collect())
            .collect())
    }
}
