//! Decimal-string encoding for arbitrary-precision integers.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serializer};

pub fn big_to_string(v: &BigInt) -> String {
    v.to_str_radix(10)
}

pub fn parse_big(s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|e| format!("invalid integer {s:?}: {e}"))
}

/// Accepts either a JSON string holding a decimal integer or a plain JSON
/// integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Str(String),
    I64(i64),
    U64(u64),
}

impl IntRepr {
    fn into_big(self) -> Result<BigInt, String> {
        match self {
            IntRepr::Str(s) => parse_big(&s),
            IntRepr::I64(v) => Ok(BigInt::from(v)),
            IntRepr::U64(v) => Ok(BigInt::from(v)),
        }
    }
}

pub mod vec_decimal {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&big_to_string(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<IntRepr> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_big().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&big_to_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        IntRepr::deserialize(d)?
            .into_big()
            .map_err(serde::de::Error::custom)
    }
}

pub mod nested_decimal {
    use super::*;
    use serde::ser::SerializeSeq;

    struct Row<'a>(&'a [BigInt]);

    impl serde::Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::vec_decimal::serialize(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            seq.serialize_element(&Row(row))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let raw: Vec<Vec<IntRepr>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| r.into_big().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
