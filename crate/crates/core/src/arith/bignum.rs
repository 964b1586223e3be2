use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integer for JSON reports: a plain number when it fits in 64 bits, a decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigNum(pub BigInt);

impl From<BigInt> for BigNum {
    fn from(n: BigInt) -> Self {
        BigNum(n)
    }
}

impl From<BigUint> for BigNum {
    fn from(n: BigUint) -> Self {
        BigNum(n.into())
    }
}

impl From<u64> for BigNum {
    fn from(n: u64) -> Self {
        BigNum(n.into())
    }
}

impl From<i64> for BigNum {
    fn from(n: i64) -> Self {
        BigNum(n.into())
    }
}

impl fmt::Display for BigNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for BigNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_i64() {
            s.serialize_i64(v)
        } else if let Some(v) = self.0.to_u64() {
            s.serialize_u64(v)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

struct BigNumVisitor;

impl Visitor<'_> for BigNumVisitor {
    type Value = BigNum;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigNum, E> {
        Ok(BigNum(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigNum, E> {
        Ok(BigNum(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigNum, E> {
        v.parse().map(BigNum).map_err(|_| E::custom(format!("not an integer: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for BigNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(BigNumVisitor)
    }
}
