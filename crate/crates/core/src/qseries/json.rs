use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CoeffRing, IntegersMod, QSeries, Rationals};
use crate::arith::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::fieldred::NumberField;

/// Wire form of a series.
///
/// Rational coefficients are `"num/den"` strings, residues mod `m` are integers,
/// number-field coefficients are arrays of `"num/den"` strings in ascending powers of `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
    pub prec: usize,
    pub coeffs: Vec<Value>,
}

/// A series over any of the supported rings.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Rational(QSeries<Rationals>),
    Mod(QSeries<IntegersMod>),
    Field(QSeries<NumberField>),
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn parse_int_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("not an integer: {s}"))),
        other => Err(Error::Parse(format!("not an integer: {other}"))),
    }
}

fn parse_rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| Error::Parse(format!("not a rational: {n}"))),
        other => Err(Error::Parse(format!("not a rational: {other}"))),
    }
}

fn rational_value(q: &Rational) -> Value {
    Value::from(format_rational(q))
}

impl AnySeries {
    pub fn prec(&self) -> usize {
        match self {
            AnySeries::Rational(f) => f.prec(),
            AnySeries::Mod(f) => f.prec(),
            AnySeries::Field(f) => f.prec(),
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        match self {
            AnySeries::Rational(f) => SeriesJson {
                ring: "Rational".into(),
                modulus: None,
                minpoly: None,
                weight: f.weight(),
                prec: f.prec(),
                coeffs: f.coeffs().iter().map(rational_value).collect(),
            },
            AnySeries::Mod(f) => SeriesJson {
                ring: "IntegersMod".into(),
                modulus: Some(f.ring().modulus()),
                minpoly: None,
                weight: f.weight(),
                prec: f.prec(),
                coeffs: f.coeffs().iter().map(|&c| Value::from(c)).collect(),
            },
            AnySeries::Field(f) => SeriesJson {
                ring: "NumberField".into(),
                modulus: None,
                minpoly: Some(f.ring().minpoly().iter().map(int_value).collect()),
                weight: f.weight(),
                prec: f.prec(),
                coeffs: f
                    .coeffs()
                    .iter()
                    .map(|e| Value::Array(e.coeffs().iter().map(rational_value).collect()))
                    .collect(),
            },
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if j.coeffs.len() != j.prec {
            return Err(Error::Parse(format!("prec is {} but {} coefficients were given", j.prec, j.coeffs.len())));
        }
        match j.ring.as_str() {
            "Rational" => {
                let coeffs = j.coeffs.iter().map(parse_rational_value).collect::<Result<_>>()?;
                Ok(AnySeries::Rational(QSeries::new(Rationals, coeffs, j.weight)?))
            }
            "IntegersMod" => {
                let m = j.modulus.ok_or_else(|| Error::Parse("IntegersMod needs a modulus".into()))?;
                let ring = IntegersMod::new(m)?;
                let coeffs =
                    j.coeffs.iter().map(|v| ring.from_rational(&parse_rational_value(v)?)).collect::<Result<_>>()?;
                Ok(AnySeries::Mod(QSeries::new(ring, coeffs, j.weight)?))
            }
            "NumberField" => {
                let mp = j.minpoly.as_ref().ok_or_else(|| Error::Parse("NumberField needs a minpoly".into()))?;
                let field = NumberField::new(mp.iter().map(parse_int_value).collect::<Result<_>>()?)?;
                let coeffs = j
                    .coeffs
                    .iter()
                    .map(|v| {
                        let parts = v
                            .as_array()
                            .ok_or_else(|| Error::Parse("field coefficient must be an array".into()))?
                            .iter()
                            .map(parse_rational_value)
                            .collect::<Result<Vec<_>>>()?;
                        Ok(field.element(parts))
                    })
                    .collect::<Result<_>>()?;
                Ok(AnySeries::Field(QSeries::new(field, coeffs, j.weight)?))
            }
            other => Err(Error::Parse(format!("unknown ring {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn round_trip(s: &AnySeries) -> AnySeries {
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        AnySeries::from_json(&back).unwrap()
    }

    #[test]
    fn rational_coefficients_are_strings() {
        let f = QSeries::from_rationals(vec![rat(17, 480), rat(-8, 1)], Some(8)).unwrap();
        let j = serde_json::to_value(AnySeries::Rational(f).to_json()).unwrap();
        assert_eq!(j, serde_json::json!({"ring": "Rational", "weight": 8, "prec": 2, "coeffs": ["17/480", "-8/1"]}));
    }

    #[test]
    fn field_and_mod_round_trip() {
        let k = NumberField::from_i64(&[188, -90, 0, 1]).unwrap();
        let f = QSeries::new(k.clone(), vec![k.zero(), k.one(), k.gen()], Some(6)).unwrap();
        let s = AnySeries::Field(f);
        assert_eq!(round_trip(&s), s);
        let m = QSeries::new(IntegersMod::new(17).unwrap(), vec![0, 9, 16], None).unwrap();
        let s = AnySeries::Mod(m);
        assert_eq!(round_trip(&s), s);
    }

    #[test]
    fn malformed_input_is_rejected() {
        let j = SeriesJson {
            ring: "Rational".into(),
            modulus: None,
            minpoly: None,
            weight: None,
            prec: 3,
            coeffs: vec![Value::from("1/2")],
        };
        assert!(matches!(AnySeries::from_json(&j), Err(Error::Parse(_))));
        let j = SeriesJson { ring: "Quaternion".into(), prec: 1, ..j };
        assert!(AnySeries::from_json(&j).is_err());
    }

    proptest! {
        #[test]
        fn rational_series_round_trip(
            v in prop::collection::vec((-10_000i64..10_000, 1i64..500), 1..30),
            w in prop::option::of(-6i64..20),
        ) {
            let f = QSeries::from_rationals(v.iter().map(|&(n, d)| rat(n, d)).collect(), w).unwrap();
            let s = AnySeries::Rational(f);
            prop_assert_eq!(round_trip(&s), s);
        }
    }
}
