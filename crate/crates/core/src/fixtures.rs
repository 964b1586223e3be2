//! Newform q-expansions shipped as JSON data.
//!
//! A fixture stores `a(1), ..., a(N)` as polynomials in a root `a` of `minpoly`,
//! both in ascending powers. Rational newforms use `minpoly = [0, 1]`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::{parse_rational, BigNum, Rational};
use crate::error::{Error, Result};
use crate::fieldred::NumberField;
use crate::qseries::{eisenstein_level, AnySeries, QSeries, Rationals};

const BUILTIN: [(&str, &str); 4] = [
    ("ex1", include_str!("../fixtures/ex1.json")),
    ("ex1plus", include_str!("../fixtures/ex1plus.json")),
    ("ex2", include_str!("../fixtures/ex2.json")),
    ("ex4", include_str!("../fixtures/ex4.json")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewformFixture {
    pub label: String,
    pub k: i64,
    pub p: u64,
    pub al_sign: i64,
    pub minpoly: Vec<BigNum>,
    pub coeffs: Vec<Vec<String>>,
}

impl NewformFixture {
    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTIN.iter().map(|(n, _)| *n)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let fx: NewformFixture = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        fx.validate()?;
        Ok(fx)
    }

    /// One of the embedded fixtures, by name with or without a `.json` suffix.
    pub fn builtin(name: &str) -> Result<Self> {
        let stem = name.strip_suffix(".json").unwrap_or(name);
        let (_, text) = BUILTIN
            .iter()
            .find(|(n, _)| *n == stem)
            .ok_or_else(|| Error::BadParameters(format!("no built-in fixture named {name:?}")))?;
        Self::from_json(text)
    }

    /// Reads a fixture file; a missing file whose name matches a built-in fixture loads that one.
    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::from_json(&text),
            Err(e) => {
                let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
                Self::builtin(name).map_err(|_| Error::Parse(format!("{}: {e}", path.display())))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let field = self.field()?;
        if self.coeffs.is_empty() {
            return Err(Error::Parse("fixture has no coefficients".into()));
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.len() != field.degree() {
                return Err(Error::Parse(format!(
                    "coefficient of q^{} has {} entries, expected {}",
                    i + 1,
                    c.len(),
                    field.degree()
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Result<NumberField> {
        NumberField::new(self.minpoly.iter().map(|c| c.0.clone()).collect())
    }

    /// Highest printed index `N`.
    pub fn printed_bound(&self) -> usize {
        self.coeffs.len()
    }

    fn parsed(&self) -> Result<Vec<Vec<Rational>>> {
        self.coeffs.iter().map(|c| c.iter().map(|s| parse_rational(s)).collect()).collect()
    }

    /// The cusp form `0 + a(1) q + ... + a(N) q^N`, over `Q` when the field is `Q`.
    pub fn series(&self) -> Result<AnySeries> {
        let field = self.field()?;
        let parsed = self.parsed()?;
        if field.degree() == 1 {
            let mut coeffs = vec![Rational::from_integer(0.into())];
            for c in parsed {
                coeffs.push(field.element(c).coeffs()[0].clone());
            }
            return Ok(AnySeries::Rational(QSeries::new(Rationals, coeffs, Some(self.k))?));
        }
        let mut coeffs = vec![field.zero()];
        coeffs.extend(parsed.into_iter().map(|c| field.element(c)));
        Ok(AnySeries::Field(QSeries::new(field, coeffs, Some(self.k))?))
    }

    /// `E_{k,p}^eps` matching the fixture's weight, level and sign.
    pub fn eisenstein(&self, prec: usize) -> Result<QSeries<Rationals>> {
        eisenstein_level(self.k, self.p, self.al_sign, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    #[test]
    fn builtins_load() {
        for name in NewformFixture::builtin_names() {
            let fx = NewformFixture::builtin(name).unwrap();
            assert_eq!(fx.series().unwrap().prec(), fx.printed_bound() + 1);
        }
        assert_eq!(NewformFixture::builtin("ex4.json").unwrap().printed_bound(), 9);
        assert!(NewformFixture::builtin("ex9").is_err());
    }

    #[test]
    fn rational_fixture_becomes_rational_series() {
        let fx = NewformFixture::builtin("ex4").unwrap();
        let AnySeries::Rational(f) = fx.series().unwrap() else { panic!("expected Q") };
        assert_eq!(f.coeff(0).unwrap(), &rat_int(0));
        assert_eq!(f.coeff(9).unwrap(), &rat_int(37));
    }

    #[test]
    fn cubic_fixture_has_expected_third_coefficient() {
        let fx = NewformFixture::builtin("ex1").unwrap();
        let AnySeries::Field(g) = fx.series().unwrap() else { panic!("expected a cubic field") };
        assert_eq!(g.coeff(3).unwrap().coeffs(), &[rat(64, 3), rat(-5, 3), rat(-1, 6)]);
        assert_eq!(g.coeff(2).unwrap(), &g.ring().gen());
    }

    #[test]
    fn wrong_coefficient_length_is_rejected() {
        let text = r#"{"label":"x","k":4,"p":2,"al_sign":1,"minpoly":[-2,0,1],"coeffs":[["1/1"]]}"#;
        assert!(matches!(NewformFixture::from_json(text), Err(Error::Parse(_))));
    }
}
