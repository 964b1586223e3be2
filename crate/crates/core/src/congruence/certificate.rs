use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{factor_pairs, sturm_bound};
use crate::arith::{factor_big, valuation, BigNum, Factorization, Rational};
use crate::error::{Error, Result};
use crate::fieldred::NumberField;
use crate::fieldred::{factor_minpoly_mod, reduce_element, reduce_rational, residue_equal, PrimeIdealFactor};
use crate::qseries::{QSeries, Rationals};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModulusDescriptor {
    Prime { ell: BigNum },
    Composite { n: BigNum, factors: Vec<(BigNum, u32)> },
    Ideal { ideal: PrimeIdealFactor, description: String },
}

/// Record of a coefficient-wise comparison of two q-expansions.
///
/// `checked_bound` is the largest index compared (all of `0..=checked_bound`).
/// `theorem_level` is set only when the comparison held and reached the Sturm bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCertificate {
    pub lhs: String,
    pub rhs: String,
    pub modulus: ModulusDescriptor,
    pub checked_bound: usize,
    pub sturm_bound: Option<u64>,
    pub verdict: Verdict,
    pub first_failure: Option<usize>,
    pub theorem_level: bool,
}

impl CongruenceCertificate {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Attaches the Sturm bound of weight `k` and level `p`.
    pub fn with_sturm(mut self, k: i64, p: u64) -> Self {
        let s = sturm_bound(k, p);
        self.sturm_bound = Some(s);
        self.theorem_level = self.holds() && self.checked_bound as u64 >= s;
        self
    }

    pub fn with_labels(mut self, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        self.lhs = lhs.into();
        self.rhs = rhs.into();
        self
    }

    fn new(modulus: ModulusDescriptor, bound: usize, first_failure: Option<usize>) -> Self {
        CongruenceCertificate {
            lhs: "f".into(),
            rhs: "g".into(),
            modulus,
            checked_bound: bound,
            sturm_bound: None,
            verdict: if first_failure.is_some() { Verdict::Fails } else { Verdict::Holds },
            first_failure,
            theorem_level: false,
        }
    }
}

fn check_bound(bound: usize, precs: &[usize]) -> Result<()> {
    let have = precs.iter().copied().min().unwrap_or(0);
    if bound >= have {
        return Err(Error::InsufficientPrecision { needed: bound + 1, have });
    }
    Ok(())
}

fn check_denominator(c: &Rational, ell: &BigUint, modulus: &BigUint) -> Result<()> {
    if valuation(&Rational::from_integer(c.denom().clone()), ell).is_some_and(|v| v > 0) {
        return Err(Error::DenominatorNotInvertible { den: c.denom().to_string(), modulus: modulus.to_string() });
    }
    Ok(())
}

/// `f == g (mod N)` on indices `0..=bound`, read as `v_ell(a_f(n) - a_g(n)) >= e` for each `ell^e || N`.
pub fn verify_congruence_factored(
    f: &QSeries<Rationals>,
    g: &QSeries<Rationals>,
    modulus: &Factorization<BigUint>,
    bound: usize,
) -> Result<CongruenceCertificate> {
    check_bound(bound, &[f.prec(), g.prec()])?;
    let n = modulus.reconstruct();
    let mut first_failure = None;
    for i in 0..=bound {
        let (a, b) = (&f.coeffs()[i], &g.coeffs()[i]);
        let diff = a - b;
        for (ell, e) in modulus.pairs() {
            check_denominator(a, ell, &n)?;
            check_denominator(b, ell, &n)?;
            if valuation(&diff, ell).is_some_and(|v| v < *e as i64) {
                first_failure.get_or_insert(i);
            }
        }
    }
    let descriptor = match modulus.pairs() {
        [(p, 1)] => ModulusDescriptor::Prime { ell: p.clone().into() },
        _ => ModulusDescriptor::Composite { n: n.into(), factors: factor_pairs(modulus) },
    };
    Ok(CongruenceCertificate::new(descriptor, bound, first_failure))
}

/// [`verify_congruence_factored`] after factoring the modulus.
pub fn verify_congruence(
    f: &QSeries<Rationals>,
    g: &QSeries<Rationals>,
    modulus: &BigUint,
    bound: usize,
) -> Result<CongruenceCertificate> {
    let fac = factor_big(modulus).map_err(|_| Error::BadParameters("modulus must be a positive integer".into()))?;
    verify_congruence_factored(f, g, &fac, bound)
}

/// Compares a number-field series with a rational one modulo every prime ideal above `ell`.
pub fn verify_congruence_numberfield(
    f: &QSeries<NumberField>,
    e: &QSeries<Rationals>,
    ell: u64,
    bound: usize,
) -> Result<Vec<(PrimeIdealFactor, CongruenceCertificate)>> {
    check_bound(bound, &[f.prec(), e.prec()])?;
    let factors = factor_minpoly_mod(f.ring().minpoly(), ell)?;
    let mut out = Vec::new();
    for ideal in factors {
        let mut first_failure = None;
        for i in 0..=bound {
            let a = reduce_element(&f.coeffs()[i], &ideal)?;
            let b = reduce_rational(&e.coeffs()[i], &ideal)?;
            if !residue_equal(&a, &b)? {
                first_failure.get_or_insert(i);
            }
        }
        let descriptor = ModulusDescriptor::Ideal { description: ideal.describe(), ideal: ideal.clone() };
        out.push((ideal, CongruenceCertificate::new(descriptor, bound, first_failure)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::fixtures::NewformFixture;
    use crate::qseries::{eisenstein_e, eta_product, AnySeries};

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn rational_level_17_form_holds_mod_six() {
        let fx = NewformFixture::builtin("ex4").unwrap();
        let AnySeries::Rational(f) = fx.series().unwrap() else { panic!() };
        let e = fx.eisenstein(10).unwrap();
        let cert = verify_congruence(&f, &e, &big(6), 9).unwrap().with_sturm(4, 17);
        assert!(cert.holds(), "{cert:?}");
        assert_eq!(cert.sturm_bound, Some(6));
        assert!(cert.theorem_level);
        assert!(matches!(cert.modulus, ModulusDescriptor::Composite { .. }));
        // a(0) = -6/5 has 2-adic valuation 1 only
        assert_eq!(verify_congruence(&f, &e, &big(4), 9).unwrap().first_failure, Some(0));
        assert!(matches!(verify_congruence(&f, &e, &big(5), 9), Err(Error::DenominatorNotInvertible { .. })));
    }

    #[test]
    fn ramanujan_tau_mod_691() {
        let delta = eta_product(&[(1, 24)], 31).unwrap();
        let e12 = eisenstein_e(12, 31).unwrap();
        let cert = verify_congruence(&delta, &e12, &big(691), 30).unwrap();
        assert!(cert.holds());
        assert_eq!(cert.modulus, ModulusDescriptor::Prime { ell: BigNum::from(691u64) });
        let cert = verify_congruence(&delta, &e12, &big(691 * 691), 30).unwrap();
        assert_eq!(cert.first_failure, Some(0));
    }

    #[test]
    fn self_congruence_and_errors() {
        let f = QSeries::from_rationals(vec![rat(1, 7), rat_int(3)], None).unwrap();
        assert!(verify_congruence(&f, &f, &big(30), 1).unwrap().holds());
        assert!(matches!(verify_congruence(&f, &f, &big(7), 1), Err(Error::DenominatorNotInvertible { .. })));
        assert!(matches!(verify_congruence(&f, &f, &big(5), 2), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn cubic_level_11_form_at_five_holds_only_at_linear_factor() {
        let fx = NewformFixture::builtin("ex1").unwrap();
        let AnySeries::Field(g) = fx.series().unwrap() else { panic!() };
        let e = fx.eisenstein(7).unwrap();
        let res = verify_congruence_numberfield(&g, &e, 5, 6).unwrap();
        let good: Vec<_> = res.iter().filter(|(_, c)| c.holds()).map(|(i, _)| i.g.clone()).collect();
        assert_eq!(good, vec![vec![2, 1]]);
    }

    #[test]
    fn cubic_level_11_form_at_nineteen_has_a_good_factor() {
        let fx = NewformFixture::builtin("ex1").unwrap();
        let AnySeries::Field(g) = fx.series().unwrap() else { panic!() };
        let e = fx.eisenstein(7).unwrap();
        let res = verify_congruence_numberfield(&g, &e, 19, 6).unwrap();
        assert!(res.iter().any(|(_, c)| c.holds()));
    }

    #[test]
    fn cubic_level_7_form_at_five_and_181() {
        let fx = NewformFixture::builtin("ex2").unwrap();
        let AnySeries::Field(f) = fx.series().unwrap() else { panic!() };
        let e = fx.eisenstein(7).unwrap();
        for ell in [5, 181] {
            let res = verify_congruence_numberfield(&f, &e, ell, 6).unwrap();
            let ok: Vec<_> = res.iter().filter(|(_, c)| c.holds()).collect();
            assert!(!ok.is_empty(), "ell = {ell}");
            for (_, c) in ok {
                let c = c.clone().with_sturm(12, 7);
                assert_eq!(c.sturm_bound, Some(8));
                assert!(!c.theorem_level);
            }
        }
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let f = QSeries::from_ints(&[0, 1, 2]).unwrap();
        let c = verify_congruence(&f, &f, &big(12), 2).unwrap().with_sturm(4, 5);
        let text = serde_json::to_string(&c).unwrap();
        let back: CongruenceCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
}
