//! Exact integer and rational arithmetic shared by every other module.
//!
//! Rationals are [`num_rational::BigRational`], which keeps values in lowest
//! terms with a positive denominator, so zero is always `0/1`.

mod bernoulli;
mod bignum;
mod factor;

pub use bernoulli::{bernoulli, bernoulli_table};
pub use bignum::BigNum;
pub use factor::{
    factor, factor_big, is_prime, is_prime_big, largest_prime_factor, multiplicative_order, primes_up_to, Factorization,
};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `"num/den"` or a bare integer `"n"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always renders `num/den`, including `n/1` for integers.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Absolute value of the numerator of `q` in lowest terms.
pub fn reduced_numerator(q: &Rational) -> Result<BigUint> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(q.numer().magnitude().clone())
}

/// `sigma_m(n) = sum of d^m over the divisors d of n`.
pub fn sigma(m: u32, n: u64) -> BigUint {
    assert!(n >= 1, "sigma is defined for n >= 1");
    let mut acc = BigUint::one();
    for &(p, e) in factor(n).pairs() {
        if m == 0 {
            acc *= BigUint::from(e + 1);
            continue;
        }
        let pm = BigUint::from(p).pow(m);
        let mut term = BigUint::one();
        let mut pw = BigUint::one();
        for _ in 0..e {
            pw *= &pm;
            term += &pw;
        }
        acc *= term;
    }
    acc
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod_big(a: &BigInt, m: &BigUint) -> Option<BigUint> {
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    let a = a.mod_floor(&m);
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(&m).to_biguint().expect("non-negative"))
}

/// Image of `q` in `Z/mZ`, inverting the denominator.
pub fn rational_mod(q: &Rational, m: &BigUint) -> Result<BigUint> {
    let inv = inv_mod_big(q.denom(), m)
        .ok_or_else(|| Error::DenominatorNotInvertible { den: q.denom().to_string(), modulus: m.to_string() })?;
    let m_int = BigInt::from_biguint(Sign::Plus, m.clone());
    let num = q.numer().mod_floor(&m_int).to_biguint().expect("non-negative");
    Ok((num * inv) % m)
}

/// `rational_mod` specialised to a word-sized modulus.
pub fn rational_mod_u64(q: &Rational, m: u64) -> Result<u64> {
    rational_mod(q, &BigUint::from(m)).map(|v| v.to_u64().expect("reduced below m"))
}

/// `p`-adic valuation of a non-zero integer. Returns `None` for zero.
pub fn valuation_int(n: &BigInt, p: &BigUint) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut v = 0;
    let mut n = n.abs();
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a rational; `None` stands for `+infinity` (the value is zero).
pub fn valuation(q: &Rational, p: &BigUint) -> Option<i64> {
    let vn = valuation_int(q.numer(), p)? as i64;
    let vd = valuation_int(q.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_by_enumeration(m: u32, n: u64) -> BigUint {
        (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigUint::from(d).pow(m)).sum()
    }

    #[test]
    fn reduced_numerator_examples() {
        assert_eq!(reduced_numerator(&rat(95, 36)).unwrap(), BigUint::from(95u32));
        assert_eq!(reduced_numerator(&rat(1330, 504)).unwrap(), BigUint::from(95u32));
        // B_8 / 16 * 17
        let b8 = bernoulli(8);
        let q = b8 / rat_int(16) * rat_int(17);
        assert_eq!(q, rat(-17, 480));
        assert_eq!(reduced_numerator(&q).unwrap(), BigUint::from(17u32));
        assert_eq!(reduced_numerator(&rat(0, 5)), Err(Error::ZeroInput));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(11, 1), BigUint::from(1u32));
        assert_eq!(sigma(7, 2), BigUint::from(129u32));
        assert_eq!(sigma(3, 6), BigUint::from(252u32));
        assert_eq!(sigma(0, 12), BigUint::from(6u32));
    }

    #[test]
    fn sigma_matches_enumeration() {
        for m in 0..6 {
            for n in 1..200 {
                assert_eq!(sigma(m, n), sigma_by_enumeration(m, n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn sigma_is_multiplicative() {
        for m in 0..=12u32 {
            for a in 1..=100u64 {
                for b in (1..=100u64).step_by(7) {
                    if a * b > 10_000 || gcd_u64(a, b) != 1 {
                        continue;
                    }
                    assert_eq!(sigma(m, a * b), sigma(m, a) * sigma(m, b));
                }
            }
        }
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-64/3").unwrap(), rat(-64, 3));
        assert_eq!(parse_rational("12").unwrap(), rat_int(12));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat_int(5)), "5/1");
    }

    #[test]
    fn rational_reduction_mod_m() {
        assert_eq!(rational_mod_u64(&rat(17, 480), 17).unwrap(), 0);
        assert_eq!(rational_mod_u64(&rat(1, 6), 5).unwrap(), 1);
        assert_eq!(rational_mod_u64(&rat_int(-8), 17).unwrap(), 9);
        assert!(matches!(rational_mod_u64(&rat(1, 10), 5), Err(Error::DenominatorNotInvertible { .. })));
    }

    #[test]
    fn valuations() {
        let five = BigUint::from(5u32);
        assert_eq!(valuation(&rat(50, 3), &five), Some(2));
        assert_eq!(valuation(&rat(3, 25), &five), Some(-2));
        assert_eq!(valuation(&rat_int(0), &five), None);
    }
}
