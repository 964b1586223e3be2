//! Arithmetic in `Q(a) = Q[x]/(m(x))` and reduction modulo prime ideals above `ell`.
//!
//! Prime ideals above a rational prime `ell` are identified with the monic
//! irreducible factors `g` of `m mod ell`; the prime `(ell, g(a))` has residue
//! field `F_ell[x]/(g)`. This matches the ring of integers whenever `ell` does
//! not divide the index of `Z[a]`, which is all that reduction of elements with
//! `ell`-coprime denominators needs.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mul_mod, rational_mod_u64, Rational};
use crate::error::{Error, Result};

/// A number field given by a monic integer minimal polynomial (coefficients ascending).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: Vec<BigInt>,
}

/// `c_0 + c_1 a + ... + c_{d-1} a^{d-1}` against the field's minimal polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NfElement {
    coeffs: Vec<Rational>,
}

impl NfElement {
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The element as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }
}

impl NumberField {
    pub fn new(minpoly: Vec<BigInt>) -> Result<Self> {
        if minpoly.len() < 2 {
            return Err(Error::BadParameters("minimal polynomial must have degree >= 1".into()));
        }
        if !minpoly.last().expect("non-empty").is_one() {
            return Err(Error::NotMonic);
        }
        Ok(NumberField { minpoly })
    }

    pub fn from_i64(minpoly: &[i64]) -> Result<Self> {
        Self::new(minpoly.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Builds an element from a polynomial in `a` of any length, reducing mod `m`.
    pub fn element(&self, coeffs: Vec<Rational>) -> NfElement {
        self.reduce_poly(coeffs)
    }

    pub fn from_rational(&self, q: Rational) -> NfElement {
        let mut coeffs = vec![Rational::zero(); self.degree()];
        coeffs[0] = q;
        NfElement { coeffs }
    }

    pub fn zero(&self) -> NfElement {
        self.from_rational(Rational::zero())
    }

    pub fn one(&self) -> NfElement {
        self.from_rational(Rational::one())
    }

    /// The generator `a`.
    pub fn gen(&self) -> NfElement {
        self.element(vec![Rational::zero(), Rational::one()])
    }

    fn reduce_poly(&self, mut c: Vec<Rational>) -> NfElement {
        let d = self.degree();
        // x^d = -(m_0 + ... + m_{d-1} x^{d-1})
        while c.len() > d {
            let top = c.pop().expect("len > d");
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - d;
            for (i, mi) in self.minpoly[..d].iter().enumerate() {
                c[shift + i] -= &top * Rational::from_integer(mi.clone());
            }
        }
        c.resize(d, Rational::zero());
        NfElement { coeffs: c }
    }

    pub fn add(&self, x: &NfElement, y: &NfElement) -> NfElement {
        NfElement { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, x: &NfElement, y: &NfElement) -> NfElement {
        NfElement { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self, x: &NfElement) -> NfElement {
        NfElement { coeffs: x.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, x: &NfElement, y: &NfElement) -> NfElement {
        let mut prod = vec![Rational::zero(); 2 * self.degree() - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        self.reduce_poly(prod)
    }
}

/// Dense polynomials over `F_ell`, coefficients ascending and trimmed.
pub(crate) mod fp {
    use super::*;

    pub fn trim(mut p: Vec<u64>) -> Vec<u64> {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    pub fn eval(p: &[u64], x: u64, ell: u64) -> u64 {
        p.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, ell) + c) % ell)
    }

    pub fn mul(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, ell)) % ell;
            }
        }
        trim(out)
    }

    pub fn add(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % ell).collect())
    }

    /// Quotient and remainder by a monic divisor.
    pub fn divrem_monic(a: &[u64], g: &[u64], ell: u64) -> (Vec<u64>, Vec<u64>) {
        let dg = g.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= dg {
            return (Vec::new(), trim(r));
        }
        let mut q = vec![0; r.len() - dg];
        for i in (0..q.len()).rev() {
            let c = r[i + dg];
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &gj) in g.iter().enumerate() {
                r[i + j] = (r[i + j] + ell - mul_mod(c, gj, ell)) % ell;
            }
        }
        r.truncate(dg);
        (trim(q), trim(r))
    }

    pub fn rem_monic(a: &[u64], g: &[u64], ell: u64) -> Vec<u64> {
        divrem_monic(a, g, ell).1
    }
}

/// A prime ideal above `ell`, given by a monic irreducible factor `g` of `m mod ell`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdealFactor {
    pub ell: u64,
    /// Monic, coefficients ascending.
    pub g: Vec<u64>,
    pub residue_degree: usize,
    pub multiplicity: u32,
}

impl PrimeIdealFactor {
    /// Human-readable form such as `(5, x^2 + 3x + 4)`.
    pub fn describe(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.g.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        format!("({}, {})", self.ell, terms.join(" + "))
    }
}

/// An element of the residue field `F_ell[x]/(g)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ResidueElement {
    pub ell: u64,
    pub g: Vec<u64>,
    /// Reduced representative, degree < deg g, trimmed.
    pub poly: Vec<u64>,
}

impl ResidueElement {
    pub fn from_int(ideal: &PrimeIdealFactor, n: i64) -> Self {
        let c = n.rem_euclid(ideal.ell as i64) as u64;
        ResidueElement { ell: ideal.ell, g: ideal.g.clone(), poly: fp::trim(vec![c]) }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ell != other.ell || self.g != other.g {
            return Err(Error::MismatchedField);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(ResidueElement { ell: self.ell, g: self.g.clone(), poly: fp::add(&self.poly, &other.poly, self.ell) })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let prod = fp::mul(&self.poly, &other.poly, self.ell);
        Ok(ResidueElement { ell: self.ell, g: self.g.clone(), poly: fp::rem_monic(&prod, &self.g, self.ell) })
    }
}

fn reduce_int_mod(c: &BigInt, ell: u64) -> u64 {
    let r = c % BigInt::from(ell);
    let r = if r.is_negative() { r + BigInt::from(ell) } else { r };
    r.to_u64().expect("reduced below ell")
}

/// Factors `m mod ell` into monic irreducibles with multiplicity (degree <= 4).
///
/// Linear factors come from an exhaustive root search; a root-free quartic
/// remainder is tested against every monic quadratic.
pub fn factor_minpoly_mod(minpoly: &[BigInt], ell: u64) -> Result<Vec<PrimeIdealFactor>> {
    let deg = minpoly.len().saturating_sub(1);
    if deg > 4 {
        return Err(Error::UnsupportedDegree(deg));
    }
    if deg == 0 {
        return Err(Error::BadParameters("constant polynomial".into()));
    }
    if !minpoly[deg].is_one() {
        return Err(Error::NotMonic);
    }
    if !is_prime(ell) {
        return Err(Error::BadParameters(format!("{ell} is not prime")));
    }
    let mut f = fp::trim(minpoly.iter().map(|c| reduce_int_mod(c, ell)).collect());
    let mut out = Vec::new();
    for r in 0..ell {
        if f.len() <= 1 {
            break;
        }
        let lin = vec![(ell - r) % ell, 1];
        let mut mult = 0;
        while fp::eval(&f, r, ell) == 0 {
            f = fp::divrem_monic(&f, &lin, ell).0;
            mult += 1;
        }
        if mult > 0 {
            out.push(PrimeIdealFactor { ell, g: lin, residue_degree: 1, multiplicity: mult });
        }
    }
    match f.len().saturating_sub(1) {
        0 => {}
        2 | 3 => out.push(PrimeIdealFactor { ell, residue_degree: f.len() - 1, g: f, multiplicity: 1 }),
        4 => {
            let mut split = None;
            'search: for c in 1..ell {
                for b in 0..ell {
                    let q = vec![c, b, 1];
                    let (quot, rem) = fp::divrem_monic(&f, &q, ell);
                    if rem.is_empty() {
                        split = Some((q, quot));
                        break 'search;
                    }
                }
            }
            match split {
                None => out.push(PrimeIdealFactor { ell, g: f, residue_degree: 4, multiplicity: 1 }),
                Some((q, quot)) if q == quot => {
                    out.push(PrimeIdealFactor { ell, g: q, residue_degree: 2, multiplicity: 2 })
                }
                Some((q, quot)) => {
                    for g in [q, quot] {
                        out.push(PrimeIdealFactor { ell, g, residue_degree: 2, multiplicity: 1 });
                    }
                }
            }
        }
        d => unreachable!("root-free remainder of degree {d}"),
    }
    out.sort_by(|a, b| {
        (a.residue_degree, a.g.iter().rev().collect::<Vec<_>>())
            .cmp(&(b.residue_degree, b.g.iter().rev().collect::<Vec<_>>()))
    });
    Ok(out)
}

/// Image of `e` in the residue field of `ideal`.
pub fn reduce_element(e: &NfElement, ideal: &PrimeIdealFactor) -> Result<ResidueElement> {
    let ell = ideal.ell;
    let mut acc: Vec<u64> = Vec::new();
    // Horner in x modulo g.
    for c in e.coeffs.iter().rev() {
        let c = rational_mod_u64(c, ell)?;
        acc = fp::mul(&acc, &[0, 1], ell);
        acc = fp::add(&acc, &[c], ell);
        acc = fp::rem_monic(&acc, &ideal.g, ell);
    }
    Ok(ResidueElement { ell, g: ideal.g.clone(), poly: acc })
}

/// Reduction of a rational into the residue field of `ideal`.
pub fn reduce_rational(q: &Rational, ideal: &PrimeIdealFactor) -> Result<ResidueElement> {
    let c = rational_mod_u64(q, ideal.ell)?;
    Ok(ResidueElement { ell: ideal.ell, g: ideal.g.clone(), poly: fp::trim(vec![c]) })
}

/// Coefficient-wise equality in a common residue field.
pub fn residue_equal(r1: &ResidueElement, r2: &ResidueElement) -> Result<bool> {
    r1.check_same(r2)?;
    Ok(r1.poly == r2.poly)
}

/// The factors whose prime ideal contains `h`, i.e. where `h` reduces to zero.
///
/// Identifies a two-element generator `(ell, h(a))` with a factor of `m mod ell`.
pub fn ideals_containing<'a>(h: &NfElement, factors: &'a [PrimeIdealFactor]) -> Result<Vec<&'a PrimeIdealFactor>> {
    let mut out = Vec::new();
    for f in factors {
        if reduce_element(h, f)?.is_zero() {
            out.push(f);
        }
    }
    Ok(out)
}

/// `m mod ell` rebuilt from the factor list, for round-trip checks.
pub fn multiply_factors(factors: &[PrimeIdealFactor], ell: u64) -> Vec<u64> {
    let mut acc = vec![1];
    for f in factors {
        for _ in 0..f.multiplicity {
            acc = fp::mul(&acc, &f.g, ell);
        }
    }
    acc
}

/// Evaluates an integer polynomial mod `ell` at `x`.
pub fn eval_mod(poly: &[BigInt], x: u64, ell: u64) -> u64 {
    let reduced: Vec<u64> = poly.iter().map(|c| reduce_int_mod(c, ell)).collect();
    fp::eval(&reduced, x, ell)
}
