//! Truncated q-expansions `a(0) + a(1) q + ... + a(N-1) q^(N-1)` over a coefficient ring.
//!
//! A series of precision `N` stores exactly the coefficients it knows; binary
//! operations return the smaller of the two precisions and every operator
//! shrinks precision rather than invent coefficients it cannot know.

mod forms;
mod json;
mod ops;

pub use forms::{eisenstein_e, eisenstein_g, eisenstein_label, eisenstein_level, eta_product, g2_minus};
pub use json::{AnySeries, SeriesJson};
pub use ops::{change_ring, hecke_t, hecke_u, level_raise_v};

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{mul_mod, rational_mod_u64, Rational};
use crate::error::{Error, Result};
use crate::fieldred::{NfElement, NumberField};

/// Which ring a series lives in; used for serialization and mismatch reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingTag {
    Rational,
    IntegersMod(u64),
    NumberField(Vec<num_bigint::BigInt>),
}

/// A commutative coefficient ring, carried by value inside every series.
pub trait CoeffRing: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Image of a rational; fails when its denominator is not a unit.
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;
    fn tag(&self) -> RingTag;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The field `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn from_rational(&self, q: &Rational) -> Result<Rational> {
        Ok(q.clone())
    }
    fn tag(&self) -> RingTag {
        RingTag::Rational
    }
}

/// `Z/mZ` with `m >= 2`, elements in `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegersMod {
    modulus: u64,
}

impl IntegersMod {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadParameters(format!("modulus {modulus} must be >= 2")));
        }
        Ok(IntegersMod { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl CoeffRing for IntegersMod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.modulus as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.modulus)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_rational(&self, q: &Rational) -> Result<u64> {
        rational_mod_u64(q, self.modulus)
    }
    fn tag(&self) -> RingTag {
        RingTag::IntegersMod(self.modulus)
    }
}

impl CoeffRing for NumberField {
    type Elem = NfElement;

    fn zero(&self) -> NfElement {
        NumberField::zero(self)
    }
    fn one(&self) -> NfElement {
        NumberField::one(self)
    }
    fn add(&self, a: &NfElement, b: &NfElement) -> NfElement {
        NumberField::add(self, a, b)
    }
    fn neg(&self, a: &NfElement) -> NfElement {
        NumberField::neg(self, a)
    }
    fn mul(&self, a: &NfElement, b: &NfElement) -> NfElement {
        NumberField::mul(self, a, b)
    }
    fn is_zero(&self, a: &NfElement) -> bool {
        a.is_zero()
    }
    fn from_rational(&self, q: &Rational) -> Result<NfElement> {
        Ok(NumberField::from_rational(self, q.clone()))
    }
    fn tag(&self) -> RingTag {
        RingTag::NumberField(self.minpoly().to_vec())
    }
}

/// A q-expansion known to precision `O(q^prec)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
    weight: Option<i64>,
}

impl<R: CoeffRing> QSeries<R> {
    /// Precision is `coeffs.len()`, which must be at least one.
    pub fn new(ring: R, coeffs: Vec<R::Elem>, weight: Option<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::BadParameters("precision must be positive".into()));
        }
        Ok(QSeries { ring, coeffs, weight })
    }

    pub fn zero(ring: R, prec: usize) -> Self {
        assert!(prec > 0, "precision must be positive");
        let coeffs = vec![ring.zero(); prec];
        QSeries { ring, coeffs, weight: None }
    }

    pub fn one(ring: R, prec: usize) -> Self {
        let mut s = Self::zero(ring, prec);
        s.coeffs[0] = s.ring.one();
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn weight(&self) -> Option<i64> {
        self.weight
    }

    pub fn with_weight(mut self, weight: Option<i64>) -> Self {
        self.weight = weight;
        self
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// Coefficient of `q^n`; `None` past the precision.
    pub fn coeff(&self, n: usize) -> Option<&R::Elem> {
        self.coeffs.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn truncate(mut self, prec: usize) -> Self {
        assert!(prec > 0, "precision must be positive");
        self.coeffs.truncate(prec);
        self
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn join_weight(&self, other: &Self) -> Option<i64> {
        match (self.weight, other.weight) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(QSeries { ring: self.ring.clone(), coeffs, weight: self.join_weight(other) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.sub(a, b)).collect();
        Ok(QSeries { ring: self.ring.clone(), coeffs, weight: self.join_weight(other) })
    }

    pub fn neg(&self) -> Self {
        QSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| self.ring.neg(a)).collect(),
            weight: self.weight,
        }
    }

    /// Truncated Cauchy product; weights add when both are known.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let prec = self.prec().min(other.prec());
        let mut coeffs = vec![self.ring.zero(); prec];
        for (i, a) in self.coeffs[..prec].iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs[..prec - i].iter().enumerate() {
                if self.ring.is_zero(b) {
                    continue;
                }
                coeffs[i + j] = self.ring.add(&coeffs[i + j], &self.ring.mul(a, b));
            }
        }
        let weight = match (self.weight, other.weight) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(QSeries { ring: self.ring.clone(), coeffs, weight })
    }

    /// Binary powering; `f^0` is the constant series 1 at `f`'s precision.
    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.prec()).with_weight(Some(0));
        let mut base = self.clone();
        let weight = self.weight.map(|w| w * exp as i64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc.weight = weight;
        acc
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        QSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect(),
            weight: self.weight,
        }
    }

    /// Multiplies by a rational scalar mapped into the ring.
    pub fn scale_rational(&self, q: &Rational) -> Result<Self> {
        Ok(self.scale(&self.ring.from_rational(q)?))
    }
}

impl QSeries<Rationals> {
    pub fn from_rationals(coeffs: Vec<Rational>, weight: Option<i64>) -> Result<Self> {
        Self::new(Rationals, coeffs, weight)
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(Rationals, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(), None)
    }
}
