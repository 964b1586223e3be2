use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{level_raise_v, QSeries, Rationals};
use crate::arith::{bernoulli, is_prime, rat_int, sigma, Rational};
use crate::error::{Error, Result};

fn check_weight(k: i64) -> Result<usize> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    Ok(k as usize)
}

fn check_prec(prec: usize) -> Result<()> {
    if prec == 0 {
        return Err(Error::BadParameters("precision must be positive".into()));
    }
    Ok(())
}

fn divisor_sums(m: u32, prec: usize) -> impl Iterator<Item = Rational> {
    (1..prec as u64).map(move |n| Rational::from_integer(sigma(m, n).into()))
}

/// Level-one `E_k = -B_k/2k + sum sigma_{k-1}(n) q^n`.
pub fn eisenstein_e(k: i64, prec: usize) -> Result<QSeries<Rationals>> {
    let ku = check_weight(k)?;
    check_prec(prec)?;
    let constant = -bernoulli(ku) / rat_int(2 * k);
    let coeffs = std::iter::once(constant).chain(divisor_sums((k - 1) as u32, prec)).collect();
    QSeries::from_rationals(coeffs, Some(k))
}

/// `G_alpha = 1 - (2 alpha / B_alpha) sum sigma_{alpha-1}(n) q^n`.
pub fn eisenstein_g(alpha: i64, prec: usize) -> Result<QSeries<Rationals>> {
    let au = check_weight(alpha)?;
    check_prec(prec)?;
    let factor = -rat_int(2 * alpha) / bernoulli(au);
    let coeffs =
        std::iter::once(Rational::one()).chain(divisor_sums((alpha - 1) as u32, prec).map(|s| s * &factor)).collect();
    QSeries::from_rationals(coeffs, Some(alpha))
}

/// `E_{k,p}^eps = E_k + eps p^(k/2) E_k(pz)`.
/// `E_{k,p}^+` or `E_{k,p}^-`.
pub fn eisenstein_label(k: i64, p: u64, eps: i64) -> String {
    format!("E_{{{k},{p}}}^{}", if eps < 0 { '-' } else { '+' })
}

pub fn eisenstein_level(k: i64, p: u64, eps: i64, prec: usize) -> Result<QSeries<Rationals>> {
    check_weight(k)?;
    if eps != 1 && eps != -1 {
        return Err(Error::BadParameters(format!("eps = {eps} must be +1 or -1")));
    }
    if k == 2 && eps == 1 {
        return Err(Error::BadParameters("weight 2 requires eps = -1".into()));
    }
    if !is_prime(p) {
        return Err(Error::BadParameters(format!("{p} is not prime")));
    }
    let e = eisenstein_e(k, prec)?;
    let c = Rational::from_integer(BigInt::from(eps) * BigInt::from(p).pow((k / 2) as u32));
    e.add(&level_raise_v(p, &e)?.scale(&c))
}

/// `G_{2,p}^- = G_2(z) - p G_2(pz)`, constant term `1 - p`.
pub fn g2_minus(p: u64, prec: usize) -> Result<QSeries<Rationals>> {
    if !is_prime(p) {
        return Err(Error::BadParameters(format!("{p} is not prime")));
    }
    let g2 = eisenstein_g(2, prec)?;
    g2.sub(&level_raise_v(p, &g2)?.scale(&rat_int(p as i64)))
}

/// `q^h prod_delta prod_{n>=1} (1 - q^(delta n))^(r_delta)` with `h = sum delta r_delta / 24`.
pub fn eta_product(terms: &[(u64, i64)], prec: usize) -> Result<QSeries<Rationals>> {
    check_prec(prec)?;
    if terms.iter().any(|&(d, _)| d == 0) {
        return Err(Error::BadParameters("eta quotient level must be positive".into()));
    }
    let order: i64 = terms.iter().map(|&(d, r)| d as i64 * r).sum();
    if order % 24 != 0 || order < 0 {
        return Err(Error::FractionalExponent(order));
    }
    let shift = (order / 24) as usize;
    let r_total: i64 = terms.iter().map(|&(_, r)| r).sum();
    let weight = (r_total % 2 == 0).then_some(r_total / 2);
    let mut out = vec![Rational::zero(); prec];
    if shift < prec {
        let len = prec - shift;
        let mut c = vec![BigInt::zero(); len];
        c[0] = BigInt::one();
        for &(delta, r) in terms {
            let delta = delta as usize;
            let mut step = delta;
            while step < len {
                for _ in 0..r.unsigned_abs() {
                    if r > 0 {
                        // multiply by (1 - q^step)
                        for i in (step..len).rev() {
                            let t = c[i - step].clone();
                            c[i] -= t;
                        }
                    } else {
                        // divide by (1 - q^step)
                        for i in step..len {
                            let t = c[i - step].clone();
                            c[i] += t;
                        }
                    }
                }
                step += delta;
            }
        }
        for (i, v) in c.into_iter().enumerate() {
            out[shift + i] = Rational::from_integer(v);
        }
    }
    QSeries::from_rationals(out, weight)
}
