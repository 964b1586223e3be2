//! Congruence moduli, theorem hypotheses, explicit constructions and certificates.

mod certificate;
mod construct;

pub use certificate::{
    verify_congruence, verify_congruence_factored, verify_congruence_numberfield, CongruenceCertificate,
    ModulusDescriptor, Verdict,
};
pub use construct::{construct_case_b, construct_case_c, up_eigen_congruence, Construction, UpEigenReport};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{bernoulli, factor_big, is_prime, reduced_numerator, valuation, BigNum, Factorization, Rational};
use crate::error::{Error, Result};

pub(crate) fn check_level_params(k: i64, p: u64, eps: i64) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    if eps != 1 && eps != -1 {
        return Err(Error::BadParameters(format!("eps = {eps} must be +1 or -1")));
    }
    if k == 2 && eps == 1 {
        return Err(Error::BadParameters("weight 2 requires eps = -1".into()));
    }
    if !is_prime(p) {
        return Err(Error::BadParameters(format!("{p} is not prime")));
    }
    Ok(())
}

/// `B_k / 2k`.
pub fn bernoulli_ratio(k: i64) -> Rational {
    bernoulli(k as usize) / Rational::from_integer(BigInt::from(2 * k))
}

/// `eps + p^e`.
pub(crate) fn eps_plus_power(eps: i64, p: u64, e: u32) -> BigInt {
    BigInt::from(eps) + BigInt::from(p).pow(e)
}

/// `(prime, exponent)` pairs in report form.
pub fn factor_pairs(f: &Factorization<BigUint>) -> Vec<(BigNum, u32)> {
    f.pairs().iter().map(|(p, e)| (BigNum::from(p.clone()), *e)).collect()
}

/// Factors `n` using the primes of the given pieces, which must cover every prime of `n`.
///
/// Falls back to factoring `n` directly if they do not.
fn factor_with_hints(n: &BigUint, hints: &[BigUint]) -> Result<Factorization<BigUint>> {
    let mut parts = Vec::new();
    for h in hints.iter().filter(|h| !h.is_zero()) {
        parts.push(factor_big(h)?);
    }
    let candidates = Factorization::product(parts.iter());
    let mut pairs = Vec::new();
    let mut rest = n.clone();
    for p in candidates.primes() {
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            pairs.push((p.clone(), e));
        }
    }
    if rest == BigUint::from(1u32) {
        Ok(Factorization::from_prime_pairs(pairs))
    } else {
        factor_big(n)
    }
}

/// `N = num((B_k/2k)(eps + p^(k/2)))` and `M = |(eps + p^(k/2))(eps + p^(k/2-1))|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuliReport {
    pub k: i64,
    pub p: u64,
    pub eps: i64,
    #[serde(rename = "N")]
    pub n: BigNum,
    #[serde(rename = "N_factors")]
    pub n_factors: Vec<(BigNum, u32)>,
    #[serde(rename = "M")]
    pub m: BigNum,
    /// Absent when `M = 0` (weight 2, `eps = -1`).
    #[serde(rename = "M_factors")]
    pub m_factors: Option<Vec<(BigNum, u32)>>,
}

impl ModuliReport {
    pub fn n_big(&self) -> BigUint {
        self.n.0.magnitude().clone()
    }

    pub fn m_big(&self) -> BigUint {
        self.m.0.magnitude().clone()
    }

    pub fn n_factorization(&self) -> Factorization<BigUint> {
        Factorization::from_prime_pairs(self.n_factors.iter().map(|(p, e)| (p.0.magnitude().clone(), *e)))
    }
}

pub fn moduli(k: i64, p: u64, eps: i64) -> Result<ModuliReport> {
    check_level_params(k, p, eps)?;
    let half = (k / 2) as u32;
    let a = eps_plus_power(eps, p, half);
    let b = eps_plus_power(eps, p, half - 1);
    let br = bernoulli_ratio(k);
    let n = reduced_numerator(&(br.clone() * Rational::from_integer(a.clone())))?;
    let hints = [br.numer().magnitude().clone(), a.magnitude().clone()];
    let n_factors = factor_with_hints(&n, &hints)?;
    let m = (&a * &b).abs().to_biguint().expect("non-negative");
    let m_factors = if m.is_zero() {
        None
    } else {
        let hints = [a.magnitude().clone(), b.magnitude().clone()];
        Some(factor_pairs(&factor_with_hints(&m, &hints)?))
    };
    Ok(ModuliReport { k, p, eps, n: n.into(), n_factors: factor_pairs(&n_factors), m: m.into(), m_factors })
}

/// `ceil(k(p+1)/12)`.
pub fn sturm_bound(k: i64, p: u64) -> u64 {
    (k as u64 * (p + 1)).div_ceil(12)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremTag {
    /// Equivalence theorem for `ell >= max(5, k-1)`.
    Equivalence,
    /// Variant without the `p != -1` and `ell >= k-1` hypotheses.
    Relaxed,
    /// The earlier sufficient criterion for `ell >= k+2`.
    Sufficient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub condition: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub theorem: TheoremTag,
    pub k: i64,
    pub p: u64,
    pub eps: i64,
    pub ell: u64,
    pub conditions: Vec<Condition>,
    pub overall: bool,
}

impl HypothesisReport {
    fn new(theorem: TheoremTag, k: i64, p: u64, eps: i64, ell: u64, conds: Vec<(String, bool)>) -> Self {
        let conditions: Vec<Condition> =
            conds.into_iter().map(|(condition, holds)| Condition { condition, holds }).collect();
        let overall = conditions.iter().all(|c| c.holds);
        HypothesisReport { theorem, k, p, eps, ell, conditions, overall }
    }

    pub fn condition(&self, needle: &str) -> Option<bool> {
        self.conditions.iter().find(|c| c.condition.contains(needle)).map(|c| c.holds)
    }
}

fn divides(ell: u64, n: &BigInt) -> bool {
    (n % BigInt::from(ell)).is_zero()
}

fn admissible(k: i64, eps: i64) -> bool {
    !(k == 2 && eps == 1)
}

fn check_hyp_inputs(k: i64, p: u64, eps: i64, ell: u64) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    if eps != 1 && eps != -1 {
        return Err(Error::BadParameters(format!("eps = {eps} must be +1 or -1")));
    }
    if !is_prime(p) {
        return Err(Error::BadParameters(format!("p = {p} is not prime")));
    }
    if !is_prime(ell) {
        return Err(Error::BadParameters(format!("ell = {ell} is not prime")));
    }
    Ok(())
}

/// `N` and `M` as signed integers; `M` may be zero.
fn n_and_m(k: i64, p: u64, eps: i64) -> (BigInt, BigInt) {
    let half = (k / 2) as u32;
    let a = eps_plus_power(eps, p, half);
    let b = eps_plus_power(eps, p, half - 1);
    let q = bernoulli_ratio(k) * Rational::from_integer(a.clone());
    (q.numer().abs(), a * b)
}

/// Hypotheses of the equivalence theorem: `ell >= max(5, k-1)`, `p != -1 (mod ell)`, `ell | N`, `ell | M`.
pub fn check_hypotheses_equivalence(k: i64, p: u64, eps: i64, ell: u64) -> Result<HypothesisReport> {
    check_hyp_inputs(k, p, eps, ell)?;
    let (n, m) = n_and_m(k, p, eps);
    let conds = vec![
        ("(k, eps) != (2, +1)".to_string(), admissible(k, eps)),
        ("ell >= max(5, k-1)".to_string(), ell as i64 >= 5.max(k - 1)),
        ("p != -1 (mod ell)".to_string(), !(p + 1).is_multiple_of(ell)),
        ("ell | N".to_string(), divides(ell, &n)),
        ("ell | M".to_string(), divides(ell, &m)),
    ];
    Ok(HypothesisReport::new(TheoremTag::Equivalence, k, p, eps, ell, conds))
}

/// Hypotheses of the variant theorem: `ell >= 5`, `ell | N`, `k != 0 (mod ell-1)`, `ell` not dividing `B_k/2k`.
pub fn check_hypotheses_relaxed(k: i64, p: u64, eps: i64, ell: u64) -> Result<HypothesisReport> {
    check_hyp_inputs(k, p, eps, ell)?;
    let (n, _) = n_and_m(k, p, eps);
    let br = bernoulli_ratio(k);
    let conds = vec![
        ("(k, eps) != (2, +1)".to_string(), admissible(k, eps)),
        ("ell >= 5".to_string(), ell >= 5),
        ("ell | N".to_string(), divides(ell, &n)),
        ("k != 0 (mod ell-1)".to_string(), k % (ell as i64 - 1) != 0),
        ("ell does not divide num(B_k/2k)".to_string(), !divides(ell, br.numer())),
    ];
    Ok(HypothesisReport::new(TheoremTag::Relaxed, k, p, eps, ell, conds))
}

/// Hypotheses of the earlier criterion: `k >= 4`, `ell >= k+2`, `ell | N`, `ell | M`, and when
/// `ell` does not divide `eps + p^(k/2)`, some even `0 < n < k` with `ell` not dividing
/// `B_n B_(k-n) (p^(n-1) - 1)`.
pub fn check_hypotheses_sufficient(k: i64, p: u64, eps: i64, ell: u64) -> Result<HypothesisReport> {
    check_hyp_inputs(k, p, eps, ell)?;
    let (n, m) = n_and_m(k, p, eps);
    let a = eps_plus_power(eps, p, (k / 2) as u32);
    let ell_big = BigUint::from(ell);
    let extra = if divides(ell, &a) {
        true
    } else {
        (2..k).step_by(2).any(|j| {
            let t = bernoulli(j as usize)
                * bernoulli((k - j) as usize)
                * Rational::from_integer(BigInt::from(p).pow((j - 1) as u32) - 1);
            !t.is_zero() && valuation(&t, &ell_big).is_some_and(|v| v <= 0)
        })
    };
    let conds = vec![
        ("k >= 4".to_string(), k >= 4),
        ("ell >= k+2".to_string(), ell as i64 >= k + 2),
        ("ell | N".to_string(), divides(ell, &n)),
        ("ell | M".to_string(), divides(ell, &m)),
        (
            "ell | eps + p^(k/2), or some even 0 < n < k has ell not dividing B_n B_(k-n) (p^(n-1) - 1)".to_string(),
            extra,
        ),
    ];
    Ok(HypothesisReport::new(TheoremTag::Sufficient, k, p, eps, ell, conds))
}

/// Every prime `ell` passing the equivalence-theorem hypotheses, drawn from the primes of `N`.
pub fn equivalence_primes(k: i64, p: u64, eps: i64) -> Result<Vec<u64>> {
    let report = moduli(k, p, eps)?;
    let mut out = Vec::new();
    for (q, _) in &report.n_factors {
        if let Some(ell) = q.0.to_u64() {
            if check_hypotheses_equivalence(k, p, eps, ell)?.overall {
                out.push(ell);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor;
    use crate::qseries::eisenstein_level;

    fn n_of(k: i64, p: u64, eps: i64) -> u64 {
        moduli(k, p, eps).unwrap().n.0.to_u64().unwrap()
    }

    #[test]
    fn moduli_examples() {
        let r = moduli(6, 11, -1).unwrap();
        assert_eq!(n_of(6, 11, -1), 95);
        assert_eq!(r.n_factors, vec![(BigNum::from(5u64), 1), (BigNum::from(19u64), 1)]);
        assert_eq!(r.m, BigNum::from(159_600u64));
        assert_eq!(n_of(6, 11, 1), 37);
        assert_eq!(n_of(4, 17, -1), 6);
        assert_eq!(n_of(12, 7, 1), 625_355);
        assert_eq!(n_of(8, 2, 1), 17);
        let r = moduli(12, 7, 1).unwrap();
        assert_eq!(r.n_factorization().reconstruct(), r.n_big());
        assert!(matches!(moduli(2, 5, 1), Err(Error::BadParameters(_))));
    }

    #[test]
    fn weight_two_has_zero_m() {
        let r = moduli(2, 11, -1).unwrap();
        assert_eq!(r.m, BigNum::from(0u64));
        assert!(r.m_factors.is_none());
        // B_2/4 * 10 = 5/12
        assert_eq!(r.n, BigNum::from(5u64));
    }

    #[test]
    fn large_moduli_factor_completely() {
        for (k, p, eps) in [(24, 97, 1), (30, 101, -1), (40, 13, 1)] {
            let r = moduli(k, p, eps).unwrap();
            assert_eq!(r.n_factorization().reconstruct(), r.n_big(), "k={k} p={p}");
        }
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_bound(6, 11), 6);
        assert_eq!(sturm_bound(8, 2), 2);
        assert_eq!(sturm_bound(12, 7), 8);
        assert_eq!(sturm_bound(4, 17), 6);
    }

    #[test]
    fn equivalence_hypotheses_examples() {
        let r = check_hypotheses_equivalence(6, 11, -1, 5).unwrap();
        assert!(r.overall, "{r:?}");
        assert!(check_hypotheses_equivalence(6, 11, -1, 19).unwrap().overall);
        assert!(check_hypotheses_equivalence(6, 11, 1, 37).unwrap().overall);
        let r = check_hypotheses_equivalence(12, 7, 1, 5).unwrap();
        assert!(!r.overall);
        assert_eq!(r.condition("ell >= max"), Some(false));
        assert_eq!(equivalence_primes(6, 11, -1).unwrap(), vec![5, 19]);
    }

    #[test]
    fn relaxed_hypotheses_examples() {
        let r = check_hypotheses_relaxed(12, 7, 1, 181).unwrap();
        assert!(r.overall, "{r:?}");
        let r = check_hypotheses_relaxed(12, 7, 1, 691).unwrap();
        assert!(!r.overall);
        assert_eq!(r.condition("num(B_k/2k)"), Some(false));
        let r = check_hypotheses_relaxed(6, 11, 1, 7).unwrap();
        assert!(!r.conditions[2].holds);
        assert!(!r.overall);
    }

    #[test]
    fn sufficient_criterion_excludes_ell_equal_k_minus_one() {
        let r = check_hypotheses_sufficient(6, 11, -1, 5).unwrap();
        assert_eq!(r.condition("ell >= k+2"), Some(false));
        let r = check_hypotheses_sufficient(6, 11, -1, 19).unwrap();
        assert!(r.overall, "{r:?}");
    }

    #[test]
    fn n_divisibility_matches_constant_term_valuation() {
        for k in (4..=20).step_by(2) {
            for p in (2..=50u64).filter(|&p| is_prime(p)) {
                for eps in [-1i64, 1] {
                    let r = moduli(k, p, eps).unwrap();
                    let e = eisenstein_level(k, p, eps, 1).unwrap();
                    let a0 = e.coeff(0).unwrap();
                    for (ell, _) in &r.n_factors {
                        let ell = ell.0.magnitude().clone();
                        assert!(valuation(a0, &ell).unwrap() >= 1, "k={k} p={p} eps={eps} ell={ell}");
                    }
                    // and conversely for small primes not dividing N
                    for ell in [2u64, 3, 5, 7, 11, 13] {
                        let divides_n = (r.n_big() % ell as u32).is_zero();
                        let v = valuation(a0, &BigUint::from(ell)).unwrap();
                        assert_eq!(divides_n, v >= 1);
                    }
                }
            }
        }
        assert_eq!(factor(159_600).reconstruct(), 159_600);
    }
}
