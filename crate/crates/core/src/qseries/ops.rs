use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CoeffRing, IntegersMod, QSeries, Rationals};
use crate::arith::is_prime;
use crate::error::{Error, Result};

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::BadParameters(format!("{p} is not prime")));
    }
    Ok(())
}

/// `f(z) -> f(pz)`: `b(n) = a(n/p)` when `p | n`, else 0. Precision is kept.
pub fn level_raise_v<R: CoeffRing>(p: u64, f: &QSeries<R>) -> Result<QSeries<R>> {
    if p == 0 {
        return Err(Error::BadParameters("p must be positive".into()));
    }
    let ring = f.ring().clone();
    let p = p as usize;
    let coeffs = (0..f.prec()).map(|n| if n % p == 0 { f.coeffs()[n / p].clone() } else { ring.zero() }).collect();
    QSeries::new(ring, coeffs, f.weight())
}

/// `U_p`: `b(n) = a(np)`.
///
/// Output precision is `ceil(prec / p)`, the number of indices `n` with `np < prec`.
pub fn hecke_u<R: CoeffRing>(p: u64, f: &QSeries<R>) -> Result<QSeries<R>> {
    require_prime(p)?;
    let p = p as usize;
    if f.prec() < p {
        return Err(Error::InsufficientPrecision { needed: p, have: f.prec() });
    }
    let prec = f.prec().div_ceil(p);
    let coeffs = (0..prec).map(|n| f.coeffs()[n * p].clone()).collect();
    QSeries::new(f.ring().clone(), coeffs, f.weight())
}

/// `T_q` in weight `k` for a prime `q` not dividing the level:
/// `b(n) = a(qn) + q^(k-1) a(n/q)`, so `b(0) = (1 + q^(k-1)) a(0)`.
pub fn hecke_t<R: CoeffRing>(q: u64, k: i64, f: &QSeries<R>) -> Result<QSeries<R>> {
    require_prime(q)?;
    if k < 1 {
        return Err(Error::BadWeight(k));
    }
    if let Some(w) = f.weight() {
        if w != k {
            return Err(Error::BadParameters(format!("series has weight {w}, operator asked for weight {k}")));
        }
    }
    let qs = q as usize;
    if f.prec() < qs {
        return Err(Error::InsufficientPrecision { needed: qs, have: f.prec() });
    }
    let ring = f.ring();
    let qk = ring.from_rational(&BigRational::from_integer(BigInt::from(q).pow((k - 1) as u32)))?;
    let prec = f.prec().div_ceil(qs);
    let coeffs = (0..prec)
        .map(|n| {
            let head = f.coeffs()[n * qs].clone();
            if n % qs == 0 {
                ring.add(&head, &ring.mul(&qk, &f.coeffs()[n / qs]))
            } else {
                head
            }
        })
        .collect();
    QSeries::new(ring.clone(), coeffs, Some(k))
}

/// Coefficient-wise reduction into `Z/mZ`, inverting denominators.
pub fn change_ring(f: &QSeries<Rationals>, m: u64) -> Result<QSeries<IntegersMod>> {
    let ring = IntegersMod::new(m)?;
    let coeffs = f.coeffs().iter().map(|c| ring.from_rational(c)).collect::<Result<Vec<_>>>()?;
    QSeries::new(ring, coeffs, f.weight())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, sigma, Rational};
    use crate::qseries::{eisenstein_e, eisenstein_level};
    use proptest::prelude::*;

    fn series_strategy(len: usize) -> impl Strategy<Value = QSeries<Rationals>> {
        prop::collection::vec(-1000i64..1000, len).prop_map(|v| QSeries::from_ints(&v).unwrap())
    }

    #[test]
    fn v2_of_one_plus_q() {
        let f = QSeries::from_ints(&[1, 1, 0, 0]).unwrap();
        assert_eq!(level_raise_v(2, &f).unwrap(), QSeries::from_ints(&[1, 0, 1, 0]).unwrap());
    }

    #[test]
    fn v11_of_e6() {
        let e6 = eisenstein_e(6, 30).unwrap();
        let v = level_raise_v(11, &e6).unwrap();
        assert_eq!(v.coeff(11).unwrap(), &rat_int(1));
        assert_eq!(v.coeff(22).unwrap(), &rat_int(33));
        for n in (1..30).filter(|n| n % 11 != 0) {
            assert_eq!(v.coeff(n).unwrap(), &rat_int(0));
        }
    }

    #[test]
    fn u2_extracts_even_coefficients() {
        let f = QSeries::from_ints(&[10, 11, 12, 13, 14]).unwrap();
        assert_eq!(hecke_u(2, &f).unwrap(), QSeries::from_ints(&[10, 12, 14]).unwrap());
        assert!(matches!(hecke_u(7, &f), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn v_then_u_is_not_identity_in_general() {
        let f = QSeries::from_ints(&[1, 1, 1, 1, 1, 1]).unwrap();
        let vu = level_raise_v(2, &hecke_u(2, &f).unwrap()).unwrap();
        assert_ne!(vu.coeffs(), &f.coeffs()[..vu.prec()]);
    }

    #[test]
    fn u11_of_level_eisenstein() {
        let e = eisenstein_level(6, 11, -1, 40).unwrap();
        let u = hecke_u(11, &e).unwrap();
        let expected = Rational::from_integer(sigma(5, 11).into()) - rat_int(1331);
        assert_eq!(u.coeff(1).unwrap(), &expected);
        assert_eq!(expected, rat_int(159_721));
    }

    #[test]
    fn t_eigenvalues_on_level_one_eisenstein() {
        let e6 = eisenstein_e(6, 20).unwrap();
        assert_eq!(hecke_t(2, 6, &e6).unwrap().coeff(1).unwrap(), &rat_int(33));
        let e8 = eisenstein_e(8, 20).unwrap();
        assert_eq!(hecke_t(3, 8, &e8).unwrap().coeff(1).unwrap(), &rat_int(2188));
        let zero = QSeries::<Rationals>::zero(Rationals, 10).with_weight(Some(4));
        assert!(hecke_t(3, 4, &zero).unwrap().is_zero());
    }

    #[test]
    fn eisenstein_series_are_hecke_eigenforms() {
        for k in [4i64, 6, 8, 12] {
            let e = eisenstein_e(k, 50 * 13).unwrap();
            for q in [2u64, 3, 5, 7, 11, 13] {
                let t = hecke_t(q, k, &e).unwrap();
                let lambda = rat_int(1) + Rational::from_integer(BigInt::from(q).pow((k - 1) as u32));
                let expected = e.scale(&lambda).truncate(t.prec());
                assert!(t.prec() >= 50);
                assert_eq!(t, expected, "k={k} q={q}");
            }
        }
    }

    #[test]
    fn t_rejects_mismatched_weight() {
        let e6 = eisenstein_e(6, 20).unwrap();
        assert!(hecke_t(2, 8, &e6).is_err());
    }

    #[test]
    fn change_ring_examples() {
        let g = QSeries::from_rationals(vec![rat(17, 480), rat_int(-8)], None).unwrap();
        assert_eq!(change_ring(&g, 17).unwrap().coeffs(), &[0, 9]);
        let h = QSeries::from_rationals(vec![rat(1, 6)], None).unwrap();
        assert_eq!(change_ring(&h, 5).unwrap().coeffs(), &[1]);
        let bad = QSeries::from_rationals(vec![rat(1, 10)], None).unwrap();
        assert!(matches!(change_ring(&bad, 5), Err(Error::DenominatorNotInvertible { .. })));
    }

    proptest! {
        #[test]
        fn u_after_v_is_identity(f in series_strategy(40), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let uv = hecke_u(p, &level_raise_v(p, &f).unwrap()).unwrap();
            prop_assert_eq!(uv.coeffs(), &f.coeffs()[..uv.prec()]);
        }

        #[test]
        fn hecke_operators_commute(
            f in series_strategy(120),
            pair in prop::sample::select(vec![(2u64, 3u64), (2, 5), (3, 5), (2, 7), (3, 7)]),
            k in prop::sample::select(vec![2i64, 4, 12]),
        ) {
            let f = f.with_weight(Some(k));
            let (q1, q2) = pair;
            let a = hecke_t(q1, k, &hecke_t(q2, k, &f).unwrap()).unwrap();
            let b = hecke_t(q2, k, &hecke_t(q1, k, &f).unwrap()).unwrap();
            let n = a.prec().min(b.prec());
            prop_assert!(n >= 2);
            prop_assert_eq!(&a.coeffs()[..n], &b.coeffs()[..n]);
        }
    }
}
