use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{mul_mod, pow_mod};
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Prime factorisation as `(prime, exponent)` pairs, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization<T = u64> {
    pairs: Vec<(T, u32)>,
}

impl<T: Ord + Clone> Factorization<T> {
    fn from_map(map: BTreeMap<T, u32>) -> Self {
        Factorization { pairs: map.into_iter().filter(|(_, e)| *e > 0).collect() }
    }

    /// Builds from pairs whose first entries are already known to be prime.
    pub(crate) fn from_prime_pairs(pairs: impl IntoIterator<Item = (T, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (p, e) in pairs {
            *map.entry(p).or_insert(0) += e;
        }
        Self::from_map(map)
    }

    pub fn pairs(&self) -> &[(T, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = &T> {
        self.pairs.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn largest_prime(&self) -> Option<&T> {
        self.pairs.last().map(|(p, _)| p)
    }
}

impl Factorization<u64> {
    pub fn reconstruct(&self) -> u128 {
        self.pairs.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    pub fn to_big(&self) -> Factorization<BigUint> {
        Factorization { pairs: self.pairs.iter().map(|&(p, e)| (BigUint::from(p), e)).collect() }
    }
}

impl Factorization<BigUint> {
    pub fn reconstruct(&self) -> BigUint {
        self.pairs.iter().map(|(p, e)| p.pow(*e)).product()
    }

    /// Merges several factorisations multiplicatively.
    pub fn product<'a>(parts: impl IntoIterator<Item = &'a Factorization<BigUint>>) -> Self {
        let mut map = BTreeMap::new();
        for part in parts {
            for (p, e) in &part.pairs {
                *map.entry(p.clone()).or_insert(0) += e;
            }
        }
        Self::from_map(map)
    }

    /// Removes every prime of `other` entirely (used to cancel a coprime denominator's primes).
    pub fn without_primes_of(&self, other: &Factorization<BigUint>) -> Self {
        Factorization {
            pairs: self.pairs.iter().filter(|(p, _)| other.pairs.iter().all(|(q, _)| q != p)).cloned().collect(),
        }
    }
}

/// Deterministic Miller-Rabin; the twelve prime bases are exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..d_shift {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Strong probable-prime test to the same twelve bases. Exact below 3.3e24.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    // Brent's variant with batched gcds.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m) = (2u64, 128u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_u64(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Full factorisation of a 64-bit integer: trial division to 10^6, then Pollard-Brent rho.
pub fn factor(mut n: u64) -> Factorization {
    assert!(n >= 1, "factor is defined for n >= 1");
    let mut map = BTreeMap::new();
    for p in [2u64, 3] {
        while n.is_multiple_of(p) {
            *map.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut d = 5u64;
    let mut step = 2;
    while d <= TRIAL_LIMIT && d * d <= n {
        while n.is_multiple_of(d) {
            *map.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        if d * d > n {
            *map.entry(n).or_insert(0) += 1;
        } else {
            split_u64(n, &mut map);
        }
    }
    Factorization::from_map(map)
}

fn rho_big(n: &BigUint, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32..20 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut q = one.clone();
        let mut steps = 0u64;
        loop {
            for _ in 0..64 {
                x = f(&x);
                y = f(&f(&y));
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            steps += 64;
            let g = q.gcd(n);
            if g == *n {
                break;
            }
            if g != one {
                return Some(g);
            }
            if steps > budget {
                return None;
            }
        }
    }
    None
}

fn split_big(n: BigUint, out: &mut BTreeMap<BigUint, u32>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if let Some(small) = n.to_u64() {
        for (p, e) in factor(small).pairs {
            *out.entry(BigUint::from(p)).or_insert(0) += e;
        }
        return Ok(());
    }
    if is_prime_big(&n) {
        *out.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    let d = rho_big(&n, 5_000_000).ok_or_else(|| Error::Overflow(n.to_string()))?;
    let rest = &n / &d;
    split_big(d, out)?;
    split_big(rest, out)
}

/// Factorisation of an arbitrary-width integer.
///
/// Word-sized inputs go through [`factor`]. Wider ones are trial-divided and then
/// split with rho; a wide composite cofactor that rho cannot split within its
/// budget yields [`Error::Overflow`].
pub fn factor_big(n: &BigUint) -> Result<Factorization<BigUint>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    if let Some(small) = n.to_u64() {
        return Ok(factor(small).to_big());
    }
    let mut map = BTreeMap::new();
    let mut n = n.clone();
    for p in primes_up_to(TRIAL_LIMIT) {
        let bp = BigUint::from(p);
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            *map.entry(bp.clone()).or_insert(0) += 1;
            n = q;
        }
        if n.is_one() {
            break;
        }
    }
    split_big(n, &mut map)?;
    Ok(Factorization::from_map(map))
}

/// `P^+(n)`, with `P^+(1) = 1`.
pub fn largest_prime_factor(n: u64) -> u64 {
    factor(n).largest_prime().copied().unwrap_or(1)
}

/// Least `t >= 1` with `a^t = 1 (mod m)`.
pub fn multiplicative_order(a: i64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::BadParameters(format!("modulus {m} must be >= 2")));
    }
    let a = (a as i128).rem_euclid(m as i128) as u64;
    if a.gcd(&m) != 1 {
        return Err(Error::NotCoprime { a: a.to_string(), m: m.to_string() });
    }
    if is_prime(m) {
        let mut order = m - 1;
        for &(q, _) in factor(m - 1).pairs() {
            while order.is_multiple_of(q) && pow_mod(a, order / q, m) == 1 {
                order /= q;
            }
        }
        return Ok(order);
    }
    let mut x = a % m;
    let mut t = 1;
    while x != 1 {
        x = mul_mod(x, a, m);
        t += 1;
    }
    Ok(t)
}

/// Primes `<= n` by a plain odd-only sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let half = (n - 1) / 2; // index i represents 2i + 3
    let mut composite = vec![false; half];
    let mut i = 0;
    while (2 * i + 3) * (2 * i + 3) <= n {
        if !composite[i] {
            let p = 2 * i + 3;
            let mut j = (p * p - 3) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(n / 10 + 10);
    primes.push(2);
    primes.extend(composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| (2 * i + 3) as u64));
    primes
}
