use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NonDivParams;
use crate::arith::{pow_mod, primes_up_to};
use crate::error::{Error, Result};

const PRIME_SEGMENT: u64 = 1 << 18;
const MARK_SEGMENT: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonDivCount {
    pub x: u64,
    pub count: u64,
    pub h1: u64,
}

fn isqrt(x: u64) -> u64 {
    let mut s = (x as f64).sqrt() as u64;
    while s * s > x {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= x {
        s += 1;
    }
    s
}

/// Primes in `[lo, hi)` from a byte sieve over the base primes.
fn primes_in_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let mut composite = vec![false; (hi - lo) as usize];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        for n in (start..hi).step_by(p as usize) {
            composite[(n - lo) as usize] = true;
        }
    }
    (lo..hi).filter(|&n| n >= 2 && !composite[(n - lo) as usize]).collect()
}

/// Primes in `(from, to]` with `keep(p)`, found segment by segment.
fn primes_between(from: u64, to: u64, base: &[u64], keep: impl Fn(u64) -> bool + Sync) -> Vec<u64> {
    let starts: Vec<u64> = (from + 1..=to).step_by(PRIME_SEGMENT as usize).collect();
    starts
        .into_par_iter()
        .map(|lo| {
            let hi = (lo + PRIME_SEGMENT).min(to + 1);
            primes_in_segment(lo, hi, base).into_iter().filter(|&p| keep(p)).collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

/// Exponents `a >= 1` with `p1^a <= x` and `f(p1^a) == 0 (mod ell)`.
fn bad_exponents(p1: u64, x: u64, params: &NonDivParams) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut pa = p1;
    let mut a = 1u32;
    loop {
        if params.local_value(p1, a) == 0 {
            out.push((pa, p1));
        }
        match pa.checked_mul(p1) {
            Some(next) if next <= x => pa = next,
            _ => break,
        }
        a += 1;
    }
    out
}

/// `#{n <= x : ell ∤ f(n)}`.
///
/// Every `n` carrying a prime power `p1^a || n` with `f(p1^a) == 0` is struck out.
/// Primes below `sqrt(x)` contribute all their bad exponents; above it only `a = 1`
/// occurs, which depends on `p1 mod ell` alone away from `ell` and the level prime.
pub fn count_nondiv(x: u64, params: &NonDivParams) -> NonDivCount {
    let h1 = params.h1;
    if x < 2 {
        return NonDivCount { x, count: x, h1 };
    }
    let ell = params.ell;
    let s = isqrt(x);
    let base = primes_up_to(s);
    let mut small: Vec<(u64, u64)> = Vec::new();
    for &p1 in &base {
        small.extend(bad_exponents(p1, x, params));
    }
    let bad_residue: Vec<bool> = (0..ell).map(|c| (1 + pow_mod(c, params.m, ell)).is_multiple_of(ell)).collect();
    let level_p = params.level.map(|(p, _)| p);
    let large = primes_between(s, x, &base, |q| match level_p {
        Some(p) if p == q => params.local_value(q, 1) == 0,
        _ => bad_residue[(q % ell) as usize],
    });

    let starts: Vec<u64> = (1..=x).step_by(MARK_SEGMENT as usize).collect();
    let count = starts
        .into_par_iter()
        .map(|lo| {
            let hi = (lo + MARK_SEGMENT).min(x + 1);
            let mut good = vec![true; (hi - lo) as usize];
            for &(pa, p1) in &small {
                // n = pa * j with p1 ∤ j
                let j = lo.div_ceil(pa);
                let mut jr = j % p1;
                let mut n = j * pa;
                while n < hi {
                    if jr != 0 {
                        good[(n - lo) as usize] = false;
                    }
                    jr += 1;
                    if jr == p1 {
                        jr = 0;
                    }
                    n += pa;
                }
            }
            for &q in large.iter().take_while(|&&q| q < hi) {
                let mut n = lo.div_ceil(q) * q;
                while n < hi {
                    good[(n - lo) as usize] = false;
                    n += q;
                }
            }
            good.iter().filter(|&&g| g).count() as u64
        })
        .sum();
    NonDivCount { x, count, h1 }
}

/// `f(n) mod ell` for `n = 0..=x` (entry 0 unused) from a linear smallest-prime-factor sieve.
pub fn nondiv_values(x: u64, params: &NonDivParams) -> Result<Vec<u32>> {
    if x > u32::MAX as u64 / 2 {
        return Err(Error::BadParameters(format!("x = {x} is too large for the linear sieve")));
    }
    let n = x as usize;
    let mut vals = vec![0u32; n + 1];
    let mut lp = vec![0u32; n + 1];
    // p-part and exponent of the smallest prime factor
    let mut pe = vec![0u32; n + 1];
    let mut ex = vec![0u8; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    if n >= 1 {
        vals[1] = 1;
    }
    for i in 2..=n {
        if lp[i] == 0 {
            lp[i] = i as u32;
            pe[i] = i as u32;
            ex[i] = 1;
            vals[i] = params.local_value(i as u64, 1) as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let m = i * p as usize;
            if p > lp[i] || m > n {
                break;
            }
            lp[m] = p;
            if p == lp[i] {
                pe[m] = pe[i] * p;
                ex[m] = ex[i] + 1;
                let rest = i / pe[i] as usize;
                let local = params.local_value(p as u64, ex[m] as u32);
                vals[m] = (local * vals[rest] as u64 % params.ell) as u32;
            } else {
                pe[m] = p;
                ex[m] = 1;
                let local = params.local_value(p as u64, 1);
                vals[m] = (local * vals[i] as u64 % params.ell) as u32;
            }
        }
    }
    Ok(vals)
}

/// [`count_nondiv`] computed from the per-`n` values of the linear sieve.
pub fn count_nondiv_linear(x: u64, params: &NonDivParams) -> Result<NonDivCount> {
    let vals = nondiv_values(x, params)?;
    let count = vals.iter().skip(1).filter(|&&v| v != 0).count() as u64;
    Ok(NonDivCount { x, count, h1: params.h1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub x: u64,
    pub primes: u64,
    pub hits: u64,
    pub empirical: f64,
    pub predicted: f64,
}

/// Share of primes `p1 <= x` with `ell | sigma_r(p1)`, against `r/(ell-1)`.
pub fn prime_density_check(x: u64, params: &NonDivParams) -> Result<DensityCheck> {
    if x < 100 {
        return Err(Error::BadParameters("density check needs x >= 100".into()));
    }
    let ell = params.ell;
    let primes = primes_up_to(x);
    let hits = primes.par_iter().filter(|&&p| (1 + pow_mod(p % ell, params.r, ell)).is_multiple_of(ell)).count() as u64;
    Ok(DensityCheck {
        x,
        primes: primes.len() as u64,
        hits,
        empirical: hits as f64 / primes.len() as f64,
        predicted: params.predicted_density(),
    })
}
