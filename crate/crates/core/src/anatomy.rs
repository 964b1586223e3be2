//! Friable integers, the Dickman function, shifted-prime statistics and
//! lower bounds for coefficient-field degrees.

use std::io::{Read, Write};
use std::sync::OnceLock;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_up_to, BigNum};
use crate::error::{Error, Result};

/// Grid spacing of the Dickman table.
pub const RHO_STEP: f64 = 1.0 / 1024.0;
const RHO_DEFAULT_MAX: f64 = 40.0;

/// `rho` on the grid `u = 0, step, 2 step, ..., u_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoTable {
    pub step: f64,
    pub values: Vec<f64>,
}

/// Trapezoid solution of `u rho(u) = int_{u-1}^u rho` on a grid with `per_unit` points per unit.
fn rho_trapezoid(per_unit: usize, u_max: f64) -> Vec<f64> {
    let h = 1.0 / per_unit as f64;
    let n = (u_max * per_unit as f64).ceil() as usize;
    let mut rho = vec![1.0; n + 1];
    if n <= per_unit {
        return rho;
    }
    // interior sum of rho over (u-1, u) excluding both ends
    let mut interior: f64 = rho[1..per_unit].iter().sum();
    for i in per_unit + 1..=n {
        // slide the window from [i-1-N, i-1] to [i-N, i]
        interior += rho[i - 1] - rho[i - per_unit];
        let u = i as f64 * h;
        rho[i] = h * (rho[i - per_unit] / 2.0 + interior) / (u - h / 2.0);
    }
    rho
}

impl RhoTable {
    /// Solves on grids of step `h` and `h/2` and keeps the Richardson combination at step `h`.
    pub fn new(u_max: f64) -> Self {
        let per_unit = (1.0 / RHO_STEP) as usize;
        let u_max = u_max.max(1.0);
        let coarse = rho_trapezoid(per_unit, u_max);
        let fine = rho_trapezoid(2 * per_unit, u_max);
        let values = coarse.iter().enumerate().map(|(i, c)| (4.0 * fine[2 * i] - c) / 3.0).collect();
        RhoTable { step: RHO_STEP, values }
    }

    pub fn u_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    /// Four-point interpolation, with the stencil kept inside one unit interval.
    pub fn rho(&self, u: f64) -> Option<f64> {
        if u <= 1.0 {
            return (u >= 0.0).then_some(1.0);
        }
        if u <= 2.0 {
            return Some(1.0 - u.ln());
        }
        if u > self.u_max() {
            return None;
        }
        let per_unit = (1.0 / self.step).round() as usize;
        let pos = u / self.step;
        let i = pos.floor() as usize;
        if (pos - i as f64).abs() < 1e-12 {
            return Some(self.values[i]);
        }
        let unit_lo = (u.floor() as usize) * per_unit;
        let unit_hi = (unit_lo + per_unit).min(self.values.len() - 1);
        let start = i.saturating_sub(1).clamp(unit_lo, unit_hi.saturating_sub(3).max(unit_lo));
        let t = pos - start as f64;
        let y: Vec<f64> = (0..4).map(|j| self.values[(start + j).min(self.values.len() - 1)]).collect();
        let mut acc = 0.0;
        for (j, yj) in y.iter().enumerate() {
            let mut w = 1.0;
            for m in 0..4 {
                if m != j {
                    w *= (t - m as f64) / (j as f64 - m as f64);
                }
            }
            acc += w * yj;
        }
        Some(acc)
    }

    /// Writes `u,rho` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["u", "rho"]).map_err(|e| Error::Parse(e.to_string()))?;
        for (i, v) in self.values.iter().enumerate() {
            w.serialize((i as f64 * self.step, v)).map_err(|e| Error::Parse(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads a table written by [`RhoTable::write_csv`]; rows must be on a uniform grid from 0.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut rows: Vec<(f64, f64)> = Vec::new();
        for rec in r.deserialize() {
            rows.push(rec.map_err(|e| Error::Parse(e.to_string()))?);
        }
        if rows.len() < 2 || rows[0].0 != 0.0 {
            return Err(Error::Parse("rho table must start at u = 0 with at least two rows".into()));
        }
        let step = rows[1].0;
        for (i, (u, _)) in rows.iter().enumerate() {
            if (u - i as f64 * step).abs() > 1e-9 {
                return Err(Error::Parse(format!("row {i} is off the grid: u = {u}")));
            }
        }
        Ok(RhoTable { step, values: rows.into_iter().map(|(_, v)| v).collect() })
    }
}

fn shared_table() -> &'static RhoTable {
    static TABLE: OnceLock<RhoTable> = OnceLock::new();
    TABLE.get_or_init(|| RhoTable::new(RHO_DEFAULT_MAX))
}

/// The Dickman function, `1` on `[0, 1]` and `u rho'(u) = -rho(u - 1)` beyond.
pub fn dickman_rho(u: f64) -> Result<f64> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::BadParameters(format!("rho needs a finite u >= 0, got {u}")));
    }
    match shared_table().rho(u) {
        Some(v) => Ok(v),
        None => Ok(RhoTable::new(u.ceil()).rho(u).unwrap_or(0.0)),
    }
}

/// The root of `4 u rho(u) = 1` in `(2, 3)`.
pub fn solve_u1() -> f64 {
    let g = |u: f64| 4.0 * u * dickman_rho(u).unwrap_or(0.0) - 1.0;
    let (mut a, mut b) = (2.0, 3.0);
    while b - a > 1e-10 {
        let mid = (a + b) / 2.0;
        if g(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a + b) / 2.0
}

/// `P^+(n)` for `n = 0..=x`, with `P^+(0) = 0` and `P^+(1) = 1`.
pub fn largest_prime_factors(x: u64) -> Vec<u32> {
    let n = x as usize;
    let mut lpf = vec![0u32; n + 1];
    if n >= 1 {
        lpf[1] = 1;
    }
    for p in 2..=n {
        if lpf[p] == 0 {
            // p is prime; later primes overwrite, so each entry ends at its largest factor
            for m in (p..=n).step_by(p) {
                lpf[m] = p as u32;
            }
        }
    }
    lpf
}

/// `Psi(x, y) = #{1 <= n <= x : P^+(n) <= y}`.
pub fn psi_friable(x: u64, y: u64) -> Result<u64> {
    if x == 0 || y == 0 {
        return Err(Error::BadParameters("psi needs x >= 1 and y >= 1".into()));
    }
    if y >= x {
        return Ok(x);
    }
    let n = x as usize;
    let mut rough = vec![false; n + 1];
    for p in primes_up_to(x).into_iter().filter(|&p| p > y) {
        for m in (p as usize..=n).step_by(p as usize) {
            rough[m] = true;
        }
    }
    Ok(rough[1..].iter().filter(|&&r| !r).count() as u64)
}

/// Euler's constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `rho(u) + (1 - gamma) rho(u - 1) / ln x` with `u = ln x / ln y`, the density `Psi(x, y)/x`
/// including its first correction term.
pub fn psi_density_second_order(x: f64, y: f64) -> Result<f64> {
    if !(x > 1.0) || !(y > 1.0) {
        return Err(Error::BadParameters("need x > 1 and y > 1".into()));
    }
    let u = x.ln() / y.ln();
    let lower = if u >= 1.0 { dickman_rho(u - 1.0)? } else { 0.0 };
    Ok(dickman_rho(u)? + (1.0 - EULER_GAMMA) * lower / x.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothStats {
    pub x: u64,
    pub u: f64,
    pub shift: i64,
    pub hits: u64,
    pub total: u64,
    pub density: f64,
    /// `1 - rho(u)`
    pub conjectural: f64,
    /// `1 - 4 rho(u)`
    pub floor: f64,
}

/// Primes `p <= x` (with `p + s >= 1`) for which `P^+(p + s) >= p^(1/u)`.
pub fn shifted_prime_stats(x: u64, s: i64, u: f64) -> Result<SmoothStats> {
    if x < 100 {
        return Err(Error::BadParameters("shifted-prime statistics need x >= 100".into()));
    }
    if s == 0 {
        return Err(Error::BadParameters("shift must be nonzero".into()));
    }
    if !(u > 1.0) || !u.is_finite() {
        return Err(Error::BadParameters(format!("u must exceed 1, got {u}")));
    }
    let top = x.checked_add_signed(s.max(0)).ok_or_else(|| Error::Overflow("x + s".into()))?;
    let lpf = largest_prime_factors(top);
    let primes: Vec<u64> = primes_up_to(x).into_iter().filter(|&p| p as i64 + s >= 1).collect();
    let hits = primes
        .par_iter()
        .filter(|&&p| {
            let big = lpf[(p as i64 + s) as usize] as f64;
            big.powf(u) >= p as f64
        })
        .count() as u64;
    let total = primes.len() as u64;
    let rho = dickman_rho(u)?;
    Ok(SmoothStats {
        x,
        u,
        shift: s,
        hits,
        total,
        density: if total == 0 { 0.0 } else { hits as f64 / total as f64 },
        conjectural: 1.0 - rho,
        floor: 1.0 - 4.0 * rho,
    })
}

fn largest_prime_factor_of_square_minus_one(p: u64) -> u64 {
    use crate::arith::largest_prime_factor;
    largest_prime_factor(p - 1).max(largest_prime_factor(p + 1))
}

/// `5 ln P^+(p^2 - 1) / (2k)`.
pub fn dk_lower_bound(k: u64, p: u64) -> Result<f64> {
    if k < 4 || !k.is_multiple_of(2) {
        return Err(Error::BadWeight(k as i64));
    }
    if !is_prime(p) {
        return Err(Error::BadParameters(format!("{p} is not prime")));
    }
    Ok(5.0 * (largest_prime_factor_of_square_minus_one(p) as f64).ln() / (2 * k) as f64)
}

/// `5 ln P^+(p - 1) / (2k)` when `p >= (k+1)^4` and `P^+(p - 1) >= 5`.
pub fn dknew_lower_bound(k: u64, p: u64) -> Result<Option<f64>> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::BadWeight(k as i64));
    }
    if !is_prime(p) {
        return Err(Error::BadParameters(format!("{p} is not prime")));
    }
    let big = crate::arith::largest_prime_factor(p - 1);
    let guard = (k + 1).checked_pow(4).is_some_and(|g| p >= g);
    Ok((guard && big >= 5).then(|| 5.0 * (big as f64).ln() / (2 * k) as f64))
}

/// Primes `p <= bound` with `P^+(p^2 - 1) <= 3`.
pub fn special_smooth_primes(bound: u64) -> Vec<u64> {
    smooth_square_minus_one(bound, 3)
}

fn smooth_square_minus_one(bound: u64, y: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let lpf = largest_prime_factors(bound + 1);
    primes_up_to(bound)
        .into_iter()
        .filter(|&p| (lpf[(p - 1) as usize] as u64).max(lpf[(p + 1) as usize] as u64) <= y)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvertseCheck {
    #[serde(rename = "X")]
    pub big_x: u64,
    pub x: u64,
    pub count: u64,
    pub bound: BigNum,
    pub ok: bool,
}

/// Counts `p <= X` with `P^+(p^2 - 1) <= x` against `3 * 7^(1 + 2 pi(x))`.
pub fn evertse_bound_check(big_x: u64, x: u64) -> Result<EvertseCheck> {
    if big_x < 2 || x < 2 {
        return Err(Error::BadParameters("need X >= 2 and x >= 2".into()));
    }
    let count = smooth_square_minus_one(big_x, x).len() as u64;
    let pi = primes_up_to(x).len() as u32;
    let bound = BigUint::from(3u32) * BigUint::from(7u32).pow(1 + 2 * pi);
    let ok = BigUint::from(count) <= bound;
    Ok(EvertseCheck { big_x, x, count, bound: bound.into(), ok })
}
