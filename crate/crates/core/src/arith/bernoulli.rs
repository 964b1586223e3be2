use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// `B_0, ..., B_n` from `sum_{j=0}^{k} C(k+1, j) B_j = 0`, so `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    table.push(Rational::one());
    for k in 1..=n {
        if k > 1 && k % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        // C(k+1, j) built incrementally along j.
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        table.push(-acc / Rational::from_integer(BigInt::from(k + 1)));
    }
    table
}

/// The `k`-th Bernoulli number.
pub fn bernoulli(k: usize) -> Rational {
    bernoulli_table(k).pop().expect("table has k + 1 entries")
}
