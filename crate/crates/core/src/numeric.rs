//! Combinatorial helpers shared by the state expansion and the loss kernel.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::factorial;

/// `ln n!`. Exact table lookup up to 170, log-gamma beyond.
#[inline]
pub fn ln_factorial(n: u64) -> f64 {
    factorial::ln_factorial(n)
}

/// `ln C(n, k)`; `-inf` when `k > n`.
#[inline]
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        f64::NEG_INFINITY
    } else {
        factorial::ln_binomial(n, k)
    }
}

/// `C(n, k)` as `f64` via the running product, accurate to a few ulp.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
}

/// Binomial probability `C(n, k) p^k (1-p)^(n-k)`, evaluated in log space
/// when the coefficient would overflow.
pub fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if n <= 170 {
        binomial_f64(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
    } else {
        (ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
    }
}

/// Exact Pascal triangle in arbitrary precision.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomialTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        Self { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, k)`, zero outside `0 <= k <= n`.
    pub fn get(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            BigInt::zero()
        } else {
            self.rows[n][k].clone()
        }
    }

    pub(crate) fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n]
    }
}

/// Nearest `f64` to an exact integer. Magnitudes up to `2^1023` are finite.
pub fn bigint_to_f64(value: &BigInt) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}


/// `ln cosh x`, stable for small and very large `|x|`.
pub fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        0.5 * x.sinh().powi(2).ln_1p()
    } else {
        x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
    }
}

#[cfg(test)]
mod ln_cosh_tests {
    use super::ln_cosh;

    #[test]
    fn matches_naive_in_the_safe_range() {
        let x = 1e-3f64;
        let series = x * x / 2.0 - x.powi(4) / 12.0 + x.powi(6) / 45.0;
        assert!((ln_cosh(x) - series).abs() <= 1e-14 * series);
        for &x in &[0.2, 0.99, 1.0, 1.01, 3.0, 20.0] {
            let naive = f64::cosh(x).ln();
            assert!(
                (ln_cosh(x) - naive).abs() <= 1e-14 * naive.abs().max(1e-6),
                "x={x}"
            );
        }
        assert_eq!(ln_cosh(0.0), 0.0);
        assert!((ln_cosh(800.0) - (800.0 - std::f64::consts::LN_2)).abs() < 1e-12);
    }
}
