//! Truncated Euler products for the arithmetic factors
//!
//! ```text
//! a_k = prod_p (1 - 1/p)^{k^2} sum_{j>=0} d_k(p^j)^2 / p^j
//! b_k = prod_p (1 - 1/p)^{k(k+1)/2} / (1 + 1/p)
//!              * ( ((1 - p^{-1/2})^{-k} + (1 + p^{-1/2})^{-k}) / 2 + 1/p )
//! ```
//!
//! Products are accumulated as compensated sums of logarithms. Each local
//! factor is `1 + O(1/p^2)`, so the neglected primes contribute about
//! `c_k / prime_limit` on the log scale; that is what `tail_estimate`
//! reports. It is a heuristic, not a rigorous bound.

use num_bigint::BigUint;

use crate::zeta::NeumaierSum;
use crate::{BigCount, Error, Result};

/// Primes up to and including `limit`, by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut m = i * i;
        while m <= n {
            composite[m] = true;
            m += i;
        }
    }
    primes
}

/// `d_k(p^j) = binom(j + k - 1, k - 1)`, ordered factorizations of a prime
/// power into `k` factors.
pub fn dk_prime_power(k: u32, j: u32) -> BigCount {
    if k == 0 {
        return if j == 0 {
            BigCount::from(1u8)
        } else {
            BigCount::from(0u8)
        };
    }
    let mut c = BigUint::from(1u8);
    for i in 1..k as u64 {
        c = c * (j as u64 + i) / i;
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerFactorResult {
    pub k: u32,
    /// Largest prime included in the product.
    pub prime_limit: u64,
    /// Local-series truncation depth; zero for closed-form local factors.
    pub j_terms: u32,
    pub value: f64,
    /// Estimated log-scale error from the neglected primes.
    pub tail_estimate: f64,
}

fn check_prime_limit(prime_limit: u64) -> Result<Vec<u64>> {
    if prime_limit < 2 {
        return Err(Error::invalid("prime_limit must be at least 2"));
    }
    Ok(primes_up_to(prime_limit))
}

/// `a_k` over primes up to `prime_limit`, each local series summed to
/// `j_terms` with a geometric majorant of the remainder added.
pub fn arithmetic_factor_a(k: u32, prime_limit: u64, j_terms: u32) -> Result<EulerFactorResult> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if j_terms == 0 {
        return Err(Error::invalid("j_terms must be at least 1"));
    }
    let primes = check_prime_limit(prime_limit)?;
    let kk = (k * k) as f64;
    let mut log_sum = NeumaierSum::default();
    for &p in &primes {
        let series = local_series_a(k, p as f64, j_terms)?;
        log_sum.add(kk * (-1.0 / p as f64).ln_1p() + series.ln());
    }
    let largest = *primes.last().expect("at least one prime below limit");
    let c = (k * k * (k - 1) * (k - 1)) as f64 / 4.0;
    Ok(EulerFactorResult {
        k,
        prime_limit: largest,
        j_terms,
        value: log_sum.total().exp(),
        tail_estimate: c / prime_limit as f64 + rounding_allowance(primes.len()),
    })
}

/// `sum_{j=0}^{J} d_k(p^j)^2 / p^j` plus a bound for the rest.
///
/// For `j > J` the ratio of consecutive terms, `((j+k)/(j+1))^2 / p`, is
/// nonincreasing, so the remainder is at most `t_{J+1} / (1 - r_{J+1})`.
/// For `k = 1` this bound is exact.
fn local_series_a(k: u32, p: f64, j_terms: u32) -> Result<f64> {
    let ratio = |j: u32| {
        let r = (j + k) as f64 / (j + 1) as f64;
        r * r / p
    };
    let mut term = 1.0;
    let mut sum = NeumaierSum::default();
    sum.add(term);
    for j in 0..j_terms {
        term *= ratio(j);
        sum.add(term);
    }
    let next = term * ratio(j_terms);
    let r = ratio(j_terms + 1);
    if r >= 1.0 {
        return Err(Error::invalid(format!(
            "j_terms = {j_terms} too small for k = {k} at p = {p}: local series tail does not contract"
        )));
    }
    sum.add(next / (1.0 - r));
    Ok(sum.total())
}

/// `b_k` over primes up to `prime_limit`; the local factor is in closed form.
pub fn arithmetic_factor_b(k: u32, prime_limit: u64) -> Result<EulerFactorResult> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let primes = check_prime_limit(prime_limit)?;
    let tri = (k * (k + 1) / 2) as f64;
    let mut log_sum = NeumaierSum::default();
    for &p in &primes {
        let inv = 1.0 / p as f64;
        let s = inv.sqrt();
        // ((1-s)^{-k} + (1+s)^{-k}) / 2 + 1/p, minus one, without cancellation.
        let minus = (-(k as f64) * (-s).ln_1p()).exp_m1();
        let plus = (-(k as f64) * s.ln_1p()).exp_m1();
        let bracket_m1 = 0.5 * (minus + plus) + inv;
        log_sum.add(tri * (-inv).ln_1p() - inv.ln_1p() + bracket_m1.ln_1p());
    }
    let largest = *primes.last().expect("at least one prime below limit");
    let c = (tri + 1.0) * (tri + 1.0);
    Ok(EulerFactorResult {
        k,
        prime_limit: largest,
        j_terms: 0,
        value: log_sum.total().exp(),
        tail_estimate: c / prime_limit as f64 + rounding_allowance(primes.len()),
    })
}

/// Accumulated rounding in a sum of `n` logarithms, each within a few ulps.
fn rounding_allowance(n: usize) -> f64 {
    4.0 * f64::EPSILON * n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }

    #[test]
    fn prime_power_divisors() {
        assert_eq!(dk_prime_power(2, 3), BigCount::from(4u8));
        assert_eq!(dk_prime_power(1, 17), BigCount::from(1u8));
        assert_eq!(dk_prime_power(3, 2), BigCount::from(6u8));
        assert_eq!(dk_prime_power(4, 0), BigCount::from(1u8));
    }

    #[test]
    fn local_series_matches_exact_terms() {
        // k=2: sum (j+1)^2 x^j = (1+x)/(1-x)^3
        let x: f64 = 1.0 / 3.0;
        let closed = (1.0 + x) / (1.0 - x).powi(3);
        assert!((local_series_a(2, 3.0, 40).unwrap() - closed).abs() < 1e-13);
        // k=1: geometric, tail is exact even with one term.
        assert!((local_series_a(1, 2.0, 1).unwrap() - 2.0).abs() < 1e-15);
        assert!(local_series_a(4, 2.0, 1).is_err());
    }

    #[test]
    fn a1_is_one() {
        for &(limit, terms) in &[(100, 50), (10_000, 64), (50_000, 80)] {
            let r = arithmetic_factor_a(1, limit, terms).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn a2_is_six_over_pi_squared() {
        let r = arithmetic_factor_a(2, 100_000, 64).unwrap();
        let six_over_pi2 = 6.0 / std::f64::consts::PI.powi(2);
        assert!((r.value - six_over_pi2).abs() < 1e-4, "{r:?}");
        assert_eq!(r.prime_limit, 99_991);
    }

    #[test]
    fn b1_local_factor_at_two() {
        let r = arithmetic_factor_b(1, 2).unwrap();
        assert!((r.value - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn b1_matches_simplified_product() {
        let limit = 20_000;
        let r = arithmetic_factor_b(1, limit).unwrap();
        let direct: f64 = primes_up_to(limit)
            .iter()
            .map(|&p| {
                let p = p as f64;
                1.0 - 1.0 / (p * p + p)
            })
            .product();
        assert!((r.value - direct).abs() < 1e-12);
    }

    #[test]
    fn doubling_stays_within_tail() {
        for k in 1..=4 {
            let lo = arithmetic_factor_a(k, 10_000, 64).unwrap();
            let hi = arithmetic_factor_a(k, 20_000, 64).unwrap();
            assert!((hi.value - lo.value).abs() < lo.tail_estimate, "a_{k}");
            let lo = arithmetic_factor_b(k, 10_000).unwrap();
            let hi = arithmetic_factor_b(k, 20_000).unwrap();
            assert!((hi.value - lo.value).abs() < lo.tail_estimate, "b_{k}");
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(arithmetic_factor_a(0, 100, 10).is_err());
        assert!(arithmetic_factor_a(2, 1, 10).is_err());
        assert!(arithmetic_factor_a(2, 100, 0).is_err());
        assert!(arithmetic_factor_b(2, 1).is_err());
    }
}
