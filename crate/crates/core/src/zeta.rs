//! Mean values of powers of partial sums of the Riemann zeta function.
//!
//! For `S_X(t) = sum_{n <= X} n^{-1/2 - it}` the power `S_X^k` is a
//! Dirichlet polynomial with coefficients `d_{k,X}(n) / sqrt(n)`, where
//! `d_{k,X}(n)` counts ordered factorizations `n = l_1 ... l_k` with every
//! `l_i <= X`. The Montgomery-Vaughan mean value theorem then gives
//!
//! ```text
//! lim_{T -> inf} (1/T) int_0^T |S_X(t)|^{2k} dt = sum_n d_{k,X}(n)^2 / n
//! ```
//!
//! This module computes that limit exactly, checks it against a direct
//! pair enumeration, approximates the time average by quadrature and
//! compares everything with the polynomial prediction `a_k G_k(log X)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::ehrhart::{rational_to_f64, CountingPolynomial};
use crate::{Error, Result};

/// Default cap on the number of factor tuples a profile may enumerate.
pub const DEFAULT_TUPLE_BUDGET: u128 = 100_000_000;

/// Profiles with at most this many distinct `n` get an exact rational
/// mean value in [`convergence_ladder`]; larger ones are summed in floating
/// point only.
pub const EXACT_LADDER_SUPPORT: usize = 300_000;

/// `n -> d(n)`, the number of tuples `(l_1..l_k)` with `l_i <= X_i` and
/// product `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorProfile {
    bounds: Vec<u64>,
    counts: BTreeMap<BigUint, BigUint>,
}

impl DivisorProfile {
    pub fn k(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[u64] {
        &self.bounds
    }

    pub fn counts(&self) -> &BTreeMap<BigUint, BigUint> {
        &self.counts
    }

    pub fn get(&self, n: u64) -> BigUint {
        self.counts
            .get(&BigUint::from(n))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    /// Number of `n` with `d(n) > 0`.
    pub fn support(&self) -> usize {
        self.counts.len()
    }

    /// `sum_n d(n)`, which equals the product of the bounds.
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }
}

/// Restricted divisor profile for per-factor cutoffs `bounds`.
pub fn divisor_profile(bounds: &[u64], budget: u128) -> Result<DivisorProfile> {
    if bounds.is_empty() {
        return Err(Error::invalid("need at least one factor"));
    }
    if bounds.contains(&0) {
        return Err(Error::invalid("cutoffs must be at least 1"));
    }
    let tuples = bounds
        .iter()
        .fold(1u128, |acc, &x| acc.saturating_mul(x as u128));
    if tuples > budget {
        return Err(Error::SizeLimit {
            what: "divisor tuples",
            required: tuples,
            budget,
        });
    }

    let counts = if tuples <= u64::MAX as u128 {
        let mut acc: HashMap<u64, u64> = HashMap::new();
        enumerate_small(bounds, 1, &mut acc);
        acc.into_iter()
            .map(|(n, d)| (BigUint::from(n), BigUint::from(d)))
            .collect()
    } else {
        let mut acc: BTreeMap<BigUint, BigUint> = BTreeMap::new();
        enumerate_big(bounds, BigUint::one(), &mut acc);
        acc
    };
    Ok(DivisorProfile {
        bounds: bounds.to_vec(),
        counts,
    })
}

/// Profile with `k` equal cutoffs `x`.
pub fn uniform_profile(k: usize, x: u64, budget: u128) -> Result<DivisorProfile> {
    divisor_profile(&vec![x; k], budget)
}

// The product of all bounds fits in u64, so no partial product overflows.
fn enumerate_small(bounds: &[u64], product: u64, acc: &mut HashMap<u64, u64>) {
    match bounds.split_first() {
        None => *acc.entry(product).or_insert(0) += 1,
        Some((&x, rest)) => {
            for l in 1..=x {
                enumerate_small(rest, product * l, acc);
            }
        }
    }
}

fn enumerate_big(bounds: &[u64], product: BigUint, acc: &mut BTreeMap<BigUint, BigUint>) {
    match bounds.split_first() {
        None => *acc.entry(product).or_insert_with(BigUint::zero) += 1u32,
        Some((&x, rest)) => {
            for l in 1..=x {
                enumerate_big(rest, &product * l, acc);
            }
        }
    }
}

/// `sum_n d(n)^2 / n` as an exact rational.
pub fn mv_pseudomoment(profile: &DivisorProfile) -> BigRational {
    let terms: Vec<BigRational> = profile
        .counts
        .iter()
        .map(|(n, d)| BigRational::new(BigInt::from(d * d), BigInt::from(n.clone())))
        .collect();
    split_sum(&terms)
}

/// Pairwise summation keeps intermediate denominators balanced.
fn split_sum(terms: &[BigRational]) -> BigRational {
    match terms.len() {
        0 => BigRational::zero(),
        1 => terms[0].clone(),
        len => {
            let (a, b) = terms.split_at(len / 2);
            split_sum(a) + split_sum(b)
        }
    }
}

/// `sum_n d(n)^2 / n` in floating point with compensated summation.
pub fn mv_pseudomoment_f64(profile: &DivisorProfile) -> f64 {
    let mut sum = NeumaierSum::default();
    for (n, d) in &profile.counts {
        let d = d.to_f64().unwrap_or(f64::INFINITY);
        let n = n.to_f64().unwrap_or(f64::INFINITY);
        sum.add(d * d / n);
    }
    sum.total()
}

/// Brute-force counterpart of [`mv_pseudomoment`]: walks every pair of
/// `k`-tuples with entries in `1..=x` and adds `1/n` whenever both
/// products equal `n`.
pub fn pair_sum_oracle(k: usize, x: u64, budget: u128) -> Result<BigRational> {
    if k == 0 || x == 0 {
        return Err(Error::invalid("k and x must be at least 1"));
    }
    let tuples = (x as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let pairs = tuples.saturating_mul(tuples);
    if pairs > budget {
        return Err(Error::SizeLimit {
            what: "tuple pairs",
            required: pairs,
            budget,
        });
    }
    let products: Vec<BigUint> = (0..tuples)
        .map(|mut idx| {
            let mut prod = BigUint::one();
            for _ in 0..k {
                prod *= (idx % x as u128) as u64 + 1;
                idx /= x as u128;
            }
            prod
        })
        .collect();
    let mut matches: Vec<BigRational> = Vec::new();
    for a in &products {
        for b in &products {
            if a == b {
                matches.push(BigRational::new(BigInt::one(), BigInt::from(a.clone())));
            }
        }
    }
    Ok(split_sum(&matches))
}

/// Quadrature estimate of a time average together with its step-halving
/// error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericMoment {
    pub value: f64,
    pub error_estimate: f64,
    pub steps: u64,
    /// Whether the step count resolves the fastest oscillation
    /// `T log X / (2 pi)` with at least 20 points per period.
    pub resolved: bool,
}

/// Trapezoid approximation of `(1/T) int_0^T |S_X(t)|^{2k} dt` with `steps`
/// intervals (rounded up to an even count), split across `threads` workers.
///
/// The error estimate is `|I_h - I_{2h}|`, not a rigorous bound.
pub fn numeric_moment(
    k: u32,
    x: u64,
    t_max: f64,
    steps: u64,
    threads: usize,
) -> Result<NumericMoment> {
    if x == 0 {
        return Err(Error::invalid("x must be at least 1"));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::invalid("T must be positive"));
    }
    if steps == 0 {
        return Err(Error::invalid("steps must be positive"));
    }
    let steps = steps + steps % 2;
    let logs: Vec<f64> = (1..=x).map(|n| (n as f64).ln()).collect();
    let amps: Vec<f64> = (1..=x).map(|n| 1.0 / (n as f64).sqrt()).collect();
    let h = t_max / steps as f64;
    let integrand = |i: u64| -> f64 {
        let t = i as f64 * h;
        let (mut re, mut im) = (0.0, 0.0);
        for (a, l) in amps.iter().zip(&logs) {
            let (s, c) = (t * l).sin_cos();
            re += a * c;
            im -= a * s;
        }
        (re * re + im * im).powi(k as i32)
    };

    let threads = threads.max(1).min(steps as usize + 1);
    let points = steps + 1;
    let chunk = points.div_ceil(threads as u64);
    let partials: Vec<(NeumaierSum, NeumaierSum)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|w| {
                let integrand = &integrand;
                scope.spawn(move || {
                    let mut fine = NeumaierSum::default();
                    let mut coarse = NeumaierSum::default();
                    let end = ((w + 1) * chunk).min(points);
                    for i in (w * chunk)..end {
                        let f = integrand(i);
                        let edge = i == 0 || i == steps;
                        fine.add(if edge { 0.5 * f } else { f });
                        if i % 2 == 0 {
                            coarse.add(if edge { 0.5 * f } else { f });
                        }
                    }
                    (fine, coarse)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("quadrature worker panicked"))
            .collect()
    });
    let mut fine = NeumaierSum::default();
    let mut coarse = NeumaierSum::default();
    for (f, c) in &partials {
        fine.add(f.total());
        coarse.add(c.total());
    }
    let value = fine.total() / steps as f64;
    let coarse_value = coarse.total() / (steps / 2) as f64;
    let fastest = t_max * (x as f64).ln() / (2.0 * std::f64::consts::PI);
    Ok(NumericMoment {
        value,
        error_estimate: (value - coarse_value).abs(),
        steps,
        resolved: steps as f64 >= 20.0 * fastest,
    })
}

/// The two sides of the asymptotic prediction for the `2k`-th pseudomoment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// `a_k G_k(log X)`.
    pub full: f64,
    /// `a_k gamma_k (log X)^{k^2}` with `gamma_k` the leading coefficient.
    pub leading: f64,
}

pub fn prediction(k: usize, x: f64, a_k: f64, gpoly: &CountingPolynomial) -> Prediction {
    let log_x = x.ln();
    let gamma = rational_to_f64(&gpoly.leading_coefficient());
    Prediction {
        full: a_k * gpoly.evaluate_real(log_x),
        leading: a_k * gamma * log_x.powi((k * k) as i32),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderRow {
    pub x: u64,
    /// Exact mean value, present when the profile is small enough.
    pub exact: Option<BigRational>,
    pub mv_value: f64,
    pub full_prediction: f64,
    pub leading_prediction: f64,
}

impl LadderRow {
    pub fn ratio_full(&self) -> f64 {
        self.mv_value / self.full_prediction
    }

    pub fn ratio_leading(&self) -> f64 {
        self.mv_value / self.leading_prediction
    }
}

/// Exact mean values against both predictions for each cutoff in `xs`.
pub fn convergence_ladder(
    k: usize,
    xs: &[u64],
    a_k: f64,
    gpoly: &CountingPolynomial,
    budget: u128,
) -> Result<Vec<LadderRow>> {
    xs.iter()
        .map(|&x| {
            let profile = uniform_profile(k, x, budget)?;
            let exact =
                (profile.support() <= EXACT_LADDER_SUPPORT).then(|| mv_pseudomoment(&profile));
            let mv_value = match &exact {
                Some(r) => rational_to_f64(r),
                None => mv_pseudomoment_f64(&profile),
            };
            let p = prediction(k, x as f64, a_k, gpoly);
            Ok(LadderRow {
                x,
                exact,
                mv_value,
                full_prediction: p.full,
                leading_prediction: p.leading,
            })
        })
        .collect()
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn profile_examples() {
        let p = uniform_profile(2, 3, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(p.get(4), BigUint::from(1u8));
        assert_eq!(p.get(6), BigUint::from(2u8));
        let p = uniform_profile(2, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(p.support(), 3);
        assert_eq!(p.get(1), BigUint::from(1u8));
        assert_eq!(p.get(2), BigUint::from(2u8));
        assert_eq!(p.get(4), BigUint::from(1u8));
        let p = uniform_profile(1, 5, DEFAULT_TUPLE_BUDGET).unwrap();
        assert!((1..=5).all(|n| p.get(n) == BigUint::one()));
        assert_eq!(p.get(6), BigUint::zero());
    }

    #[test]
    fn profile_errors() {
        assert!(divisor_profile(&[], DEFAULT_TUPLE_BUDGET).is_err());
        assert!(divisor_profile(&[3, 0], DEFAULT_TUPLE_BUDGET).is_err());
        assert!(uniform_profile(3, 100, 1000).unwrap_err().is_budget());
    }

    #[test]
    fn profile_is_symmetric_in_bounds() {
        let a = divisor_profile(&[2, 5, 3], DEFAULT_TUPLE_BUDGET).unwrap();
        let b = divisor_profile(&[5, 3, 2], DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(a.counts(), b.counts());
        assert_eq!(a.total(), BigUint::from(30u8));
    }

    #[test]
    fn arbitrary_precision_path_matches_u64_path() {
        let bounds = [4, 6, 5];
        let mut small = HashMap::new();
        enumerate_small(&bounds, 1, &mut small);
        let mut big = BTreeMap::new();
        enumerate_big(&bounds, BigUint::one(), &mut big);
        let small: BTreeMap<BigUint, BigUint> = small
            .into_iter()
            .map(|(n, d)| (BigUint::from(n), BigUint::from(d)))
            .collect();
        assert_eq!(small, big);
    }

    #[test]
    fn mv_examples() {
        let mv = |k, x| mv_pseudomoment(&uniform_profile(k, x, DEFAULT_TUPLE_BUDGET).unwrap());
        assert_eq!(mv(1, 3), q(11, 6));
        assert_eq!(mv(2, 2), q(13, 4));
        for k in 1..=4 {
            assert_eq!(mv(k, 1), q(1, 1));
        }
    }

    #[test]
    fn pair_oracle_examples() {
        let b = DEFAULT_TUPLE_BUDGET;
        assert_eq!(pair_sum_oracle(2, 2, b).unwrap(), q(13, 4));
        assert_eq!(pair_sum_oracle(1, 3, b).unwrap(), q(11, 6));
        let p = uniform_profile(3, 2, b).unwrap();
        assert_eq!(pair_sum_oracle(3, 2, b).unwrap(), mv_pseudomoment(&p));
        assert!(pair_sum_oracle(3, 10, 1000).unwrap_err().is_budget());
    }

    #[test]
    fn numeric_moment_trivial_cutoff() {
        for k in 1..=3 {
            let m = numeric_moment(k, 1, 123.4, 1000, 3).unwrap();
            assert_eq!(m.value, 1.0);
            assert_eq!(m.error_estimate, 0.0);
        }
        assert!(numeric_moment(1, 1, -1.0, 10, 1).is_err());
        assert!(numeric_moment(1, 0, 1.0, 10, 1).is_err());
    }

    #[test]
    fn numeric_moment_thread_count_only_reassociates() {
        let a = numeric_moment(2, 4, 500.0, 20_000, 1).unwrap();
        let b = numeric_moment(2, 4, 500.0, 20_000, 4).unwrap();
        assert!(((a.value - b.value) / a.value).abs() < 1e-10);
        let c = numeric_moment(2, 4, 500.0, 20_000, 4).unwrap();
        assert_eq!(b, c);
    }

    #[test]
    fn predictions() {
        let g1 = CountingPolynomial::from_integers(&[1, 1]);
        let p = prediction(1, 2f64.exp(), 1.0, &g1);
        assert!((p.full - 3.0).abs() < 1e-12);
        assert!((p.leading - 2.0).abs() < 1e-12);
        let p = prediction(1, 1e6, 1.0, &g1);
        assert!((p.full - 14.815510557964274).abs() < 1e-9);
    }

    #[test]
    fn ladder_endpoint() {
        let g2 = crate::ehrhart::pseudomagic_polynomial(2).unwrap();
        let rows = convergence_ladder(2, &[1], 0.6, &g2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(rows[0].exact, Some(q(1, 1)));
        assert!((rows[0].full_prediction - 0.6).abs() < 1e-15);
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut s = NeumaierSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.total(), 2.0);
    }
}
