//! Truncated multivariate power series over the integers.
//!
//! Used as an independent oracle for the counting module. The contour
//! integral for `G_k(l)` over small circles is, by the residue theorem, the
//! coefficient of `(w_1..w_k z_1..z_k)^l` in
//!
//! ```text
//! 1 / [ prod_{i,j} (1 - w_i z_j) * prod_i (1 - w_i) * prod_j (1 - z_j) ]
//! ```
//!
//! so it is read off an exact expansion instead of being integrated
//! numerically. Dropping the univariate factors leaves the generating
//! function whose coefficients are the contingency counts `N_{alpha beta}`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::counting::Partition;
use crate::{BigCount, Error, Result};

/// Default cap on the number of representable multi-indices.
pub const DEFAULT_TERM_BUDGET: u128 = 20_000_000;

/// Power series in `num_vars` variables, truncated independently in each
/// variable at `caps[v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedMultiSeries {
    caps: Vec<u32>,
    terms: HashMap<Vec<u32>, BigInt>,
}

impl TruncatedMultiSeries {
    pub fn one(caps: Vec<u32>) -> Self {
        let mut terms = HashMap::new();
        terms.insert(vec![0; caps.len()], BigInt::one());
        TruncatedMultiSeries { caps, terms }
    }

    pub fn uniform_one(num_vars: usize, cap: u32) -> Self {
        Self::one(vec![cap; num_vars])
    }

    /// Builds a series from `(exponents, coefficient)` pairs, discarding
    /// anything above the caps.
    pub fn from_terms(caps: Vec<u32>, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut s = TruncatedMultiSeries {
            caps,
            terms: HashMap::new(),
        };
        for (e, c) in terms {
            assert_eq!(e.len(), s.caps.len(), "exponent arity");
            if s.fits(&e) {
                s.add_term(e, c);
            }
        }
        s
    }

    /// `1 / (1 - x^e)` expanded up to the caps.
    pub fn geometric(caps: Vec<u32>, monomial: &[u32]) -> Self {
        assert_eq!(monomial.len(), caps.len(), "exponent arity");
        assert!(
            monomial.iter().any(|&d| d > 0),
            "geometric series of a constant"
        );
        let mut s = TruncatedMultiSeries {
            caps,
            terms: HashMap::new(),
        };
        let mut e = vec![0; monomial.len()];
        while s.fits(&e) {
            s.terms.insert(e.clone(), BigInt::one());
            for (x, d) in e.iter_mut().zip(monomial) {
                *x += d;
            }
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// Number of stored nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn fits(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.caps).all(|(x, c)| x <= c)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Truncated product. Both operands must share the same caps.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.caps, other.caps, "series caps differ");
        let mut out = TruncatedMultiSeries {
            caps: self.caps.clone(),
            terms: HashMap::with_capacity(self.terms.len().max(other.terms.len())),
        };
        let mut e = vec![0u32; self.caps.len()];
        for (ea, ca) in &self.terms {
            'next: for (eb, cb) in &other.terms {
                for v in 0..e.len() {
                    let x = ea[v] + eb[v];
                    if x > self.caps[v] {
                        continue 'next;
                    }
                    e[v] = x;
                }
                out.add_term(e.clone(), ca * cb);
            }
        }
        out
    }

    /// Multiplicative inverse of a series whose constant term is `+-1`.
    ///
    /// Coefficients are solved in order of total degree from
    /// `sum_{d <= e} f_d g_{e-d} = [e = 0]`.
    pub fn reciprocal(&self) -> Result<Self> {
        let zero = vec![0u32; self.caps.len()];
        let c0 = self.coefficient(&zero);
        if !(c0.is_one() || (-&c0).is_one()) {
            return Err(Error::invalid(format!(
                "constant term {c0} is not a unit over the integers"
            )));
        }
        let mut indices = all_indices(&self.caps);
        indices.sort_by_key(|e| e.iter().map(|&x| x as u64).sum::<u64>());
        let support: Vec<(&Vec<u32>, &BigInt)> =
            self.terms.iter().filter(|(e, _)| **e != zero).collect();

        let mut out = TruncatedMultiSeries {
            caps: self.caps.clone(),
            terms: HashMap::new(),
        };
        let mut rest = vec![0u32; self.caps.len()];
        for e in indices {
            let mut acc = if e == zero {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            'support: for (d, fd) in &support {
                for v in 0..e.len() {
                    if d[v] > e[v] {
                        continue 'support;
                    }
                    rest[v] = e[v] - d[v];
                }
                if let Some(g) = out.terms.get(&rest) {
                    acc -= *fd * g;
                }
            }
            // Dividing by a unit is multiplying by it.
            out.add_term(e, acc * &c0);
        }
        Ok(out)
    }
}

fn all_indices(caps: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(caps.len())];
    for &c in caps {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=c).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

fn check_budget(caps: &[u32], budget: u128) -> Result<()> {
    let size = caps
        .iter()
        .fold(1u128, |acc, &c| acc.saturating_mul(c as u128 + 1));
    if size > budget {
        return Err(Error::SizeLimit {
            what: "series terms",
            required: size,
            budget,
        });
    }
    Ok(())
}

/// Multiplies in `1/(1 - w_i z_j)` for every pair; variables are
/// `w_1..w_m` followed by `z_1..z_n`.
fn bipartite_product(caps: Vec<u32>, m: usize, n: usize) -> TruncatedMultiSeries {
    let mut series = TruncatedMultiSeries::one(caps.clone());
    for i in 0..m {
        for j in 0..n {
            let mut mono = vec![0; m + n];
            mono[i] = 1;
            mono[m + j] = 1;
            series = series.mul(&TruncatedMultiSeries::geometric(caps.clone(), &mono));
        }
    }
    series
}

/// Expansion of the contour integrand's denominator for `G_k`, truncated
/// at `cap` in each of `w_1..w_k, z_1..z_k`.
pub fn master_series(k: usize, cap: u32, budget: u128) -> Result<TruncatedMultiSeries> {
    let caps = vec![cap; 2 * k];
    check_budget(&caps, budget)?;
    let mut series = bipartite_product(caps.clone(), k, k);
    for v in 0..2 * k {
        let mut mono = vec![0; 2 * k];
        mono[v] = 1;
        series = series.mul(&TruncatedMultiSeries::geometric(caps.clone(), &mono));
    }
    Ok(series)
}

/// `G_k(l)` as the coefficient of `(w_1..w_k z_1..z_k)^l`.
pub fn contour_coefficient(k: usize, l: u32, budget: u128) -> Result<BigCount> {
    let series = master_series(k, l, budget)?;
    Ok(to_count(series.coefficient(&vec![l; 2 * k])))
}

/// `N_{alpha beta}` as the coefficient of `w^alpha z^beta` in
/// `1 / prod_{i,j} (1 - w_i z_j)`.
pub fn expansion_count(
    alpha: &Partition,
    beta: &Partition,
    cap: u32,
    budget: u128,
) -> Result<BigCount> {
    let exps: Vec<u32> = alpha
        .parts()
        .iter()
        .chain(beta.parts())
        .map(|&p| u32::try_from(p).unwrap_or(u32::MAX))
        .collect();
    if let Some(&too_big) = exps.iter().find(|&&e| e > cap) {
        return Err(Error::Arity {
            what: "series cap",
            needed: too_big as u128,
            got: cap as u128,
        });
    }
    // Only coefficients up to the target are needed, so each variable is
    // truncated at its own exponent.
    check_budget(&exps, budget)?;
    let series = bipartite_product(exps.clone(), alpha.len(), beta.len());
    Ok(to_count(series.coefficient(&exps)))
}

fn to_count(c: BigInt) -> BigCount {
    c.to_biguint().unwrap_or_else(BigUint::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.iter().copied())
    }

    #[test]
    fn master_series_k1() {
        let s = master_series(1, 2, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(s.coefficient(&[0, 0]), BigInt::one());
        assert_eq!(s.coefficient(&[1, 1]), BigInt::from(2));
        // 1/((1-w)(1-z)(1-wz)) at w^2 z^2: choose a in 0..=2 copies of wz.
        assert_eq!(s.coefficient(&[2, 2]), BigInt::from(3));
        let s2 = master_series(2, 1, DEFAULT_TERM_BUDGET).unwrap();
        assert!(s2.all_nonnegative());
        assert_eq!(s2.len(), 16);
    }

    #[test]
    fn contour_examples() {
        let b = DEFAULT_TERM_BUDGET;
        assert_eq!(contour_coefficient(1, 2, b).unwrap(), BigCount::from(3u8));
        assert_eq!(contour_coefficient(2, 1, b).unwrap(), BigCount::from(7u8));
        assert_eq!(contour_coefficient(2, 3, b).unwrap(), BigCount::from(70u8));
    }

    #[test]
    fn expansion_examples() {
        let b = DEFAULT_TERM_BUDGET;
        assert_eq!(
            expansion_count(&p(&[2, 1, 1]), &p(&[3, 1]), 3, b).unwrap(),
            BigCount::from(3u8)
        );
        assert_eq!(
            expansion_count(&p(&[2, 2, 1]), &p(&[3, 1, 1]), 3, b).unwrap(),
            BigCount::from(8u8)
        );
        assert_eq!(
            expansion_count(&p(&[1]), &p(&[2]), 2, b).unwrap(),
            BigCount::zero()
        );
        assert!(matches!(
            expansion_count(&p(&[3]), &p(&[3]), 2, b),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let err = master_series(3, 9, 1000).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn reciprocal_of_one_minus_monomial_is_geometric() {
        let caps = vec![3, 4];
        let f = TruncatedMultiSeries::from_terms(
            caps.clone(),
            [(vec![0, 0], BigInt::one()), (vec![1, 2], -BigInt::one())],
        );
        let g = f.reciprocal().unwrap();
        assert_eq!(g, TruncatedMultiSeries::geometric(caps, &[1, 2]));
    }

    #[test]
    fn master_series_times_denominator_is_one() {
        let k = 2;
        let cap = 2;
        let caps = vec![cap; 2 * k];
        let s = master_series(k, cap, DEFAULT_TERM_BUDGET).unwrap();
        let mut den = TruncatedMultiSeries::one(caps.clone());
        let one_minus = |mono: Vec<u32>| {
            TruncatedMultiSeries::from_terms(
                caps.clone(),
                [(vec![0; 2 * k], BigInt::one()), (mono, -BigInt::one())],
            )
        };
        for i in 0..k {
            for j in 0..k {
                let mut m = vec![0; 2 * k];
                m[i] = 1;
                m[k + j] = 1;
                den = den.mul(&one_minus(m));
            }
        }
        for v in 0..2 * k {
            let mut m = vec![0; 2 * k];
            m[v] = 1;
            den = den.mul(&one_minus(m));
        }
        assert_eq!(s.mul(&den), TruncatedMultiSeries::one(caps.clone()));
        assert_eq!(den.reciprocal().unwrap(), s);
    }

    #[test]
    fn reciprocal_rejects_non_units() {
        let f = TruncatedMultiSeries::from_terms(vec![2], [(vec![0], BigInt::from(2))]);
        assert!(f.reciprocal().is_err());
        let neg = TruncatedMultiSeries::from_terms(
            vec![3],
            [(vec![0], -BigInt::one()), (vec![1], BigInt::one())],
        );
        // -1/(1 - x)
        let r = neg.reciprocal().unwrap();
        for d in 0..=3 {
            assert_eq!(r.coefficient(&[d]), -BigInt::one());
        }
    }

    #[test]
    fn truncation_consistency() {
        let small = master_series(2, 2, DEFAULT_TERM_BUDGET).unwrap();
        let large = master_series(2, 4, DEFAULT_TERM_BUDGET).unwrap();
        for (e, c) in small.terms() {
            assert_eq!(&large.coefficient(e), c);
        }
    }
}
