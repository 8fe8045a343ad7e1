//! Exact polynomial reconstruction of the lattice-point counting functions
//! and the Ehrhart-theoretic checks built on them.
//!
//! Counts are sampled at consecutive integers, interpolated in Newton
//! divided-difference form over the rationals, and then checked at two
//! further nodes. The degree is never raised to absorb a mismatch: the
//! degrees come from theorems, so a mismatch means a counting bug.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::counting::{count_magic, count_pseudomagic, count_symmetric_even_bounded};
use crate::{BigCount, Error, Result};

/// Number of extra nodes each family polynomial is checked against.
pub const VERIFICATION_NODES: usize = 2;

/// Dense polynomial with exact rational coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountingPolynomial {
    coefficients: Vec<BigRational>,
}

impl CountingPolynomial {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        CountingPolynomial { coefficients }
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        Self::new(
            coefficients
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.coefficients
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(x.into()))
    }

    /// Horner evaluation in floating point, for non-integer arguments.
    pub fn evaluate_real(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match d {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a} ")?,
            }
            match d {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when either side overflows f64.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Unique polynomial of degree at most `degree` through `points`.
///
/// The first `degree + 1` points determine the polynomial; any further
/// points must lie on it.
pub fn interpolate(points: &[(i64, BigCount)], degree: usize) -> Result<CountingPolynomial> {
    let points: Vec<(i64, BigRational)> = points
        .iter()
        .map(|(x, y)| (*x, BigRational::from_integer(BigInt::from(y.clone()))))
        .collect();
    interpolate_rational(&points, degree)
}

pub fn interpolate_rational(
    points: &[(i64, BigRational)],
    degree: usize,
) -> Result<CountingPolynomial> {
    let needed = degree + 1;
    if points.len() < needed {
        return Err(Error::Arity {
            what: "interpolation points",
            needed: needed as u128,
            got: points.len() as u128,
        });
    }
    let mut xs: Vec<i64> = points.iter().map(|p| p.0).collect();
    xs.sort_unstable();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("interpolation nodes must be distinct"));
    }

    let (basis, extra) = points.split_at(needed);
    let nodes: Vec<BigRational> = basis
        .iter()
        .map(|(x, _)| BigRational::from_integer((*x).into()))
        .collect();
    // Divided differences, in place.
    let mut table: Vec<BigRational> = basis.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..needed {
        for i in (level..needed).rev() {
            let num = &table[i] - &table[i - 1];
            let den = &nodes[i] - &nodes[i - level];
            table[i] = num / den;
        }
    }
    // Expand the Newton form into monomial coefficients.
    let mut coeffs = vec![BigRational::zero(); needed];
    for i in (0..needed).rev() {
        // coeffs <- coeffs * (x - nodes[i]) + table[i]
        let mut shifted = vec![BigRational::zero(); needed];
        for d in 0..needed {
            if coeffs[d].is_zero() {
                continue;
            }
            if d + 1 < needed {
                shifted[d + 1] += &coeffs[d];
            }
            shifted[d] -= &coeffs[d] * &nodes[i];
        }
        shifted[0] += &table[i];
        coeffs = shifted;
    }
    let poly = CountingPolynomial::new(coeffs);

    for (x, y) in extra {
        let got = poly.eval_int(*x);
        if &got != y {
            return Err(Error::Inconsistent(format!(
                "degree-{degree} interpolant gives {got} at {x}, data says {y}"
            )));
        }
    }
    Ok(poly)
}

/// Samples `count` at `start, start + step, ...` and interpolates in the
/// sampling variable, checking the result at the extra verification nodes.
fn sampled_polynomial(
    degree: usize,
    start: u64,
    step: u64,
    count: impl Fn(u64) -> BigCount,
) -> Result<CountingPolynomial> {
    let points: Vec<(i64, BigCount)> = (0..=degree + VERIFICATION_NODES)
        .map(|m| {
            let x = start + step * m as u64;
            (x as i64, count(x))
        })
        .collect();
    interpolate(&points, degree)
}

/// `H_k(j)` as a polynomial in `j` of degree `(k-1)^2`.
pub fn magic_polynomial(k: usize) -> Result<CountingPolynomial> {
    check_k(k)?;
    sampled_polynomial((k - 1) * (k - 1), 0, 1, |j| count_magic(k, j))
}

/// `G_k(l)` as a polynomial in `l` of degree `k^2`.
pub fn pseudomagic_polynomial(k: usize) -> Result<CountingPolynomial> {
    check_k(k)?;
    sampled_polynomial(k * k, 0, 1, |l| count_pseudomagic(k, l))
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::invalid("k must be at least 1"))
    } else {
        Ok(())
    }
}

/// Quasi-polynomial: constituent `r` applies to arguments congruent to `r`
/// modulo the period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub constituents: Vec<CountingPolynomial>,
}

impl QuasiPolynomial {
    pub fn period(&self) -> usize {
        self.constituents.len()
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        let r = x.rem_euclid(self.period() as i64) as usize;
        self.constituents[r].eval_int(x)
    }

    pub fn leading_coefficients_agree(&self) -> bool {
        let first = &self.constituents[0];
        self.constituents.iter().all(|c| {
            c.degree() == first.degree() && c.leading_coefficient() == first.leading_coefficient()
        })
    }

    /// All constituents are the same polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.constituents.windows(2).all(|w| w[0] == w[1])
    }
}

/// `F_k(l)` as a period-2 quasi-polynomial in `l`, each constituent of
/// degree at most `k(k+1)/2`.
///
/// `F_1(l) = floor(l/2) + 1` already fails to be a single polynomial, so
/// even and odd `l` are interpolated separately.
pub fn symmetric_even_quasi_polynomial(k: usize) -> Result<QuasiPolynomial> {
    check_k(k)?;
    let degree = k * (k + 1) / 2;
    let constituents = (0..2)
        .map(|r| sampled_polynomial(degree, r, 2, |l| count_symmetric_even_bounded(k, l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuasiPolynomial { constituents })
}

/// `p(-1) = ... = p(-(k-1)) = 0`.
pub fn check_trivial_zeros(p: &CountingPolynomial, k: usize) -> bool {
    (1..k as i64).all(|j| p.eval_int(-j).is_zero())
}

/// `p(-k-j) = (-1)^(k-1) p(j)` as a polynomial identity.
pub fn check_reciprocity(p: &CountingPolynomial, k: usize) -> bool {
    let k = k as i64;
    let sign = if (k - 1) % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    (0..=p.degree() as i64).all(|j| p.eval_int(-k - j) == &sign * p.eval_int(j))
}

/// Numerator coefficients `h_0..h_d` of the Ehrhart series of a degree-`d`
/// polynomial. Entries beyond the true numerator degree are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HVector {
    pub entries: Vec<BigInt>,
}

impl HVector {
    /// Entries with trailing zeros removed.
    pub fn numerator(&self) -> &[BigInt] {
        let end = self
            .entries
            .iter()
            .rposition(|h| !h.is_zero())
            .map_or(0, |i| i + 1);
        &self.entries[..end]
    }

    pub fn is_palindromic(&self) -> bool {
        let h = self.numerator();
        h.iter().eq(h.iter().rev())
    }
}

pub fn h_vector(p: &CountingPolynomial) -> Result<HVector> {
    let d = p.degree();
    let binoms = binomial_row(d as u64 + 1);
    let values: Vec<BigRational> = (0..=d as i64).map(|x| p.eval_int(x)).collect();
    let mut entries = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let mut h = BigRational::zero();
        for m in 0..=i {
            let term = &values[i - m] * BigRational::from_integer(binoms[m].clone());
            if m % 2 == 0 {
                h += term;
            } else {
                h -= term;
            }
        }
        if !h.is_integer() {
            return Err(Error::NonIntegral {
                index: i,
                value: h.to_string(),
            });
        }
        entries.push(h.to_integer());
    }
    Ok(HVector { entries })
}

fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 1..=n {
        let prev = row.last().unwrap().clone();
        row.push(prev * BigInt::from(n - m + 1) / BigInt::from(m));
    }
    row
}

/// `vol(P_k)`: the leading coefficient of `G_k`.
pub fn substochastic_volume(k: usize) -> Result<BigRational> {
    Ok(pseudomagic_polynomial(k)?.leading_coefficient())
}

/// `vol(B_k) = k^(k-1)` times the leading coefficient of `H_k`.
pub fn birkhoff_volume(k: usize) -> Result<BigRational> {
    let p = magic_polynomial(k)?;
    Ok(birkhoff_volume_from(&p, k))
}

pub fn birkhoff_volume_from(magic: &CountingPolynomial, k: usize) -> BigRational {
    let scale = BigUint::from(k).pow(k as u32 - 1);
    magic.leading_coefficient() * BigRational::from_integer(scale.into())
}
