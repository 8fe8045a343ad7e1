//! Haar-random unitary matrices and moments of their secular coefficients.
//!
//! For `M` in `U(N)` with eigenvalues `e^{i theta_j}`,
//!
//! ```text
//! det(M - zI) = (-1)^N sum_{j=0}^{N} Sc_j(M) z^{N-j} (-1)^j,
//! ```
//!
//! so `Sc_j` is the `j`-th elementary symmetric function of the eigenvalues.
//! Secular coefficients are obtained from power traces through Newton's
//! identities; no eigensolver is involved.
//!
//! Monte Carlo runs split their samples over workers. Worker `w` draws from
//! the ChaCha20 stream `w` of the run's seed, and the per-worker statistics
//! are merged in worker order, so a fixed `(seed, threads)` pair always
//! yields the same estimate.

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::counting::{count_contingency, count_magic, count_pseudomagic, Partition};
use crate::{BigCount, Error, Result};

pub const UNITARITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    /// Wraps a square matrix after checking `max |M M^* - I| < 1e-12`.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::invalid("unitary matrix must be square and nonempty"));
        }
        let residual = unitarity_residual(&entries);
        if residual >= UNITARITY_TOLERANCE {
            return Err(Error::invalid(format!(
                "unitarity residual {residual:e} too large"
            )));
        }
        Ok(UnitaryMatrix { entries })
    }

    pub fn identity(n: usize) -> Self {
        UnitaryMatrix {
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn residual(&self) -> f64 {
        unitarity_residual(&self.entries)
    }
}

/// `max_{ij} |(M M^* - I)_{ij}|`.
pub fn unitarity_residual(m: &DMatrix<Complex64>) -> f64 {
    let product = m * m.adjoint();
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j {
                Complex64::one()
            } else {
                Complex64::zero()
            };
            worst = worst.max((product[(i, j)] - target).norm());
        }
    }
    worst
}

/// Generator for substream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Haar-distributed element of `U(n)` drawn from stream 0 of `seed`.
pub fn haar_unitary(n: usize, seed: u64) -> Result<UnitaryMatrix> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok(haar_unitary_with(n, &mut stream_rng(seed, 0)))
}

/// Ginibre matrix, Householder QR, then each column of `Q` rotated by the
/// phase of the matching diagonal entry of `R`. Without the phase fix the
/// distribution depends on the QR sign convention and is not Haar.
pub fn haar_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 {
            d / norm
        } else {
            Complex64::one()
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix { entries: q }
}

/// `Sc_0 .. Sc_N`, with `Sc_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularVector {
    coefficients: Vec<Complex64>,
}

impl SecularVector {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn get(&self, j: usize) -> Complex64 {
        self.coefficients[j]
    }

    /// Matrix dimension `N`.
    pub fn dimension(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `P_{M,l}(z) = sum_{j=0}^{l} Sc_j z^{N-j} (-1)^j`.
    pub fn truncated_char_poly(&self, l: usize, z: Complex64) -> Complex64 {
        let n = self.dimension() as i32;
        (0..=l.min(self.dimension()))
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                self.coefficients[j] * z.powi(n - j as i32) * sign
            })
            .sum()
    }
}

/// Secular coefficients through `p_m = tr(M^m)` and
/// `j e_j = sum_{i=1}^{j} (-1)^{i-1} e_{j-i} p_i`.
pub fn secular_coefficients(m: &UnitaryMatrix) -> SecularVector {
    let n = m.dimension();
    let mut traces = Vec::with_capacity(n + 1);
    traces.push(Complex64::new(n as f64, 0.0));
    let mut power = m.entries.clone();
    for step in 1..=n {
        traces.push(power.trace());
        if step < n {
            power = &power * &m.entries;
        }
    }
    let mut e = vec![Complex64::one(); n + 1];
    for j in 1..=n {
        let mut acc = Complex64::zero();
        for i in 1..=j {
            let term = e[j - i] * traces[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e[j] = acc / j as f64;
    }
    SecularVector { coefficients: e }
}

/// Slow cross-check: `Sc_j` as the sum of all `j x j` principal minors.
/// Exponential in `N`; intended for `N <= 10`.
pub fn secular_coefficients_by_minors(m: &UnitaryMatrix) -> SecularVector {
    let n = m.dimension();
    let mut e = vec![Complex64::zero(); n + 1];
    e[0] = Complex64::one();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| m.entries[(idx[a], idx[b])]);
        e[idx.len()] += sub.determinant();
    }
    SecularVector { coefficients: e }
}

/// Sample count, seed and worker count for a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            threads: 1,
        }
    }

    pub fn with_threads(self, threads: usize) -> Self {
        McConfig { threads, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub mean: Complex64,
    /// Sample standard deviation over `sqrt(samples)`, using `|x - mean|^2`.
    pub stderr: f64,
    pub samples: u64,
    /// The exact value the expectation should equal, when known.
    pub target: Option<BigCount>,
}

impl MomentEstimate {
    /// `|mean - target| / stderr`, or `None` without a target.
    pub fn z_score(&self) -> Option<f64> {
        let target = self.target.as_ref()?.to_f64()?;
        let diff = (self.mean - Complex64::new(target, 0.0)).norm();
        Some(if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        })
    }

    pub fn within_sigmas(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - Complex64::new(target, 0.0)).norm() <= sigmas * self.stderr
    }
}

/// Running mean and second moment (Welford), mergeable with Chan's update.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    count: u64,
    mean: Complex64,
    m2: f64,
}

impl Accumulator {
    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        let delta2 = x - self.mean;
        self.m2 += (delta.conj() * delta2).re;
    }

    fn merge(&mut self, other: &Accumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * (other.count as f64 / total);
        self.m2 += other.m2 + delta.norm_sqr() * self.count as f64 * other.count as f64 / total;
        self.count += other.count;
    }
}

/// Mean of `statistic` over Haar samples of `U(n)`.
pub fn monte_carlo<F>(n: usize, config: McConfig, statistic: F) -> Result<(Complex64, f64)>
where
    F: Fn(&UnitaryMatrix) -> Complex64 + Sync,
{
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if config.samples < 2 {
        return Err(Error::invalid(
            "need at least two samples for a standard error",
        ));
    }
    let workers = config.threads.max(1).min(config.samples as usize);
    let base = config.samples / workers as u64;
    let extra = config.samples % workers as u64;
    let partials: Vec<Accumulator> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let statistic = &statistic;
                scope.spawn(move || {
                    let mut rng = stream_rng(config.seed, w);
                    let mut acc = Accumulator::default();
                    let count = base + u64::from(w < extra);
                    for _ in 0..count {
                        let m = haar_unitary_with(n, &mut rng);
                        acc.push(statistic(&m));
                    }
                    acc
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler panicked"))
            .collect()
    });
    let mut total = Accumulator::default();
    for p in &partials {
        total.merge(p);
    }
    let variance = total.m2 / (total.count - 1) as f64;
    Ok((total.mean, (variance / total.count as f64).sqrt()))
}

/// `E |Sc_j|^{2k}`; the target `H_k(j)` is attached when `N >= jk`.
pub fn secular_abs_moment_mc(
    j: usize,
    k: u32,
    n: usize,
    config: McConfig,
) -> Result<MomentEstimate> {
    if j == 0 || j > n {
        return Err(Error::invalid(format!(
            "need 1 <= j <= N, got j = {j}, N = {n}"
        )));
    }
    let (mean, stderr) = monte_carlo(n, config, |m| {
        let sc = secular_coefficients(m).get(j);
        Complex64::new(sc.norm_sqr().powi(k as i32), 0.0)
    })?;
    let target = (n >= j * k as usize).then(|| count_magic(k as usize, j as u64));
    Ok(MomentEstimate {
        mean,
        stderr,
        samples: config.samples,
        target,
    })
}

/// `E prod_j Sc_j^{a_j} conj(Sc_j)^{b_j}`; the target `N_{mu mu~}` with
/// `mu = <1^{a_1} 2^{a_2} ...>` is attached when `N >= max(sum j a_j, sum j b_j)`.
pub fn mixed_moment_mc(a: &[u32], b: &[u32], n: usize, config: McConfig) -> Result<MomentEstimate> {
    if a.len() != b.len() {
        return Err(Error::invalid("exponent vectors must have equal length"));
    }
    if a.len() > n {
        return Err(Error::invalid(format!(
            "exponent vectors of length {} exceed N = {n}",
            a.len()
        )));
    }
    let (mean, stderr) = monte_carlo(n, config, |m| {
        let sc = secular_coefficients(m);
        let mut prod = Complex64::one();
        for (idx, (&ea, &eb)) in a.iter().zip(b).enumerate() {
            let s = sc.get(idx + 1);
            prod *= s.powu(ea) * s.conj().powu(eb);
        }
        prod
    })?;
    let weight = |v: &[u32]| -> usize {
        v.iter()
            .enumerate()
            .map(|(i, &e)| (i + 1) * e as usize)
            .sum()
    };
    let target = (n >= weight(a).max(weight(b))).then(|| {
        let mu = Partition::from_multiplicities(&a.iter().map(|&x| x as u64).collect::<Vec<_>>());
        let nu = Partition::from_multiplicities(&b.iter().map(|&x| x as u64).collect::<Vec<_>>());
        count_contingency(&mu, &nu)
    });
    Ok(MomentEstimate {
        mean,
        stderr,
        samples: config.samples,
        target,
    })
}

/// `E |P_{M,l}(z)|^{2k}` for `|z| = 1`; the target `G_k(l)` is attached
/// when `N >= lk`.
pub fn truncated_poly_moment_mc(
    l: usize,
    k: u32,
    n: usize,
    z: Complex64,
    config: McConfig,
) -> Result<MomentEstimate> {
    if l > n {
        return Err(Error::invalid(format!(
            "truncation l = {l} exceeds N = {n}"
        )));
    }
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("|z| = {} is not 1", z.norm())));
    }
    let (mean, stderr) = monte_carlo(n, config, |m| {
        let p = secular_coefficients(m).truncated_char_poly(l, z);
        Complex64::new(p.norm_sqr().powi(k as i32), 0.0)
    })?;
    let target = (n >= l * k as usize).then(|| count_pseudomagic(k as usize, l as u64));
    Ok(MomentEstimate {
        mean,
        stderr,
        samples: config.samples,
        target,
    })
}

/// `E |P_M(z)|^{2k} = prod_{j=1}^{N} Gamma(j) Gamma(j+2k) / Gamma(j+k)^2`,
/// exactly, for integer `k`.
pub fn full_poly_moment_exact(n: u64, k: u64) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 1..=n {
        // Gamma(j+2k)/Gamma(j+k) = (j+k)...(j+2k-1); Gamma(j+k)/Gamma(j) = j...(j+k-1)
        for i in 0..k {
            num *= j + k + i;
            den *= j + i;
        }
    }
    BigRational::new(num, den)
}

/// `g_k = prod_{j=0}^{k-1} j! / (j+k)!`.
pub fn g_factor(k: u64) -> BigRational {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..k {
        for i in 1..=j {
            num *= i;
        }
        for i in 1..=j + k {
            den *= i;
        }
    }
    BigRational::new(num.into(), den.into())
}
