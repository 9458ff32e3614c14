//! Hecke operators on modular-form q-expansions, plus a certified numeric
//! check of the eta function's modular transformation.
//!
//! A [`QExpansion`] is a weight-tagged truncated q-expansion with exact
//! rational coefficients. `T(p)` acts on coefficients by
//! `a_n -> a_{np} + p^{k-1} a_{n/p}` (the second term only when `p | n`),
//! which is the classical coefficient form of the lattice sum
//! `p^{k-1} sum_{[L':L]=p} F(L')`; the translation is standard and not
//! re-derived here. Weight is semantic (it enters through `p^{k-1}`), so
//! combining expansions of different weights is a hard error.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum HeckeError {
    /// Eisenstein series are provided for the one-dimensional weights only.
    UnsupportedWeight(u32),
    /// Truncation order too small for the requested operation.
    OrderTooSmall {
        needed: u32,
        got: u32,
    },
    NotPrime(u64),
    WeightMismatch {
        left: u32,
        right: u32,
    },
    /// Eigenform test saw only zero coefficients, or too few to decide.
    Undecidable,
    /// Euler-product checks need a_1 = 1.
    NotNormalized,
    /// Eta evaluation needs Im(tau) > 0.
    InvalidTau,
    /// The requested truncation cannot certify the tolerance.
    TruncationInsufficient {
        truncation: usize,
        bound: f64,
        tolerance: f64,
    },
}

impl fmt::Display for HeckeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeError::UnsupportedWeight(k) => {
                write!(f, "weight {k} not in {{4, 6, 8, 10, 14}}")
            }
            HeckeError::OrderTooSmall { needed, got } => {
                write!(
                    f,
                    "truncation order {got} too small, need at least {needed}"
                )
            }
            HeckeError::NotPrime(p) => write!(f, "{p} is not prime"),
            HeckeError::WeightMismatch { left, right } => {
                write!(f, "weight mismatch: {left} vs {right}")
            }
            HeckeError::Undecidable => {
                write!(f, "expansion too short or zero; eigenvalue undecidable")
            }
            HeckeError::NotNormalized => write!(f, "expansion must have a_1 = 1"),
            HeckeError::InvalidTau => write!(f, "tau must have positive imaginary part"),
            HeckeError::TruncationInsufficient {
                truncation,
                bound,
                tolerance,
            } => write!(
                f,
                "truncation {truncation} certifies only {bound:.3e}, need {tolerance:.3e}"
            ),
        }
    }
}

impl std::error::Error for HeckeError {}

/// Weight-tagged truncated q-expansion `sum_{n=0}^{N} a_n q^n` with exact
/// rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    weight: u32,
    coeffs: Vec<BigRational>,
}

impl QExpansion {
    /// `coeffs[n]` is the coefficient of `q^n`; the truncation order is
    /// `coeffs.len() - 1`.
    pub fn new(weight: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "need at least the constant term");
        QExpansion { weight, coeffs }
    }

    pub fn zero(weight: u32, q_order: u32) -> Self {
        QExpansion {
            weight,
            coeffs: vec![BigRational::zero(); q_order as usize + 1],
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn q_order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, n: u32) -> &BigRational {
        &self.coeffs[n as usize]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `a_1 = 1`, the normalization the Euler-product identities need.
    pub fn is_normalized(&self) -> bool {
        self.coeffs.len() > 1 && self.coeffs[1].is_one()
    }

    /// Coefficient-wise sum; weights must agree, orders truncate to the min.
    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        if self.weight != other.weight {
            return Err(HeckeError::WeightMismatch {
                left: self.weight,
                right: other.weight,
            });
        }
        let len = self.coeffs.len().min(other.coeffs.len());
        Ok(QExpansion {
            weight: self.weight,
            coeffs: (0..len)
                .map(|n| &self.coeffs[n] + &other.coeffs[n])
                .collect(),
        })
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        QExpansion {
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HeckeError> {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Product; weights add, orders truncate to the min.
    pub fn mul(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QExpansion {
            weight: self.weight + other.weight,
            coeffs,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(e >= 1);
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Equality as truncated expansions, up to the shorter order; weights
    /// must agree.
    pub fn try_eq(&self, other: &Self) -> Result<bool, HeckeError> {
        if self.weight != other.weight {
            return Err(HeckeError::WeightMismatch {
                left: self.weight,
                right: other.weight,
            });
        }
        let len = self.coeffs.len().min(other.coeffs.len());
        Ok(self.coeffs[..len] == other.coeffs[..len])
    }
}

/// Trial-division primality, adequate for operator indices.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Bernoulli numbers B_k for the supported Eisenstein weights.
fn bernoulli(k: u32) -> Option<BigRational> {
    let frac = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    match k {
        4 => Some(frac(-1, 30)),
        6 => Some(frac(1, 42)),
        8 => Some(frac(-1, 30)),
        10 => Some(frac(5, 66)),
        14 => Some(frac(7, 6)),
        _ => None,
    }
}

fn divisor_power_sum(n: u64, power: u32) -> BigInt {
    let mut total = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += BigInt::from(d).pow(power);
        }
    }
    total
}

/// Normalized Eisenstein series `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n`
/// for the one-dimensional weights k in {4, 6, 8, 10, 14}.
pub fn eisenstein(k: u32, q_order: u32) -> Result<QExpansion, HeckeError> {
    let b_k = bernoulli(k).ok_or(HeckeError::UnsupportedWeight(k))?;
    let factor = -BigRational::from(BigInt::from(2 * i64::from(k))) / b_k;
    let mut coeffs = Vec::with_capacity(q_order as usize + 1);
    coeffs.push(BigRational::one());
    for n in 1..=u64::from(q_order) {
        coeffs.push(&factor * BigRational::from(divisor_power_sum(n, k - 1)));
    }
    Ok(QExpansion::new(k, coeffs))
}

/// The weight-12 cusp form `q prod_{n>=1} (1 - q^n)^{24}`, expanded exactly.
pub fn delta(q_order: u32) -> Result<QExpansion, HeckeError> {
    if q_order < 1 {
        return Err(HeckeError::OrderTooSmall {
            needed: 1,
            got: q_order,
        });
    }
    // product up to q^{q_order - 1}, then shift by one
    let len = q_order as usize;
    let mut poly = vec![BigInt::zero(); len];
    poly[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                let sub = poly[i - n].clone();
                poly[i] -= sub;
            }
        }
    }
    let mut coeffs = Vec::with_capacity(len + 1);
    coeffs.push(BigRational::zero());
    coeffs.extend(poly.into_iter().map(BigRational::from));
    Ok(QExpansion::new(12, coeffs))
}

/// Hecke operator `T(p)`: `a_n -> a_{np} + p^{k-1} a_{n/p}`. The result is
/// exact to order `floor(N / p)`.
pub fn hecke_t(p: u64, f: &QExpansion) -> Result<QExpansion, HeckeError> {
    if !is_prime(p) {
        return Err(HeckeError::NotPrime(p));
    }
    let result_order = u64::from(f.q_order()) / p;
    let scale = BigRational::from(BigInt::from(p).pow(f.weight() - 1));
    let mut coeffs = Vec::with_capacity(result_order as usize + 1);
    for n in 0..=result_order {
        let mut a = f.coeffs[(n * p) as usize].clone();
        if n % p == 0 {
            a += &scale * &f.coeffs[(n / p) as usize];
        }
        coeffs.push(a);
    }
    Ok(QExpansion::new(f.weight(), coeffs))
}

/// If `T(p) f = lambda f` as truncated expansions, return `Some(lambda)`.
/// Errors when the comparable range is shorter than 2 coefficients or `f`
/// vanishes there.
pub fn is_eigenform(p: u64, f: &QExpansion) -> Result<Option<BigRational>, HeckeError> {
    let g = hecke_t(p, f)?;
    let order = g.q_order();
    if order < 2 {
        return Err(HeckeError::OrderTooSmall {
            needed: 2,
            got: order,
        });
    }
    let pivot = (0..=order).find(|&n| !f.coeffs[n as usize].is_zero());
    let Some(pivot) = pivot else {
        return Err(HeckeError::Undecidable);
    };
    let lambda = g.coeff(pivot) / f.coeff(pivot);
    for n in 0..=order {
        if *g.coeff(n) != f.coeff(n) * &lambda {
            return Ok(None);
        }
    }
    Ok(Some(lambda))
}

/// Report of the Euler-product identities for a normalized eigenform.
#[derive(Clone, Debug)]
pub struct EulerProductReport {
    pub prime_power_identities: usize,
    pub coprime_identities: usize,
    pub failures: Vec<String>,
}

impl EulerProductReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verify `a_{p^{r+1}} = a_p a_{p^r} - p^{k-1} a_{p^{r-1}}` and
/// `a_{mn} = a_m a_n` for coprime `m, n >= 2`, over all indices up to
/// `min(max_index, order)`. Needs `a_1 = 1`.
pub fn euler_product_check(
    f: &QExpansion,
    p: u64,
    max_index: u64,
) -> Result<EulerProductReport, HeckeError> {
    if !is_prime(p) {
        return Err(HeckeError::NotPrime(p));
    }
    if f.coeffs.len() < 2 || !f.coeffs[1].is_one() {
        return Err(HeckeError::NotNormalized);
    }
    let limit = max_index.min(u64::from(f.q_order()));
    let scale = BigRational::from(BigInt::from(p).pow(f.weight() - 1));
    let mut report = EulerProductReport {
        prime_power_identities: 0,
        coprime_identities: 0,
        failures: Vec::new(),
    };
    let a = |n: u64| &f.coeffs[n as usize];
    let mut power = p * p; // p^{r+1} for r = 1
    while power <= limit {
        let lhs = a(power).clone();
        let rhs = a(p) * a(power / p) - &scale * a(power / (p * p));
        if lhs == rhs {
            report.prime_power_identities += 1;
        } else {
            report.failures.push(format!(
                "a_{power} != a_{p} a_{} - p^{{k-1}} a_{}",
                power / p,
                power / (p * p)
            ));
        }
        power *= p;
    }
    for m in 2..=limit {
        for n in (m + 1)..=limit {
            if m * n > limit {
                break;
            }
            if num_integer::gcd(m, n) != 1 {
                continue;
            }
            if a(m * n) == &(a(m) * a(n)) {
                report.coprime_identities += 1;
            } else {
                report.failures.push(format!("a_{} != a_{m} a_{n}", m * n));
            }
        }
    }
    Ok(report)
}

/// `T(p) T(q) f = T(q) T(p) f` as truncated expansions.
pub fn commute_check(p: u64, q: u64, f: &QExpansion) -> Result<bool, HeckeError> {
    if !is_prime(p) {
        return Err(HeckeError::NotPrime(p));
    }
    if !is_prime(q) {
        return Err(HeckeError::NotPrime(q));
    }
    if u64::from(f.q_order()) < p * q {
        return Err(HeckeError::OrderTooSmall {
            needed: (p * q) as u32,
            got: f.q_order(),
        });
    }
    let pq = hecke_t(p, &hecke_t(q, f)?)?;
    let qp = hecke_t(q, &hecke_t(p, f)?)?;
    pq.try_eq(&qp)
}

// ---------------------------------------------------------------------------
// eta

/// Truncated Dedekind eta: `q^{1/24} prod_{n=1}^{M} (1 - q^n)` with
/// `q = exp(2 pi i tau)`.
pub fn eta(tau: Complex64, truncation: usize) -> Complex64 {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let q = (two_pi_i * tau).exp();
    let mut acc = (two_pi_i * tau / 24.0).exp();
    let mut q_pow = Complex64::new(1.0, 0.0);
    for _ in 1..=truncation {
        q_pow *= q;
        acc *= Complex64::new(1.0, 0.0) - q_pow;
    }
    acc
}

/// `|q|^{M+1} / (1 - |q|)`-based bound on the relative truncation error of
/// the eta product at `tau`.
fn eta_tail_relative_bound(tau: Complex64, truncation: usize) -> f64 {
    let q_abs = (-2.0 * std::f64::consts::PI * tau.im).exp();
    let s = q_abs.powi(truncation as i32 + 1) / (1.0 - q_abs);
    s.exp() - 1.0
}

#[derive(Clone, Debug)]
pub struct EtaSample {
    pub tau: Complex64,
    pub deviation: f64,
    pub tail_bound: f64,
}

#[derive(Clone, Debug)]
pub struct EtaCheckReport {
    pub truncation: usize,
    pub max_deviation: f64,
    pub max_tail_bound: f64,
    pub samples: Vec<EtaSample>,
}

/// Check `eta(-1/tau) = sqrt(-i tau) eta(tau)` numerically at the given
/// sample points. When `truncation` is `None` it grows until the truncation
/// tail bound certifies `tolerance / 10`; a fixed truncation that cannot
/// certify the tolerance is an error.
pub fn eta_modularity_check(
    samples: &[Complex64],
    truncation: Option<usize>,
    tolerance: f64,
) -> Result<EtaCheckReport, HeckeError> {
    if samples.iter().any(|t| t.im <= 0.0) {
        return Err(HeckeError::InvalidTau);
    }
    // |eta - eta_M| at both tau and -1/tau; |eta_M| <= e^{|q|/(1-|q|)} |q^{1/24}|
    let sample_bound = |tau: Complex64, m: usize| -> f64 {
        let inv = -1.0 / tau;
        let scale = (Complex64::new(0.0, -1.0) * tau).sqrt().norm();
        let mag = |t: Complex64| {
            let q_abs = (-2.0 * std::f64::consts::PI * t.im).exp();
            (q_abs / (1.0 - q_abs)).exp() * ((-2.0 * std::f64::consts::PI * t.im) / 24.0).exp()
        };
        eta_tail_relative_bound(inv, m) * mag(inv)
            + scale * eta_tail_relative_bound(tau, m) * mag(tau)
    };
    let worst_bound = |m: usize| -> f64 {
        samples
            .iter()
            .map(|&tau| sample_bound(tau, m))
            .fold(0.0f64, f64::max)
    };
    let truncation = match truncation {
        Some(m) => {
            let bound = worst_bound(m);
            if bound > tolerance / 10.0 {
                return Err(HeckeError::TruncationInsufficient {
                    truncation: m,
                    bound,
                    tolerance,
                });
            }
            m
        }
        None => {
            let mut m = 32;
            loop {
                if worst_bound(m) <= tolerance / 10.0 {
                    break m;
                }
                m *= 2;
                if m > (1 << 22) {
                    return Err(HeckeError::TruncationInsufficient {
                        truncation: m,
                        bound: worst_bound(m),
                        tolerance,
                    });
                }
            }
        }
    };
    let mut report = EtaCheckReport {
        truncation,
        max_deviation: 0.0,
        max_tail_bound: 0.0,
        samples: Vec::with_capacity(samples.len()),
    };
    for &tau in samples {
        let lhs = eta(-1.0 / tau, truncation);
        let rhs = (Complex64::new(0.0, -1.0) * tau).sqrt() * eta(tau, truncation);
        let deviation = (lhs - rhs).norm();
        let tail_bound = sample_bound(tau, truncation);
        report.max_deviation = report.max_deviation.max(deviation);
        report.max_tail_bound = report.max_tail_bound.max(tail_bound);
        report.samples.push(EtaSample {
            tau,
            deviation,
            tail_bound,
        });
    }
    Ok(report)
}

/// Parse a complex number like `0.3+1.1i`, `i`, `2i`, or `-0.25+0.8i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim().replace(' ', "");
    if s.is_empty() {
        return None;
    }
    if !s.ends_with('i') && !s.ends_with('I') {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    }
    let body = &s[..s.len() - 1];
    // split at the last +/- that is not an exponent sign or leading
    let mut split = None;
    for (idx, ch) in body.char_indices().skip(1) {
        if (ch == '+' || ch == '-') && !matches!(body.as_bytes()[idx - 1], b'e' | b'E') {
            split = Some(idx);
        }
    }
    match split {
        Some(idx) => {
            let re: f64 = body[..idx].parse().ok()?;
            let im_str = &body[idx..];
            let im: f64 = match im_str {
                "+" => 1.0,
                "-" => -1.0,
                _ => im_str.parse().ok()?,
            };
            Some(Complex64::new(re, im))
        }
        None => {
            let im: f64 = match body {
                "" => 1.0,
                "-" => -1.0,
                _ => body.parse().ok()?,
            };
            Some(Complex64::new(0.0, im))
        }
    }
}
