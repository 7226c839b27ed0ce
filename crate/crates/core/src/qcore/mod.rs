//! Complex q-shifted factorials and the classical gamma function.
//!
//! Every routine works in complex double precision. Factors that vanish to
//! within [`POLE_TOL`] are reported through [`Singularity`] instead of being
//! returned as huge or tiny numbers, so callers can resample rather than
//! amplify rounding noise.

mod gamma;
mod wide;

pub use gamma::{gamma, gamma_real, GammaArg};
pub use wide::{qpoch_finite_wide, qpoch_infinite_wide, WideComplex};

use crate::error::{QError, Result};
use crate::Complex;

/// Relative threshold under which a factor `1 - x` counts as zero.
pub const POLE_TOL: f64 = 1e-13;

/// `1 / z` without forming `|z|^2`, which over- or underflows for
/// `|z|` beyond roughly `1e154`.
pub fn recip(z: Complex) -> Complex {
    let s = z.re.abs().max(z.im.abs());
    if s == 0.0 || !s.is_finite() {
        return z.inv();
    }
    let w = z / s;
    w.conj() / (s * w.norm_sqr())
}

/// `true` when `1 - x` vanishes to within [`POLE_TOL`].
#[inline]
pub fn is_vanishing(x: Complex) -> bool {
    (Complex::new(1.0, 0.0) - x).norm() < POLE_TOL * (1.0 + x.norm())
}

/// The base `q` of a q-series, together with the truncation policy for
/// infinite products taken in that base.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBase {
    q: Complex,
    eps_product: f64,
    max_product_terms: usize,
}

impl QBase {
    pub const DEFAULT_EPS_PRODUCT: f64 = 1e-16;
    pub const DEFAULT_MAX_PRODUCT_TERMS: usize = 10_000;

    pub fn new(q: Complex) -> Result<Self> {
        Self::with_policy(q, Self::DEFAULT_EPS_PRODUCT, Self::DEFAULT_MAX_PRODUCT_TERMS)
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex::new(q, 0.0))
    }

    pub fn with_policy(q: Complex, eps_product: f64, max_product_terms: usize) -> Result<Self> {
        let modulus = q.norm();
        if !(modulus < 1.0) {
            return Err(QError::InvalidBase(modulus));
        }
        if !(eps_product > 0.0) {
            return Err(QError::InvalidPolicy("eps_product must be positive"));
        }
        if max_product_terms == 0 {
            return Err(QError::InvalidPolicy("max_product_terms must be at least 1"));
        }
        Ok(Self {
            q,
            eps_product,
            max_product_terms,
        })
    }

    #[inline]
    pub fn q(&self) -> Complex {
        self.q
    }

    pub fn eps_product(&self) -> f64 {
        self.eps_product
    }

    pub fn max_product_terms(&self) -> usize {
        self.max_product_terms
    }

    /// The base `q^2` with the same truncation policy.
    pub fn squared(&self) -> Self {
        Self {
            q: self.q * self.q,
            ..*self
        }
    }

    /// `q^n` for any integer `n`.
    #[inline]
    pub fn pow(&self, n: i64) -> Complex {
        if n >= 0 {
            self.q.powi(n as i32)
        } else {
            self.q.inv().powi(-n as i32)
        }
    }
}

/// Length of a q-shifted factorial: a signed integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl From<i64> for Order {
    fn from(n: i64) -> Self {
        Order::Finite(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularity {
    Regular,
    /// A factor of the product vanished; the value is exactly zero.
    Zero,
    /// A factor of a reciprocal vanished; the value is infinite.
    Pole,
}

/// Value of a q-shifted factorial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PochValue {
    pub value: Complex,
    /// Bound on the truncation error (zero for finite orders).
    pub abs_error: f64,
    pub singularity: Singularity,
    /// Number of factors formed.
    pub factors: usize,
    /// Smallest `|1 - a q^j|` over the factors formed.
    pub min_factor: f64,
}

impl PochValue {
    fn one() -> Self {
        Self {
            value: Complex::new(1.0, 0.0),
            abs_error: 0.0,
            singularity: Singularity::Regular,
            factors: 0,
            min_factor: f64::INFINITY,
        }
    }

    fn zero(factors: usize) -> Self {
        Self {
            value: Complex::new(0.0, 0.0),
            abs_error: 0.0,
            singularity: Singularity::Zero,
            factors,
            min_factor: 0.0,
        }
    }

    fn pole(factors: usize) -> Self {
        Self {
            value: Complex::new(f64::INFINITY, 0.0),
            abs_error: f64::INFINITY,
            singularity: Singularity::Pole,
            factors,
            min_factor: 0.0,
        }
    }

    pub fn is_pole(&self) -> bool {
        self.singularity == Singularity::Pole
    }

    pub fn is_zero(&self) -> bool {
        self.singularity == Singularity::Zero
    }
}

/// `(a; q)_n` for a signed integer `n`.
///
/// Negative orders use `(a; q)_{-k} = 1 / (a q^{-k}; q)_k`.
pub fn qpoch_finite(a: Complex, n: i64, base: &QBase) -> PochValue {
    if n == 0 {
        return PochValue::one();
    }
    let q = base.q();
    let mut out = PochValue::one();
    if n > 0 {
        let mut x = a;
        for k in 0..n as usize {
            if is_vanishing(x) {
                return PochValue::zero(k + 1);
            }
            let f = Complex::new(1.0, 0.0) - x;
            out.min_factor = out.min_factor.min(f.norm());
            out.value *= f;
            x *= q;
        }
        out.factors = n as usize;
    } else {
        // (a;q)_{-k} = 1 / prod_{j=1}^{k} (1 - a q^{-j})
        let k = n.unsigned_abs() as usize;
        let qinv = q.inv();
        let mut x = a * qinv;
        let mut den = Complex::new(1.0, 0.0);
        for j in 0..k {
            if is_vanishing(x) {
                return PochValue::pole(j + 1);
            }
            let f = Complex::new(1.0, 0.0) - x;
            out.min_factor = out.min_factor.min(f.norm());
            den *= f;
            x *= qinv;
        }
        out.value = recip(den);
        out.factors = k;
    }
    out
}

/// `(a; q)_inf`, truncated once the tail bound drops below the base's
/// `eps_product`.
///
/// The tail of `log prod (1 - x_k)` beyond `N` factors is bounded by
/// `|a||q|^N / ((1 - |q|)(1 - |a q^N|))` once `|a q^N| < 1/2`.
pub fn qpoch_infinite(a: Complex, base: &QBase) -> Result<PochValue> {
    if a == Complex::new(0.0, 0.0) {
        return Ok(PochValue::one());
    }
    let q = base.q();
    let rq = q.norm();
    let mut out = PochValue::one();
    let mut x = a;
    for k in 0..base.max_product_terms() {
        let rx = x.norm();
        if rx < 0.5 {
            let tail = rx / ((1.0 - rq) * (1.0 - rx));
            if tail < base.eps_product() {
                out.factors = k;
                out.abs_error = out.value.norm() * tail.exp_m1();
                return Ok(out);
            }
        }
        if is_vanishing(x) {
            return Ok(PochValue::zero(k + 1));
        }
        let f = Complex::new(1.0, 0.0) - x;
        out.min_factor = out.min_factor.min(f.norm());
        out.value *= f;
        x *= q;
    }
    Err(QError::TruncationLimit(base.max_product_terms()))
}

/// `(a_1, ..., a_m; q)_n = (a_1; q)_n ... (a_m; q)_n`.
pub fn qpoch_multi(args: &[Complex], n: Order, base: &QBase) -> Result<PochValue> {
    let mut out = PochValue::one();
    let mut rel_err = 0.0;
    let mut pole = false;
    let mut zero = false;
    for &a in args {
        let p = match n {
            Order::Finite(n) => qpoch_finite(a, n, base),
            Order::Infinite => qpoch_infinite(a, base)?,
        };
        out.factors += p.factors;
        out.min_factor = out.min_factor.min(p.min_factor);
        match p.singularity {
            Singularity::Pole => pole = true,
            Singularity::Zero => zero = true,
            Singularity::Regular => {
                out.value *= p.value;
                rel_err += p.abs_error / p.value.norm();
            }
        }
    }
    if pole {
        return Ok(PochValue::pole(out.factors));
    }
    if zero {
        return Ok(PochValue::zero(out.factors));
    }
    out.abs_error = out.value.norm() * rel_err;
    Ok(out)
}
