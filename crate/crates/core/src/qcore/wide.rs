//! Complex numbers with an unbounded binary exponent.
//!
//! Values such as `(x; q)_inf` at `x = a q^{-n}` grow like `|q|^{-n^2/2}`
//! and leave the double range long before the quantities built from them
//! do.

use std::ops::{Mul, Sub};

use super::{qpoch_infinite, QBase};
use crate::error::Result;
use crate::Complex;

/// `mantissa * 2^exponent`, with `max(|re|, |im|)` of a nonzero mantissa in
/// `[1, 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WideComplex {
    mantissa: Complex,
    exponent: i64,
}

/// `x * 2^k` for any `k`, saturating to zero or infinity.
fn scale2(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if !x.is_finite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

fn binary_exponent(x: f64) -> i64 {
    x.abs().log2().floor() as i64
}

impl WideComplex {
    pub const ZERO: Self = Self {
        mantissa: Complex::new(0.0, 0.0),
        exponent: 0,
    };

    pub fn new(z: Complex) -> Self {
        Self {
            mantissa: z,
            exponent: 0,
        }
        .normalized()
    }

    fn normalized(self) -> Self {
        let m = self.mantissa.re.abs().max(self.mantissa.im.abs());
        if m == 0.0 || !m.is_finite() {
            return Self {
                mantissa: self.mantissa,
                exponent: if m == 0.0 { 0 } else { self.exponent },
            };
        }
        let e = binary_exponent(m);
        Self {
            mantissa: Complex::new(scale2(self.mantissa.re, -e), scale2(self.mantissa.im, -e)),
            exponent: self.exponent + e,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex::new(0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.is_finite()
    }

    /// `log2 |z|`, or negative infinity for zero.
    pub fn log2_norm(&self) -> f64 {
        self.mantissa.norm().log2() + self.exponent as f64
    }

    /// `z^n` by repeated squaring.
    pub fn powi(self, mut n: u64) -> Self {
        let mut acc = Self::new(Complex::new(1.0, 0.0));
        let mut x = self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * x;
            }
            x = x * x;
            n >>= 1;
        }
        acc
    }

    /// The nearest double-precision value; saturates outside its range.
    pub fn to_complex(&self) -> Complex {
        Complex::new(
            scale2(self.mantissa.re, self.exponent),
            scale2(self.mantissa.im, self.exponent),
        )
    }
}

impl From<Complex> for WideComplex {
    fn from(z: Complex) -> Self {
        Self::new(z)
    }
}

impl Mul for WideComplex {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self {
            mantissa: self.mantissa * rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
        }
        .normalized()
    }
}

impl Mul<Complex> for WideComplex {
    type Output = Self;

    fn mul(self, rhs: Complex) -> Self {
        self * Self::new(rhs)
    }
}

impl Sub for WideComplex {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        if rhs.is_zero() {
            return self;
        }
        if self.is_zero() {
            return Self {
                mantissa: -rhs.mantissa,
                exponent: rhs.exponent,
            };
        }
        let e = self.exponent.max(rhs.exponent);
        let shift = |z: Self| {
            let k = z.exponent - e;
            Complex::new(scale2(z.mantissa.re, k), scale2(z.mantissa.im, k))
        };
        Self {
            mantissa: shift(self) - shift(rhs),
            exponent: e,
        }
        .normalized()
    }
}

/// `(a; q)_inf` over the full exponent range.
///
/// Factors with `|a q^k| >= 1/2` are multiplied here; the remaining tail
/// goes through [`qpoch_infinite`].
pub fn qpoch_infinite_wide(a: Complex, base: &QBase) -> Result<WideComplex> {
    let q = base.q();
    let mut out = WideComplex::new(Complex::new(1.0, 0.0));
    let mut x = a;
    let mut k = 0usize;
    while x.norm() >= 0.5 {
        if k >= base.max_product_terms() {
            return Err(crate::error::QError::TruncationLimit(base.max_product_terms()));
        }
        out = out * (Complex::new(1.0, 0.0) - x);
        x *= q;
        k += 1;
    }
    let rest = qpoch_infinite(x, base)?;
    if rest.is_zero() {
        return Ok(WideComplex::ZERO);
    }
    Ok(out * rest.value)
}

/// `(a; q)_n` for `n >= 0` over the full exponent range.
pub fn qpoch_finite_wide(a: Complex, n: usize, base: &QBase) -> WideComplex {
    let q = base.q();
    let mut out = WideComplex::new(Complex::new(1.0, 0.0));
    let mut x = a;
    for _ in 0..n {
        out = out * (Complex::new(1.0, 0.0) - x);
        x *= q;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_arithmetic() {
        let z = Complex::new(-3.5e200, 1.25e190);
        assert_eq!(WideComplex::new(z).to_complex(), z);
        let big = WideComplex::new(z)
            * WideComplex::new(z)
            * WideComplex::new(super::super::recip(z))
            * WideComplex::new(super::super::recip(z));
        assert!((big.to_complex() - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let d = WideComplex::new(Complex::new(3.0, 1.0)) - WideComplex::new(Complex::new(1.0, 1.0));
        assert_eq!(d.to_complex(), Complex::new(2.0, 0.0));
        assert!((WideComplex::new(z) - WideComplex::new(z)).is_zero());
        let huge = (0..10).fold(WideComplex::new(Complex::new(1e300, 0.0)), |acc, _| {
            acc * Complex::new(1e300, 0.0)
        });
        assert!((huge.log2_norm() - 3300.0 * 10f64.log2()).abs() < 1e-9);
        assert!(huge.to_complex().re.is_infinite());
    }

    #[test]
    fn powers_and_finite_products() {
        let z = Complex::new(0.3, -0.2);
        let p = WideComplex::new(z).powi(13).to_complex();
        assert!((p - z.powi(13)).norm() <= 1e-14 * p.norm());
        let tiny = WideComplex::new(Complex::new(0.5, 0.0)).powi(5000);
        assert_eq!(tiny.log2_norm(), -5000.0);
        let base = QBase::new(Complex::new(0.2, 0.5)).unwrap();
        let a = Complex::new(3.0, 1.0);
        let w = qpoch_finite_wide(a, 7, &base).to_complex();
        let plain = crate::qcore::qpoch_finite(a, 7, &base).value;
        assert!((w - plain).norm() <= 1e-13 * plain.norm());
    }

    #[test]
    fn wide_product_matches_plain_product() {
        let base = QBase::new(Complex::new(0.3, 0.4)).unwrap();
        let a = Complex::new(40.0, -7.0);
        let plain = qpoch_infinite(a, &base).unwrap().value;
        let wide = qpoch_infinite_wide(a, &base).unwrap().to_complex();
        assert!((plain - wide).norm() <= 1e-13 * plain.norm());
        let q1 = QBase::real(0.5).unwrap();
        assert!(qpoch_infinite_wide(Complex::new(4.0, 0.0), &q1).unwrap().is_zero());
    }

    #[test]
    fn wide_product_beyond_double_range() {
        // (x;q)_inf = (1 - x)(xq;q)_inf, with both sides far out of range
        let base = QBase::real(0.1).unwrap();
        let x = Complex::new(0.3, 0.2) * base.pow(-60);
        let lhs = qpoch_infinite_wide(x, &base).unwrap();
        let rhs = qpoch_infinite_wide(x * base.q(), &base).unwrap() * (Complex::new(1.0, 0.0) - x);
        assert!(lhs.log2_norm() > 5000.0);
        let rel = (lhs - rhs).log2_norm() - lhs.log2_norm();
        assert!(rel < -45.0, "{rel}");
    }
}
