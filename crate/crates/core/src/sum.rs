//! Compensated summation for complex terms.

use crate::Complex;

/// Neumaier's variant of Kahan summation, applied to real and imaginary
/// parts independently. Also accumulates `sum |t|` for conditioning.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
    magnitude: f64,
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: Complex) {
        neumaier(&mut self.re, &mut self.re_c, term.re);
        neumaier(&mut self.im, &mut self.im_c, term.im);
        self.magnitude += term.norm();
    }

    pub fn value(&self) -> Complex {
        Complex::new(self.re + self.re_c, self.im + self.im_c)
    }

    /// Sum of the moduli of every term added so far.
    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }
}

impl FromIterator<Complex> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex>>(iter: I) -> Self {
        let mut s = Self::new();
        for t in iter {
            s.add(t);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_summation() {
        let mut s = CompensatedSum::new();
        s.add(Complex::new(1.0, 1.0));
        for _ in 0..10_000 {
            s.add(Complex::new(1e-16, -1e-16));
        }
        let v = s.value();
        assert!((v.re - (1.0 + 1e-12)).abs() < 1e-15);
        assert!((v.im - (1.0 - 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn cancellation_keeps_exact_result() {
        let s: CompensatedSum = [1e16, 1.0, -1e16].iter().map(|&x| Complex::new(x, 0.0)).collect();
        assert_eq!(s.value().re, 1.0);
        assert_eq!(s.magnitude(), 2e16 + 1.0);
    }
}
