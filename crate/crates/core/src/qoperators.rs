//! The q-difference calculus on one-parameter functions.
//!
//! For `f(a)` these are
//!
//! * `D_q f(a) = (f(a) - f(aq)) / a`,
//! * `eta f(a) = f(aq)` and `eta^{-1} f(a) = f(a/q)`,
//! * `theta = eta^{-1} D_q`, so `theta f(a) = (f(a/q) - f(a)) / (a/q)`,
//! * `E(b theta) = sum_n (b theta)^n q^{n choose 2} / (q; q)_n`.
//!
//! `theta^n f(a)` only involves `f(a q^{-j})` for `0 <= j <= n`; it is
//! built from a triangular table of exact q-differences, so reaching order
//! `n` costs `n + 1` evaluations of `f`.

use std::fmt;
use std::sync::Arc;

use crate::error::{QError, Result};
use crate::qcore::{QBase, WideComplex};
use crate::sum::CompensatedSum;
use crate::Complex;

type Evaluator = dyn Fn(Complex) -> Result<WideComplex> + Send + Sync;

/// A complex function of one complex parameter.
///
/// Functions built with [`ParamFunction::wide`] keep their values past the
/// double range, which deep powers of `theta` need at `a q^{-n}`.
#[derive(Clone)]
pub struct ParamFunction {
    label: String,
    eval: Arc<Evaluator>,
}

impl ParamFunction {
    pub fn new(label: impl Into<String>, eval: impl Fn(Complex) -> Result<Complex> + Send + Sync + 'static) -> Self {
        Self::wide(label, move |a| eval(a).map(WideComplex::new))
    }

    pub fn wide(
        label: impl Into<String>,
        eval: impl Fn(Complex) -> Result<WideComplex> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, a: Complex) -> Result<Complex> {
        (self.eval)(a).map(|v| v.to_complex())
    }

    pub fn eval_wide(&self, a: Complex) -> Result<WideComplex> {
        (self.eval)(a)
    }
}

impl fmt::Debug for ParamFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamFunction").field("label", &self.label).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `eta`: `a -> aq`
    Forward,
    /// `eta^{-1}`: `a -> a/q`
    Backward,
}

/// Truncation order and parameter `b` of `E(b theta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorPolicy {
    pub truncation_order: usize,
    pub b: Complex,
}

impl OperatorPolicy {
    pub const DEFAULT_ORDER: usize = 40;

    pub fn new(b: Complex) -> Self {
        Self {
            truncation_order: Self::DEFAULT_ORDER,
            b,
        }
    }

    pub fn with_order(b: Complex, truncation_order: usize) -> Result<Self> {
        if truncation_order == 0 {
            return Err(QError::Config("truncation order must be at least 1".into()));
        }
        Ok(Self { truncation_order, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorValue {
    pub value: Complex,
    pub abs_error: f64,
    /// Number of operator terms summed (`n = 0..terms`).
    pub terms: usize,
}

/// `D_q f(a) = (f(a) - f(aq)) / a`.
pub fn dq(f: &ParamFunction, a: Complex, base: &QBase) -> Result<Complex> {
    if a == Complex::new(0.0, 0.0) {
        return Err(QError::ZeroParameter);
    }
    Ok((f.eval(a)? - f.eval(a * base.q())?) / a)
}

/// `f(a q^{+-1})`.
pub fn shift(f: &ParamFunction, direction: Direction, a: Complex, base: &QBase) -> Result<Complex> {
    match direction {
        Direction::Forward => f.eval(a * base.q()),
        Direction::Backward => f.eval(a / base.q()),
    }
}

/// `theta f(a) = (f(a/q) - f(a)) / (a/q)`.
pub fn theta(f: &ParamFunction, a: Complex, base: &QBase) -> Result<Complex> {
    if a == Complex::new(0.0, 0.0) {
        return Err(QError::ZeroParameter);
    }
    let aq = a / base.q();
    Ok((f.eval(aq)? - f.eval(a)?) / aq)
}

/// Triangular table of `T_m(x) = w_m theta^m f(x)` for fixed weights `w_m`.
///
/// After `n` pushes, `diag[m] = T_m(a q^{-(n-1-m)})`. Row `n` multiplies each
/// difference by `ratio(n, m) = (w_m / w_{m-1}) / (x/q)` at
/// `x = a q^{-(n-m)}`.
struct Table<F> {
    diag: Vec<WideComplex>,
    ratio: F,
}

impl<F: FnMut(usize, usize) -> WideComplex> Table<F> {
    fn new(ratio: F) -> Self {
        Self {
            diag: Vec::new(),
            ratio,
        }
    }

    /// Adds `f(a q^{-n})` and returns `T_n(a)`.
    fn push(&mut self, value: WideComplex) -> WideComplex {
        let n = self.diag.len();
        let mut next = Vec::with_capacity(n + 1);
        next.push(value);
        for m in 1..=n {
            next.push((next[m - 1] - self.diag[m - 1]) * (self.ratio)(n, m));
        }
        self.diag = next;
        self.diag[n]
    }
}

fn argument(a: Complex, n: usize, base: &QBase) -> Option<Complex> {
    let x = a * base.pow(-(n as i64));
    x.is_finite().then_some(x)
}

/// `theta^n f(a)`.
pub fn theta_pow(f: &ParamFunction, n: usize, a: Complex, base: &QBase) -> Result<Complex> {
    if a == Complex::new(0.0, 0.0) {
        return Err(QError::ZeroParameter);
    }
    let q = WideComplex::new(base.q());
    let over_a = WideComplex::new(crate::qcore::recip(a));
    let mut table = Table::new(|row: usize, m: usize| {
        // 1 / (x/q) = q^{n-m+1} / a
        (0..=row - m).fold(over_a, |acc, _| acc * q)
    });
    let mut out = WideComplex::ZERO;
    for j in 0..=n {
        let x = argument(a, j, base).ok_or(QError::DepthLimit(j))?;
        out = table.push(f.eval_wide(x)?);
    }
    Ok(out.to_complex())
}

/// `E(b theta) f(a)` truncated at `policy.truncation_order`, or earlier once
/// the terms fall below double-precision resolution of the partial sum.
///
/// The table carries the weights `b^m q^{m choose 2} / (q;q)_m`, whose row
/// ratio collapses to `b q^n / (a (1 - q^m))`. The error estimate is the
/// geometric tail bound of the last terms.
pub fn apply_e(f: &ParamFunction, policy: &OperatorPolicy, a: Complex, base: &QBase) -> Result<OperatorValue> {
    if a == Complex::new(0.0, 0.0) {
        return Err(QError::ZeroParameter);
    }
    let q = base.q();
    let one = Complex::new(1.0, 0.0);
    let mut qm = vec![one];
    let mut w = WideComplex::new(policy.b * crate::qcore::recip(a));
    let mut w_row = 0usize;
    let mut table = Table::new(|row: usize, m: usize| {
        while w_row < row {
            w = w * q;
            w_row += 1;
        }
        while qm.len() <= m {
            let last = qm[qm.len() - 1];
            qm.push(last * q);
        }
        w * (one / (one - qm[m]))
    });
    let mut sum = CompensatedSum::new();
    let mut history: Vec<f64> = Vec::new();
    let mut small = 0usize;
    for n in 0..=policy.truncation_order {
        let Some(x) = argument(a, n, base) else { break };
        let v = f.eval_wide(x)?;
        if !v.is_finite() {
            break;
        }
        let term = table.push(v).to_complex();
        if !term.is_finite() {
            break;
        }
        sum.add(term);
        history.push(term.norm());
        if term.norm() <= f64::EPSILON * sum.value().norm() {
            small += 1;
            if small >= 2 {
                return Ok(OperatorValue {
                    value: sum.value(),
                    abs_error: 2.0 * term.norm() + f64::EPSILON * sum.magnitude(),
                    terms: n + 1,
                });
            }
        } else {
            small = 0;
        }
    }
    let terms = history.len();
    if terms < 4 {
        return Err(QError::DepthLimit(terms));
    }
    let tail = &history[terms - 3..];
    if tail[0] <= tail[1] && tail[1] <= tail[2] {
        return Err(QError::NoDecay);
    }
    let rho = tail
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .fold(0.0, f64::max);
    if rho >= 1.0 {
        return Err(QError::DepthLimit(terms));
    }
    Ok(OperatorValue {
        value: sum.value(),
        abs_error: tail[2] * rho / (1.0 - rho) + f64::EPSILON * sum.magnitude(),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex {
        Complex::from_polar(rng.gen_range(lo..hi), rng.gen_range(-3.1..3.1))
    }

    /// `prod_{k < 600} (1 - x q^k)`, independent of `qcore`.
    fn prod(xs: &[Complex], q: Complex) -> Complex {
        let mut p = c(1.0);
        for &x in xs {
            let mut t = x;
            for _ in 0..600 {
                p *= c(1.0) - t;
                t *= q;
            }
        }
        p
    }

    fn residual(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / (a.norm() + b.norm() + 1.0)
    }

    fn inf_poch(label: &str, t: Vec<Complex>, q: Complex) -> ParamFunction {
        ParamFunction::new(label, move |a| {
            Ok(prod(&t.iter().map(|&x| a * x).collect::<Vec<_>>(), q))
        })
    }

    /// `(a t_1, ..., a t_k; q)_inf` over the full exponent range.
    fn wide_poch(label: &str, t: Vec<Complex>, q: Complex) -> ParamFunction {
        let base = QBase::new(q).unwrap();
        ParamFunction::wide(label, move |a| {
            t.iter().try_fold(WideComplex::new(c(1.0)), |acc, &x| {
                Ok(acc * crate::qcore::qpoch_infinite_wide(a * x, &base)?)
            })
        })
    }

    fn deep(b: Complex) -> OperatorPolicy {
        OperatorPolicy::with_order(b, 400).unwrap()
    }

    /// `theta^n f(a)` by literal nesting: `2^n` evaluations of `f`.
    fn theta_pow_nested(f: &ParamFunction, n: usize, a: Complex, q: Complex) -> Complex {
        if n == 0 {
            return f.eval(a).unwrap();
        }
        let aq = a / q;
        (theta_pow_nested(f, n - 1, aq, q) - theta_pow_nested(f, n - 1, a, q)) / aq
    }

    #[test]
    fn dq_examples() {
        let b = QBase::real(0.5).unwrap();
        let constant = ParamFunction::new("7", |_| Ok(c(7.0)));
        assert_eq!(dq(&constant, c(0.3), &b).unwrap(), c(0.0));
        let id = ParamFunction::new("a", Ok);
        let v = dq(&id, Complex::new(0.3, 0.8), &b).unwrap();
        assert!((v - c(0.5)).norm() < 1e-15);
        assert_eq!(dq(&id, c(0.0), &b), Err(QError::ZeroParameter));
    }

    #[test]
    fn dq_of_infinite_product() {
        let q = Complex::new(0.3, 0.4);
        let b = QBase::new(q).unwrap();
        let t = Complex::new(0.7, -0.2);
        let f = inf_poch("(at;q)_inf", vec![t], q);
        let a = Complex::new(-0.4, 0.9);
        let oracle = (prod(&[a * t], q) - prod(&[a * q * t], q)) / a;
        assert!((dq(&f, a, &b).unwrap() - oracle).norm() < 1e-14);
        // D_q (at;q)_inf = -t (atq;q)_inf
        assert!((oracle + t * prod(&[a * t * q], q)).norm() < 1e-14);
    }

    #[test]
    fn shift_examples() {
        let q = c(0.45);
        let b = QBase::new(q).unwrap();
        let t = c(0.8);
        let f = inf_poch("(at;q)_inf", vec![t], q);
        let a = Complex::new(0.5, 0.5);
        let there = shift(&f, Direction::Forward, a, &b).unwrap();
        let expected = prod(&[a * t], q) / (c(1.0) - a * t);
        assert!((there - expected).norm() < 1e-14);
        let back = ParamFunction::new("eta f", {
            let f = f.clone();
            move |x| shift(&f, Direction::Forward, x, &QBase::new(q).unwrap())
        });
        let round_trip = shift(&back, Direction::Backward, a, &b).unwrap();
        assert!((round_trip - f.eval(a).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn theta_is_shifted_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let q = polar(&mut rng, 0.1, 0.7);
            let b = QBase::new(q).unwrap();
            let f = inf_poch("(at;q)_inf", vec![polar(&mut rng, 0.2, 1.0)], q);
            let a = polar(&mut rng, 0.2, 1.5);
            let composed = dq(&f, a / q, &b).unwrap();
            assert!((theta(&f, a, &b).unwrap() - composed).norm() <= 1e-13 * composed.norm().max(1.0));
        }
    }

    #[test]
    fn table_matches_nested_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let q = polar(&mut rng, 0.2, 0.7);
            let b = QBase::new(q).unwrap();
            let f = inf_poch(
                "(as,at;q)_inf",
                vec![polar(&mut rng, 0.2, 1.0), polar(&mut rng, 0.2, 1.0)],
                q,
            );
            let a = polar(&mut rng, 0.3, 1.5);
            for n in 0..=4 {
                let fast = theta_pow(&f, n, a, &b).unwrap();
                let nested = theta_pow_nested(&f, n, a, q);
                let rel = (fast - nested).norm() / nested.norm().max(1.0);
                assert!(rel <= 1e-12, "n = {n}: {fast} vs {nested}");
            }
        }
    }

    #[test]
    fn e_with_zero_parameter_is_identity() {
        let q = c(0.5);
        let b = QBase::new(q).unwrap();
        let f = inf_poch("(at;q)_inf", vec![c(0.5)], q);
        let v = apply_e(&f, &OperatorPolicy::new(c(0.0)), c(0.3), &b).unwrap();
        assert_eq!(v.value, f.eval(c(0.3)).unwrap());
    }

    #[test]
    fn augmentation_of_single_product() {
        let (a, bb, t, q) = (c(0.3), c(0.4), c(0.5), c(0.5));
        let base = QBase::new(q).unwrap();
        let f = inf_poch("(at;q)_inf", vec![t], q);
        let v = apply_e(&f, &OperatorPolicy::new(bb), a, &base).unwrap();
        assert!(residual(v.value, prod(&[a * t, bb * t], q)) < 1e-9);
    }

    #[test]
    fn augmentation_of_single_product_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut n = 0;
        while n < 50 {
            let q = polar(&mut rng, 0.1, 0.7);
            let (a, bb, t) = (
                polar(&mut rng, 0.2, 1.5),
                polar(&mut rng, 0.2, 1.5),
                polar(&mut rng, 0.2, 1.5),
            );
            if (bb * t).norm() > 0.8 {
                continue;
            }
            let base = QBase::new(q).unwrap();
            let f = wide_poch("(at;q)_inf", vec![t], q);
            let v = apply_e(&f, &deep(bb), a, &base).unwrap();
            assert!(residual(v.value, prod(&[a * t, bb * t], q)) <= 1e-9);
            n += 1;
        }
    }

    #[test]
    fn augmentation_of_two_products_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut n = 0;
        while n < 50 {
            let q = polar(&mut rng, 0.1, 0.7);
            let [a, bb, s, t] = [0; 4].map(|_| polar(&mut rng, 0.2, 1.5));
            if (a * bb * s * t / q).norm() > 0.8 {
                continue;
            }
            let base = QBase::new(q).unwrap();
            let rhs = prod(&[a * s, a * t, bb * s, bb * t], q) / prod(&[a * bb * s * t / q], q);
            let f_st = wide_poch("(as,at;q)_inf", vec![s, t], q);
            let f_ts = wide_poch("(at,as;q)_inf", vec![t, s], q);
            let v = apply_e(&f_st, &deep(bb), a, &base).unwrap();
            assert!(
                residual(v.value, rhs) <= 1e-9,
                "{} vs {rhs} ({} terms)",
                v.value,
                v.terms
            );
            let v = v.value;
            let swapped = apply_e(&f_ts, &deep(bb), a, &base).unwrap().value;
            assert!(residual(v, swapped) <= 1e-9);
            let ab = apply_e(&f_st, &deep(a), bb, &base).unwrap().value;
            assert!(residual(v, ab) <= 1e-9);
            n += 1;
        }
    }

    #[test]
    fn non_decaying_series_is_reported() {
        let b = QBase::real(0.5).unwrap();
        // b far outside the decay region: the first terms grow
        let f = ParamFunction::new("exp(40/a)", |a: Complex| Ok((c(40.0) / a).exp()));
        let err = apply_e(&f, &OperatorPolicy::with_order(c(50.0), 6).unwrap(), c(0.9), &b).unwrap_err();
        assert!(matches!(err, QError::NoDecay | QError::DepthLimit(_)));
        assert!(OperatorPolicy::with_order(c(1.0), 0).is_err());
    }
}
