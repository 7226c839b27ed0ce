use crate::error::{QError, Result};
use crate::qcore::{qpoch_multi, Order, PochValue, QBase};
use crate::series::{
    eval_phi_with, eval_psi_shifted_with, eval_psi_with, sum_bilateral_terms, EvalResult, SeriesOptions, SeriesSpec,
    Verdict,
};
use crate::Complex;

/// Denominator factors `1 - x` smaller than this in modulus mark the point
/// as pole-adjacent.
pub const POLE_GUARD: f64 = 1e-6;

/// Truncation tolerance for series inside identity evaluators.
const SERIES_TOL: f64 = 1e-16;

/// A single term of a side, with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub value: Complex,
    pub abs_error: f64,
}

/// Evaluation state for one point: the base, the products and series
/// formed so far, and the relative error accumulated by the current term.
#[derive(Debug)]
pub struct EvalContext {
    base: Option<(QBase, QBase)>,
    opts: SeriesOptions,
    rel_error: f64,
    terms: usize,
}

impl EvalContext {
    pub fn new(q: Complex) -> Result<Self> {
        let base = QBase::new(q)?;
        Ok(Self {
            base: Some((base, base.squared())),
            opts: SeriesOptions::with_tol(SERIES_TOL),
            rel_error: 0.0,
            terms: 0,
        })
    }

    pub fn without_base() -> Self {
        Self {
            base: None,
            opts: SeriesOptions::with_tol(SERIES_TOL),
            rel_error: 0.0,
            terms: 0,
        }
    }

    pub fn base(&self) -> &QBase {
        &self.base.as_ref().expect("identity has a base").0
    }

    fn base2(&self) -> &QBase {
        &self.base.as_ref().expect("identity has a base").1
    }

    pub fn q(&self) -> Complex {
        self.base().q()
    }

    pub fn terms_used(&self) -> usize {
        self.terms
    }

    /// Closes the current term.
    pub fn term(&mut self, value: Complex) -> Term {
        let t = Term {
            value,
            abs_error: value.norm() * (self.rel_error + 16.0 * f64::EPSILON),
        };
        self.rel_error = 0.0;
        t
    }

    /// Takes the relative error accumulated since the last closed term.
    pub fn take_rel(&mut self) -> f64 {
        std::mem::take(&mut self.rel_error)
    }

    /// Adds an externally estimated relative error to the current term.
    pub fn charge(&mut self, rel: f64) {
        self.rel_error += rel;
    }

    pub(crate) fn count_terms(&mut self, n: usize) {
        self.terms += n;
    }

    fn product(&mut self, args: &[Complex], order: Order, squared: bool, denominator: bool) -> Result<Complex> {
        let base = if squared { *self.base2() } else { *self.base() };
        let p: PochValue = qpoch_multi(args, order, &base)?;
        if denominator && (p.is_pole() || p.is_zero() || p.min_factor < POLE_GUARD) {
            return Err(QError::PoleAdjacent(format!("denominator factor {:.1e}", p.min_factor)));
        }
        if p.is_pole() {
            return Err(QError::PoleAdjacent("numerator pole".into()));
        }
        if !p.is_zero() {
            self.rel_error += p.abs_error / p.value.norm() + p.factors as f64 * f64::EPSILON;
        }
        Ok(p.value)
    }

    /// `(args; q)_inf` in a numerator.
    pub fn num(&mut self, args: &[Complex]) -> Result<Complex> {
        self.product(args, Order::Infinite, false, false)
    }

    /// `(args; q)_inf` in a denominator.
    pub fn den(&mut self, args: &[Complex]) -> Result<Complex> {
        self.product(args, Order::Infinite, false, true)
    }

    /// `(args; q^2)_inf` in a numerator.
    pub fn num2(&mut self, args: &[Complex]) -> Result<Complex> {
        self.product(args, Order::Infinite, true, false)
    }

    /// `(args; q^2)_inf` in a denominator.
    pub fn den2(&mut self, args: &[Complex]) -> Result<Complex> {
        self.product(args, Order::Infinite, true, true)
    }

    /// `(args; q)_n` in a numerator.
    pub fn num_n(&mut self, args: &[Complex], n: i64) -> Result<Complex> {
        self.product(args, Order::Finite(n), false, false)
    }

    /// `(args; q)_n` in a denominator.
    pub fn den_n(&mut self, args: &[Complex], n: i64) -> Result<Complex> {
        self.product(args, Order::Finite(n), false, true)
    }

    /// `1 - x` in a denominator.
    pub fn den_factor(&mut self, x: Complex) -> Result<Complex> {
        let f = Complex::new(1.0, 0.0) - x;
        if f.norm() < POLE_GUARD {
            return Err(QError::PoleAdjacent(format!("denominator factor {:.1e}", f.norm())));
        }
        Ok(f)
    }

    /// Accepts a series result, charging its error to the current term.
    pub fn accept(&mut self, r: EvalResult) -> Result<Complex> {
        match r.verdict {
            Verdict::Converged | Verdict::Terminated => {}
            Verdict::PoleAdjacent => {
                return Err(QError::PoleAdjacent(format!(
                    "series denominator margin {:.1e}",
                    r.pole_margin
                )))
            }
            Verdict::Diverged => return Err(QError::Diverged(format!("after {} terms", r.terms_used))),
        }
        self.terms += r.terms_used;
        let scale = r.value.norm().max(f64::MIN_POSITIVE);
        self.rel_error += (r.abs_error_estimate + f64::EPSILON * r.magnitude) / scale;
        Ok(r.value)
    }

    fn series(&mut self, r: Result<EvalResult>) -> Result<Complex> {
        match r {
            Ok(r) => self.accept(r),
            Err(QError::DenominatorPole(k)) => Err(QError::PoleAdjacent(format!("series pole at index {k}"))),
            Err(e @ QError::OutsideAnnulus { .. }) => Err(QError::InadmissiblePoint(e.to_string())),
            Err(e) => Err(e),
        }
    }

    pub fn phi(&mut self, upper: &[Complex], lower: &[Complex], z: Complex) -> Result<Complex> {
        let spec = SeriesSpec::phi(upper.to_vec(), lower.to_vec(), z, *self.base());
        let r = eval_phi_with(&spec, &self.opts);
        self.series(r)
    }

    pub fn psi(&mut self, upper: &[Complex], lower: &[Complex], z: Complex) -> Result<Complex> {
        let spec = SeriesSpec::psi(upper.to_vec(), lower.to_vec(), z, *self.base());
        let r = eval_psi_with(&spec, &self.opts);
        self.series(r)
    }

    /// `sum_{k >= -m}` of a bilateral term.
    pub fn psi_from(&mut self, upper: &[Complex], lower: &[Complex], z: Complex, m: usize) -> Result<Complex> {
        let spec = SeriesSpec::psi(upper.to_vec(), lower.to_vec(), z, *self.base());
        let r = eval_psi_shifted_with(&spec, m, &self.opts);
        self.series(r)
    }

    /// `sum_{k in Z} term(k)` for a term not of hypergeometric form.
    pub fn bilateral(&mut self, term: impl Fn(i64) -> Result<Complex>) -> Result<Complex> {
        let r = sum_bilateral_terms(term, &self.opts);
        self.series(r)
    }

    pub fn options(&self) -> SeriesOptions {
        self.opts
    }
}
