//! Evaluation of unilateral `r phi s` and bilateral `r psi s` series.
//!
//! Terms are generated from the ratio of consecutive terms, so each step
//! costs `O(r + s)` operations. A bilateral series is summed as two
//! independent one-sided tails (`k >= 0` and `k < 0`), each of which has a
//! geometric majorant inside the convergence annulus.

mod dougall;

pub use dougall::{eval_dougall, DougallResult, DOUGALL_TOL};

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::qcore::{is_vanishing, QBase, POLE_TOL};
use crate::sum::CompensatedSum;
use crate::Complex;

/// Smallest relative distance `|1 - x| / (1 + |x|)` of a denominator factor
/// below which a result is reported as [`Verdict::PoleAdjacent`].
pub const ADJACENT_MARGIN: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Unilateral,
    Bilateral,
}

/// Parameters of a `r phi s` or `r psi s` series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub upper: Vec<Complex>,
    pub lower: Vec<Complex>,
    pub z: Complex,
    pub base: QBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converged,
    Terminated,
    Diverged,
    PoleAdjacent,
}

impl Verdict {
    /// Converged or terminated: the value is trustworthy.
    pub fn is_ok(self) -> bool {
        matches!(self, Verdict::Converged | Verdict::Terminated)
    }
}

/// Result of summing a series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex,
    /// Bound on the truncation error of the summed tails.
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub verdict: Verdict,
    /// Sum of the moduli of all terms; `magnitude / |value|` measures cancellation.
    pub magnitude: f64,
    /// Smallest relative distance of a denominator factor from zero.
    pub pole_margin: f64,
}

/// Annulus `inner < |z| < outer` in which a series converges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceDomain {
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl ConvergenceDomain {
    pub fn contains(&self, z: Complex) -> bool {
        let r = z.norm();
        self.inner_radius < r && r < self.outer_radius
    }

    pub fn is_empty(&self) -> bool {
        !(self.inner_radius < self.outer_radius)
    }
}

/// Knobs for the summation loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesOptions {
    /// Absolute tolerance on the truncation error (split between the two
    /// tails of a bilateral series).
    pub tol: f64,
    /// Maximum number of terms per tail.
    pub max_terms: usize,
    /// Largest observed term ratio accepted for the geometric tail bound.
    pub max_ratio: f64,
}

impl SeriesOptions {
    pub const DEFAULT_MAX_TERMS: usize = 100_000;
    pub const DEFAULT_MAX_RATIO: f64 = 0.9;

    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            max_terms: Self::DEFAULT_MAX_TERMS,
            max_ratio: Self::DEFAULT_MAX_RATIO,
        }
    }
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self::with_tol(1e-14)
    }
}

/// `n` with `x = q^n` (to within [`POLE_TOL`]), if one exists.
pub fn q_power_index(x: Complex, base: &QBase) -> Option<i64> {
    let lq = base.q().norm().ln();
    if x.norm() == 0.0 || lq == 0.0 || !lq.is_finite() {
        return None;
    }
    let n = (x.norm().ln() / lq).round();
    if n.abs() > 100_000.0 {
        return None;
    }
    let n = n as i64;
    is_vanishing(x * base.pow(-n)).then_some(n)
}

fn margin_of(x: Complex) -> f64 {
    (Complex::new(1.0, 0.0) - x).norm() / (1.0 + x.norm())
}

enum Step {
    Ratio { ratio: Complex, margin: f64 },
    Terminate,
    Pole,
}

struct Tail {
    sum: CompensatedSum,
    terms: usize,
    bound: f64,
    verdict: Verdict,
    margin: f64,
}

/// Sums `t_0 (optionally), t_1, ...` where `t_{k+1} = t_k * step(k)`.
///
/// Stops once three consecutive ratios are at most the acceptance
/// threshold and `|t| rho / (1 - rho) <= tol`, with `rho` the largest of the
/// recent ratios and the known limiting ratio. The threshold is
/// `opts.max_ratio`, raised to `(1 + limit) / 2` for a limit inside the disk.
fn sum_tail(
    include_first: bool,
    limit_ratio: f64,
    tol: f64,
    opts: &SeriesOptions,
    max_steps: Option<usize>,
    mut step: impl FnMut(usize) -> Step,
) -> std::result::Result<Tail, usize> {
    let mut t = Complex::new(1.0, 0.0);
    let mut tail = Tail {
        sum: CompensatedSum::new(),
        terms: 0,
        bound: f64::INFINITY,
        verdict: Verdict::Diverged,
        margin: f64::INFINITY,
    };
    if include_first {
        tail.sum.add(t);
        tail.terms = 1;
    }
    let mut recent = [f64::INFINITY; 3];
    let mut consecutive = 0usize;
    let threshold = if limit_ratio < 1.0 {
        opts.max_ratio.max((1.0 + limit_ratio) / 2.0)
    } else {
        opts.max_ratio
    };
    for k in 0.. {
        if max_steps.is_some_and(|m| k >= m) {
            tail.bound = 0.0;
            tail.verdict = Verdict::Terminated;
            break;
        }
        if k >= opts.max_terms {
            break;
        }
        let (ratio, margin) = match step(k) {
            Step::Terminate => {
                tail.bound = 0.0;
                tail.verdict = Verdict::Terminated;
                break;
            }
            Step::Pole => return Err(k + 1),
            Step::Ratio { ratio, margin } => (ratio, margin),
        };
        tail.margin = tail.margin.min(margin);
        t *= ratio;
        if !t.is_finite() {
            break;
        }
        tail.sum.add(t);
        tail.terms += 1;
        if t == Complex::new(0.0, 0.0) {
            tail.bound = 0.0;
            tail.verdict = Verdict::Converged;
            break;
        }
        let r = ratio.norm();
        recent[k % 3] = r;
        if r <= threshold {
            consecutive += 1;
        } else {
            consecutive = 0;
        }
        if consecutive >= 3 {
            let rho = recent.iter().copied().fold(limit_ratio, f64::max);
            if rho < 1.0 {
                let bound = t.norm() * rho / (1.0 - rho);
                if bound <= tol {
                    tail.bound = bound;
                    tail.verdict = Verdict::Converged;
                    break;
                }
            }
        }
    }
    Ok(tail)
}

impl SeriesSpec {
    pub fn phi(upper: Vec<Complex>, lower: Vec<Complex>, z: Complex, base: QBase) -> Self {
        Self {
            kind: SeriesKind::Unilateral,
            upper,
            lower,
            z,
            base,
        }
    }

    pub fn psi(upper: Vec<Complex>, lower: Vec<Complex>, z: Complex, base: QBase) -> Self {
        Self {
            kind: SeriesKind::Bilateral,
            upper,
            lower,
            z,
            base,
        }
    }

    pub fn r(&self) -> usize {
        self.upper.len()
    }

    pub fn s(&self) -> usize {
        self.lower.len()
    }

    /// Power of `(-1)^k q^{k choose 2}` in the general term.
    pub fn normalization_exponent(&self) -> i64 {
        let (r, s) = (self.r() as i64, self.s() as i64);
        match self.kind {
            SeriesKind::Unilateral => 1 + s - r,
            SeriesKind::Bilateral => s - r,
        }
    }

    /// The positive side stops at a zero numerator: some upper parameter is `q^{-m}`.
    pub fn terminates_above(&self) -> bool {
        self.upper
            .iter()
            .any(|&a| q_power_index(a, &self.base).is_some_and(|n| n <= 0))
    }

    /// The negative side vanishes identically: some lower parameter is `q^{m+1}`.
    pub fn terminates_below(&self) -> bool {
        self.kind == SeriesKind::Bilateral
            && self
                .lower
                .iter()
                .any(|&b| q_power_index(b, &self.base).is_some_and(|n| n >= 1))
    }

    /// Annulus of convergence in `|z|`.
    ///
    /// For a bilateral series the negative side is geometric with ratio
    /// `|b_1...b_s / (a_1...a_r z)|` (zero parameters dropped) when the
    /// numbers of vanishing upper and lower parameters agree; more vanishing
    /// lower parameters give super-geometric decay, more vanishing upper ones
    /// divergence.
    pub fn domain(&self) -> Result<ConvergenceDomain> {
        let e = self.normalization_exponent();
        let outer = if self.terminates_above() || e >= 1 {
            f64::INFINITY
        } else if e == 0 {
            1.0
        } else {
            0.0
        };
        let inner = match self.kind {
            SeriesKind::Unilateral => 0.0,
            SeriesKind::Bilateral => {
                if self.r() > self.s() {
                    return Err(QError::UnsupportedSeries(format!(
                        "bilateral series needs r <= s, got r = {}, s = {}",
                        self.r(),
                        self.s()
                    )));
                }
                if self.terminates_below() {
                    0.0
                } else {
                    let zero = Complex::new(0.0, 0.0);
                    let zu = self.upper.iter().filter(|&&a| a == zero).count();
                    let zl = self.lower.iter().filter(|&&b| b == zero).count();
                    match zl.cmp(&zu) {
                        std::cmp::Ordering::Greater => 0.0,
                        std::cmp::Ordering::Less => f64::INFINITY,
                        std::cmp::Ordering::Equal => {
                            let num: Complex = self.lower.iter().filter(|&&b| b != zero).product();
                            let den: Complex = self.upper.iter().filter(|&&a| a != zero).product();
                            (num / den).norm()
                        }
                    }
                }
            }
        };
        Ok(ConvergenceDomain {
            inner_radius: inner,
            outer_radius: outer,
        })
    }

    /// Ratio `t_{k+1} / t_k` on the side `k >= 0`.
    fn step_up(&self, qk: Complex) -> Step {
        let one = Complex::new(1.0, 0.0);
        let mut num = one;
        for &a in &self.upper {
            let x = a * qk;
            if is_vanishing(x) {
                return Step::Terminate;
            }
            num *= one - x;
        }
        let mut den = one;
        let mut margin = f64::INFINITY;
        for &b in &self.lower {
            let x = b * qk;
            let m = margin_of(x);
            if m < POLE_TOL {
                return Step::Pole;
            }
            margin = margin.min(m);
            den *= one - x;
        }
        if self.kind == SeriesKind::Unilateral {
            den *= one - qk * self.base.q();
        }
        let e = self.normalization_exponent();
        let norm = if e == 0 { one } else { (-qk).powi(e as i32) };
        Step::Ratio {
            ratio: num / den * norm * self.z,
            margin,
        }
    }

    /// Ratio `t_{-k-1} / t_{-k}` on the side `k < 0`, with `p = q^{k+1}`:
    /// `(-1)^{s-r} prod (p - b_j) / prod (p - a_i) / z`.
    fn step_down(&self, p: Complex) -> Step {
        let mut num = Complex::new(1.0, 0.0);
        for &b in &self.lower {
            if (p - b).norm() < POLE_TOL * (p.norm() + b.norm()) {
                return Step::Terminate;
            }
            num *= p - b;
        }
        let mut den = Complex::new(1.0, 0.0);
        let mut margin = f64::INFINITY;
        for &a in &self.upper {
            let m = (p - a).norm() / (p.norm() + a.norm());
            if m < POLE_TOL {
                return Step::Pole;
            }
            margin = margin.min(m);
            den *= p - a;
        }
        let sign = if (self.s() as i64 - self.r() as i64) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        Step::Ratio {
            ratio: sign * num / (den * self.z),
            margin,
        }
    }

    fn sum_up(&self, tol: f64, opts: &SeriesOptions, limit: f64) -> Result<Tail> {
        let q = self.base.q();
        let mut qk = Complex::new(1.0, 0.0);
        sum_tail(true, limit, tol, opts, None, |_| {
            let s = self.step_up(qk);
            qk *= q;
            s
        })
        .map_err(|k| QError::DenominatorPole(k as i64))
    }

    fn sum_down(&self, tol: f64, opts: &SeriesOptions, limit: f64, max_steps: Option<usize>) -> Result<Tail> {
        let q = self.base.q();
        let mut p = q;
        sum_tail(false, limit, tol, opts, max_steps, |_| {
            let s = self.step_down(p);
            p *= q;
            s
        })
        .map_err(|k| QError::DenominatorPole(-(k as i64)))
    }

    /// The first `n` terms `t_0, ..., t_{n-1}` generated by the term recurrence.
    pub fn recurrence_terms(&self, n: usize) -> Vec<Complex> {
        let q = self.base.q();
        let mut out = Vec::with_capacity(n);
        let mut t = Complex::new(1.0, 0.0);
        let mut qk = Complex::new(1.0, 0.0);
        for _ in 0..n {
            out.push(t);
            t = match self.step_up(qk) {
                Step::Ratio { ratio, .. } => t * ratio,
                Step::Terminate => Complex::new(0.0, 0.0),
                Step::Pole => Complex::new(f64::INFINITY, 0.0),
            };
            qk *= q;
        }
        out
    }

    /// Terms `t_{-1}, ..., t_{-n}` of a bilateral series from the recurrence.
    pub fn recurrence_terms_below(&self, n: usize) -> Vec<Complex> {
        let q = self.base.q();
        let mut out = Vec::with_capacity(n);
        let mut t = Complex::new(1.0, 0.0);
        let mut p = q;
        for _ in 0..n {
            t = match self.step_down(p) {
                Step::Ratio { ratio, .. } => t * ratio,
                Step::Terminate => Complex::new(0.0, 0.0),
                Step::Pole => Complex::new(f64::INFINITY, 0.0),
            };
            out.push(t);
            p *= q;
        }
        out
    }
}

fn combine(tails: &[&Tail]) -> EvalResult {
    let value: Complex = tails.iter().map(|t| t.sum.value()).sum();
    let magnitude = tails.iter().map(|t| t.sum.magnitude()).sum();
    let margin = tails.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min);
    let verdict = if tails.iter().any(|t| t.verdict == Verdict::Diverged) {
        Verdict::Diverged
    } else if margin < ADJACENT_MARGIN {
        Verdict::PoleAdjacent
    } else if tails.iter().all(|t| t.verdict == Verdict::Terminated) {
        Verdict::Terminated
    } else {
        Verdict::Converged
    };
    EvalResult {
        value,
        abs_error_estimate: tails.iter().map(|t| t.bound).sum(),
        terms_used: tails.iter().map(|t| t.terms).sum(),
        verdict,
        magnitude,
        pole_margin: margin,
    }
}

/// Sums a unilateral series `r phi s`.
pub fn eval_phi(spec: &SeriesSpec, tol: f64) -> Result<EvalResult> {
    eval_phi_with(spec, &SeriesOptions::with_tol(tol))
}

pub fn eval_phi_with(spec: &SeriesSpec, opts: &SeriesOptions) -> Result<EvalResult> {
    if spec.kind != SeriesKind::Unilateral {
        return Err(QError::UnsupportedSeries("eval_phi needs a unilateral series".into()));
    }
    let domain = spec.domain()?;
    let rz = spec.z.norm();
    if rz != 0.0 && rz >= domain.outer_radius {
        return Err(QError::Diverged(format!(
            "|z| = {rz} is not below the radius of convergence {}",
            domain.outer_radius
        )));
    }
    let limit = if domain.outer_radius.is_finite() {
        rz / domain.outer_radius
    } else {
        0.0
    };
    let up = spec.sum_up(opts.tol, opts, limit)?;
    Ok(combine(&[&up]))
}

/// Sums a bilateral series `r psi s` (with `r <= s`) inside its annulus.
pub fn eval_psi(spec: &SeriesSpec, tol: f64) -> Result<EvalResult> {
    eval_psi_with(spec, &SeriesOptions::with_tol(tol))
}

pub fn eval_psi_with(spec: &SeriesSpec, opts: &SeriesOptions) -> Result<EvalResult> {
    let (up_limit, down_limit) = bilateral_limits(spec)?;
    let up = spec.sum_up(opts.tol / 2.0, opts, up_limit)?;
    let down = spec.sum_down(opts.tol / 2.0, opts, down_limit, None)?;
    Ok(combine(&[&up, &down]))
}

fn bilateral_limits(spec: &SeriesSpec) -> Result<(f64, f64)> {
    if spec.kind != SeriesKind::Bilateral {
        return Err(QError::UnsupportedSeries(
            "bilateral evaluation needs a bilateral series".into(),
        ));
    }
    let domain = spec.domain()?;
    if !domain.contains(spec.z) {
        return Err(QError::OutsideAnnulus {
            modulus: spec.z.norm(),
            inner: domain.inner_radius,
            outer: domain.outer_radius,
        });
    }
    let rz = spec.z.norm();
    let up = if domain.outer_radius.is_finite() {
        rz / domain.outer_radius
    } else {
        0.0
    };
    Ok((up, domain.inner_radius / rz))
}

/// Sums the semi-finite series `sum_{k = -m}^{inf}` of a bilateral term.
///
/// Only the positive side needs to converge; the `m` negative terms are
/// added exactly.
pub fn eval_psi_shifted(spec: &SeriesSpec, m: usize, tol: f64) -> Result<EvalResult> {
    eval_psi_shifted_with(spec, m, &SeriesOptions::with_tol(tol))
}

pub fn eval_psi_shifted_with(spec: &SeriesSpec, m: usize, opts: &SeriesOptions) -> Result<EvalResult> {
    if spec.kind != SeriesKind::Bilateral {
        return Err(QError::UnsupportedSeries(
            "shifted evaluation needs a bilateral series".into(),
        ));
    }
    let domain = spec.domain()?;
    let rz = spec.z.norm();
    if rz >= domain.outer_radius {
        return Err(QError::OutsideAnnulus {
            modulus: rz,
            inner: 0.0,
            outer: domain.outer_radius,
        });
    }
    let up_limit = if domain.outer_radius.is_finite() {
        rz / domain.outer_radius
    } else {
        0.0
    };
    let up = spec.sum_up(opts.tol, opts, up_limit)?;
    let down = spec.sum_down(opts.tol, opts, 0.0, Some(m))?;
    let mut out = combine(&[&up, &down]);
    if up.verdict == Verdict::Converged && out.verdict == Verdict::Terminated {
        out.verdict = Verdict::Converged;
    }
    Ok(out)
}

/// Sums `sum_{k >= 0} term(k)` for an arbitrary term function, using the
/// observed term ratios for the tail bound.
pub fn sum_unilateral_terms(term: impl Fn(i64) -> Result<Complex>, opts: &SeriesOptions) -> Result<EvalResult> {
    let tail = sum_closure(&term, 1, opts)?;
    Ok(combine(&[&tail]))
}

/// Sums `sum_{k in Z} term(k)`; both tails must decay at least geometrically.
pub fn sum_bilateral_terms(term: impl Fn(i64) -> Result<Complex>, opts: &SeriesOptions) -> Result<EvalResult> {
    let half = SeriesOptions {
        tol: opts.tol / 2.0,
        ..*opts
    };
    let up = sum_closure(&term, 1, &half)?;
    let down = sum_closure(&|k| term(-k), -1, &half)?;
    // `down` includes k = 0 a second time
    let mut out = combine(&[&up, &down]);
    out.value -= term(0)?;
    out.magnitude -= term(0)?.norm();
    Ok(out)
}

fn sum_closure(term: &dyn Fn(i64) -> Result<Complex>, sign: i64, opts: &SeriesOptions) -> Result<Tail> {
    let mut sum = CompensatedSum::new();
    let mut t = term(0)?;
    sum.add(t);
    let mut recent = [f64::INFINITY; 3];
    let mut consecutive = 0usize;
    let mut terms = 1usize;
    for k in 1..=opts.max_terms as i64 {
        let next = term(k)?;
        if !next.is_finite() {
            return Err(QError::DenominatorPole(sign * k));
        }
        sum.add(next);
        terms += 1;
        if next == Complex::new(0.0, 0.0) && t == Complex::new(0.0, 0.0) {
            return Ok(Tail {
                sum,
                terms,
                bound: 0.0,
                verdict: Verdict::Converged,
                margin: f64::INFINITY,
            });
        }
        let r = if t == Complex::new(0.0, 0.0) {
            f64::INFINITY
        } else {
            next.norm() / t.norm()
        };
        recent[k as usize % 3] = r;
        consecutive = if r <= opts.max_ratio { consecutive + 1 } else { 0 };
        t = next;
        if consecutive >= 3 {
            let rho = recent.iter().copied().fold(0.0, f64::max);
            let bound = t.norm() * rho / (1.0 - rho);
            if bound <= opts.tol {
                return Ok(Tail {
                    sum,
                    terms,
                    bound,
                    verdict: Verdict::Converged,
                    margin: f64::INFINITY,
                });
            }
        }
    }
    Ok(Tail {
        sum,
        terms,
        bound: f64::INFINITY,
        verdict: Verdict::Diverged,
        margin: f64::INFINITY,
    })
}
