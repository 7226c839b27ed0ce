//! Registry of two-sided identities between q-series and products.
//!
//! Each [`Identity`] names its free parameters with a sampling region, the
//! convergence constraints both sides rely on, and an evaluator returning
//! the two sides as sums of terms. Derived arguments (such as `z = q/a`)
//! are computed by the evaluator and are not sampled.
//!
//! Evaluators compute every side term by term in the order it is written,
//! including both halves of an `idem(x; y)` pair; nothing is simplified.

mod andrews;
mod classical;
mod context;
mod expansion;
mod unilateral;
mod wellpoised;

use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::Complex;

pub use andrews::{
    alpha_two_term, andrews, andrews_limit, andrews_limit_products, andrews_shifted, askey_from_inversion,
    askey_two_term, augmented_two_term, inverted_alpha_two_term, slater_from_alpha, slater_image_terms,
    slater_two_term, SlaterImage, ANDREWS_SHIFTS,
};
pub use classical::{augmentation_double, augmentation_single, dougall, OPERATOR_ORDER};
pub use context::{EvalContext, Term, POLE_GUARD};
pub use expansion::{
    exton, heine_expansion, product_plus_sum, shifted_three_phi_two, slater_first, slater_second, three_phi_two_limit,
    two_phi_expansion, two_phi_expansion_rhs, SHIFTED_3PHI2_M,
};
pub use unilateral::{
    cauchy_binomial, d_independent, d_independent_bracket, heine, q_gauss, three_term, three_term_at_aq,
    three_term_companion, three_term_companion_rhs, two_phi_bracket,
};
pub use wellpoised::{
    product_sum, product_sum_quotient, product_sum_quotient_sides, symmetric_product_sum, well_poised_one_term,
    well_poised_two_term,
};

/// Default residual tolerance for q-identities.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Smallest constraint margin accepted when sampling.
pub const SAMPLING_MARGIN: f64 = 0.12;
/// Rejection-sampling attempts per point.
pub const MAX_REJECTIONS: usize = 1000;
/// Points whose sides are both this much smaller than their summands are
/// resampled.
pub const CANCELLATION_LIMIT: f64 = 1e-8;

/// How a modulus range is turned into a complex value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    /// Uniform modulus, uniform phase.
    Complex,
    /// Uniform modulus on the positive real axis.
    RealPositive,
}

/// Sampling region of one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    /// `lo <= |x| <= hi`, phase according to the identity's [`SampleMode`].
    Modulus { lo: f64, hi: f64 },
    /// Real `x` in `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
}

impl Region {
    pub const DEFAULT: Self = Self::Modulus { lo: 0.3, hi: 2.0 };
    pub const BASE: Self = Self::Modulus { lo: 0.1, hi: 0.6 };

    pub const fn modulus(lo: f64, hi: f64) -> Self {
        Self::Modulus { lo, hi }
    }

    fn draw(&self, mode: SampleMode, rng: &mut impl Rng) -> Complex {
        match *self {
            Self::Modulus { lo, hi } => {
                let r = rng.gen_range(lo..=hi);
                match mode {
                    SampleMode::Complex => {
                        Complex::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                    }
                    SampleMode::RealPositive => Complex::new(r, 0.0),
                }
            }
            Self::Interval { lo, hi } => Complex::new(rng.gen_range(lo..=hi), 0.0),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Modulus { lo, hi } => write!(f, "{lo} <= |x| <= {hi}"),
            Self::Interval { lo, hi } => write!(f, "{lo} <= x <= {hi}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Param {
    pub name: &'static str,
    pub region: Region,
}

pub const fn param(name: &'static str, region: Region) -> Param {
    Param { name, region }
}

/// A convergence or admissibility condition, as a margin that is positive
/// exactly when the condition holds.
#[derive(Clone, Copy)]
pub struct Constraint {
    pub description: &'static str,
    margin: fn(&Point) -> f64,
    /// Margin a sampled point must reach.
    pub sampling_margin: f64,
}

impl Constraint {
    pub const fn new(description: &'static str, margin: fn(&Point) -> f64) -> Self {
        Self {
            description,
            margin,
            sampling_margin: SAMPLING_MARGIN,
        }
    }

    pub const fn with_sampling_margin(mut self, m: f64) -> Self {
        self.sampling_margin = m;
        self
    }

    pub fn margin(&self, p: &Point) -> f64 {
        (self.margin)(p)
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description)
    }
}

/// Margin of `|x| < 1`.
pub fn inside_unit(x: Complex) -> f64 {
    1.0 - x.norm()
}

/// Margin of `|inner| < |outer|`.
pub fn smaller(inner: Complex, outer: Complex) -> f64 {
    1.0 - inner.norm() / outer.norm()
}

/// Concrete parameter values together with the base `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub q: Complex,
    pub names: Vec<String>,
    pub values: Vec<Complex>,
}

impl Point {
    pub fn new(q: Complex, params: &[(&str, Complex)]) -> Self {
        Self {
            q,
            names: params.iter().map(|(n, _)| n.to_string()).collect(),
            values: params.iter().map(|&(_, v)| v).collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<Complex> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    /// The same point with the values of `x` and `y` exchanged.
    pub fn swapped(&self, x: &str, y: &str) -> Self {
        let mut out = self.clone();
        let (i, j) = (self.position(x), self.position(y));
        out.values.swap(i, j);
        out
    }

    /// The same point with `name` replaced.
    pub fn with(&self, name: &str, value: Complex) -> Self {
        let mut out = self.clone();
        let i = self.position(name);
        out.values[i] = value;
        out
    }

    fn position(&self, name: &str) -> usize {
        self.names
            .iter()
            .position(|n| n == name)
            .unwrap_or_else(|| panic!("point has no parameter `{name}`"))
    }
}

impl Index<&str> for Point {
    type Output = Complex;

    fn index(&self, name: &str) -> &Complex {
        &self.values[self.position(name)]
    }
}

/// `expr + idem(x; y)`: the expression followed by its copy with `x` and `y`
/// interchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdemExpansion {
    pub x: &'static str,
    pub y: &'static str,
}

impl IdemExpansion {
    pub const fn new(x: &'static str, y: &'static str) -> Self {
        Self { x, y }
    }

    /// Evaluates both copies.
    pub fn expand(
        &self,
        p: &Point,
        cx: &mut EvalContext,
        expr: impl Fn(&Point, &mut EvalContext) -> Result<Term>,
    ) -> Result<[Term; 2]> {
        Ok([expr(p, cx)?, expr(&p.swapped(self.x, self.y), cx)?])
    }
}

/// One side of an identity, as the sum of its terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub value: Complex,
    pub abs_error: f64,
    /// Sum of the moduli of the terms.
    pub magnitude: f64,
}

impl Side {
    pub fn of(terms: &[Term]) -> Self {
        let mut out = Self {
            value: Complex::new(0.0, 0.0),
            abs_error: 0.0,
            magnitude: 0.0,
        };
        for t in terms {
            out.value += t.value;
            out.abs_error += t.abs_error;
            out.magnitude += t.value.norm();
        }
        out.abs_error += f64::EPSILON * out.magnitude;
        out
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.magnitude.is_finite()
    }
}

/// `|L - R| / (|L| + |R| + 1)`.
pub fn residual(lhs: Complex, rhs: Complex) -> f64 {
    (lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub lhs: Side,
    pub rhs: Side,
    pub residual: f64,
    pub terms_used: usize,
}

impl Evaluation {
    /// `min(|L|, |R|) / max(magnitude)`: how far both sides fall below
    /// their largest summands.
    pub fn cancellation(&self) -> f64 {
        let scale = self.lhs.magnitude.max(self.rhs.magnitude);
        if scale == 0.0 {
            return 1.0;
        }
        self.lhs.value.norm().min(self.rhs.value.norm()) / scale
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.cancellation() < CANCELLATION_LIMIT
    }
}

type Evaluator = Arc<dyn Fn(&Point, &mut EvalContext) -> Result<(Side, Side)> + Send + Sync>;

/// A registered identity.
#[derive(Clone)]
pub struct Identity {
    pub id: String,
    pub name: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub params: Vec<Param>,
    /// Region of the base `q`; `None` for identities without a base.
    pub base: Option<Region>,
    pub mode: SampleMode,
    pub constraints: Vec<Constraint>,
    pub tol: f64,
    /// Fixed integer parameters baked into the evaluator, such as a shift.
    pub fixed: Vec<(&'static str, i64)>,
    eval: Evaluator,
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Identity")
            .field("id", &self.id)
            .field("name", &self.name)
            .finish()
    }
}

impl Identity {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        id: impl Into<String>,
        name: &'static str,
        lhs: &'static str,
        rhs: &'static str,
        params: Vec<Param>,
        constraints: Vec<Constraint>,
        eval: impl Fn(&Point, &mut EvalContext) -> Result<(Side, Side)> + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            name,
            lhs,
            rhs,
            params,
            base: Some(Region::BASE),
            mode: SampleMode::Complex,
            constraints,
            tol: DEFAULT_TOL,
            fixed: Vec::new(),
            eval: Arc::new(eval),
        }
    }

    pub(crate) fn with_base(mut self, base: Option<Region>) -> Self {
        self.base = base;
        self
    }

    pub(crate) fn with_mode(mut self, mode: SampleMode) -> Self {
        self.mode = mode;
        self
    }

    pub(crate) fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub(crate) fn with_fixed(mut self, name: &'static str, value: i64) -> Self {
        self.fixed.push((name, value));
        self
    }

    /// Fixed integer parameter, such as the shift `m`.
    pub fn fixed(&self, name: &str) -> Option<i64> {
        self.fixed.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }

    /// First violated constraint, if any.
    pub fn violated(&self, p: &Point) -> Option<&Constraint> {
        self.constraints.iter().find(|c| !(c.margin(p) > 0.0))
    }

    /// Draws an admissible point with every constraint margin at least its
    /// sampling margin.
    pub fn sample(&self, rng: &mut impl Rng) -> Result<Point> {
        for _ in 0..MAX_REJECTIONS {
            let q = self.base.map_or(Complex::new(0.0, 0.0), |r| r.draw(self.mode, rng));
            let p = Point {
                q,
                names: self.params.iter().map(|p| p.name.to_string()).collect(),
                values: self.params.iter().map(|p| p.region.draw(self.mode, rng)).collect(),
            };
            if self.constraints.iter().all(|c| c.margin(&p) >= c.sampling_margin) {
                return Ok(p);
            }
        }
        Err(QError::SamplingExhausted(MAX_REJECTIONS))
    }

    /// Evaluates both sides at an admissible point.
    pub fn evaluate(&self, p: &Point) -> Result<Evaluation> {
        if let Some(c) = self.violated(p) {
            return Err(QError::InadmissiblePoint(c.description.to_string()));
        }
        let mut cx = match self.base {
            Some(_) => EvalContext::new(p.q)?,
            None => EvalContext::without_base(),
        };
        let (lhs, rhs) = (self.eval)(p, &mut cx)?;
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(QError::PoleAdjacent("non-finite side".into()));
        }
        Ok(Evaluation {
            lhs,
            rhs,
            residual: residual(lhs.value, rhs.value),
            terms_used: cx.terms_used(),
        })
    }
}

/// Serializable description of a registered identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    /// `(name, region)` of each sampled parameter.
    pub params: Vec<(String, Region)>,
    pub base: Option<Region>,
    pub mode: SampleMode,
    pub constraints: Vec<String>,
    pub tol: f64,
    pub fixed: Vec<(String, i64)>,
}

impl Identity {
    pub fn manifest(&self) -> ManifestEntry {
        ManifestEntry {
            id: self.id.clone(),
            name: self.name.into(),
            lhs: self.lhs.into(),
            rhs: self.rhs.into(),
            params: self.params.iter().map(|p| (p.name.into(), p.region)).collect(),
            base: self.base,
            mode: self.mode,
            constraints: self.constraints.iter().map(|c| c.description.into()).collect(),
            tol: self.tol,
            fixed: self.fixed.iter().map(|&(n, v)| (n.into(), v)).collect(),
        }
    }
}

/// Every registered identity, ordered by id.
pub fn registry() -> Vec<Identity> {
    let mut all = vec![
        q_gauss(),
        cauchy_binomial(),
        heine(),
        slater_first(),
        slater_second(),
        three_term(),
        two_phi_expansion(),
        three_term_companion(),
        d_independent(),
        d_independent_bracket(),
        three_term_at_aq(),
        heine_expansion(),
        exton(),
        well_poised_two_term(),
        well_poised_one_term(),
        symmetric_product_sum(),
        product_sum(),
        product_sum_quotient(),
        product_plus_sum(),
        andrews(),
        andrews_limit(),
        andrews_limit_products(),
        alpha_two_term(),
        augmented_two_term(),
        askey_two_term(),
        askey_from_inversion(),
        inverted_alpha_two_term(),
        slater_two_term(),
        slater_from_alpha(),
        three_phi_two_limit(),
        dougall(),
        augmentation_single(),
        augmentation_double(),
    ];
    all.extend(ANDREWS_SHIFTS.iter().map(|&m| andrews_shifted(m)));
    all.extend(SHIFTED_3PHI2_M.iter().map(|&m| shifted_three_phi_two(m)));
    all.sort_by(|a, b| a.id.cmp(&b.id));
    all
}

pub fn lookup(id: &str) -> Result<Identity> {
    registry()
        .into_iter()
        .find(|i| i.id == id)
        .ok_or_else(|| QError::UnknownIdentity(id.to_string()))
}

#[cfg(test)]
mod tests;
