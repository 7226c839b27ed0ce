//! The classical bilateral sum `sum_k (a)_k (b)_k / ((c)_k (d)_k)` and its
//! gamma-function closed form.
//!
//! Terms decay only algebraically, like `|k|^{a+b-c-d}`, so the direct sum
//! is taken over symmetric windows `[-K, K]` for `K = K0, 2 K0, 4 K0, ...`
//! and the truncation error is removed by Richardson extrapolation in the
//! known exponents `p - 1, p, p + 1, ...` with `p = c + d - a - b`.

use crate::error::{QError, Result};
use crate::qcore::gamma_real;
use crate::sum::CompensatedSum;
use crate::Complex;

/// Tolerance attainable by the extrapolated direct sum.
pub const DOUGALL_TOL: f64 = 1e-6;

/// Minimum excess decay `delta` in `|t_k| ~ k^{-1-delta}`.
const MIN_EXCESS_DECAY: f64 = 0.1;
const BASE_WINDOW: usize = 4_000;
const LEVELS: usize = 6;
/// Rounding floor of the extrapolated sum, in units of `eps |S|`.
const EXTRAPOLATION_ROUNDING: f64 = 64.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DougallResult {
    /// Extrapolated direct bilateral sum.
    pub direct: f64,
    /// Difference between the last two extrapolation orders.
    pub direct_error_estimate: f64,
    /// Gamma-product closed form.
    pub gamma_side: f64,
    pub terms_used: usize,
}

fn is_integer(x: f64) -> bool {
    x.fract() == 0.0
}

/// Evaluates both sides of the classical bilateral summation at real parameters.
pub fn eval_dougall(a: f64, b: f64, c: f64, d: f64) -> Result<DougallResult> {
    let excess = c + d - a - b - 1.0;
    if !(excess > 0.0) {
        return Err(QError::Diverged(format!(
            "c + d - a - b - 1 = {excess} must be positive"
        )));
    }
    if excess < MIN_EXCESS_DECAY {
        return Err(QError::SlowConvergence(format!(
            "terms decay like k^-{:.3}, slower than k^-{}",
            1.0 + excess,
            1.0 + MIN_EXCESS_DECAY
        )));
    }
    for (name, x) in [("c", c), ("d", d)] {
        if x <= 0.0 && is_integer(x) {
            return Err(QError::InadmissiblePoint(format!(
                "{name} = {x} is a nonpositive integer"
            )));
        }
    }
    for (name, x) in [("a", a), ("b", b)] {
        if x >= 1.0 && is_integer(x) {
            return Err(QError::InadmissiblePoint(format!("{name} = {x} is a positive integer")));
        }
    }

    let gamma_side = gamma_real(c)?
        * gamma_real(d)?
        * gamma_real(1.0 - a)?
        * gamma_real(1.0 - b)?
        * gamma_real(c + d - a - b - 1.0)?
        / (gamma_real(c - a)? * gamma_real(c - b)? * gamma_real(d - a)? * gamma_real(d - b)?);

    // partial sums over [-K, K] at K = BASE_WINDOW * 2^i
    let windows: Vec<usize> = (0..LEVELS).map(|i| BASE_WINDOW << i).collect();
    let last = *windows.last().unwrap();
    let mut partial = Vec::with_capacity(LEVELS);
    let mut sum = CompensatedSum::new();
    sum.add(Complex::new(1.0, 0.0));
    let (mut up, mut down) = (1.0f64, 1.0f64);
    let mut next = windows.iter().peekable();
    for k in 0..last {
        let kf = k as f64;
        // t_{k+1} = t_k (a+k)(b+k) / ((c+k)(d+k))
        up *= (a + kf) * (b + kf) / ((c + kf) * (d + kf));
        // t_{-k-1} = t_{-k} (1-c+k)(1-d+k) / ((1-a+k)(1-b+k))
        down *= (1.0 - c + kf) * (1.0 - d + kf) / ((1.0 - a + kf) * (1.0 - b + kf));
        if !up.is_finite() || !down.is_finite() {
            return Err(QError::DenominatorPole(k as i64 + 1));
        }
        sum.add(Complex::new(up + down, 0.0));
        if next.peek() == Some(&&(k + 1)) {
            partial.push(sum.value().re);
            next.next();
        }
    }

    // S(K) = S + sum_j C_j K^{-(p - 1 + j)}
    let p = excess + 1.0;
    let mut table = partial;
    let mut best = table[0];
    let mut estimate = f64::INFINITY;
    for j in 0..LEVELS - 1 {
        let f = 2f64.powf(p - 1.0 + j as f64);
        table = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        let next = *table.last().unwrap();
        estimate = (next - best).abs();
        best = next;
    }
    // agreement of the last orders cannot certify below rounding
    let rounding = EXTRAPOLATION_ROUNDING * f64::EPSILON * best.abs();
    Ok(DougallResult {
        direct: best,
        direct_error_estimate: estimate.max(rounding),
        gamma_side,
        terms_used: 2 * last + 1,
    })
}
