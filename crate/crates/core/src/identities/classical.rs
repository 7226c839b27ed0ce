//! The classical bilateral summation and the two parameter-augmentation
//! relations of `E(b theta)`.

use super::{inside_unit, param, Constraint, EvalContext, Identity, Region, SampleMode, Side, Term};
use crate::error::Result;
use crate::qcore::qpoch_infinite_wide;
use crate::qoperators::{apply_e, OperatorPolicy, ParamFunction};
use crate::series::{eval_dougall, DOUGALL_TOL};
use crate::Complex;

/// Truncation order of `E(b theta)` inside the operator identities.
pub const OPERATOR_ORDER: usize = 400;

/// Constraint margin kept by sampled operator points.
const OPERATOR_MARGIN: f64 = 0.2;

pub fn dougall() -> Identity {
    Identity::new(
        "dougall",
        "Bilateral sum of a ratio of gamma-function products",
        "sum_n Gamma(a + n) Gamma(b + n)/(Gamma(c + n) Gamma(d + n))",
        "pi^2/(sin(pi a) sin(pi b)) Gamma(c + d - a - b - 1)/(Gamma(c - a) Gamma(d - a) Gamma(c - b) Gamma(d - b))",
        vec![
            param("a", Region::Interval { lo: -0.45, hi: 0.45 }),
            param("b", Region::Interval { lo: -0.45, hi: 0.45 }),
            param("c", Region::Interval { lo: 0.55, hi: 2.5 }),
            param("d", Region::Interval { lo: 0.55, hi: 2.5 }),
        ],
        vec![Constraint::new("c + d - a - b - 1 > 0", |p| {
            (p["c"] + p["d"] - p["a"] - p["b"]).re - 1.0
        })],
        |p, cx| {
            let r = eval_dougall(p["a"].re, p["b"].re, p["c"].re, p["d"].re)?;
            cx.count_terms(r.terms_used);
            let l = Term {
                value: Complex::new(r.direct, 0.0),
                abs_error: r.direct_error_estimate,
            };
            let g = Term {
                value: Complex::new(r.gamma_side, 0.0),
                abs_error: 16.0 * f64::EPSILON * r.gamma_side.abs(),
            };
            Ok((Side::of(&[l]), Side::of(&[g])))
        },
    )
    .with_base(None)
    .with_mode(SampleMode::RealPositive)
    .with_tol(DOUGALL_TOL)
}

/// `E(b theta)` applied in `a` to a product of `(a x; q)_inf` over `xs`.
fn augment(cx: &mut EvalContext, xs: Vec<Complex>, a: Complex, b: Complex) -> Result<Term> {
    let base = *cx.base();
    let f = ParamFunction::wide("(a x1, ..., a xn; q)_inf", move |a| {
        xs.iter()
            .try_fold(crate::qcore::WideComplex::new(Complex::new(1.0, 0.0)), |acc, &x| {
                Ok(acc * qpoch_infinite_wide(a * x, &base)?)
            })
    });
    let v = apply_e(&f, &OperatorPolicy::with_order(b, OPERATOR_ORDER)?, a, &base)?;
    cx.count_terms(v.terms);
    cx.charge(v.abs_error / v.value.norm().max(f64::MIN_POSITIVE));
    Ok(cx.term(v.value))
}

fn operator_base() -> Option<Region> {
    Some(Region::modulus(0.1, 0.7))
}

pub fn augmentation_single() -> Identity {
    Identity::new(
        "op-o1",
        "E(b theta) on a single infinite product",
        "E(b theta){(at; q)_inf}",
        "(at, bt; q)_inf",
        vec![
            param("a", Region::DEFAULT),
            param("b", Region::DEFAULT),
            param("t", Region::modulus(0.1, 1.5)),
        ],
        vec![Constraint::new("|bt| < 1", |p| inside_unit(p["b"] * p["t"])).with_sampling_margin(OPERATOR_MARGIN)],
        |p, cx| {
            let (a, b, t) = (p["a"], p["b"], p["t"]);
            let l = augment(cx, vec![t], a, b)?;
            let r = cx.num(&[a * t, b * t])?;
            let r = cx.term(r);
            Ok((Side::of(&[l]), Side::of(&[r])))
        },
    )
    .with_base(operator_base())
}

pub fn augmentation_double() -> Identity {
    Identity::new(
        "op-o2",
        "E(b theta) on a product of two infinite products",
        "E(b theta){(as, at; q)_inf}",
        "(as, at, bs, bt; q)_inf/(abst/q; q)_inf",
        vec![
            param("a", Region::DEFAULT),
            param("b", Region::DEFAULT),
            param("s", Region::modulus(0.1, 1.5)),
            param("t", Region::modulus(0.1, 1.5)),
        ],
        vec![
            Constraint::new("|abst/q| < 1", |p| inside_unit(p["a"] * p["b"] * p["s"] * p["t"] / p.q))
                .with_sampling_margin(OPERATOR_MARGIN),
        ],
        |p, cx| {
            let q = cx.q();
            let (a, b, s, t) = (p["a"], p["b"], p["s"], p["t"]);
            let l = augment(cx, vec![s, t], a, b)?;
            let r = cx.num(&[a * s, a * t, b * s, b * t])? / cx.den(&[a * b * s * t / q])?;
            let r = cx.term(r);
            Ok((Side::of(&[l]), Side::of(&[r])))
        },
    )
    .with_base(operator_base())
}
