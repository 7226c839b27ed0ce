//! The Andrews three-term identity, its bilateral extension and parameter
//! augmentation, and the two-term `2 psi 2` summations that follow.

use super::{inside_unit, param, Constraint, EvalContext, Identity, Point, Region, Side, Term};
use crate::error::Result;
use crate::qcore::{qpoch_finite_wide, qpoch_infinite_wide, recip, WideComplex};
use crate::Complex;

const D: Region = Region::DEFAULT;
const NARROW: Region = Region::modulus(0.4, 1.6);

/// Shifts `m` at which the semi-finite Andrews form is registered.
pub const ANDREWS_SHIFTS: [usize; 4] = [0, 1, 3, 5];

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

fn andrews_params() -> Vec<super::Param> {
    vec![
        param("a", Region::modulus(0.3, 1.5)),
        param("b", Region::modulus(0.1, 1.0)),
        param("c", Region::modulus(0.3, 1.5)),
        param("d", Region::modulus(0.3, 1.5)),
        param("f", Region::modulus(0.3, 1.5)),
    ]
}

fn andrews_constraints() -> Vec<Constraint> {
    vec![
        Constraint::new("|bc| < 1", |p| inside_unit(p["b"] * p["c"])),
        Constraint::new("|bd| < 1", |p| inside_unit(p["b"] * p["d"])),
    ]
}

pub fn andrews() -> Identity {
    Identity::new(
        "eq-andrews",
        "Andrews' three-term identity",
        "d sum_n (q/bc, acdf)_n/(ad, df)_{n+1} (bd)^n - c sum_n (q/bd, acdf)_n/(ac, cf)_{n+1} (bc)^n",
        "d (q, qd/c, c/d, abcd, acdf, bcdf)/(ac, ad, bc, bd, cf, df)",
        andrews_params(),
        andrews_constraints(),
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d, f) = (p["a"], p["b"], p["c"], p["d"], p["f"]);
            let mut side = |x: Complex, y: Complex| -> Result<Term> {
                // x carries the prefactor, y the other of c, d
                let pre = x / (cx.den_factor(a * x)? * cx.den_factor(x * f)?);
                let s = cx.phi(&[q / (b * y), a * c * d * f, q], &[a * x * q, x * f * q], b * x)?;
                Ok(cx.term(pre * s))
            };
            let s1 = side(d, c)?;
            let s2 = side(c, d)?;
            let r = d * cx.num(&[q, q * d / c, c / d, a * b * c * d, a * c * d * f, b * c * d * f])?
                / cx.den(&[a * c, a * d, b * c, b * d, c * f, d * f])?;
            let r = cx.term(r);
            let s2 = Term { value: -s2.value, ..s2 };
            Ok((Side::of(&[s1, s2]), Side::of(&[r])))
        },
    )
}

pub fn andrews_shifted(m: usize) -> Identity {
    let mi = m as i64;
    Identity::new(
        format!("eq-andrewm-m{m}"),
        "Andrews' identity with the summation shifted to start at -m",
        "d (q^{1-m}/bc, acdfq^{-2m})_m (bdq^m)^m/((1 - adq^{-m})(1 - dfq^{-m})(adq^{1-m}, dfq^{1-m})_m) \
         sum_{k >= -m} (q/bc, acdfq^{-m})_k/(adq, dfq)_k (bdq^m)^k - (same with c and d interchanged)",
        "d (q, qd/c, c/d, abcd, acdfq^{-2m}, bcdf)/(acq^{-m}, adq^{-m}, bcq^m, bdq^m, cfq^{-m}, dfq^{-m})",
        andrews_params(),
        andrews_constraints(),
        move |p, cx| {
            let q = cx.q();
            let qm = cx.base().pow(mi);
            let qmi = cx.base().pow(-mi);
            let (a, b, c, d, f) = (p["a"], p["b"], p["c"], p["d"], p["f"]);
            let acdf = a * c * d * f;
            let mut side = |x: Complex, y: Complex| -> Result<Term> {
                let z = b * x * qm;
                let pre = x * cx.num_n(&[q * qmi / (b * y), acdf * qmi * qmi], mi)? * z.powi(m as i32)
                    / (cx.den_factor(a * x * qmi)?
                        * cx.den_factor(x * f * qmi)?
                        * cx.den_n(&[a * x * q * qmi, x * f * q * qmi], mi)?);
                let s = cx.psi_from(&[q / (b * y), acdf * qmi], &[a * x * q, x * f * q], z, m)?;
                Ok(cx.term(pre * s))
            };
            let s1 = side(d, c)?;
            let s2 = side(c, d)?;
            let r = d * cx.num(&[q, q * d / c, c / d, a * b * c * d, acdf * qmi * qmi, b * c * d * f])?
                / cx.den(&[
                    a * c * qmi,
                    a * d * qmi,
                    b * c * qm,
                    b * d * qm,
                    c * f * qmi,
                    d * f * qmi,
                ])?;
            let r = cx.term(r);
            let s2 = Term { value: -s2.value, ..s2 };
            Ok((Side::of(&[s1, s2]), Side::of(&[r])))
        },
    )
    .with_fixed("m", mi)
}

fn limit_rhs(p: &Point, cx: &mut EvalContext) -> Result<Term> {
    let q = cx.q();
    let (a, b, c, d, f) = (p["a"], p["b"], p["c"], p["d"], p["f"]);
    let acdf = a * c * d * f;
    let v = a * c * d * d * f * cx.num(&[q, q * d / c, c / d, a * b * c * d, acdf, b * c * d * f, q / acdf])?
        / cx.den(&[
            a * c,
            a * d,
            c * f,
            d * f,
            q / (a * c),
            q / (a * d),
            q / (c * f),
            q / (d * f),
        ])?;
    Ok(cx.term(v))
}

fn limit_params() -> Vec<super::Param> {
    ["a", "b", "c", "d", "f"]
        .into_iter()
        .map(|n| param(n, NARROW))
        .collect()
}

pub fn andrews_limit() -> Identity {
    Identity::new(
        "eq-andrewminf",
        "Bilateral limit of the shifted Andrews identity",
        "c (bc)/(1/ad, 1/df) sum_k (q/bc)_k/(adq, dfq)_k (-abcd^2f)^k q^{k choose 2} \
         - d (bd)/(1/ac, 1/cf) sum_k (q/bd)_k/(acq, cfq)_k (-abc^2df)^k q^{k choose 2}",
        "acd^2f (q, qd/c, c/d, abcd, acdf, bcdf, q/acdf)/(ac, ad, cf, df, q/ac, q/ad, q/cf, q/df)",
        limit_params(),
        Vec::new(),
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d, f) = (p["a"], p["b"], p["c"], p["d"], p["f"]);
            // 1psi2 carries (-1)^k q^{k choose 2}, so z is the unsigned argument
            let mut side = |x: Complex, y: Complex| -> Result<Term> {
                let pre = x * cx.num(&[b * x])? / cx.den(&[one() / (a * y), one() / (y * f)])?;
                let s = cx.psi(&[q / (b * x)], &[a * y * q, y * f * q], a * b * x * y * y * f)?;
                Ok(cx.term(pre * s))
            };
            let s1 = side(c, d)?;
            let s2 = side(d, c)?;
            let s2 = Term { value: -s2.value, ..s2 };
            let r = limit_rhs(p, cx)?;
            Ok((Side::of(&[s1, s2]), Side::of(&[r])))
        },
    )
}

/// `sum_k (xq^{-k})_inf/(uq, vq)_k w^k q^{2 (k choose 2)}`, each term formed
/// in wide arithmetic.
fn product_weighted_sum(cx: &mut EvalContext, x: Complex, u: Complex, v: Complex, w: Complex) -> Result<Complex> {
    let base = *cx.base();
    let q = base.q();
    cx.bilateral(move |k| {
        let n = k.unsigned_abs();
        let t = if k >= 0 {
            let num = qpoch_infinite_wide(x * base.pow(-k), &base)?;
            let den = qpoch_finite_wide(u * q, n as usize, &base) * qpoch_finite_wide(v * q, n as usize, &base);
            let den = den.to_complex();
            num * WideComplex::new(w).powi(n) * WideComplex::new(q).powi(n * n.saturating_sub(1)) * recip(den)
        } else {
            // (uq)_{-n} = 1/(uq^{1-n})_n
            let qn = base.pow(-(n as i64));
            qpoch_infinite_wide(x * base.pow(n as i64), &base)?
                * qpoch_finite_wide(u * q * qn, n as usize, &base)
                * qpoch_finite_wide(v * q * qn, n as usize, &base)
                * WideComplex::new(recip(w)).powi(n)
                * WideComplex::new(q).powi(n * (n + 1))
        };
        Ok(t.to_complex())
    })
}

pub fn andrews_limit_products() -> Identity {
    Identity::new(
        "eq-andrewminfd",
        "Bilateral Andrews limit with the numerator written as an infinite product",
        "c/(1/ad, 1/df) sum_k (bcq^{-k})_inf/(adq, dfq)_k (ad^2fq)^k q^{2 (k choose 2)} \
         - d/(1/ac, 1/cf) sum_k (bdq^{-k})_inf/(acq, cfq)_k (ac^2fq)^k q^{2 (k choose 2)}",
        "acd^2f (q, qd/c, c/d, abcd, acdf, bcdf, q/acdf)/(ac, ad, cf, df, q/ac, q/ad, q/cf, q/df)",
        limit_params(),
        Vec::new(),
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d, f) = (p["a"], p["b"], p["c"], p["d"], p["f"]);
            let mut side = |x: Complex, y: Complex| -> Result<Term> {
                let pre = x / cx.den(&[one() / (a * y), one() / (y * f)])?;
                let s = product_weighted_sum(cx, b * x, a * y, y * f, a * y * y * f * q)?;
                Ok(cx.term(pre * s))
            };
            let s1 = side(c, d)?;
            let s2 = side(d, c)?;
            let s2 = Term { value: -s2.value, ..s2 };
            let r = limit_rhs(p, cx)?;
            Ok((Side::of(&[s1, s2]), Side::of(&[r])))
        },
    )
}

pub fn augmented_two_term() -> Identity {
    Identity::new(
        "eq-2psi22termpsi",
        "Parameter augmentation of the bilateral Andrews limit",
        "c (bc, cg)/(1/ad, 1/df) 2psi2(q/bc, q/cg; adq, dfq; q, Z) \
         - d (bd, dg)/(1/ac, 1/cf) 2psi2(q/bd, q/dg; acq, cfq; q, Z), Z = abc^2d^2fg/q",
        "acd^2f (q, qd/c, c/d, abcd, acdf, acdg, bcdf, q/acdf, cdfg)/(ac, ad, cf, df, q/ac, q/ad, q/cf, q/df, Z)",
        ["a", "b", "c", "d", "f", "g"]
            .into_iter()
            .map(|n| param(n, NARROW))
            .collect(),
        vec![Constraint::new("|abc^2d^2fg/q| < 1", |p| {
            inside_unit(p["a"] * p["b"] * p["c"] * p["c"] * p["d"] * p["d"] * p["f"] * p["g"] / p.q)
        })],
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d, f, g) = (p["a"], p["b"], p["c"], p["d"], p["f"], p["g"]);
            let z = a * b * c * c * d * d * f * g / q;
            let mut side = |x: Complex, y: Complex| -> Result<Term> {
                let pre = x * cx.num(&[b * x, x * g])? / cx.den(&[one() / (a * y), one() / (y * f)])?;
                let s = cx.psi(&[q / (b * x), q / (x * g)], &[a * y * q, y * f * q], z)?;
                Ok(cx.term(pre * s))
            };
            let s1 = side(c, d)?;
            let s2 = side(d, c)?;
            let s2 = Term { value: -s2.value, ..s2 };
            let acdf = a * c * d * f;
            let r = a
                * c
                * d
                * d
                * f
                * cx.num(&[
                    q,
                    q * d / c,
                    c / d,
                    a * b * c * d,
                    acdf,
                    a * c * d * g,
                    b * c * d * f,
                    q / acdf,
                    c * d * f * g,
                ])?
                / cx.den(&[
                    a * c,
                    a * d,
                    c * f,
                    d * f,
                    q / (a * c),
                    q / (a * d),
                    q / (c * f),
                    q / (d * f),
                    z,
                ])?;
            let r = cx.term(r);
            Ok((Side::of(&[s1, s2]), Side::of(&[r])))
        },
    )
}

/// Left terms and right side of the two-`2psi2` identity with free `alpha`.
fn alpha_sides(
    cx: &mut EvalContext,
    a: Complex,
    b: Complex,
    c: Complex,
    d: Complex,
    al: Complex,
) -> Result<([Term; 2], Term)> {
    let q = cx.q();
    let z = c * d / (a * b * q);
    let s = cx.psi(&[a, b], &[c, d], z)?;
    let t1 = cx.term(s);
    let t2 = al / q * cx.num(&[q / c, q / d, al / a, al / b])? / cx.den(&[q / a, q / b, al / c, al / d])?
        * cx.psi(&[a * q / al, b * q / al], &[c * q / al, d * q / al], z)?;
    let t2 = cx.term(-t2);
    let r = cx.num(&[
        al,
        q / al,
        c * d / (al * q),
        al * q * q / (c * d),
        q,
        c / a,
        c / b,
        d / a,
        d / b,
    ])? / cx.den(&[c / al, al * q / c, d / al, al * q / d, c, d, q / a, q / b, z])?;
    Ok(([t1, t2], cx.term(r)))
}

fn cd_abq() -> Constraint {
    Constraint::new("|cd/abq| < 1", |p| {
        inside_unit(p["c"] * p["d"] / (p["a"] * p["b"] * p.q))
    })
}

pub fn alpha_two_term() -> Identity {
    Identity::new(
        "thm-3.1",
        "Two-term 2psi2 relation with a free parameter alpha",
        "2psi2(a, b; c, d; q, cd/abq) - alpha/q (q/c, q/d, alpha/a, alpha/b)/(q/a, q/b, alpha/c, alpha/d) \
         2psi2(aq/alpha, bq/alpha; cq/alpha, dq/alpha; q, cd/abq)",
        "(alpha, q/alpha, cd/alpha q, alpha q^2/cd, q, c/a, c/b, d/a, d/b) \
         /(c/alpha, alpha q/c, d/alpha, alpha q/d, c, d, q/a, q/b, cd/abq)",
        vec![
            param("a", D),
            param("b", D),
            param("c", D),
            param("d", D),
            param("alpha", D),
        ],
        vec![cd_abq()],
        |p, cx| {
            let (l, r) = alpha_sides(cx, p["a"], p["b"], p["c"], p["d"], p["alpha"])?;
            Ok((Side::of(&l), Side::of(&[r])))
        },
    )
}

/// Left terms and right side of the inverted form of the alpha relation.
fn inverted_alpha_sides(
    cx: &mut EvalContext,
    a: Complex,
    b: Complex,
    c: Complex,
    d: Complex,
    al: Complex,
) -> Result<([Term; 2], Term)> {
    let q = cx.q();
    let t1 = cx.num(&[q / a, q / b])? / cx.den(&[q / c, q / d])? * cx.psi(&[q / c, q / d], &[q / a, q / b], q)?;
    let t1 = cx.term(t1);
    let t2 = al / q * cx.num(&[al / a, al / b])? / cx.den(&[al / c, al / d])?
        * cx.psi(&[al / c, al / d], &[al / a, al / b], q)?;
    let t2 = cx.term(-t2);
    let r = cx.num(&[
        al,
        q / al,
        c * d / (al * q),
        al * q * q / (c * d),
        q,
        c / a,
        c / b,
        d / a,
        d / b,
    ])? / cx.den(&[
        c / al,
        al * q / c,
        d / al,
        al * q / d,
        c,
        d,
        q / c,
        q / d,
        c * d / (a * b * q),
    ])?;
    Ok(([t1, t2], cx.term(r)))
}

pub fn inverted_alpha_two_term() -> Identity {
    Identity::new(
        "eq-22",
        "Alpha relation rewritten with both 2psi2 at argument q",
        "(q/a, q/b)/(q/c, q/d) 2psi2(q/c, q/d; q/a, q/b; q, q) \
         - alpha/q (alpha/a, alpha/b)/(alpha/c, alpha/d) 2psi2(alpha/c, alpha/d; alpha/a, alpha/b; q, q)",
        "(alpha, q/alpha, cd/alpha q, alpha q^2/cd, q, c/a, c/b, d/a, d/b) \
         /(c/alpha, alpha q/c, d/alpha, alpha q/d, c, d, q/c, q/d, cd/abq)",
        vec![
            param("a", D),
            param("b", D),
            param("c", D),
            param("d", D),
            param("alpha", D),
        ],
        vec![cd_abq()],
        |p, cx| {
            let (l, r) = inverted_alpha_sides(cx, p["a"], p["b"], p["c"], p["d"], p["alpha"])?;
            Ok((Side::of(&l), Side::of(&[r])))
        },
    )
}

/// Closed product of the two-term summation at argument `q`.
pub(crate) fn askey_rhs(cx: &mut EvalContext, a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Term> {
    let q = cx.q();
    let q2 = q * q;
    let s = cx.num2(&[q2])?;
    let v = 2.0 * cx.num(&[c / a, d / b, -c / b, -d / a, a * b, q / (a * b)])? * s * s
        / (cx.den(&[c * d / (a * b * q), q])? * cx.den2(&[a * a, q2 / (a * a), b * b, q2 / (b * b)])?);
    Ok(cx.term(v))
}

pub fn askey_two_term() -> Identity {
    Identity::new(
        "eq-askey",
        "Two-term 2psi2 summation at argument q",
        "(c, -d)/(a, -b) 2psi2(a, -b; c, -d; q, q) + (-c, d)/(-a, b) 2psi2(-a, b; -c, d; q, q)",
        "2 (c/a, d/b, -c/b, -d/a, ab, q/ab)(q^2; q^2)^2/((cd/abq, q)(a^2, q^2/a^2, b^2, q^2/b^2; q^2))",
        vec![param("a", D), param("b", D), param("c", D), param("d", D)],
        vec![cd_abq()],
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d) = (p["a"], p["b"], p["c"], p["d"]);
            let t1 = cx.num(&[c, -d])? / cx.den(&[a, -b])? * cx.psi(&[a, -b], &[c, -d], q)?;
            let t1 = cx.term(t1);
            let t2 = cx.num(&[-c, d])? / cx.den(&[-a, b])? * cx.psi(&[-a, b], &[-c, d], q)?;
            let t2 = cx.term(t2);
            let r = askey_rhs(cx, a, b, c, d)?;
            Ok((Side::of(&[t1, t2]), Side::of(&[r])))
        },
    )
}

pub fn askey_from_inversion() -> Identity {
    Identity::new(
        "eq-askey-from-22",
        "Inverted alpha relation at a -> q/c, b -> -q/d, c -> q/a, d -> -q/b, alpha -> -q",
        "inverted alpha relation, left side, at the substituted point",
        "2 (c/a, d/b, -c/b, -d/a, ab, q/ab)(q^2; q^2)^2/((cd/abq, q)(a^2, q^2/a^2, b^2, q^2/b^2; q^2))",
        vec![param("a", D), param("b", D), param("c", D), param("d", D)],
        vec![cd_abq()],
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d) = (p["a"], p["b"], p["c"], p["d"]);
            let (l, _) = inverted_alpha_sides(cx, q / c, -q / d, q / a, -q / b, -q)?;
            let r = askey_rhs(cx, a, b, c, d)?;
            Ok((Side::of(&l), Side::of(&[r])))
        },
    )
}

fn slater_params() -> Vec<super::Param> {
    ["a", "b", "c", "e", "f"].into_iter().map(|n| param(n, D)).collect()
}

fn slater_constraints() -> Vec<Constraint> {
    vec![Constraint::new("|c/ab| < 1", |p| {
        inside_unit(p["c"] / (p["a"] * p["b"]))
    })]
}

fn slater_lhs(p: &Point, cx: &mut EvalContext) -> Result<Term> {
    let q = cx.q();
    let (a, b, c, e, f) = (p["a"], p["b"], p["c"], p["e"], p["f"]);
    let v = cx.num(&[c / (e * f), q * e * f / c, q, q / a, q / b, c / a, c / b])?
        / cx.den(&[e, f, q / e, q / f, c / (a * b)])?;
    Ok(cx.term(v))
}

fn slater_terms(p: &Point, cx: &mut EvalContext) -> Result<[Term; 2]> {
    super::IdemExpansion::new("e", "f").expand(p, cx, |p, cx| {
        let q = cx.q();
        let (a, b, c, e, f) = (p["a"], p["b"], p["c"], p["e"], p["f"]);
        let v = q / e * cx.num(&[c / (q * f), q * q * f / c, e / a, e / b, q * c / e, q * q / e])?
            / cx.den(&[e, q / e, e / f, q * f / e])?
            * cx.psi(&[e / c, e / q], &[e / a, e / b], q)?;
        Ok(cx.term(v))
    })
}

pub fn slater_two_term() -> Identity {
    Identity::new(
        "eq-slater",
        "Slater's two-term 2psi2 summation",
        "(c/ef, qef/c, q, q/a, q/b, c/a, c/b)/(e, f, q/e, q/f, c/ab)",
        "q/e (c/qf, q^2f/c, e/a, e/b, qc/e, q^2/e)/(e, q/e, e/f, qf/e) 2psi2(e/c, e/q; e/a, e/b; q, q) + idem(e; f)",
        slater_params(),
        slater_constraints(),
        |p, cx| {
            let l = slater_lhs(p, cx)?;
            let r = slater_terms(p, cx)?;
            Ok((Side::of(&[l]), Side::of(&r)))
        },
    )
}

/// Both summations at a Slater point and at its image
/// `(qa/e, qb/e, qc/e, q^2/e, fq/e)` in the alpha relation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlaterImage {
    /// `T(e, f)` and `T(f, e)` of the two-term summation.
    pub slater: [Term; 2],
    pub slater_product: Term,
    /// The two left terms of the alpha relation at the image point.
    pub alpha: [Term; 2],
    pub alpha_product: Term,
}

impl SlaterImage {
    /// Ratio of the two closed products; maps each alpha term onto the
    /// matching Slater term.
    pub fn scale(&self) -> Complex {
        self.slater_product.value / self.alpha_product.value
    }
}

pub fn slater_image_terms(p: &Point, cx: &mut EvalContext) -> Result<SlaterImage> {
    let q = cx.q();
    let (a, b, c, e, f) = (p["a"], p["b"], p["c"], p["e"], p["f"]);
    let slater = slater_terms(p, cx)?;
    let slater_product = slater_lhs(p, cx)?;
    let (alpha, alpha_product) = alpha_sides(cx, q * a / e, q * b / e, q * c / e, q * q / e, f * q / e)?;
    Ok(SlaterImage {
        slater,
        slater_product,
        alpha,
        alpha_product,
    })
}

pub fn slater_from_alpha() -> Identity {
    Identity::new(
        "eq-slater-image",
        "Slater's summation as the image of the alpha relation",
        "(c/ef, qef/c, q, q/a, q/b, c/a, c/b)/(e, f, q/e, q/f, c/ab) times the alpha relation's left side \
         at (qa/e, qb/e, qc/e, q^2/e, fq/e), over its right side",
        "q/e (c/qf, q^2f/c, e/a, e/b, qc/e, q^2/e)/(e, q/e, e/f, qf/e) 2psi2(e/c, e/q; e/a, e/b; q, q) + idem(e; f)",
        slater_params(),
        slater_constraints(),
        |p, cx| {
            let img = slater_image_terms(p, cx)?;
            let k = img.scale();
            let rel = img.slater_product.abs_error / img.slater_product.value.norm()
                + img.alpha_product.abs_error / img.alpha_product.value.norm();
            let scaled = img.alpha.map(|t| Term {
                value: t.value * k,
                abs_error: (t.abs_error + t.value.norm() * rel) * k.norm(),
            });
            Ok((Side::of(&scaled), Side::of(&img.slater)))
        },
    )
}
