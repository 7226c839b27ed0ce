//! Well-poised `2 psi 2` summations and the product identities they imply.

use super::{inside_unit, param, Constraint, EvalContext, Identity, Point, Region, Side, Term};
use crate::error::Result;
use crate::Complex;

const D: Region = Region::DEFAULT;

fn abc() -> Vec<super::Param> {
    vec![param("a", D), param("b", D), param("c", D)]
}

fn argument_constraint() -> Vec<Constraint> {
    vec![Constraint::new("|aq/bc| < 1", |p| {
        inside_unit(p["a"] * p.q / (p["b"] * p["c"]))
    })]
}

fn well_poised_lhs(p: &Point, cx: &mut EvalContext) -> Result<Side> {
    let q = cx.q();
    let (a, b, c) = (p["a"], p["b"], p["c"]);
    let s = cx.psi(&[b, c], &[a * q / b, a * q / c], -a * q / (b * c))?;
    Ok(Side::of(&[cx.term(s)]))
}

fn two_term_rhs(p: &Point, cx: &mut EvalContext) -> Result<[Term; 2]> {
    let q = cx.q();
    let (a, b, c) = (p["a"], p["b"], p["c"]);
    let x = a * q / (b * c);
    let t1 = cx.num(&[-b, x, -q / b, b / a, q])? * cx.num2(&[a * q * q / (c * c)])?
        / (cx.den(&[a * q / c, -one(), q / c, q / b, -x])? * cx.den2(&[b * b / a])?);
    let t1 = cx.term(t1);
    let t2 = cx.num(&[x, b, -a * q / b, -b / a, q])? * cx.num2(&[a * q * q / (c * c)])?
        / (cx.den(&[a * q / b, a * q / c, -one(), -x, q / c])? * cx.den2(&[b * b / a])?);
    let t2 = cx.term(t2);
    Ok([t1, t2])
}

fn one_term_rhs(p: &Point, cx: &mut EvalContext) -> Result<Term> {
    let q = cx.q();
    let (a, b, c) = (p["a"], p["b"], p["c"]);
    let q2 = q * q;
    let v = cx.num(&[a * q / (b * c)])? * cx.num2(&[a * q2 / (b * b), a * q2 / (c * c), q2, a * q, q / a])?
        / cx.den(&[a * q / b, a * q / c, q / b, q / c, -a * q / (b * c)])?;
    Ok(cx.term(v))
}

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

pub fn well_poised_two_term() -> Identity {
    Identity::new(
        "cor-2.3",
        "Well-poised 2psi2 as a sum of two products",
        "2psi2(b, c; aq/b, aq/c; q, -aq/bc)",
        "(-b, aq/bc, -q/b, b/a, q)(aq^2/c^2; q^2)/((aq/c, -1, q/c, q/b, -aq/bc)(b^2/a; q^2)) + \
         (aq/bc, b, -aq/b, -b/a, q)(aq^2/c^2; q^2)/((aq/b, aq/c, -1, -aq/bc, q/c)(b^2/a; q^2))",
        abc(),
        argument_constraint(),
        |p, cx| {
            let l = well_poised_lhs(p, cx)?;
            let r = two_term_rhs(p, cx)?;
            Ok((l, Side::of(&r)))
        },
    )
}

pub fn well_poised_one_term() -> Identity {
    Identity::new(
        "eq-2psi21term",
        "Well-poised 2psi2 summation",
        "2psi2(b, c; aq/b, aq/c; q, -aq/bc)",
        "(aq/bc; q)(aq^2/b^2, aq^2/c^2, q^2, aq, q/a; q^2)/(aq/b, aq/c, q/b, q/c, -aq/bc; q)",
        abc(),
        argument_constraint(),
        |p, cx| {
            let l = well_poised_lhs(p, cx)?;
            let r = one_term_rhs(p, cx)?;
            Ok((l, Side::of(&[r])))
        },
    )
}

pub fn symmetric_product_sum() -> Identity {
    Identity::new(
        "thm-2.5",
        "Symmetric sum of two infinite products",
        "(a, -b, q/a, -q/b; q) + (-a, b, -q/a, q/b; q)",
        "2 (ab, q^2/ab, aq/b, bq/a; q^2)/(q; q^2)^2",
        vec![param("a", D), param("b", D)],
        Vec::new(),
        |p, cx| {
            let q = cx.q();
            let (a, b) = (p["a"], p["b"]);
            let l1 = cx.num(&[a, -b, q / a, -q / b])?;
            let l1 = cx.term(l1);
            let l2 = cx.num(&[-a, b, -q / a, q / b])?;
            let l2 = cx.term(l2);
            let d = cx.den2(&[q])?;
            let r = 2.0 * cx.num2(&[a * b, q * q / (a * b), a * q / b, b * q / a])? / (d * d);
            let r = cx.term(r);
            Ok((Side::of(&[l1, l2]), Side::of(&[r])))
        },
    )
    .with_tol(1e-11)
}

pub fn product_sum() -> Identity {
    Identity::new(
        "eq-infprod",
        "Sum of two infinite products",
        "(-b, -q/b, b/a, aq/b; q) + (b, q/b, -b/a, -aq/b; q)",
        "2 (aq, q/a, b^2/a, aq^2/b^2; q^2)/(q; q^2)^2",
        vec![param("a", D), param("b", D)],
        Vec::new(),
        |p, cx| {
            let q = cx.q();
            let (a, b) = (p["a"], p["b"]);
            let l1 = cx.num(&[-b, -q / b, b / a, a * q / b])?;
            let l1 = cx.term(l1);
            let l2 = cx.num(&[b, q / b, -b / a, -a * q / b])?;
            let l2 = cx.term(l2);
            let d = cx.den2(&[q])?;
            let r = 2.0 * cx.num2(&[a * q, q / a, b * b / a, a * q * q / (b * b)])? / (d * d);
            let r = cx.term(r);
            Ok((Side::of(&[l1, l2]), Side::of(&[r])))
        },
    )
}

/// The two product sides of the well-poised summations, each multiplied by
/// `(q/b, aq/b, aq/c, -1, q/c, -aq/bc; q)(b^2/a; q^2)/((aq/bc, q; q)(aq^2/c^2; q^2))`.
pub fn product_sum_quotient_sides(p: &Point, cx: &mut EvalContext) -> Result<(Side, Side)> {
    let q = cx.q();
    let (a, b, c) = (p["a"], p["b"], p["c"]);
    let x = a * q / (b * c);
    let factor = cx.num(&[q / b, a * q / b, a * q / c, -one(), q / c, -x])? * cx.num2(&[b * b / a])?
        / (cx.den(&[x, q])? * cx.den2(&[a * q * q / (c * c)])?);
    let rel = cx.take_rel();
    let scale = |t: Term| Term {
        value: t.value * factor,
        abs_error: (t.abs_error + t.value.norm() * rel) * factor.norm(),
    };
    let two = two_term_rhs(p, cx)?.map(scale);
    let one = scale(one_term_rhs(p, cx)?);
    Ok((Side::of(&two), Side::of(&[one])))
}

pub fn product_sum_quotient() -> Identity {
    Identity::new(
        "eq-infprod-quotient",
        "Product sum obtained by equating the two well-poised summations",
        "two-product side of the well-poised 2psi2, rescaled",
        "one-product side of the well-poised 2psi2, rescaled",
        abc(),
        argument_constraint(),
        product_sum_quotient_sides,
    )
}
