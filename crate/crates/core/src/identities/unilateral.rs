//! Identities whose left side is a unilateral `2 phi 1` (or `1 phi 0`).

use super::{inside_unit, param, Constraint, EvalContext, IdemExpansion, Identity, Point, Region, Side};
use crate::error::Result;
use crate::Complex;

const D: Region = Region::DEFAULT;

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

pub fn q_gauss() -> Identity {
    Identity::new(
        "eq-gauss",
        "q-Gauss summation",
        "2phi1(a, b; c; q, c/ab)",
        "(c/a, c/b; q)_inf / (c, c/ab; q)_inf",
        vec![param("a", D), param("b", D), param("c", D)],
        vec![Constraint::new("|c/ab| < 1", |p| {
            inside_unit(p["c"] / (p["a"] * p["b"]))
        })],
        |p, cx| {
            let (a, b, c) = (p["a"], p["b"], p["c"]);
            let s = cx.phi(&[a, b], &[c], c / (a * b))?;
            let l = cx.term(s);
            let r = cx.num(&[c / a, c / b])? / cx.den(&[c, c / (a * b)])?;
            let r = cx.term(r);
            Ok((Side::of(&[l]), Side::of(&[r])))
        },
    )
}

pub fn cauchy_binomial() -> Identity {
    Identity::new(
        "eq-cauchy",
        "Cauchy q-binomial theorem",
        "sum_n (a; q)_n / (q; q)_n z^n",
        "(az; q)_inf / (z; q)_inf",
        vec![param("a", D), param("z", Region::modulus(0.05, 1.0))],
        vec![Constraint::new("|z| < 1", |p| inside_unit(p["z"]))],
        |p, cx| {
            let (a, z) = (p["a"], p["z"]);
            let s = cx.phi(&[a], &[], z)?;
            let l = cx.term(s);
            let r = cx.num(&[a * z])? / cx.den(&[z])?;
            let r = cx.term(r);
            Ok((Side::of(&[l]), Side::of(&[r])))
        },
    )
}

pub fn heine() -> Identity {
    Identity::new(
        "eq-heine",
        "Heine transformation",
        "2phi1(a, b; c; q, z)",
        "(b, az; q)_inf / (c, z; q)_inf 2phi1(c/b, z; az; q, b)",
        vec![
            param("a", D),
            param("b", Region::modulus(0.05, 1.0)),
            param("c", D),
            param("z", Region::modulus(0.05, 1.0)),
        ],
        vec![
            Constraint::new("|z| < 1", |p| inside_unit(p["z"])),
            Constraint::new("|b| < 1", |p| inside_unit(p["b"])),
        ],
        |p, cx| {
            let (a, b, c, z) = (p["a"], p["b"], p["c"], p["z"]);
            let s = cx.phi(&[a, b], &[c], z)?;
            let l = cx.term(s);
            let r = cx.num(&[b, a * z])? / cx.den(&[c, z])? * cx.phi(&[c / b, z], &[a * z], b)?;
            let r = cx.term(r);
            Ok((Side::of(&[l]), Side::of(&[r])))
        },
    )
}

pub fn three_term() -> Identity {
    Identity::new(
        "eq-three",
        "Three-term transformation of 2phi1 in argument cq/abz",
        "2phi1(a, b; c; q, z)",
        "(b, c/a, az, q/az; q)_inf / (c, b/a, z, q/z; q)_inf 2phi1(a, aq/c; aq/b; q, cq/abz) + idem(a; b)",
        vec![
            param("a", D),
            param("b", D),
            param("c", D),
            param("z", Region::modulus(0.05, 1.0)),
        ],
        vec![
            Constraint::new("|z| < 1", |p| inside_unit(p["z"])),
            Constraint::new("|cq/abz| < 1", |p| {
                inside_unit(p["c"] * p.q / (p["a"] * p["b"] * p["z"]))
            }),
        ],
        |p, cx| {
            let (a, b, c, z) = (p["a"], p["b"], p["c"], p["z"]);
            let s = cx.phi(&[a, b], &[c], z)?;
            let l = cx.term(s);
            let r = IdemExpansion::new("a", "b").expand(p, cx, |p, cx| {
                let q = cx.q();
                let (a, b) = (p["a"], p["b"]);
                let v = cx.num(&[b, c / a, a * z, q / (a * z)])? / cx.den(&[c, b / a, z, q / z])?
                    * cx.phi(&[a, a * q / c], &[a * q / b], c * q / (a * b * z))?;
                Ok(cx.term(v))
            })?;
            Ok((Side::of(&[l]), Side::of(&r)))
        },
    )
}

pub fn three_term_companion() -> Identity {
    Identity::new(
        "eq-three-1",
        "Three-term transformation of 2phi1 in argument bq/d",
        "2phi1(a, b; d; q, z)",
        "(abz/d, q/d)/(az/d, q/a) 2phi1(d/a, dq/abz; dq/az; q, bq/d) \
         - (b, d/a, az/q, q^2/az, q/d)/(d/q, bq/d, az/d, dq/az, q/a) 2phi1(aq/d, bq/d; q^2/d; q, z)",
        vec![
            param("a", D),
            param("b", D),
            param("d", D),
            param("z", Region::modulus(0.05, 1.0)),
        ],
        vec![
            Constraint::new("|bq/d| < 1", |p| inside_unit(p["b"] * p.q / p["d"])),
            Constraint::new("|z| < 1", |p| inside_unit(p["z"])),
        ],
        |p, cx| {
            let (a, b, d, z) = (p["a"], p["b"], p["d"], p["z"]);
            let s = cx.phi(&[a, b], &[d], z)?;
            let l = cx.term(s);
            let r = three_term_companion_rhs(a, b, d, z, cx)?;
            Ok((Side::of(&[l]), Side::of(&r)))
        },
    )
}

pub fn three_term_companion_rhs(
    a: Complex,
    b: Complex,
    d: Complex,
    z: Complex,
    cx: &mut EvalContext,
) -> Result<[super::Term; 2]> {
    let q = cx.q();
    let t1 = cx.num(&[a * b * z / d, q / d])? / cx.den(&[a * z / d, q / a])?
        * cx.phi(&[d / a, d * q / (a * b * z)], &[d * q / (a * z)], b * q / d)?;
    let t1 = cx.term(t1);
    let t2 = cx.num(&[b, d / a, a * z / q, q * q / (a * z), q / d])?
        / cx.den(&[d / q, b * q / d, a * z / d, d * q / (a * z), q / a])?
        * cx.phi(&[a * q / d, b * q / d], &[q * q / d], z)?;
    let t2 = cx.term(-t2);
    Ok([t1, t2])
}

/// The parenthesized pair of products multiplying the last `2phi1` of the
/// d-independence relation, evaluated at a given `d`.
pub fn two_phi_bracket(p: &Point, d: Complex, cx: &mut EvalContext) -> Result<[super::Term; 2]> {
    let q = cx.q();
    let (a, b, c, z) = (p["a"], p["b"], p["c"], p["z"]);
    let first = q
        * (one() - a)
        * cx.num(&[
            b,
            q / z,
            d / (a * q),
            a * q * q / d,
            c * q / (a * d * z),
            a * d * z / c,
            q / c,
        ])?
        / (d * cx.den(&[d, c / (a * z), one() / a, a * q / c, d * z / c, c * q / (d * z), q / d])?);
    let first = cx.term(first);
    let second = cx.num(&[a * z * q / c, d * z / q, b, d / c, c * q / d, q * q / (d * z), a])?
        / cx.den(&[d / q, z, c, q * q / d, a * q / c, d * z / c, c * q / (d * z)])?;
    let second = cx.term(second);
    Ok([first, second])
}

fn d_independent_constraints() -> Vec<Constraint> {
    vec![
        Constraint::new("|z| < 1", |p| inside_unit(p["z"])),
        Constraint::new("|bq/c| < 1", |p| inside_unit(p["b"] * p.q / p["c"])),
        Constraint::new("|a| < 1", |p| inside_unit(p["a"])),
    ]
}

pub fn d_independent() -> Identity {
    Identity::new(
        "eq-2phi1w",
        "2phi1 expansion with a free parameter d",
        "2phi1(a, b; c; q, z)",
        "(abz/c, q/c)/(az/c, q/a) 2phi1(cq/abz, c/a; cq/az; q, bq/c) \
         + (bracket in d) 2phi1(q/b, z; azq/c; q, bq/c)",
        vec![
            param("a", Region::modulus(0.1, 1.0)),
            param("b", D),
            param("c", D),
            param("z", Region::modulus(0.05, 1.0)),
            param("d", D),
        ],
        d_independent_constraints(),
        |p, cx| {
            let q = cx.q();
            let (a, b, c, z, d) = (p["a"], p["b"], p["c"], p["z"], p["d"]);
            let s = cx.phi(&[a, b], &[c], z)?;
            let l = cx.term(s);
            let t1 = cx.num(&[a * b * z / c, q / c])? / cx.den(&[a * z / c, q / a])?
                * cx.phi(&[c * q / (a * b * z), c / a], &[c * q / (a * z)], b * q / c)?;
            let t1 = cx.term(t1);
            let tail = cx.phi(&[q / b, z], &[a * z * q / c], b * q / c)?;
            let tail_rel = cx.take_rel();
            let [t2, t3] = two_phi_bracket(p, d, cx)?.map(|x| super::Term {
                value: x.value * tail,
                abs_error: (x.abs_error + x.value.norm() * tail_rel) * tail.norm(),
            });
            Ok((Side::of(&[l]), Side::of(&[t1, t2, t3])))
        },
    )
}

pub fn d_independent_bracket() -> Identity {
    let mut constraints = d_independent_constraints();
    constraints.push(Constraint::new("d != e", |p| {
        (p["d"] - p["e"]).norm() / (p["d"].norm() + p["e"].norm())
    }));
    Identity::new(
        "eq-2phi1w-d",
        "Bracket of the free-d expansion does not depend on d",
        "bracket at d",
        "bracket at e",
        vec![
            param("a", Region::modulus(0.1, 1.0)),
            param("b", D),
            param("c", D),
            param("z", Region::modulus(0.05, 1.0)),
            param("d", D),
            param("e", D),
        ],
        constraints,
        |p, cx| {
            let l = two_phi_bracket(p, p["d"], cx)?;
            let r = two_phi_bracket(p, p["e"], cx)?;
            Ok((Side::of(&l), Side::of(&r)))
        },
    )
}

pub fn three_term_at_aq() -> Identity {
    Identity::new(
        "eq-simi",
        "Free-d expansion at d = aq",
        "2phi1(a, b; c; q, z)",
        "(abz/c, q/c)/(az/c, q/a) 2phi1(cq/abz, c/a; cq/az; q, bq/c) \
         + (az, b, c/a, q/az)/(z, c, q/a, c/az) 2phi1(q/b, z; azq/c; q, bq/c)",
        vec![
            param("a", D),
            param("b", D),
            param("c", D),
            param("z", Region::modulus(0.05, 1.0)),
        ],
        vec![
            Constraint::new("|z| < 1", |p| inside_unit(p["z"])),
            Constraint::new("|bq/c| < 1", |p| inside_unit(p["b"] * p.q / p["c"])),
        ],
        |p, cx| {
            let q = cx.q();
            let (a, b, c, z) = (p["a"], p["b"], p["c"], p["z"]);
            let s = cx.phi(&[a, b], &[c], z)?;
            let l = cx.term(s);
            let t1 = cx.num(&[a * b * z / c, q / c])? / cx.den(&[a * z / c, q / a])?
                * cx.phi(&[c * q / (a * b * z), c / a], &[c * q / (a * z)], b * q / c)?;
            let t1 = cx.term(t1);
            let t2 = cx.num(&[a * z, b, c / a, q / (a * z)])? / cx.den(&[z, c, q / a, c / (a * z)])?
                * cx.phi(&[q / b, z], &[a * z * q / c], b * q / c)?;
            let t2 = cx.term(t2);
            Ok((Side::of(&[l]), Side::of(&[t1, t2])))
        },
    )
}
