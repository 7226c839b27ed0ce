//! Expansions of a general `2 psi 2` (and its semi-finite forms) in terms
//! of unilateral series.

use super::{inside_unit, param, smaller, Constraint, EvalContext, IdemExpansion, Identity, Region, Side, Term};
use crate::error::Result;
use crate::Complex;

const D: Region = Region::DEFAULT;
const Z: Region = Region::Modulus { lo: 0.05, hi: 1.0 };

/// Shifts `m` at which the semi-finite `3 phi 2` form is registered.
pub const SHIFTED_3PHI2_M: [usize; 3] = [0, 1, 3];

fn annulus() -> Vec<Constraint> {
    vec![
        Constraint::new("|z| < 1", |p| inside_unit(p["z"])),
        Constraint::new("|cd/ab| < |z|", |p| {
            smaller(p["c"] * p["d"] / (p["a"] * p["b"]), p["z"])
        }),
    ]
}

fn abcdz() -> Vec<super::Param> {
    vec![
        param("a", D),
        param("b", D),
        param("c", D),
        param("d", D),
        param("z", Z),
    ]
}

fn psi_side(cx: &mut EvalContext, a: Complex, b: Complex, c: Complex, d: Complex, z: Complex) -> Result<Side> {
    let s = cx.psi(&[a, b], &[c, d], z)?;
    Ok(Side::of(&[cx.term(s)]))
}

pub fn slater_first() -> Identity {
    Identity::new(
        "eq-22-1",
        "2psi2 as two 2phi1 in argument cd/abz",
        "2psi2(a, b; c, d; q, z)",
        "a (q, qa/b, c/a, d/a, az, q/az, qb, 1/b)/(a/b, qb/a, c, d, q/a, q/b, z, q/z) \
         2phi1(qa/c, qa/d; qa/b; q, cd/abz) + idem(a; b)",
        abcdz(),
        annulus(),
        |p, cx| {
            let (a, b, c, d, z) = (p["a"], p["b"], p["c"], p["d"], p["z"]);
            let l = psi_side(cx, a, b, c, d, z)?;
            let r = IdemExpansion::new("a", "b").expand(p, cx, |p, cx| {
                let q = cx.q();
                let (a, b) = (p["a"], p["b"]);
                let v = a * cx.num(&[q, q * a / b, c / a, d / a, a * z, q / (a * z), q * b, 1.0 / b])?
                    / cx.den(&[a / b, q * b / a, c, d, q / a, q / b, z, q / z])?
                    * cx.phi(&[q * a / c, q * a / d], &[q * a / b], c * d / (a * b * z))?;
                Ok(cx.term(v))
            })?;
            Ok((l, Side::of(&r)))
        },
    )
}

pub fn slater_second() -> Identity {
    Identity::new(
        "eq-22-2",
        "2psi2 as two 2phi1 in argument z",
        "2psi2(a, b; c, d; q, z)",
        "q/c (q, c/a, c/b, abz/dq, dq^2/abz, q/d)/(c, c/d, q/a, q/b, abz/cd, qcd/abz) \
         2phi1(qa/c, qb/c; qd/c; q, z) + idem(c; d)",
        abcdz(),
        annulus(),
        |p, cx| {
            let (a, b, c, d, z) = (p["a"], p["b"], p["c"], p["d"], p["z"]);
            let l = psi_side(cx, a, b, c, d, z)?;
            let r = IdemExpansion::new("c", "d").expand(p, cx, |p, cx| {
                let q = cx.q();
                let (c, d) = (p["c"], p["d"]);
                let abz = a * b * z;
                let v = q / c * cx.num(&[q, c / a, c / b, abz / (d * q), d * q * q / abz, q / d])?
                    / cx.den(&[c, c / d, q / a, q / b, abz / (c * d), q * c * d / abz])?
                    * cx.phi(&[q * a / c, q * b / c], &[q * d / c], z)?;
                Ok(cx.term(v))
            })?;
            Ok((l, Side::of(&r)))
        },
    )
}

fn expansion_constraints() -> Vec<Constraint> {
    let mut c = annulus();
    c.push(Constraint::new("|bq/d| < 1", |p| inside_unit(p["b"] * p.q / p["d"])));
    c
}

/// Right side of the two-`2phi1` expansion with a minus sign.
pub fn two_phi_expansion_rhs(
    cx: &mut EvalContext,
    a: Complex,
    b: Complex,
    c: Complex,
    d: Complex,
    z: Complex,
) -> Result<[Term; 2]> {
    let q = cx.q();
    let abz = a * b * z;
    let t1 = cx.num(&[c / b, abz / d, d * q / abz, q / d, q])? / cx.den(&[c, a * z / d, q / a, q / b, c * d / abz])?
        * cx.phi(&[c * d / abz, d / a], &[d * q / (a * z)], b * q / d)?;
    let t1 = cx.term(t1);
    let t2 = cx.num(&[c * q / d, b, d / a, a * z / q, q * q / (a * z), q / d, q])?
        / cx.den(&[d / q, c, b * q / d, a * z / d, d * q / (a * z), q * q / d, q / a])?
        * cx.phi(&[a * q / d, b * q / d], &[c * q / d], z)?;
    let t2 = cx.term(-t2);
    Ok([t1, t2])
}

pub fn two_phi_expansion() -> Identity {
    Identity::new(
        "thm-2.1",
        "2psi2 as a difference of two 2phi1",
        "2psi2(a, b; c, d; q, z)",
        "(c/b, abz/d, dq/abz, q/d, q)/(c, az/d, q/a, q/b, cd/abz) 2phi1(cd/abz, d/a; dq/az; q, bq/d) \
         - (cq/d, b, d/a, az/q, q^2/az, q/d, q)/(d/q, c, bq/d, az/d, dq/az, q^2/d, q/a) 2phi1(aq/d, bq/d; cq/d; q, z)",
        abcdz(),
        expansion_constraints(),
        |p, cx| {
            let (a, b, c, d, z) = (p["a"], p["b"], p["c"], p["d"], p["z"]);
            let l = psi_side(cx, a, b, c, d, z)?;
            let r = two_phi_expansion_rhs(cx, a, b, c, d, z)?;
            Ok((l, Side::of(&r)))
        },
    )
}

pub fn heine_expansion() -> Identity {
    Identity::new(
        "cor-2.2",
        "2psi2 as a sum of two 2phi1 in argument bq/d",
        "2psi2(a, b; c, d; q, z)",
        "(abz/d, c/b, dq/abz, q/d, q)/(c, az/d, q/a, q/b, cd/abz) 2phi1(cd/abz, d/a; dq/az; q, bq/d) \
         + (d/a, b, az, q/az, q)/(d, c, d/az, z, q/a) 2phi1(c/b, z; azq/d; q, bq/d)",
        abcdz(),
        expansion_constraints(),
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d, z) = (p["a"], p["b"], p["c"], p["d"], p["z"]);
            let l = psi_side(cx, a, b, c, d, z)?;
            let abz = a * b * z;
            let t1 = cx.num(&[abz / d, c / b, d * q / abz, q / d, q])?
                / cx.den(&[c, a * z / d, q / a, q / b, c * d / abz])?
                * cx.phi(&[c * d / abz, d / a], &[d * q / (a * z)], b * q / d)?;
            let t1 = cx.term(t1);
            let t2 = cx.num(&[d / a, b, a * z, q / (a * z), q])? / cx.den(&[d, c, d / (a * z), z, q / a])?
                * cx.phi(&[c / b, z], &[a * z * q / d], b * q / d)?;
            let t2 = cx.term(t2);
            Ok((l, Side::of(&[t1, t2])))
        },
    )
}

pub fn exton() -> Identity {
    Identity::new(
        "eq-exton",
        "2psi2 at z = q/a as one 2phi1",
        "2psi2(a, b; c, d; q, q/a)",
        "(c/b, d/b, bq/a, q)/(c, d, q/a, q/b) 2phi1(bq/c, bq/d; bq/a; q, cd/bq)",
        vec![param("a", D), param("b", D), param("c", D), param("d", D)],
        vec![
            Constraint::new("|q/a| < 1", |p| inside_unit(p.q / p["a"])),
            Constraint::new("|cd/bq| < 1", |p| inside_unit(p["c"] * p["d"] / (p["b"] * p.q))),
        ],
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d) = (p["a"], p["b"], p["c"], p["d"]);
            let l = psi_side(cx, a, b, c, d, q / a)?;
            let r = cx.num(&[c / b, d / b, b * q / a, q])? / cx.den(&[c, d, q / a, q / b])?
                * cx.phi(&[b * q / c, b * q / d], &[b * q / a], c * d / (b * q))?;
            let r = cx.term(r);
            Ok((l, Side::of(&[r])))
        },
    )
}

pub fn product_plus_sum() -> Identity {
    Identity::new(
        "eq-bigauss",
        "2psi2 at z = cd/abq as a product plus a sum",
        "2psi2(a, b; c, d; q, cd/abq)",
        "(c/b, c/q, q^2/c, q/d)/(c, c/bq, q/a, q/b) sum_k (d/a)_k/(bq^2/c)_k (bq/d)^k \
         + (c/a, d/a, b, cd/bq, bq^2/cd, q)/(c, d, bq/c, bq/d, q/a, cd/abq)",
        vec![param("a", D), param("b", D), param("c", D), param("d", D)],
        vec![
            Constraint::new("|bq/d| < 1", |p| inside_unit(p["b"] * p.q / p["d"])),
            Constraint::new("|cd/abq| < 1", |p| {
                inside_unit(p["c"] * p["d"] / (p["a"] * p["b"] * p.q))
            }),
        ],
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d) = (p["a"], p["b"], p["c"], p["d"]);
            let z = c * d / (a * b * q);
            let l = psi_side(cx, a, b, c, d, z)?;
            // sum_k (d/a)_k / (bq^2/c)_k x^k is 2phi1(d/a, q; bq^2/c; q, x)
            let t1 = cx.num(&[c / b, c / q, q * q / c, q / d])? / cx.den(&[c, c / (b * q), q / a, q / b])?
                * cx.phi(&[d / a, q], &[b * q * q / c], b * q / d)?;
            let t1 = cx.term(t1);
            let t2 = cx.num(&[c / a, d / a, b, c * d / (b * q), b * q * q / (c * d), q])?
                / cx.den(&[c, d, b * q / c, b * q / d, q / a, z])?;
            let t2 = cx.term(t2);
            Ok((l, Side::of(&[t1, t2])))
        },
    )
}

fn three_phi_two_params() -> Vec<super::Param> {
    vec![
        param("a", D),
        param("b", D),
        param("c", Region::modulus(0.1, 1.0)),
        param("d", D),
        param("e", D),
    ]
}

fn three_phi_two_constraints() -> Vec<Constraint> {
    vec![
        Constraint::new("|bq/d| < 1", |p| inside_unit(p["b"] * p.q / p["d"])),
        Constraint::new("|de/abc| < 1", |p| {
            inside_unit(p["d"] * p["e"] / (p["a"] * p["b"] * p["c"]))
        }),
    ]
}

pub fn shifted_three_phi_two(m: usize) -> Identity {
    let mi = m as i64;
    Identity::new(
        format!("eq-3phi2-1-m{m}"),
        "Semi-finite shifted form of a three-term 3phi2 transformation",
        "sum_{k >= -m} (a, b, cq^m)_k/(q^{m+1}, d, e)_k (de/abc)^k",
        "(cq/e, q/d, q)_m/(c, q/a, q/b)_m (e/b, e/c, cq^{1+m}/a, q^{1+m}/d)/(e, cq^{1+m}/d, q^{1+m}/a, e/bc) \
         3phi2(c, d/a, cq^{1+m}/e; cq^{1+m}/a, bcq/e; q, bq/d) \
         - (bcq^2/de, q/d, q)_m/(q^2/d, q/a, c)_m (q^{1+m}/d, eq/d, b, c, d/a, de/bcq, bcq^{2+m}/de) \
         /(d/q, e, bq/d, cq^{1+m}/d, q^{1+m}/a, e/bc, bcq/e) 3phi2(aq/d, bq/d, cq^{1+m}/d; q^{2+m}/d, eq/d; q, de/abc)",
        three_phi_two_params(),
        three_phi_two_constraints(),
        move |p, cx| {
            let q = cx.q();
            let (a, b, c, d, e) = (p["a"], p["b"], p["c"], p["d"], p["e"]);
            let qm = cx.base().pow(mi);
            let q1m = qm * q;
            let z = d * e / (a * b * c);
            // lower parameter q^{m+1} ends the sum at k = -m
            let s = cx.psi(&[a, b, c * qm], &[q1m, d, e], z)?;
            let l = cx.term(s);
            let t1 = cx.num_n(&[c * q / e, q / d, q], mi)? / cx.den_n(&[c, q / a, q / b], mi)?
                * cx.num(&[e / b, e / c, c * q1m / a, q1m / d])?
                / cx.den(&[e, c * q1m / d, q1m / a, e / (b * c)])?
                * cx.phi(&[c, d / a, c * q1m / e], &[c * q1m / a, b * c * q / e], b * q / d)?;
            let t1 = cx.term(t1);
            let t2 = cx.num_n(&[b * c * q * q / (d * e), q / d, q], mi)? / cx.den_n(&[q * q / d, q / a, c], mi)?
                * cx.num(&[q1m / d, e * q / d, b])?
                / cx.den(&[d / q, e, b * q / d])?
                * cx.num(&[c, d / a, d * e / (b * c * q), b * c * q1m * q / (d * e)])?
                / cx.den(&[c * q1m / d, q1m / a, e / (b * c), b * c * q / e])?
                * cx.phi(&[a * q / d, b * q / d, c * q1m / d], &[q1m * q / d, e * q / d], z)?;
            let t2 = cx.term(-t2);
            Ok((Side::of(&[l]), Side::of(&[t1, t2])))
        },
    )
    .with_fixed("m", mi)
}

pub fn three_phi_two_limit() -> Identity {
    let mut constraints = three_phi_two_constraints();
    constraints.push(Constraint::new("|c| < 1", |p| inside_unit(p["c"])));
    Identity::new(
        "eq-3phi2-2",
        "Limit of the shifted 3phi2 form as a 2psi2 expansion",
        "2psi2(a, b; d, e; q, de/abc)",
        "(cq/e, q/d, q, e/b, e/c)/(c, q/a, q/b, e, e/bc) 2phi1(c, d/a; bcq/e; q, bq/d) \
         - (bcq^2/de, q/d, q, eq/d, b, d/a, de/bcq)/(q^2/d, q/a, d/q, e, bq/d, e/bc, bcq/e) \
         2phi1(aq/d, bq/d; eq/d; q, de/abc)",
        three_phi_two_params(),
        constraints,
        |p, cx| {
            let q = cx.q();
            let (a, b, c, d, e) = (p["a"], p["b"], p["c"], p["d"], p["e"]);
            let z = d * e / (a * b * c);
            let s = cx.psi(&[a, b], &[d, e], z)?;
            let l = cx.term(s);
            let t1 = cx.num(&[c * q / e, q / d, q, e / b, e / c])? / cx.den(&[c, q / a, q / b, e, e / (b * c)])?
                * cx.phi(&[c, d / a], &[b * c * q / e], b * q / d)?;
            let t1 = cx.term(t1);
            let t2 = cx.num(&[
                b * c * q * q / (d * e),
                q / d,
                q,
                e * q / d,
                b,
                d / a,
                d * e / (b * c * q),
            ])? / cx.den(&[q * q / d, q / a, d / q, e, b * q / d, e / (b * c), b * c * q / e])?
                * cx.phi(&[a * q / d, b * q / d], &[e * q / d], z)?;
            let t2 = cx.term(-t2);
            Ok((Side::of(&[l]), Side::of(&[t1, t2])))
        },
    )
}
