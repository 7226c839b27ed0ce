use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::andrews::askey_rhs;
use super::expansion::two_phi_expansion_rhs;
use super::unilateral::three_term_companion_rhs;
use super::*;
use crate::error::QError;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn r(x: f64) -> Complex {
    c(x, 0.0)
}

fn sum(ts: &[Term]) -> Complex {
    ts.iter().map(|t| t.value).sum()
}

/// Draws points until `n` evaluate cleanly; returns the worst residual and
/// the number of discarded points.
fn sweep(id: &Identity, n: usize, seed: u64) -> (f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut discarded, mut ok) = (0.0f64, 0usize, 0usize);
    while ok < n {
        let p = id.sample(&mut rng).unwrap();
        match id.evaluate(&p) {
            Ok(e) if !e.is_ill_conditioned() => {
                assert!(
                    e.residual <= id.tol,
                    "{} at q={} {:?}: residual {:e}",
                    id.id,
                    p.q,
                    p.values,
                    e.residual
                );
                worst = worst.max(e.residual);
                ok += 1;
            }
            Ok(_) | Err(QError::PoleAdjacent(_)) => discarded += 1,
            Err(e) => panic!("{} at q={} {:?}: {e}", id.id, p.q, p.values),
        }
        assert!(discarded <= 5 * n, "{}: {discarded} discarded points", id.id);
    }
    (worst, discarded)
}

#[test]
fn every_identity_holds_at_sampled_points() {
    for (i, id) in registry().iter().enumerate() {
        sweep(id, 12, 1000 + i as u64);
    }
}

#[test]
fn registry_ids_are_unique_and_sorted() {
    let ids: Vec<String> = registry().into_iter().map(|i| i.id).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
    assert_eq!(lookup("thm-2.1").unwrap().id, "thm-2.1");
    assert!(matches!(lookup("nope"), Err(QError::UnknownIdentity(_))));
    assert_eq!(lookup("eq-andrewm-m3").unwrap().fixed("m"), Some(3));
}

#[test]
fn gauss_at_c_equal_q() {
    let q = r(0.4);
    let p = Point::new(q, &[("a", r(2.0)), ("b", r(3.0)), ("c", q)]);
    let e = q_gauss().evaluate(&p).unwrap();
    assert!(e.residual < 1e-13, "{}", e.residual);
}

#[test]
fn bilateral_with_lower_q_is_unilateral() {
    let q = c(0.3, 0.2);
    let (a, b, d, z) = (c(1.1, 0.3), c(0.7, -0.5), c(1.6, 0.2), c(0.4, 0.3));
    let mut cx = EvalContext::new(q).unwrap();
    let psi = cx.psi(&[a, b], &[q, d], z).unwrap();
    let phi = cx.phi(&[a, b], &[d], z).unwrap();
    assert!(residual(psi, phi) < 1e-14);
}

#[test]
fn expansion_at_documented_point() {
    let id = two_phi_expansion();
    let bad = Point::new(
        r(0.3),
        &[
            ("a", r(1.2)),
            ("b", r(0.9)),
            ("c", r(0.5)),
            ("d", r(1.4)),
            ("z", r(0.6)),
        ],
    );
    assert!(matches!(id.evaluate(&bad), Err(QError::InadmissiblePoint(_))));
    let e = id.evaluate(&bad.with("z", r(0.7))).unwrap();
    assert!(e.residual < 1e-9, "{}", e.residual);
}

#[test]
fn symmetric_product_sum_at_documented_point() {
    let p = Point::new(r(0.35), &[("a", r(0.4)), ("b", r(0.7))]);
    let e = symmetric_product_sum().evaluate(&p).unwrap();
    assert!(e.residual < 1e-11, "{}", e.residual);
}

#[test]
fn idem_expansion_is_an_involution() {
    let p = Point::new(c(0.2, 0.3), &[("a", c(1.1, 0.2)), ("b", c(-0.4, 0.9)), ("z", r(0.5))]);
    let once = p.swapped("a", "b");
    assert_eq!(once["a"], p["b"]);
    assert_eq!(once.swapped("a", "b"), p);
    let mut cx = EvalContext::new(p.q).unwrap();
    let expr = |p: &Point, cx: &mut EvalContext| Ok(cx.term(p["a"] * p["a"] + p["z"] * p["b"]));
    let ts = IdemExpansion::new("a", "b").expand(&p, &mut cx, expr).unwrap();
    let us = IdemExpansion::new("a", "b").expand(&once, &mut cx, expr).unwrap();
    assert_eq!(ts[0].value, us[1].value);
    assert_eq!(ts[1].value, us[0].value);
}

#[test]
fn expansion_at_c_equal_q_is_the_companion_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let id = three_term_companion();
    let mut checked = 0;
    while checked < 20 {
        let p = id.sample(&mut rng).unwrap();
        let (a, b, d, z) = (p["a"], p["b"], p["d"], p["z"]);
        let mut cx = EvalContext::new(p.q).unwrap();
        let (Ok(x), Ok(y)) = (
            two_phi_expansion_rhs(&mut cx, a, b, p.q, d, z),
            three_term_companion_rhs(a, b, d, z, &mut cx),
        ) else {
            continue;
        };
        assert!(residual(sum(&x), sum(&y)) < 1e-10);
        checked += 1;
    }
}

#[test]
fn alpha_relation_at_d_equal_q_is_gauss() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let gauss = q_gauss();
    let mut checked = 0;
    while checked < 20 {
        let p = gauss.sample(&mut rng).unwrap();
        let al = c(0.7, 0.9);
        let id = alpha_two_term();
        let point = Point::new(
            p.q,
            &[("a", p["a"]), ("b", p["b"]), ("c", p["c"]), ("d", p.q), ("alpha", al)],
        );
        let (Ok(e), Ok(g)) = (id.evaluate(&point), gauss.evaluate(&p)) else {
            continue;
        };
        assert!(residual(e.lhs.value, g.lhs.value) < 1e-10);
        assert!(residual(e.rhs.value, g.rhs.value) < 1e-10);
        checked += 1;
    }
}

#[test]
fn printed_askey_product_carries_an_extra_factor() {
    let q = c(0.3, 0.2);
    let (a, b, cc, d) = (c(1.3, 0.4), c(0.9, -0.7), c(0.5, 0.2), c(0.6, 0.1));
    let p = Point::new(q, &[("a", a), ("b", b), ("c", cc), ("d", d)]);
    let e = askey_two_term().evaluate(&p).unwrap();
    assert!(e.residual < 1e-10, "{}", e.residual);
    let mut cx = EvalContext::new(q).unwrap();
    let corrected = askey_rhs(&mut cx, a, b, cc, d).unwrap().value;
    let printed = (r(1.0) - q) * corrected;
    assert!(residual(e.lhs.value * (r(1.0) - q), printed) < 1e-12);
    assert!(residual(e.lhs.value, printed) > 1e-3);
}

#[test]
fn slater_terms_match_scaled_alpha_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let id = slater_two_term();
    let mut checked = 0;
    while checked < 10 {
        let p = id.sample(&mut rng).unwrap();
        let mut cx = EvalContext::new(p.q).unwrap();
        let Ok(img) = slater_image_terms(&p, &mut cx) else {
            continue;
        };
        let k = img.scale();
        for (s, t) in img.slater.iter().zip(&img.alpha) {
            assert!(residual(s.value, k * t.value) < 1e-9);
        }
        checked += 1;
    }
}

#[test]
fn inadmissible_points_are_rejected() {
    let p = Point::new(r(0.5), &[("a", r(0.5)), ("b", r(0.5)), ("c", r(0.5))]);
    assert!(matches!(q_gauss().evaluate(&p), Err(QError::InadmissiblePoint(_))));
}
