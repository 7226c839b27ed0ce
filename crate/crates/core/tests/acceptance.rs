//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p qbilat --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qbilat::identities::{
    alpha_two_term, d_independent, dougall, q_gauss, residual, slater_image_terms, slater_two_term,
    three_term_companion, three_term_companion_rhs, two_phi_bracket, two_phi_expansion_rhs, EvalContext, Term,
    DEFAULT_TOL,
};
use qbilat::qoperators::theta_pow;
use qbilat::series::DOUGALL_TOL;
use qbilat::verifier::to_json;
use qbilat::{
    eval_dougall, eval_phi, eval_psi, qpoch_finite, registry, verify, verify_all, Complex, Identity, ParamFunction,
    Point, QBase, SeriesKind, SeriesSpec, VerificationConfig, VerificationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const SAMPLES: usize = 50;
const SUITE_BUDGET: Duration = Duration::from_secs(120);
const DEGENERATION_TOL: f64 = 1e-10;
const UNILATERAL_TOL: f64 = 1e-14;
const THETA_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-12;
const OPERATOR_MAX_Q: f64 = 0.7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex {
    Complex::from_polar(
        rng.gen_range(lo..hi),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

fn sum(ts: &[Term]) -> Complex {
    ts.iter().map(|t| t.value).sum()
}

fn config() -> VerificationConfig {
    VerificationConfig {
        samples: SAMPLES,
        seed: SEED,
        ..VerificationConfig::default()
    }
}

/// Draws admissible points of `id` until `n` of them satisfy `check`, which
/// returns `None` to skip a point and otherwise the discrepancy there.
fn worst_over(id: &Identity, n: usize, seed: u64, mut check: impl FnMut(&Point) -> Option<f64>) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut done) = (0.0f64, 0);
    while done < n {
        let p = id.sample(&mut rng).expect("sampling region is nonempty");
        if let Some(r) = check(&p) {
            worst = worst.max(r);
            done += 1;
        }
    }
    worst
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let reports = verify_all(&config()).expect("valid config");
    let elapsed = start.elapsed();
    let mut bad = Vec::new();
    for r in &reports {
        let limit = if r.id == "dougall" { DOUGALL_TOL } else { DEFAULT_TOL };
        let s = &r.summary;
        if !r.all_passed() || s.passed < SAMPLES || s.max_residual > limit || s.resample_flag {
            bad.push(format!(
                "{} ({}/{}, max {:.1e}, resample rate {:.2})",
                r.id, s.passed, SAMPLES, s.max_residual, s.resample_rate
            ));
        }
    }
    let worst = reports
        .iter()
        .filter(|r| r.id != "dougall")
        .map(|r| r.summary.max_residual)
        .fold(0.0, f64::max);
    let pass = bad.is_empty() && elapsed <= SUITE_BUDGET && reports.len() == registry().len();
    outcome(
        pass,
        format!(
            "{} identities x {SAMPLES} samples in {:.2}s, worst q-identity residual {worst:.2e}{}",
            reports.len(),
            elapsed.as_secs_f64(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", bad.join(", "))
            }
        ),
    )
}

fn dougall_check() -> Outcome {
    let id = dougall();
    let worst = worst_over(&id, 10, SEED, |p| {
        let r = eval_dougall(p["a"].re, p["b"].re, p["c"].re, p["d"].re).ok()?;
        Some(residual(c(r.direct, 0.0), c(r.gamma_side, 0.0)))
    });
    let forced = eval_dougall(0.5, 0.5, 2.0, 2.0).expect("admissible");
    let expected = 16.0 / std::f64::consts::PI;
    let gamma_err = (forced.gamma_side - expected).abs() / expected;
    let direct_err = residual(c(forced.direct, 0.0), c(expected, 0.0));
    outcome(
        worst <= DOUGALL_TOL && direct_err <= DOUGALL_TOL && gamma_err <= 1e-14,
        format!(
            "10 points worst {worst:.2e}; a=b=1/2, c=d=2: direct {:.12} vs 16/pi {:.12} ({direct_err:.1e}), product error {gamma_err:.1e}",
            forced.direct, expected
        ),
    )
}

fn degeneration_chain() -> Outcome {
    let expansion = worst_over(&three_term_companion(), 20, SEED, |p| {
        let (a, b, d, z) = (p["a"], p["b"], p["d"], p["z"]);
        let mut cx = EvalContext::new(p.q).ok()?;
        let x = two_phi_expansion_rhs(&mut cx, a, b, p.q, d, z).ok()?;
        let y = three_term_companion_rhs(a, b, d, z, &mut cx).ok()?;
        Some(residual(sum(&x), sum(&y)))
    });

    let gauss = q_gauss();
    let alpha = alpha_two_term();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let to_gauss = worst_over(&gauss, 20, SEED, |p| {
        let al = polar(&mut rng, 0.3, 2.0);
        let point = Point::new(
            p.q,
            &[("a", p["a"]), ("b", p["b"]), ("c", p["c"]), ("d", p.q), ("alpha", al)],
        );
        let e = alpha.evaluate(&point).ok()?;
        let g = gauss.evaluate(p).ok()?;
        Some(residual(e.lhs.value, g.lhs.value).max(residual(e.rhs.value, g.rhs.value)))
    });

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut unilateral = 0.0f64;
    for _ in 0..50 {
        let base = QBase::new(polar(&mut rng, 0.1, 0.7)).unwrap();
        let upper = vec![polar(&mut rng, 0.2, 1.5), polar(&mut rng, 0.2, 1.5)];
        let d = polar(&mut rng, 0.2, 1.5);
        let z = polar(&mut rng, 0.05, 0.8);
        let psi = eval_psi(&SeriesSpec::psi(upper.clone(), vec![base.q(), d], z, base), 1e-16).unwrap();
        let phi = eval_phi(&SeriesSpec::phi(upper, vec![d], z, base), 1e-16).unwrap();
        unilateral = unilateral.max((psi.value - phi.value).norm() / phi.value.norm());
    }
    outcome(
        expansion <= DEGENERATION_TOL && to_gauss <= DEGENERATION_TOL && unilateral <= UNILATERAL_TOL,
        format!(
            "expansion at c=q vs companion {expansion:.2e}; alpha relation at d=q vs q-Gauss {to_gauss:.2e}; \
             psi with lower q vs phi {unilateral:.2e}"
        ),
    )
}

fn d_independence() -> Outcome {
    let id = d_independent();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let worst = worst_over(&id, 20, SEED, |p| {
        let other = id.sample(&mut rng).ok()?["d"];
        id.violated(&p.with("d", other)).is_none().then_some(())?;
        let mut cx = EvalContext::new(p.q).ok()?;
        let x = two_phi_bracket(p, p["d"], &mut cx).ok()?;
        let y = two_phi_bracket(p, other, &mut cx).ok()?;
        Some(residual(sum(&x), sum(&y)))
    });
    outcome(
        worst <= DEFAULT_TOL,
        format!("bracket at two values of d, 20 points, worst {worst:.2e}"),
    )
}

/// `theta f(x) = (f(x/q) - f(x)) / (x/q)` unrolled recursively.
fn theta_brute(f: &dyn Fn(Complex) -> Complex, n: usize, x: Complex, q: Complex) -> Complex {
    if n == 0 {
        return f(x);
    }
    let xq = x / q;
    (theta_brute(f, n - 1, xq, q) - theta_brute(f, n - 1, x, q)) / xq
}

fn operator_relations() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for id in ["op-o1", "op-o2"] {
        let r = verify(id, &config()).expect("registered");
        let max_q = r
            .samples
            .iter()
            .filter_map(|s| s.params.get("q"))
            .map(|q| q.norm())
            .fold(0.0, f64::max);
        pass &= r.all_passed()
            && r.summary.passed == SAMPLES
            && r.summary.max_residual <= DEFAULT_TOL
            && max_q <= OPERATOR_MAX_Q;
        details.push(format!(
            "{id} {}/{SAMPLES} max {:.2e} (|q| <= {max_q:.2})",
            r.summary.passed, r.summary.max_residual
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let q = polar(&mut rng, 0.2, 0.7);
        let base = QBase::new(q).unwrap();
        let (u, v) = (polar(&mut rng, 0.2, 1.0), polar(&mut rng, 0.2, 1.0));
        let a = polar(&mut rng, 0.3, 1.0);
        let g = move |x: Complex| (c(1.0, 0.0) - u * x) * (c(1.0, 0.0) + v * x * x) / (c(2.0, 0.0) - x * u * v);
        let f = ParamFunction::new("rational", move |x| Ok(g(x)));
        for n in 0..=4 {
            let table = theta_pow(&f, n, a, &base).unwrap();
            let brute = theta_brute(&g, n, a, q);
            worst = worst.max((table - brute).norm() / brute.norm().max(1.0));
        }
    }
    pass &= worst <= THETA_TOL;
    details.push(format!("theta^n for n <= 4 vs recursion {worst:.2e}"));
    outcome(pass, details.join("; "))
}

fn cross_derivation() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for id in ["eq-slater", "eq-slater-image", "eq-infprod", "eq-infprod-quotient"] {
        let r = verify(id, &config()).expect("registered");
        pass &= r.all_passed() && r.summary.passed == SAMPLES && r.summary.max_residual <= DEFAULT_TOL;
        details.push(format!("{id} {:.2e}", r.summary.max_residual));
    }
    let termwise = worst_over(&slater_two_term(), 20, SEED, |p| {
        let mut cx = EvalContext::new(p.q).ok()?;
        let img = slater_image_terms(p, &mut cx).ok()?;
        let k = img.scale();
        img.slater
            .iter()
            .zip(&img.alpha)
            .map(|(s, t)| residual(s.value, k * t.value))
            .reduce(f64::max)
    });
    pass &= termwise <= DEFAULT_TOL;
    details.push(format!("termwise image {termwise:.2e}"));
    outcome(pass, details.join("; "))
}

/// General term from q-shifted factorials alone.
fn naive_term(spec: &SeriesSpec, k: usize) -> Complex {
    let b = &spec.base;
    let k = k as i64;
    let poch = |xs: &[Complex]| xs.iter().map(|&x| qpoch_finite(x, k, b).value).product::<Complex>();
    let mut den = poch(&spec.lower);
    if spec.kind == SeriesKind::Unilateral {
        den *= qpoch_finite(b.q(), k, b).value;
    }
    let e = spec.normalization_exponent() as i32;
    let norm: Complex = (0..k).map(|j| (-b.pow(j)).powi(e)).product();
    poch(&spec.upper) / den * norm * spec.z.powi(k as i32)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let base = QBase::new(polar(&mut rng, 0.1, 0.8)).unwrap();
        let upper: Vec<_> = (0..rng.gen_range(1..=4)).map(|_| polar(&mut rng, 0.1, 2.0)).collect();
        let lower: Vec<_> = (0..rng.gen_range(0..=3)).map(|_| polar(&mut rng, 0.1, 2.0)).collect();
        let z = polar(&mut rng, 0.1, 1.5);
        let spec = if i % 2 == 0 {
            SeriesSpec::phi(upper, lower, z, base)
        } else {
            SeriesSpec::psi(upper, lower, z, base)
        };
        for (k, t) in spec.recurrence_terms(30).into_iter().enumerate() {
            let n = naive_term(&spec, k);
            // relative error is meaningless for subnormal terms
            if n.norm() > 1e-290 {
                worst = worst.max((t - n).norm() / n.norm());
            }
        }
    }
    outcome(
        worst <= ORACLE_TOL,
        format!("100 specs x 30 terms, worst relative difference {worst:.2e}"),
    )
}

fn stripped(reports: &[VerificationReport]) -> String {
    to_json(
        &reports
            .iter()
            .map(VerificationReport::without_timing)
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

fn statuses(reports: &[VerificationReport]) -> Vec<(String, bool)> {
    reports.iter().map(|r| (r.id.clone(), r.all_passed())).collect()
}

fn determinism() -> Outcome {
    let cfg = config();
    let first = verify_all(&cfg).unwrap();
    let second = verify_all(&cfg).unwrap();
    let serial = verify_all(&VerificationConfig { parallel: false, ..cfg }).unwrap();
    let same = stripped(&first) == stripped(&second);
    let same_serial = stripped(&first) == stripped(&serial);
    let reference = statuses(&first);
    let robust = (1..=5).all(|s| statuses(&verify_all(&VerificationConfig { seed: s, ..cfg }).unwrap()) == reference);
    outcome(
        same && same_serial && robust,
        format!("repeat identical: {same}; serial identical: {same_serial}; statuses stable over 5 seeds: {robust}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 identity suite", identity_suite),
        ("2 Dougall sum", dougall_check),
        ("3 degeneration chain", degeneration_chain),
        ("4 d-independence", d_independence),
        ("5 operator relations", operator_relations),
        ("6 cross-derivation consistency", cross_derivation),
        ("7 oracle equivalence", oracle_equivalence),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
