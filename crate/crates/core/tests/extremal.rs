use std::sync::OnceLock;

use fibext::arith::{Dyadic, Interval};
use fibext::completion::PrecisionPolicy;
use fibext::contfrac::PartialQuotients;
use fibext::extremal::*;
use fibext::fibword::{triples_stream, ApproxTriple, Provenance};
use fibext::ring::RingElement;
use fibext::Error;

const INV_GAMMA: f64 = 0.6180339887498949;

fn f2(c: &[i64]) -> RingElement {
    RingElement::poly(2, c)
}

fn run(which: &str) -> &'static Construction {
    static F2: OnceLock<Construction> = OnceLock::new();
    static Z: OnceLock<Construction> = OnceLock::new();
    static ZI: OnceLock<Construction> = OnceLock::new();
    static ZS: OnceLock<Construction> = OnceLock::new();
    let p = PrecisionPolicy::default();
    match which {
        "F2[u]" => F2.get_or_init(|| construct(&f2(&[0, 1]), &f2(&[1, 1]), 20, &p).unwrap()),
        "Z" => Z.get_or_init(|| construct(&RingElement::int(3), &RingElement::int(4), 20, &p).unwrap()),
        "Z[i]" => ZI.get_or_init(|| construct(&RingElement::gauss(2, 1), &RingElement::gauss(2, -1), 20, &p).unwrap()),
        _ => ZS.get_or_init(|| construct(&RingElement::sqrt_m5(3, 0), &RingElement::sqrt_m5(2, 1), 20, &p).unwrap()),
    }
}

const ALL: [&str; 4] = ["F2[u]", "Z", "Z[i]", "Z[sqrt-5]"];

/// `F_1 = 1, F_2 = 2, …`
fn fib(i: usize) -> i64 {
    let (mut x, mut y) = (1, 2);
    for _ in 1..i {
        (x, y) = (y, x + y);
    }
    x
}

/// `[0; 3, 4, 3, 3, 4, …]` in floating point.
fn hand_xi_z() -> f64 {
    let (mut w, mut prev) = (String::from("ab"), String::from("a"));
    while w.len() < 60 {
        let next = format!("{w}{prev}");
        prev = std::mem::replace(&mut w, next);
    }
    w[..60].chars().rev().fold(0.0, |x, c| 1.0 / (if c == 'a' { 3.0 } else { 4.0 } + x))
}

#[test]
fn golden_ratio_enclosure() {
    let g = GoldenRatio::new();
    let sq = g.gamma.mul(&g.gamma);
    assert!(sq.overlaps(&g.gamma.add(&Interval::from_int(1))));
    assert!(g.gamma.width() <= Dyadic::pow2(-128));
    assert!((g.inv.mid_f64() - INV_GAMMA).abs() < 1e-15);
    assert!(g.gamma.sub(&Interval::from_int(1)).overlaps(&g.inv));
}

#[test]
fn approx_error_examples() {
    let c = run("F2[u]");
    let xi = &c.xi.xi;
    let t = |x0: &[i64], x1: &[i64], x2: &[i64]| ApproxTriple::new(f2(x0), f2(x1), f2(x2), Provenance::Oracle);
    assert_eq!(approx_error(&t(&[1], &[], &[]), xi).unwrap().exact_int(), Some(-1));
    assert_eq!(approx_error(&t(&[], &[], &[1]), xi).unwrap().exact_int(), Some(0));
    let l = approx_error(&t(&[0, 0, 1, 1], &[1, 1, 1], &[1, 1]), xi).unwrap();
    assert!(l.hi().unwrap() <= &Dyadic::from_int(-3));

    for name in ["Z", "Z[i]"] {
        let c = run(name);
        let d = c.a.domain();
        let l = approx_error(&ApproxTriple::new(d.zero(), d.zero(), d.one(), Provenance::Oracle), &c.xi.xi).unwrap();
        assert_eq!(l.exact_int(), Some(0), "{name}");
    }
}

#[test]
fn function_field_heights_are_exact() {
    let c = run("F2[u]");
    for i in 1..=20 {
        assert_eq!(c.record(i).lambda.exact_int(), Some(fib(i + 2) - 2), "i={i}");
    }
    assert_eq!(c.constants.log_theta.exact_int(), Some(2));
    let rc = ratio_limit_check(&c.records, &c.constants.log_theta, 3).unwrap();
    assert_eq!(rc.deviations.len(), 18);
    assert!(rc.deviations.iter().all(|(_, d)| d.is_point() && d.lo().is_zero()));
    assert!(rc.max_abs.is_zero());

    // heights alone, further out
    let s = triples_stream(&f2(&[0, 1]), &f2(&[1, 1]), 25).unwrap();
    let lam: Vec<i64> = s.matrices.iter().map(|m| log_height(&m.x0).exact_int().unwrap()).collect();
    for i in 1..=25 {
        assert_eq!(lam[i - 1], fib(i + 2) - 2, "i={i}");
        if i >= 3 {
            assert_eq!(lam[i - 1] - lam[i - 2] - lam[i - 3], 2);
        }
    }
    assert!(rc.deviations.iter().all(|(_, d)| d.is_point() && d.lo().is_zero()));
    assert!(rc.max_abs.is_zero());
}

#[test]
fn c3_bound_holds() {
    let c = run("F2[u]");
    let v = verify_c3_bound(&c.records[..20], &c.constants.log_c3);
    assert!(v.iter().all(|v| *v == Verdict::Pass));
    let c = run("Z");
    let v = verify_c3_bound(&c.records[..15], &c.constants.log_c3);
    assert!(v.iter().all(|v| *v == Verdict::Pass));
    // i = 1 by hand: |aξ − 1| ≤ c₃/|a| with ξ ≈ 0.30940
    let x1 = c.record(1);
    let c3 = c.constants.c3.to_f64();
    assert!(x1.mu.hi_f64() <= (c3 / 3.0).ln());
    // L(x₁) = max(|3ξ − 1|, |3ξ²|) = 3ξ², with ξ from 60 quotients evaluated backwards
    let xi = hand_xi_z();
    assert!((xi - 0.309364).abs() < 1e-6);
    assert!(((3.0 * xi * xi).ln() - x1.mu.mid_f64()).abs() < 1e-12);
}

#[test]
fn theta_examples() {
    let c = run("F2[u]");
    assert_eq!(c.constants.log_theta.exact_int(), Some(2));
    let c = run("Z");
    let th = c.constants.log_theta.as_interval().unwrap();
    // ξ² + 7ξ + 13 at the ball midpoint of ξ
    let xi = hand_xi_z();
    assert!((c.xi.xi.as_ball().unwrap().re().to_f64() - xi).abs() < 1e-15);
    let want = xi * xi + 7.0 * xi + 13.0;
    assert!((want - 15.26).abs() < 0.005);
    assert!((th.mid_f64() - want.ln()).abs() < 1e-14);
    for name in ALL {
        assert!(run(name).constants.log_theta.lo().is_some(), "{name}: theta must exclude 0");
    }
}

#[test]
fn ratio_deviation_bounds() {
    let c = run("Z");
    let rc = ratio_limit_check(&c.records, &c.constants.log_theta, 12).unwrap();
    // ln(1 + 1e-3) ≈ 1e-3; max_abs bounds |ln(ratio/|θ|)|
    assert!(rc.max_abs.to_f64() <= (1.0f64 + 1e-3).ln(), "{}", rc.max_abs.to_f64());
    assert!(rc.within_relative(0.01));
    let c = run("Z[i]");
    let rc = ratio_limit_check(&c.records, &c.constants.log_theta, 10).unwrap();
    assert!(rc.max_abs.to_f64() <= (1.0f64 + 1e-2).ln(), "{}", rc.max_abs.to_f64());
}

#[test]
fn sandwich_is_consistent() {
    let g = GoldenRatio::new();
    for name in ALL {
        let c = run(name);
        let (c4, c5) = (&c.constants.log_c4, &c.constants.log_c5);
        assert!(c4 <= c5, "{name}");
        assert!(c.sandwich_violations.is_empty(), "{name}: {:?}", c.sandwich_violations);
        assert!(sandwich_violations(&c.records, c4, c5, &g).is_empty());
        // re-scan: every r_i with 2 ≤ i ≤ N is inside [c₄^γ/c₅, c₅^γ/c₄]
        for r in &c.records[1..] {
            assert!(in_band(r.log_r.as_ref().unwrap(), c4, c5, &g), "{name} i={}", r.index);
        }
    }
    let c = run("F2[u]");
    let rs: Vec<f64> = c.records[1..].iter().map(|r| r.log_r.as_ref().unwrap().mid_f64()).collect();
    let width = rs.iter().cloned().fold(f64::MIN, f64::max) - rs.iter().cloned().fold(f64::MAX, f64::min);
    assert!(width <= 4.0, "{width}");
}

#[test]
fn c2_formula_shape() {
    let g = GoldenRatio::new();
    let zero = Dyadic::zero();
    assert!(c2_of(&Interval::from_int(0), &zero, &zero, &g).is_zero());
    let a = c2_of(&Interval::from_int(1), &Dyadic::from_int(-1), &Dyadic::from_int(1), &g);
    let b = c2_of(&Interval::from_int(1), &Dyadic::from_int(-1), &Dyadic::from_int(2), &g);
    assert!(b < a);
    // ln c₂ = 1 − 1/γ − 1
    assert!((a.to_f64() + INV_GAMMA).abs() < 1e-15);
    assert!(a.to_f64() <= -INV_GAMMA);
    for name in ALL {
        let k = &run(name).constants;
        let want = k.log_c3.mid_f64() + k.log_c4.to_f64() * INV_GAMMA - k.log_c5.to_f64();
        assert!((k.log_c2.to_f64() - want).abs() < 1e-12, "{name}");
        assert!(k.log_c2_sound >= k.log_c2, "{name}");
    }
}

#[test]
fn cover_examples() {
    let p = PrecisionPolicy::default();
    let c = run("F2[u]");
    let hit = cover(&Interval::from_int(100), c, c.c2_literal(), &p).unwrap();
    assert_eq!(hit.index, 8);
    assert_eq!(hit.height, Verdict::Pass);
    assert_eq!(hit.verdict(), Verdict::Pass);
    // boundary: X = X_i exactly
    for i in 1..20 {
        let at = cover(&c.log_height(i), c, c.c2_sound(), &p).unwrap();
        assert_eq!(at.index, i);
        assert_eq!(at.triple, c.stream.get(i).triple());
    }
    assert!(matches!(cover(&Interval::from_int(0), c, c.c2_literal(), &p), Err(Error::OutOfRange(_))));
    assert!(matches!(cover(&Interval::from_int(1_000_000), c, c.c2_literal(), &p), Err(Error::OutOfRange(_))));

    let c = run("Z");
    let mid = c.log_height(5).add(&c.log_height(6)).scale(1).div(&Interval::from_int(2), 128);
    let hit = cover(&mid, c, c.c2_literal(), &p).unwrap();
    assert_eq!(hit.index, 5);
    assert_eq!(hit.verdict(), Verdict::Pass);
}

#[test]
fn exponent_profile_tends_to_inverse_golden_ratio() {
    for name in ALL {
        let c = run(name);
        for (i, e) in exponent_profile(&c.records) {
            if (12..=20).contains(&i) {
                assert!((e.lo().to_f64() - INV_GAMMA).abs() < 0.01, "{name} i={i}");
                assert!((e.hi().to_f64() - INV_GAMMA).abs() < 0.01, "{name} i={i}");
            }
        }
    }
    let f = exponent_profile(&run("F2[u]").records);
    let e20 = &f.iter().find(|x| x.0 == 20).unwrap().1;
    // exact: −μ_20 / λ_21 with λ_i = F_{i+2} − 2 and μ_i = −λ_{i+1}... checked via enclosure width
    assert!(e20.width() <= Dyadic::pow2(-100));
}

#[test]
fn records_are_certified() {
    for name in ALL {
        let c = run(name);
        assert!(c.records.iter().all(|r| r.cert == Verdict::Pass), "{name}");
        for w in c.records.windows(2) {
            assert!(w[0].lambda.certainly_lt(&w[1].lambda), "{name}");
        }
        let pq = PartialQuotients::fibonacci(&c.a, &c.b).unwrap();
        assert_eq!(&c.constants.rho, pq.rho());
        let c3 = (&Dyadic::one() + &c.constants.xi_abs).to_f64() * c.constants.c0.to_f64();
        assert!((c.constants.c3.to_f64() - c3).abs() <= 1e-12 * c3);
    }
}

#[test]
fn construct_needs_three_indices() {
    let p = PrecisionPolicy::default();
    assert!(construct(&RingElement::int(3), &RingElement::int(4), 2, &p).is_err());
}

