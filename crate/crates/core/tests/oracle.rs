use fibext::completion::{Level, PrecisionPolicy};
use fibext::contfrac::{convergent_stream, PartialQuotients, XiSource};
use fibext::extremal::{approx_error_at, construct, XiPowers};
use fibext::fibword::{det3, ApproxTriple, Provenance};
use fibext::oracle::*;
use fibext::ring::{Domain, RingElement};
use fibext::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2(c: &[i64]) -> RingElement {
    RingElement::poly(2, c)
}

fn oracle(a: &RingElement, b: &RingElement) -> Oracle {
    let pq = PartialQuotients::fibonacci(a, b).unwrap();
    Oracle::new(XiSource { pq }, PrecisionPolicy::default())
}

fn f2_oracle() -> Oracle {
    oracle(&f2(&[0, 1]), &f2(&[1, 1]))
}

fn z_oracle() -> Oracle {
    oracle(&RingElement::int(3), &RingElement::int(4))
}

/// The 2×3 matrix of two triples has rank 2.
fn independent(x: &ApproxTriple, y: &ApproxTriple) -> bool {
    let m = |a: &RingElement, b: &RingElement, c: &RingElement, d: &RingElement| &(a * d) - &(b * c);
    !(m(&x.x0, &x.x1, &y.x0, &y.x1).is_zero()
        && m(&x.x0, &x.x2, &y.x0, &y.x2).is_zero()
        && m(&x.x1, &x.x2, &y.x1, &y.x2).is_zero())
}

#[test]
fn best_for_x0_examples() {
    let o = f2_oracle();
    let b = o.best_for_x0(&f2(&[1])).unwrap();
    assert!(b.x1.is_zero() && b.x2.is_zero());
    assert_eq!(b.log_l.exact_int(), Some(-1));
    let b = o.best_for_x0(&f2(&[0, 1])).unwrap();
    assert_eq!(b.x1, f2(&[1]));
    assert!(b.log_l.exact_int().unwrap() <= -1);
    assert!(matches!(o.best_for_x0(&f2(&[])), Err(Error::ZeroInput(_))));

    // at a convergent denominator the first coordinate is the numerator
    let o = z_oracle();
    let pq = PartialQuotients::fibonacci(&RingElement::int(3), &RingElement::int(4)).unwrap();
    for c in convergent_stream(&pq, 8).unwrap() {
        let b = o.best_for_x0(&c.q).unwrap();
        assert_eq!(b.x1, c.p, "j={}", c.j);
    }
}

/// No `(x₁, x₂)` in a window around the rounded pair certainly beats it.
fn assert_true_minimizer(o: &Oracle, x0: &RingElement, shifts: &[RingElement], p: &XiPowers) {
    let best = o.best_for_x0(x0).unwrap();
    for s1 in shifts {
        for s2 in shifts {
            let t = ApproxTriple::new(x0.clone(), &best.x1 + s1, &best.x2 + s2, Provenance::Oracle);
            let l = approx_error_at(&t, p).unwrap();
            assert!(!l.certainly_lt(&best.log_l), "x0 = {x0}: ({}, {}) beats ({}, {})", t.x1, t.x2, best.x1, best.x2);
        }
    }
}

#[test]
fn best_for_x0_is_a_true_minimizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let o = z_oracle();
    let p = XiPowers::at(&o.source, Level { bits: 256, window: 0 }).unwrap();
    let shifts: Vec<RingElement> = (-2..=2).map(RingElement::int).collect();
    for _ in 0..1000 {
        let x0 = RingElement::int(rng.gen_range(1..1_000_000));
        assert_true_minimizer(&o, &x0, &shifts, &p);
    }

    let o = oracle(&RingElement::gauss(2, 1), &RingElement::gauss(2, -1));
    let p = XiPowers::at(&o.source, Level { bits: 256, window: 0 }).unwrap();
    let shifts: Vec<RingElement> = (-1..=1).flat_map(|x| (-1..=1).map(move |y| RingElement::gauss(x, y))).collect();
    for _ in 0..1000 {
        let x0 = RingElement::gauss(rng.gen_range(-1000..1000), rng.gen_range(1..1000));
        assert_true_minimizer(&o, &x0, &shifts, &p);
    }

    let o = f2_oracle();
    let p = XiPowers::at(&o.source, Level { bits: 64, window: 64 }).unwrap();
    let shifts: Vec<RingElement> = (0..8).map(|k| f2(&[k & 1, (k >> 1) & 1, (k >> 2) & 1])).collect();
    for _ in 0..1000 {
        let c: Vec<i64> = (0..rng.gen_range(1..12)).map(|_| rng.gen_range(0..2)).collect();
        let x0 = f2(&c);
        if x0.is_zero() {
            continue;
        }
        assert_true_minimizer(&o, &x0, &shifts, &p);
    }
}

#[test]
fn ell_examples() {
    let o = f2_oracle();
    let p = o.ell_of(&HeightBound::Degree(1)).unwrap().unwrap();
    assert_eq!(p.log_ell.exact_int(), Some(-1));
    assert!(p.exhaustive);
    let allowed = [
        ApproxTriple::new(f2(&[1]), f2(&[]), f2(&[]), Provenance::Oracle),
        ApproxTriple::new(f2(&[0, 1]), f2(&[1]), f2(&[]), Provenance::Oracle),
    ];
    assert!(allowed.iter().any(|a| a.equal_up_to_unit(&p.witness)), "{}", p.witness);

    let o = z_oracle();
    let p = o.ell_of(&HeightBound::Norm(1.into())).unwrap().unwrap();
    assert_eq!(p.witness.x0.norm().unwrap(), 1.into());
    assert!(p.witness.x1.is_zero() && p.witness.x2.is_zero());
    // ℓ(1) = |ξ| since |ξ| > |ξ²|
    let xi = 0.3093637414287749f64;
    assert!((p.log_ell.mid_f64() - xi.ln()).abs() < 1e-12);
}

#[test]
fn f2_ladder_contains_constructed_heights() {
    let (a, b) = (f2(&[0, 1]), f2(&[1, 1]));
    let o = oracle(&a, &b);
    let ladder = o.minimal_point_sequence(&HeightBound::Degree(8)).unwrap();
    let heights: Vec<i64> = ladder.iter().map(|p| p.witness.x0.degree().unwrap() as i64).collect();
    for h in [1, 3, 6] {
        assert!(heights.contains(&h), "{heights:?}");
    }
    for w in ladder.windows(2) {
        assert!(!w[0].log_ell.certainly_lt(&w[1].log_ell), "ell must not increase");
        assert!(w[0].log_x.certainly_lt(&w[1].log_x) || w[0].log_x == w[1].log_x);
        assert!(independent(&w[0].witness, &w[1].witness), "{} {}", w[0].witness, w[1].witness);
        assert!(w[1].exhaustive);
    }
    let run = construct(&a, &b, 5, &PrecisionPolicy::default()).unwrap();
    for i in 1..=4 {
        let x = run.stream.get(i).triple();
        let p = o.ell_of(&HeightBound::of(&x.x0)).unwrap().unwrap();
        assert!(agrees_with(&p, &x), "i={i}: {} vs {}", p.witness, x);
    }
}

#[test]
fn integer_oracle_matches_construction() {
    let (a, b) = (RingElement::int(3), RingElement::int(4));
    let o = oracle(&a, &b);
    let run = construct(&a, &b, 6, &PrecisionPolicy::default()).unwrap();
    let cands = o.search(&HeightBound::Norm((20_000i64 * 20_000).into())).unwrap();
    assert_eq!(cands.len(), 20_000);
    for i in 1..=3 {
        let x = run.stream.get(i).triple();
        let p = o.best_among(&cands, &HeightBound::of(&x.x0)).unwrap().unwrap();
        assert!(p.triple.equal_up_to_unit(&x), "i={i}: {} vs {x}", p.triple);
    }
    let lad = ladder(&o, &cands).unwrap();
    for w in lad.windows(2) {
        assert!(!w[0].log_ell.certainly_lt(&w[1].log_ell));
        assert!(independent(&w[0].witness, &w[1].witness));
    }
    let mut heights: Vec<HeightBound> = lad.iter().map(|p| p.bound.clone()).collect();
    heights.extend(default_grid(o.domain, (2.0e4f64).ln(), 40));
    let sweep = dependence_sweep(&o, &cands, &heights, 6).unwrap();
    assert_eq!(sweep.violations, 0);
    assert!(sweep.checked > 0);
}

#[test]
fn enumeration_counts() {
    let d = Domain::Integers;
    assert_eq!(enumerate_x0(d, &HeightBound::Norm(100.into()), DEFAULT_LIMIT).unwrap().len(), 10);
    let f = Domain::poly(2).unwrap();
    // nonzero monic polynomials of degree ≤ 10 over F₂
    assert_eq!(enumerate_x0(f, &HeightBound::Degree(10), DEFAULT_LIMIT).unwrap().len(), 2047);
    let f3 = Domain::poly(3).unwrap();
    assert_eq!(enumerate_x0(f3, &HeightBound::Degree(2), DEFAULT_LIMIT).unwrap().len(), 1 + 3 + 9);
    // ℤ[i] up to units: x > 0, y ≥ 0 with x² + y² ≤ 2 → 1, 1+i
    assert_eq!(enumerate_x0(Domain::Gaussian, &HeightBound::Norm(2.into()), DEFAULT_LIMIT).unwrap().len(), 2);
    assert!(matches!(
        enumerate_x0(f, &HeightBound::Degree(30), DEFAULT_LIMIT),
        Err(Error::SearchSpaceTooLarge { .. })
    ));
}

#[test]
fn dependence_examples() {
    let o = z_oracle();
    let bound = HeightBound::Norm((2000i64 * 2000).into());
    let cands = o.search(&bound).unwrap();
    let ranked = o.ranked(&cands, &bound).unwrap();
    let best = ranked[0];
    let cert = dependence_check([best, best, ranked[1]], &bound);
    match cert {
        Ok(c) => assert!(c.det.is_zero()),
        Err(Error::CriterionPreconditionUnmet(_)) => {
            // second point misses the threshold; repeated rows alone still qualify
            let c = dependence_check([best, best, best], &bound).unwrap();
            assert!(c.det.is_zero());
        }
        Err(e) => panic!("{e}"),
    }
    assert!(det3(&best.triple, &best.triple, &ranked[2].triple).is_zero());

    // x₀ = 1 has L = |ξ| ≈ 0.31, far above (6X)^{-1/2} at X = 2000
    let one = cands.iter().find(|c| c.triple.x0 == RingElement::int(1)).unwrap();
    assert!(matches!(dependence_check([one, one, one], &bound), Err(Error::CriterionPreconditionUnmet(_))));
    // a height the point does not fit under
    let small = HeightBound::Norm(1.into());
    assert!(matches!(dependence_check([best, best, best], &small), Err(Error::CriterionPreconditionUnmet(_))));
}

#[test]
fn f2_dependence_sweep_has_no_violations() {
    let o = f2_oracle();
    let cands = o.search(&HeightBound::Degree(10)).unwrap();
    let heights: Vec<HeightBound> = (1..=10).map(HeightBound::Degree).collect();
    let sweep = dependence_sweep(&o, &cands, &heights, 6).unwrap();
    assert_eq!(sweep.violations, 0);
    // at X = e⁶ only the constructed x₃ is below (6X)^{-1/2}; the next points have L = e⁻³
    let at6 = o.ranked(&cands, &HeightBound::Degree(6)).unwrap();
    assert_eq!(at6[0].log_l.exact_int(), Some(-6));
    assert!(at6[1].log_l.exact_int().unwrap() >= -3);
    assert!(matches!(
        dependence_check([at6[0], at6[1], at6[2]], &HeightBound::Degree(6)),
        Err(Error::CriterionPreconditionUnmet(_))
    ));
}

#[test]
fn degenerate_examples() {
    let z = RingElement::int;
    let t = |a: RingElement, b: RingElement, c: RingElement| ApproxTriple::new(a, b, c, Provenance::Oracle);
    assert_eq!(degenerate_decompose(&t(z(4), z(6), z(9))).unwrap(), (z(1), z(2), z(3)));
    assert_eq!(degenerate_decompose(&t(z(-4), z(-6), z(-9))).unwrap(), (z(-1), z(2), z(3)));
    let (u, m, n) = degenerate_decompose(&t(f2(&[0, 0, 1]), f2(&[0, 1, 1]), f2(&[1, 0, 1]))).unwrap();
    assert_eq!((u, m, n), (f2(&[1]), f2(&[0, 1]), f2(&[1, 1])));
    assert!(matches!(degenerate_decompose(&t(z(1), z(1), z(2))), Err(Error::NotDegenerate)));
    assert!(matches!(degenerate_decompose(&t(z(2), z(2), z(2))), Err(Error::NotPrimitive)));
    let s = RingElement::sqrt_m5;
    assert!(degenerate_decompose(&t(s(1, 0), s(1, 0), s(1, 0))).is_err());
}

#[test]
fn f2_scan() {
    let o = f2_oracle();
    let grid = default_grid(o.domain, 10.0, 0);
    assert_eq!(grid.len(), 10);
    let rep = c1_scan(&o, &grid).unwrap();
    assert_eq!(rep.rows.len(), 10);
    assert!(rep.floor.is_some(), "envelope floor must be a finite log, i.e. positive");
    assert!(!rep.degrading);
    for w in rep.rows.windows(2) {
        assert!(!w[0].log_ell.certainly_lt(&w[1].log_ell));
    }
    // F₂ values are exact: ℓ(e^d) is e^{-k}
    for r in &rep.rows {
        assert!(r.log_ell.exact_int().is_some());
    }
    // constructed heights λ₂ = 3, λ₃ = 6 are local minima of ℓ(X)X^{1/γ}
    let scaled = |d: usize| rep.rows[d - 1].log_scaled.mid_f64();
    for d in [3, 6] {
        assert!(scaled(d) < scaled(d - 1) && scaled(d) < scaled(d + 1), "d={d}");
    }

    // doubling ξ's precision leaves every ℓ unchanged
    let mut finer = f2_oracle();
    finer.policy.start = finer.policy.start.doubled();
    let again = c1_scan(&finer, &grid).unwrap();
    for (x, y) in rep.rows.iter().zip(&again.rows) {
        assert_eq!(x.log_ell, y.log_ell);
        assert_eq!(x.witness, y.witness);
    }
}

#[test]
fn integer_scan_is_bounded_below() {
    let o = z_oracle();
    let grid = default_grid(o.domain, (2.0e4f64).ln(), 40);
    let rep = c1_scan(&o, &grid).unwrap();
    assert!(rep.floor.is_some());
    assert!(!rep.degrading);
    for w in rep.rows.windows(2) {
        assert!(!w[0].log_ell.certainly_lt(&w[1].log_ell));
    }
}

#[test]
fn search_is_schedule_independent() {
    let o = z_oracle();
    let bound = HeightBound::Norm((3000i64 * 3000).into());
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| ladder(&o, &o.search(&bound).unwrap()).unwrap());
    let b = four.install(|| ladder(&o, &o.search(&bound).unwrap()).unwrap());
    let key = |v: &[MinimalPoint]| v.iter().map(|p| (p.witness.clone(), p.log_ell.clone())).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
}

#[test]
fn primitive_filter_needs_a_ufd() {
    let o = oracle(&RingElement::sqrt_m5(3, 0), &RingElement::sqrt_m5(2, 1));
    assert!(matches!(o.primitive_only(true), Err(Error::UnsupportedDomain { .. })));
    let o = z_oracle().primitive_only(true).unwrap();
    let p = o.ell_of(&HeightBound::Norm(10_000.into())).unwrap().unwrap();
    assert_eq!(p.primitive, Some(true));
}
