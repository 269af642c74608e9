//! Continued fractions `[0, a_1, a_2, …]` over A.
//!
//! `Φ(a_1)…Φ(a_j) = [[q_j, q_{j−1}], [p_j, p_{j−1}]]`, so convergents come
//! from running 2×2 products. For the Fibonacci pattern the prefix of length
//! `J` is a concatenation of Fibonacci words (Zeckendorf decomposition of
//! `J`), which lets us jump straight to deep convergents.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::{Dyadic, Interval};
use crate::completion::{embed_at, Ball, Jet, Level, Recipe, Scalar};
use crate::error::{Error, Result};
use crate::fibword::{fib_len, fib_word, fibonacci_prefix, Letter};
use crate::ring::{Domain, Mat2, RingElement};

/// Working precision for the ρ and c₀ enclosures.
const CONST_PREC: u64 = 128;

/// Largest certified dyadic `ρ` with `min(|a|, |b|) ≥ 1 + ρ`; must exceed 1.
pub fn rho_of(a: &RingElement, b: &RingElement) -> Result<Dyadic> {
    if a.domain() != b.domain() {
        return Err(Error::DomainMismatch(a.domain().to_string(), b.domain().to_string()));
    }
    if a == b {
        return Err(Error::EqualQuotients);
    }
    rho_single(if a.abs_cmp(b).is_le() { a } else { b })
}

fn rho_single(x: &RingElement) -> Result<Dyadic> {
    let too_small = || Error::RhoTooSmall(x.to_string());
    let rho = match x {
        RingElement::Poly(f) => {
            let d = f.degree().ok_or_else(too_small)?;
            if d == 0 {
                return Err(too_small());
            }
            let e = Interval::from_int(d as i64).exp(CONST_PREC);
            e.lo() - &Dyadic::one()
        }
        _ => {
            let n = x.norm().unwrap();
            if n <= BigInt::from(4) {
                return Err(too_small());
            }
            &Dyadic::sqrt_floor(&Dyadic::from_bigint(n), CONST_PREC) - &Dyadic::one()
        }
    };
    if rho <= Dyadic::one() {
        return Err(too_small());
    }
    Ok(rho)
}

/// Upper bound for `c₀ = ρ/(ρ²−1)`; decreasing in ρ, so a lower ρ is safe.
pub fn c0_upper(rho: &Dyadic) -> Dyadic {
    let den = &(rho * rho) - &Dyadic::one();
    Dyadic::div_ceil(rho, &den, CONST_PREC)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Pattern {
    Constant(RingElement),
    /// Quotients follow the infinite Fibonacci word over `{a, b}`.
    Fibonacci(RingElement, RingElement),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialQuotients {
    pattern: Pattern,
    rho: Dyadic,
}

impl PartialQuotients {
    pub fn fibonacci(a: &RingElement, b: &RingElement) -> Result<Self> {
        let rho = rho_of(a, b)?;
        Ok(PartialQuotients { pattern: Pattern::Fibonacci(a.clone(), b.clone()), rho })
    }

    pub fn constant(a: &RingElement) -> Result<Self> {
        Ok(PartialQuotients { pattern: Pattern::Constant(a.clone()), rho: rho_single(a)? })
    }

    pub fn domain(&self) -> Domain {
        match &self.pattern {
            Pattern::Constant(a) | Pattern::Fibonacci(a, _) => a.domain(),
        }
    }

    pub fn rho(&self) -> &Dyadic {
        &self.rho
    }

    pub fn c0(&self) -> Dyadic {
        c0_upper(&self.rho)
    }

    /// `a_j`, `j ≥ 1`.
    pub fn quotient(&self, j: usize) -> RingElement {
        assert!(j >= 1);
        match &self.pattern {
            Pattern::Constant(a) => a.clone(),
            Pattern::Fibonacci(a, b) => match fibonacci_prefix(j).letters()[j - 1] {
                Letter::A => a.clone(),
                Letter::B => b.clone(),
            },
        }
    }

    fn quotients(&self, n: usize) -> Vec<RingElement> {
        match &self.pattern {
            Pattern::Constant(a) => vec![a.clone(); n],
            Pattern::Fibonacci(a, b) => fibonacci_prefix(n)
                .letters()
                .iter()
                .map(|l| if *l == Letter::A { a.clone() } else { b.clone() })
                .collect(),
        }
    }

    /// `Φ(a_1)…Φ(a_J)` without stepping through every index.
    pub fn prefix_matrix(&self, big_j: usize, cache: &mut Vec<Mat2>) -> Mat2 {
        match &self.pattern {
            Pattern::Constant(a) => mat_pow(&Mat2::quotient(a), big_j),
            Pattern::Fibonacci(a, b) => {
                let mut acc = Mat2::identity(a.domain());
                let mut rest = big_j;
                while rest > 0 {
                    // largest k with F_k <= rest
                    let mut k = 1;
                    while fib_len(k + 1) as usize <= rest {
                        k += 1;
                    }
                    acc = acc.mul(&fib_matrix(k, a, b, cache));
                    rest -= fib_len(k) as usize;
                }
                acc
            }
        }
    }
}

/// `Φ(w_k)`, memoized in `cache[k−1]`.
fn fib_matrix(k: usize, a: &RingElement, b: &RingElement, cache: &mut Vec<Mat2>) -> Mat2 {
    while cache.len() < k {
        let n = cache.len() + 1;
        let m = if n <= 2 {
            crate::fibword::phi(&fib_word(n), a, b)
        } else {
            cache[n - 2].mul(&cache[n - 3])
        };
        cache.push(m);
    }
    cache[k - 1].clone()
}

fn mat_pow(m: &Mat2, mut e: usize) -> Mat2 {
    let mut acc = Mat2::identity(m.domain());
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub j: usize,
    pub p: RingElement,
    pub q: RingElement,
    pub p_prev: RingElement,
    pub q_prev: RingElement,
}

impl Convergent {
    fn from_matrix(j: usize, m: &Mat2) -> Convergent {
        Convergent { j, q: m.a.clone(), q_prev: m.b.clone(), p: m.c.clone(), p_prev: m.d.clone() }
    }

    /// `p_j q_{j−1} − p_{j−1} q_j`.
    pub fn cross(&self) -> RingElement {
        &(&self.p * &self.q_prev) - &(&self.p_prev * &self.q)
    }
}

/// Convergents `1..=J` by incremental right-multiplication; the unit
/// determinant is checked at every step.
pub fn convergent_stream(pq: &PartialQuotients, big_j: usize) -> Result<Vec<Convergent>> {
    assert!(big_j >= 1);
    let d = pq.domain();
    let mut m = Mat2::identity(d);
    let mut out = Vec::with_capacity(big_j);
    for (k, a) in pq.quotients(big_j).iter().enumerate() {
        m = m.mul(&Mat2::quotient(a));
        let c = Convergent::from_matrix(k + 1, &m);
        if !c.cross().is_unit() {
            return Err(Error::IdentityViolated { index: k + 1, what: "convergent determinant is not a unit".into() });
        }
        out.push(c);
    }
    Ok(out)
}

/// Per-step growth `|q_{j+1}| ≥ ρ|q_j|`, certified exactly.
#[derive(Clone, Debug)]
pub struct GrowthCertificate {
    /// `(j, ln(|q_{j+1}|/|q_j|))`, approximate, for reporting.
    pub margins: Vec<(usize, f64)>,
    pub rho: Dyadic,
}

impl GrowthCertificate {
    pub fn min_ratio_log(&self) -> f64 {
        self.margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min)
    }
}

/// Certified `|x| ≥ ρ|y|` for nonzero ring elements.
fn at_least_rho_times(x: &RingElement, y: &RingElement, rho: &Dyadic) -> bool {
    match (x, y) {
        (RingElement::Poly(f), RingElement::Poly(g)) => {
            let diff = f.degree().unwrap() as i64 - g.degree().unwrap() as i64;
            let lo = Interval::from_int(diff).exp(CONST_PREC).lo().clone();
            &lo >= rho
        }
        _ => {
            let nx = Dyadic::from_bigint(x.norm().unwrap());
            let ny = Dyadic::from_bigint(y.norm().unwrap());
            nx >= &(rho * rho) * &ny
        }
    }
}

fn log_abs_f64(x: &RingElement) -> f64 {
    match x {
        RingElement::Poly(f) => f.degree().map_or(f64::NEG_INFINITY, |d| d as f64),
        _ => {
            let n = x.norm().unwrap();
            let bits = n.bits() as i64;
            let shift = (bits - 60).max(0);
            let top = (n >> shift as usize).to_f64().unwrap();
            0.5 * (top.ln() + shift as f64 * std::f64::consts::LN_2)
        }
    }
}

pub fn growth_check(pq: &PartialQuotients, convergents: &[Convergent]) -> Result<GrowthCertificate> {
    let mut margins = Vec::new();
    let one = pq.domain().one();
    // j = 0 → 1: |q_1| = |a_1| ≥ 1 + ρ > ρ|q_0|.
    let mut prev_q = &one;
    let mut prev_j = 0;
    for c in convergents {
        if !at_least_rho_times(&c.q, prev_q, &pq.rho) {
            return Err(Error::CertificationFailed { index: prev_j, what: "|q_{j+1}| < rho |q_j|".into() });
        }
        margins.push((prev_j, log_abs_f64(&c.q) - log_abs_f64(prev_q)));
        prev_q = &c.q;
        prev_j = c.j;
    }
    Ok(GrowthCertificate { margins, rho: pq.rho.clone() })
}

/// `p_{j+1} q_j − p_j q_{j+1}` is a unit, which gives
/// `|p_{j+1}/q_{j+1} − p_j/q_j| = 1/|q_j q_{j+1}|`.
pub fn gap_identity_check(cj: &Convergent, cnext: &Convergent) -> Result<RingElement> {
    if cnext.j != cj.j + 1 || cnext.p_prev != cj.p || cnext.q_prev != cj.q {
        return Err(Error::IdentityViolated { index: cj.j, what: "convergents are not consecutive".into() });
    }
    let cross = &(&cnext.p * &cj.q) - &(&cj.p * &cnext.q);
    if !cross.is_unit() {
        return Err(Error::IdentityViolated { index: cj.j, what: format!("gap numerator {cross} is not a unit") });
    }
    Ok(cross)
}

/// Does `c₀|q|^{-2}` meet the requested error?
#[derive(Clone, Copy, Debug)]
enum Target<'a> {
    /// error ≤ value
    Value(&'a Dyadic),
    /// error ≤ 2^-bits
    Bits(u64),
    /// jets: tail exponent ≤ t
    Tail(i64),
}

/// ξ with a certified error bound, plus the convergent that produced it.
#[derive(Clone, Debug)]
pub struct XiValue {
    pub scalar: Scalar,
    pub convergent: Convergent,
}

/// Tail exponent of `c₀|q|^{-2}` in the function-field case: `floor(ln c₀) − 2 deg q`.
fn jet_tail(c0: &Dyadic, deg_q: i64) -> i64 {
    let l = Interval::point(c0.clone()).ln(CONST_PREC);
    l.hi().floor_int().to_i64().unwrap() - 2 * deg_q
}

fn meets(pq: &PartialQuotients, q: &RingElement, target: Target) -> bool {
    let c0 = pq.c0();
    match q {
        RingElement::Poly(f) => {
            let t = jet_tail(&c0, f.degree().unwrap() as i64);
            match target {
                Target::Tail(k) => t <= k,
                Target::Bits(b) => {
                    // e^t ≤ 2^-b  ⇐  t ≤ −b·ln 2
                    let lim = Interval::from_int(-(b as i64)).mul(&crate::arith::ln2(64));
                    Dyadic::from_int(t) <= *lim.lo()
                }
                Target::Value(v) => {
                    let e = Interval::from_int(t).exp(CONST_PREC);
                    e.hi() <= v
                }
            }
        }
        _ => {
            let n = Dyadic::from_bigint(q.norm().unwrap());
            let bound = match target {
                Target::Value(v) => v.clone(),
                Target::Bits(b) => Dyadic::pow2(-(b as i64)),
                Target::Tail(k) => Interval::from_int(k).exp(CONST_PREC).lo().clone(),
            };
            c0 <= &bound * &n
        }
    }
}

/// First `J` whose convergent meets the target: exponential then binary search.
fn first_meeting(pq: &PartialQuotients, target: Target) -> Convergent {
    let mut cache = Vec::new();
    let at = |j: usize, cache: &mut Vec<Mat2>| Convergent::from_matrix(j, &pq.prefix_matrix(j, cache));
    let mut hi = 1;
    let mut c_hi = at(hi, &mut cache);
    while !meets(pq, &c_hi.q, target) {
        hi *= 2;
        c_hi = at(hi, &mut cache);
    }
    let mut lo = hi / 2; // fails (or 0)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let c = at(mid, &mut cache);
        if meets(pq, &c.q, target) {
            hi = mid;
            c_hi = c;
        } else {
            lo = mid;
        }
    }
    c_hi
}

fn xi_from(pq: &PartialQuotients, c: &Convergent, level: &Level) -> Result<Scalar> {
    let c0 = pq.c0();
    match &c.q {
        RingElement::Poly(f) => {
            let deg = f.degree().unwrap() as i64;
            let tail = jet_tail(&c0, deg);
            // p/q has leading exponent ≥ −deg q; keep coefficients down to the tail.
            let window = (deg + 1 - tail).max(1) as usize;
            let RingElement::Poly(pp) = &c.p else { unreachable!() };
            let p = Jet::from_poly(pp, window);
            let q = Jet::from_poly(f, window);
            let ratio = p.div(&q).ok_or(Error::DivisionByPossibleZero)?;
            Ok(Scalar::Jet(ratio.truncate_at(tail).with_window(level.window)))
        }
        _ => {
            let prec = level.bits + 32;
            let lv = Level { bits: prec, window: level.window };
            let (Scalar::Ball(p), Scalar::Ball(q)) = (embed_at(&c.p, &lv), embed_at(&c.q, &lv)) else {
                unreachable!()
            };
            let ratio = p.div(&q).ok_or(Error::DivisionByPossibleZero)?;
            let n = Dyadic::from_bigint(c.q.norm().unwrap());
            let err = Dyadic::div_ceil(&c0, &n, 64);
            let widened = if ratio.is_real() {
                Ball::real(Dyadic::zero(), err, prec)
            } else {
                Ball::complex(Dyadic::zero(), Dyadic::zero(), err, prec)
            };
            Ok(Scalar::Ball(ratio.add(&widened).with_prec(level.bits)))
        }
    }
}

/// ξ = lim p_j/q_j, as `p_J/q_J` for the first `J` with `c₀|q_J|^{-2} ≤ target`.
pub fn eval_xi(pq: &PartialQuotients, target: &Dyadic) -> Result<XiValue> {
    if !target.is_positive() {
        return Err(Error::OutOfRange("eval_xi target must be positive".into()));
    }
    let c = first_meeting(pq, Target::Value(target));
    let bits = (-target.ilog2().unwrap()).max(64) as u64 + 64;
    let window = c.q.degree().unwrap_or(0) * 2 + 8;
    let scalar = xi_from(pq, &c, &Level { bits, window })?;
    Ok(XiValue { scalar, convergent: c })
}

/// ξ at a refinement level: error ≤ 2^-bits (balls) or tail ≤ −window (jets).
pub fn eval_xi_at(pq: &PartialQuotients, level: &Level) -> Result<XiValue> {
    let target = if pq.domain().archimedean() { Target::Bits(level.bits) } else { Target::Tail(-(level.window as i64)) };
    let c = first_meeting(pq, target);
    let scalar = xi_from(pq, &c, level)?;
    Ok(XiValue { scalar, convergent: c })
}

/// Recomputation recipe for ξ: deeper convergents on demand.
#[derive(Clone, Debug)]
pub struct XiSource {
    pub pq: PartialQuotients,
}

impl Recipe for XiSource {
    fn evaluate(&self, level: &Level) -> Result<Scalar> {
        eval_xi_at(&self.pq, level).map(|x| x.scalar)
    }
}

/// Upper bound for `|ξ|` from the first convergent: `1/|a_1| + c₀/|a_1|²`.
pub fn xi_abs_upper(pq: &PartialQuotients) -> Interval {
    let a1 = pq.quotient(1);
    let c0 = pq.c0();
    let (inv, inv_sq) = match &a1 {
        RingElement::Poly(f) => {
            let d = f.degree().unwrap() as i64;
            (Interval::from_int(-d).exp(CONST_PREC), Interval::from_int(-2 * d).exp(CONST_PREC))
        }
        _ => {
            let n = Interval::point(Dyadic::from_bigint(a1.norm().unwrap()));
            let one = Interval::from_int(1);
            (one.div(&n.sqrt(CONST_PREC), CONST_PREC), one.div(&n, CONST_PREC))
        }
    };
    let hi = inv.add(&inv_sq.mul(&Interval::point(c0)));
    Interval::new(Dyadic::zero(), hi.hi().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(c: &[i64]) -> RingElement {
        RingElement::poly(2, c)
    }

    #[test]
    fn rho_boundaries() {
        assert!(matches!(rho_of(&RingElement::int(2), &RingElement::int(3)), Err(Error::RhoTooSmall(_))));
        let r = rho_of(&fp(&[0, 1]), &fp(&[1, 1])).unwrap().to_f64();
        assert!(r > 1.0 && r <= std::f64::consts::E - 1.0 + 1e-12);
        let r = rho_of(&RingElement::gauss(2, 1), &RingElement::gauss(2, -1)).unwrap().to_f64();
        assert!(r > 1.0 && r <= 5f64.sqrt() - 1.0 + 1e-12);
        assert!(matches!(rho_of(&RingElement::int(3), &RingElement::int(3)), Err(Error::EqualQuotients)));
    }

    #[test]
    fn first_convergents() {
        let pq = PartialQuotients::fibonacci(&fp(&[0, 1]), &fp(&[1, 1])).unwrap();
        let cs = convergent_stream(&pq, 2).unwrap();
        assert_eq!((cs[0].p.clone(), cs[0].q.clone()), (fp(&[1]), fp(&[0, 1])));
        assert_eq!((cs[1].p.clone(), cs[1].q.clone()), (fp(&[1, 1]), fp(&[1, 1, 1])));
        let pq = PartialQuotients::fibonacci(&RingElement::int(3), &RingElement::int(4)).unwrap();
        let cs = convergent_stream(&pq, 2).unwrap();
        assert_eq!((cs[0].p.clone(), cs[0].q.clone()), (RingElement::int(1), RingElement::int(3)));
        assert_eq!((cs[1].p.clone(), cs[1].q.clone()), (RingElement::int(4), RingElement::int(13)));
        assert_eq!(gap_identity_check(&cs[0], &cs[1]).unwrap(), RingElement::int(-1));
    }

    #[test]
    fn jumps_agree_with_stepping() {
        for (a, b) in [(RingElement::int(3), RingElement::int(4)), (fp(&[0, 1]), fp(&[1, 1]))] {
            let pq = PartialQuotients::fibonacci(&a, &b).unwrap();
            let cs = convergent_stream(&pq, 40).unwrap();
            let mut cache = Vec::new();
            for c in &cs {
                assert_eq!(Convergent::from_matrix(c.j, &pq.prefix_matrix(c.j, &mut cache)), *c);
            }
        }
        let pq = PartialQuotients::constant(&RingElement::int(3)).unwrap();
        let cs = convergent_stream(&pq, 12).unwrap();
        assert_eq!(Convergent::from_matrix(12, &pq.prefix_matrix(12, &mut Vec::new())), cs[11]);
    }

    #[test]
    fn constant_fraction_root() {
        // [0, 3, 3, …] = (−3 + √13)/2
        let pq = PartialQuotients::constant(&RingElement::int(3)).unwrap();
        let xi = eval_xi(&pq, &Dyadic::pow2(-40)).unwrap();
        let b = xi.scalar.as_ball().unwrap();
        let truth = (13f64.sqrt() - 3.0) / 2.0;
        assert!((b.re().to_f64() - truth).abs() <= b.rad().to_f64() + 1e-15);
        assert!(b.rad().to_f64() <= 2f64.powi(-40));
    }

    #[test]
    fn function_field_xi_leading_term() {
        let pq = PartialQuotients::fibonacci(&fp(&[0, 1]), &fp(&[1, 1])).unwrap();
        let xi = eval_xi_at(&pq, &Level::start()).unwrap();
        let j = xi.scalar.as_jet().unwrap();
        assert_eq!(j.leading_exponent(), Some(-1));
        assert!(j.tail().unwrap() <= -64);
    }
}
