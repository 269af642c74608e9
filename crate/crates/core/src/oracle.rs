//! Brute-force minimal points: for every `x₀` up to a height bound, the best
//! `(x₁, x₂)` is obtained by rounding `x₀ξ` and `x₀ξ²`; the minimum of `L`
//! over all such candidates is `ℓ(X)`.
//!
//! Candidates are enumerated up to units (a unit multiple has the same `L`
//! and height). `x₀ = 0` is skipped: there `L ≥ 1`, while `x₀ = 1` already
//! gives `L < 1`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{Dyadic, Interval, LOG_PREC};
use crate::completion::{embed_at, sc_mul, sc_sub, Level, PrecisionPolicy, Recipe, Scalar};
use crate::contfrac::XiSource;
use crate::error::{Error, Result};
use crate::extremal::{approx_error_at, level_for_height, GoldenRatio, XiPowers};
use crate::fibword::{det3, ApproxTriple, Provenance};
use crate::logmag::LogMag;
use crate::ring::{gcd, is_primitive, Domain, FpPoly, RingElement};

/// Default cap on the number of enumerated `x₀`.
pub const DEFAULT_LIMIT: u128 = 1 << 20;

/// `|x₀| ≤ X`, stated exactly: `deg x₀ ≤ d` or `N(x₀) ≤ n` (so `X = √n`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HeightBound {
    Degree(u32),
    Norm(BigInt),
}

impl HeightBound {
    /// The bound `X = |x|`.
    pub fn of(x: &RingElement) -> HeightBound {
        match x {
            RingElement::Poly(f) => HeightBound::Degree(f.degree().unwrap_or(0) as u32),
            _ => HeightBound::Norm(x.norm().unwrap()),
        }
    }

    /// Archimedean bound from a real `X ≥ 1`: `N(x₀) ≤ floor(X²)`.
    pub fn from_real(x: f64) -> HeightBound {
        HeightBound::Norm(BigInt::from((x * x).floor() as u128))
    }

    /// `log X`.
    pub fn log(&self) -> LogMag {
        match self {
            HeightBound::Degree(d) => LogMag::exact(*d as i64),
            HeightBound::Norm(n) => {
                if n.is_zero() {
                    return LogMag::neg_infinity();
                }
                let l = Interval::point(Dyadic::from_bigint(n.clone())).ln(LOG_PREC);
                LogMag::enclosure(Interval::new(l.lo().shl(-1), l.hi().shl(-1)))
            }
        }
    }

    pub fn admits(&self, x: &RingElement) -> bool {
        match (self, x) {
            (HeightBound::Degree(d), RingElement::Poly(f)) => f.degree().map_or(true, |k| k as u32 <= *d),
            (HeightBound::Norm(n), _) => x.norm().map_or(false, |m| &m <= n),
            _ => false,
        }
    }
}

/// `x₀` representatives up to units with `|x₀| ≤ X`, in increasing height.
pub fn enumerate_x0(domain: Domain, bound: &HeightBound, limit: u128) -> Result<Vec<RingElement>> {
    let count = count_x0(domain, bound)?;
    if count > limit {
        return Err(Error::SearchSpaceTooLarge { count, limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    match (domain, bound) {
        (Domain::PolyFp(p), HeightBound::Degree(d)) => {
            for deg in 0..=*d {
                let n_low = (p as u128).pow(deg);
                for k in 0..n_low {
                    let mut c = Vec::with_capacity(deg as usize + 1);
                    let mut r = k;
                    for _ in 0..deg {
                        c.push((r % p as u128) as u64);
                        r /= p as u128;
                    }
                    c.push(1);
                    out.push(RingElement::Poly(FpPoly::new(p, c)));
                }
            }
        }
        (Domain::Integers, HeightBound::Norm(n)) => {
            let top = n.sqrt();
            let top = top.to_i64().ok_or_else(|| Error::OutOfRange("height".into()))?;
            out.extend((1..=top).map(RingElement::int));
        }
        (Domain::Gaussian, HeightBound::Norm(n)) => {
            let top = n.sqrt().to_i64().ok_or_else(|| Error::OutOfRange("height".into()))?;
            for x in 1..=top {
                for y in 0..=top {
                    let e = RingElement::gauss(x, y);
                    if &e.norm().unwrap() <= n {
                        out.push(e);
                    }
                }
            }
        }
        (Domain::SqrtMinus5, HeightBound::Norm(n)) => {
            let top = n.sqrt().to_i64().ok_or_else(|| Error::OutOfRange("height".into()))?;
            for x in 0..=top {
                for y in -top..=top {
                    if x == 0 && y <= 0 {
                        continue;
                    }
                    let e = RingElement::sqrt_m5(x, y);
                    if &e.norm().unwrap() <= n {
                        out.push(e);
                    }
                }
            }
        }
        _ => return Err(Error::DomainMismatch(domain.to_string(), format!("{bound:?}"))),
    }
    out.sort_by(|a, b| a.abs_cmp(b).then_with(|| a.cmp_canonical(b)));
    Ok(out)
}

fn count_x0(domain: Domain, bound: &HeightBound) -> Result<u128> {
    Ok(match (domain, bound) {
        (Domain::PolyFp(p), HeightBound::Degree(d)) => {
            if *d > 64 {
                return Ok(u128::MAX);
            }
            (0..=*d).map(|k| (p as u128).saturating_pow(k)).fold(0u128, |a, b| a.saturating_add(b))
        }
        (_, HeightBound::Norm(n)) => {
            // a coarse upper bound: the bounding square
            let r = n.sqrt().to_u128().unwrap_or(u128::MAX);
            match domain {
                Domain::Integers => r,
                Domain::Gaussian => r.saturating_add(1).saturating_mul(r.saturating_add(1)),
                _ => r.saturating_add(1).saturating_mul(r.saturating_mul(2).saturating_add(1)),
            }
        }
        _ => return Err(Error::DomainMismatch(domain.to_string(), format!("{bound:?}"))),
    })
}

/// Round a scalar to the nearest ring element, or `None` if the error region
/// straddles a rounding boundary.
fn nearest(s: &Scalar, domain: Domain) -> Option<Vec<RingElement>> {
    match s {
        Scalar::Jet(j) => j.polynomial_part().map(|f| vec![RingElement::Poly(f)]),
        Scalar::Ball(b) => {
            let re = round_interval(&Interval::new(b.re() - b.rad(), b.re() + b.rad()))?;
            let im = Interval::new(b.im() - b.rad(), b.im() + b.rad());
            match domain {
                Domain::Integers => Some(vec![RingElement::Int(re)]),
                Domain::Gaussian => Some(vec![RingElement::Gauss(re, round_interval(&im)?)]),
                Domain::SqrtMinus5 => {
                    let five = Interval::from_int(5).sqrt(LOG_PREC);
                    let y = round_interval(&im.div(&five, LOG_PREC + 64))?;
                    Some(vec![RingElement::SqrtM5(re, y)])
                }
                Domain::PolyFp(_) => None,
            }
        }
    }
}

/// `round(x)` if constant over the interval (ties at exactly ½ round to even).
fn round_interval(iv: &Interval) -> Option<BigInt> {
    let r = |d: &Dyadic| d.round_to(0).to_bigint().unwrap();
    let (a, b) = (r(iv.lo()), r(iv.hi()));
    (a == b).then_some(a)
}

/// The best `(x₁, x₂)` for a fixed `x₀`.
#[derive(Clone, Debug)]
pub struct BestApprox {
    pub x1: RingElement,
    pub x2: RingElement,
    pub log_l: LogMag,
    /// Rounding stayed ambiguous up to the precision cap; both choices were tried.
    pub ambiguous: bool,
}

/// Brute-force oracle over one `ξ`.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub domain: Domain,
    pub source: XiSource,
    pub policy: PrecisionPolicy,
    pub primitive_only: bool,
    pub limit: u128,
    pub shards: usize,
}

/// One enumerated candidate.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub triple: ApproxTriple,
    pub log_l: LogMag,
    pub primitive: Option<bool>,
    pub ambiguous: bool,
    /// 1 or 2 when that coordinate's term certainly attains `L`.
    pub dominant: Option<u8>,
}

impl Candidate {
    fn x0(&self) -> &RingElement {
        &self.triple.x0
    }
}

#[derive(Clone, Debug)]
pub struct MinimalPoint {
    pub bound: HeightBound,
    pub log_x: LogMag,
    pub log_ell: LogMag,
    pub witness: ApproxTriple,
    pub primitive: Option<bool>,
    pub exhaustive: bool,
}

/// Certified order of two `log L` brackets; `Equal` only for identical exact values.
fn cmp_l(a: &LogMag, b: &LogMag) -> Option<Ordering> {
    if a == b && a.width().map_or(true, |w| w.is_zero()) {
        Some(Ordering::Equal)
    } else if a.certainly_lt(b) {
        Some(Ordering::Less)
    } else if b.certainly_lt(a) {
        Some(Ordering::Greater)
    } else {
        None
    }
}

/// Which of `|x₀ξ − x₁|`, `|x₀ξ² − x₂|` certainly attains `L`.
fn dominant_term(t: &ApproxTriple, p: &XiPowers) -> Result<Option<u8>> {
    let x0 = embed_at(&t.x0, &p.level);
    let first = sc_sub(&sc_mul(&x0, &p.xi)?, &embed_at(&t.x1, &p.level))?;
    let second = sc_sub(&sc_mul(&x0, &p.xi_sq)?, &embed_at(&t.x2, &p.level))?;
    Ok(if second.certainly_smaller(&first) {
        Some(1)
    } else if first.certainly_smaller(&second) {
        Some(2)
    } else {
        None
    })
}

/// Term `k` equals `|x₀|·|ξ^k − x_k/x₀|`, so two candidates whose dominant
/// terms share `k`, `|x₀|` and the fraction `x_k/x₀` have exactly equal `L`.
fn exact_tie(a: &Candidate, b: &Candidate) -> bool {
    let (Some(k), Some(k2)) = (a.dominant, b.dominant) else { return false };
    if k != k2 || a.x0().abs_cmp(b.x0()) != Ordering::Equal {
        return false;
    }
    let (xa, xb) = if k == 1 { (&a.triple.x1, &b.triple.x1) } else { (&a.triple.x2, &b.triple.x2) };
    xa * b.x0() == xb * a.x0()
}

/// Smaller `L`, then larger height, then canonical order of `x₀`.
fn better(a: &Candidate, b: &Candidate) -> Option<Ordering> {
    let by_l = if exact_tie(a, b) { Some(Ordering::Equal) } else { cmp_l(&a.log_l, &b.log_l) };
    Some(by_l?.then_with(|| b.x0().abs_cmp(a.x0())).then_with(|| a.x0().cmp_canonical(b.x0())))
}

impl Oracle {
    pub fn new(source: XiSource, policy: PrecisionPolicy) -> Oracle {
        Oracle {
            domain: source.pq.domain(),
            source,
            policy,
            primitive_only: false,
            limit: DEFAULT_LIMIT,
            shards: 8,
        }
    }

    pub fn primitive_only(mut self, yes: bool) -> Result<Oracle> {
        if yes && !self.domain.ufd() {
            return Err(Error::UnsupportedDomain { op: "primitive-only search", domain: self.domain.to_string() });
        }
        self.primitive_only = yes;
        Ok(self)
    }

    /// Rounding `x₀ξ²` and resolving `L ≳ X^{-1}` needs about `3 log₂ X`
    /// bits plus a margin; ambiguous cases refine on their own.
    fn start_powers(&self, bound: &HeightBound) -> Result<XiPowers> {
        let top = bound.log().hi_f64().max(1.0);
        let level = if self.domain.archimedean() {
            let bits = (3.0 * top * std::f64::consts::LOG2_E) as u64 + 64;
            self.policy.levels().find(|l| l.bits >= bits).unwrap_or(self.policy.cap)
        } else {
            level_for_height(top, false, &self.policy)
        };
        XiPowers::at(&self.source, level)
    }

    fn best_at(&self, x0: &RingElement, p: &XiPowers) -> Option<(Vec<RingElement>, Vec<RingElement>)> {
        let x0s = embed_at(x0, &p.level);
        let a = nearest(&sc_mul(&x0s, &p.xi).ok()?, self.domain)?;
        let b = nearest(&sc_mul(&x0s, &p.xi_sq).ok()?, self.domain)?;
        Some((a, b))
    }

    /// Nearest ring elements to `x₀ξ`, `x₀ξ²` and the resulting `log L`.
    pub fn best_for_x0(&self, x0: &RingElement) -> Result<BestApprox> {
        let start = self.start_powers(&HeightBound::of(x0))?;
        self.best_for_x0_from(x0, &start)
    }

    fn best_for_x0_from(&self, x0: &RingElement, start: &XiPowers) -> Result<BestApprox> {
        if x0.is_zero() {
            return Err(Error::ZeroInput("best_for_x0"));
        }
        let mut powers = start.clone();
        let mut levels = self.policy.levels().filter(|l| l.bits > start.level.bits || l.window > start.level.window);
        loop {
            if let Some((x1s, x2s)) = self.best_at(x0, &powers) {
                let (x1, x2) = (x1s[0].clone(), x2s[0].clone());
                let t = ApproxTriple::new(x0.clone(), x1.clone(), x2.clone(), Provenance::Oracle);
                let log_l = approx_error_at(&t, &powers)?;
                if log_l.is_bounded() {
                    return Ok(BestApprox { x1, x2, log_l, ambiguous: false });
                }
            }
            match levels.next() {
                Some(l) => powers = XiPowers::at(&self.source, l)?,
                None => return self.best_by_trying_both(x0, &powers),
            }
        }
    }

    /// Last resort at the cap: try both neighbours of every coordinate.
    fn best_by_trying_both(&self, x0: &RingElement, p: &XiPowers) -> Result<BestApprox> {
        let x0s = embed_at(x0, &p.level);
        let around = |s: &Scalar| -> Vec<RingElement> {
            let Scalar::Ball(b) = s else { return vec![] };
            let fl = |d: &Dyadic| d.floor_int();
            let (r0, i0) = (fl(b.re()), fl(b.im()));
            let mut v = Vec::new();
            for dr in 0..2 {
                for di in 0..2 {
                    let re = &r0 + dr;
                    let e = match self.domain {
                        Domain::Integers if di == 0 => RingElement::Int(re),
                        Domain::Gaussian => RingElement::Gauss(re, &i0 + di),
                        Domain::SqrtMinus5 => {
                            let y = (b.im().to_f64() / 5f64.sqrt()).floor() as i64 + di;
                            RingElement::SqrtM5(re, BigInt::from(y))
                        }
                        _ => continue,
                    };
                    v.push(e);
                }
            }
            v
        };
        let c1 = around(&sc_mul(&x0s, &p.xi)?);
        let c2 = around(&sc_mul(&x0s, &p.xi_sq)?);
        let mut best: Option<BestApprox> = None;
        for x1 in &c1 {
            for x2 in &c2 {
                let t = ApproxTriple::new(x0.clone(), x1.clone(), x2.clone(), Provenance::Oracle);
                let l = approx_error_at(&t, p)?;
                let replace = match &best {
                    None => true,
                    Some(b) => l.certainly_lt(&b.log_l),
                };
                if replace {
                    best = Some(BestApprox { x1: x1.clone(), x2: x2.clone(), log_l: l, ambiguous: true });
                }
            }
        }
        best.ok_or(Error::PrecisionCapExceeded { cap: self.policy.cap.bits, last_log2: i64::MAX })
    }

    /// Every candidate up to `bound`, sorted by height.
    pub fn search(&self, bound: &HeightBound) -> Result<Vec<Candidate>> {
        let xs = enumerate_x0(self.domain, bound, self.limit)?;
        if xs.is_empty() {
            return Ok(Vec::new());
        }
        let start = self.start_powers(bound)?;
        let chunk = xs.len().div_ceil(self.shards.max(1));
        let shards: Vec<Vec<Candidate>> = xs
            .par_chunks(chunk.max(1))
            .map(|part| part.iter().map(|x0| self.candidate(x0, &start)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(shards.into_iter().flatten().collect())
    }

    fn candidate(&self, x0: &RingElement, start: &XiPowers) -> Result<Candidate> {
        let b = self.best_for_x0_from(x0, start)?;
        let triple = ApproxTriple::new(x0.clone(), b.x1, b.x2, Provenance::Oracle);
        let primitive = if self.domain.ufd() { Some(is_primitive(&[triple.x0.clone(), triple.x1.clone(), triple.x2.clone()])?) } else { None };
        let dominant = dominant_term(&triple, start)?;
        Ok(Candidate { triple, log_l: b.log_l, primitive, ambiguous: b.ambiguous, dominant })
    }

    fn admissible<'a>(&self, cands: &'a [Candidate]) -> impl Iterator<Item = &'a Candidate> + 'a {
        let prim = self.primitive_only;
        cands.iter().filter(move |c| !prim || c.primitive == Some(true))
    }

    fn point(&self, bound: &HeightBound, c: &Candidate) -> MinimalPoint {
        MinimalPoint {
            bound: bound.clone(),
            log_x: bound.log(),
            log_ell: c.log_l.clone(),
            witness: c.triple.clone(),
            primitive: c.primitive,
            exhaustive: true,
        }
    }

    /// Best candidate among those admitted by `bound`.
    pub fn best_among<'a>(&self, cands: &'a [Candidate], bound: &HeightBound) -> Result<Option<&'a Candidate>> {
        let mut best: Option<&Candidate> = None;
        for c in self.admissible(cands).filter(|c| bound.admits(c.x0())) {
            best = match best {
                None => Some(c),
                Some(b) => match better(c, b) {
                    Some(Ordering::Less) => Some(c),
                    Some(_) => Some(b),
                    None => return Err(undecided(c, b)),
                },
            };
        }
        Ok(best)
    }

    /// Admitted candidates, best first.
    pub fn ranked<'a>(&self, cands: &'a [Candidate], bound: &HeightBound) -> Result<Vec<&'a Candidate>> {
        let mut v: Vec<&Candidate> = self.admissible(cands).filter(|c| bound.admits(c.x0())).collect();
        let mut undecided_pair = None;
        v.sort_by(|a, b| {
            better(a, b).unwrap_or_else(|| {
                undecided_pair.get_or_insert((a.x0().clone(), b.x0().clone()));
                a.log_l.mid_f64().total_cmp(&b.log_l.mid_f64())
            })
        });
        match undecided_pair {
            Some((x, y)) => Err(Error::CertificationFailed {
                index: 0,
                what: format!("cannot order L for x0 = {x} and x0 = {y} at the precision cap"),
            }),
            None => Ok(v),
        }
    }

    /// `ℓ(X)` with its witness.
    pub fn ell_of(&self, bound: &HeightBound) -> Result<Option<MinimalPoint>> {
        let cands = self.search(bound)?;
        Ok(self.best_among(&cands, bound)?.map(|c| self.point(bound, c)))
    }

    /// Heights at which the minimizer changes. Ties in `L` go to the larger
    /// height, so `ℓ` is non-increasing along the ladder and strictly
    /// decreasing except across exact ultrametric ties.
    pub fn minimal_point_sequence(&self, bound: &HeightBound) -> Result<Vec<MinimalPoint>> {
        let cands = self.search(bound)?;
        ladder(self, &cands)
    }
}

fn undecided(a: &Candidate, b: &Candidate) -> Error {
    Error::CertificationFailed {
        index: 0,
        what: format!("cannot order L for x0 = {} and x0 = {} at the precision cap", a.x0(), b.x0()),
    }
}

/// Ladder from a height-sorted candidate list.
pub fn ladder(oracle: &Oracle, cands: &[Candidate]) -> Result<Vec<MinimalPoint>> {
    let mut out: Vec<MinimalPoint> = Vec::new();
    let mut best: Option<&Candidate> = None;
    let adm: Vec<&Candidate> = oracle.admissible(cands).collect();
    let mut k = 0;
    while k < adm.len() {
        // one height group at a time
        let mut end = k + 1;
        while end < adm.len() && adm[end].x0().abs_cmp(adm[k].x0()) == Ordering::Equal {
            end += 1;
        }
        for c in &adm[k..end] {
            best = match best {
                None => Some(c),
                Some(b) => match better(c, b) {
                    Some(Ordering::Less) => Some(c),
                    Some(_) => Some(b),
                    None => return Err(undecided(c, b)),
                },
            };
        }
        let b = best.unwrap();
        if out.last().map_or(true, |p| p.witness != b.triple) {
            out.push(oracle.point(&HeightBound::of(adm[k].x0()), b));
        }
        k = end;
    }
    Ok(out)
}

/// Three points with `|x₀| ≤ X` and `L < (6X)^{-1/2}` must be linearly dependent.
#[derive(Clone, Debug)]
pub struct DependenceCertificate {
    pub det: RingElement,
}

pub fn dependence_check(points: [&Candidate; 3], bound: &HeightBound) -> Result<DependenceCertificate> {
    let log_x = bound.log().as_interval().ok_or_else(|| Error::CriterionPreconditionUnmet("X = 0".into()))?;
    // log (6X)^{-1/2} = −(ln 6 + log X)/2
    let ln6 = Interval::from_int(6).ln(LOG_PREC);
    let threshold = ln6.add(&log_x).neg();
    let threshold = Interval::new(threshold.lo().shl(-1), threshold.hi().shl(-1));
    for p in points {
        if !bound.admits(p.x0()) {
            return Err(Error::CriterionPreconditionUnmet(format!("|x0| > X for {}", p.triple)));
        }
        if !p.log_l.certainly_lt(&LogMag::enclosure(threshold.clone())) {
            return Err(Error::CriterionPreconditionUnmet(format!("L not below (6X)^(-1/2) for {}", p.triple)));
        }
    }
    let det = det3(&points[0].triple, &points[1].triple, &points[2].triple);
    if !det.is_zero() {
        return Err(Error::DeterminantNonzero(det.to_string()));
    }
    Ok(DependenceCertificate { det })
}

/// Outcome of running the dependence criterion over several heights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DependenceSweep {
    /// Triples that met the precondition and had determinant zero.
    pub checked: usize,
    /// Heights with fewer than three points below the threshold.
    pub skipped: usize,
    pub violations: usize,
}

/// At each height, every triple among the (at most `k`) best candidates
/// below `(6X)^{-1/2}` must be dependent.
pub fn dependence_sweep(oracle: &Oracle, cands: &[Candidate], heights: &[HeightBound], k: usize) -> Result<DependenceSweep> {
    let mut out = DependenceSweep::default();
    for h in heights {
        let ranked = oracle.ranked(cands, h)?;
        let mut below = Vec::new();
        for c in ranked.into_iter().take(k) {
            match dependence_check([c, c, c], h) {
                Ok(_) => below.push(c),
                Err(Error::CriterionPreconditionUnmet(_)) => break,
                Err(e) => return Err(e),
            }
        }
        if below.len() < 3 {
            out.skipped += 1;
            continue;
        }
        for i in 0..below.len() {
            for j in i + 1..below.len() {
                for l in j + 1..below.len() {
                    match dependence_check([below[i], below[j], below[l]], h) {
                        Ok(_) => out.checked += 1,
                        Err(Error::DeterminantNonzero(_)) => out.violations += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `x = unit·(m², mn, n²)` with `gcd(m, n) = 1`.
pub fn degenerate_decompose(x: &ApproxTriple) -> Result<(RingElement, RingElement, RingElement)> {
    let [x0, x1, x2] = x.coords();
    if &(x0 * x2) - &(x1 * x1) != x0.domain().zero() {
        return Err(Error::NotDegenerate);
    }
    if !is_primitive(&[x0.clone(), x1.clone(), x2.clone()])? {
        return Err(Error::NotPrimitive);
    }
    let d = x0.domain();
    if x0.is_zero() {
        // x1² = 0, and primitivity makes x2 a unit.
        return Ok((x2.clone(), d.zero(), d.one()));
    }
    let m = gcd(x0, x1)?;
    let unit = x0.exact_div(&(&m * &m)).filter(RingElement::is_unit).ok_or(Error::NotDegenerate)?;
    let n = x1.exact_div(&(&unit * &m)).ok_or(Error::NotDegenerate)?;
    if &(&unit * &n) * &n != *x2 {
        return Err(Error::NotDegenerate);
    }
    Ok((unit, m, n))
}

/// `ℓ(X)·X^{1/γ}` over a grid of heights.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub bound: HeightBound,
    pub log_x: Interval,
    pub log_ell: LogMag,
    /// `log(ℓ(X) X^{1/γ})`
    pub log_scaled: Interval,
    pub witness: ApproxTriple,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Running minimum / maximum of `log_scaled` (lower / upper ends).
    pub running_inf: Vec<Dyadic>,
    pub running_sup: Vec<Dyadic>,
    /// Certified lower bound of the smallest `ℓ(X)X^{1/γ}` on the grid (log).
    pub floor: Option<Dyadic>,
    /// Largest certified `c` with no solution below `cX^{−1/γ}` at some scanned `X` (log).
    pub c1_estimate: Option<Dyadic>,
    /// Max of `log_scaled` over the last third of the grid.
    pub limsup_proxy: Option<Dyadic>,
    /// The proxy fell more than three e-units below the overall maximum.
    pub degrading: bool,
    /// First grid index at which the running infimum reaches its final value.
    pub stabilizes_at: Option<usize>,
}

pub fn c1_scan(oracle: &Oracle, grid: &[HeightBound]) -> Result<ScanReport> {
    let top = grid.iter().max_by(|a, b| a.log().mid_f64().total_cmp(&b.log().mid_f64()));
    let cands = match top {
        Some(t) => oracle.search(t)?,
        None => Vec::new(),
    };
    scan_candidates(oracle, &cands, grid)
}

/// `c1_scan` over an existing candidate list covering the whole grid.
pub fn scan_candidates(oracle: &Oracle, cands: &[Candidate], grid: &[HeightBound]) -> Result<ScanReport> {
    let g = GoldenRatio::new();
    let mut rows = Vec::new();
    for bound in grid {
        let Some(best) = oracle.best_among(cands, bound)? else { continue };
        let log_x = bound.log().as_interval().ok_or_else(|| Error::OutOfRange("X must be ≥ 1".into()))?;
        let l = best.log_l.as_interval().ok_or_else(|| Error::CertificationFailed {
            index: 0,
            what: "ell(X) not bounded away from zero".into(),
        })?;
        rows.push(ScanRow {
            bound: bound.clone(),
            log_scaled: l.add(&log_x.mul(&g.inv)),
            log_x,
            log_ell: best.log_l.clone(),
            witness: best.triple.clone(),
        });
    }
    let mut running_inf = Vec::new();
    let mut running_sup = Vec::new();
    for r in &rows {
        let lo = r.log_scaled.lo().clone();
        let hi = r.log_scaled.hi().clone();
        running_inf.push(running_inf.last().map_or(lo.clone(), |m: &Dyadic| m.clone().min(lo)));
        running_sup.push(running_sup.last().map_or(hi.clone(), |m: &Dyadic| m.clone().max(hi)));
    }
    let floor = running_inf.last().cloned();
    let c1_estimate = rows.iter().map(|r| r.log_scaled.lo().clone()).max();
    let tail = &rows[rows.len() - rows.len().div_ceil(3)..];
    let limsup_proxy = tail.iter().map(|r| r.log_scaled.hi().clone()).max();
    let degrading = match (&limsup_proxy, running_sup.last()) {
        (Some(p), Some(s)) => p < &(s - &Dyadic::from_int(3)),
        _ => false,
    };
    let stabilizes_at = floor.as_ref().and_then(|f| running_inf.iter().position(|v| v == f));
    Ok(ScanReport { rows, running_inf, running_sup, floor, c1_estimate, limsup_proxy, degrading, stabilizes_at })
}

/// Log-uniform grid of archimedean bounds between `1` and `x_max`, or all degrees `1..=d`.
pub fn default_grid(domain: Domain, log_max: f64, points: usize) -> Vec<HeightBound> {
    match domain {
        Domain::PolyFp(_) => (1..=log_max.floor() as u32).map(HeightBound::Degree).collect(),
        _ => {
            let mut v: Vec<HeightBound> = (0..points)
                .map(|k| {
                    let t = log_max * (k + 1) as f64 / points as f64;
                    HeightBound::from_real(t.exp())
                })
                .collect();
            v.dedup();
            v
        }
    }
}

/// Does the oracle witness at `X = |x_{i,0}|` match `x_i` up to units?
pub fn agrees_with(point: &MinimalPoint, constructed: &ApproxTriple) -> bool {
    point.witness.equal_up_to_unit(constructed)
}

impl Recipe for Oracle {
    /// The oracle's ξ, so callers can refine it the same way.
    fn evaluate(&self, level: &Level) -> Result<Scalar> {
        self.source.evaluate(level)
    }
}
