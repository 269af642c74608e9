//! The extremal construction: triples `x_i`, their heights `X_i = |x_{i,0}|`
//! and errors `L_i = L(x_i)`, the ratio dynamics `r_i = X_i / X_{i−1}^γ`, the
//! constants, and the cover step giving `L(x) ≤ c₂ X^{−1/γ}`.
//!
//! Everything is kept in log space: `λ_i = log X_i`, `μ_i = log L_i`, and a
//! constant `c` is carried as a dyadic `ln c`, so no power `X^γ` is ever formed.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{golden_ratio, inv_golden_ratio, Dyadic, Interval, LOG_PREC};
use crate::completion::{embed_at, sc_add, sc_mul, sc_sub, Level, PrecisionPolicy, Recipe, Scalar};
use crate::contfrac::{eval_xi_at, xi_abs_upper, PartialQuotients, XiSource};
use crate::error::{Error, Result};
use crate::fibword::{det3_trace, triples_stream, ApproxTriple, Parity, TripleStream};
use crate::logmag::LogMag;
use crate::ring::RingElement;

/// Enclosure width of γ and 1/γ.
const GAMMA_PREC: u64 = 128;
/// A log-bracket narrower than `2^-ACCEPT_BITS` counts as resolved.
const ACCEPT_BITS: i64 = 40;

/// Outcome of a single certified check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Unknown,
    Fail,
}

impl Verdict {
    pub fn from_checks(holds: bool, refuted: bool) -> Verdict {
        if holds {
            Verdict::Pass
        } else if refuted {
            Verdict::Fail
        } else {
            Verdict::Unknown
        }
    }

    /// Worst of two verdicts.
    pub fn and(self, o: Verdict) -> Verdict {
        match (self, o) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Pass,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Unknown => "unknown",
            Verdict::Fail => "fail",
        }
    }
}

/// Enclosures of γ = (1+√5)/2 and 1/γ = γ − 1.
#[derive(Clone, Debug)]
pub struct GoldenRatio {
    pub gamma: Interval,
    pub inv: Interval,
}

impl GoldenRatio {
    pub fn new() -> Self {
        GoldenRatio { gamma: golden_ratio(GAMMA_PREC), inv: inv_golden_ratio(GAMMA_PREC) }
    }
}

impl Default for GoldenRatio {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug)]
pub struct TraceRecord {
    pub index: usize,
    /// `log X_i`
    pub lambda: LogMag,
    /// `log L_i`
    pub mu: LogMag,
    /// `log r_i = λ_i − γ λ_{i−1}` (from `i = 2`).
    pub log_r: Option<Interval>,
    /// `−μ_i / λ_{i+1}`
    pub exp_est: Option<Interval>,
    /// `det(x_{i−1}, x_i, x_{i+1})` (from `i = 2`).
    pub det3: Option<RingElement>,
    /// `L_i ≤ c₃ X_i^{-1}` together with the determinant identity.
    pub cert: Verdict,
}

#[derive(Clone, Debug)]
pub struct ConstantsReport {
    pub rho: Dyadic,
    /// Upper bound for `c₀ = ρ/(ρ²−1)`.
    pub c0: Dyadic,
    /// Upper bound for `|ξ|`.
    pub xi_abs: Dyadic,
    /// `c₃ = (1 + |ξ|) c₀`, from the upper bounds above.
    pub c3: Dyadic,
    pub log_c3: Interval,
    pub log_theta: LogMag,
    pub log_c4: Dyadic,
    pub log_c5: Dyadic,
    /// `c₂ = c₃ c₄^{1/γ} / c₅`, rounded down.
    pub log_c2: Dyadic,
    /// `c₃ c₅ / c₄^{1/γ}`, the constant the cover step actually supports.
    pub log_c2_sound: Dyadic,
    /// First index after which `log r_i` stays within 0.01 of its last value.
    pub band_entry: Option<usize>,
}

/// Certified bracket of `log |x|` for a ring element.
pub fn log_height(x: &RingElement) -> LogMag {
    x.abs_log(&Dyadic::pow2(-(LOG_PREC as i64) + 16))
}

fn resolved(l: &LogMag) -> bool {
    match l.width() {
        Some(w) => w.is_zero() || w.ilog2().unwrap() < -ACCEPT_BITS,
        None => false,
    }
}

/// ξ and ξ² at one precision level.
#[derive(Clone, Debug)]
pub struct XiPowers {
    pub level: Level,
    pub xi: Scalar,
    pub xi_sq: Scalar,
}

impl XiPowers {
    pub fn new(xi: Scalar, level: Level) -> Result<Self> {
        let xi_sq = sc_mul(&xi, &xi)?;
        Ok(XiPowers { level, xi, xi_sq })
    }

    pub fn at(source: &XiSource, level: Level) -> Result<Self> {
        XiPowers::new(source.evaluate(&level)?, level)
    }
}

/// `log L(x) = log max(|x₀ξ − x₁|, |x₀ξ² − x₂|)` as a certified bracket.
pub fn approx_error(x: &ApproxTriple, xi: &Scalar) -> Result<LogMag> {
    let level = match xi {
        Scalar::Ball(b) => Level { bits: b.prec(), window: 0 },
        Scalar::Jet(j) => Level { bits: 0, window: j.window() },
    };
    approx_error_at(x, &XiPowers::new(xi.clone(), level)?)
}

pub fn approx_error_at(x: &ApproxTriple, p: &XiPowers) -> Result<LogMag> {
    let lv = &p.level;
    let x0 = embed_at(&x.x0, lv);
    let e1 = sc_sub(&sc_mul(&x0, &p.xi)?, &embed_at(&x.x1, lv))?;
    let e2 = sc_sub(&sc_mul(&x0, &p.xi_sq)?, &embed_at(&x.x2, lv))?;
    Ok(if e1.certainly_smaller(&e2) {
        e2.abs_log()
    } else if e2.certainly_smaller(&e1) {
        e1.abs_log()
    } else {
        e1.abs_log().max(&e2.abs_log())
    })
}

/// Level at which `L(x)` for a height of about `e^lambda` should resolve.
pub fn level_for_height(lambda_hi: f64, archimedean: bool, policy: &PrecisionPolicy) -> Level {
    let bits = (2.0 * lambda_hi * std::f64::consts::LOG2_E) as u64 + 160;
    let window = (2.0 * lambda_hi) as usize + 16;
    let enough = |l: &Level| if archimedean { l.bits >= bits } else { l.window >= window };
    policy.levels().find(enough).unwrap_or(policy.cap)
}

/// Refine `L(x)` on demand starting from `start`.
pub fn approx_error_refined(
    x: &ApproxTriple,
    source: &XiSource,
    start: &XiPowers,
    policy: &PrecisionPolicy,
) -> Result<(LogMag, Level)> {
    let mut last = approx_error_at(x, start)?;
    if resolved(&last) {
        return Ok((last, start.level));
    }
    for level in policy.levels().filter(|l| l.bits > start.level.bits || l.window > start.level.window) {
        let p = XiPowers::at(source, level)?;
        last = approx_error_at(x, &p)?;
        if resolved(&last) {
            return Ok((last, level));
        }
    }
    Ok((last, policy.cap))
}

/// `θ = ξ² + (a+b)ξ + (ab+1)`, refined until zero is excluded.
pub fn theta_abs(a: &RingElement, b: &RingElement, source: &XiSource, policy: &PrecisionPolicy) -> Result<Scalar> {
    struct Theta<'a> {
        a: &'a RingElement,
        b: &'a RingElement,
        source: &'a XiSource,
    }
    impl Recipe for Theta<'_> {
        fn evaluate(&self, level: &Level) -> Result<Scalar> {
            let xi = self.source.evaluate(level)?;
            let sum = embed_at(&(self.a + self.b), level);
            let prod = embed_at(&(&(self.a * self.b) + &self.a.domain().one()), level);
            sc_add(&sc_add(&sc_mul(&xi, &xi)?, &sc_mul(&sum, &xi)?)?, &prod)
        }
    }
    let recipe = Theta { a, b, source };
    crate::completion::refine_until(&recipe, policy, |t| resolved(&t.abs_log()))
}

/// `μ_i ≤ ln c₃ − λ_i` for every record.
pub fn verify_c3_bound(records: &[TraceRecord], log_c3: &Interval) -> Vec<Verdict> {
    records.iter().map(|r| c3_verdict(&r.lambda, &r.mu, log_c3)).collect()
}

fn c3_verdict(lambda: &LogMag, mu: &LogMag, log_c3: &Interval) -> Verdict {
    let (Some(lam), Some(mu_hi)) = (lambda.as_interval(), mu.hi()) else {
        return Verdict::Unknown;
    };
    let rhs = log_c3.sub(&lam);
    let holds = mu_hi <= rhs.lo();
    let refuted = mu.lo().is_some_and(|m| m > rhs.hi());
    Verdict::from_checks(holds, refuted)
}

/// Per-index `λ_i − λ_{i−1} − λ_{i−2} − log|θ|`.
#[derive(Clone, Debug)]
pub struct RatioCheck {
    pub deviations: Vec<(usize, Interval)>,
    /// Upper bound for `max |deviation|`.
    pub max_abs: Dyadic,
}

impl RatioCheck {
    /// `X_i/(X_{i−2}X_{i−1}) / |θ|` within `1 ± tol` for every checked index.
    pub fn within_relative(&self, tol: f64) -> bool {
        let lo = Interval::point(Dyadic::from_f64(1.0 - tol)).ln(LOG_PREC);
        let hi = Interval::point(Dyadic::from_f64(1.0 + tol)).ln(LOG_PREC);
        self.deviations.iter().all(|(_, d)| d.lo() >= lo.hi() && d.hi() <= hi.lo())
    }
}

pub fn ratio_limit_check(records: &[TraceRecord], log_theta: &LogMag, i_min: usize) -> Result<RatioCheck> {
    let theta = log_theta.as_interval().ok_or_else(|| Error::CertificationFailed {
        index: 0,
        what: "|theta| not bounded away from zero".into(),
    })?;
    let mut deviations = Vec::new();
    let mut max_abs = Dyadic::zero();
    for w in records.windows(3) {
        let i = w[2].index;
        if i < i_min.max(3) {
            continue;
        }
        let lam = |r: &TraceRecord| r.lambda.as_interval().expect("nonzero heights");
        let d = lam(&w[2]).sub(&lam(&w[1])).sub(&lam(&w[0])).sub(&theta);
        max_abs = max_abs.max(d.abs_upper());
        deviations.push((i, d));
    }
    Ok(RatioCheck { deviations, max_abs })
}

/// `s_i = log r_i + log r_{i−1}/γ`, i.e. `log(r_i r_{i−1}^{1/γ})`.
fn sandwich_terms(records: &[TraceRecord], g: &GoldenRatio) -> Vec<(usize, Interval)> {
    records
        .windows(2)
        .filter_map(|w| {
            let (prev, cur) = (w[0].log_r.as_ref()?, w[1].log_r.as_ref()?);
            Some((w[1].index, cur.add(&prev.mul(&g.inv))))
        })
        .filter(|(i, _)| *i >= 3)
        .collect()
}

/// Does `c₄^γ/c₅ ≤ r ≤ c₅^γ/c₄` hold (certified) for this `log r`?
pub fn in_band(log_r: &Interval, log_c4: &Dyadic, log_c5: &Dyadic, g: &GoldenRatio) -> bool {
    let (c4, c5) = (Interval::point(log_c4.clone()), Interval::point(log_c5.clone()));
    let lower = g.gamma.mul(&c4).sub(&c5);
    let upper = g.gamma.mul(&c5).sub(&c4);
    lower.hi() <= log_r.lo() && log_r.hi() <= upper.lo()
}

/// Empirical `(ln c₄, ln c₅)`: extremes of `s_i` over `3 ≤ i ≤ N`, widened
/// until `r_2` sits inside the band.
pub fn sandwich_estimate(records: &[TraceRecord], g: &GoldenRatio) -> Result<(Dyadic, Dyadic)> {
    let terms = sandwich_terms(records, g);
    if terms.is_empty() {
        return Err(Error::OutOfRange("sandwich needs records up to at least i = 3".into()));
    }
    let mut lo = terms.iter().map(|t| t.1.lo().clone()).min().unwrap().floor_prec(64);
    let mut hi = terms.iter().map(|t| t.1.hi().clone()).max().unwrap().ceil_prec(64);
    let r2 = records
        .iter()
        .find(|r| r.index == 2)
        .and_then(|r| r.log_r.clone())
        .ok_or_else(|| Error::OutOfRange("sandwich needs r_2".into()))?;
    let mut step = Dyadic::pow2(-10);
    while !in_band(&r2, &lo, &hi, g) {
        lo = &lo - &step;
        hi = &hi + &step;
        step = step.shl(1);
    }
    Ok((lo, hi))
}

/// Indices `2 ≤ i ≤ N` where `r_i` is not certified inside the band.
pub fn sandwich_violations(records: &[TraceRecord], log_c4: &Dyadic, log_c5: &Dyadic, g: &GoldenRatio) -> Vec<usize> {
    records
        .iter()
        .filter_map(|r| r.log_r.as_ref().map(|lr| (r.index, lr)))
        .filter(|(_, lr)| !in_band(lr, log_c4, log_c5, g))
        .map(|(i, _)| i)
        .collect()
}

/// `ln c₂` for `c₂ = c₃ c₄^{1/γ} / c₅`, rounded down.
pub fn c2_of(log_c3: &Interval, log_c4: &Dyadic, log_c5: &Dyadic, g: &GoldenRatio) -> Dyadic {
    let v = log_c3.add(&Interval::point(log_c4.clone()).mul(&g.inv)).sub(&Interval::point(log_c5.clone()));
    v.lo().floor_prec(64)
}

/// `ln c₂'` for `c₂' = c₃ c₅ / c₄^{1/γ}`, rounded down. From
/// `X_{i+1} ≤ (c₅^γ/c₄) X_i^γ` one gets `X_i^{-1} ≤ c₅ c₄^{-1/γ} X_{i+1}^{-1/γ}`.
pub fn c2_sound(log_c3: &Interval, log_c4: &Dyadic, log_c5: &Dyadic, g: &GoldenRatio) -> Dyadic {
    let v = log_c3.add(&Interval::point(log_c5.clone())).sub(&Interval::point(log_c4.clone()).mul(&g.inv));
    v.lo().floor_prec(64)
}

/// Result of the cover step for one height `X`.
#[derive(Clone, Debug)]
pub struct CoverCertificate {
    pub index: usize,
    pub triple: ApproxTriple,
    /// `|x₀| ≤ X`
    pub height: Verdict,
    /// `L(x) ≤ c₂ X^{−1/γ}`
    pub error: Verdict,
}

impl CoverCertificate {
    pub fn verdict(&self) -> Verdict {
        self.height.and(self.error)
    }
}

/// Pick `i` with `X_i ≤ X ≤ X_{i+1}` and certify `|x_{i,0}| ≤ X` and `L(x_i) ≤ c₂X^{−1/γ}`.
pub fn cover(
    log_x: &Interval,
    run: &Construction,
    log_c2: &Dyadic,
    policy: &PrecisionPolicy,
) -> Result<CoverCertificate> {
    let recs = &run.records;
    let lam = |r: &TraceRecord| r.lambda.as_interval().expect("nonzero heights");
    let first = recs.first().ok_or_else(|| Error::OutOfRange("no records".into()))?;
    if log_x.lo() < lam(first).lo() {
        return Err(Error::OutOfRange(format!("X below X_1 (log X = {})", log_x.lo())));
    }
    let pos = recs
        .windows(2)
        .position(|w| lam(&w[0]).hi() <= log_x.lo() && log_x.lo() < lam(&w[1]).lo())
        .or_else(|| {
            let last = recs.last().unwrap();
            (lam(last).hi() <= log_x.lo() && log_x.hi() <= lam(last).lo()).then_some(recs.len() - 1)
        })
        .ok_or_else(|| Error::OutOfRange(format!("X not within [X_1, X_N] (log X = {})", log_x.lo())))?;
    let rec = &recs[pos];
    let triple = run.stream.get(rec.index).triple();
    let height = Verdict::from_checks(lam(rec).hi() <= log_x.lo(), lam(rec).lo() > log_x.hi());
    // μ_i ≤ ln c₂ − log X / γ
    let g = GoldenRatio::new();
    let check = |mu: &LogMag| {
        let rhs = Interval::point(log_c2.clone()).sub(&log_x.mul(&g.inv));
        let holds = mu.hi().is_some_and(|h| h <= rhs.lo()) || mu.is_neg_infinity();
        let refuted = mu.lo().is_some_and(|l| l > rhs.hi());
        Verdict::from_checks(holds, refuted)
    };
    let mut error = check(&rec.mu);
    if error == Verdict::Unknown {
        let start = XiPowers::at(&run.source, run.xi.level)?;
        let (mu, _) = approx_error_refined(&triple, &run.source, &start, policy)?;
        error = check(&mu);
    }
    Ok(CoverCertificate { index: rec.index, triple, height, error })
}

/// `(i, −μ_i / λ_{i+1})`; tends to `1/γ`.
pub fn exponent_profile(records: &[TraceRecord]) -> Vec<(usize, Interval)> {
    records.iter().filter_map(|r| r.exp_est.clone().map(|e| (r.index, e))).collect()
}

fn exp_estimate(mu: &LogMag, lambda_next: &LogMag) -> Option<Interval> {
    let mu = mu.as_interval()?;
    let lam = lambda_next.as_interval()?;
    if !lam.is_positive() {
        return None;
    }
    Some(mu.neg().div(&lam, LOG_PREC))
}

/// A full construction run for `(a, b, N)`.
#[derive(Clone, Debug)]
pub struct Construction {
    pub a: RingElement,
    pub b: RingElement,
    pub n: usize,
    pub pq: PartialQuotients,
    pub source: XiSource,
    /// `M_1 … M_{N+1}`.
    pub stream: TripleStream,
    pub xi: XiPowers,
    pub theta: Scalar,
    pub records: Vec<TraceRecord>,
    pub lambda_next: LogMag,
    pub constants: ConstantsReport,
    pub sandwich_violations: Vec<usize>,
    pub parity: Parity,
}

impl Construction {
    pub fn record(&self, i: usize) -> &TraceRecord {
        &self.records[i - 1]
    }

    /// `log X_i` as an interval.
    pub fn log_height(&self, i: usize) -> Interval {
        self.record(i).lambda.as_interval().expect("nonzero heights")
    }

    pub fn c2_literal(&self) -> &Dyadic {
        &self.constants.log_c2
    }

    pub fn c2_sound(&self) -> &Dyadic {
        &self.constants.log_c2_sound
    }
}

/// Run the construction for `1 ≤ i ≤ N` (the stream goes to `N+1` so every
/// row has an exponent estimate).
pub fn construct(a: &RingElement, b: &RingElement, n: usize, policy: &PrecisionPolicy) -> Result<Construction> {
    if n < 3 {
        return Err(Error::OutOfRange("N must be at least 3".into()));
    }
    let pq = PartialQuotients::fibonacci(a, b)?;
    let source = XiSource { pq: pq.clone() };
    let stream = triples_stream(a, b, n + 1)?;
    let g = GoldenRatio::new();

    let lambdas: Vec<LogMag> = stream.matrices.iter().map(|m| log_height(&m.x0)).collect();
    let top = lambdas[n - 1].hi_f64();
    let level = level_for_height(top, a.domain().archimedean(), policy);
    let xi = XiPowers::at(&source, level)?;

    // Errors L_i, refined per index where needed.
    let mus: Vec<LogMag> = (1..=n)
        .into_par_iter()
        .map(|i| approx_error_refined(&stream.get(i).triple(), &source, &xi, policy).map(|r| r.0))
        .collect::<Result<_>>()?;

    let dets: Vec<Option<RingElement>> = (1..=n)
        .into_par_iter()
        .map(|i| if i >= 2 { det3_trace(&stream, i).map(|d| Some(d.value)) } else { Ok(None) })
        .collect::<Result<_>>()?;

    let xi_abs = xi_abs_upper(&pq).hi().clone();
    let c0 = pq.c0();
    let c3 = &(&Dyadic::one() + &xi_abs) * &c0;
    let log_c3 = Interval::point(c3.clone()).ln(LOG_PREC);

    let mut records: Vec<TraceRecord> = (1..=n)
        .map(|i| {
            let lambda = lambdas[i - 1].clone();
            let mu = mus[i - 1].clone();
            let log_r = (i >= 2).then(|| {
                let (cur, prev) = (lambda.as_interval().unwrap(), lambdas[i - 2].as_interval().unwrap());
                cur.sub(&g.gamma.mul(&prev))
            });
            let exp_est = exp_estimate(&mu, &lambdas[i]);
            let cert = c3_verdict(&lambda, &mu, &log_c3);
            TraceRecord { index: i, lambda, mu, log_r, exp_est, det3: dets[i - 1].clone(), cert }
        })
        .collect();

    let theta = theta_abs(a, b, &source, policy)?;
    let log_theta = theta.abs_log();
    let (log_c4, log_c5) = sandwich_estimate(&records, &g)?;
    let violations = sandwich_violations(&records, &log_c4, &log_c5, &g);
    let log_c2 = c2_of(&log_c3, &log_c4, &log_c5, &g);
    let log_c2_sound = c2_sound(&log_c3, &log_c4, &log_c5, &g);
    let band_entry = band_entry(&records);

    // A failed sandwich consequence at index i invalidates that row.
    for r in records.iter_mut() {
        if violations.contains(&r.index) {
            r.cert = r.cert.and(Verdict::Unknown);
        }
    }

    let constants = ConstantsReport {
        rho: pq.rho().clone(),
        c0,
        xi_abs,
        c3,
        log_c3,
        log_theta,
        log_c4,
        log_c5,
        log_c2,
        log_c2_sound,
        band_entry,
    };
    let parity = stream.parity;
    Ok(Construction {
        a: a.clone(),
        b: b.clone(),
        n,
        pq,
        source,
        lambda_next: lambdas[n].clone(),
        stream,
        xi,
        theta,
        records,
        constants,
        sandwich_violations: violations,
        parity,
    })
}

fn band_entry(records: &[TraceRecord]) -> Option<usize> {
    let last = records.last()?.log_r.as_ref()?.mid_f64();
    let mut entry = None;
    for r in records.iter().rev() {
        match &r.log_r {
            Some(lr) if (lr.mid_f64() - last).abs() <= 0.01 => entry = Some(r.index),
            _ => break,
        }
    }
    entry
}

/// ξ at a given level (re-exported for callers that want the raw value).
pub fn xi_at(pq: &PartialQuotients, level: &Level) -> Result<Scalar> {
    eval_xi_at(pq, level).map(|x| x.scalar)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(c: &[i64]) -> RingElement {
        RingElement::poly(2, c)
    }

    #[test]
    fn golden_ratio_identity() {
        let g = GoldenRatio::new();
        let sq = g.gamma.mul(&g.gamma);
        assert!(sq.overlaps(&g.gamma.add(&Interval::from_int(1))));
        assert!((g.inv.mid_f64() - 0.6180339887).abs() < 1e-10);
    }

    #[test]
    fn c2_formula_shape() {
        let g = GoldenRatio::new();
        let zero = Dyadic::zero();
        let l = c2_of(&Interval::from_int(0), &zero, &zero, &g);
        assert!(l <= zero && l.to_f64() > -1e-15);
        let bigger_c5 = c2_of(&Interval::from_int(0), &zero, &Dyadic::one(), &g);
        assert!(bigger_c5 < l);
    }

    #[test]
    fn function_field_small_errors() {
        let xi = xi_at(&PartialQuotients::fibonacci(&f2(&[0, 1]), &f2(&[1, 1])).unwrap(), &Level::start()).unwrap();
        let t = |a: &[i64], b: &[i64], c: &[i64]| {
            ApproxTriple::new(f2(a), f2(b), f2(c), crate::fibword::Provenance::Oracle)
        };
        assert_eq!(approx_error(&t(&[1], &[], &[]), &xi).unwrap().exact_int(), Some(-1));
        assert_eq!(approx_error(&t(&[], &[], &[1]), &xi).unwrap().exact_int(), Some(0));
        let l2 = approx_error(&t(&[0, 0, 1, 1], &[1, 1, 1], &[1, 1]), &xi).unwrap();
        assert!(l2.hi_f64() <= -3.0);
    }

    #[test]
    fn function_field_run_is_exact() {
        let run = construct(&f2(&[0, 1]), &f2(&[1, 1]), 12, &PrecisionPolicy::default()).unwrap();
        for r in &run.records {
            assert_eq!(r.lambda.exact_int(), Some(crate::fibword::palindrome_len(r.index) as i64));
            assert_eq!(r.cert, Verdict::Pass, "index {}", r.index);
        }
        assert_eq!(run.constants.log_theta.exact_int(), Some(2));
        let rc = ratio_limit_check(&run.records, &run.constants.log_theta, 3).unwrap();
        assert!(rc.max_abs.is_zero());
        assert!(run.sandwich_violations.is_empty());
    }
}
