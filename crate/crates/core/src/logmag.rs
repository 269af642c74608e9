//! Certified brackets of `log |x|` in e-units.
//!
//! For the function-field absolute value `|p| = e^{deg p}` these are exact
//! integers; in the archimedean domains they are dyadic enclosures of
//! `½·ln N(x)`. The lower end may be −∞ (value possibly zero).

use std::fmt;

use crate::arith::{Dyadic, Interval};

/// `[lo, hi]` with `None` standing for −∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogMag {
    lo: Option<Dyadic>,
    hi: Option<Dyadic>,
}

impl LogMag {
    /// `log |0|`.
    pub fn neg_infinity() -> Self {
        LogMag { lo: None, hi: None }
    }

    /// An exact integer log-magnitude (ultrametric case).
    pub fn exact(k: i64) -> Self {
        let d = Dyadic::from_int(k);
        LogMag { lo: Some(d.clone()), hi: Some(d) }
    }

    pub fn enclosure(iv: Interval) -> Self {
        LogMag { lo: Some(iv.lo().clone()), hi: Some(iv.hi().clone()) }
    }

    /// Only an upper bound is known (the value may be zero).
    pub fn at_most(hi: Dyadic) -> Self {
        LogMag { lo: None, hi: Some(hi) }
    }

    pub fn new(lo: Option<Dyadic>, hi: Option<Dyadic>) -> Self {
        assert!(lo <= hi, "log-magnitude bracket out of order");
        LogMag { lo, hi }
    }

    pub fn lo(&self) -> Option<&Dyadic> {
        self.lo.as_ref()
    }

    pub fn hi(&self) -> Option<&Dyadic> {
        self.hi.as_ref()
    }

    pub fn is_neg_infinity(&self) -> bool {
        self.hi.is_none()
    }

    /// Both ends finite.
    pub fn is_bounded(&self) -> bool {
        self.lo.is_some()
    }

    /// The exact integer value, when the bracket is a single integer.
    pub fn exact_int(&self) -> Option<i64> {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) if a == b => a.to_bigint().and_then(|v| i64::try_from(v).ok()),
            _ => None,
        }
    }

    pub fn as_interval(&self) -> Option<Interval> {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => Some(Interval::new(a.clone(), b.clone())),
            _ => None,
        }
    }

    pub fn width(&self) -> Option<Dyadic> {
        self.as_interval().map(|iv| iv.width())
    }

    /// `log |xy| = log |x| + log |y|`.
    pub fn add(&self, other: &LogMag) -> LogMag {
        let sum = |a: &Option<Dyadic>, b: &Option<Dyadic>| match (a, b) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        if self.is_neg_infinity() || other.is_neg_infinity() {
            return LogMag::neg_infinity();
        }
        LogMag { lo: sum(&self.lo, &other.lo), hi: sum(&self.hi, &other.hi) }
    }

    /// Shift by a finite interval.
    pub fn add_interval(&self, iv: &Interval) -> LogMag {
        self.add(&LogMag::enclosure(iv.clone()))
    }

    /// `log max(|x|, |y|)`.
    pub fn max(&self, other: &LogMag) -> LogMag {
        LogMag { lo: self.lo.clone().max(other.lo.clone()), hi: self.hi.clone().max(other.hi.clone()) }
    }

    /// Certified `self < other`.
    pub fn certainly_lt(&self, other: &LogMag) -> bool {
        match (&self.hi, &other.lo) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }

    /// Certified `self <= other`.
    pub fn certainly_le(&self, other: &LogMag) -> bool {
        match (&self.hi, &other.lo) {
            (None, _) => true,
            (Some(a), Some(b)) => a <= b,
            (Some(_), None) => false,
        }
    }

    /// Brackets overlap.
    pub fn overlaps(&self, other: &LogMag) -> bool {
        !self.certainly_lt(other) && !other.certainly_lt(self)
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        let lo_ok = self.lo.as_ref().map_or(true, |l| l <= v);
        let hi_ok = self.hi.as_ref().map_or(false, |h| v <= h);
        lo_ok && hi_ok
    }

    /// Midpoint as a double, for display only.
    pub fn mid_f64(&self) -> f64 {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => (a.to_f64() + b.to_f64()) / 2.0,
            (None, Some(b)) => b.to_f64(),
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.as_ref().map_or(f64::NEG_INFINITY, Dyadic::to_f64)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.as_ref().map_or(f64::NEG_INFINITY, Dyadic::to_f64)
    }
}

impl fmt::Display for LogMag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.exact_int() {
            return write!(f, "{k}");
        }
        let show = |v: &Option<Dyadic>| v.as_ref().map_or("-inf".to_string(), |d| d.to_string());
        write!(f, "[{}, {}]", show(&self.lo), show(&self.hi))
    }
}
