//! Complex discs `{z : |z − m| ≤ r}` with dyadic midpoint and radius.
//!
//! Sums and products of midpoints are exact; the midpoint is only rounded
//! when that costs nothing relative to the radius already present, or in
//! division, which works at the ball's working precision.

use std::fmt;

use crate::arith::{Dyadic, Interval, LOG_PREC};
use crate::logmag::LogMag;

/// Bits kept below the radius when rounding a midpoint.
const GUARD: i64 = 64;
/// Significant bits kept in a radius.
const RAD_BITS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
    /// Imaginary part is identically zero (completion of ℤ is ℝ).
    real: bool,
    prec: u64,
}

impl Ball {
    pub fn real(mid: Dyadic, rad: Dyadic, prec: u64) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        Ball { re: mid, im: Dyadic::zero(), rad: rad.ceil_prec(RAD_BITS), real: true, prec }
    }

    pub fn complex(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u64) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        Ball { re, im, rad: rad.ceil_prec(RAD_BITS), real: false, prec }
    }

    /// Ball around a real interval.
    pub fn from_interval(iv: &Interval, prec: u64) -> Self {
        let mid = (iv.lo() + iv.hi()).shl(-1);
        Ball::real(mid, iv.width().shl(-1), prec)
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u64) -> Self {
        self.prec = prec;
        self
    }

    /// Real part as an interval (complex balls are projected).
    pub fn re_interval(&self) -> Interval {
        Interval::new(&self.re - &self.rad, &self.re + &self.rad)
    }

    /// Drop midpoint bits that sit far below the radius.
    fn settle(mut self) -> Self {
        if let Some(r) = self.rad.ilog2() {
            let k = r - GUARD;
            let re = self.re.round_to(k);
            let im = self.im.round_to(k);
            let slack = (&re - &self.re).abs() + (&im - &self.im).abs();
            self.re = re;
            self.im = im;
            self.rad = (&self.rad + &slack).ceil_prec(RAD_BITS);
        }
        self
    }

    pub fn neg(&self) -> Ball {
        Ball { re: -&self.re, im: -&self.im, ..self.clone() }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            rad: (&self.rad + &o.rad).ceil_prec(RAD_BITS),
            real: self.real && o.real,
            prec: self.prec.max(o.prec),
        }
        .settle()
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        let rad = &(&(&self.mid_abs_upper() * &o.rad) + &(&o.mid_abs_upper() * &self.rad)) + &(&self.rad * &o.rad);
        Ball { re, im, rad: rad.ceil_prec(RAD_BITS), real: self.real && o.real, prec: self.prec.max(o.prec) }.settle()
    }

    /// Is zero certainly outside the disc?
    pub fn excludes_zero(&self) -> bool {
        let (lo, _) = self.mid_abs_bounds();
        lo > self.rad
    }

    /// `1/self`; `None` when the disc may contain zero.
    pub fn inv(&self) -> Option<Ball> {
        if !self.excludes_zero() {
            return None;
        }
        let prec = self.prec;
        let n = &(&self.re * &self.re) + &(&self.im * &self.im);
        // 1/m = conj(m)/|m|²; round each coordinate to nearest and track the error.
        let div = |x: &Dyadic| {
            let lo = Dyadic::div_floor(x, &n, prec);
            let hi = Dyadic::div_ceil(x, &n, prec);
            let err = &hi - &lo;
            (lo, err)
        };
        let (re, e1) = div(&self.re);
        let (im, e2) = div(&(-&self.im));
        // |1/y − 1/m| ≤ r / (|m|(|m| − r)).
        let (m_lo, _) = self.mid_abs_bounds();
        let gap = &m_lo - &self.rad;
        let den = &m_lo * &gap;
        let prop = if self.rad.is_zero() { Dyadic::zero() } else { Dyadic::div_ceil(&self.rad, &den, RAD_BITS) };
        let rad = &(&prop + &e1) + &e2;
        Some(Ball { re, im, rad: rad.ceil_prec(RAD_BITS), real: self.real, prec })
    }

    pub fn div(&self, o: &Ball) -> Option<Ball> {
        let inv = o.inv()?.with_prec(self.prec.max(o.prec));
        Some(self.mul(&inv))
    }

    /// Upper bound for `|m|` (cheap: `|re| + |im|` would do, but this is tighter).
    fn mid_abs_upper(&self) -> Dyadic {
        self.mid_abs_bounds().1
    }

    /// Bracket of `|m|` at about `RAD_BITS` relative precision.
    fn mid_abs_bounds(&self) -> (Dyadic, Dyadic) {
        if self.im.is_zero() {
            let a = self.re.abs();
            return (a.floor_prec(RAD_BITS + 8), a.ceil_prec(RAD_BITS + 8));
        }
        if self.re.is_zero() {
            let a = self.im.abs();
            return (a.floor_prec(RAD_BITS + 8), a.ceil_prec(RAD_BITS + 8));
        }
        let p = RAD_BITS + 16;
        let (rl, rh) = (self.re.abs().floor_prec(p), self.re.abs().ceil_prec(p));
        let (il, ih) = (self.im.abs().floor_prec(p), self.im.abs().ceil_prec(p));
        let n_lo = &(&rl * &rl) + &(&il * &il);
        let n_hi = &(&rh * &rh) + &(&ih * &ih);
        (Dyadic::sqrt_floor(&n_lo, p), Dyadic::sqrt_ceil(&n_hi, p))
    }

    /// Certified bracket of `|z|` over the disc.
    pub fn abs_bounds(&self) -> (Dyadic, Dyadic) {
        let (lo, hi) = self.mid_abs_bounds();
        let lo = &lo - &self.rad;
        let lo = if lo.is_positive() { lo } else { Dyadic::zero() };
        (lo, (&hi + &self.rad).ceil_prec(RAD_BITS))
    }

    /// Certified bracket of `ln |z|`.
    pub fn abs_log(&self) -> LogMag {
        let (lo, hi) = self.abs_bounds();
        if hi.is_zero() {
            return LogMag::neg_infinity();
        }
        // no point resolving the log finer than the ball itself
        let prec = match (hi.ilog2(), (&hi - &lo).ilog2()) {
            (Some(h), Some(w)) => ((h - w).max(0) as u64 + 32).clamp(64, LOG_PREC),
            _ => LOG_PREC,
        };
        let l_hi = Interval::point(hi).ln(prec).hi().clone();
        if lo.is_zero() {
            return LogMag::at_most(l_hi);
        }
        let l_lo = Interval::point(lo).ln(prec).lo().clone();
        LogMag::new(Some(l_lo), Some(l_hi))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.real {
            write!(f, "{} ± {}", self.re, self.rad)
        } else {
            write!(f, "({}, {}) ± {}", self.re, self.im, self.rad)
        }
    }
}
