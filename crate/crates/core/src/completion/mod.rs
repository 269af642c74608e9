//! Certified arithmetic in the completion: balls for ℝ and ℂ, Laurent jets
//! for F_p((1/u)). Nothing here ever returns an uncertified answer; when
//! error regions overlap, the caller gets `Certainty::Unknown` and may refine.

mod ball;
mod jet;

use std::cmp::Ordering;
use std::fmt;

use num_traits::ToPrimitive;

use crate::arith::{ln2, Dyadic, Interval};
use crate::error::{Error, Result};
use crate::logmag::LogMag;
use crate::ring::{Domain, RingElement};

pub use ball::Ball;
pub use jet::Jet;

/// Default working precision for balls, in bits.
pub const START_BITS: u64 = 128;
/// Default coefficient window for jets.
pub const START_WINDOW: usize = 64;
/// Default hard caps. 2^16 bits is too little for index-20 records, hence 2^20.
pub const CAP_BITS: u64 = 1 << 20;
pub const CAP_WINDOW: usize = 1 << 18;

/// An element of the completion together with a certified error region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Ball(Ball),
    Jet(Jet),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    Less,
    Greater,
    Unknown,
}

impl Certainty {
    pub fn from_ordering(o: Ordering) -> Certainty {
        match o {
            Ordering::Less => Certainty::Less,
            Ordering::Greater => Certainty::Greater,
            Ordering::Equal => Certainty::Unknown,
        }
    }
}

/// Exact image of a ring element.
pub fn embed(x: &RingElement) -> Scalar {
    embed_at(x, &Level::start())
}

/// Exact image, carrying the given working precision (√5 is irrational,
/// so ℤ[√−5] elements become balls of width about `2^-bits`).
pub fn embed_at(x: &RingElement, level: &Level) -> Scalar {
    match x {
        RingElement::Int(v) => Scalar::Ball(Ball::real(Dyadic::from_bigint(v.clone()), Dyadic::zero(), level.bits)),
        RingElement::Gauss(a, b) => Scalar::Ball(Ball::complex(
            Dyadic::from_bigint(a.clone()),
            Dyadic::from_bigint(b.clone()),
            Dyadic::zero(),
            level.bits,
        )),
        RingElement::SqrtM5(a, b) => {
            let re = Dyadic::from_bigint(a.clone());
            if num_traits::Zero::is_zero(b) {
                return Scalar::Ball(Ball::complex(re, Dyadic::zero(), Dyadic::zero(), level.bits));
            }
            // im = b·√5, enclosed from √(5b²).
            let sq = Dyadic::from_bigint(b * b * 5);
            let prec = level.bits + b.bits();
            let lo = Dyadic::sqrt_floor(&sq, prec);
            let hi = Dyadic::sqrt_ceil(&sq, prec);
            let (lo, hi) = if b.sign() == num_bigint::Sign::Minus { (-&hi, -&lo) } else { (lo, hi) };
            let rad = &hi - &lo;
            Scalar::Ball(Ball::complex(re, lo, rad, level.bits))
        }
        RingElement::Poly(f) => Scalar::Jet(Jet::from_poly(f, level.window)),
    }
}

impl Scalar {
    pub fn zero_for(domain: Domain) -> Scalar {
        embed(&domain.zero())
    }

    pub fn as_ball(&self) -> Option<&Ball> {
        match self {
            Scalar::Ball(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_jet(&self) -> Option<&Jet> {
        match self {
            Scalar::Jet(j) => Some(j),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Scalar::Ball(b) => b.is_exact(),
            Scalar::Jet(j) => j.tail().is_none(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Ball(b) => Scalar::Ball(b.neg()),
            Scalar::Jet(j) => Scalar::Jet(j.neg()),
        }
    }

    /// Smallest integer `k` with certified error `≤ e^k`; `None` when exact.
    pub fn error_exponent(&self) -> Option<i64> {
        match self {
            Scalar::Jet(j) => j.tail(),
            Scalar::Ball(b) => {
                let r = b.rad().ilog2()?;
                // rad < 2^(r+1) = e^((r+1) ln 2)
                let v = Interval::from_int(r + 1).mul(&ln2(64));
                Some(v.hi().ceil_int().to_i64().unwrap_or(i64::MAX))
            }
        }
    }

    /// Certified bracket of `log |x|`.
    pub fn abs_log(&self) -> LogMag {
        match self {
            Scalar::Ball(b) => b.abs_log(),
            Scalar::Jet(j) => j.abs_log(),
        }
    }

    /// Certified `|self| < |o|`, without taking logs for balls.
    pub fn certainly_smaller(&self, o: &Scalar) -> bool {
        match (self, o) {
            (Scalar::Ball(a), Scalar::Ball(b)) => a.abs_bounds().1 < b.abs_bounds().0,
            (Scalar::Jet(a), Scalar::Jet(b)) => a.abs_log().certainly_lt(&b.abs_log()),
            _ => false,
        }
    }
}

pub fn sc_add(x: &Scalar, y: &Scalar) -> Result<Scalar> {
    match (x, y) {
        (Scalar::Ball(a), Scalar::Ball(b)) => Ok(Scalar::Ball(a.add(b))),
        (Scalar::Jet(a), Scalar::Jet(b)) if a.prime() == b.prime() => Ok(Scalar::Jet(a.add(b))),
        _ => Err(Error::ScalarKindMismatch),
    }
}

pub fn sc_sub(x: &Scalar, y: &Scalar) -> Result<Scalar> {
    sc_add(x, &y.neg())
}

pub fn sc_mul(x: &Scalar, y: &Scalar) -> Result<Scalar> {
    match (x, y) {
        (Scalar::Ball(a), Scalar::Ball(b)) => Ok(Scalar::Ball(a.mul(b))),
        (Scalar::Jet(a), Scalar::Jet(b)) if a.prime() == b.prime() => Ok(Scalar::Jet(a.mul(b))),
        _ => Err(Error::ScalarKindMismatch),
    }
}

pub fn sc_div(x: &Scalar, y: &Scalar) -> Result<Scalar> {
    match (x, y) {
        (Scalar::Ball(a), Scalar::Ball(b)) => a.div(b).map(Scalar::Ball).ok_or(Error::DivisionByPossibleZero),
        (Scalar::Jet(a), Scalar::Jet(b)) if a.prime() == b.prime() => {
            a.div(b).map(Scalar::Jet).ok_or(Error::DivisionByPossibleZero)
        }
        _ => Err(Error::ScalarKindMismatch),
    }
}

/// Certified bracket of `log |x|`; `(−∞, bound]` when zero is not excluded.
pub fn sc_abs_bounds(x: &Scalar) -> LogMag {
    x.abs_log()
}

/// Real balls compare by value; complex balls and jets by absolute value.
pub fn cmp_certified(x: &Scalar, y: &Scalar) -> Certainty {
    if let (Scalar::Ball(a), Scalar::Ball(b)) = (x, y) {
        if a.is_real() && b.is_real() {
            let (ia, ib) = (a.re_interval(), b.re_interval());
            if ia.is_point() && ib.is_point() {
                return Certainty::from_ordering(ia.lo().cmp(ib.lo()));
            }
            return if ia.certainly_lt(&ib) {
                Certainty::Less
            } else if ib.certainly_lt(&ia) {
                Certainty::Greater
            } else {
                Certainty::Unknown
            };
        }
    }
    cmp_abs(x, y)
}

/// Compare `|x|` with `|y|`.
pub fn cmp_abs(x: &Scalar, y: &Scalar) -> Certainty {
    let (lx, ly) = (x.abs_log(), y.abs_log());
    if lx.certainly_lt(&ly) {
        Certainty::Less
    } else if ly.certainly_lt(&lx) {
        Certainty::Greater
    } else {
        Certainty::Unknown
    }
}

/// Working precision for one refinement round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Level {
    pub bits: u64,
    pub window: usize,
}

impl Level {
    pub fn start() -> Level {
        Level { bits: START_BITS, window: START_WINDOW }
    }

    pub fn doubled(&self) -> Level {
        Level { bits: self.bits * 2, window: self.window * 2 }
    }
}

/// Start level plus hard caps; each round doubles both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: Level,
    pub cap: Level,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start: Level::start(), cap: Level { bits: CAP_BITS, window: CAP_WINDOW } }
    }
}

impl PrecisionPolicy {
    /// Caps from a single bit budget: the jet window scales as bits / 4.
    pub fn with_cap_bits(bits: u64) -> Self {
        let bits = bits.max(START_BITS);
        PrecisionPolicy {
            start: Level::start(),
            cap: Level { bits, window: ((bits / 4) as usize).max(START_WINDOW) },
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = Level> + '_ {
        std::iter::successors(Some(self.start), |l| Some(l.doubled()))
            .take_while(|l| l.bits <= self.cap.bits || l.window <= self.cap.window)
            .map(|l| Level { bits: l.bits.min(self.cap.bits), window: l.window.min(self.cap.window) })
    }
}

/// Anything that can recompute a scalar at a given precision.
pub trait Recipe {
    fn evaluate(&self, level: &Level) -> Result<Scalar>;
}

impl Recipe for Scalar {
    fn evaluate(&self, _level: &Level) -> Result<Scalar> {
        Ok(self.clone())
    }
}

/// Re-evaluate at increasing precision until `accept` holds.
pub fn refine_until<R: Recipe + ?Sized>(
    recipe: &R,
    policy: &PrecisionPolicy,
    mut accept: impl FnMut(&Scalar) -> bool,
) -> Result<Scalar> {
    let mut last = None;
    for level in policy.levels() {
        let s = recipe.evaluate(&level)?;
        if accept(&s) {
            return Ok(s);
        }
        last = Some(s);
    }
    let bound = last.as_ref().and_then(Scalar::error_exponent);
    Err(Error::PrecisionCapExceeded { cap: policy.cap.bits, last_log2: bound.unwrap_or(i64::MAX) })
}

/// Re-evaluate until the error is at most `e^target`.
pub fn refine<R: Recipe + ?Sized>(recipe: &R, target: i64, policy: &PrecisionPolicy) -> Result<Scalar> {
    refine_until(recipe, policy, |s| s.error_exponent().map_or(true, |k| k <= target))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Ball(b) => b.fmt(f),
            Scalar::Jet(j) => j.fmt(f),
        }
    }
}
