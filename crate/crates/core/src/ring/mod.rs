//! The coefficient rings A: ℤ, ℤ[i], ℤ[√−5] and F_p[u].
//!
//! Each ring carries an absolute value with `|a| >= 1` on nonzero elements:
//! the complex modulus for the three archimedean rings and `e^{deg}` for
//! polynomials. Magnitudes are compared exactly through integer norms or
//! degrees; logarithms only appear when a caller asks for `abs_log`.

mod codec;
mod matrix;
pub mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{Dyadic, Interval};
use crate::error::{Error, Result};
use crate::logmag::LogMag;

pub use matrix::Mat2;
pub use poly::FpPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    RationalIntegers,
    GaussianIntegers,
    ZSqrtMinus5,
    PolyOverPrimeField,
}

/// Which ring A we are working over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Integers,
    Gaussian,
    SqrtMinus5,
    PolyFp(u32),
}

impl Domain {
    pub fn poly(p: u32) -> Result<Domain> {
        if poly::is_prime(p) {
            Ok(Domain::PolyFp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn from_kind(kind: DomainKind, p: Option<u32>) -> Result<Domain> {
        match kind {
            DomainKind::RationalIntegers => Ok(Domain::Integers),
            DomainKind::GaussianIntegers => Ok(Domain::Gaussian),
            DomainKind::ZSqrtMinus5 => Ok(Domain::SqrtMinus5),
            DomainKind::PolyOverPrimeField => {
                Domain::poly(p.ok_or_else(|| Error::Config("poly-over-prime-field needs p".into()))?)
            }
        }
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            Domain::Integers => DomainKind::RationalIntegers,
            Domain::Gaussian => DomainKind::GaussianIntegers,
            Domain::SqrtMinus5 => DomainKind::ZSqrtMinus5,
            Domain::PolyFp(_) => DomainKind::PolyOverPrimeField,
        }
    }

    pub fn prime(&self) -> Option<u32> {
        match self {
            Domain::PolyFp(p) => Some(*p),
            _ => None,
        }
    }

    /// Unique factorization (and here: Euclidean).
    pub fn ufd(&self) -> bool {
        !matches!(self, Domain::SqrtMinus5)
    }

    pub fn archimedean(&self) -> bool {
        !matches!(self, Domain::PolyFp(_))
    }

    pub fn zero(&self) -> RingElement {
        self.from_int(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    /// Image of an integer.
    pub fn from_int(&self, v: i64) -> RingElement {
        match *self {
            Domain::Integers => RingElement::Int(BigInt::from(v)),
            Domain::Gaussian => RingElement::Gauss(BigInt::from(v), BigInt::zero()),
            Domain::SqrtMinus5 => RingElement::SqrtM5(BigInt::from(v), BigInt::zero()),
            Domain::PolyFp(p) => RingElement::Poly(FpPoly::from_signed(p, &[v])),
        }
    }

    /// All units of A.
    pub fn units(&self) -> Vec<RingElement> {
        match *self {
            Domain::Integers => vec![self.from_int(1), self.from_int(-1)],
            Domain::SqrtMinus5 => vec![self.from_int(1), self.from_int(-1)],
            Domain::Gaussian => vec![
                RingElement::gauss(1, 0),
                RingElement::gauss(0, 1),
                RingElement::gauss(-1, 0),
                RingElement::gauss(0, -1),
            ],
            Domain::PolyFp(p) => (1..p as u64).map(|c| RingElement::Poly(FpPoly::constant(p, c))).collect(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Integers => write!(f, "Z"),
            Domain::Gaussian => write!(f, "Z[i]"),
            Domain::SqrtMinus5 => write!(f, "Z[sqrt(-5)]"),
            Domain::PolyFp(p) => write!(f, "F_{p}[u]"),
        }
    }
}

/// An exact element of A in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElement {
    Int(BigInt),
    /// `x + y·i`
    Gauss(BigInt, BigInt),
    /// `x + y·√−5`
    SqrtM5(BigInt, BigInt),
    Poly(FpPoly),
}

use RingElement::{Gauss, Int, Poly, SqrtM5};

impl RingElement {
    pub fn int(v: i64) -> Self {
        Int(BigInt::from(v))
    }

    pub fn gauss(x: i64, y: i64) -> Self {
        Gauss(BigInt::from(x), BigInt::from(y))
    }

    pub fn sqrt_m5(x: i64, y: i64) -> Self {
        SqrtM5(BigInt::from(x), BigInt::from(y))
    }

    pub fn poly(p: u32, coeffs: &[i64]) -> Self {
        Poly(FpPoly::from_signed(p, coeffs))
    }

    pub fn domain(&self) -> Domain {
        match self {
            Int(_) => Domain::Integers,
            Gauss(..) => Domain::Gaussian,
            SqrtM5(..) => Domain::SqrtMinus5,
            Poly(f) => Domain::PolyFp(f.prime()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Int(v) => v.is_zero(),
            Gauss(x, y) | SqrtM5(x, y) => x.is_zero() && y.is_zero(),
            Poly(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.domain().one()
    }

    fn check(&self, other: &RingElement) -> Result<()> {
        if self.domain() == other.domain() {
            Ok(())
        } else {
            Err(Error::DomainMismatch(self.domain().to_string(), other.domain().to_string()))
        }
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        Ok(match (self, other) {
            (Int(a), Int(b)) => Int(a + b),
            (Gauss(a, b), Gauss(c, d)) => Gauss(a + c, b + d),
            (SqrtM5(a, b), SqrtM5(c, d)) => SqrtM5(a + c, b + d),
            (Poly(f), Poly(g)) => Poly(f.add(g)),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check(other)?;
        Ok(match (self, other) {
            (Int(a), Int(b)) => Int(a * b),
            (Gauss(a, b), Gauss(c, d)) => Gauss(a * c - b * d, a * d + b * c),
            (SqrtM5(a, b), SqrtM5(c, d)) => SqrtM5(a * c - b * d * 5, a * d + b * c),
            (Poly(f), Poly(g)) => Poly(f.mul(g)),
            _ => unreachable!(),
        })
    }

    fn neg_ref(&self) -> RingElement {
        match self {
            Int(a) => Int(-a),
            Gauss(a, b) => Gauss(-a, -b),
            SqrtM5(a, b) => SqrtM5(-a, -b),
            Poly(f) => Poly(f.neg()),
        }
    }

    pub fn pow(&self, k: u32) -> RingElement {
        let mut acc = self.domain().one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugate (archimedean rings); identity on ℤ and on polynomials.
    pub fn conj(&self) -> RingElement {
        match self {
            Gauss(a, b) => Gauss(a.clone(), -b),
            SqrtM5(a, b) => SqrtM5(a.clone(), -b),
            other => other.clone(),
        }
    }

    /// `N(x) = x·x̄ = |x|²` for the archimedean rings.
    pub fn norm(&self) -> Option<BigInt> {
        match self {
            Int(a) => Some(a * a),
            Gauss(a, b) => Some(a * a + b * b),
            SqrtM5(a, b) => Some(a * a + b * b * 5),
            Poly(_) => None,
        }
    }

    /// Polynomial degree (ultrametric log-magnitude).
    pub fn degree(&self) -> Option<usize> {
        match self {
            Poly(f) => f.degree(),
            _ => None,
        }
    }

    /// Certified bracket of `log |x|`: exact degree for polynomials, an
    /// enclosure of `½·ln N(x)` of width at most `eps` otherwise.
    pub fn abs_log(&self, eps: &Dyadic) -> LogMag {
        if self.is_zero() {
            return LogMag::neg_infinity();
        }
        match self {
            Poly(f) => LogMag::exact(f.degree().unwrap() as i64),
            _ => {
                let prec = eps_to_prec(eps);
                let n = self.norm().unwrap();
                let half = Interval::point(Dyadic::from_bigint(n)).ln(prec);
                LogMag::enclosure(Interval::new(half.lo().shl(-1), half.hi().shl(-1)))
            }
        }
    }

    /// Exact comparison of absolute values.
    pub fn abs_cmp(&self, other: &RingElement) -> Ordering {
        match (self, other) {
            (Poly(f), Poly(g)) => f.degree().map(|d| d as i64).unwrap_or(-1).cmp(&g.degree().map(|d| d as i64).unwrap_or(-1)),
            _ => self.norm().unwrap().cmp(&other.norm().unwrap()),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Poly(f) => f.degree() == Some(0),
            _ => self.norm().map_or(false, |n| n.is_one()),
        }
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<RingElement> {
        if !self.is_unit() {
            return None;
        }
        Some(match self {
            Int(a) => Int(a.clone()),
            Gauss(..) | SqrtM5(..) => self.conj(),
            Poly(f) => Poly(FpPoly::constant(f.prime(), poly::inv_mod(f.leading(), f.prime()) as u64)),
        })
    }

    /// `(canonical, unit)` with `self = unit · canonical`.
    pub fn unit_normalize(&self) -> Result<(RingElement, RingElement)> {
        if self.is_zero() {
            return Err(Error::ZeroInput("unit_normalize"));
        }
        let d = self.domain();
        Ok(match self {
            Int(a) => {
                if a.is_negative() {
                    (Int(-a), d.from_int(-1))
                } else {
                    (self.clone(), d.one())
                }
            }
            SqrtM5(x, y) => {
                if x.is_positive() || (x.is_zero() && y.is_positive()) {
                    (self.clone(), d.one())
                } else {
                    (self.neg_ref(), d.from_int(-1))
                }
            }
            Gauss(..) => {
                // x·i^k lands in Re > 0, Im >= 0 for exactly one k.
                let i = RingElement::gauss(0, 1);
                let mut c = self.clone();
                let mut inv_unit = d.one();
                loop {
                    if let Gauss(re, im) = &c {
                        if re.is_positive() && !im.is_negative() {
                            break;
                        }
                    }
                    c = &c * &i;
                    inv_unit = &inv_unit * &i;
                }
                (c, inv_unit.unit_inverse().unwrap())
            }
            Poly(f) => {
                let (m, lc) = f.monic();
                (Poly(m), Poly(FpPoly::constant(f.prime(), lc as u64)))
            }
        })
    }

    /// The canonical associate (zero maps to zero).
    pub fn canonical(&self) -> RingElement {
        if self.is_zero() {
            return self.clone();
        }
        self.unit_normalize().map(|(c, _)| c).unwrap()
    }

    /// Euclidean division with `|r| < |divisor|` (not available over ℤ[√−5]).
    pub fn div_rem(&self, divisor: &RingElement) -> Result<(RingElement, RingElement)> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(Error::ZeroInput("div_rem"));
        }
        Ok(match (self, divisor) {
            (Int(a), Int(b)) => {
                let (q, r) = a.div_mod_floor(b);
                (Int(q), Int(r))
            }
            (Gauss(..), Gauss(..)) => {
                let num = self * &divisor.conj();
                let n = divisor.norm().unwrap();
                let Gauss(nx, ny) = num else { unreachable!() };
                let q = Gauss(round_div(&nx, &n), round_div(&ny, &n));
                let r = self - &(&q * divisor);
                (q, r)
            }
            (Poly(f), Poly(g)) => {
                let (q, r) = f.div_rem(g);
                (Poly(q), Poly(r))
            }
            _ => {
                return Err(Error::UnsupportedDomain { op: "euclidean division", domain: self.domain().to_string() })
            }
        })
    }

    /// `self / divisor` when the division is exact in A.
    pub fn exact_div(&self, divisor: &RingElement) -> Option<RingElement> {
        if self.check(divisor).is_err() || divisor.is_zero() {
            return None;
        }
        match (self, divisor) {
            (Gauss(..), _) | (SqrtM5(..), _) => {
                let num = self * &divisor.conj();
                let n = divisor.norm().unwrap();
                let (x, y) = match &num {
                    Gauss(x, y) | SqrtM5(x, y) => (x, y),
                    _ => unreachable!(),
                };
                if (x % &n).is_zero() && (y % &n).is_zero() {
                    let (qx, qy) = (x / &n, y / &n);
                    Some(if matches!(self, Gauss(..)) { Gauss(qx, qy) } else { SqrtM5(qx, qy) })
                } else {
                    None
                }
            }
            _ => {
                let (q, r) = self.div_rem(divisor).ok()?;
                r.is_zero().then_some(q)
            }
        }
    }

    /// Total order used for deterministic tie-breaking: by absolute value,
    /// then by coordinates.
    pub fn cmp_canonical(&self, other: &RingElement) -> Ordering {
        self.abs_cmp(other).then_with(|| match (self, other) {
            (Int(a), Int(b)) => a.cmp(b),
            (Gauss(a, b), Gauss(c, d)) | (SqrtM5(a, b), SqrtM5(c, d)) => a.cmp(c).then(b.cmp(d)),
            (Poly(f), Poly(g)) => f.cmp_numeric(g),
            _ => Ordering::Equal,
        })
    }
}

/// Nearest integer to `a / n` (n > 0), ties toward +∞.
fn round_div(a: &BigInt, n: &BigInt) -> BigInt {
    let two_a: BigInt = a * 2 + n;
    two_a.div_floor(&(n * 2))
}

/// Working precision for a requested enclosure width.
pub(crate) fn eps_to_prec(eps: &Dyadic) -> u64 {
    let bits = eps.ilog2().map_or(64, |k| (-k).max(0) as u64);
    (bits + 16).max(64)
}

/// A greatest common divisor, unit-normalized.
pub fn gcd(x: &RingElement, y: &RingElement) -> Result<RingElement> {
    x.check(y)?;
    if !x.domain().ufd() {
        return Err(Error::UnsupportedDomain { op: "gcd", domain: x.domain().to_string() });
    }
    if x.is_zero() && y.is_zero() {
        return Err(Error::ZeroInput("gcd"));
    }
    let (mut a, mut b) = (x.clone(), y.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.canonical())
}

/// gcd of all entries is a unit.
pub fn is_primitive(xs: &[RingElement]) -> Result<bool> {
    let mut g: Option<RingElement> = None;
    for x in xs {
        if x.is_zero() {
            continue;
        }
        g = Some(match g {
            None => x.canonical(),
            Some(g) => gcd(&g, x)?,
        });
    }
    match g {
        None => Err(Error::ZeroInput("is_primitive")),
        Some(g) => {
            if !g.domain().ufd() {
                return Err(Error::UnsupportedDomain { op: "primitivity", domain: g.domain().to_string() });
            }
            Ok(g.is_unit())
        }
    }
}

macro_rules! ring_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a RingElement> for &'a RingElement {
            type Output = RingElement;
            /// Panics on a domain mismatch; use the `checked_*` form for untrusted input.
            fn $m(self, rhs: &RingElement) -> RingElement {
                self.$checked(rhs).expect("ring operation across domains")
            }
        }
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
    };
}
ring_op!(Add, add, checked_add);
ring_op!(Sub, sub, checked_sub);
ring_op!(Mul, mul, checked_mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_ref()
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_ref()
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int(a) => write!(f, "{a}"),
            Gauss(a, b) => {
                if b.is_negative() {
                    write!(f, "{a}-{}i", -b)
                } else {
                    write!(f, "{a}+{b}i")
                }
            }
            SqrtM5(a, b) => {
                if b.is_negative() {
                    write!(f, "{a}-{}*sqrt(-5)", -b)
                } else {
                    write!(f, "{a}+{b}*sqrt(-5)")
                }
            }
            Poly(p) => write!(f, "{p}"),
        }
    }
}

pub use codec::{element_from_json, element_to_json};
