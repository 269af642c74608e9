//! Exact dyadic rationals `m · 2^e`.
//!
//! Every midpoint, radius and interval endpoint in the crate is a `Dyadic`.
//! Addition, subtraction and multiplication are exact; anything that would
//! leave the dyadics (division, square roots, transcendental functions) comes
//! in floor/ceil pairs so callers can round outward.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `man · 2^exp`, with `man` odd (or zero, in which case `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: k }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite double");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.man.bits() as i64 - 1 + self.exp)
        }
    }

    /// Is this an integer?
    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }

    /// Exact integer value, if integral.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if !self.is_integer() {
            return None;
        }
        Some(&self.man << (self.exp as usize))
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << (self.exp as usize)
        } else {
            // BigInt >> rounds toward negative infinity.
            &self.man >> ((-self.exp) as usize)
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        -(-self).floor_int()
    }

    /// Largest multiple of `2^k` that is `<= self`.
    pub fn floor_to(&self, k: i64) -> Self {
        if self.exp >= k {
            return self.clone();
        }
        Dyadic::new(self.shl(-k).floor_int(), k)
    }

    /// Smallest multiple of `2^k` that is `>= self`.
    pub fn ceil_to(&self, k: i64) -> Self {
        if self.exp >= k {
            return self.clone();
        }
        Dyadic::new(self.shl(-k).ceil_int(), k)
    }

    /// Nearest multiple of `2^k`; exact ties go to the even multiple.
    pub fn round_to(&self, k: i64) -> Self {
        if self.exp >= k {
            return self.clone();
        }
        let lo = self.floor_to(k);
        let hi = self.ceil_to(k);
        let dlo = self - &lo;
        let dhi = &hi - self;
        match dlo.cmp(&dhi) {
            Ordering::Less => lo,
            Ordering::Greater => hi,
            Ordering::Equal => {
                let lo_even = lo.shl(-k).floor_int().is_even();
                if lo_even {
                    lo
                } else {
                    hi
                }
            }
        }
    }

    /// Round toward −∞ keeping `prec` significant bits.
    pub fn floor_prec(&self, prec: u64) -> Self {
        match self.sig_cut(prec) {
            Some(k) => self.floor_to(k),
            None => self.clone(),
        }
    }

    /// Round toward +∞ keeping `prec` significant bits.
    pub fn ceil_prec(&self, prec: u64) -> Self {
        match self.sig_cut(prec) {
            Some(k) => self.ceil_to(k),
            None => self.clone(),
        }
    }

    fn sig_cut(&self, prec: u64) -> Option<i64> {
        let bits = self.man.bits();
        if bits <= prec {
            None
        } else {
            Some(self.exp + (bits - prec) as i64)
        }
    }

    /// `floor(a / b · 2^s) · 2^-s` with `s` chosen for about `prec` significant bits.
    pub fn div_floor(a: &Dyadic, b: &Dyadic, prec: u64) -> Dyadic {
        Self::div_round(a, b, prec, false)
    }

    pub fn div_ceil(a: &Dyadic, b: &Dyadic, prec: u64) -> Dyadic {
        Self::div_round(a, b, prec, true)
    }

    fn div_round(a: &Dyadic, b: &Dyadic, prec: u64, up: bool) -> Dyadic {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        // man_a / man_b has bit length about bits(a) - bits(b); scale numerator.
        let shift = prec as i64 + b.man.bits() as i64 - a.man.bits() as i64 + 2;
        let shift = shift.max(0);
        let num = &a.man << (shift as usize);
        let q = if up {
            num.div_ceil(&b.man)
        } else {
            num.div_floor(&b.man)
        };
        Dyadic::new(q, a.exp - b.exp - shift)
    }

    /// Lower bound for `sqrt(x)` with about `prec` significant bits; `x >= 0`.
    pub fn sqrt_floor(x: &Dyadic, prec: u64) -> Dyadic {
        Self::sqrt_round(x, prec, false)
    }

    pub fn sqrt_ceil(x: &Dyadic, prec: u64) -> Dyadic {
        Self::sqrt_round(x, prec, true)
    }

    fn sqrt_round(x: &Dyadic, prec: u64, up: bool) -> Dyadic {
        assert!(!x.is_negative(), "square root of a negative dyadic");
        if x.is_zero() {
            return Dyadic::zero();
        }
        // Want integer n = man·2^(exp + 2t) with exp + 2t even-aligned and ~2·prec bits.
        let bits = x.man.bits() as i64;
        let mut s = 2 * prec as i64 + 4 - bits;
        if s < 0 {
            s = 0;
        }
        if (x.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let n = &x.man << (s as usize);
        let r = n.sqrt();
        let r = if up && &r * &r != n { r + 1 } else { r };
        Dyadic::new(r, (x.exp - s) / 2)
    }

    /// Nearest double (used only for display and heuristics, never for certification).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let (m, e) = if bits > 60 {
            let cut = bits - 60;
            ((&self.man >> cut as usize).to_f64().unwrap_or(0.0), self.exp + cut as i64)
        } else {
            (self.man.to_f64().unwrap_or(0.0), self.exp)
        };
        let e = e.clamp(-4000, 4000) as i32;
        if e.abs() > 1000 {
            let half = e / 2;
            m * 2f64.powi(half) * 2f64.powi(e - half)
        } else {
            m * 2f64.powi(e)
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.ilog2().unwrap(), other.ilog2().unwrap());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << ((self.exp - e) as usize);
        let b = &other.man << ((other.exp - e) as usize);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.man << ((self.exp - e) as usize);
        let b = &rhs.man << ((rhs.exp - e) as usize);
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &rhs.man, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { man: -&self.man, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { man: -self.man, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::from_bigint(v)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.to_f64())
    }
}
