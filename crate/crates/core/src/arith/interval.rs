//! Closed real intervals with dyadic endpoints and outward rounding.
//!
//! Used for everything that lives in log space (log-heights, log-errors,
//! exponent estimates) and for the handful of real constants (ρ, c₀, γ, ...).

use std::fmt;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::dyadic::Dyadic;

/// Default working precision (bits) for log-space arithmetic.
pub const LOG_PREC: u64 = 192;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(v: Dyadic) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn from_int(v: i64) -> Self {
        Interval::point(Dyadic::from_int(v))
    }

    /// Enclosure of `num / den`.
    pub fn ratio(num: i64, den: i64, prec: u64) -> Self {
        let (n, d) = (Dyadic::from_int(num), Dyadic::from_int(den));
        Interval::new(Dyadic::div_floor(&n, &d, prec), Dyadic::div_ceil(&n, &d, prec))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// `self` lies inside `other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// Round endpoints outward to `prec` significant bits.
    pub fn rounded(&self, prec: u64) -> Self {
        Interval { lo: self.lo.floor_prec(prec), hi: self.hi.ceil_prec(prec) }
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn add(&self, other: &Interval) -> Self {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Interval) -> Self {
        Interval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn mul(&self, other: &Interval) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, k: i64) -> Self {
        self.mul(&Interval::from_int(k))
    }

    /// Division; the divisor must exclude zero.
    pub fn div(&self, other: &Interval, prec: u64) -> Self {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "interval division by an interval containing zero"
        );
        let cands = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let lo = cands.iter().map(|(a, b)| Dyadic::div_floor(a, b, prec)).min().unwrap();
        let hi = cands.iter().map(|(a, b)| Dyadic::div_ceil(a, b, prec)).max().unwrap();
        Interval { lo, hi }
    }

    pub fn max(&self, other: &Interval) -> Self {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn min(&self, other: &Interval) -> Self {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Self {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn abs_upper(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn sqrt(&self, prec: u64) -> Self {
        assert!(!self.lo.is_negative(), "square root of a negative interval");
        Interval { lo: Dyadic::sqrt_floor(&self.lo, prec), hi: Dyadic::sqrt_ceil(&self.hi, prec) }
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self, prec: u64) -> Self {
        assert!(self.lo.is_positive(), "logarithm of a non-positive interval");
        let (lo, _) = ln_bounds(&self.lo.floor_prec(prec + 32), prec);
        let (_, hi) = ln_bounds(&self.hi.ceil_prec(prec + 32), prec);
        Interval { lo, hi }
    }

    pub fn exp(&self, prec: u64) -> Self {
        let (lo, _) = exp_bounds(&self.lo, prec);
        let (_, hi) = exp_bounds(&self.hi, prec);
        Interval { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `2·atanh(num/den)` bracketed in fixed point with `s` fraction bits.
/// Requires `0 <= num/den <= 1/3`.
fn two_atanh_fixed(num: &BigInt, den: &BigInt, s: u64) -> (BigInt, BigInt) {
    let one = BigInt::one() << (s as usize);
    if num.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let t_lo = (num << (s as usize)).div_floor(den);
    let t_hi = (num << (s as usize)).div_ceil(den);
    let t2_lo = (&t_lo * &t_lo) >> (s as usize);
    let t2_hi = ((&t_hi * &t_hi) + (&one - 1u32)) >> (s as usize);

    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut pow_lo = t_lo;
    let mut pow_hi = t_hi;
    let mut k: u64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        sum_lo += pow_lo.div_floor(&d);
        sum_hi += pow_hi.div_ceil(&d);
        k += 1;
        pow_lo = (&pow_lo * &t2_lo) >> (s as usize);
        pow_hi = ((&pow_hi * &t2_hi) + (&one - 1u32)) >> (s as usize);
        if pow_hi <= BigInt::one() {
            break;
        }
    }
    // tail <= t^(2k+1) / ((2k+1)(1-t^2)) <= (9/8) t^(2k+1) / (2k+1); bound generously.
    let tail = (&pow_hi * 2u32) + 2u32;
    (sum_lo * 2, (sum_hi + tail) * 2)
}

/// Fixed-point bracket of ln 2 with `s` fraction bits.
/// Cached per canonical precision (a multiple of 256), then shifted down, so
/// the result depends on `s` alone and not on what was computed before.
fn ln2_fixed(s: u64) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u64, (BigInt, BigInt)>>> = OnceLock::new();
    let sc = s.div_ceil(256) * 256;
    let (lo, hi) = {
        let cache = CACHE.get_or_init(Default::default);
        let hit = cache.lock().unwrap().get(&sc).cloned();
        match hit {
            Some(v) => v,
            None => {
                let v = two_atanh_fixed(&BigInt::one(), &BigInt::from(3), sc);
                cache.lock().unwrap().insert(sc, v.clone());
                v
            }
        }
    };
    let d = (sc - s) as usize;
    let hi = (&hi + ((BigInt::one() << d) - 1u32)) >> d;
    (lo >> d, hi)
}

/// Enclosure of ln 2.
pub fn ln2(prec: u64) -> Interval {
    let s = prec + 16;
    let (lo, hi) = ln2_fixed(s);
    Interval::new(Dyadic::new(lo, -(s as i64)), Dyadic::new(hi, -(s as i64)))
}

/// Fixed-point brackets of `ln(1 + j/64)` for `j < 64`, cached like `ln2_fixed`.
fn ln_table_fixed(s: u64, j: usize) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<(BigInt, BigInt)>>>> = OnceLock::new();
    let sc = s.div_ceil(256) * 256;
    let (lo, hi) = {
        let cache = CACHE.get_or_init(Default::default);
        let hit = cache.lock().unwrap().get(&sc).map(|t| t[j].clone());
        match hit {
            Some(v) => v,
            None => {
                // ln(1 + j/64) = 2 atanh(j / (128 + j))
                let t: Vec<(BigInt, BigInt)> =
                    (0..64u32).map(|k| two_atanh_fixed(&BigInt::from(k), &BigInt::from(128 + k), sc)).collect();
                let v = t[j].clone();
                cache.lock().unwrap().insert(sc, t);
                v
            }
        }
    };
    let d = (sc - s) as usize;
    let hi = (&hi + ((BigInt::one() << d) - 1u32)) >> d;
    (lo >> d, hi)
}

/// Bracket `ln x` for a positive dyadic.
pub fn ln_bounds(x: &Dyadic, prec: u64) -> (Dyadic, Dyadic) {
    assert!(x.is_positive());
    let s = prec + 24;
    let man = x.mantissa();
    let nb = man.bits();
    // x = f · 2^k with f = man / 2^(nb-1) in [1, 2)
    let k = x.exponent() + nb as i64 - 1;
    let half = BigInt::one() << ((nb - 1) as usize);
    // f = c · g with c = 1 + j/64 and g in [1, 1 + 1/64)
    let j = ((man - &half) << 6usize) / &half;
    let c_num = &half * (BigInt::from(64u32) + &j);
    let man64 = man << 6usize;
    let num = &man64 - &c_num;
    let den = &man64 + &c_num;
    let (g_lo, g_hi) = two_atanh_fixed(&num, &den, s);
    let (c_lo, c_hi) = ln_table_fixed(s, j.to_usize().expect("j < 64"));
    let (l2_lo, l2_hi) = ln2_fixed(s);
    let kb = BigInt::from(k);
    let (k_lo, k_hi) = if k >= 0 {
        (&kb * &l2_lo, &kb * &l2_hi)
    } else {
        (&kb * &l2_hi, &kb * &l2_lo)
    };
    let e = -(s as i64);
    (Dyadic::new(g_lo + c_lo + k_lo, e), Dyadic::new(g_hi + c_hi + k_hi, e))
}

/// Bracket `exp x`.
pub fn exp_bounds(x: &Dyadic, prec: u64) -> (Dyadic, Dyadic) {
    let s = prec + 24;
    let l2 = ln2(s);
    // n = floor(x / ln 2) via a rough estimate, then fix r = x - n ln2 into [0, 1).
    let mut n = (x.to_f64() / std::f64::consts::LN_2).floor() as i64;
    let (r_lo, r_hi) = loop {
        let nl = Interval::from_int(n).mul(&l2);
        let r = Interval::point(x.clone()).sub(&nl);
        if r.lo().is_negative() {
            n -= 1;
            continue;
        }
        if r.hi() >= &Dyadic::one() {
            n += 1;
            continue;
        }
        break (r.lo().clone(), r.hi().clone());
    };
    let lo = exp_fixed(&r_lo, s, false);
    let hi = exp_fixed(&r_hi, s, true);
    (lo.shl(n), hi.shl(n))
}

/// exp(r) for 0 <= r < 1, rounded down or up.
fn exp_fixed(r: &Dyadic, s: u64, up: bool) -> Dyadic {
    let one = BigInt::one() << (s as usize);
    let scaled = r.shl(s as i64);
    let rf = if up { scaled.ceil_int() } else { scaled.floor_int() };
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k: u64 = 1;
    loop {
        let prod = &term * &rf;
        term = if up {
            (prod + (&one - 1u32)) >> (s as usize)
        } else {
            prod >> (s as usize)
        };
        term = if up {
            term.div_ceil(&BigInt::from(k))
        } else {
            term.div_floor(&BigInt::from(k))
        };
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
        if term <= BigInt::one() && k > 4 {
            break;
        }
    }
    if up {
        // remainder after the last term <= 2 * last term (r < 1, k >= 4), plus rounding slack
        sum += (term * 2u32) + BigInt::from(k + 4);
    }
    Dyadic::new(sum, -(s as i64))
}

/// Enclosure of the golden ratio γ = (1 + √5)/2.
pub fn golden_ratio(prec: u64) -> Interval {
    let s = prec + 8;
    let five = BigInt::from(5) << (2 * s as usize);
    let r = five.sqrt();
    let r_hi = if &r * &r == five { r.clone() } else { &r + 1 };
    let one = BigInt::one() << (s as usize);
    let e = -(s as i64) - 1;
    Interval::new(Dyadic::new(&one + r, e), Dyadic::new(one + r_hi, e))
}

/// Enclosure of 1/γ = γ − 1.
pub fn inv_golden_ratio(prec: u64) -> Interval {
    golden_ratio(prec).sub(&Interval::from_int(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(iv: &Interval, v: f64, tol: f64) {
        assert!((iv.lo().to_f64() - v).abs() < tol, "{iv} vs {v}");
        assert!((iv.hi().to_f64() - v).abs() < tol, "{iv} vs {v}");
    }

    #[test]
    fn ln2_encloses_and_is_tight() {
        let l = ln2(200);
        approx(&l, std::f64::consts::LN_2, 1e-15);
        assert!(l.width() <= Dyadic::pow2(-190));
    }

    #[test]
    fn ln_of_assorted_values() {
        for v in [1.0f64, 1.5, 2.0, 5.0, 0.001, 12345.678, 1e-30, 1e30] {
            let iv = Interval::point(Dyadic::from_f64(v)).ln(128);
            approx(&iv, v.ln(), 1e-12 * v.ln().abs().max(1.0));
            assert!(iv.width() <= Dyadic::pow2(-100));
        }
        assert_eq!(Interval::from_int(1).ln(64), Interval::from_int(0));
    }

    #[test]
    fn half_ln_five() {
        let iv = Interval::from_int(5).ln(128).mul(&Interval::point(Dyadic::pow2(-1)));
        approx(&iv, 0.804_718_956_217_050_2, 1e-15);
    }

    #[test]
    fn exp_brackets() {
        for v in [0.0f64, 0.5, 1.0, -1.0, 10.0, -20.0, 3.3] {
            let iv = Interval::point(Dyadic::from_f64(v)).exp(128);
            assert!(iv.lo() <= iv.hi());
            approx(&iv, v.exp(), 1e-12 * v.exp());
        }
    }

    #[test]
    fn exp_ln_round_trip_contains_input() {
        let x = Interval::point(Dyadic::from_f64(7.25));
        let back = x.ln(160).exp(160);
        assert!(back.contains(&Dyadic::from_f64(7.25)));
    }

    #[test]
    fn golden_ratio_identity() {
        let g = golden_ratio(128);
        assert!(g.width() <= Dyadic::pow2(-128));
        approx(&g, 1.618_033_988_749_895, 1e-15);
        // γ² = γ + 1 up to enclosure arithmetic
        assert!(g.mul(&g).overlaps(&g.add(&Interval::from_int(1))));
        approx(&inv_golden_ratio(128), 0.618_033_988_749_895, 1e-15);
    }
}
