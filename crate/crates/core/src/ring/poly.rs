//! Dense univariate polynomials over a prime field F_p.
//!
//! Coefficients are stored little-endian with no trailing zeros. Large
//! products go through Kronecker substitution into a single big-integer
//! multiplication; the construction reaches degrees in the hundreds of
//! thousands, where schoolbook multiplication is far too slow.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

/// Below this many coefficients (of the shorter factor) multiplication is schoolbook.
const KRONECKER_THRESHOLD: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u32,
    coeffs: Vec<u32>,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "inverting zero mod {p}");
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u32, mut e: u32, p: u32) -> u32 {
    let mut r: u64 = 1 % p as u64;
    let mut b = a as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    a = r as u32;
    a
}

impl FpPoly {
    /// Build from little-endian coefficients (reduced mod p, trailing zeros stripped).
    pub fn new(p: u32, coeffs: Vec<u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| (c % p as u64) as u32).collect();
        FpPoly::from_reduced(p, coeffs)
    }

    pub(crate) fn from_reduced(p: u32, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    /// From possibly negative integer coefficients.
    pub fn from_signed(p: u32, coeffs: &[i64]) -> Self {
        let v = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        FpPoly::new(p, v)
    }

    pub fn zero(p: u32) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u32, c: u64) -> Self {
        FpPoly::new(p, vec![c])
    }

    /// The indeterminate `u`.
    pub fn var(p: u32) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|k| {
                let s = self.coeff(k) as u64 + other.coeff(k) as u64;
                (s % p as u64) as u32
            })
            .collect();
        FpPoly::from_reduced(p, v)
    }

    pub fn neg(&self) -> FpPoly {
        let p = self.p;
        let v = self.coeffs.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect();
        FpPoly::from_reduced(p, v)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> FpPoly {
        let p = self.p as u64;
        let v = self.coeffs.iter().map(|&x| (x as u64 * c as u64 % p) as u32).collect();
        FpPoly::from_reduced(self.p, v)
    }

    /// Multiply by `u^k`.
    pub fn shift(&self, k: usize) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0u32; k];
        v.extend_from_slice(&self.coeffs);
        FpPoly { p: self.p, coeffs: v }
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        FpPoly::from_reduced(self.p, mul_coeffs(&self.coeffs, &other.coeffs, self.p))
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = self.p as u64;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (FpPoly::zero(self.p), self.clone());
        }
        let inv_lead = inv_mod(divisor.leading(), self.p) as u64;
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        let mut quo = vec![0u32; self.coeffs.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = rem[k + dd] % p * inv_lead % p;
            quo[k] = c as u32;
            if c != 0 {
                for (j, &dc) in divisor.coeffs.iter().enumerate() {
                    let t = c * dc as u64 % p;
                    rem[k + j] = (rem[k + j] + p - t) % p;
                }
            }
        }
        rem.truncate(dd);
        let rem = rem.into_iter().map(|c| c as u32).collect();
        (FpPoly::from_reduced(self.p, quo), FpPoly::from_reduced(self.p, rem))
    }

    /// Evaluate the "base p" order used for deterministic tie-breaking:
    /// compare degree first, then coefficients from the top down.
    pub fn cmp_numeric(&self, other: &FpPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Make monic; returns (monic, leading coefficient).
    pub fn monic(&self) -> (FpPoly, u32) {
        let lc = self.leading();
        if lc == 0 || lc == 1 {
            return (self.clone(), lc);
        }
        (self.scale(inv_mod(lc, self.p)), lc)
    }
}

/// Product of little-endian coefficient vectors over F_p (result may carry trailing zeros).
pub(crate) fn mul_coeffs(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) < KRONECKER_THRESHOLD {
        schoolbook(a, b, p)
    } else {
        kronecker(a, b, p)
    }
}

fn schoolbook(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    // Accumulate with periodic reduction so u64 never overflows.
    let per_step = (p - 1) * (p - 1);
    let budget = if per_step == 0 { u64::MAX } else { (u64::MAX / 2) / per_step };
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut since_reduce = 0u64;
    for (i, &x) in short.iter().enumerate() {
        if x != 0 {
            let x = x as u64;
            for (j, &y) in long.iter().enumerate() {
                out[i + j] += x * y as u64;
            }
        }
        since_reduce += 1;
        if since_reduce >= budget {
            for c in out.iter_mut() {
                *c %= p;
            }
            since_reduce = 0;
        }
    }
    out.into_iter().map(|c| (c % p) as u32).collect()
}

fn kronecker(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().min(b.len()) as u128;
    let bound = n * (p as u128 - 1) * (p as u128 - 1);
    let slot = (128 - bound.leading_zeros()).max(1) as usize;
    let pa = pack(a, slot);
    let pb = pack(b, slot);
    let prod = pa * pb;
    unpack(&prod, slot, a.len() + b.len() - 1, p)
}

fn pack(c: &[u32], slot: usize) -> BigUint {
    let total_bits = c.len() * slot;
    let mut words = vec![0u64; total_bits / 64 + 2];
    for (k, &v) in c.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let bit = k * slot;
        let (w, off) = (bit / 64, bit % 64);
        let v = v as u64;
        words[w] |= v << off;
        if off != 0 && off + 32 > 64 {
            words[w + 1] |= v >> (64 - off);
        }
    }
    let digits: Vec<u32> = words.iter().flat_map(|&w| [w as u32, (w >> 32) as u32]).collect();
    BigUint::new(digits)
}

fn unpack(v: &BigUint, slot: usize, len: usize, p: u32) -> Vec<u32> {
    let words = v.to_u64_digits();
    let mask: u128 = if slot >= 128 { u128::MAX } else { (1u128 << slot) - 1 };
    let word = |i: usize| -> u128 { words.get(i).copied().unwrap_or(0) as u128 };
    (0..len)
        .map(|k| {
            let bit = k * slot;
            let (w, off) = (bit / 64, bit % 64);
            let chunk = word(w) | (word(w + 1) << 64);
            let mut val = chunk >> off;
            if off + slot > 128 {
                val |= word(w + 2) << (128 - off);
            }
            ((val & mask) % p as u128) as u32
        })
        .collect()
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "u")?,
                (1, _) => write!(f, "{c}u")?,
                (_, 1) => write!(f, "u^{k}")?,
                _ => write!(f, "{c}u^{k}")?,
            }
        }
        Ok(())
    }
}
