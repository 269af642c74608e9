//! Truncated Laurent series in `1/u` over F_p: elements of F_p((1/u)).
//!
//! A jet stores the coefficients of `u^top, u^{top−1}, …` together with a
//! tail exponent `t`: the true value differs from the stored sum by a series
//! of degree at most `t`, i.e. by at most `e^t`. Every stored coefficient sits
//! strictly above the tail, so the window is always fully certified.

use std::fmt;

use crate::logmag::LogMag;
use crate::ring::poly::{inv_mod, mul_coeffs};
use crate::ring::FpPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    p: u32,
    /// Exponent of `coeffs[0]`; meaningless when `coeffs` is empty.
    top: i64,
    /// Descending coefficients; `coeffs[0] != 0` when nonempty.
    coeffs: Vec<u32>,
    /// `None` means exact.
    tail: Option<i64>,
    /// Coefficient budget for inverting an exact series.
    window: usize,
}

impl Jet {
    fn build(p: u32, top: i64, mut coeffs: Vec<u32>, tail: Option<i64>, window: usize) -> Jet {
        if let Some(t) = tail {
            let keep = (top - t).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|&c| c != 0).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let top = if coeffs.is_empty() { 0 } else { top - lead as i64 };
        Jet { p, top, coeffs, tail, window }
    }

    pub fn zero(p: u32, window: usize) -> Jet {
        Jet { p, top: 0, coeffs: Vec::new(), tail: None, window }
    }

    /// Exact image of a polynomial.
    pub fn from_poly(f: &FpPoly, window: usize) -> Jet {
        let mut c: Vec<u32> = f.coeffs().to_vec();
        c.reverse();
        let top = f.degree().map_or(0, |d| d as i64);
        Jet::build(f.prime(), top, c, None, window)
    }

    /// Value known only up to `e^tail`.
    pub fn unknown(p: u32, tail: i64, window: usize) -> Jet {
        Jet { p, top: 0, coeffs: Vec::new(), tail: Some(tail), window }
    }

    pub fn new(p: u32, top: i64, coeffs: Vec<u32>, tail: Option<i64>, window: usize) -> Jet {
        let c = coeffs.into_iter().map(|v| v % p).collect();
        Jet::build(p, top, c, tail, window)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Exponent of the leading known nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.top)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn tail(&self) -> Option<i64> {
        self.tail
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn with_window(mut self, window: usize) -> Jet {
        self.window = window;
        self
    }

    /// Coefficient of `u^k` if it is certified.
    pub fn coeff(&self, k: i64) -> Option<u32> {
        if self.tail.is_some_and(|t| k <= t) {
            return None;
        }
        if self.coeffs.is_empty() || k > self.top {
            return Some(0);
        }
        Some(self.coeffs.get((self.top - k) as usize).copied().unwrap_or(0))
    }

    /// Polynomial part (nonnegative exponents), when fully certified.
    pub fn polynomial_part(&self) -> Option<FpPoly> {
        if self.tail.is_some_and(|t| t >= 0) {
            return None;
        }
        if self.coeffs.is_empty() || self.top < 0 {
            return Some(FpPoly::zero(self.p));
        }
        let c: Vec<u64> = (0..=self.top).map(|k| self.coeff(k).unwrap() as u64).collect();
        Some(FpPoly::new(self.p, c))
    }

    /// Upper end of `log |x|`: the leading exponent, else the tail.
    fn mag_hi(&self) -> Option<i64> {
        self.leading_exponent().or(self.tail)
    }

    /// Certified `log |x|`; exact whenever a nonzero coefficient is known.
    pub fn abs_log(&self) -> LogMag {
        match (self.leading_exponent(), self.tail) {
            (Some(d), _) => LogMag::exact(d),
            (None, Some(t)) => LogMag::at_most(crate::arith::Dyadic::from_int(t)),
            (None, None) => LogMag::neg_infinity(),
        }
    }

    pub fn neg(&self) -> Jet {
        let p = self.p;
        let c = self.coeffs.iter().map(|&v| if v == 0 { 0 } else { p - v }).collect();
        Jet { coeffs: c, ..self.clone() }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        assert_eq!(self.p, o.p, "jets over different fields");
        let tail = max_opt(self.tail, o.tail);
        let window = self.window.max(o.window);
        if self.coeffs.is_empty() {
            return Jet::build(o.p, o.top, o.coeffs.clone(), tail, window);
        }
        if o.coeffs.is_empty() {
            return Jet::build(self.p, self.top, self.coeffs.clone(), tail, window);
        }
        let top = self.top.max(o.top);
        let bottom = (self.top - self.coeffs.len() as i64 + 1).min(o.top - o.coeffs.len() as i64 + 1);
        let bottom = match tail {
            Some(t) => bottom.max(t + 1),
            None => bottom,
        };
        let len = (top - bottom + 1).max(0) as usize;
        let mut out = vec![0u32; len];
        for src in [self, o] {
            for (k, &c) in src.coeffs.iter().enumerate() {
                let idx = top - (src.top - k as i64);
                if (idx as usize) < len {
                    let slot = &mut out[idx as usize];
                    *slot = ((*slot as u64 + c as u64) % self.p as u64) as u32;
                }
            }
        }
        Jet::build(self.p, top, out, tail, window)
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        assert_eq!(self.p, o.p, "jets over different fields");
        let window = self.window.max(o.window);
        // (X + ex)(Y + ey): error degree ≤ max(hi(X) + ty, hi(Y) + tx).
        let t1 = match (self.mag_hi(), o.tail) {
            (Some(h), Some(t)) => Some(h + t),
            _ => None,
        };
        let t2 = match (o.mag_hi(), self.tail) {
            (Some(h), Some(t)) => Some(h + t),
            _ => None,
        };
        let tail = max_opt(t1, t2);
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Jet::build(self.p, 0, Vec::new(), tail, window);
        }
        let top = self.top + o.top;
        // Only coefficients above the tail survive; skip computing the rest.
        let need = tail.map_or(usize::MAX, |t| (top - t).max(0) as usize);
        let a = &self.coeffs[..self.coeffs.len().min(need)];
        let b = &o.coeffs[..o.coeffs.len().min(need)];
        let mut prod = mul_coeffs(a, b, self.p);
        prod.truncate(need);
        Jet::build(self.p, top, prod, tail, window)
    }

    /// `1/self`, or `None` when no nonzero coefficient is known.
    pub fn inv(&self) -> Option<Jet> {
        let d = self.leading_exponent()?;
        let known = self.tail.map_or(usize::MAX, |t| (d - t) as usize);
        let n = known.min(self.window).max(1);
        let series = invert_series(&self.coeffs, n, self.p);
        Some(Jet::build(self.p, -d, series, Some(-d - n as i64), self.window))
    }

    pub fn div(&self, o: &Jet) -> Option<Jet> {
        let inv = o.inv()?;
        Some(self.mul(&inv.with_window(self.window.max(o.window))))
    }

    /// Replace everything at or below `e^t` by an error term.
    pub fn truncate_at(&self, t: i64) -> Jet {
        let tail = max_opt(self.tail, Some(t));
        Jet::build(self.p, self.top, self.coeffs.clone(), tail, self.window)
    }
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Inverse of the power series `c[0] + c[1] z + …` modulo `z^n` (Newton iteration).
fn invert_series(c: &[u32], n: usize, p: u32) -> Vec<u32> {
    assert!(!c.is_empty() && c[0] != 0);
    let mut g = vec![inv_mod(c[0], p)];
    let mut m = 1;
    while m < n {
        m = (2 * m).min(n);
        let y = &c[..c.len().min(m)];
        let mut yg = mul_coeffs(y, &g, p);
        yg.resize(m, 0);
        // 2 − y·g
        for v in yg.iter_mut() {
            *v = if *v == 0 { 0 } else { p - *v };
        }
        yg[0] = (yg[0] + 2) % p;
        let mut next = mul_coeffs(&g, &yg, p);
        next.resize(m, 0);
        g = next;
    }
    g.truncate(n);
    g
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let e = self.top - k as i64;
            match (c, e) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "u")?,
                (1, _) => write!(f, "u^{e}")?,
                (_, 1) => write!(f, "{c}u")?,
                _ => write!(f, "{c}u^{e}")?,
            }
            if k >= 8 {
                write!(f, "+…")?;
                break;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = self.tail {
            write!(f, " + O(u^{t})")?;
        }
        Ok(())
    }
}
