use std::fmt;

use super::{Domain, RingElement};

/// A 2×2 matrix `[[a, b], [c, d]]` over A.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: RingElement,
    pub b: RingElement,
    pub c: RingElement,
    pub d: RingElement,
}

impl Mat2 {
    pub fn new(a: RingElement, b: RingElement, c: RingElement, d: RingElement) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(domain: Domain) -> Self {
        Mat2::new(domain.one(), domain.zero(), domain.zero(), domain.one())
    }

    /// `[[q, 1], [1, 0]]`
    pub fn quotient(q: &RingElement) -> Self {
        let d = q.domain();
        Mat2::new(q.clone(), d.one(), d.one(), d.zero())
    }

    /// `J = [[0, 1], [−1, 0]]`
    pub fn j(domain: Domain) -> Self {
        Mat2::new(domain.zero(), domain.one(), domain.from_int(-1), domain.zero())
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn det(&self) -> RingElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> RingElement {
        &self.a + &self.d
    }

    pub fn is_symmetric(&self) -> bool {
        self.b == self.c
    }

    pub fn domain(&self) -> Domain {
        self.a.domain()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
