//! Fibonacci words, their palindromic prefixes, the letter morphism into
//! 2×2 matrices, and the symmetric matrices whose entries give the
//! approximation triples.

use std::fmt;

use crate::contfrac::rho_of;
use crate::error::{Error, Result};
use crate::ring::{Mat2, RingElement};

/// Words are materialized (for cross-checks) only up to this index.
pub const MAX_WORD_INDEX: usize = 25;
/// Recurrence output is compared with the direct morphism up to this index.
pub const CROSS_CHECK_INDEX: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn parse(s: &str) -> Option<Word> {
        s.chars()
            .map(|c| match c {
                'a' => Some(Letter::A),
                'b' => Some(Letter::B),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    fn concat(&self, o: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + o.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "a",
                Letter::B => "b",
            })?;
        }
        Ok(())
    }
}

/// `|w_i|`: 1, 2, 3, 5, 8, …
pub fn fib_len(i: usize) -> u128 {
    assert!(i >= 1);
    let (mut x, mut y) = (1u128, 2u128);
    for _ in 1..i {
        (x, y) = (y, x + y);
    }
    x
}

/// `w_1 = a`, `w_2 = ab`, `w_i = w_{i−1} w_{i−2}`.
pub fn fib_word(i: usize) -> Word {
    assert!(i >= 1, "Fibonacci words start at index 1");
    let mut prev = Word(vec![Letter::A]);
    if i == 1 {
        return prev;
    }
    let mut cur = Word(vec![Letter::A, Letter::B]);
    for _ in 2..i {
        let next = cur.concat(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The first `n` letters of the infinite Fibonacci word.
pub fn fibonacci_prefix(n: usize) -> Word {
    let mut i = 1;
    while (fib_len(i) as usize) < n {
        i += 1;
    }
    let mut w = fib_word(i);
    w.0.truncate(n);
    w
}

/// `m_i`: `w_{i+2}` without its last two letters, checked to be a palindrome.
pub fn palindrome_prefix(i: usize) -> Result<Word> {
    assert!(i >= 1, "palindromic prefixes start at index 1");
    let mut w = fib_word(i + 2);
    w.0.truncate(w.len() - 2);
    if !w.is_palindrome() {
        return Err(Error::PalindromeViolated(i));
    }
    Ok(w)
}

/// `|m_i| = F_{i+2} − 2`.
pub fn palindrome_len(i: usize) -> u128 {
    fib_len(i + 2) - 2
}

/// The monoid morphism: `a ↦ [[a,1],[1,0]]`, `b ↦ [[b,1],[1,0]]`.
pub fn phi(word: &Word, a: &RingElement, b: &RingElement) -> Mat2 {
    let (ma, mb) = (Mat2::quotient(a), Mat2::quotient(b));
    word.0.iter().fold(Mat2::identity(a.domain()), |acc, l| match l {
        Letter::A => acc.mul(&ma),
        Letter::B => acc.mul(&mb),
    })
}

/// `[[x0, x1], [x1, x2]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    pub index: usize,
    pub x0: RingElement,
    pub x1: RingElement,
    pub x2: RingElement,
}

impl SymMatrix {
    pub fn from_mat(index: usize, m: &Mat2) -> Result<SymMatrix> {
        if !m.is_symmetric() {
            return Err(Error::IdentityViolated { index, what: "matrix is not symmetric".into() });
        }
        Ok(SymMatrix { index, x0: m.a.clone(), x1: m.b.clone(), x2: m.d.clone() })
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2::new(self.x0.clone(), self.x1.clone(), self.x1.clone(), self.x2.clone())
    }

    pub fn det(&self) -> RingElement {
        &(&self.x0 * &self.x2) - &(&self.x1 * &self.x1)
    }

    pub fn triple(&self) -> ApproxTriple {
        ApproxTriple {
            x0: self.x0.clone(),
            x1: self.x1.clone(),
            x2: self.x2.clone(),
            index: Some(self.index),
            provenance: Provenance::Constructed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Constructed,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ApproxTriple {
    pub x0: RingElement,
    pub x1: RingElement,
    pub x2: RingElement,
    pub index: Option<usize>,
    pub provenance: Provenance,
}

impl ApproxTriple {
    pub fn new(x0: RingElement, x1: RingElement, x2: RingElement, provenance: Provenance) -> Self {
        ApproxTriple { x0, x1, x2, index: None, provenance }
    }

    pub fn coords(&self) -> [&RingElement; 3] {
        [&self.x0, &self.x1, &self.x2]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|x| x.is_zero())
    }

    /// Multiply every coordinate by `u`.
    pub fn scaled(&self, u: &RingElement) -> ApproxTriple {
        ApproxTriple { x0: u * &self.x0, x1: u * &self.x1, x2: u * &self.x2, ..self.clone() }
    }

    /// Representative up to units: the unit making `x0` (or the first nonzero
    /// coordinate) canonical is applied to all three.
    pub fn unit_normalized(&self) -> ApproxTriple {
        match self.coords().into_iter().find(|x| !x.is_zero()) {
            None => self.clone(),
            Some(lead) => {
                let (_, unit) = lead.unit_normalize().expect("nonzero");
                self.scaled(&unit.unit_inverse().expect("unit"))
            }
        }
    }

    /// Same triple up to a unit multiple.
    pub fn equal_up_to_unit(&self, o: &ApproxTriple) -> bool {
        let (x, y) = (self.unit_normalized(), o.unit_normalized());
        x.coords() == y.coords()
    }
}

impl fmt::Display for ApproxTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x0, self.x1, self.x2)
    }
}

/// Which `S_i` the recurrence used: the stated one (`S` for even `i`) or its flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    EvenS,
    OddS,
}

impl Parity {
    fn flipped(self) -> Parity {
        match self {
            Parity::EvenS => Parity::OddS,
            Parity::OddS => Parity::EvenS,
        }
    }

    /// `S_i` under this convention, with `S = Φ(ab)`.
    pub fn s_matrix(self, i: usize, s: &Mat2) -> Mat2 {
        let use_s = (i % 2 == 0) == (self == Parity::EvenS);
        if use_s {
            s.clone()
        } else {
            s.transpose()
        }
    }
}

/// `M_1 … M_n` with the convention that reproduced the direct morphism.
#[derive(Clone, Debug)]
pub struct TripleStream {
    pub a: RingElement,
    pub b: RingElement,
    pub matrices: Vec<SymMatrix>,
    pub parity: Parity,
}

impl TripleStream {
    pub fn get(&self, i: usize) -> &SymMatrix {
        &self.matrices[i - 1]
    }

    pub fn triples(&self) -> impl Iterator<Item = ApproxTriple> + '_ {
        self.matrices.iter().map(SymMatrix::triple)
    }

    pub fn s(&self) -> Mat2 {
        phi(&Word(vec![Letter::A, Letter::B]), &self.a, &self.b)
    }

    pub fn s_i(&self, i: usize) -> Mat2 {
        self.parity.s_matrix(i, &self.s())
    }
}

fn run_recurrence(a: &RingElement, b: &RingElement, n: usize, parity: Parity) -> Result<Vec<Mat2>> {
    let s = phi(&Word(vec![Letter::A, Letter::B]), a, b);
    let mut ms = vec![phi(&palindrome_prefix(1)?, a, b)];
    if n >= 2 {
        ms.push(phi(&palindrome_prefix(2)?, a, b));
    }
    for i in 2..n {
        let next = ms[i - 1].mul(&parity.s_matrix(i, &s)).mul(&ms[i - 2]);
        ms.push(next);
    }
    Ok(ms)
}

/// `M_1, …, M_n` via `M_{i+1} = M_i S_i M_{i−1}`, cross-checked against `Φ(m_i)`.
pub fn triples_stream(a: &RingElement, b: &RingElement, n: usize) -> Result<TripleStream> {
    if a.domain() != b.domain() {
        return Err(Error::DomainMismatch(a.domain().to_string(), b.domain().to_string()));
    }
    if a == b {
        return Err(Error::EqualQuotients);
    }
    rho_of(a, b)?;
    let check_to = n.min(CROSS_CHECK_INDEX);
    let direct: Vec<Mat2> = (1..=check_to).map(|i| palindrome_prefix(i).map(|w| phi(&w, a, b))).collect::<Result<_>>()?;
    let mut parity = Parity::EvenS;
    let mut ms = run_recurrence(a, b, n, parity)?;
    if let Some(bad) = first_mismatch(&ms, &direct) {
        parity = parity.flipped();
        ms = run_recurrence(a, b, n, parity)?;
        if first_mismatch(&ms, &direct).is_some() {
            return Err(Error::RecurrenceMismatch(bad));
        }
    }
    let matrices = ms.iter().enumerate().map(|(k, m)| SymMatrix::from_mat(k + 1, m)).collect::<Result<_>>()?;
    Ok(TripleStream { a: a.clone(), b: b.clone(), matrices, parity })
}

fn first_mismatch(ms: &[Mat2], direct: &[Mat2]) -> Option<usize> {
    ms.iter().zip(direct).position(|(x, y)| x != y).map(|k| k + 1)
}

/// Both evaluations of `det(x_{i−1}, x_i, x_{i+1})` and the predicted unit factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Det3 {
    pub index: usize,
    pub value: RingElement,
    /// `det(M_{i−1}) det(M_i)`, a unit.
    pub unit: RingElement,
    /// `tr(S_i J) = ±(b − a)`.
    pub trace_factor: RingElement,
}

/// Direct 3×3 determinant of three stacked triples.
pub fn det3(x: &ApproxTriple, y: &ApproxTriple, z: &ApproxTriple) -> RingElement {
    let minor = |p: &RingElement, q: &RingElement, r: &RingElement, s: &RingElement| &(p * s) - &(q * r);
    let t1 = &x.x0 * &minor(&y.x1, &y.x2, &z.x1, &z.x2);
    let t2 = &x.x1 * &minor(&y.x0, &y.x2, &z.x0, &z.x2);
    let t3 = &x.x2 * &minor(&y.x0, &y.x1, &z.x0, &z.x1);
    &(&t1 - &t2) + &t3
}

/// `det(x_{i−1}, x_i, x_{i+1})`, computed directly and as
/// `−tr(J M_i J M_{i+1} J M_{i−1})`; the two must agree and equal
/// `det(M_{i−1}) det(M_i) tr(S_i J)`, which is `±(a − b)`.
pub fn det3_trace(stream: &TripleStream, i: usize) -> Result<Det3> {
    assert!(i >= 2 && i < stream.matrices.len(), "need M_(i-1), M_i, M_(i+1)");
    let (prev, cur, next) = (stream.get(i - 1), stream.get(i), stream.get(i + 1));
    let direct = det3(&prev.triple(), &cur.triple(), &next.triple());
    let j = Mat2::j(stream.a.domain());
    let chain = j.mul(&cur.to_mat()).mul(&j).mul(&next.to_mat()).mul(&j).mul(&prev.to_mat());
    let via_trace = -chain.trace();
    if direct != via_trace {
        return Err(Error::IdentityViolated { index: i, what: format!("direct {direct} != trace route {via_trace}") });
    }
    let unit = &prev.det() * &cur.det();
    let trace_factor = stream.s_i(i).mul(&j).trace();
    if direct != &unit * &trace_factor {
        return Err(Error::IdentityViolated { index: i, what: format!("{direct} != {unit}·({trace_factor})") });
    }
    let diff = &stream.a - &stream.b;
    if direct != diff && direct != -&diff {
        return Err(Error::IdentityViolated { index: i, what: format!("{direct} is not ±(a−b)") });
    }
    Ok(Det3 { index: i, value: direct, unit, trace_factor })
}
