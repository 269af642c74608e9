use fibext::fibword::*;
use fibext::ring::{Mat2, RingElement};
use num_bigint::BigInt;

fn f2(c: &[i64]) -> RingElement {
    RingElement::poly(2, c)
}

fn reference_runs() -> Vec<(&'static str, RingElement, RingElement)> {
    vec![
        ("F2[u]", f2(&[0, 1]), f2(&[1, 1])),
        ("Z", RingElement::int(3), RingElement::int(4)),
        ("Z[i]", RingElement::gauss(2, 1), RingElement::gauss(2, -1)),
        ("Z[sqrt-5]", RingElement::sqrt_m5(3, 0), RingElement::sqrt_m5(2, 1)),
    ]
}

/// Words built with plain strings.
fn string_words(n: usize) -> Vec<String> {
    let mut w = vec![String::new(), "a".to_string(), "ab".to_string()];
    for i in 3..=n {
        let next = format!("{}{}", w[i - 1], w[i - 2]);
        w.push(next);
    }
    w
}

#[test]
fn word_examples() {
    assert_eq!(fib_word(3).to_string(), "aba");
    assert_eq!(fib_word(4).to_string(), "abaab");
    assert_eq!(fib_word(5).to_string(), "abaababa");
    assert_eq!(palindrome_prefix(1).unwrap().to_string(), "a");
    assert_eq!(palindrome_prefix(2).unwrap().to_string(), "aba");
    assert_eq!(palindrome_prefix(3).unwrap().to_string(), "abaaba");
}

#[test]
fn words_match_string_construction() {
    let w = string_words(27);
    for i in 1..=27 {
        assert_eq!(fib_word(i).to_string(), w[i]);
        assert_eq!(fib_len(i) as usize, w[i].len());
    }
    for i in 1..=25 {
        let m = &w[i + 2][..w[i + 2].len() - 2];
        assert!(m.chars().eq(m.chars().rev()), "m_{i} is not a palindrome");
        assert_eq!(palindrome_prefix(i).unwrap().to_string(), m);
        assert_eq!(palindrome_len(i) as usize, m.len());
        if i >= 3 {
            assert_eq!(palindrome_len(i), palindrome_len(i - 1) + palindrome_len(i - 2) + 2);
        }
    }
}

#[test]
fn phi_examples() {
    let (a, b) = (f2(&[0, 1]), f2(&[1, 1]));
    assert_eq!(phi(&Word::parse("a").unwrap(), &a, &b), Mat2::quotient(&a));
    assert_eq!(phi(&Word::default(), &a, &b), Mat2::identity(a.domain()));
    let m = phi(&Word::parse("aba").unwrap(), &a, &b);
    let want = Mat2::new(f2(&[0, 0, 1, 1]), f2(&[1, 1, 1]), f2(&[1, 1, 1]), f2(&[1, 1]));
    assert_eq!(m, want);

    // generic shape [[a²b+2a, ab+1], [ab+1, b]] over ℤ
    let (a, b) = (RingElement::int(3), RingElement::int(4));
    let m = phi(&Word::parse("aba").unwrap(), &a, &b);
    assert_eq!(m, Mat2::new(RingElement::int(42), RingElement::int(13), RingElement::int(13), RingElement::int(4)));
}

#[test]
fn first_triples() {
    for (name, a, b) in reference_runs() {
        let s = triples_stream(&a, &b, 3).unwrap();
        let d = a.domain();
        let x1 = s.get(1).triple();
        assert_eq!((x1.x0.clone(), x1.x1.clone(), x1.x2.clone()), (a.clone(), d.one(), d.zero()), "{name}");
        let x2 = s.get(2).triple();
        let two_a = &a + &a;
        let ab = &a * &b;
        assert_eq!(x2.x0, &(&a * &ab) + &two_a, "{name}");
        assert_eq!(x2.x1, &ab + &d.one(), "{name}");
        assert_eq!(x2.x2, b, "{name}");
    }
    let s = triples_stream(&f2(&[0, 1]), &f2(&[1, 1]), 2).unwrap();
    assert_eq!(s.get(2).x0, f2(&[0, 0, 1, 1]));
}

/// 2×2 products over plain big integers, independent of the ring layer.
fn int_phi(word: &str, a: i64, b: i64) -> [BigInt; 4] {
    let one = || BigInt::from(1);
    let zero = || BigInt::from(0);
    word.chars().fold([one(), zero(), zero(), one()], |m, c| {
        let q = if c == 'a' { a } else { b };
        let [m0, _, m2, _] = &m;
        [m0 * q + &m[1], m0.clone(), m2 * q + &m[3], m2.clone()]
    })
}

#[test]
fn recurrence_matches_direct_products() {
    let w = string_words(14);
    let s = triples_stream(&RingElement::int(3), &RingElement::int(4), 12).unwrap();
    for i in 1..=12 {
        let m = &w[i + 2][..w[i + 2].len() - 2];
        let [x0, x1, y1, x2] = int_phi(m, 3, 4);
        assert_eq!(x1, y1);
        let got = s.get(i);
        assert_eq!(got.x0, RingElement::Int(x0), "i={i}");
        assert_eq!(got.x1, RingElement::Int(x1), "i={i}");
        assert_eq!(got.x2, RingElement::Int(x2), "i={i}");
    }
    for (name, a, b) in reference_runs() {
        let s = triples_stream(&a, &b, 11).unwrap();
        assert_eq!(s.parity, Parity::EvenS, "{name}");
        for i in 1..=10 {
            let direct = phi(&palindrome_prefix(i).unwrap(), &a, &b);
            assert!(direct.is_symmetric());
            assert_eq!(s.get(i).to_mat(), direct, "{name} i={i}");
        }
    }
}

#[test]
fn determinants_are_signed_units() {
    for (name, a, b) in reference_runs() {
        let s = triples_stream(&a, &b, 25).unwrap();
        for i in 1..=25 {
            let sign = if palindrome_len(i) % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.get(i).det(), a.domain().from_int(sign), "{name} i={i}");
        }
    }
}

#[test]
fn det3_values() {
    let want = |name: &str| match name {
        "F2[u]" => vec![f2(&[1])],
        "Z" => vec![RingElement::int(1), RingElement::int(-1)],
        "Z[i]" => vec![RingElement::gauss(0, 2), RingElement::gauss(0, -2)],
        _ => vec![RingElement::sqrt_m5(1, -1), RingElement::sqrt_m5(-1, 1)],
    };
    for (name, a, b) in reference_runs() {
        let s = triples_stream(&a, &b, 25).unwrap();
        for i in 2..=24 {
            let d = det3_trace(&s, i).unwrap();
            assert!(want(name).contains(&d.value), "{name} i={i}: {}", d.value);
            assert_eq!(d.value, det3(&s.get(i - 1).triple(), &s.get(i).triple(), &s.get(i + 1).triple()));
            assert!(!d.value.is_zero());
        }
    }
    let s = triples_stream(&RingElement::gauss(2, 1), &RingElement::gauss(2, -1), 16).unwrap();
    for i in 2..=15 {
        assert_eq!(det3_trace(&s, i).unwrap().value.norm().unwrap(), 4.into());
    }
}

#[test]
fn stream_rejects_bad_quotients() {
    let z = RingElement::int;
    assert!(triples_stream(&z(5), &z(5), 4).is_err());
    assert!(triples_stream(&z(2), &z(3), 4).is_err());
    assert!(triples_stream(&z(3), &f2(&[0, 1]), 4).is_err());
}

#[test]
fn unit_equality_ignores_unit_factor() {
    let s = triples_stream(&RingElement::gauss(2, 1), &RingElement::gauss(2, -1), 5).unwrap();
    let x = s.get(4).triple();
    for u in RingElement::gauss(1, 0).domain().units() {
        assert!(x.equal_up_to_unit(&x.scaled(&u)));
    }
    assert!(!x.equal_up_to_unit(&s.get(3).triple()));
}
