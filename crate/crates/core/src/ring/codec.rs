//! JSON encoding of ring elements: ℤ as a decimal string, ℤ[i] and ℤ[√−5]
//! as two-element arrays `[x, y]`, F_p polynomials as little-endian
//! coefficient arrays. Numbers are accepted either as JSON numbers or as
//! decimal strings; output always uses strings so big values survive.

use num_bigint::BigInt;
use serde_json::Value;

use super::{Domain, FpPoly, RingElement};
use crate::error::{Error, Result};

fn int_of(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Config(format!("not an integer: {n}"))),
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| Error::Config(format!("not an integer: {s:?}"))),
        other => Err(Error::Config(format!("expected an integer, got {other}"))),
    }
}

fn pair_of(v: &Value) -> Result<(BigInt, BigInt)> {
    match v {
        Value::Array(items) if items.len() == 2 => Ok((int_of(&items[0])?, int_of(&items[1])?)),
        other => Err(Error::Config(format!("expected a two-element array, got {other}"))),
    }
}

pub fn element_from_json(domain: Domain, v: &Value) -> Result<RingElement> {
    Ok(match domain {
        Domain::Integers => RingElement::Int(int_of(v)?),
        Domain::Gaussian => {
            let (x, y) = pair_of(v)?;
            RingElement::Gauss(x, y)
        }
        Domain::SqrtMinus5 => {
            let (x, y) = pair_of(v)?;
            RingElement::SqrtM5(x, y)
        }
        Domain::PolyFp(p) => {
            let Value::Array(items) = v else {
                return Err(Error::Config(format!("expected a coefficient array, got {v}")));
            };
            let modulus = BigInt::from(p);
            let coeffs = items
                .iter()
                .map(|c| {
                    let c = int_of(c)?;
                    let r = ((c % &modulus) + &modulus) % &modulus;
                    Ok(u64::try_from(r).unwrap())
                })
                .collect::<Result<Vec<_>>>()?;
            RingElement::Poly(FpPoly::new(p, coeffs))
        }
    })
}

pub fn element_to_json(x: &RingElement) -> Value {
    match x {
        RingElement::Int(a) => Value::String(a.to_string()),
        RingElement::Gauss(a, b) | RingElement::SqrtM5(a, b) => {
            Value::Array(vec![Value::String(a.to_string()), Value::String(b.to_string())])
        }
        RingElement::Poly(f) => Value::Array(f.coeffs().iter().map(|&c| Value::from(c)).collect()),
    }
}
