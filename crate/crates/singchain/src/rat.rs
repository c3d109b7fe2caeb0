//! Exact rational scalars and their `"p/q"` wire encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational used for all discrepancy and intersection arithmetic.
pub type Rat = BigRational;

/// Rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Serializes a rational as `"p/q"` in lowest terms with `q > 0`.
///
/// Integers keep the explicit denominator (`"1/1"`), so the encoding is uniform.
pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the `"p/q"` encoding produced by [`rat_str`]. Plain integers are accepted.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn zero() -> Rat {
    Rat::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format_roundtrip() {
        let r = rat(-3, 6);
        assert_eq!(rat_str(&r), "-1/2");
        assert_eq!(parse_rat("-1/2").unwrap(), r);
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert_eq!(rat_str(&rat_int(1)), "1/1");
        assert!(parse_rat("1/0").is_none());
    }
}
