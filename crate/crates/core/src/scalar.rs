//! Scalar abstraction and exact-rational helpers.
//!
//! The geometric core (feasibility solver, hull predicates, lifting) is
//! generic over any ordered field through [`Scalar`].  The pipeline
//! instantiates it at [`crate::Rational`] so every predicate is exact;
//! `f64` also satisfies the bound for approximate use.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// An ordered field scalar: enough structure for elimination-style linear
/// algebra with exact comparisons.
pub trait Scalar: Clone + PartialOrd + Num + Signed + fmt::Debug {}

impl<T: Clone + PartialOrd + Num + Signed + fmt::Debug> Scalar for T {}

/// Exact conversion of a finite `f64` into a rational (every finite float
/// is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or(Error::BadInput(format!("non-finite float {x}")))
}

/// Parses `"p"`, `"p/q"`, or a decimal literal like `"-0.25"` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational {
        literal: s.to_string(),
    };
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str_radix(num.trim(), 10).map_err(|_| bad())?;
        let d = BigInt::from_str_radix(den.trim(), 10).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str_radix(int, 10).map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_num = BigInt::from_str_radix(frac, 10).map_err(|_| bad())?;
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_rat = Rational::new(frac_num, denom);
        let int_rat = Rational::from_integer(int_part);
        return Ok(if neg { int_rat - frac_rat } else { int_rat + frac_rat });
    }
    let n = BigInt::from_str_radix(s, 10).map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
/// `parse_rational(format_rational(x)) == x` exactly.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `ceil(x)` as a `usize`, clamped at zero.
pub fn ceil_to_usize(x: &Rational) -> Result<usize> {
    let c = x.ceil();
    let n = c.to_integer();
    if n.sign() == Sign::Minus {
        return Ok(0);
    }
    let (_, digits) = n.to_u64_digits();
    match digits.len() {
        0 => Ok(0),
        1 => usize::try_from(digits[0]).map_err(|_| Error::BadInput(format!("{x} too large"))),
        _ => Err(Error::BadInput(format!("{x} too large"))),
    }
}

/// `floor(x)` as a `usize`, clamped at zero.
pub fn floor_to_usize(x: &Rational) -> Result<usize> {
    let f = x.floor();
    let n = f.to_integer();
    if n.sign() == Sign::Minus {
        return Ok(0);
    }
    let (_, digits) = n.to_u64_digits();
    match digits.len() {
        0 => Ok(0),
        1 => usize::try_from(digits[0]).map_err(|_| Error::BadInput(format!("{x} too large"))),
        _ => Err(Error::BadInput(format!("{x} too large"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "1/2", "-22/7", "0.25", "-0.125", "10.5"] {
            let x = parse_rational(s).unwrap();
            let y = parse_rational(&format_rational(&x)).unwrap();
            assert_eq!(x, y, "round trip through {s}");
        }
        assert_eq!(parse_rational("0.1").unwrap(), Rational::new(1.into(), 10.into()));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new((-1).into(), 2.into()));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x", "1/0", "1.2.3", "2/", "0. 5"] {
            assert!(parse_rational(s).is_err(), "{s:?} should fail");
        }
    }

    #[test]
    fn f64_conversion_is_exact() {
        let x = rational_from_f64(0.1).unwrap();
        // 0.1 is not exactly 1/10 in binary floating point.
        assert_ne!(x, Rational::new(1.into(), 10.into()));
        assert_eq!(x, Rational::new(3602879701896397u64.into(), (1u64 << 55).into()));
    }

    #[test]
    fn ceil_floor_helpers() {
        let x = parse_rational("27/10").unwrap();
        assert_eq!(ceil_to_usize(&x).unwrap(), 3);
        assert_eq!(floor_to_usize(&x).unwrap(), 2);
        let neg = parse_rational("-3/2").unwrap();
        assert_eq!(ceil_to_usize(&neg).unwrap(), 0);
    }
}
