//! Exact rational values and their canonical text form.
//!
//! Gain coefficients and the bounds derived from them are rationals whose
//! denominators divide `(b-1)^|u| * b^|k|`. Everything in this crate keeps
//! them exact; callers convert to `f64` only for display.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Exact rational number (always stored reduced).
pub type Rational = num_rational::BigRational;

/// `base^exp` as an exact rational; a negative exponent lands in the
/// denominator.
pub fn pow_rational(base: u64, exp: i64) -> Rational {
    assert!(base > 0, "power base must be positive");
    assert!(exp.unsigned_abs() <= 1 << 20, "exponent out of range");
    let b = BigInt::from(base);
    if exp >= 0 {
        Rational::from_integer(b.pow(exp as u32))
    } else {
        Rational::new(BigInt::from(1), b.pow((-exp) as u32))
    }
}

pub fn from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Renders `r` as `"num/den"` with the denominator always spelled out, so
/// that integral values come back as e.g. `"4/1"`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the `"num/den"` form produced by [`format_rational`]; a bare
/// integer is accepted as well.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(num))
        }
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(format_rational(&from_int(4)), "4/1");
        assert_eq!(format_rational(&Rational::new(9.into(), 12.into())), "3/4");
    }

    #[test]
    fn round_trips() {
        for s in ["4/1", "25/16", "-7/3", "0/1"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(parse_rational("5"), Some(from_int(5)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x/2"), None);
    }

    #[test]
    fn negative_powers_reduce() {
        assert_eq!(pow_rational(3, -2), Rational::new(1.into(), 9.into()));
        assert_eq!(pow_rational(2, 5), from_int(32));
        assert_eq!(pow_rational(7, 0), from_int(1));
    }
}
