//! Exact rational scalars and their canonical string form.
//!
//! Every persisted rational is written as a reduced `"p/q"` string, including
//! integers (`"1/1"`). Parsing additionally accepts bare integers and finite
//! decimals (`"0.05"`), both converted exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn half() -> Rat {
    rat(1, 2)
}

/// `x mod 1`, in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

pub fn min_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    if a >= b {
        a
    } else {
        b
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, digits)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !digits.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && digits.is_empty())
        {
            return Err(bad());
        }
        let all = format!("{}{}", whole_digits, digits);
        let mantissa: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
        let scale = num_traits::pow(BigInt::from(10), digits.len());
        let value = Rat::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// Lossy conversion for display-only paths (the browser demo).
pub fn to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!(parse_rat("3/10").unwrap(), rat(3, 10));
        assert_eq!(parse_rat("6/20").unwrap(), rat(3, 10));
        assert_eq!(parse_rat("-2").unwrap(), int(-2));
        assert_eq!(parse_rat("0.05").unwrap(), rat(1, 20));
        assert_eq!(parse_rat("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rat(".5").unwrap(), half());
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a/b", "1.2.3", "--1", "0.x"] {
            assert!(parse_rat(s).is_err(), "{s}");
        }
    }

    #[test]
    fn canonical_format_is_reduced_fraction() {
        assert_eq!(format_rat(&rat(2, 4)), "1/2");
        assert_eq!(format_rat(&int(1)), "1/1");
        assert_eq!(format_rat(&int(0)), "0/1");
        assert_eq!(format_rat(&rat(-3, 9)), "-1/3");
    }

    #[test]
    fn frac_reduces_into_unit_interval() {
        assert_eq!(frac(&rat(13, 10)), rat(3, 10));
        assert_eq!(frac(&rat(-1, 10)), rat(9, 10));
        assert_eq!(frac(&int(3)), int(0));
    }
}
