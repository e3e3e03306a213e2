//! Exact rationals.
//!
//! [`Rational`] is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. The helpers here cover the
//! textual `"a/b"` form used by the netlist and report formats.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `"a/b"` or `"a"`; surrounding whitespace is ignored.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("`{text}` is not a rational number"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("`{text}` has a zero denominator")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Comma-separated list of rationals, e.g. `"5/8,1/4,1/8"`.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse).collect()
}

/// Lowest-terms text form; integers print without a denominator.
pub fn format(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn format_list(values: &[Rational]) -> Vec<String> {
    values.iter().map(format).collect()
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Returns `Some(k)` when `value == base^k` for a non-negative integer `k`.
pub fn exact_log(value: &BigInt, base: u64) -> Option<u32> {
    if base < 2 || !value.is_positive() {
        return None;
    }
    let base = BigInt::from(base);
    let mut rest = value.clone();
    let mut k = 0;
    while !rest.is_one() {
        let (q, r) = rest.div_rem(&base);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        k += 1;
    }
    Some(k)
}

/// Smallest `k` with `value | base^k`, if one exists.
pub fn dividing_power(value: &BigInt, base: u64) -> Option<u32> {
    if base < 2 || !value.is_positive() {
        return None;
    }
    let base_big = BigInt::from(base);
    let mut power = BigInt::one();
    let mut k = 0;
    loop {
        if (&power % value).is_zero() {
            return Some(k);
        }
        // once the remaining cofactor shares nothing with `base` it never will
        let g = value.gcd(&power);
        let cofactor = value / &g;
        if cofactor.gcd(&base_big).is_one() {
            return None;
        }
        power *= &base_big;
        k += 1;
    }
}
