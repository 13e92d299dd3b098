//! Exact integer and rational arithmetic for the combinatorial quantities.
//!
//! Everything downstream compares boundary values that can differ by a few
//! units, so nothing in the crate touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInt = BigInt;

/// Arbitrary-precision rational, always kept in reduced form with a positive
/// denominator.
pub type ExactRat = BigRational;

/// Binomial coefficient `C(a, b)`, zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> ExactInt {
    if b > a {
        return ExactInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = ExactInt::one();
    for i in 0..b {
        // acc * (a - i) is divisible by (i + 1) at every step.
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

/// Binomial coefficient of a possibly negative top argument, zero outside
/// `0 <= b <= a`.
pub fn binomial_i(a: i64, b: i64) -> ExactInt {
    if a < 0 || b < 0 || b > a {
        ExactInt::zero()
    } else {
        binomial(a as u64, b as u64)
    }
}

pub fn int(v: i64) -> ExactInt {
    ExactInt::from(v)
}

pub fn rat(num: i64, den: i64) -> ExactRat {
    ExactRat::new(ExactInt::from(num), ExactInt::from(den))
}

pub fn rat_of(v: &ExactInt) -> ExactRat {
    ExactRat::from_integer(v.clone())
}

/// `num / den` as an exact rational.
pub fn ratio(num: &ExactInt, den: &ExactInt) -> ExactRat {
    ExactRat::new(num.clone(), den.clone())
}

pub fn floor(x: &ExactRat) -> ExactInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &ExactRat) -> ExactInt {
    -(-x.numer()).div_floor(x.denom())
}

/// Fractional part `x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: &ExactRat) -> ExactRat {
    x - rat_of(&floor(x))
}

/// Converts to `i64`, failing loudly instead of truncating.
pub fn to_i64(x: &ExactInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(x.to_string()))
}

/// Converts an integral rational to an integer.
pub fn integral(x: &ExactRat) -> Option<ExactInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn is_nonneg(x: &ExactRat) -> bool {
    !x.is_negative()
}

/// Formats a rational the way reports print it: `7` or `-15/2`.
pub fn fmt_rat(x: &ExactRat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn double_count_args(m: u64, n: u64) -> Result<()> {
    if !(n > m && m >= 1) {
        return Err(Error::Precondition(format!(
            "double counting identities need n > m >= 1, got m={m}, n={n}"
        )));
    }
    Ok(())
}

/// Splits the 4-subsets of an n-set by how many of their points lie in a
/// fixed m-subset and checks the counts add up.
pub fn identity_a(m: u64, n: u64) -> Result<bool> {
    double_count_args(m, n)?;
    let d = n - m;
    let rhs = binomial(m, 4)
        + ExactInt::from(d) * binomial(m, 3)
        + binomial(m, 2) * binomial(d, 2)
        + ExactInt::from(m) * binomial(d, 3)
        + binomial(d, 4);
    Ok(binomial(n, 4) == rhs)
}

/// Same split for the 3-subsets of an (n-1)-set against an (m-1)-subset.
pub fn identity_b(m: u64, n: u64) -> Result<bool> {
    double_count_args(m, n)?;
    let d = n - m;
    let rhs = binomial(m - 1, 3)
        + ExactInt::from(d) * binomial(m - 1, 2)
        + ExactInt::from(m - 1) * binomial(d, 2)
        + binomial(d, 3);
    Ok(binomial(n - 1, 3) == rhs)
}

/// Degree sum of the old points over all crossing 4-subsets.
pub fn identity_c(m: u64, n: u64) -> Result<bool> {
    double_count_args(m, n)?;
    let d = n - m;
    let lhs = ExactInt::from(m) * (binomial(n - 1, 3) - binomial(m - 1, 3));
    let rhs = ExactInt::from(3 * d) * binomial(m, 3)
        + ExactInt::from(2u8) * binomial(m, 2) * binomial(d, 2)
        + ExactInt::from(m) * binomial(d, 3);
    Ok(lhs == rhs)
}
