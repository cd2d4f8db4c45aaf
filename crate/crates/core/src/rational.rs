//! Helpers around [`BigRational`]: construction from integers and decimal
//! rendering that does not round-trip through `f64`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn integer(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `num/den` in lowest terms (`n/1` for integers).
pub fn fraction_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Nearest `f64`; saturates to infinity only when the value itself is out of
/// range.
pub fn to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    decimal_string(q, 17).parse().unwrap_or(f64::NAN)
}

/// Decimal rendering with `digits` significant digits, rounded half away
/// from zero. Plain notation for magnitudes in `[1e-5, 1e15)`, otherwise
/// scientific (`1.23e20`).
pub fn decimal_string(q: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if q.is_zero() {
        return format!("0.{}", "0".repeat(digits - 1));
    }
    let neg = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();

    // exponent e with 10^e <= |q| < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    if scaled(&num, &den, -e) < BigInt::from(1) {
        e -= 1;
    }
    // mantissa = round(|q| * 10^(digits-1-e))
    let shift = digits as i64 - 1 - e;
    let (mut mant, rem, den_s) = scaled_divmod(&num, &den, shift);
    if rem * 2 >= den_s {
        mant += 1;
    }
    let mut mant_str = mant.to_string();
    if mant_str.len() > digits {
        // rounding carried into a new leading digit
        mant_str.truncate(digits);
        e += 1;
    }

    let body = if (-5..15).contains(&e) {
        if e >= 0 {
            let int_len = e as usize + 1;
            if int_len >= digits {
                format!("{}{}", mant_str, "0".repeat(int_len - digits))
            } else {
                format!("{}.{}", &mant_str[..int_len], &mant_str[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), mant_str)
        }
    } else {
        let tail = &mant_str[1..];
        if tail.is_empty() {
            format!("{}e{}", &mant_str[..1], e)
        } else {
            format!("{}.{}e{}", &mant_str[..1], tail, e)
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// `floor(num * 10^shift / den)`.
fn scaled(num: &BigInt, den: &BigInt, shift: i64) -> BigInt {
    scaled_divmod(num, den, shift).0
}

fn scaled_divmod(num: &BigInt, den: &BigInt, shift: i64) -> (BigInt, BigInt, BigInt) {
    let (n, d) = if shift >= 0 {
        (num * pow10(shift as u64), den.clone())
    } else {
        (num.clone(), den * pow10((-shift) as u64))
    };
    let (q, r) = n.div_rem(&d);
    debug_assert!(r.sign() != Sign::Minus);
    (q, r, d)
}
