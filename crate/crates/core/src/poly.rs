//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Coefficients are stored in ascending degree order; the highest stored
//! coefficient is always nonzero, so the zero polynomial has no coefficients.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// The monic linear factor `t + a`.
    pub fn linear(a: i64) -> Self {
        Self::from_i64s(&[a, 1])
    }

    /// `(t + a_1)(t + a_2)...` over the given shifts; the empty product is 1.
    pub fn product_of_linear(shifts: impl IntoIterator<Item = i64>) -> Self {
        shifts.into_iter().fold(Self::one(), |acc, a| acc.mul_linear(a))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^j`; zero for any `j` outside `0..=degree`.
    pub fn coeff(&self, j: i64) -> BigInt {
        usize::try_from(j).ok().and_then(|j| self.coeffs.get(j)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Multiply in place by `t + a`.
    fn mul_linear(mut self, a: i64) -> Self {
        if self.is_zero() {
            return self;
        }
        let a = BigInt::from(a);
        let mut out = vec![BigInt::zero(); self.coeffs.len() + 1];
        for (j, c) in self.coeffs.drain(..).enumerate() {
            out[j] += &c * &a;
            out[j + 1] += c;
        }
        Self::new(out)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + BigRational::from_integer(c.clone()))
    }

    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Sum of the coefficients at `start, start - 2, start - 4, ...` down to
    /// index 0.
    pub fn descending_parity_sum(&self, start: i64) -> BigInt {
        let mut total = BigInt::zero();
        let mut j = start;
        while j >= 0 {
            total += self.coeff(j);
            j -= 2;
        }
        total
    }

    /// Sum of the coefficients at `start, start + 2, ...` up to the degree.
    pub fn ascending_parity_sum(&self, start: i64) -> BigInt {
        let top = self.coeffs.len() as i64;
        let mut total = BigInt::zero();
        let mut j = start.max(start.rem_euclid(2));
        while j < top {
            total += self.coeff(j);
            j += 2;
        }
        total
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        poly_mul(self, rhs)
    }
}

impl Mul for IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: IntPolynomial) -> IntPolynomial {
        poly_mul(&self, &rhs)
    }
}

/// Schoolbook convolution.
pub fn poly_mul(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    if a.is_zero() || b.is_zero() {
        return IntPolynomial::zero();
    }
    let mut out = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    IntPolynomial::new(out)
}

/// Horner evaluation at a rational point.
pub fn poly_eval(a: &IntPolynomial, t: &BigRational) -> BigRational {
    a.eval(t)
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = c.abs();
            if j == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match j {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{j}")?,
            }
        }
        Ok(())
    }
}
