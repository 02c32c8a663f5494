//! Integer polynomials in one variable with arbitrary-precision coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// `coeffs[i]` is the coefficient of `m^i`. The vector never ends in a zero,
/// so the zero polynomial has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
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
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `m^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPolynomial { coeffs }
    }

    /// `m - a`.
    pub fn linear_root(a: i64) -> Self {
        Self::from_i64s(&[-a, 1])
    }

    /// `m (m-1) ⋯ (m-n+1)`.
    pub fn falling_factorial(n: usize) -> Self {
        (0..n as i64).fold(Self::constant(1), |acc, i| acc * Self::linear_root(i))
    }

    pub fn pow(&self, exp: usize) -> Self {
        (0..exp).fold(Self::constant(1), |acc, _| acc * self.clone())
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

    /// Coefficient of `m^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact Horner evaluation.
    pub fn evaluate(&self, m: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * m + c)
    }

    pub fn eval_i64(&self, m: i64) -> BigInt {
        self.evaluate(&BigInt::from(m))
    }

    /// `p(m + shift)` as a polynomial in `m`.
    pub fn shift(&self, shift: i64) -> Self {
        let base = Self::from_i64s(&[shift, 1]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc * base.clone() + Self::constant(c.clone()))
    }

    /// Coefficient of `m^{d-i}` where `d` is the degree.
    pub fn from_top(&self, i: usize) -> BigInt {
        match self.degree() {
            Some(d) if i <= d => self.coeffs[d - i].clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl Add for IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        IntPolynomial::new(coeffs)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::new(coeffs)
    }
}

impl core::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = mag.is_one() && i > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "m")?,
                _ => write!(f, "m^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn evaluation() {
        let p = IntPolynomial::from_i64s(&[0, -1, 1]);
        assert_eq!(p.eval_i64(3), BigInt::from(6));
        assert_eq!(IntPolynomial::zero().eval_i64(17), BigInt::zero());
        let c4 = IntPolynomial::from_i64s(&[0, -3, 6, -4, 1]);
        assert_eq!(c4.eval_i64(3), BigInt::from(18));
    }

    #[test]
    fn falling_factorial_k4() {
        assert_eq!(
            IntPolynomial::falling_factorial(4),
            IntPolynomial::from_i64s(&[0, -6, 11, -6, 1])
        );
    }

    #[test]
    fn trims_and_displays() {
        let p = IntPolynomial::from_i64s(&[0, -1, 1, 0, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "m^2 - m");
        assert_eq!(IntPolynomial::zero().degree(), None);
        assert_eq!(p.from_top(1), BigInt::from(-1));
    }

    #[test]
    fn shift_matches_pointwise() {
        let p = IntPolynomial::falling_factorial(3);
        let q = p.shift(-1);
        for m in -3..6 {
            assert_eq!(q.eval_i64(m), p.eval_i64(m - 1));
        }
    }

    #[test]
    fn no_overflow_on_large_values() {
        let p = IntPolynomial::monomial(40);
        assert_eq!(p.eval_i64(1000).to_string().len(), 121);
    }
}
