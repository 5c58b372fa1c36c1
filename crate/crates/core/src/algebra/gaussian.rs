//! Gaussian rationals re + i*im, used only where powers of sqrt(-1) appear.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{self, Scalar};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianScalar {
    #[serde(with = "scalar::serde_str")]
    pub re: Scalar,
    #[serde(with = "scalar::serde_str")]
    pub im: Scalar,
}

impl GaussianScalar {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        Self { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        Self { re, im: Scalar::zero() }
    }

    pub fn i() -> Self {
        Self { re: Scalar::zero(), im: Scalar::one() }
    }

    /// i^n for any integer n.
    pub fn i_pow(n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => Self::real(Scalar::one()),
            1 => Self::i(),
            2 => Self::real(-Scalar::one()),
            _ => Self::new(Scalar::zero(), -Scalar::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.conj().scale(&norm.recip()))
    }
}

impl Add for &GaussianScalar {
    type Output = GaussianScalar;
    fn add(self, o: &GaussianScalar) -> GaussianScalar {
        GaussianScalar::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianScalar {
    type Output = GaussianScalar;
    fn sub(self, o: &GaussianScalar) -> GaussianScalar {
        GaussianScalar::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianScalar {
    type Output = GaussianScalar;
    fn mul(self, o: &GaussianScalar) -> GaussianScalar {
        GaussianScalar::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussianScalar {
    type Output = GaussianScalar;
    fn neg(self) -> GaussianScalar {
        GaussianScalar::new(-self.re.clone(), -self.im.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianScalar::i();
        assert_eq!(&i * &i, GaussianScalar::real(-Scalar::one()));
        assert_eq!(GaussianScalar::i_pow(7), GaussianScalar::i_pow(-1));
    }

    #[test]
    fn inverse() {
        let z = GaussianScalar::new(scalar::int(1), scalar::int(2));
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, GaussianScalar::real(Scalar::one()));
    }
}
