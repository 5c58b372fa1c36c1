//! Exact scalars, polynomials, linear forms and rational functions, plus the
//! coefficient traits shared by the series and correlator code.

pub mod gaussian;
pub mod laurent;
pub mod linear;
pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use gaussian::GaussianScalar;
pub use laurent::Laurent;
pub use linear::LinearForm;
pub use poly::{Monomial, Polynomial, Variable};
pub use ratfunc::{RationalFunction, Substitution};
pub use scalar::Scalar;

use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("substitution sends denominator factor {0} to zero")]
    SubstitutionSingular(String),
    #[error("evaluation hits a vanishing denominator {0}")]
    EvalSingular(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot invert {0}: numerator is not a product of linear forms")]
    NotInvertible(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("perturbative precision exhausted")]
    PrecisionExhausted,
}

/// Commutative ring with rational scalars.
pub trait Ring: Clone + std::fmt::Debug + Send + Sync {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn of(s: &Scalar) -> Self;
    fn is_nil(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, s: &Scalar) -> Self {
        self.times(&Self::of(s))
    }
    fn power(&self, e: u32) -> Self {
        let mut out = Self::r_one();
        for _ in 0..e {
            out = out.times(self);
        }
        out
    }
}

/// Ring in which the elements the engine divides by are invertible.
pub trait Field: Ring {
    fn inverse(&self) -> Result<Self, AlgebraError>;
    fn over(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.times(&o.inverse()?))
    }
}

impl Ring for Scalar {
    fn r_zero() -> Self {
        Scalar::zero()
    }
    fn r_one() -> Self {
        Scalar::one()
    }
    fn of(s: &Scalar) -> Self {
        s.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self.clone()
    }
}

impl Field for Scalar {
    fn inverse(&self) -> Result<Self, AlgebraError> {
        if Zero::is_zero(self) {
            Err(AlgebraError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

impl Ring for GaussianScalar {
    fn r_zero() -> Self {
        GaussianScalar::real(Scalar::zero())
    }
    fn r_one() -> Self {
        GaussianScalar::real(Scalar::one())
    }
    fn of(s: &Scalar) -> Self {
        GaussianScalar::real(s.clone())
    }
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
}

impl Field for GaussianScalar {
    fn inverse(&self) -> Result<Self, AlgebraError> {
        self.inv()
    }
}

impl Ring for RationalFunction {
    fn r_zero() -> Self {
        RationalFunction::zero()
    }
    fn r_one() -> Self {
        RationalFunction::one()
    }
    fn of(s: &Scalar) -> Self {
        RationalFunction::constant(s.clone())
    }
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
}

impl Field for RationalFunction {
    fn inverse(&self) -> Result<Self, AlgebraError> {
        self.inv()
    }
}

/// Default relative precision for Laurent constants created through the traits.
pub const LAURENT_DEFAULT_CAP: usize = 4;

impl Ring for Laurent {
    fn r_zero() -> Self {
        Laurent::exact_zero(LAURENT_DEFAULT_CAP)
    }
    fn r_one() -> Self {
        Laurent::constant(Scalar::one(), LAURENT_DEFAULT_CAP)
    }
    fn of(s: &Scalar) -> Self {
        Laurent::constant(s.clone(), LAURENT_DEFAULT_CAP)
    }
    fn is_nil(&self) -> bool {
        self.is_exact_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
}

impl Field for Laurent {
    fn inverse(&self) -> Result<Self, AlgebraError> {
        self.inv()
    }
}
