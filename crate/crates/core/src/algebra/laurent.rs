//! Truncated Laurent series in a perturbation parameter eps with tracked precision.
//!
//! A value is eps^val * (c_0 + c_1 eps + ... ) known to relative precision `rel`
//! (or exactly, with implicit zero tail). Used to evaluate expressions whose
//! individual summands are singular at eps = 0 while the total is regular.

use num_traits::Zero;

use super::scalar::Scalar;
use super::AlgebraError;

const EXACT: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    val: i64,
    coeffs: Vec<Scalar>,
    rel: usize,
    cap: usize,
}

impl Laurent {
    pub fn exact_zero(cap: usize) -> Self {
        Laurent { val: 0, coeffs: Vec::new(), rel: EXACT, cap }
    }

    pub fn constant(c: Scalar, cap: usize) -> Self {
        Self::exact_poly(vec![c], cap)
    }

    /// Exact polynomial c_0 + c_1 eps + ...
    pub fn exact_poly(coeffs: Vec<Scalar>, cap: usize) -> Self {
        let mut out = Laurent { val: 0, coeffs, rel: EXACT, cap };
        out.normalize();
        out
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn is_exact(&self) -> bool {
        self.rel == EXACT
    }

    /// Absolute precision: terms of order >= this are unknown.
    pub fn absolute_precision(&self) -> Option<i64> {
        (!self.is_exact()).then(|| self.val + self.rel as i64)
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.coeffs.is_empty()
    }

    /// True for exact zero or an O(eps^n) remainder.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                if !self.is_exact() {
                    self.val += self.rel as i64;
                    self.rel = 0;
                }
                self.coeffs.clear();
            }
            Some(i) => {
                self.coeffs.drain(..i);
                self.val += i as i64;
                if !self.is_exact() {
                    self.rel -= i;
                }
            }
        }
        if self.is_exact() {
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
            if self.coeffs.len() > self.cap {
                self.coeffs.truncate(self.cap);
                self.rel = self.cap;
            }
        } else {
            let keep = self.rel.min(self.cap);
            self.coeffs.truncate(keep);
            self.coeffs.resize(keep, Scalar::zero());
            self.rel = keep;
        }
    }

    fn coeff_at(&self, order: i64) -> Scalar {
        let idx = order - self.val;
        if idx < 0 {
            return Scalar::zero();
        }
        self.coeffs.get(idx as usize).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = self.cap.max(other.cap);
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let low = self.val.min(other.val);
        let abs = match (self.absolute_precision(), other.absolute_precision()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let high = match abs {
            Some(a) => a,
            None => (self.val + self.coeffs.len() as i64).max(other.val + other.coeffs.len() as i64),
        };
        let coeffs: Vec<Scalar> =
            (low..high.max(low)).map(|o| self.coeff_at(o) + other.coeff_at(o)).collect();
        let rel = match abs {
            None => EXACT,
            Some(a) => (a - low).max(0) as usize,
        };
        let mut out = Laurent { val: low, coeffs, rel, cap };
        if out.rel != EXACT && out.rel == 0 {
            out.val = abs.unwrap_or(low);
        }
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::exact_zero(self.cap);
        }
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap.max(other.cap);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::exact_zero(cap);
        }
        let val = self.val + other.val;
        let rel = self.rel.min(other.rel);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            // O(eps^a) times something with known valuation.
            let a = if self.coeffs.is_empty() { self.val } else { other.val };
            let b = if self.coeffs.is_empty() { other.val } else { self.val };
            return Laurent { val: a + b, coeffs: Vec::new(), rel: 0, cap };
        }
        let len = if rel == EXACT { self.coeffs.len() + other.coeffs.len() - 1 } else { rel.min(cap) };
        let mut coeffs = vec![Scalar::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += x * y;
            }
        }
        let mut out = Laurent { val, coeffs, rel, cap };
        out.normalize();
        out
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.coeffs.is_empty() {
            return Err(if self.is_exact() { AlgebraError::DivisionByZero } else { AlgebraError::PrecisionExhausted });
        }
        let n = if self.is_exact() { self.cap } else { self.rel.min(self.cap) };
        let c0 = self.coeffs[0].recip();
        let mut out = vec![Scalar::zero(); n];
        out[0] = c0.clone();
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -acc * &c0;
        }
        let exact_unit = self.is_exact() && self.coeffs.len() == 1;
        let mut res = Laurent { val: -self.val, coeffs: out, rel: if exact_unit { EXACT } else { n }, cap: self.cap };
        res.normalize();
        Ok(res)
    }

    /// The eps^0 coefficient of a value that must be regular at eps = 0.
    pub fn regular_value(&self) -> Result<Scalar, AlgebraError> {
        if let Some(abs) = self.absolute_precision() {
            if abs < 1 {
                return Err(AlgebraError::PrecisionExhausted);
            }
        }
        if self.val < 0 {
            return Err(AlgebraError::EvalSingular("pole at eps = 0".into()));
        }
        Ok(self.coeff_at(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;

    #[test]
    fn pole_cancellation() {
        // 1/eps - 1/(eps + eps^2) = 1/(1 + eps) -> 1 at eps = 0
        let eps = Laurent::exact_poly(vec![int(0), int(1)], 8);
        let eps2 = Laurent::exact_poly(vec![int(0), int(1), int(1)], 8);
        let v = eps.inv().unwrap().sub(&eps2.inv().unwrap());
        assert_eq!(v.regular_value().unwrap(), int(1));
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Laurent::constant(int(3), 4);
        let b = Laurent::constant(int(2), 4);
        let c = a.mul(&b).sub(&Laurent::constant(int(6), 4));
        assert!(c.is_exact_zero());
    }

    #[test]
    fn precision_shortfall_detected() {
        let eps = Laurent::exact_poly(vec![int(0), int(1)], 2);
        let one_plus = Laurent::exact_poly(vec![int(1), int(1)], 2);
        // 1/(1+eps) known to 2 terms; dividing by eps^2 leaves no eps^0 information
        let v = one_plus.inv().unwrap().mul(&eps.mul(&eps).inv().unwrap());
        assert!(v.regular_value().is_err());
    }
}
