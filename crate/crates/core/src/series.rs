//! Truncated multigraded formal power series over a generic coefficient ring.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::scalar::{self, Scalar};
use crate::algebra::Ring;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("requested exponent {0:?} lies outside the truncation")]
    RequestOutsideTruncation(Vec<u32>),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("series variable sets differ")]
    IncompatibleVariables,
}

/// Formal variables of the generating functions, with their gradings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SeriesVariable {
    /// Closed degree variable.
    BigQ,
    /// Open degree variable.
    Q,
    Eta(u8),
    S,
    S0,
    T(u8),
    U,
    /// nu_{a,d} with d stored doubled so half-integers fit.
    Nu(u8, u16),
}

impl SeriesVariable {
    /// Real grading for target dimension 2m.
    pub fn weight(self, m: i64) -> i64 {
        match self {
            SeriesVariable::BigQ => 4 * m + 2,
            SeriesVariable::Q => 2 * m + 1,
            SeriesVariable::Eta(i) | SeriesVariable::T(i) => 2 - 2 * i as i64,
            SeriesVariable::S => 1 - 2 * m,
            SeriesVariable::S0 => 1,
            SeriesVariable::U => 0,
            SeriesVariable::Nu(..) => 0,
        }
    }
}

/// Per-variable exponent caps and an optional weighted total cap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub vars: Vec<SeriesVariable>,
    pub caps: Vec<u32>,
    pub total: Option<(Vec<u32>, u32)>,
}

impl TruncationSpec {
    pub fn new(pairs: &[(SeriesVariable, u32)]) -> Self {
        TruncationSpec {
            vars: pairs.iter().map(|p| p.0).collect(),
            caps: pairs.iter().map(|p| p.1).collect(),
            total: None,
        }
    }

    pub fn with_total(mut self, weights: Vec<u32>, cap: u32) -> Self {
        self.total = Some((weights, cap));
        self
    }

    pub fn admits(&self, exps: &[u32]) -> bool {
        if exps.len() != self.caps.len() || exps.iter().zip(&self.caps).any(|(e, c)| e > c) {
            return false;
        }
        match &self.total {
            None => true,
            Some((w, cap)) => exps.iter().zip(w).map(|(e, w)| e * w).sum::<u32>() <= *cap,
        }
    }

    pub fn index_of(&self, v: SeriesVariable) -> Option<usize> {
        self.vars.iter().position(|w| *w == v)
    }
}

#[derive(Clone, Debug)]
pub struct Series<C> {
    pub spec: TruncationSpec,
    pub terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Ring> Series<C> {
    pub fn zero(spec: &TruncationSpec) -> Self {
        Series { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(spec: &TruncationSpec, c: C) -> Self {
        let mut s = Self::zero(spec);
        s.add_term(vec![0; spec.vars.len()], c);
        s
    }

    pub fn one(spec: &TruncationSpec) -> Self {
        Self::constant(spec, C::r_one())
    }

    /// c * prod v^e; dropped if outside the truncation.
    pub fn monomial(spec: &TruncationSpec, exps: Vec<u32>, c: C) -> Self {
        let mut s = Self::zero(spec);
        s.add_term(exps, c);
        s
    }

    pub fn variable(spec: &TruncationSpec, v: SeriesVariable) -> Self {
        let mut e = vec![0; spec.vars.len()];
        if let Some(i) = spec.index_of(v) {
            e[i] = 1;
        }
        Self::monomial(spec, e, C::r_one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: C) {
        if c.is_nil() || !self.spec.admits(&exps) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().plus(&c);
                if sum.is_nil() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.negated());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.spec);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if self.spec.admits(&e) {
                    out.add_term(e, ca.times(cb));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.spec);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.times(c));
        }
        out
    }

    pub fn scale_scalar(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(&self.spec);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.scaled(s));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.spec);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&vec![0; self.spec.vars.len()]).cloned().unwrap_or_else(C::r_zero)
    }

    /// Largest n with a^n possibly nonzero when a has zero constant term.
    fn nilpotency_bound(&self) -> u32 {
        self.spec.caps.iter().sum::<u32>() + 1
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_nil() {
            return Err(SeriesError::PreconditionViolated("exp needs zero constant term".into()));
        }
        let mut out = Self::one(&self.spec);
        let mut power = Self::one(&self.spec);
        for n in 1..=self.nilpotency_bound() {
            power = power.mul(self).scale_scalar(&scalar::frac(1, n as i64));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if !c.minus(&C::r_one()).is_nil() {
            return Err(SeriesError::PreconditionViolated("log needs constant term 1".into()));
        }
        let x = self.sub(&Self::one(&self.spec));
        let mut out = Self::zero(&self.spec);
        let mut power = Self::one(&self.spec);
        for n in 1..=self.nilpotency_bound() {
            power = power.mul(&x);
            if power.is_zero() {
                break;
            }
            let sgn = if n % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale_scalar(&scalar::frac(sgn, n as i64)));
        }
        Ok(out)
    }

    /// Plain coefficient of the monomial.
    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::r_zero)
    }

    /// Derivative-convention coefficient: (prod e_v!) times the plain coefficient.
    pub fn extract(&self, exps: &[u32]) -> Result<C, SeriesError> {
        if !self.spec.admits(exps) {
            return Err(SeriesError::RequestOutsideTruncation(exps.to_vec()));
        }
        let mut fact = Scalar::from_integer(1.into());
        for e in exps {
            fact *= scalar::factorial_q(*e as u64);
        }
        Ok(self.coeff(exps).scaled(&fact))
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut out = Series::zero(&self.spec);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn try_map<D: Ring, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<Series<D>, E> {
        let mut out = Series::zero(&self.spec);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{frac, int};

    fn spec_q(cap: u32) -> TruncationSpec {
        TruncationSpec::new(&[(SeriesVariable::Q, cap)])
    }

    #[test]
    fn product_respects_truncation() {
        let one_plus_q = Series::<Scalar>::one(&spec_q(2)).add(&Series::variable(&spec_q(2), SeriesVariable::Q));
        let sq = one_plus_q.mul(&one_plus_q);
        assert_eq!(sq.coeff(&[2]), int(1));
        assert_eq!(sq.coeff(&[1]), int(2));
        let small = Series::<Scalar>::one(&spec_q(1)).add(&Series::variable(&spec_q(1), SeriesVariable::Q));
        let sq = small.mul(&small);
        assert_eq!(sq.terms.len(), 2);
        assert!(small.mul(&Series::zero(&spec_q(1))).is_zero());
    }

    #[test]
    fn exp_log_examples() {
        let q = Series::<Scalar>::variable(&spec_q(3), SeriesVariable::Q);
        let e = q.exp().unwrap();
        assert_eq!(e.coeff(&[3]), frac(1, 6));
        let l = Series::one(&spec_q(3)).add(&q).log().unwrap();
        assert_eq!(l.coeff(&[2]), frac(-1, 2));
        assert_eq!(l.coeff(&[3]), frac(1, 3));
        let spec = TruncationSpec::new(&[(SeriesVariable::Q, 2), (SeriesVariable::S0, 2)]);
        let qs = Series::<Scalar>::monomial(&spec, vec![1, 1], int(1));
        let back = qs.exp().unwrap().log().unwrap();
        assert_eq!(back.terms, qs.terms);
        assert!(Series::<Scalar>::one(&spec).exp().is_err());
        assert!(qs.log().is_err());
    }

    #[test]
    fn extract_examples() {
        let spec = TruncationSpec::new(&[(SeriesVariable::S0, 3)]);
        let e = Series::<Scalar>::variable(&spec, SeriesVariable::S0).exp().unwrap();
        assert_eq!(e.extract(&[3]).unwrap(), int(1));
        let cube = Series::<Scalar>::monomial(&spec, vec![3], int(1));
        assert_eq!(cube.extract(&[3]).unwrap(), int(6));
        let spec = TruncationSpec::new(&[(SeriesVariable::Q, 2), (SeriesVariable::Eta(2), 1)]);
        let m = Series::<Scalar>::monomial(&spec, vec![2, 1], int(1));
        assert_eq!(m.extract(&[2, 1]).unwrap(), int(2));
        assert!(m.extract(&[3, 0]).is_err());
    }
}
