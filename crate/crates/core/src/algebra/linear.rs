//! Linear forms without constant term, canonically scaled.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, Polynomial, Variable};
use super::scalar::{self, Scalar};

/// Sum of c_v * v with leading coefficient (first variable in the fixed order) equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: Vec<(Variable, Scalar)>,
}

impl LinearForm {
    /// Builds the canonical form; returns the scalar pulled out, or None for the zero form.
    pub fn canonical(raw: impl IntoIterator<Item = (Variable, Scalar)>) -> Option<(Scalar, LinearForm)> {
        let mut map: BTreeMap<Variable, Scalar> = BTreeMap::new();
        for (v, c) in raw {
            *map.entry(v).or_insert_with(Scalar::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let lead = map.values().next()?.clone();
        let coeffs = map.into_iter().map(|(v, c)| (v, c / &lead)).collect();
        Some((lead, LinearForm { coeffs }))
    }

    pub fn var(v: Variable) -> LinearForm {
        LinearForm { coeffs: vec![(v, Scalar::one())] }
    }

    pub fn terms(&self) -> &[(Variable, Scalar)] {
        &self.coeffs
    }

    pub fn pivot(&self) -> Variable {
        self.coeffs[0].0
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let mut p = Polynomial::zero();
        for (v, c) in &self.coeffs {
            p.add_term(Monomial::var(*v), c.clone());
        }
        p
    }

    pub fn eval(&self, at: &dyn Fn(Variable) -> Option<Scalar>) -> Option<Scalar> {
        let mut total = Scalar::zero();
        for (v, c) in &self.coeffs {
            total += c * at(*v)?;
        }
        Some(total)
    }

    /// Image under a linear substitution; None when the image is the zero form.
    pub fn substitute(&self, image: &dyn Fn(Variable) -> Option<LinearForm>, scale_of: &dyn Fn(Variable) -> Scalar)
        -> Option<(Scalar, LinearForm)> {
        let mut raw: Vec<(Variable, Scalar)> = Vec::new();
        for (v, c) in &self.coeffs {
            match image(*v) {
                Some(form) => {
                    let s = scale_of(*v);
                    for (w, d) in form.terms() {
                        raw.push((*w, c * &s * d));
                    }
                }
                None => raw.push((*v, c.clone())),
            }
        }
        LinearForm::canonical(raw)
    }

    /// Exact quotient numerator / self, or None if self does not divide it.
    pub fn divide(&self, numerator: &Polynomial) -> Option<Polynomial> {
        let pivot = self.pivot();
        let rest = LinearForm { coeffs: self.coeffs[1..].to_vec() }.to_polynomial();
        let parts = numerator.coefficients_in(pivot);
        if parts.is_empty() {
            return Some(Polynomial::zero());
        }
        let top = parts.len() - 1;
        if top == 0 {
            return if parts[0].is_zero() { Some(Polynomial::zero()) } else { None };
        }
        // numerator = sum parts[i] x^i, divisor = x + rest
        let mut quot = vec![Polynomial::zero(); top];
        quot[top - 1] = parts[top].clone();
        for i in (1..top).rev() {
            quot[i - 1] = parts[i].sub(&rest.mul(&quot[i]));
        }
        if !parts[0].sub(&rest.mul(&quot[0])).is_zero() {
            return None;
        }
        let mut out = Polynomial::zero();
        for (i, q) in quot.into_iter().enumerate() {
            for (m, c) in q.terms {
                out.add_term(m.with_power(pivot, i as u32), c);
            }
        }
        Some(out)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_polynomial())
    }
}

impl Serialize for LinearForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(Variable, String)> =
            self.coeffs.iter().map(|(v, c)| (*v, scalar::to_string(c))).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<(Variable, String)> = Vec::deserialize(d)?;
        let mut parsed = Vec::new();
        for (v, c) in raw {
            parsed.push((v, scalar::parse(&c).map_err(serde::de::Error::custom)?));
        }
        let (lead, form) = LinearForm::canonical(parsed).ok_or_else(|| serde::de::Error::custom("zero linear form"))?;
        if !lead.is_one() {
            return Err(serde::de::Error::custom("linear form not canonical"));
        }
        Ok(form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;

    #[test]
    fn canonical_scaling() {
        let (s, f) = LinearForm::canonical([(Variable::Lambda(2), int(3)), (Variable::Lambda(1), int(-2))]).unwrap();
        assert_eq!(s, int(-2));
        assert_eq!(f.terms()[0], (Variable::Lambda(1), int(1)));
        assert!(LinearForm::canonical([(Variable::Hbar, int(0))]).is_none());
    }

    #[test]
    fn exact_division() {
        let l1 = Polynomial::var(Variable::Lambda(1));
        let l2 = Polynomial::var(Variable::Lambda(2));
        let num = l1.pow(2).sub(&l2.pow(2));
        let (_, form) = LinearForm::canonical([(Variable::Lambda(1), int(1)), (Variable::Lambda(2), int(-1))]).unwrap();
        assert_eq!(form.divide(&num).unwrap(), l1.add(&l2));
        assert!(form.divide(&l1).is_none());
    }
}
