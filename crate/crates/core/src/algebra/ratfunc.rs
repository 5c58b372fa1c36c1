//! Rational functions with a sparse numerator over a multiset of linear-form factors.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::linear::LinearForm;
use super::poly::{Polynomial, Variable};
use super::scalar::{self, Scalar};
use super::AlgebraError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalFunction {
    #[serde(with = "scalar::serde_str")]
    pub prefactor: Scalar,
    pub numerator: Polynomial,
    pub denominator: Vec<(LinearForm, u32)>,
}

/// Variable images for `substitute`: each mapped variable goes to scale * form (scale 0 means zero).
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    pub images: BTreeMap<Variable, Option<(Scalar, LinearForm)>>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: Variable, raw: impl IntoIterator<Item = (Variable, Scalar)>) {
        self.images.insert(v, LinearForm::canonical(raw));
    }

    /// The weight restriction alpha_0 -> 0, alpha_i -> lambda_i, alpha_{2m+1-i} -> -lambda_i.
    pub fn rho_t(m: u8) -> Self {
        let mut s = Self::new();
        s.images.insert(Variable::Alpha(0), None);
        for i in 1..=m {
            s.set(Variable::Alpha(i), [(Variable::Lambda(i), Scalar::one())]);
            s.set(Variable::Alpha(2 * m + 1 - i), [(Variable::Lambda(i), -Scalar::one())]);
        }
        s
    }

    fn poly_image(&self, v: Variable) -> Option<Polynomial> {
        self.images.get(&v).map(|img| match img {
            None => Polynomial::zero(),
            Some((s, f)) => f.to_polynomial().scale(s),
        })
    }

    /// Composition: apply self, then `after`.
    pub fn then(&self, after: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, img) in &self.images {
            let new = match img {
                None => None,
                Some((s, f)) => {
                    let mut raw = Vec::new();
                    for (w, c) in f.terms() {
                        match after.images.get(w) {
                            Some(None) => {}
                            Some(Some((s2, f2))) => {
                                for (x, d) in f2.terms() {
                                    raw.push((*x, s * c * s2 * d));
                                }
                            }
                            None => raw.push((*w, s * c)),
                        }
                    }
                    LinearForm::canonical(raw)
                }
            };
            out.images.insert(*v, new);
        }
        for (v, img) in &after.images {
            out.images.entry(*v).or_insert_with(|| img.clone());
        }
        out
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn var(v: Variable) -> Self {
        Self::from_polynomial(Polynomial::var(v))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let mut f = RationalFunction { prefactor: Scalar::one(), numerator: p, denominator: Vec::new() };
        f.normalize();
        f
    }

    /// scale * form, e.g. alpha_a - alpha_b.
    pub fn linear(raw: impl IntoIterator<Item = (Variable, Scalar)>) -> Self {
        match LinearForm::canonical(raw) {
            None => Self::zero(),
            Some((s, f)) => Self::from_polynomial(f.to_polynomial().scale(&s)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() || self.prefactor.is_zero() {
            self.numerator = Polynomial::zero();
            self.prefactor = Scalar::one();
            self.denominator.clear();
            return;
        }
        let lead = self.numerator.leading_coefficient().cloned().unwrap_or_else(Scalar::one);
        if !lead.is_one() {
            self.numerator = self.numerator.scale(&lead.recip());
            self.prefactor *= lead;
        }
        self.denominator.retain(|(_, e)| *e > 0);
        self.denominator.sort();
    }

    fn den_map(&self) -> BTreeMap<LinearForm, u32> {
        let mut map = BTreeMap::new();
        for (f, e) in &self.denominator {
            *map.entry(f.clone()).or_insert(0) += e;
        }
        map
    }

    /// Numerator including the prefactor.
    pub fn full_numerator(&self) -> Polynomial {
        self.numerator.scale(&self.prefactor)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut den = self.den_map();
        for (f, e) in &other.denominator {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        let mut out = RationalFunction {
            prefactor: &self.prefactor * &other.prefactor,
            numerator: self.numerator.mul(&other.numerator),
            denominator: den.into_iter().collect(),
        };
        out.normalize();
        out.cancel_against(&self.numerator.variables());
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = self.clone();
        out.prefactor *= s;
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (da, db) = (self.den_map(), other.den_map());
        let mut lcm = da.clone();
        for (f, e) in &db {
            let slot = lcm.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let complement = |d: &BTreeMap<LinearForm, u32>| {
            let mut p = Polynomial::one();
            for (f, e) in &lcm {
                let missing = e - d.get(f).copied().unwrap_or(0);
                if missing > 0 {
                    p = p.mul(&f.to_polynomial().pow(missing));
                }
            }
            p
        };
        let na = self.full_numerator().mul(&complement(&da));
        let nb = other.full_numerator().mul(&complement(&db));
        let forms: Vec<LinearForm> = lcm.keys().cloned().collect();
        let mut out = RationalFunction {
            prefactor: Scalar::one(),
            numerator: na.add(&nb),
            denominator: lcm.into_iter().collect(),
        };
        out.normalize();
        out.cancel_factors(&forms);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Inverse; the numerator must be a constant or a single linear form.
    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let mut num = Polynomial::one();
        for (f, e) in &self.denominator {
            num = num.mul(&f.to_polynomial().pow(*e));
        }
        let mut den = Vec::new();
        let mut pre = self.prefactor.recip();
        if let Some(c) = self.numerator.as_constant() {
            pre /= c;
        } else if self.numerator.homogeneous_degree() == Some(1) {
            let raw: Vec<(Variable, Scalar)> =
                self.numerator.terms.iter().map(|(m, c)| (m.0[0].0, c.clone())).collect();
            let (s, f) = LinearForm::canonical(raw).ok_or(AlgebraError::DivisionByZero)?;
            pre /= s;
            den.push((f, 1));
        } else {
            return Err(AlgebraError::NotInvertible(self.to_string()));
        }
        let mut out = RationalFunction { prefactor: pre, numerator: num, denominator: den };
        out.normalize();
        Ok(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    fn cancel_factors(&mut self, forms: &[LinearForm]) {
        for form in forms {
            loop {
                let Some(pos) = self.denominator.iter().position(|(f, e)| f == form && *e > 0) else { break };
                match form.divide(&self.numerator) {
                    Some(q) => {
                        self.numerator = q;
                        self.denominator[pos].1 -= 1;
                    }
                    None => break,
                }
            }
        }
        self.normalize();
    }

    /// Cancels factors whose variables all occur in the numerator (cheap pre-filter).
    fn cancel_against(&mut self, vars: &[Variable]) {
        let forms: Vec<LinearForm> = self
            .denominator
            .iter()
            .filter(|(f, _)| f.terms().iter().all(|(v, _)| vars.contains(v)))
            .map(|(f, _)| f.clone())
            .collect();
        self.cancel_factors(&forms);
    }

    /// Cancels every denominator factor that exactly divides the numerator.
    pub fn reduce(&self) -> Self {
        let mut out = self.clone();
        let forms: Vec<LinearForm> = out.denominator.iter().map(|(f, _)| f.clone()).collect();
        out.cancel_factors(&forms);
        out
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<Self, AlgebraError> {
        let numerator = self.numerator.substitute(&|v| sub.poly_image(v));
        let mut prefactor = self.prefactor.clone();
        let mut den: BTreeMap<LinearForm, u32> = BTreeMap::new();
        let image = |v: Variable| match sub.images.get(&v) {
            Some(Some((_, f))) => Some(f.clone()),
            Some(None) => Some(LinearForm::var(v)),
            None => None,
        };
        let scale_of = |v: Variable| match sub.images.get(&v) {
            Some(Some((s, _))) => s.clone(),
            Some(None) => Scalar::zero(),
            None => Scalar::one(),
        };
        for (f, e) in &self.denominator {
            let (s, g) = f
                .substitute(&image, &scale_of)
                .ok_or_else(|| AlgebraError::SubstitutionSingular(f.to_string()))?;
            prefactor /= num_traits::pow(s, *e as usize);
            *den.entry(g).or_insert(0) += e;
        }
        let mut out = RationalFunction { prefactor, numerator, denominator: den.into_iter().collect() };
        out.normalize();
        Ok(out.reduce())
    }

    pub fn eval_at(&self, at: &dyn Fn(Variable) -> Option<Scalar>) -> Result<Scalar, AlgebraError> {
        let missing = || AlgebraError::EvalSingular("unassigned variable".into());
        let mut den = Scalar::one();
        for (f, e) in &self.denominator {
            let v = f.eval(at).ok_or_else(missing)?;
            if v.is_zero() {
                return Err(AlgebraError::EvalSingular(f.to_string()));
            }
            den *= num_traits::pow(v, *e as usize);
        }
        let num = self.numerator.eval(at).ok_or_else(missing)?;
        Ok(num * &self.prefactor / den)
    }

    pub fn eval_map(&self, at: &BTreeMap<Variable, Scalar>) -> Result<Scalar, AlgebraError> {
        self.eval_at(&|v| at.get(&v).cloned())
    }

    /// Polynomial view when no denominator survives.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        self.reduce().denominator.is_empty().then(|| self.reduce().full_numerator())
    }

    /// Degree of numerator minus degree of denominator when the numerator is homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let d = self.numerator.homogeneous_degree()? as i64;
        Some(d - self.denominator.iter().map(|(_, e)| *e as i64).sum::<i64>())
    }

    /// Cross-multiplied identity test.
    pub fn equals(&self, other: &Self) -> bool {
        let (da, db) = (self.den_map(), other.den_map());
        let expand = |d: &BTreeMap<LinearForm, u32>| {
            d.iter().fold(Polynomial::one(), |p, (f, e)| p.mul(&f.to_polynomial().pow(*e)))
        };
        self.full_numerator().mul(&expand(&db)) == other.full_numerator().mul(&expand(&da))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.full_numerator();
        if self.denominator.is_empty() {
            return write!(f, "{num}");
        }
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        write!(f, "({num})/({})", den.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{frac, int};

    fn lam(i: u8) -> RationalFunction {
        RationalFunction::var(Variable::Lambda(i))
    }

    fn lin(raw: &[(Variable, i64)]) -> RationalFunction {
        RationalFunction::linear(raw.iter().map(|(v, c)| (*v, int(*c))))
    }

    #[test]
    fn substitution_examples() {
        let h = Variable::Hbar;
        let f = lin(&[(h, 1), (Variable::Alpha(1), -1)]).inv().unwrap();
        let g = f.substitute(&Substitution::rho_t(1)).unwrap();
        let expect = lin(&[(h, 1), (Variable::Lambda(1), -1)]).inv().unwrap();
        assert_eq!(g, expect);

        let prod = RationalFunction::var(Variable::Alpha(0)).mul(&RationalFunction::var(Variable::Alpha(1)));
        assert!(prod.substitute(&Substitution::rho_t(1)).unwrap().is_zero());

        let f = lin(&[(h, 1), (Variable::Alpha(1), 1), (Variable::Alpha(2), -1)]).inv().unwrap();
        let mut s = Substitution::new();
        s.set(h, [(Variable::Alpha(2), int(1)), (Variable::Alpha(1), int(-1))]);
        assert!(matches!(f.substitute(&s), Err(AlgebraError::SubstitutionSingular(_))));
    }

    #[test]
    fn reduce_examples() {
        let num = lam(1).mul(&lam(1)).sub(&lam(2).mul(&lam(2)));
        let den = lin(&[(Variable::Lambda(1), 1), (Variable::Lambda(2), -1)]);
        let f = num.mul(&den.inv().unwrap()).reduce();
        assert!(f.denominator.is_empty());
        assert_eq!(f, lam(1).add(&lam(2)));

        let g = lam(1).mul(&lam(1).inv().unwrap().mul(&lam(2).inv().unwrap())).reduce();
        assert_eq!(g.denominator.len(), 1);
        assert_eq!(g.reduce().denominator, g.denominator);
    }

    #[test]
    fn eval_examples() {
        let at = |a: i64, b: i64| move |v: Variable| match v {
            Variable::Lambda(1) => Some(int(a)),
            Variable::Lambda(2) => Some(int(b)),
            _ => None,
        };
        assert_eq!(lam(1).add(&lam(2)).eval_at(&at(1, 2)).unwrap(), int(3));
        let f = lin(&[(Variable::Lambda(1), 1), (Variable::Lambda(2), -1)]).inv().unwrap();
        assert_eq!(f.eval_at(&at(3, 1)).unwrap(), frac(1, 2));
        assert!(matches!(f.eval_at(&at(1, 1)), Err(AlgebraError::EvalSingular(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = lam(1).add(&lam(2)).mul(&lin(&[(Variable::Lambda(1), 2), (Variable::Lambda(2), 3)]).inv().unwrap());
        let s = serde_json::to_string(&f).unwrap();
        let back: RationalFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
    }
}
