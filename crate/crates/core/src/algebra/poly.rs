//! Sparse multivariate polynomials over exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{self, Scalar};

/// Polynomial variable; every variable has grading weight 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variable {
    Lambda(u8),
    Alpha(u8),
    Hbar,
}

impl Variable {
    pub const WEIGHT: i64 = 2;
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Lambda(i) => write!(f, "l{i}"),
            Variable::Alpha(a) => write!(f, "a{a}"),
            Variable::Hbar => write!(f, "h"),
        }
    }
}

/// Exponent vector, sorted by variable, no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(pub Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Splits off the power of `v`.
    pub fn split(&self, v: Variable) -> (u32, Monomial) {
        let e = self.exponent(v);
        (e, Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect()))
    }

    pub fn with_power(&self, v: Variable, e: u32) -> Monomial {
        if e == 0 {
            self.clone()
        } else {
            self.mul(&Monomial(vec![(v, e)]))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn var(v: Variable) -> Self {
        let mut p = Self::zero();
        p.terms.insert(Monomial::var(v), Scalar::one());
        p
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut acc: std::collections::HashMap<Monomial, Scalar> = std::collections::HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                let slot = acc.entry(m).or_insert_with(Scalar::zero);
                *slot += c;
            }
        }
        Polynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Some(d) if every term has degree d; None for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut vs: Vec<Variable> =
            self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn eval(&self, at: &dyn Fn(Variable) -> Option<Scalar>) -> Option<Scalar> {
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                t *= num_traits::pow(at(*v)?, *e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Replaces each variable by the image polynomial given by `image` (None keeps it).
    pub fn substitute(&self, image: &dyn Fn(Variable) -> Option<Polynomial>) -> Polynomial {
        let mut cache: BTreeMap<(Variable, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone());
            let mut kept = Monomial::one();
            for (v, e) in &m.0 {
                match image(*v) {
                    Some(p) => {
                        let pe = cache.entry((*v, *e)).or_insert_with(|| p.pow(*e)).clone();
                        t = t.mul(&pe);
                    }
                    None => kept = kept.mul(&Monomial(vec![(*v, *e)])),
                }
            }
            if !kept.0.is_empty() {
                t = t.mul(&Polynomial::monomial(kept, Scalar::one()));
            }
            out = out.add(&t);
        }
        out
    }

    /// Coefficients as a polynomial in `v`: index i holds the coefficient of v^i.
    pub fn coefficients_in(&self, v: Variable) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            let e = e as usize;
            if out.len() <= e {
                out.resize(e + 1, Polynomial::zero());
            }
            out[e].add_term(rest, c.clone());
        }
        out
    }

    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.terms.values().next_back()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                    .collect();
                if vars.is_empty() {
                    scalar::to_string(c)
                } else {
                    format!("{}*{}", scalar::to_string(c), vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Canonical JSON form: list of [exponents, "p/q"] with exponents as [[var, e], ...].
impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<(&Monomial, String)> =
            self.terms.iter().map(|(m, c)| (m, scalar::to_string(c))).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<(Monomial, String)> = Vec::deserialize(d)?;
        let mut p = Polynomial::zero();
        for (m, c) in raw {
            p.add_term(m, scalar::parse(&c).map_err(serde::de::Error::custom)?);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;

    fn l(i: u8) -> Polynomial {
        Polynomial::var(Variable::Lambda(i))
    }

    #[test]
    fn arithmetic() {
        let p = l(1).add(&l(2));
        let q = l(1).sub(&l(2));
        let prod = p.mul(&q);
        let expect = l(1).pow(2).sub(&l(2).pow(2));
        assert_eq!(prod, expect);
        assert_eq!(prod.homogeneous_degree(), Some(2));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution_and_eval() {
        let p = l(1).mul(&l(2)).add(&Polynomial::constant(int(3)));
        let q = p.substitute(&|v| (v == Variable::Lambda(2)).then(|| l(1).scale(&int(2))));
        assert_eq!(q, l(1).pow(2).scale(&int(2)).add(&Polynomial::constant(int(3))));
        let val = p.eval(&|v| Some(if v == Variable::Lambda(1) { int(2) } else { int(5) }));
        assert_eq!(val, Some(int(13)));
    }

    #[test]
    fn json_round_trip() {
        let p = l(1).pow(3).sub(&l(2).scale(&crate::algebra::scalar::frac(1, 3)));
        let s = serde_json::to_string(&p).unwrap();
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
    }
}
