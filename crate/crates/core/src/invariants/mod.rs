//! Equivariant open Gromov-Witten invariants of (CP^2m, RP^2m) and Welschinger counts.

pub mod diagrams;
pub mod reconstruct;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{AlgebraError, Polynomial};
use crate::correlators::CorrelatorError;
use crate::profiles::{self, PointWeights, ProfileError, VertexCache, WeightedProfile};

pub use reconstruct::reconstruct;

/// Seed for evaluation points and perturbation directions; results do not depend on it.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvariantError {
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("result is not a polynomial: {0}")]
    NonPolynomialResult(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("non-integral Welschinger value {0}")]
    NonIntegral(String),
    #[error("imaginary part survives phase division: {0}")]
    NonReal(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

impl From<AlgebraError> for InvariantError {
    fn from(e: AlgebraError) -> Self {
        InvariantError::Profile(ProfileError::Algebra(e))
    }
}

impl From<CorrelatorError> for InvariantError {
    fn from(e: CorrelatorError) -> Self {
        InvariantError::Profile(ProfileError::Correlator(e))
    }
}

impl InvariantError {
    pub fn is_invalid_key(&self) -> bool {
        matches!(self, InvariantError::InvalidKey(_) | InvariantError::Profile(ProfileError::InvalidKey(_)))
    }

    /// Failures caused by an unlucky evaluation point rather than the key.
    pub(crate) fn is_degenerate_point(&self) -> bool {
        let algebra = match self {
            InvariantError::Profile(ProfileError::Algebra(e)) => e,
            InvariantError::Profile(ProfileError::Correlator(CorrelatorError::Algebra(e))) => e,
            _ => return false,
        };
        matches!(
            algebra,
            AlgebraError::DivisionByZero | AlgebraError::EvalSingular(_) | AlgebraError::PrecisionExhausted
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantKey {
    pub m: u8,
    pub k: u32,
    pub lvec: Vec<u32>,
    pub beta: u32,
}

impl InvariantKey {
    pub fn new(m: u8, k: u32, lvec: Vec<u32>, beta: u32) -> Self {
        InvariantKey { m, k, lvec, beta }
    }

    pub fn w1(&self) -> u32 {
        self.beta % 2
    }

    pub fn validate(&self) -> Result<(), InvariantError> {
        let bad = |why: &str| Err(InvariantError::InvalidKey(format!("{self}: {why}")));
        if self.m == 0 {
            return bad("m must be positive");
        }
        if self.lvec.len() != 2 * self.m as usize + 1 {
            return bad("lvec must have 2m+1 entries");
        }
        if self.k + 2 * self.lvec.iter().sum::<u32>() + 3 * self.beta < 3 {
            return bad("unstable");
        }
        if (self.k + self.beta) % 2 == 0 {
            return bad("k + beta must be odd");
        }
        Ok(())
    }

    /// 3 - 2m - (2m+1)beta - sum_i l_i (2 - 2i) - k (1 - 2m).
    pub fn expected_degree(&self) -> i64 {
        let m = self.m as i64;
        let mut deg = 3 - 2 * m - (2 * m + 1) * self.beta as i64 - self.k as i64 * (1 - 2 * m);
        for (i, l) in self.lvec.iter().enumerate() {
            deg -= *l as i64 * (2 - 2 * i as i64);
        }
        deg
    }

    /// Degree as a polynomial in lambda; each lambda carries cohomological degree 2.
    pub fn lambda_degree(&self) -> i64 {
        self.expected_degree() / 2
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.lvec.iter().map(u32::to_string).collect();
        write!(f, "(m={}, k={}, l=({}), beta={})", self.m, self.k, l.join(","), self.beta)
    }
}

pub fn expected_degree(key: &InvariantKey) -> i64 {
    key.expected_degree()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Labeled,
    Orbits,
    Diagrams,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Labeled => "labeled",
            Route::Orbits => "orbits",
            Route::Diagrams => "diagrams",
        })
    }
}

impl FromStr for Route {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "labeled" => Ok(Route::Labeled),
            "orbits" => Ok(Route::Orbits),
            "diagrams" => Ok(Route::Diagrams),
            _ => Err(format!("unknown route {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantValue {
    pub key: InvariantKey,
    pub expected_degree: i64,
    pub route: Route,
    pub value: Polynomial,
}

impl InvariantValue {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        self.value.as_constant()
    }

    /// True when the value is zero or every monomial has the expected degree (lambda of weight 2).
    pub fn is_homogeneous_of_expected_degree(&self) -> bool {
        self.value.terms.keys().all(|mono| 2 * mono.degree() as i64 == self.expected_degree)
    }
}

/// Boundary orientation convention: the printed fixed-point sum differs from I by (-1)^k.
fn orientation_sign(key: &InvariantKey) -> Scalar {
    scalar::sign(key.k as u64)
}

fn profile_sum(key: &InvariantKey, profiles: &[WeightedProfile], lambda: &[Scalar]) -> Result<Scalar, InvariantError> {
    let weights = PointWeights::new(lambda, key.beta, &key.lvec, DEFAULT_SEED)?;
    let cache = VertexCache::new(&weights);
    let mut total = Scalar::zero();
    for wp in profiles {
        let c = cache.contribution(&wp.profile)?;
        if !c.is_zero() {
            total += c * &wp.weight * wp.profile.multinomial();
        }
    }
    Ok(total * orientation_sign(key))
}

/// Evaluate at lambda through the given route.
pub fn evaluate_at(key: &InvariantKey, route: Route, lambda: &[Scalar]) -> Result<Scalar, InvariantError> {
    key.validate()?;
    match route {
        Route::Labeled => profile_sum(key, &profiles::enumerate_labeled(key)?, lambda),
        Route::Orbits => profile_sum(key, &profiles::enumerate_orbits(key)?, lambda),
        Route::Diagrams => diagrams::evaluate_at(key, lambda),
    }
}

/// The invariant as a certified homogeneous polynomial in lambda.
pub fn compute(key: &InvariantKey, route: Route) -> Result<InvariantValue, InvariantError> {
    key.validate()?;
    let degree = key.lambda_degree();
    let value = match route {
        Route::Labeled | Route::Orbits => {
            let profiles =
                if route == Route::Labeled { profiles::enumerate_labeled(key)? } else { profiles::enumerate_orbits(key)? };
            reconstruct(key.m, degree, DEFAULT_SEED, &|p| profile_sum(key, &profiles, p))?
        }
        Route::Diagrams => reconstruct(key.m, degree, DEFAULT_SEED, &|p| diagrams::evaluate_at(key, p))?,
    };
    Ok(InvariantValue { key: key.clone(), expected_degree: key.expected_degree(), route, value })
}

/// Reference route: the labeled fixed-point sum.
pub fn ogw(key: &InvariantKey) -> Result<InvariantValue, InvariantError> {
    compute(key, Route::Labeled)
}

pub fn ogw_orbits(key: &InvariantKey) -> Result<InvariantValue, InvariantError> {
    compute(key, Route::Orbits)
}

pub fn ogw_via_diagrams(key: &InvariantKey) -> Result<InvariantValue, InvariantError> {
    compute(key, Route::Diagrams)
}

/// Degree of the Welschinger key, if k + 2l + 1 is divisible by 3.
pub fn welschinger_degree(k: u32, l: u32) -> Option<u32> {
    let n = k + 2 * l + 1;
    (n % 3 == 0).then_some(n / 3)
}

pub fn welschinger_key(k: u32, l: u32) -> Result<InvariantKey, InvariantError> {
    let beta = welschinger_degree(k, l)
        .ok_or_else(|| InvariantError::InvalidKey(format!("k + 2l = {} is not 2 mod 3", k + 2 * l)))?;
    let key = InvariantKey::new(1, k, vec![0, 0, l], beta);
    key.validate()?;
    Ok(key)
}

/// Convert I_1(k, (0,0,l), beta) to W_{k,l} = (1/2)(-2)^l I.
pub fn welschinger_from_invariant(l: u32, value: &Scalar) -> Result<Scalar, InvariantError> {
    let w = value * scalar::powi(&scalar::int(-2), l as i64) / scalar::int(2);
    if !scalar::is_integer(&w) {
        return Err(InvariantError::NonIntegral(scalar::to_string(&w)));
    }
    Ok(w)
}

pub fn welschinger_via(k: u32, l: u32, route: Route) -> Result<Scalar, InvariantError> {
    let key = welschinger_key(k, l)?;
    let value = compute(&key, route)?;
    let s = value
        .as_scalar()
        .ok_or_else(|| InvariantError::NonPolynomialResult(format!("degree-0 key gave {}", value.value)))?;
    welschinger_from_invariant(l, &s)
}

/// Welschinger's signed count through k real points and l conjugate pairs.
pub fn welschinger(k: u32, l: u32) -> Result<Scalar, InvariantError> {
    welschinger_via(k, l, Route::Diagrams)
}

/// For keys of negative expected degree: is the invariant exactly zero?
pub fn vanishing_check(key: &InvariantKey) -> Result<bool, InvariantError> {
    key.validate()?;
    if key.expected_degree() >= 0 {
        return Err(InvariantError::PreconditionViolated(format!(
            "{key} has expected degree {}",
            key.expected_degree()
        )));
    }
    Ok(ogw_orbits(key)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RationalFunction, Variable};
    use crate::profiles::{contribution, enumerate_orbits, xi, SymbolicWeights};

    #[test]
    fn expected_degrees() {
        assert_eq!(InvariantKey::new(1, 2, vec![0, 0, 0], 1).expected_degree(), 0);
        for m in 1..=4u8 {
            let key = InvariantKey::new(m, 1, vec![0; 2 * m as usize + 1], 2);
            assert_eq!(key.expected_degree(), -4 * m as i64);
        }
        assert_eq!(InvariantKey::new(1, 17, vec![0, 0, 0], 6).expected_degree(), 0);
        assert_eq!(InvariantKey::new(1, 3, vec![0, 0, 0], 0).lambda_degree(), 2);
    }

    #[test]
    fn invalid_keys() {
        assert!(InvariantKey::new(1, 2, vec![0, 0, 0], 2).validate().is_err());
        assert!(InvariantKey::new(1, 1, vec![0, 0, 0], 0).validate().is_err());
        assert!(ogw(&InvariantKey::new(1, 2, vec![0, 0, 0], 2)).unwrap_err().is_invalid_key());
    }

    #[test]
    fn lines_through_two_points() {
        let key = InvariantKey::new(1, 2, vec![0, 0, 0], 1);
        for route in [Route::Labeled, Route::Orbits] {
            assert_eq!(compute(&key, route).unwrap().as_scalar(), Some(scalar::int(2)));
        }
        assert_eq!(welschinger(2, 0).unwrap(), scalar::int(1));
    }

    #[test]
    fn symbolic_profile_examples() {
        let w = SymbolicWeights::new(1, profiles::blocks::slot_truncation(2, &[0, 0, 0]));
        let lam = RationalFunction::var(Variable::Lambda(1));
        let inv_sq = lam.inv().unwrap().pow(2);
        let lines = enumerate_orbits(&InvariantKey::new(1, 2, vec![0, 0, 0], 1)).unwrap();
        for p in &lines {
            assert_eq!(contribution(&w, &p.profile).unwrap(), RationalFunction::one());
            let sign = if p.profile.odd_vertices[0].a == 1 { -1 } else { 1 };
            assert_eq!(xi(&w, &p.profile).unwrap(), RationalFunction::constant(scalar::frac(sign, 2)));
        }
        let relation = enumerate_orbits(&InvariantKey::new(1, 1, vec![0, 0, 0], 2)).unwrap();
        let mut single = RationalFunction::zero();
        let mut pair = RationalFunction::zero();
        for p in &relation {
            let c = contribution(&w, &p.profile).unwrap().scale(&p.weight);
            if p.profile.odd_vertices.is_empty() {
                single = single.add(&c);
            } else {
                pair = pair.add(&c);
            }
        }
        assert_eq!(single, inv_sq.neg());
        assert_eq!(pair, inv_sq);
    }

    #[test]
    fn relation_vanishes_small_m() {
        for m in 1..=3u8 {
            let key = InvariantKey::new(m, 1, vec![0; 2 * m as usize + 1], 2);
            assert!(vanishing_check(&key).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn conics() {
        for (k, l) in [(5, 0), (3, 1), (1, 2)] {
            assert_eq!(welschinger(k, l).unwrap(), scalar::int(1), "W_({k},{l})");
        }
    }
}
