//! Constraint correlators Z_a(hbar) as fixed points of the contracting recursion.
//!
//! The symbolic driver works over rational functions in the full torus weights
//! and hbar; the numeric driver evaluates at a point of the weight-restricted
//! torus through a Laurent perturbation, since individual summands of the
//! recursion are singular there while the assembled values are not.

pub mod numeric;
pub mod recursion;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{AlgebraError, RationalFunction, Substitution, Variable};
use crate::series::{Series, SeriesVariable, TruncationSpec};

pub use numeric::NumericCorrelators;
use recursion::RecursionData;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CorrelatorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid correlator key: {0}")]
    InvalidKey(String),
    #[error("iteration did not reach a fixed point after {0} steps")]
    NoFixedPoint(u32),
}

/// Caps on Q and on each eta_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrelatorTrunc {
    pub q_cap: u32,
    pub eta_caps: Vec<u32>,
}

impl CorrelatorTrunc {
    pub fn new(q_cap: u32, eta_caps: Vec<u32>) -> Self {
        CorrelatorTrunc { q_cap, eta_caps }
    }

    pub fn eta_free(m: u8, q_cap: u32) -> Self {
        CorrelatorTrunc { q_cap, eta_caps: vec![0; 2 * m as usize + 1] }
    }

    pub fn spec(&self) -> TruncationSpec {
        let mut pairs = vec![(SeriesVariable::BigQ, self.q_cap)];
        for (i, c) in self.eta_caps.iter().enumerate() {
            pairs.push((SeriesVariable::Eta(i as u8), *c));
        }
        TruncationSpec::new(&pairs)
    }

    /// Iterations from zero sufficient for the (Q, eta)-adic contraction.
    pub fn iteration_bound(&self) -> u32 {
        self.q_cap + self.eta_caps.iter().sum::<u32>() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrelatorKey {
    pub m: u8,
    pub a: u8,
    pub trunc: CorrelatorTrunc,
}

impl CorrelatorKey {
    pub fn validate(&self) -> Result<(), CorrelatorError> {
        if self.m == 0 || self.a > 2 * self.m || self.trunc.eta_caps.len() != 2 * self.m as usize + 1 {
            return Err(CorrelatorError::InvalidKey(format!("{self:?}")));
        }
        Ok(())
    }
}

/// Series in Q, eta_0..eta_2m with rational-function coefficients.
pub type Correlator = Series<RationalFunction>;

/// Linear images of the torus weights used by the symbolic driver.
#[derive(Clone, Debug)]
pub struct WeightImages {
    pub raw: Vec<Vec<(Variable, Scalar)>>,
}

impl WeightImages {
    /// alpha_a stays the variable alpha_a.
    pub fn generic(m: u8) -> Self {
        WeightImages { raw: (0..=2 * m).map(|a| vec![(Variable::Alpha(a), scalar::int(1))]).collect() }
    }

    /// alpha_a -> c_a * lambda_1: a one-parameter subtorus.
    pub fn subtorus(c: &[Scalar]) -> Self {
        WeightImages { raw: c.iter().map(|x| vec![(Variable::Lambda(1), x.clone())]).collect() }
    }

    fn alpha(&self, a: usize) -> RationalFunction {
        RationalFunction::linear(self.raw[a].clone())
    }

    /// hbar -> (alpha_j - alpha_a)/d, or alpha_a/d for the final substitution.
    fn hbar_image(&self, plus: Option<usize>, minus: Option<usize>, d: &Scalar) -> Substitution {
        let mut raw = Vec::new();
        if let Some(j) = plus {
            raw.extend(self.raw[j].iter().map(|(v, c)| (*v, c / d)));
        }
        if let Some(a) = minus {
            raw.extend(self.raw[a].iter().map(|(v, c)| (*v, -c / d)));
        }
        let mut s = Substitution::new();
        s.set(Variable::Hbar, raw);
        s
    }
}

/// Symbolic recursion over rational functions.
pub struct SymbolicCorrelators {
    pub m: u8,
    pub trunc: CorrelatorTrunc,
    pub weights: WeightImages,
    data: RecursionData<RationalFunction>,
}

fn substitute_series(z: &Correlator, s: &Substitution) -> Result<Correlator, AlgebraError> {
    z.try_map(|c| c.substitute(s))
}

pub fn series_equal(a: &Correlator, b: &Correlator) -> bool {
    let keys: std::collections::BTreeSet<&Vec<u32>> = a.terms.keys().chain(b.terms.keys()).collect();
    keys.into_iter().all(|k| a.coeff(k) == b.coeff(k))
}

impl SymbolicCorrelators {
    pub fn new(m: u8, trunc: CorrelatorTrunc, weights: WeightImages) -> Self {
        let spec = trunc.spec();
        let alpha = (0..=2 * m as usize).map(|a| weights.alpha(a)).collect();
        SymbolicCorrelators { m, trunc, weights, data: RecursionData { m, alpha, spec } }
    }

    pub fn generic(m: u8, trunc: CorrelatorTrunc) -> Self {
        Self::new(m, trunc, WeightImages::generic(m))
    }

    pub fn zero_tuple(&self) -> Vec<Correlator> {
        vec![Series::zero(&self.data.spec); self.data.n_points()]
    }

    pub fn z0(&self, a: usize) -> Result<Correlator, CorrelatorError> {
        Ok(self.data.z0(a, &RationalFunction::var(Variable::Hbar))?)
    }

    /// One application of the recursion map to a tuple (Z_0, ..., Z_2m).
    pub fn recursion_step(&self, current: &[Correlator]) -> Result<Vec<Correlator>, CorrelatorError> {
        let n = self.data.n_points();
        let mut nested: HashMap<(usize, usize, u32), Correlator> = HashMap::new();
        for a in 0..n {
            for j in 0..n {
                if j == a || current[j].is_zero() {
                    continue;
                }
                for d in 1..=self.trunc.q_cap {
                    let sub = self.weights.hbar_image(Some(j), Some(a), &scalar::int(d as i64));
                    nested.insert((a, j, d), substitute_series(&current[j], &sub)?);
                }
            }
        }
        let hbar = RationalFunction::var(Variable::Hbar);
        let zero = Series::zero(&self.data.spec);
        (0..n)
            .map(|a| {
                let lookup = |j: usize, d: u32| Ok(nested.get(&(a, j, d)).cloned().unwrap_or_else(|| zero.clone()));
                self.data.apply(a, &hbar, &lookup).map_err(CorrelatorError::from)
            })
            .collect()
    }

    /// Fixed point reached from zero, with the post-hoc invariance assertion.
    pub fn fixed_point(&self) -> Result<Vec<Correlator>, CorrelatorError> {
        let mut z = self.zero_tuple();
        let bound = self.trunc.iteration_bound();
        for _ in 0..bound {
            z = self.recursion_step(&z)?;
        }
        let again = self.recursion_step(&z)?;
        if !z.iter().zip(&again).all(|(x, y)| series_equal(x, y)) {
            return Err(CorrelatorError::NoFixedPoint(bound));
        }
        Ok(z)
    }
}

/// Z^0 for a single key.
pub fn z0(key: &CorrelatorKey) -> Result<Correlator, CorrelatorError> {
    key.validate()?;
    SymbolicCorrelators::generic(key.m, key.trunc.clone()).z0(key.a as usize)
}

/// One step of the map applied to `current`.
pub fn recursion_step(m: u8, trunc: &CorrelatorTrunc, current: &[Correlator]) -> Result<Vec<Correlator>, CorrelatorError> {
    SymbolicCorrelators::generic(m, trunc.clone()).recursion_step(current)
}

/// The full tuple (Z_0, ..., Z_2m) over generic weights.
pub fn correlator_tuple(m: u8, trunc: &CorrelatorTrunc) -> Result<Vec<Correlator>, CorrelatorError> {
    SymbolicCorrelators::generic(m, trunc.clone()).fixed_point()
}

pub fn correlator(key: &CorrelatorKey) -> Result<Correlator, CorrelatorError> {
    key.validate()?;
    let mut tuple = correlator_tuple(key.m, &key.trunc)?;
    Ok(tuple.swap_remove(key.a as usize))
}

/// Z_a(hbar = alpha_a/d) after the weight restriction, as a series over rational functions in lambda.
pub fn correlator_at(m: u8, a: u8, d: &Scalar, trunc: &CorrelatorTrunc) -> Result<Correlator, CorrelatorError> {
    let key = CorrelatorKey { m, a, trunc: trunc.clone() };
    key.validate()?;
    if a == 0 || d <= &Scalar::from_integer(0.into()) || (d * scalar::int(2)).denom() != &1.into() {
        return Err(CorrelatorError::InvalidKey(format!("a={a}, d={d}")));
    }
    let z = correlator(&key)?;
    let weights = WeightImages::generic(m);
    let at = substitute_series(&z, &weights.hbar_image(Some(a as usize), None, d))?;
    Ok(substitute_series(&at, &Substitution::rho_t(m))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(a: u8) -> RationalFunction {
        RationalFunction::var(Variable::Alpha(a))
    }

    #[test]
    fn z0_examples() {
        let key = CorrelatorKey { m: 1, a: 1, trunc: CorrelatorTrunc::new(0, vec![2, 1, 0]) };
        let z = z0(&key).unwrap();
        assert_eq!(z.coeff(&[0, 0, 0, 0]), RationalFunction::var(Variable::Hbar));
        assert_eq!(z.extract(&[0, 0, 1, 0]).unwrap(), alpha(1));
        let h_inv = RationalFunction::var(Variable::Hbar).inv().unwrap();
        assert_eq!(z.extract(&[0, 2, 0, 0]).unwrap(), h_inv);
    }

    #[test]
    fn q_cap_zero_is_z0() {
        let key = CorrelatorKey { m: 1, a: 2, trunc: CorrelatorTrunc::new(0, vec![1, 1, 1]) };
        assert!(series_equal(&correlator(&key).unwrap(), &z0(&key).unwrap()));
    }

    #[test]
    fn first_instanton_coefficient_matches_hand_expansion() {
        let trunc = CorrelatorTrunc::eta_free(1, 1);
        let sym = SymbolicCorrelators::generic(1, trunc.clone());
        let f1 = sym.recursion_step(&sym.zero_tuple()).unwrap();
        let f2 = sym.recursion_step(&f1).unwrap();
        let h = RationalFunction::var(Variable::Hbar);
        let mut expect = RationalFunction::zero();
        for j in [0u8, 2] {
            let k = 2 - j;
            let vertex = alpha(1).sub(&alpha(0)).mul(&alpha(1).sub(&alpha(2)));
            let shift = h.add(&alpha(1)).sub(&alpha(j));
            let edge_inv = alpha(1)
                .sub(&alpha(j))
                .inv()
                .unwrap()
                .pow(2)
                .mul(&alpha(j).sub(&alpha(k)).inv().unwrap())
                .mul(&alpha(1).sub(&alpha(k)).inv().unwrap());
            let term = vertex
                .mul(&shift.inv().unwrap())
                .mul(&edge_inv)
                .scale(&scalar::int(-1))
                .mul(&alpha(j).sub(&alpha(1)));
            expect = expect.add(&term);
        }
        assert_eq!(f2[1].coeff(&[1, 0, 0, 0]), expect);
        let fixed = correlator(&CorrelatorKey { m: 1, a: 1, trunc }).unwrap();
        assert_eq!(fixed.coeff(&[1, 0, 0, 0]), expect);
    }

    #[test]
    fn substituted_values() {
        let trunc = CorrelatorTrunc::eta_free(1, 0);
        for a in 1..=2u8 {
            let lam = RationalFunction::var(Variable::Lambda(1)).scale(&scalar::int(if a == 1 { 1 } else { -1 }));
            let half = correlator_at(1, a, &scalar::frac(1, 2), &trunc).unwrap();
            assert_eq!(half.coeff(&[0, 0, 0, 0]), lam.scale(&scalar::int(2)));
            let one = correlator_at(1, a, &scalar::int(1), &trunc).unwrap();
            assert_eq!(one.coeff(&[0, 0, 0, 0]), lam);
        }
    }

    #[test]
    fn weight_swap_symmetry_with_eta() {
        // Z_1 and Z_2 exchange under lambda -> -lambda
        let trunc = CorrelatorTrunc::new(1, vec![0, 0, 2]);
        let z1 = correlator_at(1, 1, &scalar::frac(1, 2), &trunc).unwrap();
        let z2 = correlator_at(1, 2, &scalar::frac(1, 2), &trunc).unwrap();
        let mut flip = Substitution::new();
        flip.set(Variable::Lambda(1), [(Variable::Lambda(1), scalar::int(-1))]);
        for (e, c) in &z1.terms {
            assert_eq!(c.substitute(&flip).unwrap(), z2.coeff(e), "exponent {e:?}");
        }
        // Q eta_2 coefficient at lambda = 1 is 3/8
        let at = |v: Variable| (v == Variable::Lambda(1)).then(|| scalar::int(1));
        assert_eq!(z1.coeff(&[1, 0, 0, 1]).eval_at(&at).unwrap(), scalar::frac(3, 8));
    }
}
