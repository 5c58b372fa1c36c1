//! Point evaluation of Z_a(alpha_a/d) on the weight-restricted torus.
//!
//! The weights are moved off the restricted torus along a random direction,
//! alpha = rho_T(lambda) + eps * g, and every quantity is a Laurent series in
//! eps. The recursion only ever needs Z_j at hbar = (alpha_j - alpha_b)/d, so
//! the iteration runs on that finite table of points.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::recursion::RecursionData;
use super::{CorrelatorError, CorrelatorTrunc};
use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{AlgebraError, Laurent, LAURENT_DEFAULT_CAP};
use crate::series::Series;

const MAX_ATTEMPTS: u32 = 6;

/// Values Z_a(hbar = alpha_a/d) at one point of the restricted torus.
#[derive(Clone, Debug)]
pub struct NumericCorrelators {
    pub m: u8,
    pub trunc: CorrelatorTrunc,
    pub lambda: Vec<Scalar>,
    slots: BTreeMap<(u8, Scalar), Series<Scalar>>,
}

/// Restricted weights (0, lambda_1, .., lambda_m, -lambda_m, .., -lambda_1).
pub fn restricted_weights(lambda: &[Scalar]) -> Vec<Scalar> {
    let m = lambda.len();
    let mut out = vec![scalar::int(0); 2 * m + 1];
    for i in 1..=m {
        out[i] = lambda[i - 1].clone();
        out[2 * m + 1 - i] = -lambda[i - 1].clone();
    }
    out
}

type MemoKey = (CorrelatorTrunc, Vec<Scalar>, Vec<(u8, Scalar)>, u64);

/// Evaluations are exact, so repeated requests (other routes, other k) reuse them.
fn memo() -> &'static Mutex<HashMap<MemoKey, Arc<NumericCorrelators>>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Arc<NumericCorrelators>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

impl NumericCorrelators {
    /// Evaluate the requested slots (a, d) at `lambda`, memoized per process.
    pub fn evaluate(
        trunc: &CorrelatorTrunc,
        lambda: &[Scalar],
        slots: &[(u8, Scalar)],
        seed: u64,
    ) -> Result<Arc<Self>, CorrelatorError> {
        let key = (trunc.clone(), lambda.to_vec(), slots.to_vec(), seed);
        if let Some(hit) = memo().lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let fresh = Arc::new(Self::evaluate_uncached(trunc, lambda, slots, seed)?);
        memo().lock().unwrap().insert(key, fresh.clone());
        Ok(fresh)
    }

    fn evaluate_uncached(
        trunc: &CorrelatorTrunc,
        lambda: &[Scalar],
        slots: &[(u8, Scalar)],
        seed: u64,
    ) -> Result<Self, CorrelatorError> {
        let m = lambda.len() as u8;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cap = LAURENT_DEFAULT_CAP;
        let mut last = AlgebraError::PrecisionExhausted;
        for _ in 0..MAX_ATTEMPTS {
            let direction: Vec<Scalar> =
                (0..=2 * m).map(|_| scalar::int(rng.gen_range(1..=97))).collect();
            match Self::attempt(trunc, lambda, slots, &direction, cap) {
                Ok(values) => {
                    return Ok(NumericCorrelators { m, trunc: trunc.clone(), lambda: lambda.to_vec(), slots: values })
                }
                Err(AlgebraError::PrecisionExhausted) => {
                    cap *= 2;
                    last = AlgebraError::PrecisionExhausted;
                }
                Err(e @ AlgebraError::DivisionByZero) => last = e,
                Err(e) => return Err(e.into()),
            }
        }
        Err(last.into())
    }

    fn attempt(
        trunc: &CorrelatorTrunc,
        lambda: &[Scalar],
        slots: &[(u8, Scalar)],
        direction: &[Scalar],
        cap: usize,
    ) -> Result<BTreeMap<(u8, Scalar), Series<Scalar>>, AlgebraError> {
        let m = lambda.len() as u8;
        let base = restricted_weights(lambda);
        let alpha: Vec<Laurent> =
            base.iter().zip(direction).map(|(b, g)| Laurent::exact_poly(vec![b.clone(), g.clone()], cap)).collect();
        let data = RecursionData { m, alpha: alpha.clone(), spec: trunc.spec() };
        let n = data.n_points();
        let q_cap = trunc.q_cap;
        // nested points: Z_j at (alpha_j - alpha_b)/d
        let nested_hbar = |j: usize, b: usize, d: u32| alpha[j].sub(&alpha[b]).scale(&scalar::frac(1, d as i64));
        let zero = Series::zero(&data.spec);
        let mut table: HashMap<(usize, usize, u32), Series<Laurent>> = HashMap::new();
        let lookup_in = |table: &HashMap<(usize, usize, u32), Series<Laurent>>, a: usize, j: usize, d: u32| {
            table.get(&(j, a, d)).cloned().unwrap_or_else(|| zero.clone())
        };
        if q_cap > 0 {
            for _ in 0..trunc.iteration_bound() {
                let mut next = HashMap::new();
                for j in 0..n {
                    for b in 0..n {
                        if b == j {
                            continue;
                        }
                        for d in 1..=q_cap {
                            let h = nested_hbar(j, b, d);
                            let v = data.apply(j, &h, &|k, e| Ok(lookup_in(&table, j, k, e)))?;
                            next.insert((j, b, d), v);
                        }
                    }
                }
                // the map is Q-adic: once a pass changes nothing, the table is the fixed point
                let settled = next.len() == table.len()
                    && next.iter().all(|(k, v)| table.get(k).is_some_and(|old| old.terms == v.terms));
                table = next;
                if settled {
                    break;
                }
            }
        }
        let mut out = BTreeMap::new();
        for (a, d) in slots {
            let a_idx = *a as usize;
            let h = alpha[a_idx].scale(&d.recip());
            let v = data.apply(a_idx, &h, &|k, e| Ok(lookup_in(&table, a_idx, k, e)))?;
            out.insert((*a, d.clone()), v.try_map(|c| c.regular_value())?);
        }
        Ok(out)
    }

    pub fn slot(&self, a: u8, d: &Scalar) -> Option<&Series<Scalar>> {
        self.slots.get(&(a, d.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{correlator_at, CorrelatorTrunc};
    use super::*;
    use crate::algebra::Variable;

    #[test]
    fn agrees_with_symbolic_route_m1() {
        let trunc = CorrelatorTrunc::new(2, vec![1, 0, 1]);
        let lam = vec![scalar::frac(3, 2)];
        let slots = vec![(1u8, scalar::frac(1, 2)), (2, scalar::int(1)), (1, scalar::frac(3, 2))];
        let num = NumericCorrelators::evaluate(&trunc, &lam, &slots, 7).unwrap();
        let at = |v: Variable| (v == Variable::Lambda(1)).then(|| lam[0].clone());
        for (a, d) in &slots {
            let sym = correlator_at(1, *a, d, &trunc).unwrap();
            let got = num.slot(*a, d).unwrap();
            for (e, c) in &sym.terms {
                assert_eq!(&c.eval_at(&at).unwrap(), &got.coeff(e), "a={a} d={d} e={e:?}");
            }
            for (e, c) in &got.terms {
                assert_eq!(c, &sym.coeff(e).eval_at(&at).unwrap(), "a={a} d={d} e={e:?}");
            }
        }
    }

    #[test]
    fn q_eta2_coefficient() {
        let trunc = CorrelatorTrunc::new(1, vec![0, 0, 1]);
        let num = NumericCorrelators::evaluate(&trunc, &[scalar::int(1)], &[(1, scalar::frac(1, 2))], 1).unwrap();
        assert_eq!(num.slot(1, &scalar::frac(1, 2)).unwrap().coeff(&[1, 0, 0, 1]), scalar::frac(3, 8));
    }
}
