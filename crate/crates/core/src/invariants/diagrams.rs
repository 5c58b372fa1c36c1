//! The invariant as a coefficient of a connected tree-diagram generating function.
//!
//! Vertices are odd discs and ghost discs; ghost discs are weighted by the disc
//! free energy with s_0 -> -(s lambda + incoming odd branches). Unrooted trees
//! are counted as vertex-rooted minus edge-rooted trees, which is exact because
//! every edge joins an odd vertex to an even one. Coefficients are Gaussian
//! rationals; the phase i^{(m+1) w_1} is divided out at the end.

use num_traits::Zero;

use super::{InvariantError, InvariantKey, DEFAULT_SEED};
use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{Field, GaussianScalar, Ring};
use crate::descendents::f0_coeff;
use crate::profiles::blocks::{leg_factor, odd_disc_factor};
use crate::profiles::{PointWeights, SphereLeg, WeightModel};
use crate::series::{Series, SeriesVariable, TruncationSpec};

type G = GaussianScalar;

struct TreeSeries<'a> {
    key: &'a InvariantKey,
    spec: TruncationSpec,
    lambda_product: Scalar,
    /// s * lambda_1...lambda_m
    boundary: Series<G>,
    /// t_b insertions: eta_0 plus legs for b = 0, legs only for b > 0
    insertions: Vec<Series<G>>,
    /// odd discs: weight times tail, and the per-edge factor
    odd: Vec<(Series<G>, G)>,
}

impl<'a> TreeSeries<'a> {
    fn new(key: &'a InvariantKey, w: &PointWeights) -> Result<Self, InvariantError> {
        let m = key.m;
        let mut pairs = vec![(SeriesVariable::Q, key.beta), (SeriesVariable::S, key.k)];
        for (i, l) in key.lvec.iter().enumerate() {
            pairs.push((SeriesVariable::Eta(i as u8), *l));
        }
        let spec = TruncationSpec::new(&pairs);
        let lambda_product: Scalar = w.lambda.iter().product();
        let boundary =
            Series::monomial(&spec, unit(&spec, 1), G::real(lambda_product.clone()));
        let tail = |a: u8, d: &Scalar, q_shift: u32| -> Result<Series<G>, InvariantError> {
            let z = w.correlators.slot(a, d).ok_or_else(|| {
                InvariantError::NonPolynomialResult(format!("missing correlator slot ({a}, {d})"))
            })?;
            let mut out = Series::zero(&spec);
            for (e, c) in &z.terms {
                let mut exps = vec![2 * e[0] + q_shift, 0];
                exps.extend_from_slice(&e[1..]);
                if spec.admits(&exps) {
                    out.add_term(exps, G::real(c.clone()));
                }
            }
            Ok(out)
        };
        // legs, grouped by their descendant index b
        let n_max = (key.lvec[0] + key.beta / 2) as i64;
        let k_max = (key.k + key.beta) as i64;
        let b_max = ((2 * n_max + k_max - 3) / 2).max(0) as u32;
        let mut insertions = vec![Series::zero(&spec); b_max as usize + 1];
        if key.lvec[0] > 0 {
            insertions[0] = Series::monomial(&spec, unit(&spec, 2), G::r_one());
        }
        for a in 1..=2 * m {
            for d in 1..=key.beta / 2 {
                let leg = SphereLeg { d, a, d_tilde: 0, c: Vec::new() };
                let base = tail(a, &scalar::int(d as i64), 2 * d)?.scale_scalar(&leg_factor(w, &leg)?);
                let ratio = -scalar::int(d as i64) / w.alpha(a);
                let mut power = ratio.clone();
                for slot in insertions.iter_mut() {
                    *slot = slot.add(&base.scale_scalar(&power));
                    power *= &ratio;
                }
            }
        }
        let phase = G::i_pow(1 + m as i64);
        let mut odd = Vec::new();
        for beta0 in (1..=key.beta).step_by(2) {
            for a in 1..=2 * m {
                let weight = odd_disc_factor(w, beta0, a)?;
                let series = tail(a, &scalar::frac(beta0 as i64, 2), beta0)?.scale(&phase.scale(&weight));
                let edge = scalar::frac(beta0 as i64, 2) * &lambda_product / w.alpha(a);
                odd.push((series, G::real(edge)));
            }
        }
        Ok(TreeSeries { key, spec, lambda_product, boundary, insertions, odd })
    }

    /// The disc free energy and its s_0-derivative at s_0 = x, t_b = insertions[b].
    fn free_energy(&self, x: &Series<G>) -> (Series<G>, Series<G>) {
        let k_max = (self.key.k + self.key.beta) as usize;
        let n_max = (self.key.lvec[0] + self.key.beta / 2) as usize;
        let mut by_k = vec![Series::zero(&self.spec); k_max + 1];
        let mut chosen = Vec::new();
        self.insertion_products(0, n_max, &Series::one(&self.spec), &mut chosen, &mut by_k);
        let mut value = Series::zero(&self.spec);
        let mut derivative = Series::zero(&self.spec);
        let mut power = Series::one(&self.spec); // x^j / j!
        for (k, a_k) in by_k.iter().enumerate() {
            if k > 0 {
                derivative = derivative.add(&power.mul(a_k));
                power = power.mul(x).scale_scalar(&scalar::frac(1, k as i64));
            }
            value = value.add(&power.mul(a_k));
        }
        (value, derivative)
    }

    /// Accumulate prod t_b^{n_b}/n_b! times the disc bracket into the slot of its forced s_0 power.
    fn insertion_products(
        &self,
        start: usize,
        room: usize,
        product: &Series<G>,
        chosen: &mut Vec<u32>,
        by_k: &mut [Series<G>],
    ) {
        let n = chosen.len() as i64;
        let sum: i64 = chosen.iter().map(|b| *b as i64).sum();
        let k = 2 * sum - 2 * n + 3;
        if k >= 1 && (k as usize) < by_k.len() {
            let f0 = f0_coeff(chosen, 0, k as u32);
            if !f0.is_zero() {
                by_k[k as usize] = by_k[k as usize].add(&product.scale_scalar(&f0));
            }
        }
        if room == 0 {
            return;
        }
        for b in start..self.insertions.len() {
            if self.insertions[b].is_zero() {
                continue;
            }
            // run length of b so far, for the 1/n_b! weights
            let run = chosen.iter().rev().take_while(|x| **x as usize == b).count() as i64;
            let next = product.mul(&self.insertions[b]).scale_scalar(&scalar::frac(1, run + 1));
            if next.is_zero() {
                continue;
            }
            chosen.push(b as u32);
            self.insertion_products(b, room - 1, &next, chosen, by_k);
            chosen.pop();
        }
    }

    fn ghost_argument(&self, planted_odd: &Series<G>) -> Series<G> {
        self.boundary.add(planted_odd).scale(&G::real(-scalar::int(1)))
    }

    /// Connected tree sum.
    fn connected(&self) -> Result<Series<G>, InvariantError> {
        let inv_lambda = G::real(self.lambda_product.recip());
        let mut planted_odd = Series::zero(&self.spec);
        let mut planted_even = Series::zero(&self.spec);
        let bound = self.key.beta + 3;
        let mut converged = false;
        for _ in 0..bound {
            let (_, d_free) = self.free_energy(&self.ghost_argument(&planted_odd));
            let next_even = d_free.scale(&inv_lambda.negated());
            let mut next_odd = Series::zero(&self.spec);
            for (w, edge) in &self.odd {
                let branch = next_even.scale(edge).exp().map_err(series_error)?;
                next_odd = next_odd.add(&w.mul(&branch).scale(edge));
            }
            let stable = next_odd.terms == planted_odd.terms && next_even.terms == planted_even.terms;
            planted_odd = next_odd;
            planted_even = next_even;
            if stable {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(InvariantError::NonPolynomialResult("planted series did not stabilise".into()));
        }
        let (free, _) = self.free_energy(&self.ghost_argument(&planted_odd));
        let mut rooted = free.scale(&inv_lambda);
        for (w, edge) in &self.odd {
            rooted = rooted.add(&w.mul(&planted_even.scale(edge).exp().map_err(series_error)?));
        }
        Ok(rooted.sub(&planted_odd.mul(&planted_even)))
    }
}

fn series_error(e: crate::series::SeriesError) -> InvariantError {
    InvariantError::NonPolynomialResult(e.to_string())
}

fn unit(spec: &TruncationSpec, index: usize) -> Vec<u32> {
    let mut e = vec![0; spec.vars.len()];
    e[index] = 1;
    e
}

/// The invariant at lambda, computed from the connected tree sum.
pub fn evaluate_at(key: &InvariantKey, lambda: &[Scalar]) -> Result<Scalar, InvariantError> {
    key.validate()?;
    let w = PointWeights::new(lambda, key.beta, &key.lvec, DEFAULT_SEED)?;
    let trees = TreeSeries::new(key, &w)?;
    let total = trees.connected()?;
    let mut exps = vec![key.beta, key.k];
    exps.extend_from_slice(&key.lvec);
    let mut labels = scalar::factorial_q(key.k as u64);
    for l in &key.lvec {
        labels *= scalar::factorial_q(*l as u64);
    }
    let phase = G::i_pow(((key.m as i64) + 1) * key.w1() as i64);
    let value = total.coeff(&exps).scale(&labels).over(&phase)?;
    if !value.is_real() {
        return Err(InvariantError::NonReal(format!("{value:?}")));
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_anchor() {
        let key = InvariantKey::new(1, 2, vec![0, 0, 0], 1);
        assert_eq!(evaluate_at(&key, &[scalar::int(1)]).unwrap(), scalar::int(2));
    }

    #[test]
    fn relation_and_conic() {
        let key = InvariantKey::new(1, 1, vec![0, 0, 0], 2);
        assert_eq!(evaluate_at(&key, &[scalar::int(3)]).unwrap(), scalar::int(0));
        let key = InvariantKey::new(1, 5, vec![0, 0, 0], 2);
        assert_eq!(evaluate_at(&key, &[scalar::int(1)]).unwrap(), scalar::int(2));
    }
}
