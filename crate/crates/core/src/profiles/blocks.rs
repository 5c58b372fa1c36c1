//! The four factor blocks of a sorted profile's fixed-point contribution.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use super::{EvenVertex, OddVertex, Profile, ProfileError, SphereLeg};
use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{Field, RationalFunction, Ring, Variable};

use crate::correlators::{self, Correlator, CorrelatorTrunc, NumericCorrelators};
use crate::descendents::f0_coeff;

/// Restricted torus weights and correlator slot values in some coefficient field.
pub trait WeightModel {
    type F: Field;
    fn m(&self) -> u8;
    /// rho_T(alpha_a).
    fn alpha(&self, a: u8) -> Self::F;
    /// Plain Q^{d_tilde} coefficient of Z_a(alpha_a/d), derivative-extracted in the eta's.
    fn slot(&self, a: u8, d: &Scalar, d_tilde: u32, c: &[u32]) -> Result<Self::F, ProfileError>;

    /// (lambda_1 ... lambda_m)^e, inverting one linear factor at a time.
    fn lambda_power(&self, e: i64) -> Result<Self::F, ProfileError> {
        let mut out = Self::F::r_one();
        for i in 1..=self.m() {
            let base = if e < 0 { self.alpha(i).inverse()? } else { self.alpha(i) };
            out = out.times(&base.power(e.unsigned_abs() as u32));
        }
        Ok(out)
    }
}

fn conjugate(m: u8, a: u8) -> u8 {
    2 * m + 1 - a
}

/// (-1)^{C(n_odd, 2)(1 + m)}.
pub fn global_sign(n_odd: usize, m: u8) -> Scalar {
    let pairs = (n_odd * n_odd.saturating_sub(1) / 2) as u64;
    scalar::sign(pairs * (1 + m as u64))
}

/// P-sphere factor of a leg, without its tail.
pub fn leg_factor<W: WeightModel>(w: &W, leg: &SphereLeg) -> Result<W::F, ProfileError> {
    let m = w.m();
    let d = leg.d as u64;
    let alpha_a = w.alpha(leg.a);
    let num = scalar::sign(d)
        * Scalar::from_integer(num_bigint::BigInt::from(d).pow(2 * leg.d - 1))
        / (scalar::factorial_q(d) * scalar::factorial_q(d));
    let mut out = alpha_a.inverse()?.power(2 * leg.d).scaled(&num);
    for b in 1..=2 * m {
        out = out.times(&w.alpha(b));
    }
    for b in 1..=2 * m {
        if b == leg.a {
            continue;
        }
        for c in 0..=leg.d {
            let factor = alpha_a.scaled(&scalar::frac(c as i64, leg.d as i64)).minus(&w.alpha(b));
            out = out.times(&factor.inverse()?);
        }
    }
    Ok(out)
}

/// Ghost-disc factor including its legs and leg tails.
pub fn even_factor<W: WeightModel>(w: &W, v: &EvenVertex) -> Result<W::F, ProfileError> {
    let mut out = w.lambda_power(v.k_hat as i64 - 1)?;
    let boundary = v.k_hat + v.edge_heads;
    let twice = 2 * (v.legs.len() as i64 + v.l0 as i64) + boundary as i64 - 3;
    let mut bsum = W::F::r_zero();
    if twice >= 0 && twice % 2 == 0 {
        let total = (twice / 2) as u32;
        let ratios: Vec<W::F> = v
            .legs
            .iter()
            .map(|leg| Ok(w.alpha(leg.a).inverse()?.scaled(&-scalar::int(leg.d as i64))))
            .collect::<Result<_, ProfileError>>()?;
        for b in compositions(total, v.legs.len()) {
            let f0 = f0_coeff(&b, v.l0, boundary);
            if f0.is_zero() {
                continue;
            }
            let mut term = W::F::of(&f0);
            for (r, bj) in ratios.iter().zip(&b) {
                term = term.times(&r.power(bj + 1));
            }
            bsum = bsum.plus(&term);
        }
    }
    out = out.times(&bsum);
    for leg in &v.legs {
        if out.is_nil() {
            break;
        }
        let slot = w.slot(leg.a, &scalar::int(leg.d as i64), leg.d_tilde, &leg.c)?;
        out = out.times(&leg_factor(w, leg)?).times(&slot);
    }
    Ok(out)
}

/// Odd-disc factor without its tail and edges.
pub fn odd_disc_factor<W: WeightModel>(w: &W, beta0: u32, a: u8) -> Result<W::F, ProfileError> {
    let m = w.m();
    let alpha_a = w.alpha(a);
    let num = Scalar::from_integer(num_bigint::BigInt::from(beta0).pow(beta0 - 1)) / scalar::factorial_q(beta0 as u64);
    let mut out = alpha_a.scaled(&scalar::int(2)).inverse()?.power(beta0).scaled(&num);
    for b in 0..=2 * m {
        if b == a || b == conjugate(m, a) {
            continue;
        }
        for c in 0..=(beta0 - 1) / 2 {
            let ratio = scalar::frac(2 * c as i64 - beta0 as i64, beta0 as i64);
            out = out.times(&alpha_a.scaled(&ratio).minus(&w.alpha(b)).inverse()?);
        }
    }
    Ok(out)
}

/// Odd-disc factor including its tail and the xi share of its edges.
pub fn odd_factor<W: WeightModel>(w: &W, v: &OddVertex) -> Result<W::F, ProfileError> {
    let out = odd_disc_factor(w, v.beta0, v.a)?.times(&odd_xi(w, v)?);
    let slot = w.slot(v.a, &scalar::frac(v.beta0 as i64, 2), v.d_tilde, &v.c)?;
    Ok(out.times(&slot))
}

fn odd_xi<W: WeightModel>(w: &W, v: &OddVertex) -> Result<W::F, ProfileError> {
    let base = w.lambda_power(1)?.times(&w.alpha(v.a).inverse()?).scaled(&scalar::frac(-(v.beta0 as i64), 2));
    Ok(base.power(v.degree))
}

/// prod over odd vertices of ((beta0/2)(-lambda_1...lambda_m/alpha_a))^deg.
pub fn xi<W: WeightModel>(w: &W, profile: &Profile) -> Result<W::F, ProfileError> {
    let mut out = W::F::r_one();
    for v in &profile.odd_vertices {
        out = out.times(&odd_xi(w, v)?);
    }
    Ok(out)
}

/// Exact contribution of a sorted profile (no point multinomial, no orbit weight).
pub fn contribution<W: WeightModel>(w: &W, profile: &Profile) -> Result<W::F, ProfileError> {
    let mut out = W::F::of(&global_sign(profile.odd_vertices.len(), w.m()));
    for v in &profile.odd_vertices {
        out = out.times(&odd_factor(w, v)?);
    }
    for v in &profile.even_vertices {
        out = out.times(&even_factor(w, v)?);
    }
    Ok(out)
}

/// Compositions of `total` into `parts` non-negative parts.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Memoized vertex factors for repeated contributions over one weight model.
pub struct VertexCache<'w, W: WeightModel> {
    pub model: &'w W,
    odd: RefCell<HashMap<OddVertex, W::F>>,
    even: RefCell<HashMap<EvenVertex, W::F>>,
}

impl<'w, W: WeightModel> VertexCache<'w, W> {
    pub fn new(model: &'w W) -> Self {
        VertexCache { model, odd: RefCell::new(HashMap::new()), even: RefCell::new(HashMap::new()) }
    }

    pub fn odd(&self, v: &OddVertex) -> Result<W::F, ProfileError> {
        if let Some(x) = self.odd.borrow().get(v) {
            return Ok(x.clone());
        }
        let x = odd_factor(self.model, v)?;
        self.odd.borrow_mut().insert(v.clone(), x.clone());
        Ok(x)
    }

    pub fn even(&self, v: &EvenVertex) -> Result<W::F, ProfileError> {
        if let Some(x) = self.even.borrow().get(v) {
            return Ok(x.clone());
        }
        let x = even_factor(self.model, v)?;
        self.even.borrow_mut().insert(v.clone(), x.clone());
        Ok(x)
    }

    pub fn contribution(&self, profile: &Profile) -> Result<W::F, ProfileError> {
        let mut out = W::F::of(&global_sign(profile.odd_vertices.len(), self.model.m()));
        for v in &profile.even_vertices {
            out = out.times(&self.even(v)?);
            if out.is_nil() {
                return Ok(out);
            }
        }
        for v in &profile.odd_vertices {
            out = out.times(&self.odd(v)?);
        }
        Ok(out)
    }
}

/// Correlator truncation sufficient for every slot of a key.
pub fn slot_truncation(beta: u32, lvec: &[u32]) -> CorrelatorTrunc {
    CorrelatorTrunc::new(beta.saturating_sub(1) / 2, lvec.to_vec())
}

/// Every (a, d) slot a profile of degree beta can use.
pub fn slot_points(m: u8, beta: u32) -> Vec<(u8, Scalar)> {
    let mut out = Vec::new();
    for a in 1..=2 * m {
        for d in 1..=beta / 2 {
            out.push((a, scalar::int(d as i64)));
        }
        for b0 in (1..=beta).step_by(2) {
            out.push((a, scalar::frac(b0 as i64, 2)));
        }
    }
    out
}

fn slot_exponents(d_tilde: u32, c: &[u32]) -> (Vec<u32>, Scalar) {
    let mut exps = vec![d_tilde];
    let mut fact = Scalar::from_integer(1.into());
    for x in c {
        exps.push(*x);
        fact *= scalar::factorial_q(*x as u64);
    }
    (exps, fact)
}

/// Symbolic weights: rational functions in lambda.
pub struct SymbolicWeights {
    pub m: u8,
    pub trunc: CorrelatorTrunc,
    slots: RefCell<HashMap<(u8, Scalar), Correlator>>,
}

impl SymbolicWeights {
    pub fn new(m: u8, trunc: CorrelatorTrunc) -> Self {
        SymbolicWeights { m, trunc, slots: RefCell::new(HashMap::new()) }
    }
}

impl WeightModel for SymbolicWeights {
    type F = RationalFunction;

    fn m(&self) -> u8 {
        self.m
    }

    fn alpha(&self, a: u8) -> RationalFunction {
        if a == 0 {
            RationalFunction::zero()
        } else if a <= self.m {
            RationalFunction::var(Variable::Lambda(a))
        } else {
            RationalFunction::var(Variable::Lambda(conjugate(self.m, a))).neg()
        }
    }

    fn slot(&self, a: u8, d: &Scalar, d_tilde: u32, c: &[u32]) -> Result<RationalFunction, ProfileError> {
        let key = (a, d.clone());
        if !self.slots.borrow().contains_key(&key) {
            let z = correlators::correlator_at(self.m, a, d, &self.trunc)?;
            self.slots.borrow_mut().insert(key.clone(), z);
        }
        let (exps, fact) = slot_exponents(d_tilde, c);
        if !self.trunc.spec().admits(&exps) {
            return Err(ProfileError::InvalidKey(format!("slot {exps:?} outside truncation")));
        }
        Ok(self.slots.borrow()[&key].coeff(&exps).scale(&fact))
    }
}

/// Weights at one point of the restricted torus.
pub struct PointWeights {
    pub m: u8,
    pub lambda: Vec<Scalar>,
    alpha: Vec<Scalar>,
    pub correlators: Arc<NumericCorrelators>,
}

impl PointWeights {
    pub fn new(lambda: &[Scalar], beta: u32, lvec: &[u32], seed: u64) -> Result<Self, ProfileError> {
        let m = lambda.len() as u8;
        let trunc = slot_truncation(beta, lvec);
        let correlators = NumericCorrelators::evaluate(&trunc, lambda, &slot_points(m, beta), seed)?;
        Ok(PointWeights {
            m,
            lambda: lambda.to_vec(),
            alpha: correlators::numeric::restricted_weights(lambda),
            correlators,
        })
    }
}

impl WeightModel for PointWeights {
    type F = Scalar;

    fn m(&self) -> u8 {
        self.m
    }

    fn alpha(&self, a: u8) -> Scalar {
        self.alpha[a as usize].clone()
    }

    fn slot(&self, a: u8, d: &Scalar, d_tilde: u32, c: &[u32]) -> Result<Scalar, ProfileError> {
        let series = self
            .correlators
            .slot(a, d)
            .ok_or_else(|| ProfileError::InvalidKey(format!("slot ({a}, {d}) was not evaluated")))?;
        let (exps, fact) = slot_exponents(d_tilde, c);
        Ok(series.coeff(&exps) * fact)
    }
}
