//! One application of the contracting correlator map, generic over the coefficient field.

use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{AlgebraError, Field};
use crate::series::{Series, SeriesVariable, TruncationSpec};

/// Torus weights and truncation shared by every vertex of the recursion.
pub struct RecursionData<F> {
    pub m: u8,
    pub alpha: Vec<F>,
    pub spec: TruncationSpec,
}

/// A sphere edge from vertex a to fixed point j with covering degree d.
struct Leg<F> {
    weight: F,
    series: Series<F>,
    degree: u32,
}

impl<F: Field> RecursionData<F> {
    pub fn n_points(&self) -> usize {
        2 * self.m as usize + 1
    }

    pub fn q_cap(&self) -> u32 {
        self.spec.index_of(SeriesVariable::BigQ).map_or(0, |i| self.spec.caps[i])
    }

    fn eta_total_cap(&self) -> u32 {
        self.spec
            .vars
            .iter()
            .zip(&self.spec.caps)
            .filter(|(v, _)| matches!(v, SeriesVariable::Eta(_)))
            .map(|(_, c)| *c)
            .sum()
    }

    /// sum_j eta_j alpha_a^j.
    fn eta_pairing(&self, a: usize) -> Series<F> {
        let mut out = Series::zero(&self.spec);
        for j in 0..self.n_points() {
            if let Some(i) = self.spec.index_of(SeriesVariable::Eta(j as u8)) {
                let mut e = vec![0; self.spec.vars.len()];
                e[i] = 1;
                out.add_term(e, self.alpha[a].power(j as u32));
            }
        }
        out
    }

    fn q_power(&self, d: u32) -> Series<F> {
        let mut e = vec![0; self.spec.vars.len()];
        if let Some(i) = self.spec.index_of(SeriesVariable::BigQ) {
            e[i] = d;
        }
        Series::monomial(&self.spec, e, F::r_one())
    }

    /// Z_a^0(hbar) = sum_n hbar^{1-n}/n! (sum_j eta_j alpha_a^j)^n.
    pub fn z0(&self, a: usize, hbar: &F) -> Result<Series<F>, AlgebraError> {
        let pairing = self.eta_pairing(a);
        let inv = hbar.inverse()?;
        let mut out = Series::constant(&self.spec, hbar.clone());
        let mut power = Series::one(&self.spec);
        let mut hpow = F::r_one();
        for n in 1..=self.eta_total_cap() {
            power = power.mul(&pairing).scale_scalar(&scalar::frac(1, n as i64));
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&hpow));
            hpow = hpow.times(&inv);
        }
        Ok(out)
    }

    /// (-1)^d d^{2d-1} / ((d!)^2 (alpha_a - alpha_j)^{2d} prod_{0<=w<=d, k != j,a} ((w/d) alpha_a + ((d-w)/d) alpha_j - alpha_k)).
    pub fn edge_factor(&self, a: usize, j: usize, d: u32) -> Result<F, AlgebraError> {
        // factors are inverted one at a time so rational-function inverses stay linear
        let diff_inv = self.alpha[a].minus(&self.alpha[j]).inverse()?;
        let mut out = diff_inv.power(2 * d);
        for w in 0..=d {
            let (fw, fr) = (scalar::frac(w as i64, d as i64), scalar::frac((d - w) as i64, d as i64));
            let point = self.alpha[a].scaled(&fw).plus(&self.alpha[j].scaled(&fr));
            for k in 0..self.n_points() {
                if k != j && k != a {
                    out = out.times(&point.minus(&self.alpha[k]).inverse()?);
                }
            }
        }
        let num = scalar::sign(d as u64)
            * Scalar::from_integer(num_bigint::BigInt::from(d).pow(2 * d - 1))
            / (scalar::factorial_q(d as u64) * scalar::factorial_q(d as u64));
        Ok(out.scaled(&num))
    }

    /// f_a evaluated at hbar, with `nested(j, d)` = Z_j((alpha_j - alpha_a)/d) from the previous iterate.
    pub fn apply(
        &self,
        a: usize,
        hbar: &F,
        nested: &dyn Fn(usize, u32) -> Result<Series<F>, AlgebraError>,
    ) -> Result<Series<F>, AlgebraError> {
        let mut out = self.z0(a, hbar)?;
        let q_cap = self.q_cap();
        if q_cap == 0 {
            return Ok(out);
        }
        let inv_h = hbar.inverse()?;
        // prod_{b != a} (alpha_b - alpha_a); equals prod (alpha_a - alpha_b) since there are 2m factors
        let mut vertex = F::r_one();
        for b in 0..self.n_points() {
            if b != a {
                vertex = vertex.times(&self.alpha[b].minus(&self.alpha[a]));
            }
        }
        let mut legs: Vec<Leg<F>> = Vec::new();
        for j in 0..self.n_points() {
            if j == a {
                continue;
            }
            for d in 1..=q_cap {
                let z = nested(j, d)?;
                if z.is_zero() {
                    continue;
                }
                let e = self.edge_factor(a, j, d)?;
                let series = z.mul(&self.q_power(d)).scale(&e);
                let diff = self.alpha[a].minus(&self.alpha[j]);
                let weight = F::of(&scalar::int(d as i64)).times(&diff.inverse()?);
                // single-edge term
                let shift = hbar.plus(&diff.scaled(&scalar::frac(1, d as i64)));
                out = out.add(&series.scale(&vertex.times(&shift.inverse()?)));
                legs.push(Leg { weight, series, degree: d });
            }
        }
        // multi-leg vertices: multisets of legs with total degree <= q_cap
        let pairing = self.eta_pairing(a);
        let eta_cap = self.eta_total_cap();
        let mut pairing_pows = vec![Series::one(&self.spec)];
        for n in 1..=eta_cap {
            let next = pairing_pows[n as usize - 1].mul(&pairing).scale_scalar(&scalar::frac(1, n as i64));
            pairing_pows.push(next);
        }
        let mut chosen: Vec<usize> = Vec::new();
        self.multisets(&legs, 0, q_cap, &mut chosen, &mut |picked| {
            let s = picked.len() as u32;
            let mut prod = Series::one(&self.spec);
            let mut wprod = F::r_one();
            let mut wsum = F::r_zero();
            let mut sym = Scalar::from_integer(1.into());
            let mut run = 1;
            for (idx, &i) in picked.iter().enumerate() {
                prod = prod.mul(&legs[i].series);
                wprod = wprod.times(&legs[i].weight);
                wsum = wsum.plus(&legs[i].weight);
                if idx > 0 && picked[idx - 1] == i {
                    run += 1;
                    sym /= scalar::int(run);
                } else {
                    run = 1;
                }
            }
            if prod.is_zero() {
                return Ok(());
            }
            let base = wsum.plus(&inv_h);
            let pre = vertex.power(s).times(&inv_h).times(&wprod).scaled(&sym);
            let mut total = Series::zero(&self.spec);
            for (n, pp) in pairing_pows.iter().enumerate() {
                let n = n as u32;
                if s + n < 2 || pp.is_zero() {
                    continue;
                }
                total = total.add(&pp.scale(&base.power(s + n - 2)));
            }
            out = out.add(&total.mul(&prod).scale(&pre));
            Ok(())
        })?;
        Ok(out)
    }

    fn multisets(
        &self,
        legs: &[Leg<F>],
        start: usize,
        budget: u32,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<(), AlgebraError>,
    ) -> Result<(), AlgebraError> {
        if !chosen.is_empty() {
            visit(chosen)?;
        }
        for i in start..legs.len() {
            if legs[i].degree <= budget {
                chosen.push(i);
                self.multisets(legs, i, budget - legs[i].degree, chosen, visit)?;
                chosen.pop();
            }
        }
        Ok(())
    }
}
