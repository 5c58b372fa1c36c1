//! Recover a homogeneous lambda-polynomial of known degree from point values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use num_traits::Zero;

use super::InvariantError;
use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{Monomial, Polynomial, Variable};

const MAX_REDRAWS: usize = 8;

/// Exponent vectors of total degree `degree` in `m` variables.
pub fn monomials(m: u8, degree: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if m == 1 {
        return vec![vec![degree]];
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials(m - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn monomial_value(exps: &[u32], point: &[Scalar]) -> Scalar {
    exps.iter().zip(point).map(|(e, x)| scalar::powi(x, *e as i64)).product()
}

fn to_monomial(exps: &[u32]) -> Monomial {
    Monomial(
        exps.iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| (Variable::Lambda(i as u8 + 1), *e))
            .collect(),
    )
}

/// Points with distinct nonzero coordinate magnitudes, so restricted weights stay distinct.
fn draw_point(m: u8, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let mut used = Vec::new();
    while used.len() < m as usize {
        let x: i64 = rng.gen_range(1..=97);
        if !used.contains(&x) {
            used.push(x);
        }
    }
    used.into_iter().map(scalar::int).collect()
}

/// Solve A x = y over the rationals; None if singular.
fn solve(mut a: Vec<Vec<Scalar>>, mut y: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let n = y.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        y.swap(col, pivot);
        let inv = a[col][col].recip();
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        y[col] = &y[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
                let sub = &f * &y[col];
                y[r] -= sub;
            }
        }
    }
    Some(y)
}

/// Interpolate the homogeneous polynomial of the given degree through `eval`, then verify at a fresh point.
/// A negative degree requires the values to vanish at two points.
pub fn reconstruct(
    m: u8,
    degree: i64,
    seed: u64,
    eval: &(dyn Fn(&[Scalar]) -> Result<Scalar, InvariantError> + Sync),
) -> Result<Polynomial, InvariantError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = if degree < 0 { Vec::new() } else { monomials(m, degree as u32) };
    let verify = if degree < 0 { 2 } else { 1 };
    let mut last = None;
    for attempt in 0..MAX_REDRAWS {
        let mut points: Vec<Vec<Scalar>> = Vec::new();
        if attempt == 0 && m == 1 {
            points.push(vec![scalar::int(1)]);
            points.push(vec![scalar::int(2)]);
            points.truncate(basis.len() + verify);
        }
        while points.len() < basis.len() + verify {
            points.push(draw_point(m, &mut rng));
        }
        let values: Vec<Result<Scalar, InvariantError>> = points.par_iter().map(|p| eval(p)).collect();
        let mut ok = Vec::new();
        for v in values {
            match v {
                Ok(x) => ok.push(x),
                Err(e) if e.is_degenerate_point() => {
                    last = Some(e);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if ok.len() < points.len() {
            continue;
        }
        let n = basis.len();
        let rows: Vec<Vec<Scalar>> = points[..n].iter().map(|p| basis.iter().map(|e| monomial_value(e, p)).collect()).collect();
        let Some(coeffs) = solve(rows, ok[..n].to_vec()) else { continue };
        for (p, v) in points[n..].iter().zip(&ok[n..]) {
            let predicted: Scalar = basis.iter().zip(&coeffs).map(|(e, c)| c * monomial_value(e, p)).sum();
            if &predicted != v {
                return Err(InvariantError::NonPolynomialResult(format!(
                    "value {} at {:?} disagrees with the degree-{degree} interpolant {}",
                    scalar::to_string(v),
                    p.iter().map(scalar::to_string).collect::<Vec<_>>(),
                    scalar::to_string(&predicted)
                )));
            }
        }
        let mut poly = Polynomial::zero();
        for (e, c) in basis.iter().zip(coeffs) {
            poly.add_term(to_monomial(e), c);
        }
        return Ok(poly);
    }
    Err(last.unwrap_or_else(|| InvariantError::NonPolynomialResult("no usable evaluation points".into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 3).len(), 4);
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(1, 0), vec![vec![0]]);
    }

    #[test]
    fn recovers_known_polynomial() {
        // 3 l1^2 - l1 l2 + 5 l2^2
        let f = |p: &[Scalar]| {
            Ok(scalar::int(3) * &p[0] * &p[0] - &p[0] * &p[1] + scalar::int(5) * &p[1] * &p[1])
        };
        let poly = reconstruct(2, 2, 3, &f).unwrap();
        assert_eq!(poly.terms.len(), 3);
        let at = |v: Variable| Some(if v == Variable::Lambda(1) { scalar::int(2) } else { scalar::int(7) });
        assert_eq!(poly.eval(&at).unwrap(), scalar::int(12 - 14 + 245));
    }

    #[test]
    fn rejects_rational_function() {
        let f = |p: &[Scalar]| Ok(&p[0] * &p[0] / &p[1]);
        assert!(matches!(reconstruct(2, 1, 1, &f), Err(InvariantError::NonPolynomialResult(_))));
        let g = |p: &[Scalar]| Ok(p[0].recip());
        assert!(reconstruct(1, -1, 1, &g).is_err());
    }
}
