//! Odd-even fixed-point profiles: decorated bipartite trees whose odd vertices
//! are discs of odd degree and whose even vertices are ghost discs at the real
//! fixed point carrying sphere legs.

pub mod blocks;
pub mod labeled;
pub mod orbits;

use serde::{Deserialize, Serialize};

use crate::algebra::scalar::{self, Scalar};
use crate::invariants::InvariantKey;

pub use blocks::{contribution, xi, PointWeights, SymbolicWeights, VertexCache, WeightModel};
pub use labeled::enumerate_labeled;
pub use orbits::enumerate_orbits;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error(transparent)]
    Correlator(#[from] crate::correlators::CorrelatorError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// A multiple-cover sphere from the real fixed point to p_a with a tail at p_a.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SphereLeg {
    pub d: u32,
    pub a: u8,
    pub d_tilde: u32,
    /// interior points on the tail, by constraint degree
    pub c: Vec<u32>,
}

impl SphereLeg {
    pub fn beta(&self) -> u32 {
        2 * (self.d + self.d_tilde)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EvenVertex {
    pub k_hat: u32,
    pub edge_heads: u32,
    /// sorted
    pub legs: Vec<SphereLeg>,
    pub l0: u32,
}

impl EvenVertex {
    pub fn beta(&self) -> u32 {
        self.legs.iter().map(SphereLeg::beta).sum()
    }

    pub fn is_stable(&self) -> bool {
        2 * (self.l0 + self.legs.len() as u32) + self.k_hat + self.edge_heads >= 3
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OddVertex {
    pub beta0: u32,
    pub a: u8,
    pub d_tilde: u32,
    pub c: Vec<u32>,
    pub degree: u32,
}

impl OddVertex {
    pub fn beta(&self) -> u32 {
        self.beta0 + 2 * self.d_tilde
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile {
    pub m: u8,
    pub odd_vertices: Vec<OddVertex>,
    pub even_vertices: Vec<EvenVertex>,
    /// (odd index, even index)
    pub edges: Vec<(usize, usize)>,
}

impl Profile {
    /// Fill in vertex degrees and edge-head counts from the edge list.
    pub fn with_incidence(mut self) -> Self {
        for v in &mut self.odd_vertices {
            v.degree = 0;
        }
        for v in &mut self.even_vertices {
            v.edge_heads = 0;
        }
        for &(o, e) in &self.edges {
            self.odd_vertices[o].degree += 1;
            self.even_vertices[e].edge_heads += 1;
        }
        self
    }

    pub fn beta(&self) -> u32 {
        self.odd_vertices.iter().map(OddVertex::beta).sum::<u32>()
            + self.even_vertices.iter().map(EvenVertex::beta).sum::<u32>()
    }

    pub fn k(&self) -> u32 {
        self.even_vertices.iter().map(|v| v.k_hat).sum()
    }

    pub fn lvec(&self) -> Vec<u32> {
        let mut out = vec![0; 2 * self.m as usize + 1];
        for v in &self.odd_vertices {
            add_into(&mut out, &v.c);
        }
        for v in &self.even_vertices {
            out[0] += v.l0;
            for leg in &v.legs {
                add_into(&mut out, &leg.c);
            }
        }
        out
    }

    pub fn is_stable(&self) -> bool {
        self.even_vertices.iter().all(EvenVertex::is_stable)
    }

    /// Ways to distribute labeled boundary and interior points over the slots.
    pub fn multinomial(&self) -> Scalar {
        let mut num = scalar::factorial_q(self.k() as u64);
        for l in self.lvec() {
            num *= scalar::factorial_q(l as u64);
        }
        let mut den = Scalar::from_integer(1.into());
        let slot = |den: &mut Scalar, c: &[u32]| {
            for x in c {
                *den *= scalar::factorial_q(*x as u64);
            }
        };
        for v in &self.odd_vertices {
            slot(&mut den, &v.c);
        }
        for v in &self.even_vertices {
            den *= scalar::factorial_q(v.k_hat as u64) * scalar::factorial_q(v.l0 as u64);
            for leg in &v.legs {
                slot(&mut den, &leg.c);
            }
        }
        num / den
    }
}

fn add_into(acc: &mut [u32], c: &[u32]) {
    for (x, y) in acc.iter_mut().zip(c) {
        *x += y;
    }
}

/// A profile with its weight in the fixed-point sum (excluding the point multinomial).
#[derive(Clone, Debug)]
pub struct WeightedProfile {
    pub profile: Profile,
    pub weight: Scalar,
}

/// Degree, boundary count and interior count vector available to a subtree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Budget {
    pub beta: u32,
    pub k: u32,
    pub l: Vec<u32>,
}

impl Budget {
    pub fn of_key(key: &InvariantKey) -> Self {
        Budget { beta: key.beta, k: key.k, l: key.lvec.clone() }
    }

    pub fn zero(n: usize) -> Self {
        Budget { beta: 0, k: 0, l: vec![0; n] }
    }

    pub fn is_zero(&self) -> bool {
        self.beta == 0 && self.k == 0 && self.l.iter().all(|x| *x == 0)
    }

    pub fn fits(&self, within: &Budget) -> bool {
        self.beta <= within.beta && self.k <= within.k && self.l.iter().zip(&within.l).all(|(a, b)| a <= b)
    }

    pub fn minus(&self, o: &Budget) -> Budget {
        Budget { beta: self.beta - o.beta, k: self.k - o.k, l: self.l.iter().zip(&o.l).map(|(a, b)| a - b).collect() }
    }

    /// Every budget componentwise at most self.
    pub fn below(&self) -> Vec<Budget> {
        let mut out = vec![Budget::zero(self.l.len())];
        let extend = |out: &mut Vec<Budget>, bound: u32, set: &dyn Fn(&mut Budget, u32)| {
            let mut next = Vec::with_capacity(out.len() * (bound as usize + 1));
            for b in out.iter() {
                for x in 0..=bound {
                    let mut c = b.clone();
                    set(&mut c, x);
                    next.push(c);
                }
            }
            *out = next;
        };
        extend(&mut out, self.beta, &|b, x| b.beta = x);
        extend(&mut out, self.k, &|b, x| b.k = x);
        for i in 0..self.l.len() {
            extend(&mut out, self.l[i], &|b, x| b.l[i] = x);
        }
        out
    }
}

/// Odd decorations using exactly `b` (degree left at 0).
pub(crate) fn odd_decorations(m: u8, b: &Budget) -> Vec<OddVertex> {
    if b.k != 0 || b.beta % 2 == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for beta0 in (1..=b.beta).step_by(2) {
        for a in 1..=2 * m {
            out.push(OddVertex { beta0, a, d_tilde: (b.beta - beta0) / 2, c: b.l.clone(), degree: 0 });
        }
    }
    out
}

/// Even decorations using exactly `b`, legs sorted (edge heads left at 0).
pub(crate) fn even_decorations(m: u8, b: &Budget) -> Vec<EvenVertex> {
    if b.beta % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for l0 in 0..=b.l[0] {
        let mut rest = b.l.clone();
        rest[0] -= l0;
        let types = leg_types(m, b.beta, &rest);
        let mut chosen = Vec::new();
        leg_multisets(&types, 0, b.beta, &rest, &mut chosen, &mut |legs| {
            out.push(EvenVertex { k_hat: b.k, edge_heads: 0, legs: legs.to_vec(), l0 });
        });
    }
    out
}

fn leg_types(m: u8, beta: u32, rest: &[u32]) -> Vec<SphereLeg> {
    let mut cs = vec![Vec::new()];
    for bound in rest {
        cs = cs.into_iter().flat_map(|c: Vec<u32>| (0..=*bound).map(move |x| [c.clone(), vec![x]].concat())).collect();
    }
    let mut out = Vec::new();
    for d in 1..=beta / 2 {
        for d_tilde in 0..=(beta / 2 - d) {
            for a in 1..=2 * m {
                for c in &cs {
                    out.push(SphereLeg { d, a, d_tilde, c: c.clone() });
                }
            }
        }
    }
    out.sort();
    out
}

fn leg_multisets(
    types: &[SphereLeg],
    start: usize,
    beta: u32,
    rest: &[u32],
    chosen: &mut Vec<SphereLeg>,
    visit: &mut dyn FnMut(&[SphereLeg]),
) {
    if beta == 0 {
        if rest.iter().all(|x| *x == 0) {
            visit(chosen);
        }
        return;
    }
    for i in start..types.len() {
        let t = &types[i];
        if t.beta() <= beta && t.c.iter().zip(rest).all(|(a, b)| a <= b) {
            let left: Vec<u32> = rest.iter().zip(&t.c).map(|(a, b)| a - b).collect();
            chosen.push(t.clone());
            leg_multisets(types, i, beta - t.beta(), &left, chosen, visit);
            chosen.pop();
        }
    }
}

/// Product of factorials of run lengths in a sorted slice.
pub(crate) fn runs_factorial<T: PartialEq>(items: &[T]) -> Scalar {
    let mut out = Scalar::from_integer(1.into());
    let mut run = 1i64;
    for i in 1..items.len() {
        if items[i] == items[i - 1] {
            run += 1;
            out *= scalar::int(run);
        } else {
            run = 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decorations() {
        let b = Budget { beta: 2, k: 1, l: vec![0, 0, 0] };
        let ev = even_decorations(1, &b);
        assert_eq!(ev.len(), 2);
        assert!(odd_decorations(1, &b).is_empty());
        let b = Budget { beta: 3, k: 0, l: vec![0, 0, 1] };
        assert_eq!(odd_decorations(1, &b).len(), 4);
        assert_eq!(b.below().len(), 4 * 2);
    }

    #[test]
    fn runs() {
        assert_eq!(runs_factorial(&[1, 1, 2, 2, 2]), scalar::int(12));
        assert_eq!(runs_factorial::<u8>(&[]), scalar::int(1));
    }
}
