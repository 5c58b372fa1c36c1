//! Edge-numbered profiles generated by their merge history.
//!
//! Removing the highest-numbered edge splits a numbered tree into the part
//! holding the edge's odd tail and the part holding its even head, each with
//! an induced numbering. Conversely every pair of numbered trees, a choice of
//! tail and head, and an interleaving of the remaining edge labels gives a new
//! numbered tree, so interleavings are counted rather than listed.
//!
//! Later joins and the final contribution only see the multiset of decorated
//! vertices with their current degrees, so numbered trees are aggregated by
//! that multiset: one representative carries the summed count of numberings
//! (with vertex choices and leg orderings multiplied in).

use std::collections::HashMap;
use std::rc::Rc;

use super::{even_decorations, odd_decorations, Budget, EvenVertex, OddVertex, Profile, ProfileError, WeightedProfile};
use crate::algebra::scalar::{self, Scalar};
use crate::invariants::InvariantKey;

#[derive(Clone)]
struct NumberedTree {
    odd: Vec<OddVertex>,
    even: Vec<EvenVertex>,
    edges: Vec<(usize, usize)>,
    numberings: Scalar,
}

impl NumberedTree {
    fn state(&self) -> (Vec<OddVertex>, Vec<EvenVertex>) {
        let mut odd = self.odd.clone();
        let mut even = self.even.clone();
        odd.sort();
        even.sort();
        (odd, even)
    }
}

struct Generator {
    m: u8,
    max_edges: usize,
    memo: HashMap<(Budget, usize), Rc<Vec<NumberedTree>>>,
}

/// Number of distinct orderings of a multiset.
fn orderings<T: Ord + Clone>(items: &[T]) -> Scalar {
    let mut sorted = items.to_vec();
    sorted.sort();
    let mut count = scalar::factorial_q(sorted.len() as u64);
    let mut i = 0;
    while i < sorted.len() {
        let j = (i..sorted.len()).find(|&j| sorted[j] != sorted[i]).unwrap_or(sorted.len());
        count /= scalar::factorial_q((j - i) as u64);
        i = j;
    }
    count
}

/// First index of each distinct value, with its multiplicity.
fn distinct<T: PartialEq>(items: &[T]) -> Vec<(usize, u64)> {
    let mut out: Vec<(usize, u64)> = Vec::new();
    for (i, x) in items.iter().enumerate() {
        match out.iter_mut().find(|(j, _)| items[*j] == *x) {
            Some(entry) => entry.1 += 1,
            None => out.push((i, 1)),
        }
    }
    out
}

impl Generator {
    fn trees(&mut self, b: &Budget, r: usize) -> Rc<Vec<NumberedTree>> {
        let key = (b.clone(), r);
        if let Some(x) = self.memo.get(&key) {
            return x.clone();
        }
        let mut out = Vec::new();
        let one = Scalar::from_integer(1.into());
        if r == 0 {
            for v in odd_decorations(self.m, b) {
                out.push(NumberedTree { odd: vec![v], even: vec![], edges: vec![], numberings: one.clone() });
            }
            for v in even_decorations(self.m, b) {
                let numberings = orderings(&v.legs);
                out.push(NumberedTree { odd: vec![], even: vec![v], edges: vec![], numberings });
            }
        } else {
            let mut merged: HashMap<(Vec<OddVertex>, Vec<EvenVertex>), NumberedTree> = HashMap::new();
            for tail_budget in b.below() {
                if tail_budget.beta == 0 {
                    continue;
                }
                let head_budget = b.minus(&tail_budget);
                for r_tail in 0..r {
                    let r_head = r - 1 - r_tail;
                    let interleave = Scalar::from_integer(scalar::binomial((r - 1) as u64, r_tail as u64));
                    let tails = self.trees(&tail_budget, r_tail);
                    if tails.is_empty() {
                        continue;
                    }
                    let heads = self.trees(&head_budget, r_head);
                    for t in tails.iter() {
                        for h in heads.iter() {
                            let count = &t.numberings * &h.numberings * &interleave;
                            for (o, mo) in distinct(&t.odd) {
                                for (e, me) in distinct(&h.even) {
                                    let times = Scalar::from_integer((mo * me).into());
                                    let joined = join(t, h, o, e, &count * times);
                                    if deficit(&joined) + r > self.max_edges {
                                        continue;
                                    }
                                    merged
                                        .entry(joined.state())
                                        .and_modify(|x| x.numberings += &joined.numberings)
                                        .or_insert(joined);
                                }
                            }
                        }
                    }
                }
            }
            let mut states: Vec<_> = merged.into_iter().collect();
            states.sort_by(|a, b| a.0.cmp(&b.0));
            out = states.into_iter().map(|(_, t)| t).collect();
        }
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }
}

fn join(t: &NumberedTree, h: &NumberedTree, o: usize, e: usize, numberings: Scalar) -> NumberedTree {
    let (no, ne) = (t.odd.len(), t.even.len());
    let mut edges = t.edges.clone();
    edges.extend(h.edges.iter().map(|(x, y)| (x + no, y + ne)));
    edges.push((o, e + ne));
    let mut odd: Vec<OddVertex> = t.odd.iter().chain(&h.odd).cloned().collect();
    let mut even: Vec<EvenVertex> = t.even.iter().chain(&h.even).cloned().collect();
    odd[o].degree += 1;
    even[e + ne].edge_heads += 1;
    NumberedTree { odd, even, edges, numberings }
}

/// Edge heads still missing before every even vertex is stable; later edges can supply at most one each.
fn deficit(t: &NumberedTree) -> usize {
    t.even.iter().map(|v| 3u32.saturating_sub(2 * (v.l0 + v.legs.len() as u32) + v.k_hat + v.edge_heads) as usize).sum()
}

/// Upper bound on edges of a stable profile with this budget.
///
/// With O odd and V even vertices, E = O + V - 1 and stability gives
/// 3V - S <= E, where S <= k + 2|l| + beta counts special points on even vertices.
fn edge_bound(b: &Budget) -> usize {
    let odd = b.beta as usize;
    let special = b.k as usize + 2 * b.l.iter().sum::<u32>() as usize + b.beta as usize;
    (odd + (odd + special).saturating_sub(1) / 2).saturating_sub(1)
}

/// Edge-numbered, leg-ordered profiles, aggregated by vertex data, with weight numberings/(r! prod s_i!).
pub fn enumerate_labeled(key: &InvariantKey) -> Result<Vec<WeightedProfile>, ProfileError> {
    key.validate().map_err(|e| ProfileError::InvalidKey(e.to_string()))?;
    let budget = Budget::of_key(key);
    let mut gen = Generator { m: key.m, max_edges: edge_bound(&budget), memo: HashMap::new() };
    let mut out = Vec::new();
    for r in 0..=edge_bound(&budget) {
        for t in gen.trees(&budget, r).iter() {
            let profile =
                Profile { m: key.m, odd_vertices: t.odd.clone(), even_vertices: t.even.clone(), edges: t.edges.clone() }
                    .with_incidence();
            if !profile.is_stable() {
                continue;
            }
            let mut den = scalar::factorial_q(r as u64);
            for v in &profile.even_vertices {
                den *= scalar::factorial_q(v.legs.len() as u64);
            }
            out.push(WeightedProfile { weight: &t.numberings / den, profile });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orderings_of_multiset() {
        assert_eq!(orderings(&[1, 1, 2]), scalar::int(3));
        assert_eq!(orderings(&[1, 2, 3]), scalar::int(6));
        assert_eq!(orderings::<u8>(&[]), scalar::int(1));
    }

    #[test]
    fn lines_through_two_points() {
        let key = InvariantKey::new(1, 2, vec![0, 0, 0], 1);
        let profiles = enumerate_labeled(&key).unwrap();
        assert_eq!(profiles.len(), 2);
        for p in &profiles {
            assert_eq!(p.profile.odd_vertices.len(), 1);
            assert_eq!(p.profile.even_vertices[0].k_hat, 2);
            assert_eq!(p.profile.even_vertices[0].edge_heads, 1);
            assert_eq!(p.weight, scalar::int(1));
        }
    }

    #[test]
    fn relation_key_shapes() {
        let key = InvariantKey::new(1, 1, vec![0, 0, 0], 2);
        let profiles = enumerate_labeled(&key).unwrap();
        let single: Vec<_> = profiles.iter().filter(|p| p.profile.edges.is_empty()).collect();
        assert_eq!(single.len(), 2);
        let pairs: Vec<_> = profiles.iter().filter(|p| p.profile.edges.len() == 2).collect();
        // two numberings for each of the 4 ordered decorations, aggregated into 3 vertex multisets
        let total: Scalar = pairs.iter().map(|p| p.weight.clone() * scalar::int(2)).sum();
        assert_eq!(total, scalar::int(4));
        assert_eq!(profiles.len(), single.len() + pairs.len());
    }
}
