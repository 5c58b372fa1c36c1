//! One canonical representative per isomorphism class of profiles.
//!
//! Trees are rooted at their center. A bicentral tree has one odd and one even
//! center (the tree is bipartite), and is rooted at the even one, so every
//! automorphism fixes the root and |Aut| factors over the rooted structure.

use std::collections::HashMap;
use std::sync::Arc;

use super::{
    even_decorations, odd_decorations, runs_factorial, Budget, EvenVertex, OddVertex, Profile, ProfileError,
    WeightedProfile,
};
use crate::algebra::scalar::{self, Scalar};
use crate::invariants::InvariantKey;

#[derive(Debug, PartialEq, Eq, Hash)]
enum Node {
    Odd(OddVertex, Vec<Arc<Node>>),
    Even(EvenVertex, Vec<Arc<Node>>),
}

#[derive(Clone)]
struct Rooted {
    node: Arc<Node>,
    height: i64,
    aut: Scalar,
}

struct Enumerator {
    m: u8,
    memo: HashMap<(bool, Budget), Arc<Vec<Rooted>>>,
}

impl Enumerator {
    /// Subtrees hanging from a parent edge, rooted at a vertex of the given parity.
    fn planted(&mut self, odd: bool, b: &Budget) -> Arc<Vec<Rooted>> {
        let key = (odd, b.clone());
        if let Some(x) = self.memo.get(&key) {
            return x.clone();
        }
        let out = Arc::new(self.build(odd, b, true));
        self.memo.insert(key, out.clone());
        out
    }

    fn build(&mut self, odd: bool, b: &Budget, planted: bool) -> Vec<Rooted> {
        let mut out = Vec::new();
        for own in b.below() {
            let decorations: Vec<Decoration> = if odd {
                odd_decorations(self.m, &own).into_iter().map(Decoration::Odd).collect()
            } else {
                even_decorations(self.m, &own).into_iter().map(Decoration::Even).collect()
            };
            if decorations.is_empty() {
                continue;
            }
            let rest = b.minus(&own);
            // children are planted subtrees of the other parity, grouped by nonzero budget
            let mut groups: Vec<(Budget, Arc<Vec<Rooted>>)> = Vec::new();
            for sub in rest.below() {
                if !sub.is_zero() {
                    let list = self.planted(!odd, &sub);
                    if !list.is_empty() {
                        groups.push((sub, list));
                    }
                }
            }
            let mut parts = Vec::new();
            let mut partitions = Vec::new();
            budget_partitions(&groups, 0, &rest, &mut parts, &mut partitions);
            for partition in partitions {
                for children in choose_children(&groups, &partition) {
                    for dec in &decorations {
                        if let Some(r) = make_node(dec, &children, planted) {
                            out.push(r);
                        }
                    }
                }
            }
        }
        out
    }
}

enum Decoration {
    Odd(OddVertex),
    Even(EvenVertex),
}

/// Multisets of group indices whose budgets sum to `rest`, as (group, multiplicity).
fn budget_partitions(
    groups: &[(Budget, Arc<Vec<Rooted>>)],
    start: usize,
    rest: &Budget,
    parts: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if rest.is_zero() {
        out.push(parts.clone());
        return;
    }
    for g in start..groups.len() {
        let mut left = rest.clone();
        let mut mult = 0;
        while groups[g].0.fits(&left) {
            left = left.minus(&groups[g].0);
            mult += 1;
            parts.push((g, mult));
            budget_partitions(groups, g + 1, &left, parts, out);
            parts.pop();
        }
    }
}

/// Every child list realising a partition; entries are (group, index) in canonical order.
fn choose_children<'g>(
    groups: &'g [(Budget, Arc<Vec<Rooted>>)],
    partition: &[(usize, usize)],
) -> Vec<Vec<(&'g Rooted, (usize, usize))>> {
    let mut out: Vec<Vec<(&Rooted, (usize, usize))>> = vec![Vec::new()];
    for &(g, mult) in partition {
        let list = &groups[g].1;
        let mut combos = Vec::new();
        multichoose(list.len(), mult, 0, &mut Vec::new(), &mut combos);
        let mut next = Vec::with_capacity(out.len() * combos.len());
        for prefix in &out {
            for combo in &combos {
                let mut v = prefix.clone();
                v.extend(combo.iter().map(|&i| (&list[i], (g, i))));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn multichoose(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == r {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        multichoose(n, r, i, cur, out);
        cur.pop();
    }
}

fn make_node(dec: &Decoration, children: &[(&Rooted, (usize, usize))], planted: bool) -> Option<Rooted> {
    let kids: Vec<Arc<Node>> = children.iter().map(|(c, _)| c.node.clone()).collect();
    let ids: Vec<(usize, usize)> = children.iter().map(|(_, id)| *id).collect();
    let mut aut = runs_factorial(&ids);
    for (c, _) in children {
        aut *= &c.aut;
    }
    let mut heights: Vec<i64> = children.iter().map(|(c, _)| c.height).collect();
    heights.sort_unstable_by(|a, b| b.cmp(a));
    let height = heights.first().map_or(0, |h| h + 1);
    let node = match dec {
        Decoration::Odd(v) => Node::Odd(v.clone(), kids),
        Decoration::Even(v) => {
            let v = EvenVertex { edge_heads: children.len() as u32 + planted as u32, ..v.clone() };
            if !v.is_stable() {
                return None;
            }
            aut *= runs_factorial(&v.legs);
            Node::Even(v, kids)
        }
    };
    if !planted {
        // center test on the two tallest branches
        let h1 = heights.first().copied().unwrap_or(-1);
        let h2 = heights.get(1).copied().unwrap_or(-1);
        let even_root = matches!(node, Node::Even(..));
        if !(h1 == h2 || (h1 == h2 + 1 && even_root)) {
            return None;
        }
    }
    Some(Rooted { node: Arc::new(node), height, aut })
}

fn flatten(node: &Node, parent: Option<usize>, profile: &mut Profile) {
    match node {
        Node::Odd(v, kids) => {
            let idx = profile.odd_vertices.len();
            profile.odd_vertices.push(v.clone());
            if let Some(p) = parent {
                profile.edges.push((idx, p));
            }
            for k in kids {
                flatten_even_child(k, idx, profile);
            }
        }
        Node::Even(v, kids) => {
            let idx = profile.even_vertices.len();
            profile.even_vertices.push(v.clone());
            debug_assert!(parent.is_none());
            for k in kids {
                flatten_odd_child(k, idx, profile);
            }
        }
    }
}

fn flatten_even_child(node: &Node, odd_parent: usize, profile: &mut Profile) {
    let Node::Even(v, kids) = node else { unreachable!("children of odd vertices are even") };
    let idx = profile.even_vertices.len();
    profile.even_vertices.push(v.clone());
    profile.edges.push((odd_parent, idx));
    for k in kids {
        flatten_odd_child(k, idx, profile);
    }
}

fn flatten_odd_child(node: &Node, even_parent: usize, profile: &mut Profile) {
    let Node::Odd(v, kids) = node else { unreachable!("children of even vertices are odd") };
    let idx = profile.odd_vertices.len();
    profile.odd_vertices.push(v.clone());
    profile.edges.push((idx, even_parent));
    for k in kids {
        flatten_even_child(k, idx, profile);
    }
}

/// Canonical profiles with weight 1/|Aut|.
pub fn enumerate_orbits(key: &InvariantKey) -> Result<Vec<WeightedProfile>, ProfileError> {
    key.validate().map_err(|e| ProfileError::InvalidKey(e.to_string()))?;
    let budget = Budget::of_key(key);
    let mut en = Enumerator { m: key.m, memo: HashMap::new() };
    let mut out = Vec::new();
    for odd in [true, false] {
        for r in en.build(odd, &budget, false) {
            let mut profile =
                Profile { m: key.m, odd_vertices: Vec::new(), even_vertices: Vec::new(), edges: Vec::new() };
            flatten(&r.node, None, &mut profile);
            let profile = profile.with_incidence();
            out.push(WeightedProfile { profile, weight: scalar::int(1) / r.aut });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_key_automorphisms() {
        let key = InvariantKey::new(1, 1, vec![0, 0, 0], 2);
        let orbits = enumerate_orbits(&key).unwrap();
        let pairs: Vec<_> = orbits.iter().filter(|p| p.profile.odd_vertices.len() == 2).collect();
        assert_eq!(pairs.len(), 3);
        for p in pairs {
            let same = p.profile.odd_vertices[0].a == p.profile.odd_vertices[1].a;
            assert_eq!(p.weight, if same { scalar::frac(1, 2) } else { scalar::int(1) });
        }
        assert_eq!(orbits.iter().filter(|p| p.profile.edges.is_empty()).count(), 2);
    }

    #[test]
    fn identical_legs() {
        let key = InvariantKey::new(1, 1, vec![0, 0, 0], 4);
        let orbits = enumerate_orbits(&key).unwrap();
        let twin = orbits
            .iter()
            .find(|p| {
                p.profile.edges.is_empty()
                    && p.profile.even_vertices[0].legs.len() == 2
                    && p.profile.even_vertices[0].legs[0] == p.profile.even_vertices[0].legs[1]
            })
            .expect("two equal legs");
        assert_eq!(twin.weight, scalar::frac(1, 2));
    }
}
