//! Fixed-point profiles of a key: orbit representatives with 1/|Aut| and their contributions.
//!
//! Usage: cargo run --example profiles -- [M K L0,L1,... BETA]

use ogw_localization::algebra::RationalFunction;
use ogw_localization::invariants::InvariantKey;
use ogw_localization::profiles::blocks::slot_truncation;
use ogw_localization::profiles::{contribution, enumerate_labeled, enumerate_orbits, SymbolicWeights};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let key = if args.len() >= 4 {
        InvariantKey::new(
            args[0].parse().expect("m"),
            args[1].parse().expect("k"),
            args[2].split(',').map(|x| x.parse().expect("l")).collect(),
            args[3].parse().expect("beta"),
        )
    } else {
        InvariantKey::new(1, 1, vec![0, 0, 0], 2)
    };
    let weights = SymbolicWeights::new(key.m, slot_truncation(key.beta, &key.lvec));
    let orbits = enumerate_orbits(&key).expect("orbits");
    let mut total = RationalFunction::zero();
    for wp in &orbits {
        let p = &wp.profile;
        let c = contribution(&weights, p).expect("contribution").scale(&wp.weight).scale(&p.multinomial());
        println!(
            "{} odd, {} even, {} edges, weight {}: {}",
            p.odd_vertices.len(),
            p.even_vertices.len(),
            p.edges.len(),
            wp.weight,
            c.reduce()
        );
        total = total.add(&c);
    }
    println!("{} orbits, {} aggregated labeled classes", orbits.len(), enumerate_labeled(&key).expect("labeled").len());
    println!("printed sum before the boundary orientation sign (-1)^k: {}", total.reduce());
}
