//! One equivariant invariant through a chosen route.
//!
//! Usage: cargo run --release --example invariant -- M K L0,L1,... BETA [labeled|orbits|diagrams]

use std::time::Instant;

use ogw_localization::invariants::{compute, InvariantKey, Route};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (m, k, lvec, beta, route) = if args.len() >= 4 {
        (
            args[0].parse().expect("m"),
            args[1].parse().expect("k"),
            args[2].split(',').map(|x| x.parse().expect("lvec entry")).collect(),
            args[3].parse().expect("beta"),
            args.get(4).map_or(Route::Orbits, |r| r.parse().expect("route")),
        )
    } else {
        (1u8, 2u32, vec![0, 0, 0], 1u32, Route::Orbits)
    };
    let key = InvariantKey::new(m, k, lvec, beta);
    let start = Instant::now();
    match compute(&key, route) {
        Ok(v) => println!("{key} via {route}: {} (degree {}, {:.2}s)", v.value, v.expected_degree, start.elapsed().as_secs_f64()),
        Err(e) => println!("{key} via {route}: error {e}"),
    }
}
