//! Closed correlator Z_a at hbar = alpha_a/d on the real torus.
//!
//! Usage: cargo run --example correlator -- [M A D Q_CAP ETA_CAPS]
//! e.g. `correlator 1 1 1/2 2 0,0,1` prints every coefficient of Z_1(2 alpha_1).

use ogw_localization::algebra::scalar;
use ogw_localization::correlators::{correlator_at, CorrelatorTrunc};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m: u8 = args.first().map_or(1, |s| s.parse().expect("m"));
    let a: u8 = args.get(1).map_or(1, |s| s.parse().expect("a"));
    let d = scalar::parse(args.get(2).map_or("1/2", String::as_str)).expect("d as p/q");
    let q_cap: u32 = args.get(3).map_or(2, |s| s.parse().expect("q-cap"));
    let mut eta: Vec<u32> = args.get(4).map_or_else(Vec::new, |s| s.split(',').map(|x| x.parse().expect("eta cap")).collect());
    eta.resize(2 * m as usize + 1, 0);
    let trunc = CorrelatorTrunc::new(q_cap, eta);
    let z = correlator_at(m, a, &d, &trunc).expect("correlator");
    println!("Z_{a} at hbar = alpha_{a}/{d}; exponents over {:?}", trunc.spec().vars);
    for (e, c) in &z.terms {
        if !c.is_zero() {
            println!("  {e:?}: {}", c.reduce());
        }
    }
}
