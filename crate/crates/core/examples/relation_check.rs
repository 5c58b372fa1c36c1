//! The vanishing relation: ogw(m, k=1, l=0, beta=2) = 0 although its fixed-point
//! contributions do not vanish individually.

use std::time::Instant;

use ogw_localization::invariants::{ogw_orbits, InvariantKey};

fn main() {
    let m_max: u8 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let mut vanished = 0;
    for m in 1..=m_max {
        let key = InvariantKey::new(m, 1, vec![0; 2 * m as usize + 1], 2);
        let start = Instant::now();
        let v = ogw_orbits(&key).expect("evaluation");
        println!("{key}: expected degree {}, value {} ({:.2}s)", v.expected_degree, v.value, start.elapsed().as_secs_f64());
        vanished += v.is_zero() as usize;
    }
    println!("{}: {vanished}/{m_max} vanish", if vanished == m_max as usize { "OK" } else { "FAIL" });
}
