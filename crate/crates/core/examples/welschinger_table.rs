//! Welschinger numbers from localization next to the WDVV oracle.
//!
//! Usage: cargo run --release --example welschinger_table [max k+2l]

use std::time::Instant;

use ogw_localization::algebra::scalar;
use ogw_localization::invariants::{welschinger, welschinger_degree};
use ogw_localization::wdvv::wdvv_welschinger;

fn main() {
    let max: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(11);
    println!("{:>3} {:>3} {:>5} {:>14} {:>14} {:>9}", "k", "l", "beta", "localization", "wdvv", "seconds");
    for total in (2..=max).filter(|t| t % 3 == 2) {
        for l in 0..=total / 2 {
            let k = total - 2 * l;
            if welschinger_degree(k, l).is_none() {
                continue;
            }
            let start = Instant::now();
            let w = welschinger(k, l).map(|x| scalar::to_string(&x)).unwrap_or_else(|e| format!("error: {e}"));
            let secs = start.elapsed().as_secs_f64();
            let oracle = wdvv_welschinger(k, l).map(|x| x.to_string()).unwrap_or_else(|e| format!("error: {e}"));
            println!("{k:>3} {l:>3} {:>5} {w:>14} {oracle:>14} {secs:>9.2}", (total + 1) / 3);
        }
    }
}
