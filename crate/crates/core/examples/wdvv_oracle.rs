//! Closed plane curve counts N_d and Welschinger numbers from the WDVV recursions.

use ogw_localization::wdvv::oracle_table;

fn main() {
    let max_degree: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let table = oracle_table(max_degree).expect("oracle");
    for (d, n) in &table.closed_counts {
        println!("N_{d} = {n}");
    }
    for ((k, l), w) in &table.welschinger_counts {
        println!("W({k},{l}) = {w}");
    }
}
