//! Open descendent integrals <tau_a1 ... tau_an sigma^k> next to their closed form.

use ogw_localization::descendents::{bracket, closed_form, f0_coeff, BracketKey};

fn main() {
    println!("{:<14} {:>3} {:>10} {:>12}", "a", "k", "bracket", "closed form");
    for a in [vec![1], vec![2], vec![1, 1], vec![3], vec![1, 2], vec![1, 1, 1], vec![2, 2], vec![1, 1, 2]] {
        let k = 2 * a.iter().sum::<u32>() + 3 - 2 * a.len() as u32;
        let key = BracketKey::new(a.clone(), k);
        println!("{:<14} {k:>3} {:>10} {:>12}", format!("{a:?}"), bracket(&key), closed_form(&a));
    }
    println!("<sigma^3> = {}", bracket(&BracketKey::new(vec![], 3)));
    println!("<tau_0 tau_2 sigma^3> = {}", bracket(&BracketKey::new(vec![0, 2], 3)));
    println!("free energy coefficient of s_0^3: {}", f0_coeff(&[], 0, 3));
}
