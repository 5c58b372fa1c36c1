//! Genus-zero open descendent integrals <tau_{a_1} ... tau_{a_l} sigma^k> and
//! the free-energy extraction used at disc vertices.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::scalar::{self, Scalar};

/// A multiset of tau indices and a sigma count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BracketKey {
    pub a_list: Vec<u32>,
    pub k: u32,
}

impl BracketKey {
    pub fn new(mut a_list: Vec<u32>, k: u32) -> Self {
        a_list.sort_unstable();
        BracketKey { a_list, k }
    }

    /// 2 * sum(a) = 2 * |a| + k - 3.
    pub fn in_dimension(&self) -> bool {
        let lhs = 2 * self.a_list.iter().map(|&a| a as i64).sum::<i64>();
        lhs == 2 * self.a_list.len() as i64 + self.k as i64 - 3
    }
}

fn memo() -> &'static Mutex<HashMap<BracketKey, BigInt>> {
    static TABLE: OnceLock<Mutex<HashMap<BracketKey, BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= BigInt::from(i);
        i -= 2;
    }
    acc
}

/// Closed form for all-positive indices: (1 + sum(2a_i - 1))! / prod (2a_i - 1)!!.
pub fn closed_form(a_list: &[u32]) -> BigInt {
    let top: i64 = 1 + a_list.iter().map(|&a| 2 * a as i64 - 1).sum::<i64>();
    let den = a_list.iter().fold(BigInt::one(), |acc, &a| acc * double_factorial(2 * a as i64 - 1));
    scalar::factorial(top as u64) / den
}

pub fn bracket(key: &BracketKey) -> BigInt {
    let key = BracketKey::new(key.a_list.clone(), key.k);
    if !key.in_dimension() {
        return BigInt::zero();
    }
    if let Some(v) = memo().lock().unwrap().get(&key) {
        return v.clone();
    }
    let value = if key.a_list.iter().all(|&a| a >= 1) {
        closed_form(&key.a_list)
    } else if key.a_list == [0] && key.k == 1 {
        // <tau_0 sigma> = 1
        BigInt::one()
    } else {
        // string equation: drop one tau_0, lower one remaining index
        let rest: Vec<u32> = key.a_list[1..].to_vec();
        let mut total = BigInt::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut lowered = rest.clone();
            lowered[j] -= 1;
            total += bracket(&BracketKey::new(lowered, key.k));
        }
        total
    };
    memo().lock().unwrap().insert(key, value.clone());
    value
}

/// Coefficient of t_{b_1} ... t_{b_s} t_0^{n_tau0} s_0^k in F_0^o (derivative convention).
pub fn f0_coeff(b_list: &[u32], n_tau0: u32, k: u32) -> Scalar {
    if k % 2 == 0 {
        return Scalar::zero();
    }
    let mut a_list = b_list.to_vec();
    a_list.extend(std::iter::repeat(0).take(n_tau0 as usize));
    let value = bracket(&BracketKey::new(a_list, k));
    if value.is_zero() {
        return Scalar::zero();
    }
    Scalar::from_integer(value * (BigInt::one() << ((k - 1) / 2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(a: &[u32], k: u32) -> i64 {
        bracket(&BracketKey::new(a.to_vec(), k)).try_into().unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(br(&[1], 3), 2);
        assert_eq!(br(&[2], 5), 8);
        assert_eq!(br(&[1, 1], 3), 6);
        assert_eq!(br(&[], 3), 1);
    }

    #[test]
    fn off_dimension_is_zero() {
        assert_eq!(br(&[1], 2), 0);
        // listed elsewhere with value 6, but 2*2 != 2*2 + 5 - 3
        assert_eq!(br(&[1, 1], 5), 0);
    }

    #[test]
    fn string_reduction() {
        assert_eq!(br(&[0], 1), 1);
        assert_eq!(br(&[0, 1], 1), 1);
        assert_eq!(br(&[0, 2], 3), 2);
        assert_eq!(br(&[0, 0, 2], 1), 1);
    }

    #[test]
    fn free_energy_extraction() {
        assert_eq!(f0_coeff(&[], 0, 3), scalar::int(2));
        assert_eq!(f0_coeff(&[], 1, 1), scalar::int(1));
        assert_eq!(f0_coeff(&[1], 0, 3), scalar::int(4));
        assert_eq!(f0_coeff(&[1], 0, 2), scalar::int(0));
    }
}
