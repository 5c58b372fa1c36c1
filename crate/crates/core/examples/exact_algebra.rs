//! Exact rational functions in the torus weights and the restriction to the real torus.

use ogw_localization::algebra::{scalar, Field, RationalFunction, Ring, Substitution, Variable};

fn main() {
    let a1 = RationalFunction::var(Variable::Alpha(1));
    let a2 = RationalFunction::var(Variable::Alpha(2));
    let f = a1.minus(&a2).inverse().expect("nonzero").times(&a1.scale(&scalar::int(3)));
    println!("f = 3 alpha_1 / (alpha_1 - alpha_2) = {f}");
    for m in 1..=2u8 {
        match f.substitute(&Substitution::rho_t(m)) {
            Ok(g) => println!("restricted to the real torus for m = {m}: {}", g.reduce()),
            Err(e) => println!("restriction for m = {m} is singular: {e}"),
        }
    }
    let sum = f.plus(&RationalFunction::one());
    println!("f + 1 = {sum}, homogeneous degree {:?}", sum.homogeneous_degree());
}
