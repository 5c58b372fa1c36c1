//! Truncated multivariate series over exact rationals: exp, log and coefficient extraction.

use ogw_localization::algebra::scalar;
use ogw_localization::series::{Series, SeriesVariable, TruncationSpec};

fn main() {
    let spec = TruncationSpec::new(&[(SeriesVariable::Q, 4), (SeriesVariable::S, 3)]);
    let q = Series::<ogw_localization::algebra::Scalar>::variable(&spec, SeriesVariable::Q);
    let s = Series::variable(&spec, SeriesVariable::S);
    let x = q.add(&s.mul(&s).scale_scalar(&scalar::frac(1, 2)));
    let e = x.exp().expect("exp");
    println!("exp(Q + S^2/2) up to Q^4 S^3:");
    for (exps, c) in &e.terms {
        println!("  Q^{} S^{}: {}", exps[0], exps[1], scalar::to_string(c));
    }
    let back = e.log().expect("log");
    println!("log(exp(x)) == x: {}", back.terms == x.terms);
}
