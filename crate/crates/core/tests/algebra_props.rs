//! Property tests for exact scalars, polynomials, rational functions and truncated series.

use proptest::prelude::*;

use ogw_localization::algebra::scalar::{self, Scalar};
use ogw_localization::algebra::{Field, Polynomial, RationalFunction, Ring, Variable};
use ogw_localization::series::{Series, SeriesVariable, TruncationSpec};

fn small_scalar() -> impl Strategy<Value = Scalar> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, q)| scalar::frac(p, q))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0u32..3, 0u32..3, small_scalar()), 0..5).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (a, b, c) in terms {
            let m = Polynomial::var(Variable::Lambda(1)).pow(a).mul(&Polynomial::var(Variable::Lambda(2)).pow(b));
            p = p.add(&m.scale(&c));
        }
        p
    })
}

fn eval2(p: &Polynomial, x: &Scalar, y: &Scalar) -> Scalar {
    p.eval(&|v| match v {
        Variable::Lambda(1) => Some(x.clone()),
        Variable::Lambda(2) => Some(y.clone()),
        _ => None,
    })
    .expect("all variables bound")
}

fn spec() -> TruncationSpec {
    TruncationSpec::new(&[(SeriesVariable::Q, 3), (SeriesVariable::S, 2)])
}

fn nilpotent_series() -> impl Strategy<Value = Series<Scalar>> {
    prop::collection::vec((0u32..=3, 0u32..=2, small_scalar()), 0..6).prop_map(|terms| {
        let mut s = Series::zero(&spec());
        for (q, t, c) in terms {
            if q + t > 0 {
                s.add_term(vec![q, t], c);
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_strings_round_trip(x in small_scalar()) {
        prop_assert_eq!(scalar::parse(&scalar::to_string(&x)).unwrap(), x);
    }

    #[test]
    fn polynomial_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn polynomial_evaluation_is_a_homomorphism(p in poly(), q in poly(), x in small_scalar(), y in small_scalar()) {
        prop_assert_eq!(eval2(&p.mul(&q), &x, &y), eval2(&p, &x, &y) * eval2(&q, &x, &y));
        prop_assert_eq!(eval2(&p.add(&q), &x, &y), eval2(&p, &x, &y) + eval2(&q, &x, &y));
    }

    #[test]
    fn polynomial_json_round_trip(p in poly()) {
        let text = serde_json::to_string(&p).unwrap();
        let back: Polynomial = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rational_function_inverse(c1 in small_scalar(), c2 in small_scalar(), x in 1i64..20, y in 21i64..40) {
        prop_assume!(c1 != scalar::int(0) || c2 != scalar::int(0));
        let f = RationalFunction::linear([(Variable::Lambda(1), c1), (Variable::Lambda(2), c2)]);
        let g = f.inverse().unwrap();
        prop_assert!(f.times(&g).equals(&RationalFunction::one()));
        let at = |v: Variable| match v {
            Variable::Lambda(1) => Some(scalar::int(x)),
            Variable::Lambda(2) => Some(scalar::int(y)),
            _ => None,
        };
        if let (Ok(fv), Ok(gv)) = (f.eval_at(&at), g.eval_at(&at)) {
            prop_assert_eq!(fv * gv, scalar::int(1));
        }
    }

    #[test]
    fn series_exp_log_inverse(s in nilpotent_series()) {
        let e = s.exp().unwrap();
        prop_assert_eq!(e.log().unwrap().terms, s.terms.clone());
    }

    #[test]
    fn series_exp_is_additive(a in nilpotent_series(), b in nilpotent_series()) {
        let lhs = a.add(&b).exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap());
        prop_assert_eq!(lhs.terms, rhs.terms);
    }
}
