mod common;

use common::*;
use proptest::prelude::*;
use tsbs_core::weyl::eval_bipoly_at_operator;
use tsbs_core::{MPoly, WeylOp};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn associative_and_distributive(
        a in weyl_op(3, 2, true),
        b in weyl_op(3, 2, true),
        c in weyl_op(3, 2, true),
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operators_on_disjoint_variables_commute(
        p in poly_xy(3),
        q in poly_xy(3),
        i in 0u32..=2,
        j in 0u32..=2,
    ) {
        let a = &WeylOp::from_poly(&p.rename("y", "w")) * &WeylOp::d("x").pow(i);
        let b = &WeylOp::from_poly(&q.rename("x", "z").rename("y", "u")) * &WeylOp::d("u").pow(j);
        prop_assume!(a.vars().iter().all(|v| !b.vars().contains(v)));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn parameter_is_central(a in weyl_op(3, 2, true)) {
        let s = WeylOp::param();
        prop_assert_eq!(&a * &s, &s * &a);
    }

    #[test]
    fn commutator_of_d_is_partial(p in poly_xy(4)) {
        let lhs = WeylOp::d("x").commutator(&WeylOp::from_poly(&p));
        prop_assert_eq!(lhs, WeylOp::from_poly(&p.partial("x")));
    }

    #[test]
    fn param_coefficients_reassemble(a in weyl_op(4, 2, true)) {
        prop_assert_eq!(WeylOp::from_param_coefficients(&a.param_coefficients()), a);
    }

    #[test]
    fn bipoly_evaluation_is_a_homomorphism(
        k in 0u32..=3,
        l in 0u32..=3,
        chi in weyl_op(3, 1, false),
    ) {
        let s = MPoly::var("s");
        let t = MPoly::var("t");
        let p = &s.pow(k) + &t.pow(l);
        let q = &s + &t;
        prop_assert_eq!(
            eval_bipoly_at_operator(&(&p * &q), &chi),
            &eval_bipoly_at_operator(&p, &chi) * &eval_bipoly_at_operator(&q, &chi)
        );
    }
}
