mod common;

use common::*;
use proptest::prelude::*;
use tsbs_core::star::{cofactors_sum_form, cofactors_theorem_form, lcm_factored};
use tsbs_core::{star, star_oracle, MPoly};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn star_is_symmetric(a in factored(3), b in factored(3)) {
        prop_assert_eq!(star(&a, &b), star(&b, &a));
    }

    #[test]
    fn star_matches_oracle(a in factored_nonconstant(3), b in factored_nonconstant(3)) {
        prop_assert_eq!(star(&a, &b), star_oracle(&a, &b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cofactor_identities(a in factored_nonconstant(3), b in factored_nonconstant(3)) {
        let sum = cofactors_sum_form(&a, &b).unwrap();
        prop_assert_eq!(sum.residual(&a, &b), MPoly::zero());
        let theorem = cofactors_theorem_form(&a, &b).unwrap();
        prop_assert_eq!(theorem.residual(&a, &b), MPoly::zero());
    }

    #[test]
    fn star_degree_bounds(a in factored_nonconstant(3), b in factored_nonconstant(3)) {
        let p = star(&a, &b);
        prop_assert!(p.degree() >= a.degree().max(b.degree()));
        prop_assert!(p.degree() <= a.degree() * b.degree());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn star_distributes_over_lcm(a in factored(3), b in factored(3), c in factored(3)) {
        prop_assert_eq!(
            star(&a, &lcm_factored(&b, &c)),
            lcm_factored(&star(&a, &b), &star(&a, &c))
        );
    }

    #[test]
    fn star_is_associative(a in factored(2), b in factored(2), c in factored(2)) {
        prop_assert_eq!(star(&star(&a, &b), &c), star(&a, &star(&b, &c)));
    }
}
