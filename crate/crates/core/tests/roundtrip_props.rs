mod common;

use common::*;
use proptest::prelude::*;
use tsbs_core::certify::suspension_certificate;
use tsbs_core::json::{certificate_to_json, euler_to_json, load_certificate, load_euler};
use tsbs_core::syntax::{parse_factored, parse_operator, parse_poly, print_factored, print_factored_aux};
use tsbs_core::{compose, Certificate};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn polynomial_print_parse(p in poly_xys(5)) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn operator_print_parse(a in weyl_op(4, 2, true)) {
        prop_assert_eq!(parse_operator(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn factored_print_parse(p in factored(4)) {
        let (back, _) = parse_factored(&print_factored(&p)).unwrap();
        prop_assert_eq!(&back, &p);
        let (back, var) = parse_factored(&print_factored_aux(&p)).unwrap();
        prop_assert_eq!(back, p.clone());
        if !p.is_one() {
            prop_assert_eq!(var.as_deref(), Some("t"));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certificate_json_round_trip(a in 2i64..=4, b in 2i64..=4) {
        let g = suspension_certificate(b, "y").unwrap();
        prop_assert_eq!(load_euler(&euler_to_json(&g)).unwrap(), g.clone());
        let f = Certificate::from_euler(&suspension_certificate(a, "x").unwrap());
        let h = compose(&f, &g).unwrap().certificate;
        prop_assert_eq!(load_certificate(&certificate_to_json(&h)).unwrap(), h);
    }
}
