#![allow(dead_code)]

use proptest::prelude::*;
use tsbs_core::{rat, FactoredPoly, MPoly, Rational, WeylOp};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| *r != rat(0, 1))
}

/// Polynomials in `x`, `y` with at most `max_terms` terms of degree `<= 3`.
pub fn poly_xy(max_terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((small_rational(), 0u32..=3, 0u32..=3), 0..=max_terms).prop_map(|terms| {
        terms
            .into_iter()
            .fold(MPoly::zero(), |acc, (c, a, b)| &acc + &MPoly::monomial(c, &[("x", a), ("y", b)]))
    })
}

/// Polynomials in `x`, `y`, `s`.
pub fn poly_xys(max_terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((small_rational(), 0u32..=2, 0u32..=2, 0u32..=2), 0..=max_terms).prop_map(|terms| {
        terms.into_iter().fold(MPoly::zero(), |acc, (c, a, b, k)| {
            &acc + &MPoly::monomial(c, &[("x", a), ("y", b), ("s", k)])
        })
    })
}

fn op_term(c: Rational, e: [u32; 5]) -> WeylOp {
    let [xa, ya, dx, dy, s] = e;
    let factors = [
        WeylOp::x("x").pow(xa),
        WeylOp::x("y").pow(ya),
        WeylOp::d("x").pow(dx),
        WeylOp::d("y").pow(dy),
        WeylOp::param().pow(s),
    ];
    factors.iter().fold(WeylOp::scalar(c), |acc, f| &acc * f)
}

/// Normal-ordered operators on `x`, `y` with parameter, each exponent `<= max_exp`.
pub fn weyl_op(max_terms: usize, max_exp: u32, with_param: bool) -> impl Strategy<Value = WeylOp> {
    let s_max = if with_param { 1 } else { 0 };
    prop::collection::vec(
        (small_rational(), [0..=max_exp, 0..=max_exp, 0..=max_exp, 0..=max_exp, 0..=s_max]),
        0..=max_terms,
    )
    .prop_map(|terms| terms.into_iter().fold(WeylOp::zero(), |acc, (c, e)| &acc + &op_term(c, e)))
}

/// Monic products of `(s + k/d)` with `|k| <= 6`, `d <= 4`, multiplicity `<= 3`
/// and at most `max_roots` roots.
pub fn factored(max_roots: usize) -> impl Strategy<Value = FactoredPoly> {
    prop::collection::vec(((-6i64..=6, 1i64..=4), 1u32..=3), 0..=max_roots)
        .prop_map(|fs| FactoredPoly::from_factors(fs.into_iter().map(|((k, d), m)| (rat(k, d), m))))
}

/// As [`factored`], with at least one root.
pub fn factored_nonconstant(max_roots: usize) -> impl Strategy<Value = FactoredPoly> {
    factored(max_roots).prop_filter("non-constant", |p| !p.is_one())
}

/// Operators on `x`, `y`, `z` whose terms have total degree `<= 3` in the
/// variables and derivations, optionally times `s`.
pub fn weyl_op3(max_terms: usize) -> impl Strategy<Value = WeylOp> {
    let letter = prop_oneof![
        Just(WeylOp::one()),
        Just(WeylOp::x("x")),
        Just(WeylOp::x("y")),
        Just(WeylOp::x("z")),
        Just(WeylOp::d("x")),
        Just(WeylOp::d("y")),
        Just(WeylOp::d("z")),
    ];
    let term = (small_rational(), prop::collection::vec(letter, 3), any::<bool>()).prop_map(
        |(c, letters, with_s)| {
            let mut xs = WeylOp::one();
            let mut ds = WeylOp::one();
            for l in letters {
                if l.order() > 0 {
                    ds = &ds * &l;
                } else {
                    xs = &xs * &l;
                }
            }
            let s = if with_s { WeylOp::param() } else { WeylOp::one() };
            &(&WeylOp::scalar(c) * &(&xs * &ds)) * &s
        },
    );
    prop::collection::vec(term, 0..=max_terms)
        .prop_map(|ts| ts.iter().fold(WeylOp::zero(), |acc, t| &acc + t))
}
