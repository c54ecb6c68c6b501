//! Exact rational and multivariate polynomial arithmetic.

mod mpoly;
pub mod rational;

use std::cmp::Ordering;

pub(crate) use mpoly::{power_factor, write_monomial};
pub use mpoly::{MPoly, Monomial};
pub use rational::{int, rat, Rational};

/// The central parameter of functional equations.
pub const PARAM: &str = "s";
/// The auxiliary parameter of bivariate cofactors and Euler certificates.
pub const AUX_PARAM: &str = "t";

/// Polynomial in the reserved parameters `s` and `t` only.
pub type BiPoly = MPoly;

pub fn is_parameter(name: &str) -> bool {
    name == PARAM || name == AUX_PARAM
}

/// Canonical variable order: geometric variables by name, then `s`, then `t`.
pub fn var_order(a: &str, b: &str) -> Ordering {
    (is_parameter(a), a).cmp(&(is_parameter(b), b))
}

pub fn sort_vars(vars: &mut [String]) {
    vars.sort_by(|a, b| var_order(a, b));
}

pub(crate) fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    if a == b {
        return a.to_vec();
    }
    let mut out: Vec<String> = a.iter().chain(b).cloned().collect();
    sort_vars(&mut out);
    out.dedup();
    out
}

pub fn is_bipoly(p: &MPoly) -> bool {
    p.vars().iter().all(|v| is_parameter(v))
}

/// `p(s + t)` for a polynomial `p` in a single variable.
pub fn shift_expand(p: &MPoly) -> BiPoly {
    assert!(p.vars().len() <= 1, "shift_expand expects a univariate polynomial");
    match p.vars().first() {
        None => p.clone(),
        Some(u) => {
            let u = u.clone();
            p.substitute(&u, &(&MPoly::var(PARAM) + &MPoly::var(AUX_PARAM)))
        }
    }
}

/// Division of a bivariate polynomial by a monic polynomial in `s`.
pub fn divide_in_var(p: &BiPoly, a: &MPoly) -> (BiPoly, BiPoly) {
    p.divide_in_var(a, PARAM)
}
