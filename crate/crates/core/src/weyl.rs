//! Normal-ordered Weyl algebra `D[s]` with one central parameter.
//!
//! Every term is `c * x^a * d^b * s^j`: multiplication operators to the left
//! of derivations, `s` commuting with everything. Products are brought back
//! to normal order with `d^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) d^(b-k)`
//! per variable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::algebra::rational::{binomial, falling_factorial};
use crate::algebra::{
    is_parameter, merge_vars, power_factor, sort_vars, var_order, write_monomial, BiPoly, MPoly, Rational,
    AUX_PARAM, PARAM,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct OpKey {
    x: Vec<u32>,
    d: Vec<u32>,
    s: u32,
}

impl OpKey {
    fn order(&self) -> u32 {
        self.x.iter().chain(&self.d).sum()
    }
}

impl Ord for OpKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.s
            .cmp(&other.s)
            .then_with(|| self.order().cmp(&other.order()))
            .then_with(|| self.d.cmp(&other.d))
            .then_with(|| self.x.cmp(&other.x))
    }
}

impl PartialOrd for OpKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A differential operator with polynomial coefficients and a central parameter `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylOp {
    vars: Vec<String>,
    terms: BTreeMap<OpKey, Rational>,
}

/// One normal-ordered term, exponents aligned with [`WeylOp::vars`].
#[derive(Clone, Copy, Debug)]
pub struct OpTerm<'a> {
    pub x: &'a [u32],
    pub d: &'a [u32],
    pub s: u32,
    pub coeff: &'a Rational,
}

impl WeylOp {
    pub fn zero() -> Self {
        WeylOp { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::from_raw(Vec::new(), [(Vec::new(), Vec::new(), 0, c)])
    }

    /// Multiplication by the variable `var`.
    pub fn x(var: &str) -> Self {
        Self::from_raw(vec![var.to_string()], [(vec![1], vec![0], 0, Rational::one())])
    }

    /// The derivation `d_var`.
    pub fn d(var: &str) -> Self {
        Self::from_raw(vec![var.to_string()], [(vec![0], vec![1], 0, Rational::one())])
    }

    /// The central parameter `s`.
    pub fn param() -> Self {
        Self::from_raw(Vec::new(), [(Vec::new(), Vec::new(), 1, Rational::one())])
    }

    /// Multiplication by a polynomial; an occurrence of `s` becomes the parameter.
    pub fn from_poly(p: &MPoly) -> Self {
        assert!(!p.contains_var(AUX_PARAM), "`t` cannot appear in an operator coefficient");
        let pidx = p.vars().iter().position(|v| v == PARAM);
        let vars: Vec<String> = p.vars().iter().filter(|v| *v != PARAM).cloned().collect();
        let terms = p.terms().map(|(e, c)| {
            let s = pidx.map_or(0, |i| e[i]);
            let x: Vec<u32> =
                e.iter().enumerate().filter(|(i, _)| Some(*i) != pidx).map(|(_, &k)| k).collect();
            let d = vec![0; x.len()];
            (x, d, s, c.clone())
        });
        Self::from_raw(vars, terms)
    }

    /// Builds an operator from `(x exponents, d exponents, s exponent, coeff)`
    /// over `vars`, summing repeated keys.
    pub fn from_raw<I>(vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Vec<u32>, u32, Rational)>,
    {
        assert!(vars.iter().all(|v| !is_parameter(v)), "parameters are not operator variables");
        let mut map: BTreeMap<OpKey, Rational> = BTreeMap::new();
        for (x, d, s, c) in terms {
            assert!(x.len() == vars.len() && d.len() == vars.len(), "exponent arity mismatch");
            *map.entry(OpKey { x, d, s }).or_insert_with(Rational::zero) += c;
        }
        Self::normalize(vars, map)
    }

    fn normalize(vars: Vec<String>, mut terms: BTreeMap<OpKey, Rational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let mut keep: Vec<usize> =
            (0..vars.len()).filter(|&i| terms.keys().any(|k| k.x[i] != 0 || k.d[i] != 0)).collect();
        keep.sort_by(|&a, &b| var_order(&vars[a], &vars[b]));
        if keep.len() == vars.len() && keep.iter().enumerate().all(|(i, &j)| i == j) {
            return WeylOp { vars, terms };
        }
        let new_vars = keep.iter().map(|&i| vars[i].clone()).collect();
        let terms = terms
            .into_iter()
            .map(|(k, c)| {
                let key = OpKey {
                    x: keep.iter().map(|&i| k.x[i]).collect(),
                    d: keep.iter().map(|&i| k.d[i]).collect(),
                    s: k.s,
                };
                (key, c)
            })
            .collect();
        WeylOp { vars: new_vars, terms }
    }

    fn lifted(&self, target: &[String]) -> impl Iterator<Item = (OpKey, &Rational)> + '_ {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|w| w == v).expect("target must contain vars"))
            .collect();
        let n = target.len();
        self.terms.iter().map(move |(k, c)| {
            let mut x = vec![0; n];
            let mut d = vec![0; n];
            for (j, &i) in map.iter().enumerate() {
                x[i] = k.x[j];
                d[i] = k.d[j];
            }
            (OpKey { x, d, s: k.s }, c)
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Terms in decreasing display order.
    pub fn terms(&self) -> impl Iterator<Item = OpTerm<'_>> {
        self.terms.iter().rev().map(|(k, c)| OpTerm { x: &k.x, d: &k.d, s: k.s, coeff: c })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_param(&self) -> bool {
        self.terms.keys().any(|k| k.s > 0)
    }

    pub fn param_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.s).max().unwrap_or(0)
    }

    /// Highest total derivative order.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|k| k.d.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> WeylOp {
        if c.is_zero() {
            return WeylOp::zero();
        }
        WeylOp {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> WeylOp {
        let mut acc = WeylOp::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `[P_0, ..., P_d]`, parameter-free, with `self = sum_j P_j s^j`.
    pub fn param_coefficients(&self) -> Vec<WeylOp> {
        if self.is_zero() {
            return vec![WeylOp::zero()];
        }
        let mut out = vec![BTreeMap::new(); self.param_degree() as usize + 1];
        for (k, c) in &self.terms {
            let key = OpKey { x: k.x.clone(), d: k.d.clone(), s: 0 };
            out[k.s as usize].insert(key, c.clone());
        }
        out.into_iter().map(|t| Self::normalize(self.vars.clone(), t)).collect()
    }

    /// `sum_j P_j s^j`.
    pub fn from_param_coefficients(coeffs: &[WeylOp]) -> WeylOp {
        let mut vars = Vec::new();
        let mut terms = BTreeMap::new();
        for c in coeffs {
            vars = merge_vars(&vars, &c.vars);
        }
        for (j, c) in coeffs.iter().enumerate() {
            for (mut k, v) in c.lifted(&vars) {
                k.s += j as u32;
                terms.insert(k, v.clone());
            }
        }
        Self::normalize(vars, terms)
    }

    /// The operator with `s` specialized to the value `k`.
    pub fn specialize(&self, k: &Rational) -> WeylOp {
        let mut terms: BTreeMap<OpKey, Rational> = BTreeMap::new();
        for (key, c) in &self.terms {
            let v = c * crate::algebra::rational::pow(k, key.s);
            let key = OpKey { x: key.x.clone(), d: key.d.clone(), s: 0 };
            *terms.entry(key).or_insert_with(Rational::zero) += v;
        }
        Self::normalize(self.vars.clone(), terms)
    }

    /// `sum_j P_j (s + sign * chi)^j` with each `P_j` placed on the left.
    ///
    /// `chi` must be parameter-free and share no variable with `self`.
    pub fn substitute_parameter(&self, chi: &WeylOp, sign: i32) -> Result<WeylOp> {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        assert!(!chi.has_param(), "the substituted operator must be parameter-free");
        let clash: Vec<String> = self.vars.iter().filter(|v| chi.vars.contains(v)).cloned().collect();
        if !clash.is_empty() {
            return Err(Error::VariableClash(clash));
        }
        let shifted = &WeylOp::param() + &chi.scale(&Rational::from_integer(sign.into()));
        let mut power = WeylOp::one();
        let mut acc = WeylOp::zero();
        for (j, pj) in self.param_coefficients().iter().enumerate() {
            if j > 0 {
                power = &power * &shifted;
            }
            acc = &acc + &(pj * &power);
        }
        Ok(acc)
    }

    /// The parameter-free operator as a multiplication operator, if it is one.
    pub fn as_poly(&self) -> Option<MPoly> {
        if self.terms.keys().any(|k| k.s > 0 || k.d.iter().any(|&e| e > 0)) {
            return None;
        }
        Some(MPoly::from_terms(self.vars.clone(), self.terms.iter().map(|(k, c)| (k.x.clone(), c.clone()))))
    }

    /// Coefficients `eta_v` of a parameter-free vector field `sum_v eta_v d_v`.
    pub fn as_vector_field(&self) -> Option<Vec<(String, MPoly)>> {
        type Terms = Vec<(Vec<u32>, Rational)>;
        let mut out: Vec<(String, Terms)> = self.vars.iter().map(|v| (v.clone(), Vec::new())).collect();
        for (k, c) in &self.terms {
            if k.s > 0 || k.d.iter().sum::<u32>() != 1 {
                return None;
            }
            let i = k.d.iter().position(|&e| e == 1).unwrap();
            out[i].1.push((k.x.clone(), c.clone()));
        }
        Some(
            out.into_iter()
                .filter(|(_, t)| !t.is_empty())
                .map(|(v, t)| (v, MPoly::from_terms(self.vars.clone(), t)))
                .collect(),
        )
    }

    pub fn commutator(&self, other: &WeylOp) -> WeylOp {
        &(self * other) - &(other * self)
    }
}

/// `A(s, chi) = sum a_ij s^i chi^j` for a polynomial `A(s, t)`.
pub fn eval_bipoly_at_operator(a: &BiPoly, chi: &WeylOp) -> WeylOp {
    assert!(a.vars().iter().all(|v| v == PARAM || v == AUX_PARAM), "expected a polynomial in s and t");
    assert!(!chi.has_param(), "the substituted operator must be parameter-free");
    let mut acc = WeylOp::zero();
    let mut powers = vec![WeylOp::one()];
    for (j, cj) in a.coeffs_in(AUX_PARAM).iter().enumerate() {
        while powers.len() <= j {
            let next = powers.last().unwrap() * chi;
            powers.push(next);
        }
        if !cj.is_zero() {
            acc = &acc + &(&WeylOp::from_poly(cj) * &powers[j]);
        }
    }
    acc
}

/// Product of two aligned normal-ordered terms, accumulated into `out`.
fn mul_terms(a: &OpKey, ca: &Rational, b: &OpKey, cb: &Rational, out: &mut BTreeMap<OpKey, Rational>) {
    let n = a.x.len();
    // Per variable, the expansions of d^b x^c: (k, C(b,k) c!/(c-k)!).
    let choices: Vec<Vec<(u32, Rational)>> = (0..n)
        .map(|i| {
            let (db, xc) = (a.d[i], b.x[i]);
            (0..=db.min(xc)).map(|k| (k, binomial(db, k) * falling_factorial(xc, k))).collect()
        })
        .collect();
    let base = ca * cb;
    let mut idx = vec![0usize; n];
    loop {
        let mut coeff = base.clone();
        let mut x = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        for i in 0..n {
            let (k, ref c) = choices[i][idx[i]];
            coeff *= c;
            x.push(a.x[i] + b.x[i] - k);
            d.push(a.d[i] - k + b.d[i]);
        }
        *out.entry(OpKey { x, d, s: a.s + b.s }).or_insert_with(Rational::zero) += coeff;

        let mut i = 0;
        while i < n {
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
}

impl<'a> Mul<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;

    fn mul(self, rhs: &WeylOp) -> WeylOp {
        if self.is_zero() || rhs.is_zero() {
            return WeylOp::zero();
        }
        let vars = merge_vars(&self.vars, &rhs.vars);
        let lhs: Vec<_> = self.lifted(&vars).collect();
        let rhs: Vec<_> = rhs.lifted(&vars).collect();
        let mut out = BTreeMap::new();
        for (ka, ca) in &lhs {
            for (kb, cb) in &rhs {
                mul_terms(ka, ca, kb, cb, &mut out);
            }
        }
        WeylOp::normalize(vars, out)
    }
}

impl<'a> Add<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;

    fn add(self, rhs: &WeylOp) -> WeylOp {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let vars = merge_vars(&self.vars, &rhs.vars);
        let mut out: BTreeMap<OpKey, Rational> = BTreeMap::new();
        for (k, c) in self.lifted(&vars).chain(rhs.lifted(&vars)) {
            *out.entry(k).or_insert_with(Rational::zero) += c;
        }
        WeylOp::normalize(vars, out)
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;

    fn neg(self) -> WeylOp {
        WeylOp { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

impl<'a> Sub<&'a WeylOp> for &'a WeylOp {
    type Output = WeylOp;

    fn sub(self, rhs: &WeylOp) -> WeylOp {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<WeylOp> for WeylOp {
            type Output = WeylOp;
            fn $f(self, rhs: WeylOp) -> WeylOp {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        -&self
    }
}

impl Default for WeylOp {
    fn default() -> Self {
        WeylOp::zero()
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, t) in self.terms().enumerate() {
            let mut factors: Vec<String> =
                self.vars.iter().zip(t.x).filter_map(|(v, &e)| power_factor(v, e)).collect();
            factors
                .extend(self.vars.iter().zip(t.d).filter_map(|(v, &e)| power_factor(&format!("d_{v}"), e)));
            factors.extend(power_factor(PARAM, t.s));
            write_monomial(f, t.coeff, &factors, n == 0)?;
        }
        Ok(())
    }
}

/// Variables of `a` that also occur in `b`.
pub fn shared_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out: Vec<String> = a.iter().filter(|v| b.contains(v)).cloned().collect();
    sort_vars(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn q(n: i64, d: i64) -> WeylOp {
        WeylOp::scalar(rat(n, d))
    }

    #[test]
    fn canonical_commutation() {
        let dx_x = &WeylOp::d("x") * &WeylOp::x("x");
        assert_eq!(dx_x, &(&WeylOp::x("x") * &WeylOp::d("x")) + &WeylOp::one());
        assert_eq!(dx_x.to_string(), "x*d_x + 1");
        assert_eq!(WeylOp::d("x").commutator(&WeylOp::x("x")), WeylOp::one());
        assert!(WeylOp::d("x").commutator(&WeylOp::x("y")).is_zero());
    }

    #[test]
    fn cusp_operators() {
        let p = &q(1, 2) * &(&WeylOp::d("x") * &WeylOp::x("x"));
        assert_eq!(p.to_string(), "1/2*x*d_x + 1/2");

        let y = WeylOp::x("y");
        let dy = WeylOp::d("y");
        let qop = &q(1, 9) * &(&dy.pow(2) * &y.pow(2));
        let expected = &(&(&(&y.pow(2) * &dy.pow(2)) + &(&y * &dy).scale(&int(4))) + &q(2, 1)) * &q(1, 9);
        assert_eq!(qop, expected);
        assert_eq!(qop.to_string(), "1/9*y^2*d_y^2 + 4/9*y*d_y + 2/9");
    }

    #[test]
    fn substitute_parameter_examples() {
        let chi = &q(1, 3) * &(&WeylOp::x("y") * &WeylOp::d("y"));
        let s = WeylOp::param();
        assert_eq!(s.substitute_parameter(&chi, -1).unwrap(), &s - &chi);

        let euler_x = &(&WeylOp::x("x") * &WeylOp::d("x")) + &WeylOp::one();
        let p = &(&q(1, 2) * &euler_x) * &s;
        let expected = &(&q(1, 2) * &euler_x) * &(&s - &chi);
        assert_eq!(p.substitute_parameter(&chi, -1).unwrap(), expected);

        let free = &WeylOp::x("x") * &WeylOp::d("x");
        assert_eq!(free.substitute_parameter(&chi, -1).unwrap(), free);
        assert_eq!(p.substitute_parameter(&WeylOp::zero(), 1).unwrap(), p);
    }

    #[test]
    fn substitute_parameter_rejects_clash() {
        let chi = &WeylOp::x("x") * &WeylOp::d("x");
        let p = &WeylOp::x("x") * &WeylOp::param();
        assert!(matches!(p.substitute_parameter(&chi, -1), Err(Error::VariableClash(v)) if v == ["x"]));
    }

    #[test]
    fn eval_bipoly_examples() {
        let s = MPoly::var("s");
        let t = MPoly::var("t");
        let chi = &q(1, 3) * &(&WeylOp::x("y") * &WeylOp::d("y"));
        let a = &(&s + &t) + &MPoly::constant(rat(3, 2));
        let expected = &(&WeylOp::param() + &chi) + &q(3, 2);
        assert_eq!(eval_bipoly_at_operator(&a, &chi), expected);
        assert_eq!(eval_bipoly_at_operator(&MPoly::one(), &chi), WeylOp::one());

        let ydy = &WeylOp::x("y") * &WeylOp::d("y");
        let sq = eval_bipoly_at_operator(&t.pow(2), &ydy);
        assert_eq!(sq, &(&WeylOp::x("y").pow(2) * &WeylOp::d("y").pow(2)) + &ydy);
    }

    #[test]
    fn param_coefficient_examples() {
        let euler_x = &q(1, 2) * &(&(&WeylOp::x("x") * &WeylOp::d("x")) + &WeylOp::one());
        let p = &euler_x * &WeylOp::param();
        assert_eq!(p.param_coefficients(), vec![WeylOp::zero(), euler_x.clone()]);

        let xdx = &WeylOp::x("x") * &WeylOp::d("x");
        assert_eq!(xdx.param_coefficients(), vec![xdx.clone()]);

        let s = WeylOp::param();
        let r = &s.pow(2) + &(&WeylOp::x("x") * &s);
        assert_eq!(r.param_coefficients(), vec![WeylOp::zero(), WeylOp::x("x"), WeylOp::one()]);
        assert_eq!(WeylOp::from_param_coefficients(&r.param_coefficients()), r);
    }

    #[test]
    fn vector_field_roundtrip() {
        let chi = &(&q(1, 4) * &(&WeylOp::x("x") * &WeylOp::d("x")))
            + &(&q(1, 2) * &(&WeylOp::x("y") * &WeylOp::d("y")));
        let eta = chi.as_vector_field().unwrap();
        assert_eq!(eta[0], ("x".to_string(), MPoly::var("x").scale(&rat(1, 4))));
        assert_eq!(eta[1], ("y".to_string(), MPoly::var("y").scale(&rat(1, 2))));
        assert!(WeylOp::d("x").pow(2).as_vector_field().is_none());
    }
}
