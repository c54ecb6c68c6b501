use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{int, Rational};
use super::{merge_vars, sort_vars};
use crate::error::{Error, Result};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// The variable list is kept sorted (geometric names first, then the
/// reserved parameters `s`, `t`) and trimmed to the variables that actually
/// occur, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        MPoly { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(Rational::one(), &[(name, 1)])
    }

    pub fn monomial(coeff: Rational, powers: &[(&str, u32)]) -> Self {
        let mut vars: Vec<String> = powers.iter().map(|(v, _)| v.to_string()).collect();
        sort_vars(&mut vars);
        vars.dedup();
        let mut exps = vec![0; vars.len()];
        for (v, e) in powers {
            let i = vars.iter().position(|w| w == v).unwrap();
            exps[i] += e;
        }
        Self::from_terms(vars, [(exps, coeff)])
    }

    /// Builds a polynomial from raw (exponents, coefficient) pairs over `vars`.
    /// Repeated exponent vectors are summed.
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent arity mismatch");
            *map.entry(Monomial(exps)).or_insert_with(Rational::zero) += c;
        }
        Self::normalize(vars, map)
    }

    fn normalize(vars: Vec<String>, mut terms: BTreeMap<Monomial, Rational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..vars.len()).map(|i| terms.keys().any(|m| m.0[i] != 0)).collect();
        let mut order: Vec<usize> = (0..vars.len()).filter(|&i| used[i]).collect();
        order.sort_by(|&a, &b| super::var_order(&vars[a], &vars[b]));
        if order.len() == vars.len() && order.iter().enumerate().all(|(i, &j)| i == j) {
            return MPoly { vars, terms };
        }
        let new_vars: Vec<String> = order.iter().map(|&i| vars[i].clone()).collect();
        let terms =
            terms.into_iter().map(|(m, c)| (Monomial(order.iter().map(|&i| m.0[i]).collect()), c)).collect();
        MPoly { vars: new_vars, terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial, `None` if some variable occurs.
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.vars.is_empty() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn contains_var(&self, var: &str) -> bool {
        self.var_index(var).is_some()
    }

    fn var_index(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Leading term under graded lex.
    pub fn leading_term(&self) -> Option<(&[u32], &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (m.0.as_slice(), c))
    }

    fn lifted(&self, target: &[String]) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|w| w == v).expect("target must contain vars"))
            .collect();
        let n = target.len();
        self.terms.iter().map(move |(m, c)| {
            let mut e = vec![0; n];
            for (k, &i) in map.iter().enumerate() {
                e[i] = m.0[k];
            }
            (e, c)
        })
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to `var` (zero if absent).
    pub fn partial(&self, var: &str) -> MPoly {
        let Some(i) = self.var_index(var) else {
            return MPoly::zero();
        };
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            (e, c * int(k as i64))
        });
        MPoly::from_terms(self.vars.clone(), terms)
    }

    /// Replaces every occurrence of `var` by `value`.
    pub fn substitute(&self, var: &str, value: &MPoly) -> MPoly {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        let mut powers = vec![MPoly::one()];
        let mut acc = MPoly::zero();
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut e = m.0.clone();
            e[i] = 0;
            let rest = MPoly::from_terms(self.vars.clone(), [(e, c.clone())]);
            acc = &acc + &(&rest * &powers[k]);
        }
        acc
    }

    pub fn eval(&self, var: &str, value: &Rational) -> MPoly {
        self.substitute(var, &MPoly::constant(value.clone()))
    }

    pub fn rename(&self, from: &str, to: &str) -> MPoly {
        if from == to || !self.contains_var(from) {
            return self.clone();
        }
        self.substitute(from, &MPoly::var(to))
    }

    /// Coefficients `[c_0, c_1, ...]` with `self = sum c_k var^k`.
    pub fn coeffs_in(&self, var: &str) -> Vec<MPoly> {
        let Some(i) = self.var_index(var) else {
            return if self.is_zero() { Vec::new() } else { vec![self.clone()] };
        };
        let mut buckets: Vec<Vec<(Vec<u32>, Rational)>> = Vec::new();
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            if buckets.len() <= k {
                buckets.resize_with(k + 1, Vec::new);
            }
            let mut e = m.0.clone();
            e[i] = 0;
            buckets[k].push((e, c.clone()));
        }
        buckets.into_iter().map(|b| MPoly::from_terms(self.vars.clone(), b)).collect()
    }

    pub fn from_coeffs_in(var: &str, coeffs: &[MPoly]) -> MPoly {
        let x = MPoly::var(var);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    /// Rational coefficients of a polynomial in at most the single variable `var`.
    pub fn univariate_coeffs(&self, var: &str) -> Option<Vec<Rational>> {
        if self.vars.iter().any(|v| v != var) {
            return None;
        }
        Some(self.coeffs_in(var).iter().map(|c| c.constant_value().unwrap()).collect())
    }

    /// Division by a monic univariate `divisor(var)`, treating every other
    /// variable as a coefficient. Returns `(quotient, remainder)` with
    /// `self = quotient * divisor + remainder` and `deg_var(remainder) < deg(divisor)`.
    pub fn divide_in_var(&self, divisor: &MPoly, var: &str) -> (MPoly, MPoly) {
        let a = divisor.univariate_coeffs(var).expect("divisor must be univariate in the division variable");
        let d = a.len() - 1;
        assert!(a[d].is_one(), "divisor must be monic");
        let mut rem = self.coeffs_in(var);
        if rem.len() <= d {
            return (MPoly::zero(), self.clone());
        }
        let mut quot = vec![MPoly::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let lead = std::mem::take(&mut rem[k]);
            if lead.is_zero() {
                continue;
            }
            for (j, aj) in a.iter().enumerate().take(d) {
                let idx = k - d + j;
                rem[idx] = &rem[idx] - &lead.scale(aj);
            }
            quot[k - d] = lead;
        }
        rem.truncate(d);
        (MPoly::from_coeffs_in(var, &quot), MPoly::from_coeffs_in(var, &rem))
    }

    /// Exact quotient `self / divisor`, or `NonExact` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &MPoly) -> Result<MPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let vars = merge_vars(&self.vars, &divisor.vars);
        let d: BTreeMap<Monomial, Rational> =
            divisor.lifted(&vars).map(|(e, c)| (Monomial(e), c.clone())).collect();
        let (d_lead, d_coeff) = d.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem: BTreeMap<Monomial, Rational> =
            self.lifted(&vars).map(|(e, c)| (Monomial(e), c.clone())).collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.iter().next_back() {
            if m.0.iter().zip(&d_lead.0).any(|(a, b)| a < b) {
                return Err(Error::NonExact);
            }
            let qe: Vec<u32> = m.0.iter().zip(&d_lead.0).map(|(a, b)| a - b).collect();
            let qc = c / &d_coeff;
            for (dm, dc) in &d {
                let e = Monomial(dm.0.iter().zip(&qe).map(|(a, b)| a + b).collect());
                let entry = rem.entry(e.clone()).or_insert_with(Rational::zero);
                *entry -= &qc * dc;
                if entry.is_zero() {
                    rem.remove(&e);
                }
            }
            quot.push((qe, qc));
        }
        Ok(MPoly::from_terms(vars, quot))
    }
}

impl Default for MPoly {
    fn default() -> Self {
        MPoly::zero()
    }
}

impl From<Rational> for MPoly {
    fn from(c: Rational) -> Self {
        MPoly::constant(c)
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let vars = merge_vars(&self.vars, &rhs.vars);
        let terms =
            self.lifted(&vars).chain(rhs.lifted(&vars)).map(|(e, c)| (e, c.clone())).collect::<Vec<_>>();
        MPoly::from_terms(vars, terms)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let vars = merge_vars(&self.vars, &rhs.vars);
        let lhs: Vec<_> = self.lifted(&vars).collect();
        let rhs: Vec<_> = rhs.lifted(&vars).collect();
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ea, ca) in &lhs {
            for (eb, cb) in &rhs {
                let e = Monomial(ea.iter().zip(eb).map(|(a, b)| a + b).collect());
                *map.entry(e).or_insert_with(Rational::zero) += *ca * *cb;
            }
        }
        MPoly::normalize(vars, map)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

pub(crate) fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    coeff: &Rational,
    factors: &[String],
    leading: bool,
) -> fmt::Result {
    let negative = super::rational::is_negative(coeff);
    let abs = if negative { -coeff } else { coeff.clone() };
    match (leading, negative) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    if factors.is_empty() {
        return write!(f, "{abs}");
    }
    if !abs.is_one() {
        write!(f, "{abs}*")?;
    }
    write!(f, "{}", factors.join("*"))
}

pub(crate) fn power_factor(name: &str, exp: u32) -> Option<String> {
    match exp {
        0 => None,
        1 => Some(name.to_string()),
        e => Some(format!("{name}^{e}")),
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let factors: Vec<String> =
                self.vars.iter().zip(&m.0).filter_map(|(v, &e)| power_factor(v, e)).collect();
            write_monomial(f, c, &factors, k == 0)?;
        }
        Ok(())
    }
}
