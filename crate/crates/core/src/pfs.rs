//! The twisted-power module `O[s, F^-1] F^s`.
//!
//! An element is a finite sum `sum_k p_k F^(s+k)` with polynomial
//! coefficients `p_k` in the geometric variables and the parameter. Negative
//! powers of `F` only ever appear as integer levels; nothing is divided.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{int, MPoly, PARAM};
use crate::error::{Error, Result};
use crate::weyl::WeylOp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerElement {
    base: MPoly,
    param: String,
    levels: BTreeMap<i64, MPoly>,
}

impl PowerElement {
    /// `1 * F^param`.
    pub fn mk_power(base: &MPoly, param: &str) -> Result<Self> {
        Self::from_level(base, param, 0, MPoly::one())
    }

    /// `coeff * F^(param + level)`.
    pub fn from_level(base: &MPoly, param: &str, level: i64, coeff: MPoly) -> Result<Self> {
        if base.is_zero() {
            return Err(Error::ZeroBase);
        }
        let mut levels = BTreeMap::new();
        if !coeff.is_zero() {
            levels.insert(level, coeff);
        }
        Ok(PowerElement { base: base.clone(), param: param.to_string(), levels })
    }

    pub fn zero_like(&self) -> Self {
        PowerElement { base: self.base.clone(), param: self.param.clone(), levels: BTreeMap::new() }
    }

    pub fn base(&self) -> &MPoly {
        &self.base
    }

    pub fn param(&self) -> &str {
        &self.param
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, &MPoly)> {
        self.levels.iter().map(|(&k, p)| (k, p))
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    fn insert_add(&mut self, level: i64, p: MPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.levels.entry(level).or_default();
        *slot = &*slot + &p;
        if slot.is_zero() {
            self.levels.remove(&level);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.base != other.base || self.param != other.param {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&k, p) in &other.levels {
            out.insert_add(k, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.mul_poly(&MPoly::constant(int(-1))))
    }

    /// Multiplication by a polynomial in the geometric variables and the parameter.
    pub fn mul_poly(&self, p: &MPoly) -> Self {
        let mut out = self.zero_like();
        for (&k, c) in &self.levels {
            out.insert_add(k, c * p);
        }
        out
    }

    /// `d_var` by the chain rule:
    /// `d(p F^(s+k)) = (dp) F^(s+k) + p (s+k) (dF) F^(s+k-1)`.
    pub fn partial(&self, var: &str) -> Self {
        let df = self.base.partial(var);
        let sigma = MPoly::var(&self.param);
        let mut out = self.zero_like();
        for (&k, p) in &self.levels {
            out.insert_add(k, p.partial(var));
            if !df.is_zero() {
                let factor = &sigma + &MPoly::constant(int(k));
                out.insert_add(k - 1, &(p * &factor) * &df);
            }
        }
        out
    }

    /// `sum_k p_k F^(k - level)`, all levels cleared down to `level`.
    fn cleared_to(&self, level: i64) -> MPoly {
        let mut acc = MPoly::zero();
        let mut power = MPoly::one();
        let mut at = level;
        for (&k, p) in &self.levels {
            while at < k {
                power = &power * &self.base;
                at += 1;
            }
            acc = &acc + &(p * &power);
        }
        acc
    }

    /// Exact equality after clearing both sides to their common lowest level.
    pub fn equal(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        let low =
            [self.levels.keys().next(), other.levels.keys().next()].into_iter().flatten().min().copied();
        Ok(match low {
            None => true,
            Some(low) => self.cleared_to(low) == other.cleared_to(low),
        })
    }

    /// The polynomial obtained at `param = k`, or `None` when some level
    /// would need a negative power of the base.
    pub fn specialize(&self, k: i64) -> Option<MPoly> {
        let value = int(k);
        let mut acc = MPoly::zero();
        for (&level, p) in &self.levels {
            let exp = u32::try_from(k + level).ok()?;
            acc = &acc + &(&p.eval(&self.param, &value) * &self.base.pow(exp));
        }
        Some(acc)
    }
}

impl fmt::Display for PowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.levels.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, p)) in self.levels.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let exp = match k.cmp(&0) {
                std::cmp::Ordering::Equal => self.param.clone(),
                std::cmp::Ordering::Greater => format!("{}+{}", self.param, k),
                std::cmp::Ordering::Less => format!("{}{}", self.param, k),
            };
            write!(f, "({p})*({})^({exp})", self.base)?;
        }
        Ok(())
    }
}

/// Memoized `d^beta` applied to a fixed element; `beta` is aligned with `vars`.
struct DerivativeCache<'a, T> {
    vars: &'a [String],
    memo: HashMap<Vec<u32>, T>,
    step: &'a dyn Fn(&T, &str) -> T,
}

impl<'a, T: Clone> DerivativeCache<'a, T> {
    fn new(vars: &'a [String], start: T, step: &'a dyn Fn(&T, &str) -> T) -> Self {
        let mut memo = HashMap::new();
        memo.insert(vec![0; vars.len()], start);
        DerivativeCache { vars, memo, step }
    }

    fn get(&mut self, beta: &[u32]) -> T {
        if let Some(v) = self.memo.get(beta) {
            return v.clone();
        }
        let i = beta.iter().position(|&e| e > 0).unwrap();
        let mut prev = beta.to_vec();
        prev[i] -= 1;
        let below = self.get(&prev);
        let value = (self.step)(&below, &self.vars[i]);
        self.memo.insert(beta.to_vec(), value.clone());
        value
    }
}

/// Action of an operator: variables multiply, `s` multiplies by the
/// element's parameter, derivations act by the chain rule.
pub fn apply(op: &WeylOp, e: &PowerElement) -> Result<PowerElement> {
    if op.has_param() && e.param != PARAM {
        return Err(Error::ParameterMismatch(e.param.clone()));
    }
    let vars = op.vars();
    let step = |el: &PowerElement, v: &str| el.partial(v);
    let mut cache = DerivativeCache::new(vars, e.clone(), &step);
    let mut out = e.zero_like();
    for term in op.terms() {
        let derived = cache.get(term.d);
        let mut powers: Vec<(&str, u32)> = vars.iter().zip(term.x).map(|(v, &k)| (v.as_str(), k)).collect();
        powers.push((e.param.as_str(), term.s));
        let mono = MPoly::monomial(term.coeff.clone(), &powers);
        for (&k, p) in &derived.levels {
            out.insert_add(k, p * &mono);
        }
    }
    Ok(out)
}

/// Plain action of `op` at `s = k` on the polynomial `p`.
pub fn apply_to_polynomial(op: &WeylOp, p: &MPoly, k: i64) -> MPoly {
    let op = op.specialize(&int(k));
    let vars = op.vars();
    let step = |q: &MPoly, v: &str| q.partial(v);
    let mut cache = DerivativeCache::new(vars, p.clone(), &step);
    let mut acc = MPoly::zero();
    for term in op.terms() {
        let derived = cache.get(term.d);
        if derived.is_zero() {
            continue;
        }
        let powers: Vec<(&str, u32)> = vars.iter().zip(term.x).map(|(v, &k)| (v.as_str(), k)).collect();
        acc = &acc + &(&derived * &MPoly::monomial(term.coeff.clone(), &powers));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn x2() -> MPoly {
        MPoly::var("x").pow(2)
    }

    #[test]
    fn mk_power_examples() {
        let e = PowerElement::mk_power(&x2(), "s").unwrap();
        assert_eq!(e.levels().count(), 1);
        let cusp = &x2() + &MPoly::var("y").pow(3);
        assert!(PowerElement::mk_power(&cusp, "u").is_ok());
        assert!(matches!(PowerElement::mk_power(&MPoly::zero(), "s"), Err(Error::ZeroBase)));
    }

    #[test]
    fn apply_examples() {
        let e = PowerElement::mk_power(&x2(), "s").unwrap();
        let got = apply(&WeylOp::d("x"), &e).unwrap();
        let two_s_x = MPoly::monomial(rat(2, 1), &[("s", 1), ("x", 1)]);
        let expected = PowerElement::from_level(&x2(), "s", -1, two_s_x).unwrap();
        assert_eq!(got, expected);

        let p = &WeylOp::scalar(rat(1, 2)) * &(&WeylOp::d("x") * &WeylOp::x("x"));
        let got = apply(&p, &e).unwrap();
        let b = &MPoly::var("s") + &MPoly::constant(rat(1, 2));
        assert!(got.equal(&e.mul_poly(&b)).unwrap());

        let y3 = MPoly::var("y").pow(3);
        let g = PowerElement::mk_power(&y3, "t").unwrap();
        let q = &WeylOp::scalar(rat(1, 9)) * &(&WeylOp::d("y").pow(2) * &WeylOp::x("y").pow(2));
        let got = apply(&q, &g).unwrap();
        let t = MPoly::var("t");
        let c = &(&t + &MPoly::constant(rat(1, 3))) * &(&t + &MPoly::constant(rat(2, 3)));
        assert!(got.equal(&g.mul_poly(&c)).unwrap());
    }

    #[test]
    fn parameter_mismatch() {
        let g = PowerElement::mk_power(&x2(), "t").unwrap();
        assert!(matches!(apply(&WeylOp::param(), &g), Err(Error::ParameterMismatch(_))));
        assert!(apply(&WeylOp::d("x"), &g).is_ok());
    }

    #[test]
    fn equality_examples() {
        let s = MPoly::var("s");
        let e = PowerElement::mk_power(&x2(), "s").unwrap();
        assert!(e.mul_poly(&s).equal(&e.mul_poly(&s)).unwrap());

        let a =
            PowerElement::from_level(&x2(), "s", -1, &(&s * &MPoly::var("x")) * &MPoly::constant(rat(2, 1)))
                .unwrap();
        let b = PowerElement::from_level(&x2(), "s", -1, &s * &MPoly::var("x").scale(&rat(2, 1))).unwrap();
        assert!(a.equal(&b).unwrap());

        let lifted = PowerElement::from_level(&x2(), "s", -1, x2()).unwrap();
        assert!(lifted.equal(&e).unwrap());
        assert_ne!(lifted, e);

        let other = PowerElement::mk_power(&MPoly::var("x"), "s").unwrap();
        assert!(matches!(e.equal(&other), Err(Error::BaseMismatch)));
    }

    #[test]
    fn apply_to_polynomial_examples() {
        let x = MPoly::var("x");
        assert_eq!(apply_to_polynomial(&WeylOp::d("x"), &x.pow(3), 1), x.pow(2).scale(&rat(3, 1)));
        let p = &WeylOp::scalar(rat(1, 2)) * &(&WeylOp::d("x") * &WeylOp::x("x"));
        assert_eq!(apply_to_polynomial(&p, &x.pow(4), 2), x.pow(4).scale(&rat(5, 2)));
    }

    #[test]
    fn specialize_clears_levels() {
        let e = PowerElement::mk_power(&x2(), "s").unwrap();
        let d = apply(&WeylOp::d("x"), &e).unwrap();
        assert_eq!(d.specialize(2).unwrap(), MPoly::var("x").pow(3).scale(&rat(4, 1)));
        assert!(d.specialize(0).is_none());
    }
}
