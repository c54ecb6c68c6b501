//! Factored polynomials and the star product.
//!
//! `a * b` has root opposites `R_a + R_b`, where `gamma` gets multiplicity
//! `max { m_alpha(a) + m_beta(b) - 1 : alpha + beta = gamma }`. Equivalently
//! `(a * b)(s + t)` generates `<a(s), b(t)>` intersected with `Q[s + t]`;
//! [`star_oracle`] computes it that way and the cofactor routines extract
//! the witnesses of that ideal membership.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{self, MPoly, Rational, AUX_PARAM, PARAM};
use crate::error::{Error, Result};

/// Monic polynomial `prod (s + alpha)^m`, stored by root opposite `alpha`.
///
/// The empty product is the constant polynomial 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactoredPoly {
    factors: BTreeMap<Rational, u32>,
}

impl FactoredPoly {
    pub fn one() -> Self {
        Self::default()
    }

    /// `(s + alpha)^mult`.
    pub fn linear_power(alpha: Rational, mult: u32) -> Self {
        Self::from_factors([(alpha, mult)])
    }

    /// Product of `(s + alpha)^m`; repeated opposites accumulate and zero
    /// multiplicities are dropped.
    pub fn from_factors<I: IntoIterator<Item = (Rational, u32)>>(factors: I) -> Self {
        let mut map = BTreeMap::new();
        for (alpha, m) in factors {
            if m > 0 {
                *map.entry(alpha).or_insert(0) += m;
            }
        }
        FactoredPoly { factors: map }
    }

    /// Pairs `(root opposite, multiplicity)` in increasing order of the opposite.
    pub fn factors(&self) -> impl Iterator<Item = (&Rational, u32)> {
        self.factors.iter().map(|(a, &m)| (a, m))
    }

    pub fn root_opposites(&self) -> impl Iterator<Item = &Rational> {
        self.factors.keys()
    }

    pub fn multiplicity(&self, alpha: &Rational) -> u32 {
        self.factors.get(alpha).copied().unwrap_or(0)
    }

    pub fn num_roots(&self) -> usize {
        self.factors.len()
    }

    pub fn degree(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.factors.iter().fold(Rational::one(), |acc, (a, &m)| acc * algebra::rational::pow(&(x + a), m))
    }

    /// Expanded polynomial in `var`.
    pub fn to_poly(&self, var: &str) -> MPoly {
        let x = MPoly::var(var);
        self.factors
            .iter()
            .fold(MPoly::one(), |acc, (a, &m)| &acc * &(&x + &MPoly::constant(a.clone())).pow(m))
    }

    /// Ordinary product: multiplicities add.
    pub fn product(&self, other: &FactoredPoly) -> FactoredPoly {
        Self::from_factors(self.factors().chain(other.factors()).map(|(a, m)| (a.clone(), m)))
    }

    /// `p(s + c)`, i.e. every root opposite moves by `c`.
    pub fn shift(&self, c: &Rational) -> FactoredPoly {
        Self::from_factors(self.factors().map(|(a, m)| (a + c, m)))
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        FactoredDisplay { poly: self, var }
    }
}

struct FactoredDisplay<'a> {
    poly: &'a FactoredPoly,
    var: &'a str,
}

impl fmt::Display for FactoredDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_one() {
            return write!(f, "1");
        }
        for (alpha, m) in self.poly.factors() {
            if alpha.is_zero() {
                write!(f, "{}", self.var)?;
            } else if algebra::rational::is_negative(alpha) {
                write!(f, "({}-{})", self.var, -alpha)?;
            } else {
                write!(f, "({}+{})", self.var, alpha)?;
            }
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in(PARAM))
    }
}

/// The star product. A constant factor absorbs everything: `1 * b = 1`.
pub fn star(a: &FactoredPoly, b: &FactoredPoly) -> FactoredPoly {
    let mut out: BTreeMap<Rational, u32> = BTreeMap::new();
    for (alpha, ma) in a.factors() {
        for (beta, mb) in b.factors() {
            let m = out.entry(alpha + beta).or_insert(0);
            *m = (*m).max(ma + mb - 1);
        }
    }
    FactoredPoly { factors: out }
}

pub fn lcm_factored(a: &FactoredPoly, b: &FactoredPoly) -> FactoredPoly {
    let mut out = a.factors.clone();
    for (beta, mb) in b.factors() {
        let m = out.entry(beta.clone()).or_insert(0);
        *m = (*m).max(mb);
    }
    FactoredPoly { factors: out }
}

pub fn gcd_factored(a: &FactoredPoly, b: &FactoredPoly) -> FactoredPoly {
    FactoredPoly::from_factors(a.factors().filter_map(|(alpha, ma)| {
        let mb = b.multiplicity(alpha);
        (mb > 0).then(|| (alpha.clone(), ma.min(mb)))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CofactorForm {
    /// `(b * c)(s) = A(s,t) b(s-t) + B(s,t) c(t)`
    Theorem,
    /// `(a * b)(s+t) = A(s,t) a(s) + B(s,t) b(t)`
    Sum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorPair {
    pub a: MPoly,
    pub b: MPoly,
    pub form: CofactorForm,
}

impl CofactorPair {
    /// Left side minus right side of the defining identity; zero iff the pair is valid.
    pub fn residual(&self, left: &FactoredPoly, right: &FactoredPoly) -> MPoly {
        let s = MPoly::var(PARAM);
        let t = MPoly::var(AUX_PARAM);
        let product = star(left, right).to_poly(PARAM);
        let (target, left_poly) = match self.form {
            CofactorForm::Sum => (product.substitute(PARAM, &(&s + &t)), left.to_poly(PARAM)),
            CofactorForm::Theorem => (product, left.to_poly(PARAM).substitute(PARAM, &(&s - &t))),
        };
        let combo = &(&self.a * &left_poly) + &(&self.b * &right.to_poly(AUX_PARAM));
        &combo - &target
    }
}

/// Cofactors with `(a * b)(s+t) = A'(s,t) a(s) + B'(s,t) b(t)`.
///
/// `A'` is the quotient of `(a * b)(s+t)` by `a(s)` in `s`; the remainder has
/// `s`-degree below `deg a`, and since `{a(s), b(t)}` have coprime leading
/// monomials every `s`-coefficient of it is divisible by `b(t)`.
pub fn cofactors_sum_form(a: &FactoredPoly, b: &FactoredPoly) -> Result<CofactorPair> {
    let expanded = algebra::shift_expand(&star(a, b).to_poly("u"));
    let (quotient, remainder) = algebra::divide_in_var(&expanded, &a.to_poly(PARAM));
    let b_t = b.to_poly(AUX_PARAM);
    let mut coeffs = Vec::new();
    for r in remainder.coeffs_in(PARAM) {
        let q = r.exact_div(&b_t).map_err(|_| {
            Error::InternalInconsistency(format!("remainder coefficient {r} is not a multiple of {b_t}"))
        })?;
        coeffs.push(q);
    }
    Ok(CofactorPair { a: quotient, b: MPoly::from_coeffs_in(PARAM, &coeffs), form: CofactorForm::Sum })
}

/// Cofactors with `(b * c)(s) = A(s,t) b(s-t) + B(s,t) c(t)`, obtained from
/// the sum form by `s -> s - t`.
pub fn cofactors_theorem_form(b: &FactoredPoly, c: &FactoredPoly) -> Result<CofactorPair> {
    let sum = cofactors_sum_form(b, c)?;
    let shifted = &MPoly::var(PARAM) - &MPoly::var(AUX_PARAM);
    Ok(CofactorPair {
        a: sum.a.substitute(PARAM, &shifted),
        b: sum.b.substitute(PARAM, &shifted),
        form: CofactorForm::Theorem,
    })
}

/// Multiplication by `s + t` on `Q[s,t] / <a(s), b(t)>`, in the monomial
/// basis `s^i t^j` with `i < deg a`, `j < deg b` (index `i * deg b + j`).
struct SumOperator {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl SumOperator {
    fn dim(&self) -> usize {
        (self.a.len() - 1) * (self.b.len() - 1)
    }

    fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let (da, db) = (self.a.len() - 1, self.b.len() - 1);
        let mut w = vec![Rational::zero(); v.len()];
        for i in 0..da {
            for j in 0..db {
                let c = &v[i * db + j];
                if c.is_zero() {
                    continue;
                }
                // s * s^i t^j, with s^da = -sum a_k s^k
                if i + 1 < da {
                    w[(i + 1) * db + j] += c;
                } else {
                    for k in 0..da {
                        w[k * db + j] -= c * &self.a[k];
                    }
                }
                if j + 1 < db {
                    w[i * db + j + 1] += c;
                } else {
                    for k in 0..db {
                        w[i * db + k] -= c * &self.b[k];
                    }
                }
            }
        }
        w
    }
}

/// Brute-force star product: the minimal monic generator of
/// `<a(s), b(t)>` intersected with `Q[s+t]`.
///
/// `p(s+t)` lies in the ideal iff `p(M) 1 = 0` for `M` the multiplication by
/// `s + t` on the quotient ring, so the generator is the minimal polynomial
/// of `1` under `M`, read off the first linear dependence in the Krylov
/// sequence `1, M 1, M^2 1, ...`. Its roots are then split off by synthetic
/// division over the candidates `R_a + R_b`.
pub fn star_oracle(a: &FactoredPoly, b: &FactoredPoly) -> FactoredPoly {
    let coeffs = |p: &FactoredPoly| p.to_poly(PARAM).univariate_coeffs(PARAM).expect("univariate");
    let op = SumOperator { a: coeffs(a), b: coeffs(b) };
    let n = op.dim();

    // Echelon rows: (pivot, reduced vector, its combination of Krylov vectors).
    let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut v = vec![Rational::zero(); n];
    if n > 0 {
        v[0] = Rational::one();
    }
    let minimal = loop {
        let k = rows.len();
        let mut vec = v.clone();
        let mut combo = vec![Rational::zero(); k + 1];
        combo[k] = Rational::one();
        for (pivot, row, row_combo) in &rows {
            if vec[*pivot].is_zero() {
                continue;
            }
            let f = vec[*pivot].clone();
            for (x, y) in vec.iter_mut().zip(row) {
                *x -= &f * y;
            }
            for (x, y) in combo.iter_mut().zip(row_combo) {
                *x -= &f * y;
            }
        }
        match vec.iter().position(|x| !x.is_zero()) {
            None => break combo,
            Some(pivot) => {
                let inv = vec[pivot].recip();
                vec.iter_mut().for_each(|x| *x *= &inv);
                combo.iter_mut().for_each(|x| *x *= &inv);
                rows.push((pivot, vec, combo));
                v = op.apply(&v);
            }
        }
    };

    let mut poly = minimal;
    let mut factors = Vec::new();
    let candidates: std::collections::BTreeSet<Rational> =
        a.root_opposites().flat_map(|x| b.root_opposites().map(move |y| x + y)).collect();
    for gamma in candidates {
        let root = -&gamma;
        let mut m = 0;
        loop {
            // Synthetic division by (u - root).
            let mut quotient = vec![Rational::zero(); poly.len() - 1];
            let mut carry = Rational::zero();
            for i in (0..poly.len()).rev() {
                carry = &poly[i] + &carry * &root;
                if i > 0 {
                    quotient[i - 1] = carry.clone();
                }
            }
            if poly.len() == 1 || !carry.is_zero() {
                break;
            }
            poly = quotient;
            m += 1;
        }
        if m > 0 {
            factors.push((gamma, m));
        }
    }
    assert!(poly.len() == 1, "minimal polynomial has roots outside R_a + R_b");
    FactoredPoly::from_factors(factors)
}
