//! Functional-equation certificates and their verification.
//!
//! A [`Certificate`] records `P(s) f^s = b(s) f^s` together with a
//! decomposition of `P` over the Jacobian generators `[f, f_x1, ..., f_xn]`.
//! An [`EulerCertificate`] records an Euler field `chi(g) = g` and a
//! parameter-free `Q g^t = c(t) g^t` with `Q` decomposed over the partials of
//! `g`. [`compose`] turns one of each into a certificate for `f + g`.

mod compose;
mod suspension;

use std::fmt;

use crate::algebra::{int, MPoly, AUX_PARAM, PARAM};
use crate::error::{Error, Result};
use crate::pfs::{self, PowerElement};
use crate::star::FactoredPoly;
use crate::weyl::WeylOp;

pub use compose::{brieskorn_pham, compose, BrieskornPham, Composition};
pub use suspension::{euler_field, euler_field_over, simple_root_shortcut, suspension_certificate};

/// `P(s) f^s = b(s) f^s` with `P = sum_i C_i * generators[g_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub function: MPoly,
    pub variables: Vec<String>,
    pub btilde: FactoredPoly,
    /// `(C_i, g_i)`: coefficient operator and index into [`Certificate::generators`].
    pub decomposition: Vec<(WeylOp, usize)>,
}

/// Euler field `chi` with `chi(g) = g`, and `Q g^t = c(t) g^t` with `Q` in `D J_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerCertificate {
    pub function: MPoly,
    pub variables: Vec<String>,
    pub euler_field: WeylOp,
    pub q_operator: WeylOp,
    pub ctilde: FactoredPoly,
    /// `(Q_i, j_i)`: `Q = sum_i Q_i * d g / d variables[j_i]`.
    pub q_decomposition: Vec<(WeylOp, usize)>,
    /// `eta_j` with `chi = sum_j eta_j d_{variables[j]}`.
    pub euler_coefficients: Vec<MPoly>,
}

fn jacobian_generators(f: &MPoly, vars: &[String]) -> Vec<MPoly> {
    std::iter::once(f.clone()).chain(vars.iter().map(|v| f.partial(v))).collect()
}

fn reassemble(decomposition: &[(WeylOp, usize)], generators: &[MPoly]) -> Option<WeylOp> {
    let mut acc = WeylOp::zero();
    for (op, i) in decomposition {
        let g = generators.get(*i)?;
        acc = &acc + &(op * &WeylOp::from_poly(g));
    }
    Some(acc)
}

impl Certificate {
    /// `[f, df/dx_1, ..., df/dx_n]` over [`Certificate::variables`].
    pub fn generators(&self) -> Vec<MPoly> {
        jacobian_generators(&self.function, &self.variables)
    }

    /// `P(s)` reassembled from the decomposition.
    pub fn operator(&self) -> Result<WeylOp> {
        reassemble(&self.decomposition, &self.generators())
            .ok_or_else(|| Error::InvalidCertificate("generator index out of range".into()))
    }

    /// The smooth germ `f = var`, with `b = 1` and `P = 1 * df/dvar`.
    pub fn smooth(var: &str) -> Certificate {
        Certificate {
            function: MPoly::var(var),
            variables: vec![var.to_string()],
            btilde: FactoredPoly::one(),
            decomposition: vec![(WeylOp::one(), 1)],
        }
    }

    /// Reads an Euler certificate as an ordinary one: `Q` is `P`, constant in `s`.
    pub fn from_euler(e: &EulerCertificate) -> Certificate {
        Certificate {
            function: e.function.clone(),
            variables: e.variables.clone(),
            btilde: e.ctilde.clone(),
            decomposition: e.q_decomposition.iter().map(|(op, j)| (op.clone(), j + 1)).collect(),
        }
    }
}

impl EulerCertificate {
    pub fn partials(&self) -> Vec<MPoly> {
        self.variables.iter().map(|v| self.function.partial(v)).collect()
    }
}

/// Outcome of a verification: named checks plus, for a failed functional
/// equation, the nonzero residual `P f^s - b f^s`.
#[derive(Clone, Debug)]
pub struct Report {
    pub checks: Vec<Check>,
    pub residual: Option<PowerElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Report {
    fn new() -> Self {
        Report { checks: Vec::new(), residual: None }
    }

    fn record(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) -> bool {
        self.checks.push(Check { name: name.into(), passed, detail });
        passed
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        if let Some(r) = &self.residual {
            writeln!(f, "residual: {r}")?;
        }
        Ok(())
    }
}

fn vars_declared(report: &mut Report, what: &str, used: &[String], declared: &[String]) -> bool {
    let missing: Vec<&String> = used.iter().filter(|v| !declared.contains(v)).collect();
    let detail = (!missing.is_empty()).then(|| {
        format!("undeclared: {}", missing.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", "))
    });
    report.record(format!("{what} uses declared variables"), missing.is_empty(), detail)
}

/// Functional equation check: applies `P(s)` to `f^s` and compares with `b(s) f^s`.
pub fn verify_certificate(c: &Certificate) -> Report {
    let mut report = Report::new();
    if !report.record("function is nonzero", !c.function.is_zero(), None) {
        return report;
    }
    vars_declared(&mut report, "function", c.function.vars(), &c.variables);
    let p = match c.operator() {
        Ok(p) => p,
        Err(e) => {
            report.record("decomposition indices", false, Some(e.to_string()));
            return report;
        }
    };
    if !vars_declared(&mut report, "operator", p.vars(), &c.variables) {
        return report;
    }
    let fs = PowerElement::mk_power(&c.function, PARAM).expect("nonzero base");
    let lhs = pfs::apply(&p, &fs).expect("parameter is s");
    let rhs = fs.mul_poly(&c.btilde.to_poly(PARAM));
    let residual = lhs.sub(&rhs).expect("same base");
    let ok = residual.equal(&fs.zero_like()).expect("same base");
    report.record("P(s) f^s = b(s) f^s", ok, None);
    if !ok {
        report.residual = Some(residual);
    }
    report
}

/// Checks `chi(g) = g`, the shape of `chi`, `Q g^t = c(t) g^t` and both decompositions.
pub fn verify_euler(e: &EulerCertificate) -> Report {
    let mut report = Report::new();
    if !report.record("function is nonzero", !e.function.is_zero(), None) {
        return report;
    }
    let constant = e.function.terms().find(|(m, _)| m.iter().all(|&k| k == 0));
    report.record(
        "function vanishes at the origin",
        constant.is_none(),
        constant.map(|(_, c)| format!("constant term {c}")),
    );
    vars_declared(&mut report, "function", e.function.vars(), &e.variables);
    vars_declared(&mut report, "Euler field", e.euler_field.vars(), &e.variables);
    vars_declared(&mut report, "Q", e.q_operator.vars(), &e.variables);

    let chi_free = !e.euler_field.has_param();
    report.record("Euler field is parameter-free", chi_free, None);
    if chi_free {
        let image = pfs::apply_to_polynomial(&e.euler_field, &e.function, 0);
        let ok = image == e.function;
        report.record("chi(g) = g", ok, (!ok).then(|| format!("chi(g) = {image}")));
    }

    let field_ok = e.euler_coefficients.len() == e.variables.len() && {
        let rebuilt = e
            .variables
            .iter()
            .zip(&e.euler_coefficients)
            .fold(WeylOp::zero(), |acc, (v, eta)| &acc + &(&WeylOp::from_poly(eta) * &WeylOp::d(v)));
        rebuilt == e.euler_field
    };
    report.record("chi = sum eta_j d_j", field_ok, None);

    let q_free = !e.q_operator.has_param();
    report.record("Q is parameter-free", q_free, None);
    let q_ok = reassemble(&e.q_decomposition, &e.partials()).is_some_and(|q| q == e.q_operator);
    report.record("Q = sum Q_j dg/dy_j", q_ok, None);

    if q_free {
        let gt = PowerElement::mk_power(&e.function, AUX_PARAM).expect("nonzero base");
        let lhs = pfs::apply(&e.q_operator, &gt).expect("Q is parameter-free");
        let rhs = gt.mul_poly(&e.ctilde.to_poly(AUX_PARAM));
        let residual = lhs.sub(&rhs).expect("same base");
        let ok = residual.equal(&gt.zero_like()).expect("same base");
        report.record("Q g^t = c(t) g^t", ok, None);
        if !ok {
            report.residual = Some(residual);
        }
    }
    report
}

/// `P(k) f^k = b(k) f^k` as plain polynomials for `k = 1..=max_k`.
pub fn integer_check(c: &Certificate, max_k: u32) -> Report {
    let mut report = Report::new();
    let p = match c.operator() {
        Ok(p) => p,
        Err(e) => {
            report.record("decomposition indices", false, Some(e.to_string()));
            return report;
        }
    };
    for k in 1..=max_k {
        let fk = c.function.pow(k);
        let lhs = pfs::apply_to_polynomial(&p, &fk, k as i64);
        let rhs = fk.scale(&c.btilde.eval(&int(k as i64)));
        let diff = &lhs - &rhs;
        report.record(
            format!("P({k}) f^{k} = b({k}) f^{k}"),
            diff.is_zero(),
            (!diff.is_zero()).then(|| format!("difference {diff}")),
        );
    }
    report
}

/// `true` when the report has no failed check and the residual, if any, vanishes.
pub fn report_ok(r: &Report) -> bool {
    r.passed() && r.residual.as_ref().is_none_or(|e| e.is_zero())
}
