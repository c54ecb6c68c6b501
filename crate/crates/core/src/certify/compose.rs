//! Thom-Sebastiani composition of functional equations.
//!
//! From `P(s) f^s = b(s) f^s` and an Euler-homogeneous `g` with
//! `Q g^t = c(t) g^t`, the operator
//!
//! ```text
//! R(s) = A(s, chi) P(s - chi) + B(s, chi) Q
//! ```
//!
//! satisfies `R(s) h^s = (b * c)(s) h^s` for `h = f + g`, where
//! `(b * c)(s) = A(s,t) b(s-t) + B(s,t) c(t)`.

use std::collections::BTreeMap;

use super::{
    integer_check, suspension_certificate, verify_certificate, verify_euler, Certificate, EulerCertificate,
};
use crate::error::{Error, Result};
use crate::star::{self, CofactorPair, FactoredPoly};
use crate::weyl::{eval_bipoly_at_operator, shared_vars, WeylOp};

/// A composed certificate together with the pieces it was built from.
#[derive(Clone, Debug)]
pub struct Composition {
    pub certificate: Certificate,
    /// Theorem-form cofactors `A(s,t)`, `B(s,t)`.
    pub cofactors: CofactorPair,
    /// `A(s, chi)`.
    pub a_chi: WeylOp,
    /// `B(s, chi)`.
    pub b_chi: WeylOp,
    /// `P(s - chi)`.
    pub p_shifted: WeylOp,
    /// `R(s)`, computed directly from `A(s, chi) P(s - chi) + B(s, chi) Q`.
    pub r_operator: WeylOp,
}

impl Composition {
    /// `A(s, chi) P(s - chi) = P(s - chi) A(s, chi)`.
    pub fn order_independent(&self) -> bool {
        &self.a_chi * &self.p_shifted == &self.p_shifted * &self.a_chi
    }
}

/// Builds the certificate for `f + g` from a certificate for `f` and an
/// Euler certificate for `g` on disjoint variables.
///
/// The result is verified before it is returned; a failure there means a
/// bug, reported as [`Error::ComposeVerificationFailure`].
pub fn compose(cf: &Certificate, eg: &EulerCertificate) -> Result<Composition> {
    let clash = shared_vars(&cf.variables, &eg.variables);
    if !clash.is_empty() {
        return Err(Error::VariableClash(clash));
    }
    let report = verify_certificate(cf);
    if !report.passed() {
        return Err(Error::InvalidCertificate(format!("certificate for f:\n{report}")));
    }
    let report = verify_euler(eg);
    if !report.passed() {
        return Err(Error::InvalidCertificate(format!("Euler certificate for g:\n{report}")));
    }

    let cofactors = star::cofactors_theorem_form(&cf.btilde, &eg.ctilde)?;
    let btilde = star::star(&cf.btilde, &eg.ctilde);
    let chi = &eg.euler_field;
    let a_chi = eval_bipoly_at_operator(&cofactors.a, chi);
    let b_chi = eval_bipoly_at_operator(&cofactors.b, chi);

    let p = cf.operator()?;
    let p_shifted = p.substitute_parameter(chi, -1)?;
    let r_operator = &(&a_chi * &p_shifted) + &(&b_chi * &eg.q_operator);

    // Generators of J_h: [h, f_x1..f_xn, g_y1..g_ym]. The generator f of J_f is
    // rewritten as h - g = h - sum_j eta_j g_yj.
    let n = cf.variables.len();
    let mut terms: BTreeMap<usize, WeylOp> = BTreeMap::new();
    let mut push = |index: usize, op: WeylOp| {
        let slot = terms.entry(index).or_default();
        *slot = &*slot + &op;
    };
    for (c, index) in &cf.decomposition {
        let d = &a_chi * &c.substitute_parameter(chi, -1)?;
        if *index == 0 {
            for (j, eta) in eg.euler_coefficients.iter().enumerate() {
                push(n + 1 + j, -&(&d * &WeylOp::from_poly(eta)));
            }
            push(0, d);
        } else {
            push(*index, d);
        }
    }
    for (q, j) in &eg.q_decomposition {
        push(n + 1 + j, &b_chi * q);
    }

    let certificate = Certificate {
        function: &cf.function + &eg.function,
        variables: cf.variables.iter().chain(&eg.variables).cloned().collect(),
        btilde,
        decomposition: terms.into_iter().filter(|(_, op)| !op.is_zero()).map(|(i, op)| (op, i)).collect(),
    };

    let reassembled = certificate.operator()?;
    if reassembled != r_operator {
        return Err(Error::ComposeVerificationFailure(format!(
            "J_h decomposition reassembles to {reassembled}, expected {r_operator}"
        )));
    }
    let report = verify_certificate(&certificate);
    if !report.passed() {
        return Err(Error::ComposeVerificationFailure(report.to_string()));
    }
    Ok(Composition { certificate, cofactors, a_chi, b_chi, p_shifted, r_operator })
}

/// Iterated suspensions `x_1^a_1 + ... + x_n^a_n`.
#[derive(Clone, Debug)]
pub struct BrieskornPham {
    pub certificate: Certificate,
    pub steps: Vec<Composition>,
}

impl BrieskornPham {
    pub fn btilde(&self) -> &FactoredPoly {
        &self.certificate.btilde
    }
}

/// Starts from the suspension certificate of the first power and composes
/// the remaining ones in order. `integer_depth > 0` also runs the integer
/// check on every intermediate certificate.
pub fn brieskorn_pham(powers: &[(String, i64)], integer_depth: u32) -> Result<BrieskornPham> {
    let Some(((first, a), rest)) = powers.split_first() else {
        return Err(Error::InvalidArgument("at least one power is required".into()));
    };
    let mut certificate = Certificate::from_euler(&suspension_certificate(*a, first)?);
    let mut steps = Vec::new();
    for (var, r) in rest {
        let step = compose(&certificate, &suspension_certificate(*r, var)?)?;
        if integer_depth > 0 {
            let report = integer_check(&step.certificate, integer_depth);
            if !report.passed() {
                return Err(Error::ComposeVerificationFailure(report.to_string()));
            }
        }
        certificate = step.certificate.clone();
        steps.push(step);
    }
    Ok(BrieskornPham { certificate, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, MPoly};

    fn x_squared() -> Certificate {
        Certificate::from_euler(&suspension_certificate(2, "x").unwrap())
    }

    #[test]
    fn base_certificate_matches_hand_written() {
        let c = x_squared();
        assert_eq!(c.decomposition, vec![(WeylOp::d("x").scale(&rat(1, 4)), 1)]);
    }

    #[test]
    fn cusp_composition() {
        let comp = compose(&x_squared(), &suspension_certificate(3, "y").unwrap()).unwrap();
        assert_eq!(comp.certificate.btilde.to_string(), "(s+5/6)(s+7/6)");
        assert_eq!(comp.cofactors.a.to_string(), "s + t + 3/2");
        assert!(comp.cofactors.b.is_one());
        assert_eq!(
            comp.r_operator.to_string(),
            "1/2*x*d_x*s + 1/2*s + 1/6*x*y*d_x*d_y + 1/9*y^2*d_y^2 + 3/4*x*d_x + 11/18*y*d_y + 35/36"
        );
        assert!(comp.order_independent());
        assert!(integer_check(&comp.certificate, 5).passed());
    }

    #[test]
    fn sum_of_squares() {
        let comp = compose(&x_squared(), &suspension_certificate(2, "y").unwrap()).unwrap();
        assert_eq!(comp.certificate.btilde, FactoredPoly::linear_power(rat(1, 1), 1));
    }

    #[test]
    fn smooth_factor_gives_trivial_polynomial() {
        let comp = compose(&Certificate::smooth("x"), &suspension_certificate(3, "y").unwrap()).unwrap();
        assert!(comp.certificate.btilde.is_one());
        assert_eq!(comp.r_operator, WeylOp::one());
    }

    #[test]
    fn clash_is_rejected() {
        let err = compose(&x_squared(), &suspension_certificate(3, "x").unwrap()).unwrap_err();
        assert!(matches!(err, Error::VariableClash(v) if v == ["x"]));
    }

    #[test]
    fn invalid_input_is_rejected() {
        let mut cf = x_squared();
        cf.btilde = FactoredPoly::linear_power(rat(1, 3), 1);
        let err = compose(&cf, &suspension_certificate(3, "y").unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidCertificate(_)));
    }

    /// `(1/4) d_x^2 * f - (s/4) d_x * f_x` is another valid certificate for
    /// `x^2`, one that actually uses the generator `f`.
    fn x_squared_via_f() -> Certificate {
        let quarter = WeylOp::scalar(rat(1, 4));
        Certificate {
            function: MPoly::var("x").pow(2),
            variables: vec!["x".into()],
            btilde: FactoredPoly::linear_power(rat(1, 2), 1),
            decomposition: vec![
                (&quarter * &WeylOp::d("x").pow(2), 0),
                (-&(&(&quarter * &WeylOp::param()) * &WeylOp::d("x")), 1),
            ],
        }
    }

    #[test]
    fn f_generator_is_rewritten_over_h() {
        let cf = x_squared_via_f();
        assert!(verify_certificate(&cf).passed());
        let comp = compose(&cf, &suspension_certificate(3, "y").unwrap()).unwrap();
        assert!(comp.certificate.decomposition.iter().any(|(_, i)| *i == 0));
        assert!(comp.certificate.decomposition.iter().any(|(_, i)| *i == 2));
        assert!(comp.order_independent());
        assert!(integer_check(&comp.certificate, 4).passed());
    }
}
