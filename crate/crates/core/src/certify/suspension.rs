use num_traits::{One, Zero};

use super::{verify_euler, EulerCertificate};
use crate::algebra::{int, rat, MPoly, Rational};
use crate::error::{Error, Result};
use crate::star::FactoredPoly;
use crate::weyl::WeylOp;

/// Certificate for `g = z^r`: `chi = (1/r) z d_z`,
/// `Q = r^-(r-1) d_z^(r-1) z^(r-1)` and `c(t) = prod_{i=1}^{r-1} (t + i/r)`.
///
/// `Q` is stored over the generator `g' = r z^(r-1)` as `r^-r d_z^(r-1) * g'`.
pub fn suspension_certificate(r: i64, var: &str) -> Result<EulerCertificate> {
    if r < 2 {
        return Err(Error::BadExponent(r));
    }
    let e = r as u32;
    let inv_r = rat(1, r);
    let z = WeylOp::x(var);
    let dz = WeylOp::d(var);
    let q_scale = crate::algebra::rational::pow(&inv_r, e - 1);
    let q_operator = &(&dz.pow(e - 1) * &z.pow(e - 1)) * &WeylOp::scalar(q_scale.clone());
    let q_left = dz.pow(e - 1).scale(&(&q_scale * &inv_r));
    let cert = EulerCertificate {
        function: MPoly::var(var).pow(e),
        variables: vec![var.to_string()],
        euler_field: &z * &dz.scale(&inv_r),
        q_operator,
        ctilde: FactoredPoly::from_factors((1..r).map(|i| (rat(i, r), 1))),
        q_decomposition: vec![(q_left, 0)],
        euler_coefficients: vec![MPoly::var(var).scale(&inv_r)],
    };
    let report = verify_euler(&cert);
    if !report.passed() {
        return Err(Error::InternalInconsistency(format!(
            "suspension certificate for {var}^{r} failed verification:\n{report}"
        )));
    }
    Ok(cert)
}

/// `chi = sum_j w_j y_j d_{y_j}` over the variables of `g`, provided `chi(g) = g`.
pub fn euler_field(g: &MPoly, weights: &[Rational]) -> Result<WeylOp> {
    euler_field_over(g, g.vars(), weights)
}

/// As [`euler_field`], with the weights attached to an explicit variable list.
pub fn euler_field_over(g: &MPoly, vars: &[String], weights: &[Rational]) -> Result<WeylOp> {
    if weights.len() != vars.len() {
        return Err(Error::InvalidArgument(format!(
            "{} weights given for {} variables",
            weights.len(),
            vars.len()
        )));
    }
    if let Some(v) = g.vars().iter().find(|v| !vars.contains(v)) {
        return Err(Error::UndeclaredVariable(v.clone()));
    }
    let homogeneous = !g.is_zero()
        && g.terms().all(|(exps, _)| {
            let degree = g.vars().iter().zip(exps).fold(Rational::zero(), |acc, (v, &k)| {
                let w = &weights[vars.iter().position(|u| u == v).unwrap()];
                acc + w * int(k as i64)
            });
            degree.is_one()
        });
    if !homogeneous {
        return Err(Error::NotWeightedHomogeneous {
            poly: g.to_string(),
            weights: weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", "),
        });
    }
    Ok(vars
        .iter()
        .zip(weights)
        .fold(WeylOp::zero(), |acc, (v, w)| &acc + &(&WeylOp::x(v) * &WeylOp::d(v)).scale(w)))
}

/// `prod_{i=1}^{r-1} b(s + i/r)`, valid as `b * c_r` when no two roots of `b`
/// differ by `j/r` for `j = 1..=r`.
pub fn simple_root_shortcut(bf: &FactoredPoly, r: i64) -> Result<FactoredPoly> {
    if r < 2 {
        return Err(Error::BadExponent(r));
    }
    let roots: Vec<&Rational> = bf.root_opposites().collect();
    let scale = int(r);
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let diff = (*b - *a) * &scale;
            if diff.is_integer() && diff >= int(1) && diff <= scale {
                return Err(Error::NotApplicable(format!(
                    "root opposites {a} and {b} differ by {}/{r}",
                    diff
                )));
            }
        }
    }
    Ok((1..r).fold(FactoredPoly::one(), |acc, i| acc.product(&bf.shift(&rat(i, r)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::star;

    fn fp(roots: &[(i64, i64)]) -> FactoredPoly {
        FactoredPoly::from_factors(roots.iter().map(|&(n, d)| (rat(n, d), 1)))
    }

    #[test]
    fn suspension_examples() {
        let c2 = suspension_certificate(2, "z").unwrap();
        assert_eq!(c2.euler_field.to_string(), "1/2*z*d_z");
        assert_eq!(c2.q_operator, &WeylOp::scalar(rat(1, 2)) * &(&WeylOp::d("z") * &WeylOp::x("z")));
        assert_eq!(c2.ctilde, fp(&[(1, 2)]));

        let c3 = suspension_certificate(3, "y").unwrap();
        let q = &WeylOp::scalar(rat(1, 9)) * &(&WeylOp::d("y").pow(2) * &WeylOp::x("y").pow(2));
        assert_eq!(c3.q_operator, q);
        assert_eq!(c3.ctilde, fp(&[(1, 3), (2, 3)]));

        let c5 = suspension_certificate(5, "z").unwrap();
        assert_eq!(c5.ctilde, fp(&[(1, 5), (2, 5), (3, 5), (4, 5)]));

        assert!(matches!(suspension_certificate(1, "z"), Err(Error::BadExponent(1))));
    }

    #[test]
    fn euler_field_examples() {
        let y3 = MPoly::var("y").pow(3);
        let chi = euler_field(&y3, &[rat(1, 3)]).unwrap();
        assert_eq!(chi, (&WeylOp::x("y") * &WeylOp::d("y")).scale(&rat(1, 3)));

        let x2y = MPoly::monomial(rat(1, 1), &[("x", 2), ("y", 1)]);
        let chi = euler_field(&x2y, &[rat(1, 4), rat(1, 2)]).unwrap();
        assert_eq!(chi.to_string(), "1/4*x*d_x + 1/2*y*d_y");

        let bad = &y3 + &MPoly::var("y").pow(2);
        assert!(matches!(euler_field(&bad, &[rat(1, 3)]), Err(Error::NotWeightedHomogeneous { .. })));
        assert!(matches!(euler_field(&y3, &[]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn shortcut_examples() {
        let half = fp(&[(1, 2)]);
        assert_eq!(simple_root_shortcut(&half, 3).unwrap(), fp(&[(5, 6), (7, 6)]));
        assert_eq!(simple_root_shortcut(&half, 2).unwrap(), fp(&[(1, 1)]));
        assert!(matches!(simple_root_shortcut(&fp(&[(1, 3), (2, 3)]), 3), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn shortcut_matches_star() {
        for r in 2..=6 {
            let c = suspension_certificate(r, "z").unwrap().ctilde;
            for bf in [fp(&[(1, 2)]), fp(&[(1, 7), (3, 11)]), fp(&[(5, 6), (7, 6)])] {
                if let Ok(short) = simple_root_shortcut(&bf, r) {
                    assert_eq!(short, star(&bf, &c), "r = {r}, b = {bf}");
                }
            }
        }
    }
}
