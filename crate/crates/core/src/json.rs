//! Certificate files.
//!
//! Every polynomial and operator is stored as grammar text, so files are
//! exact and diff cleanly. `btilde` lists the roots (not their opposites)
//! of the monic polynomial with their multiplicities.

use serde::{Deserialize, Serialize};

use crate::algebra::{is_parameter, rational::parse_rational};
use crate::certify::{Certificate, EulerCertificate};
use crate::error::{Error, Result};
use crate::star::FactoredPoly;
use crate::syntax::{parse_operator_in, parse_poly_in};

pub const SCHEMA_VERSION: u32 = 1;
pub const KIND_BS: &str = "bs-certificate";
pub const KIND_EULER: &str = "euler-certificate";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    pub root: String,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub operator: String,
    pub generator: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub kind: String,
    pub function: String,
    pub variables: Vec<String>,
    pub btilde: Vec<RootEntry>,
    pub decomposition: Vec<DecompositionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_operator: Option<String>,
}

/// Either kind of certificate, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyCertificate {
    Bs(Certificate),
    Euler(EulerCertificate),
}

/// `btilde` entries: each root with its multiplicity.
pub fn root_entries(p: &FactoredPoly) -> Vec<RootEntry> {
    p.factors().map(|(alpha, m)| RootEntry { root: (-alpha).to_string(), mult: m }).collect()
}

fn roots_from_file(entries: &[RootEntry]) -> Result<FactoredPoly> {
    let mut factors = Vec::new();
    for e in entries {
        let root = parse_rational(&e.root).ok_or_else(|| Error::NonRationalRoot(e.root.clone()))?;
        if e.mult == 0 {
            return Err(Error::InvalidCertificate(format!("root {} has multiplicity 0", e.root)));
        }
        factors.push((-root, e.mult));
    }
    let poly = FactoredPoly::from_factors(factors);
    if poly.num_roots() != entries.len() {
        return Err(Error::InvalidCertificate("repeated root in btilde".into()));
    }
    Ok(poly)
}

fn decomposition_to_file(d: &[(crate::weyl::WeylOp, usize)]) -> Vec<DecompositionEntry> {
    d.iter().map(|(op, i)| DecompositionEntry { operator: op.to_string(), generator: *i }).collect()
}

fn check_variables(vars: &[String]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        let valid = v.starts_with(|c: char| c.is_ascii_lowercase())
            && v.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
            && !v.starts_with("d_")
            && !is_parameter(v);
        if !valid {
            return Err(Error::InvalidCertificate(format!("invalid variable name `{v}`")));
        }
        if vars[..i].contains(v) {
            return Err(Error::InvalidCertificate(format!("variable `{v}` declared twice")));
        }
    }
    Ok(())
}

impl CertificateFile {
    pub fn from_certificate(c: &Certificate) -> Self {
        CertificateFile {
            schema_version: SCHEMA_VERSION,
            kind: KIND_BS.into(),
            function: c.function.to_string(),
            variables: c.variables.clone(),
            btilde: root_entries(&c.btilde),
            decomposition: decomposition_to_file(&c.decomposition),
            euler_field: None,
            q_operator: None,
        }
    }

    pub fn from_euler(e: &EulerCertificate) -> Self {
        CertificateFile {
            schema_version: SCHEMA_VERSION,
            kind: KIND_EULER.into(),
            function: e.function.to_string(),
            variables: e.variables.clone(),
            btilde: root_entries(&e.ctilde),
            decomposition: decomposition_to_file(&e.q_decomposition),
            euler_field: Some(e.euler_field.to_string()),
            q_operator: Some(e.q_operator.to_string()),
        }
    }

    /// Parses every field. Structural problems are errors; whether the
    /// functional equation holds is left to verification.
    pub fn into_certificate(&self) -> Result<AnyCertificate> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidCertificate(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        check_variables(&self.variables)?;
        let vars = &self.variables;
        let function = parse_poly_in(&self.function, vars)?;
        if function.vars().iter().any(|v| is_parameter(v)) {
            return Err(Error::InvalidCertificate("function may not contain s or t".into()));
        }
        let btilde = roots_from_file(&self.btilde)?;
        let decomposition = self
            .decomposition
            .iter()
            .map(|d| Ok((parse_operator_in(&d.operator, vars)?, d.generator)))
            .collect::<Result<Vec<_>>>()?;
        match self.kind.as_str() {
            KIND_BS => Ok(AnyCertificate::Bs(Certificate {
                function,
                variables: vars.clone(),
                btilde,
                decomposition,
            })),
            KIND_EULER => {
                let field_text = self
                    .euler_field
                    .as_deref()
                    .ok_or_else(|| Error::InvalidCertificate("missing euler_field".into()))?;
                let q_text = self
                    .q_operator
                    .as_deref()
                    .ok_or_else(|| Error::InvalidCertificate("missing q_operator".into()))?;
                let euler_field = parse_operator_in(field_text, vars)?;
                let q_operator = parse_operator_in(q_text, vars)?;
                let eta = euler_field.as_vector_field().ok_or_else(|| {
                    Error::InvalidCertificate(format!("`{field_text}` is not a vector field"))
                })?;
                let euler_coefficients = vars
                    .iter()
                    .map(|v| eta.iter().find(|(w, _)| w == v).map(|(_, p)| p.clone()).unwrap_or_default())
                    .collect();
                if let Some(bad) = decomposition.iter().find(|(_, j)| *j >= vars.len()) {
                    return Err(Error::InvalidCertificate(format!("generator index {} out of range", bad.1)));
                }
                Ok(AnyCertificate::Euler(EulerCertificate {
                    function,
                    variables: vars.clone(),
                    euler_field,
                    q_operator,
                    ctilde: btilde,
                    q_decomposition: decomposition,
                    euler_coefficients,
                }))
            }
            other => Err(Error::InvalidCertificate(format!("unknown kind `{other}`"))),
        }
    }
}

pub fn certificate_to_json(c: &Certificate) -> String {
    serde_json::to_string_pretty(&CertificateFile::from_certificate(c)).expect("serializable")
}

pub fn euler_to_json(e: &EulerCertificate) -> String {
    serde_json::to_string_pretty(&CertificateFile::from_euler(e)).expect("serializable")
}

pub fn load(text: &str) -> Result<AnyCertificate> {
    let file: CertificateFile = serde_json::from_str(text)?;
    file.into_certificate()
}

pub fn load_certificate(text: &str) -> Result<Certificate> {
    match load(text)? {
        AnyCertificate::Bs(c) => Ok(c),
        AnyCertificate::Euler(_) => {
            Err(Error::InvalidCertificate(format!("expected kind `{KIND_BS}`, found `{KIND_EULER}`")))
        }
    }
}

pub fn load_euler(text: &str) -> Result<EulerCertificate> {
    match load(text)? {
        AnyCertificate::Euler(e) => Ok(e),
        AnyCertificate::Bs(_) => {
            Err(Error::InvalidCertificate(format!("expected kind `{KIND_EULER}`, found `{KIND_BS}`")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{suspension_certificate, verify_certificate, verify_euler};

    #[test]
    fn euler_roundtrip() {
        let e = suspension_certificate(3, "y").unwrap();
        let text = euler_to_json(&e);
        assert!(text.contains("\"kind\": \"euler-certificate\""));
        assert!(text.contains("\"root\": \"-1/3\""));
        let back = load_euler(&text).unwrap();
        assert_eq!(back, e);
        assert!(verify_euler(&back).passed());
    }

    #[test]
    fn bs_roundtrip() {
        let c = Certificate::from_euler(&suspension_certificate(2, "x").unwrap());
        let back = load_certificate(&certificate_to_json(&c)).unwrap();
        assert_eq!(back, c);
        assert!(verify_certificate(&back).passed());
    }

    #[test]
    fn euler_file_with_t_parameter_loads() {
        let text = r#"{
            "schema_version": 1,
            "kind": "bs-certificate",
            "function": "x^2",
            "variables": ["x"],
            "btilde": [{"root": "-1/2", "mult": 1}],
            "decomposition": [{"operator": "1/4*d_x + 0*t", "generator": 1}]
        }"#;
        assert!(verify_certificate(&load_certificate(text).unwrap()).passed());
    }

    #[test]
    fn rejects_bad_files() {
        let good = certificate_to_json(&Certificate::smooth("x"));
        assert!(matches!(load_euler(&good), Err(Error::InvalidCertificate(_))));
        let bad_var = good.replace("\"x\"\n", "\"s\"\n");
        assert!(load(&bad_var).is_err());
        assert!(matches!(load("{"), Err(Error::Json(_))));
        let undeclared = good.replace("\"function\": \"x\"", "\"function\": \"y\"");
        assert!(matches!(load(&undeclared), Err(Error::UndeclaredVariable(_))));
    }
}
