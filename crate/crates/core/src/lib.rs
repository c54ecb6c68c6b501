//! Exact symbolic machinery for reduced Bernstein-Sato functional equations
//! of Thom-Sebastiani sums `h = f + g`.
//!
//! The crate is organized bottom-up:
//!
//! * [`algebra`]: rationals and sparse multivariate polynomials.
//! * [`star`]: factored polynomials, the star product and its cofactors.
//! * [`weyl`]: normal-ordered differential operators with a central parameter.
//! * [`pfs`]: the twisted-power module `O[s, F^-1] F^s` and operator action on it.
//! * [`certify`]: functional-equation certificates, suspensions and composition.
//! * [`syntax`] and [`json`]: the text grammar and the certificate file format.

pub mod algebra;
pub mod certify;
pub mod error;
pub mod json;
pub mod pfs;
pub mod star;
pub mod syntax;
pub mod weyl;

pub use algebra::{rat, BiPoly, MPoly, Rational};
pub use certify::{
    compose, euler_field, integer_check, simple_root_shortcut, suspension_certificate, verify_certificate,
    verify_euler, Certificate, Composition, EulerCertificate, Report,
};
pub use error::{Error, Result};
pub use pfs::PowerElement;
pub use star::{star, star_oracle, CofactorPair, FactoredPoly};
pub use weyl::WeylOp;
