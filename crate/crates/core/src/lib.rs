//! Exact solution and independent verification of the Dirac oscillator with
//! deformed commutation relations that produce a minimal position uncertainty.
//!
//! The radial problem in momentum space factorizes as `h₀ = b⁺ b⁻` with
//! first-order ladder operators `b± = ∓f d/dp + g p - k/p`, `f = 1 + β₀ p²`.
//! This crate provides
//!
//! * [`model`]: parameters, `(s, j)` channels, regime classification and the
//!   closed-form spectrum,
//! * [`wavefunctions`]: Jacobi-polynomial radial wavefunctions,
//! * [`operators`]: ladder operators, `h₀`, re-factorization and the
//!   shape-invariance step,
//! * [`quadrature`]: the radial scalar product and momentum-moment diagnostics,
//! * [`oracle`]: a finite-difference discretization of `h₀` diagonalized by
//!   banded bisection, independent of every closed form,
//! * [`angular`]: spin spherical harmonics and the angular identities behind
//!   the radial reduction,
//! * [`suite`]: verification reports combining the above.

pub mod angular;
pub mod error;
pub mod model;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod suite;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use model::{Channel, DeformationParams, Regime, Spin};
pub use report::VerificationReport;
