//! Polynomials with Lorentzian signature over convex cones.
//!
//! This crate implements the numerical toolkit around log-concave and
//! hyperbolic polynomials:
//!
//! - [`poly`]: sparse multivariate polynomials over exact rationals or floats,
//!   with differentiation, composition, and line restrictions;
//! - [`spectra`]: symmetric-matrix inertia, the Lorentzian signature classes,
//!   the rank-one deflation lemma, and the c-Rayleigh scan;
//! - [`hyperbolic`]: real-rootedness certificates, hyperbolicity cones and
//!   their sampling, Nuij perturbation, interlacing;
//! - [`lorentzian`]: log-concavity predicates, the sampled
//!   Lorentzian-signature check over a cone, conic stability, M-convexity;
//! - [`mixed_disc`]: mixed discriminants and the generalized matrix
//!   determinant lemma;
//! - [`permanent`]: exact permanents (Ryser, naive, derivative route) and
//!   generating polynomials;
//! - [`capacity`]: polynomial capacity by projected gradient descent over
//!   cone-constrained positive points;
//! - [`lps`]: the G(n,k) and C(n,m) matrix families with exact closed-form
//!   permanents and locally-PSD predicates.
//!
//! Scalar mode is chosen at construction: `MultiPoly<BigRational>` and
//! `Mat<BigRational>` compute exactly, the `f64` instantiations feed the
//! eigenvalue and optimization pipelines. Cone-quantified predicates are
//! Monte-Carlo certificates with explicit sample counts and seeds.

pub mod capacity;
pub mod error;
pub mod hyperbolic;
pub mod lorentzian;
pub mod lps;
pub mod matrix;
pub mod mixed_disc;
pub mod permanent;
pub mod poly;
pub mod scalar;
pub mod spectra;

#[cfg(test)]
pub(crate) mod testutil;

pub use capacity::{CapacityConfig, CapacityResult};
pub use error::{Error, Result};
pub use hyperbolic::ConeSpec;
pub use matrix::{Mat, SymMatrix};
pub use poly::MultiPoly;
pub use scalar::Coeff;
pub use spectra::{LorentzClass, SignatureReport};
