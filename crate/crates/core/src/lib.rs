//! Numerical laboratory for the geometry of critical points of complex
//! polynomials.
//!
//! The crate is organized bottom-up:
//!
//! * [`cpoly`]: polynomials given by their zeros, root finding, and
//!   critical points of the first and second kind;
//! * [`strata`]: multiplicity patterns `(μ̄, ν̄)` and the interpolation
//!   identities used by the rank argument;
//! * [`jacobian`]: the Jacobian of the system `p^(ℓ)(ξ_j) = 0` and its
//!   numerical rank, plus a sampler of configurations in a given stratum;
//! * [`continuation`]: predictor–corrector tracking of dependent zeros and
//!   critical points as the free zeros move;
//! * [`extremal`]: the Sendov objective, smallest enclosing disks, the
//!   Kuhn–Tucker residual system, and search drivers;
//! * [`io`]: plain-text formats for configurations, strata and findings.

pub mod continuation;
pub mod cpoly;
pub mod error;
pub mod extremal;
pub mod io;
pub mod jacobian;
pub mod rng;
pub mod strata;
pub mod tol;

pub use cpoly::{ComplexPoint, CriticalSet, PolyCoeffs, Zero, ZeroConfig};
pub use error::{Error, ErrorClass, Result};
pub use num_complex::Complex64;
pub use strata::Structure;
pub use tol::Tolerances;
