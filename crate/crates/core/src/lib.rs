//! Beam-like solutions of the Klein-Gordon equation built from generating
//! functions.
//!
//! One closed-form generating function per family — a displaced Gaussian, an
//! exponential kernel, a Macdonald kernel, a tilted plane wave — yields whole
//! families of beam solutions (Laguerre-Gauss, Hermite-Gauss, exponential,
//! Bessel, Bessel-Gauss) either by repeated holomorphic differentiation in the
//! transverse complex coordinates or by angular integration over an embedded
//! parameter. Every field carries orbital angular momentum structure that can
//! be tested as a rotation eigenphase, and every field can be certified
//! numerically against the wave operator `∂t² − ∇² + m²` (the d'Alembert
//! operator at `m = 0`).
//!
//! Natural units `ħ = c = 1` throughout.

pub mod beams;
pub mod cli;
pub mod construct;
pub mod coords;
pub mod dd;
pub mod error;
pub mod field;
pub mod sampling;
pub mod specfun;
pub mod verify;

pub use error::Error;
pub use field::Beam;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
