//! Finite-N determinantal kernels for two-dimensional Coulomb gases at
//! inverse temperature two, confined to an elliptic annulus.
//!
//! The annulus is the image of `R <= |w| <= v` under the Joukowski map
//! `z = (w + 1/w) / 2`. Four weights on it make the monic orthogonal
//! polynomials proportional to the four Chebyshev kinds, so every kernel has
//! a closed form in `w`. The crate provides:
//!
//! * [`geometry`]: the Joukowski parameterization and region tests,
//! * [`chebyshev`]: the four Chebyshev kinds in the `w` parameterization,
//! * [`kernels`]: weights, norms, finite-N kernels (elliptic, radially
//!   symmetric, Jacobi) and determinantal correlation functions,
//! * [`quadrature`]: tensor Gauss-Legendre / trapezoid integration used to
//!   certify orthogonality and projection identities,
//! * [`asymptotics`]: the large-N scaling limits (edge, interval, Bessel and
//!   sine kernels),
//! * [`sampler`]: exact sequential sampling of the projection process,
//! * [`experiments`]: scaled-point constructions and tables behind the CLI.

pub mod asymptotics;
pub mod chebyshev;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod kernels;
pub mod quadrature;
pub mod sampler;
pub mod special;

pub use error::{Error, Result};
pub use geometry::{AnnulusSpec, ComplexPoint, OmegaCoord};
pub use kernels::ModelKind;

pub use num_complex::Complex64;
