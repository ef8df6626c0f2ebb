//! Desk-scale computations in the ℓ¹ crossed product of a topological
//! dynamical system `(X, σ)`: twisted convolution algebra, the commutant of
//! `C(X)`, its characters, GNS models, enveloping C*-norms and the canonical
//! projections onto the commutant.

pub mod algebra;
pub mod characters;
pub mod commutant;
pub mod dynsys;
pub mod error;
pub mod fixtures;
pub mod gns;
pub mod io;
pub mod sample;
pub mod space;
pub mod verify;

pub use algebra::Element;
pub use characters::{Character, TGrid};
pub use dynsys::DynSys;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use space::{CtsFun, Point, SetRep, Space, SpaceKind, SpaceSpec};

/// Coefficients below this sup-norm are dropped.
pub const EPS_ZERO: f64 = 1e-14;
/// Threshold for numerical support `{x : |f(x)| > EPS_SUPP}`.
pub const EPS_SUPP: f64 = 1e-12;
