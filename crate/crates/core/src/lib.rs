//! Rotational constant-mean-curvature surfaces in the unit 3-sphere.
//!
//! A surface `Sigma_{H,C}` is generated by rotating a planar profile curve
//! inside the unit disk. The profile is built from an explicit solution `g`
//! of a first-order ODE ([`surface`]); the angle `K(H, C)` between the ends of
//! one fundamental piece decides whether the surface closes up
//! ([`angular`], [`moduli`]).

pub mod angular;
pub mod error;
pub mod moduli;
pub mod params;
pub mod quadrature;
pub mod surface;
pub mod tol;

pub use angular::{b_value, k_value, RotationAngle};
pub use error::{CmcError, Result};
pub use params::{c_min, Side, SurfaceParams};
pub use surface::{AmbientPoint, Profile, ProfilePoint, ProfilePolyline};
