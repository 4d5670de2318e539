//! Tolerances shared across modules.

/// Closed-form identity checks.
pub const IDENTITY: f64 = 1e-10;
/// Checks whose accuracy is limited by accumulated quadrature error.
pub const QUADRATURE: f64 = 1e-8;
/// Profile passage through the origin.
pub const AXIS_PASSAGE: f64 = 1e-8;

/// Relative tolerance for snapping onto `C = c_min(H)` and `C = -1/H`.
pub const BOUNDARY_REL: f64 = 1e-12;

/// Absolute tolerance for the weighted rule when evaluating `K` and `b`.
pub const ANGLE_QUAD: f64 = 1e-10;
/// Absolute tolerance for the angle integrals along a profile.
pub const THETA_QUAD: f64 = 1e-8;

/// Inside this distance of `C = -1/H` the angle `K` is replaced by its
/// one-sided limit `b(H) +- pi`.
pub const AXIS_CUTOFF: f64 = 1e-9;

/// A pole closer than this to the integration interval is refused.
pub const POLE_PROXIMITY: f64 = 1e-13;

/// Largest node count of the weighted rule.
pub const MAX_CHEBYSHEV_NODES: usize = 1 << 20;
/// Deepest bisection level of the adaptive rule.
pub const MAX_ADAPTIVE_DEPTH: u32 = 60;

/// Target residual of the closure solvers.
pub const SOLVER: f64 = 1e-9;
/// Iteration cap of the closure solvers.
pub const SOLVER_ITERATIONS: usize = 200;

/// Distance below which two profile points are treated as one.
pub const CLOSURE: f64 = 1e-6;
