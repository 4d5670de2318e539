use thiserror::Error;

/// Errors produced by the surface, quadrature and moduli computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CmcError {
    /// Parameters outside the region where a positive solution `g` exists,
    /// or an operation called outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The polar-coordinate integrand has a vanishing denominator.
    #[error("singular integrand at t = {t}: |C - g^2| = {gap:e}")]
    Singularity { t: f64, gap: f64 },

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    /// A pole of the integrand lies too close to the integration interval.
    #[error("pole at {pole} is within {distance:e} of the integration interval")]
    PoleProximity { pole: f64, distance: f64 },

    #[error("non-finite value encountered at x = {0}")]
    NonFinite(f64),

    /// K is undefined on the hyperbola C = -1/H; use b(H) instead.
    #[error("K(H, C) is undefined on the axis case C = -1/H (H = {h})")]
    AxisCase { h: f64 },

    /// C = c_min(H): the profile is a circle and the endpoints coincide.
    #[error("degenerate isoparametric parameters (H = {h}, C = {c})")]
    Degenerate { h: f64, c: f64 },

    #[error("finite-difference stencil straddles C = -1/H")]
    Straddle,

    /// The requested angle is not attained on the chosen branch.
    #[error("target angle {target} outside attainable range ({lo}, {hi})")]
    OutOfRange { target: f64, lo: f64, hi: f64 },

    #[error("consecutive polyline samples {0} and {1} coincide")]
    DegenerateSegment(usize, usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, CmcError>;
