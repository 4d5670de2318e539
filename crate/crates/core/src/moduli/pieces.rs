use crate::angular::b_value;
use crate::error::{CmcError, Result};
use crate::params::SurfaceParams;
use crate::surface::{Profile, ProfilePoint, ProfilePolyline};

/// Bounds `(m, M)` of the squared profile radius: the surface lies in
/// `m <= z^2 + w^2 <= M`.
///
/// `m` is taken from `m M = (1 + H C)^2 / (C^2 w^2)`, which makes it exactly
/// zero on the axis hyperbola.
pub fn region_bounds(p: &SurfaceParams) -> (f64, f64) {
    let (h, c) = (p.h(), p.c());
    let w2 = 1.0 + h * h;
    let big = (c + 2.0 * h + 2.0 * c * h * h + p.discriminant().sqrt()) / (2.0 * c * w2);
    let gap = p.axis_gap();
    let small = if p.contains_axis() { 0.0 } else { gap * gap / (c * c * w2 * big) };
    (small, big)
}

/// Signed rotation between consecutive fundamental pieces.
///
/// Off the axis hyperbola this is `K(H, C)` mod `2 pi`. On it the profile
/// crosses the origin inside each piece, and by continuity the rotation is
/// `b(H) + pi` mod `2 pi`, the common value of the one-sided limits of `K`.
pub fn period_rotation(p: &SurfaceParams) -> Result<f64> {
    if p.contains_axis() {
        return Ok(b_value(p.h())?.value + std::f64::consts::PI);
    }
    crate::angular::k_value(p).map(|k| k.value)
}

fn rotate(pt: &ProfilePoint, angle: f64, dt: f64) -> ProfilePoint {
    let (s, c) = angle.sin_cos();
    ProfilePoint { t: pt.t + dt, x: c * pt.x - s * pt.y, y: s * pt.x + c * pt.y }
}

/// The profile over `[-T/4, -T/4 + pieces T]` with `samples_per_piece`
/// segments per piece. Only the first period is integrated; later pieces
/// are rotated copies.
pub fn profile_polyline_pieces(
    p: &SurfaceParams,
    pieces: usize,
    samples_per_piece: usize,
) -> Result<ProfilePolyline> {
    if pieces == 0 || samples_per_piece == 0 {
        return Err(CmcError::InvalidInput("pieces and samples per piece must be positive".into()));
    }
    let profile = Profile::new(*p)?;
    let period = profile.period();
    let base = profile.sample_beta(-0.25 * period, period / samples_per_piece as f64, samples_per_piece)?;
    let step = profile.rotation_per_period();
    let mut points = Vec::with_capacity(pieces * samples_per_piece + 1);
    for q in 0..pieces {
        let angle = q as f64 * step;
        let dt = q as f64 * period;
        points.extend(base.iter().map(|b| rotate(b, angle, dt)));
    }
    points.push(rotate(&base[0], pieces as f64 * step, pieces as f64 * period));
    ProfilePolyline::new(*p, points)
}
