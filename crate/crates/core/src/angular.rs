//! The angle `K(H, C)` swept by one fundamental piece, the axis-case angle
//! `b(H)`, and their limits.
//!
//! `K` is the weighted integral
//!
//! ```text
//! K = integral over (x1, x2) of (H u + 1/C) / ((1 - u) sqrt(u) w sqrt((u - x1)(x2 - u))) du
//! ```
//!
//! with `x1 x2 = 1 / (w^2 C^2)` and `(1 - x1)(1 - x2) = (1 + H C)^2 / (w^2 C^2)`.
//! Splitting `(H u + a)/(1 - u) = -H + (H + a)/(1 - u)` and integrating the
//! pole term against the weight in closed form gives
//!
//! ```text
//! K = pi sign(1 + H C) + (1/w) integral of (-H + (H + a)/(1 + sqrt u)) / sqrt(u) dmu
//! ```
//!
//! The remaining integrand has no pole at `u = 1`, so the value is accurate
//! right up to the hyperbola `C = -1/H`, and the jump of `2 pi` there is the
//! jump of the sign term. The substitution `u = v^2` keeps the Chebyshev
//! weight and moves the `1/sqrt(u)` singularity off the interval, which
//! matters for large `C` where `x1 ~ 1/C^2`.
//!
//! [`k_direct`] evaluates the unsplit integrand with the pole check and is
//! kept as an independent route.

use std::f64::consts::PI;

use crate::error::{CmcError, Result};
use crate::params::{c_min, Side, SurfaceParams};
use crate::quadrature::{self, SingularInterval};
use crate::tol;

const START_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationAngle {
    pub value: f64,
    pub error_estimate: f64,
    pub side: Side,
}

/// Roots of the quadratic whose interval carries the weight of `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoints {
    pub x1: f64,
    pub x2: f64,
}

pub fn endpoints(p: &SurfaceParams) -> Result<Endpoints> {
    if p.is_isoparametric() {
        return Err(CmcError::Degenerate { h: p.h(), c: p.c() });
    }
    let (h, c) = (p.h(), p.c());
    let w2 = 1.0 + h * h;
    let sum = c - 2.0 * h + p.discriminant().sqrt();
    let x2 = sum / (2.0 * w2 * c);
    // x1 = 1 / (w^2 C^2 x2)
    let x1 = 2.0 / (c * sum);
    Ok(Endpoints { x1, x2 })
}

fn side_of(p: &SurfaceParams) -> Side {
    match p.side() {
        Side::Axis => unreachable!("axis case handled by callers"),
        s => s,
    }
}

/// The angle between the endpoint position vectors of the fundamental piece.
///
/// Within [`tol::AXIS_CUTOFF`] of `C = -1/H` (but not on it) the one-sided
/// limit `b(H) +- pi` is returned instead of a quadrature.
pub fn k_value(p: &SurfaceParams) -> Result<RotationAngle> {
    if p.contains_axis() {
        return Err(CmcError::AxisCase { h: p.h() });
    }
    let Endpoints { x1, x2 } = endpoints(p)?;
    let (h, c) = (p.h(), p.c());
    let side = side_of(p);
    if h < 0.0 && (c + 1.0 / h).abs() < tol::AXIS_CUTOFF {
        let (left, right) = k_one_sided_limits(h)?;
        let bh = b_value(h)?;
        let value = if side == Side::BelowAxisC { left } else { right };
        return Ok(RotationAngle { value, error_estimate: bh.error_estimate, side });
    }
    let a = 1.0 / c;
    let (r1, r2) = (x1.sqrt(), x2.sqrt());
    let iv = SingularInterval::new(r1, r2)?;
    let f = |v: f64| 2.0 * (-h + (h + a) / (1.0 + v)) / ((v + r1) * (v + r2)).sqrt();
    let q = quadrature::chebyshev_weighted(f, iv, START_NODES, tol::ANGLE_QUAD)?;
    let w = p.w();
    let jump = PI * p.axis_gap().signum();
    Ok(RotationAngle { value: jump + q.value / w, error_estimate: q.error_estimate / w, side })
}

/// `K` from the unsplit integrand, refusing parameters whose pole at `u = 1`
/// comes too close to the interval.
pub fn k_direct(p: &SurfaceParams) -> Result<RotationAngle> {
    if p.contains_axis() {
        return Err(CmcError::AxisCase { h: p.h() });
    }
    let Endpoints { x1, x2 } = endpoints(p)?;
    let (h, a, w) = (p.h(), 1.0 / p.c(), p.w());
    let (r1, r2) = (x1.sqrt(), x2.sqrt());
    let iv = SingularInterval::new(r1, r2)?;
    let f = |v: f64| {
        2.0 * (h * v * v + a) / ((1.0 - v * v) * w * ((v + r1) * (v + r2)).sqrt())
    };
    let q = quadrature::chebyshev_weighted_pole_checked(f, iv, 1.0, START_NODES, tol::ANGLE_QUAD)?;
    Ok(RotationAngle { value: q.value, error_estimate: q.error_estimate, side: side_of(p) })
}

/// `b(H) = integral over (0, 1) of -H / sqrt(v (1 - v) (H^2 + v)) dv` for `H < 0`.
pub fn b_value(h: f64) -> Result<RotationAngle> {
    if !(h < 0.0) {
        return Err(CmcError::Domain(format!("b(H) requires H < 0, got {h}")));
    }
    let iv = SingularInterval::new(0.0, 1.0)?;
    let h2 = h * h;
    let q = quadrature::chebyshev_weighted(|v| -h / (h2 + v).sqrt(), iv, START_NODES, tol::ANGLE_QUAD)?;
    Ok(RotationAngle { value: q.value, error_estimate: q.error_estimate, side: Side::Axis })
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    0.5 * (a + b)
}

/// `b(H)` through the complete elliptic integral of the first kind:
/// `b = -2H / w * K(k)` with `k^2 = 1/w^2`, and `K(k) = pi / (2 agm(1, k'))`.
pub fn b_elliptic(h: f64) -> Result<f64> {
    if !(h < 0.0) {
        return Err(CmcError::Domain(format!("b(H) requires H < 0, got {h}")));
    }
    let w = (1.0 + h * h).sqrt();
    let k_prime = -h / w;
    Ok(-PI * h / (w * agm(1.0, k_prime)))
}

/// `(lim C -> -1/H from below, lim from above)` of `K`, i.e. `b(H) +- pi`.
pub fn k_one_sided_limits(h: f64) -> Result<(f64, f64)> {
    let b = b_value(h)?.value;
    Ok((b + PI, b - PI))
}

/// `lim K` as `C -> c_min(H)`: `pi sqrt(2 - 4H / sqrt(4 + 4H^2))`.
pub fn k_limit_cmin(h: f64) -> f64 {
    // 2 - 4H / (2w) = 2 (w - H) / w, with w - H = 1 / (w + H) for H > 0
    let w = (1.0 + h * h).sqrt();
    let w_minus_h = if h > 0.0 { 1.0 / (w + h) } else { w - h };
    PI * (2.0 * w_minus_h / w).sqrt()
}

/// `lim K` as `C -> infinity`: `2 arccot(H)` with the branch taking the sign
/// of `H`, and `pi` at `H = 0`.
pub fn k_limit_inf(h: f64) -> f64 {
    if h == 0.0 {
        PI
    } else {
        2.0 * (1.0 / h).atan()
    }
}

/// Default step of [`dk_dc`].
pub fn default_dk_step(c: f64) -> f64 {
    1e-5f64.max(1e-5 * c.abs())
}

/// Central difference of `K` in `C` with step `step`.
pub fn dk_dc(p: &SurfaceParams, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(CmcError::InvalidInput(format!("step must be positive, got {step}")));
    }
    let (h, c) = (p.h(), p.c());
    if h < 0.0 {
        let axis = -1.0 / h;
        if (c - step - axis).signum() != (c + step - axis).signum() || p.contains_axis() {
            return Err(CmcError::Straddle);
        }
    }
    if c - step <= c_min(h) {
        return Err(CmcError::Domain(format!("C - step = {} is not above c_min(H)", c - step)));
    }
    let lo = k_value(&SurfaceParams::new(h, c - step)?)?.value;
    let hi = k_value(&SurfaceParams::new(h, c + step)?)?.value;
    Ok((hi - lo) / (2.0 * step))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(h: f64, c: f64) -> SurfaceParams {
        SurfaceParams::new(h, c).unwrap()
    }

    #[test]
    fn endpoints_minimal_case() {
        let e = endpoints(&params(0.0, 4.0)).unwrap();
        let s12 = 12f64.sqrt();
        assert!((e.x1 - (4.0 - s12) / 8.0).abs() < 1e-15);
        assert!((e.x2 - (4.0 + s12) / 8.0).abs() < 1e-15);
        assert!((e.x1 * e.x2 - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn endpoints_on_axis() {
        for &h in &[-0.3, -1.0, -4.0] {
            let e = endpoints(&SurfaceParams::axis(h).unwrap()).unwrap();
            assert!((e.x2 - 1.0).abs() < 1e-14);
            assert!((e.x1 - h * h / (1.0 + h * h)).abs() < 1e-14);
        }
    }

    #[test]
    fn endpoints_degenerate_on_boundary() {
        assert!(matches!(
            endpoints(&SurfaceParams::isoparametric(0.4)),
            Err(CmcError::Degenerate { .. })
        ));
        let e = endpoints(&params(0.4, c_min(0.4) + 1e-10)).unwrap();
        assert!(e.x2 - e.x1 < 1e-4);
    }

    #[test]
    fn endpoint_sum_and_product() {
        for &(h, c) in &[(0.0, 2.5), (1.5, 20.0), (-0.8, 1.0), (-0.8, 7.0), (-3.0, 0.4)] {
            let p = params(h, c);
            let e = endpoints(&p).unwrap();
            let w2 = 1.0 + h * h;
            assert!((e.x1 * e.x2 - 1.0 / (w2 * c * c)).abs() < 1e-12);
            assert!((e.x1 + e.x2 - (c - 2.0 * h) / (w2 * c)).abs() < 1e-12);
            assert!(0.0 < e.x1 && e.x1 < e.x2 && e.x2 <= 1.0);
        }
    }

    #[test]
    fn split_and_direct_routes_agree() {
        for &(h, c) in &[(0.0, 4.0), (1.0, 6.0), (2.0, 50.0), (-0.5, 1.3), (-0.5, 2.5), (-2.0, 3.0)] {
            let p = params(h, c);
            let a = k_value(&p).unwrap().value;
            let b = k_direct(&p).unwrap().value;
            assert!((a - b).abs() < 1e-9, "H={h} C={c}: {a} vs {b}");
        }
    }

    #[test]
    fn direct_route_refuses_the_pole() {
        let p = params(-1.0, 1.0 - 1e-11);
        assert!(!p.contains_axis());
        assert!(matches!(k_direct(&p), Err(CmcError::PoleProximity { .. })));
        // the split route is unaffected and close to the one-sided limit
        let k = k_value(&p).unwrap();
        assert_eq!(k.side, Side::BelowAxisC);
        assert!((k.value - k_one_sided_limits(-1.0).unwrap().0).abs() < 1e-8);
    }

    #[test]
    fn axis_and_boundary_errors() {
        assert!(matches!(
            k_value(&SurfaceParams::axis(-0.5).unwrap()),
            Err(CmcError::AxisCase { .. })
        ));
        assert!(matches!(
            k_value(&SurfaceParams::isoparametric(0.5)),
            Err(CmcError::Degenerate { .. })
        ));
        assert!(b_value(0.0).is_err());
        assert!(b_elliptic(1.0).is_err());
        assert!(k_one_sided_limits(0.5).is_err());
    }

    #[test]
    fn side_tags() {
        assert_eq!(k_value(&params(0.2, 4.0)).unwrap().side, Side::NotApplicable);
        assert_eq!(k_value(&params(-0.5, 1.5)).unwrap().side, Side::BelowAxisC);
        assert_eq!(k_value(&params(-0.5, 2.5)).unwrap().side, Side::AboveAxisC);
        assert_eq!(b_value(-0.5).unwrap().side, Side::Axis);
    }

    #[test]
    fn near_axis_uses_one_sided_limits() {
        let h = -0.5;
        let (left, right) = k_one_sided_limits(h).unwrap();
        assert!((left - right - 2.0 * PI).abs() < 1e-14);
        let below = k_value(&params(h, 2.0 - 5e-10)).unwrap();
        let above = k_value(&params(h, 2.0 + 5e-10)).unwrap();
        assert_eq!(below.value, left);
        assert_eq!(above.value, right);
        // just outside the cutoff the quadrature agrees with the limit
        let near = k_value(&params(h, 2.0 - 2e-9)).unwrap();
        assert!((near.value - left).abs() < 1e-7);
    }

    #[test]
    fn limit_formulas() {
        assert!((k_limit_cmin(0.0) - PI * 2f64.sqrt()).abs() < 1e-15);
        assert!((k_limit_cmin(1.0) - PI * (2.0 - 2f64.sqrt()).sqrt()).abs() < 1e-15);
        assert!(k_limit_cmin(1e8) < 1e-3 && k_limit_cmin(1e8) > 0.0);
        assert!(k_limit_cmin(-1e8) <= 2.0 * PI && k_limit_cmin(-1e8) > 2.0 * PI - 1e-3);
        assert!((k_limit_inf(1.0) - PI / 2.0).abs() < 1e-15);
        assert!((k_limit_inf(-1.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(k_limit_inf(0.0), PI);
    }

    #[test]
    fn minimal_k_is_between_pi_and_pi_sqrt2() {
        for &c in &[2.001, 2.1, 4.0, 30.0, 1e4] {
            let k = k_value(&params(0.0, c)).unwrap().value;
            assert!(k > PI && k < PI * 2f64.sqrt(), "C={c}: {k}");
        }
    }

    #[test]
    fn b_limits_and_elliptic_route() {
        assert!(b_value(-1e-5).unwrap().value < 1e-3);
        assert!(b_value(-1e4).unwrap().value > PI - 1e-3);
        for &h in &[-1.0, -0.1, -10.0, -0.013, -250.0] {
            let quad = b_value(h).unwrap().value;
            let ell = b_elliptic(h).unwrap();
            assert!((quad - ell).abs() < 1e-8, "H={h}: {quad} vs {ell}");
            assert!(quad > 0.0 && quad < PI);
        }
    }

    #[test]
    fn dk_dc_negative_and_straddle() {
        for &c in &[3.0, 5.0, 10.0] {
            let p = params(0.0, c);
            assert!(dk_dc(&p, default_dk_step(c)).unwrap() < 0.0);
        }
        for &c in &[1.5, 2.6] {
            let p = params(-0.5, c);
            assert!(dk_dc(&p, default_dk_step(c)).unwrap() < 0.0);
        }
        assert!(matches!(dk_dc(&params(-0.5, 2.0 + 1e-6), 1e-5), Err(CmcError::Straddle)));
    }
}
