//! Closed-form profile data of the rotational surface `Sigma_{H,C}`.
//!
//! The surface is `phi(s, t) = (sqrt(1 - |beta|^2) cos s, sqrt(1 - |beta|^2) sin s, beta(t))`
//! where `t` is arc length along the meridian geodesics and `beta` is the
//! planar profile curve. Everything here is driven by the explicit solution
//!
//! ```text
//! g(t)^2 = (C - 2H + sqrt(C^2 - 4CH - 4) sin(2 w t)) / (2 w^2),   w = sqrt(1 + H^2)
//! ```
//!
//! of `g'^2 + g^2 (1 + (H + g^-2)^2) = C`, where `g = ((lambda - mu)/2)^(-1/2)`.
//!
//! Two parametrizations of the profile are available. The polar one
//! ([`profile_alpha`]) breaks down on `C = -1/H`, where the curve goes
//! through the origin; the other ([`profile_beta`]) is valid on the whole
//! moduli space and is the one used by every downstream computation.
//!
//! Both profile angles are measured from `t = T/4`, the point where `g` is
//! maximal and the profile is closest to the origin.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{CmcError, Result};
use crate::params::SurfaceParams;
use crate::quadrature;

/// Internal tolerance of the angle integrals along the profile.
const THETA_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GState {
    pub t: f64,
    pub g: f64,
    pub g_prime: f64,
    pub period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl ProfilePoint {
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn polar_angle(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn distance(&self, other: &ProfilePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Samples of the planar profile curve in increasing `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePolyline {
    params: SurfaceParams,
    points: Vec<ProfilePoint>,
}

impl ProfilePolyline {
    /// Requires a non-empty list with strictly increasing `t`.
    pub fn new(params: SurfaceParams, points: Vec<ProfilePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(CmcError::InvalidInput("empty profile polyline".into()));
        }
        if let Some(i) = points.windows(2).position(|w| !(w[1].t > w[0].t)) {
            return Err(CmcError::InvalidInput(format!(
                "profile parameters not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self { params, points })
    }

    /// A polyline that is not tied to a surface; `t` is the sample index.
    pub fn from_xy(params: SurfaceParams, xy: &[(f64, f64)]) -> Result<Self> {
        let points = xy
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| ProfilePoint { t: i as f64, x, y })
            .collect();
        Self::new(params, points)
    }

    pub fn params(&self) -> &SurfaceParams {
        &self.params
    }

    pub fn points(&self) -> &[ProfilePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> &ProfilePoint {
        &self.points[0]
    }

    pub fn last(&self) -> &ProfilePoint {
        &self.points[self.points.len() - 1]
    }

    /// Distance between the first and last samples.
    pub fn closure_gap(&self) -> f64 {
        self.first().distance(self.last())
    }

    /// Smallest and largest squared radius over the samples.
    pub fn radius_squared_range(&self) -> (f64, f64) {
        self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            let r2 = p.x * p.x + p.y * p.y;
            (lo.min(r2), hi.max(r2))
        })
    }
}

/// A point of the unit 3-sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientPoint(pub [f64; 4]);

impl AmbientPoint {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &AmbientPoint) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }
}

/// Choice of profile-angle integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleIntegrand {
    /// `sqrt(C) g (H + g^-2) / (C - g^2)`: angular velocity of the profile.
    Alpha,
    /// `sqrt(C) g (H - g^-2) / (g'^2 + g^2)`: phase of the unit-speed frame.
    Beta,
}

/// `g`, `g'` at `t`.
///
/// `g^2` is assembled as `g_min^2 + B (1 + sin 2wt)` so both terms are
/// non-negative, with `1 + sin 2wt = (sin wt + cos wt)^2`.
pub fn g_eval(p: &SurfaceParams, t: f64) -> GState {
    let w = p.w();
    let b = p.discriminant().sqrt() / (2.0 * w * w);
    let (g_min2, _) = p.g_squared_bounds();
    let (s, c) = (w * t).sin_cos();
    let g2 = g_min2 + b * (s + c) * (s + c);
    let g = g2.sqrt();
    let g_prime = b * w * (2.0 * w * t).cos() / g;
    GState { t, g, g_prime, period: p.period() }
}

/// `g'^2 + g^2 (1 + (H + g^-2)^2) - C`.
pub fn ode_residual(p: &SurfaceParams, t: f64) -> f64 {
    let s = g_eval(p, t);
    ode_residual_of(p, s.g, s.g_prime)
}

/// Residual of the conservation law for arbitrary `(g, g')`.
pub fn ode_residual_of(p: &SurfaceParams, g: f64, g_prime: f64) -> f64 {
    let k = p.h() + 1.0 / (g * g);
    g_prime * g_prime + g * g * (1.0 + k * k) - p.c()
}

/// Principal curvatures `(lambda, mu) = (H + g^-2, H - g^-2)`.
pub fn principal_curvatures(p: &SurfaceParams, t: f64) -> (f64, f64) {
    let g = g_eval(p, t).g;
    let k = 1.0 / (g * g);
    (p.h() + k, p.h() - k)
}

/// Angular velocity of the polar profile. Fails where `C - g^2` vanishes,
/// which happens only on `C = -1/H` at `t = T/4 (mod T)`.
pub fn theta_integrand_alpha(p: &SurfaceParams, t: f64) -> Result<f64> {
    let s = g_eval(p, t);
    integrand_alpha_at(p, t, s.g)
}

fn integrand_alpha_at(p: &SurfaceParams, t: f64, g: f64) -> Result<f64> {
    let c = p.c();
    let gap = c - g * g;
    if gap.abs() <= 1e-12 * c {
        return Err(CmcError::Singularity { t, gap: gap.abs() });
    }
    Ok(c.sqrt() * g * (p.h() + 1.0 / (g * g)) / gap)
}

/// Phase velocity used by the globally defined profile. The denominator is
/// bounded below by `g_min^2 > 0`.
pub fn theta_integrand_beta(p: &SurfaceParams, t: f64) -> f64 {
    let s = g_eval(p, t);
    let g2 = s.g * s.g;
    p.c().sqrt() * s.g * (p.h() - 1.0 / g2) / (s.g_prime * s.g_prime + g2)
}

/// `|alpha(t)|^2 = |beta(t)|^2` in closed form.
pub fn radius_squared(p: &SurfaceParams, t: f64) -> f64 {
    let (h, c) = (p.h(), p.c());
    let w2 = 1.0 + h * h;
    let s = (2.0 * w2.sqrt() * t).sin();
    (c + 2.0 * h + 2.0 * c * h * h - p.discriminant().sqrt() * s) / (2.0 * c * w2)
}

/// Profile data that needs one quadrature per period: the angle swept by
/// each integrand over a full period, cached.
#[derive(Debug, Clone)]
pub struct Profile {
    params: SurfaceParams,
    period: f64,
    beta_period: f64,
    alpha_period: OnceLock<Result<f64>>,
}

impl Profile {
    pub fn new(params: SurfaceParams) -> Result<Self> {
        let period = params.period();
        let beta_period = if params.is_isoparametric() {
            // integrand is constant
            period * theta_integrand_beta(&params, 0.0)
        } else {
            let q = 0.25 * period;
            quadrature::adaptive(|t| theta_integrand_beta(&params, t), q, q + period, THETA_TOL)?
                .value
        };
        Ok(Self { params, period, beta_period, alpha_period: OnceLock::new() })
    }

    pub fn params(&self) -> &SurfaceParams {
        &self.params
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Integral of the chosen integrand over one period.
    pub fn period_angle(&self, which: AngleIntegrand) -> Result<f64> {
        match which {
            AngleIntegrand::Beta => Ok(self.beta_period),
            AngleIntegrand::Alpha => self
                .alpha_period
                .get_or_init(|| {
                    let q = 0.25 * self.period;
                    self.integrate(AngleIntegrand::Alpha, q, q + self.period)
                })
                .clone(),
        }
    }

    /// Rotation of the plane taking `beta(t)` to `beta(t + T)`.
    pub fn rotation_per_period(&self) -> f64 {
        -self.beta_period
    }

    fn integrate(&self, which: AngleIntegrand, a: f64, b: f64) -> Result<f64> {
        let p = self.params;
        match which {
            AngleIntegrand::Beta => {
                quadrature::adaptive(|t| theta_integrand_beta(&p, t), a, b, THETA_TOL)
                    .map(|r| r.value)
            }
            AngleIntegrand::Alpha => {
                if p.contains_axis() {
                    return Err(CmcError::AxisCase { h: p.h() });
                }
                // evaluation errors surface as NaN and are reported below
                let f = |t: f64| theta_integrand_alpha(&p, t).unwrap_or(f64::NAN);
                quadrature::adaptive(f, a, b, THETA_TOL).map(|r| r.value).map_err(|e| match e {
                    CmcError::NonFinite(t) => match theta_integrand_alpha(&p, t) {
                        Err(err) => err,
                        Ok(_) => CmcError::NonFinite(t),
                    },
                    other => other,
                })
            }
        }
    }

    /// `theta(t) = integral from T/4 to T/4 + t`, using
    /// `theta(t + qT) = theta(t) + q theta(T)` for the whole periods.
    pub fn theta(&self, t: f64, which: AngleIntegrand) -> Result<f64> {
        let q = (t / self.period).floor();
        let r = t - q * self.period;
        let start = 0.25 * self.period;
        let partial = self.integrate(which, start, start + r)?;
        if q == 0.0 {
            return Ok(partial);
        }
        Ok(q * self.period_angle(which)? + partial)
    }

    /// The profile phase at curve parameter `t`, zero at `t = T/4`.
    fn phase(&self, t: f64, which: AngleIntegrand) -> Result<f64> {
        self.theta(t - 0.25 * self.period, which)
    }

    /// The globally defined profile point at `t`.
    pub fn beta(&self, t: f64) -> Result<ProfilePoint> {
        let phase = self.phase(t, AngleIntegrand::Beta)?;
        Ok(beta_with_phase(&self.params, t, phase))
    }

    /// The polar profile point at `t`; undefined on `C = -1/H`.
    pub fn alpha(&self, t: f64) -> Result<ProfilePoint> {
        let p = &self.params;
        let g = g_eval(p, t).g;
        let r = ((p.c() - g * g) / p.c()).max(0.0).sqrt();
        let phase = self.phase(t, AngleIntegrand::Alpha)?;
        Ok(ProfilePoint { t, x: r * phase.cos(), y: r * phase.sin() })
    }

    /// `count` samples `t_j = start + j step`, integrating the phase
    /// incrementally between consecutive samples.
    pub fn sample_beta(&self, start: f64, step: f64, count: usize) -> Result<Vec<ProfilePoint>> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return Ok(out);
        }
        let mut phase = self.phase(start, AngleIntegrand::Beta)?;
        let mut t_prev = start;
        for j in 0..count {
            let t = start + j as f64 * step;
            if j > 0 {
                phase += self.integrate(AngleIntegrand::Beta, t_prev, t)?;
            }
            out.push(beta_with_phase(&self.params, t, phase));
            t_prev = t;
        }
        Ok(out)
    }
}

/// `beta = -(sqrt(C) g' + i (H g^2 + 1)) e^{-i phase} / sqrt(C (g'^2 + g^2))`.
fn beta_with_phase(p: &SurfaceParams, t: f64, phase: f64) -> ProfilePoint {
    let s = g_eval(p, t);
    let sc = p.c().sqrt();
    let pp = sc * s.g_prime;
    let qq = p.h() * s.g * s.g + 1.0;
    let d = sc * (s.g_prime * s.g_prime + s.g * s.g).sqrt();
    let (sin, cos) = phase.sin_cos();
    ProfilePoint { t, x: (-pp * cos - qq * sin) / d, y: (pp * sin - qq * cos) / d }
}

/// `theta(t)` for either integrand.
pub fn theta_cumulative(p: &SurfaceParams, t: f64, which: AngleIntegrand) -> Result<f64> {
    Profile::new(*p)?.theta(t, which)
}

pub fn profile_alpha(p: &SurfaceParams, t: f64) -> Result<ProfilePoint> {
    if p.contains_axis() {
        return Err(CmcError::AxisCase { h: p.h() });
    }
    Profile::new(*p)?.alpha(t)
}

pub fn profile_beta(p: &SurfaceParams, t: f64) -> Result<ProfilePoint> {
    Profile::new(*p)?.beta(t)
}

/// The immersion at `(s, t)` built from a profile point.
pub fn immersion_from_point(s: f64, b: &ProfilePoint) -> AmbientPoint {
    let r = (1.0 - b.x * b.x - b.y * b.y).max(0.0).sqrt();
    let (sin, cos) = s.sin_cos();
    AmbientPoint([r * cos, r * sin, b.x, b.y])
}

pub fn immersion_phi(p: &SurfaceParams, s: f64, t: f64) -> Result<AmbientPoint> {
    Ok(immersion_from_point(s, &profile_beta(p, t)?))
}

/// `n` uniform samples of the profile over `[-T/4, 3T/4]`.
pub fn fundamental_piece(p: &SurfaceParams, n: usize) -> Result<ProfilePolyline> {
    if n < 2 {
        return Err(CmcError::InvalidInput(format!("fundamental piece needs n >= 2, got {n}")));
    }
    let profile = Profile::new(*p)?;
    let t_period = profile.period();
    let pts = profile.sample_beta(-0.25 * t_period, t_period / (n - 1) as f64, n)?;
    ProfilePolyline::new(*p, pts)
}

/// Polar angle of `b` relative to `a`, in `(-pi, pi]`.
pub fn angle_between(a: &ProfilePoint, b: &ProfilePoint) -> f64 {
    let cross = a.x * b.y - a.y * b.x;
    let dot = a.x * b.x + a.y * b.y;
    cross.atan2(dot)
}

/// Reduces an angle to `[0, 2 pi)`.
pub fn wrap_2pi(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}
