//! The closed-versus-dense dichotomy, decided up to a rational tolerance.

use std::f64::consts::TAU;

use super::intersect::{self_intersection, DEFAULT_INTERSECTION_TOL};
use super::pieces::{period_rotation, profile_polyline_pieces, region_bounds};
use super::rational::rational_approx;
use crate::error::Result;
use crate::params::SurfaceParams;

pub const DEFAULT_QMAX: u64 = 64;
pub const DEFAULT_RATIONAL_TOL: f64 = 1e-9;

/// Samples per piece when testing a closed profile for embeddedness.
const EMBED_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Isoparametric,
    Closed,
    /// No rational `m/k` with `k <= q_max` lies within `tol` of the
    /// rotation over `2 pi`.
    PresumedDense,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Isoparametric => "isoparametric",
            Tag::Closed => "closed",
            Tag::PresumedDense => "presumed_dense",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub tag: Tag,
    /// Number of fundamental pieces after which the profile closes.
    pub symmetry_order: Option<u64>,
    pub contains_axis: bool,
    /// `(m, M)` bounds of the squared radius, for presumed-dense surfaces.
    pub annulus: Option<(f64, f64)>,
    pub embedded: Option<bool>,
    /// Rotation between consecutive pieces (`K`, or `b + pi` on the axis).
    pub angle: Option<f64>,
    pub q_max: u64,
    pub tol: f64,
}

/// Classifies `p`. Closed surfaces with `H < 0` are never embedded; for
/// `H >= 0` the assembled profile is tested for self-intersections.
pub fn classify(p: &SurfaceParams, q_max: u64, tol: f64) -> Result<Classification> {
    let mut out = Classification {
        tag: Tag::Isoparametric,
        symmetry_order: None,
        contains_axis: p.contains_axis(),
        annulus: None,
        embedded: None,
        angle: None,
        q_max,
        tol,
    };
    if p.is_isoparametric() {
        return Ok(out);
    }
    let angle = period_rotation(p)?;
    out.angle = Some(angle);
    match rational_approx(angle / TAU, q_max, tol) {
        Some((_, k)) => {
            out.tag = Tag::Closed;
            out.symmetry_order = Some(k);
            out.embedded = Some(if p.h() < 0.0 {
                false
            } else {
                let poly = profile_polyline_pieces(p, k as usize, EMBED_SAMPLES)?;
                !self_intersection(&poly, DEFAULT_INTERSECTION_TOL).intersects
            });
        }
        None => {
            out.tag = Tag::PresumedDense;
            out.annulus = Some(region_bounds(p));
        }
    }
    Ok(out)
}
