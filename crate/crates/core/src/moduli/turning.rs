//! Total rotation of the unit tangent along a sampled curve.

use crate::error::{CmcError, Result};
use crate::surface::{angle_between, wrap_2pi, ProfilePoint, ProfilePolyline};

const MIN_SAMPLES: usize = 100;
const COINCIDENT: f64 = 1e-14;

fn check_segments(points: &[ProfilePoint]) -> Result<()> {
    match points.windows(2).position(|w| w[0].distance(&w[1]) < COINCIDENT) {
        Some(i) => Err(CmcError::DegenerateSegment(i, i + 1)),
        None => Ok(()),
    }
}

/// Signed change from direction `a` to direction `b`, in `(-pi, pi]`.
fn turn(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 * b.1 - a.1 * b.0).atan2(a.0 * b.0 + a.1 * b.1)
}

/// Second-order derivative estimate at `i` from three neighbouring samples
/// `j0 < j1 < j2` (in parameter `t`), one of which is `i`.
fn three_point(p: &[ProfilePoint], i: usize, j: [usize; 3]) -> (f64, f64) {
    let t = p[i].t;
    let [a, b, c] = j.map(|k| p[k].t);
    // derivatives of the Lagrange basis polynomials at t
    let la = ((t - b) + (t - c)) / ((a - b) * (a - c));
    let lb = ((t - a) + (t - c)) / ((b - a) * (b - c));
    let lc = ((t - a) + (t - b)) / ((c - a) * (c - b));
    let [pa, pb, pc] = j.map(|k| p[k]);
    (la * pa.x + lb * pb.x + lc * pc.x, la * pa.y + lb * pb.y + lc * pc.y)
}

/// Accumulated signed rotation of the unit tangent from the first to the
/// last sample of `piece`.
///
/// Tangents are estimated at every sample by second-order differences in
/// the curve parameter (one-sided at the ends), so the result converges at
/// second order and does not carry the half-segment error of a pure
/// exterior-angle sum at the two ends.
pub fn turning_angle(piece: &ProfilePolyline) -> Result<f64> {
    let p = piece.points();
    let n = p.len();
    if n < MIN_SAMPLES {
        return Err(CmcError::InvalidInput(format!(
            "turning angle needs at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    check_segments(p)?;
    let tangents: Vec<(f64, f64)> = (0..n)
        .map(|i| match i {
            0 => three_point(p, 0, [0, 1, 2]),
            i if i == n - 1 => three_point(p, i, [n - 3, n - 2, n - 1]),
            i => three_point(p, i, [i - 1, i, i + 1]),
        })
        .collect();
    Ok(tangents.windows(2).map(|w| turn(w[0], w[1])).sum())
}

/// Sum of the exterior angles of the closed polygon through `points`; a
/// repeated final point is ignored. Equals `+-2 pi` for a simple polygon.
pub fn closed_turning(points: &[ProfilePoint]) -> Result<f64> {
    let mut pts = points;
    if pts.len() > 1 && pts[0].distance(&pts[pts.len() - 1]) < COINCIDENT {
        pts = &pts[..pts.len() - 1];
    }
    let n = pts.len();
    if n < 3 {
        return Err(CmcError::InvalidInput("closed polygon needs at least 3 vertices".into()));
    }
    check_segments(pts)?;
    let dir = |i: usize| {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        (b.x - a.x, b.y - a.y)
    };
    Ok((0..n).map(|i| turn(dir(i), dir((i + 1) % n))).sum())
}

/// `piece` followed by `samples` interior points of the circular arc about
/// the origin leading from its last point back to its first, turning the
/// same way as the piece does around the origin.
///
/// The piece starts and ends on the outer bounding circle, so the arc and
/// the piece together form a closed curve.
pub fn close_with_arc(piece: &ProfilePolyline, samples: usize) -> Vec<ProfilePoint> {
    let p = piece.points();
    let (first, last) = (piece.first(), piece.last());
    // net polar winding of the piece decides the direction of the arc
    let winding: f64 = p.windows(2).map(|w| angle_between(&w[0], &w[1])).sum();
    let gap = angle_between(last, first);
    let sweep = if winding >= 0.0 { wrap_2pi(gap) } else { -wrap_2pi(-gap) };
    let (r0, r1) = (last.radius(), first.radius());
    let a0 = last.polar_angle();
    let dt = if p.len() > 1 { (last.t - p[p.len() - 2].t).abs() } else { 1.0 };
    let mut out = p.to_vec();
    for j in 1..=samples {
        let s = j as f64 / (samples + 1) as f64;
        let r = r0 + s * (r1 - r0);
        let a = a0 + s * sweep;
        out.push(ProfilePoint { t: last.t + j as f64 * dt, x: r * a.cos(), y: r * a.sin() });
    }
    out
}
