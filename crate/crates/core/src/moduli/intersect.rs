//! Self-intersection of a sampled profile curve.
//!
//! Segments are swept in order of their left `x`; each pair whose bounding
//! boxes overlap is tested with orientation predicates, falling back to an
//! `tol`-ball on the segment distance for touching or near-tangential pairs.

use crate::surface::{ProfilePoint, ProfilePolyline};
use crate::tol;

pub const DEFAULT_INTERSECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub t_a: f64,
    pub t_b: f64,
    pub point: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionReport {
    pub intersects: bool,
    pub witness: Option<Witness>,
    pub segments_tested: usize,
}

#[derive(Clone, Copy)]
struct Seg {
    a: ProfilePoint,
    b: ProfilePoint,
}

impl Seg {
    fn x_range(&self) -> (f64, f64) {
        (self.a.x.min(self.b.x), self.a.x.max(self.b.x))
    }

    fn y_range(&self) -> (f64, f64) {
        (self.a.y.min(self.b.y), self.a.y.max(self.b.y))
    }

    fn at(&self, s: f64) -> ProfilePoint {
        ProfilePoint {
            t: self.a.t + s * (self.b.t - self.a.t),
            x: self.a.x + s * (self.b.x - self.a.x),
            y: self.a.y + s * (self.b.y - self.a.y),
        }
    }

    /// Parameter in `[0, 1]` of the point closest to `p`.
    fn project(&self, p: &ProfilePoint) -> f64 {
        let (dx, dy) = (self.b.x - self.a.x, self.b.y - self.a.y);
        let len2 = dx * dx + dy * dy;
        if len2 == 0.0 {
            return 0.0;
        }
        (((p.x - self.a.x) * dx + (p.y - self.a.y) * dy) / len2).clamp(0.0, 1.0)
    }
}

fn orient(a: &ProfilePoint, b: &ProfilePoint, c: &ProfilePoint) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Segment parameters `(s, u)` of a meeting point of `p` and `q`, if they
/// cross or come within `eps`.
fn meet(p: &Seg, q: &Seg, eps: f64) -> Option<(f64, f64)> {
    let d1 = orient(&p.a, &p.b, &q.a);
    let d2 = orient(&p.a, &p.b, &q.b);
    let d3 = orient(&q.a, &q.b, &p.a);
    let d4 = orient(&q.a, &q.b, &p.b);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        // proper crossing
        let s = d3 / (d3 - d4);
        let u = d1 / (d1 - d2);
        return Some((s, u));
    }
    // closest approach is attained at an endpoint of one segment
    let candidates = [
        (p.project(&q.a), 0.0),
        (p.project(&q.b), 1.0),
        (0.0, q.project(&p.a)),
        (1.0, q.project(&p.b)),
    ];
    candidates
        .into_iter()
        .map(|(s, u)| (p.at(s).distance(&q.at(u)), s, u))
        .filter(|(d, _, _)| *d < eps)
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .map(|(_, s, u)| (s, u))
}

/// Tests every pair of non-adjacent segments of `poly`.
///
/// Consecutive segments share an endpoint and are skipped; so are the first
/// and last segments when the polyline closes up (its ends within
/// [`tol::CLOSURE`]).
pub fn self_intersection(poly: &ProfilePolyline, tol: f64) -> IntersectionReport {
    let pts = poly.points();
    let segs: Vec<Seg> = pts.windows(2).map(|w| Seg { a: w[0], b: w[1] }).collect();
    let n = segs.len();
    let closed = n >= 3 && poly.closure_gap() < tol::CLOSURE;
    let adjacent = |i: usize, j: usize| {
        let (i, j) = (i.min(j), i.max(j));
        j == i + 1 || (closed && i == 0 && j == n - 1)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| segs[i].x_range().0.total_cmp(&segs[j].x_range().0));

    let mut tested = 0;
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let xi_lo = segs[i].x_range().0;
        let (yi_lo, yi_hi) = segs[i].y_range();
        active.retain(|&j| segs[j].x_range().1 + tol >= xi_lo);
        for &j in &active {
            if adjacent(i, j) {
                continue;
            }
            let (yj_lo, yj_hi) = segs[j].y_range();
            if yj_lo > yi_hi + tol || yi_lo > yj_hi + tol {
                continue;
            }
            tested += 1;
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if let Some((s, u)) = meet(&segs[a], &segs[b], tol) {
                let pa = segs[a].at(s);
                let pb = segs[b].at(u);
                return IntersectionReport {
                    intersects: true,
                    witness: Some(Witness {
                        t_a: pa.t,
                        t_b: pb.t,
                        point: (0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)),
                    }),
                    segments_tested: tested,
                };
            }
        }
        active.push(i);
    }
    IntersectionReport { intersects: false, witness: None, segments_tested: tested }
}
