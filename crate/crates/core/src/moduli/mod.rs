//! Closure, classification and embeddedness on the `(H, C)` moduli space.

mod classify;
mod closure;
mod intersect;
mod pieces;
mod rational;
mod turning;

pub use classify::{classify, Classification, Tag, DEFAULT_QMAX, DEFAULT_RATIONAL_TOL};
pub use closure::{
    solve_c_for_angle, solve_closure, solve_h_for_axis_rotation, solve_h_for_axis_symmetry,
    AngleSolution, Branch, ClosureSolution,
};
pub use intersect::{self_intersection, IntersectionReport, Witness, DEFAULT_INTERSECTION_TOL};
pub use pieces::{period_rotation, profile_polyline_pieces, region_bounds};
pub use rational::rational_approx;
pub use turning::{close_with_arc, closed_turning, turning_angle};
