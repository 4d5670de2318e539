//! Bisection solvers for the closure equations.
//!
//! `C -> K(H, C)` decreases on each branch of the moduli ray, so for fixed
//! `H` the attainable angles form an open interval bounded by the limit
//! formulas and every interior target has exactly one solution.

use std::f64::consts::PI;

use crate::angular::{b_value, k_limit_cmin, k_limit_inf, k_one_sided_limits, k_value};
use crate::error::{CmcError, Result};
use crate::params::{c_min, SurfaceParams};
use crate::tol;

/// Portion of the `C`-ray a solver searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `c_min(H) < C < -1/H`, only for `H < 0`.
    BelowAxisC,
    /// `C > -1/H`, only for `H < 0`.
    AboveAxisC,
    /// Every admissible `C`; for `H < 0` the branch containing the target.
    WholeRay,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSolution {
    pub h: f64,
    pub c: f64,
    pub angle: f64,
    pub residual: f64,
}

/// A surface whose profile closes up: `K(H, C) = 2 pi m / k` with `k`
/// pieces, or for axis solutions `b(H) = 2 pi / m` with `k = m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureSolution {
    pub m: u64,
    pub k: u64,
    pub h: f64,
    pub c: f64,
    pub residual: f64,
    pub contains_axis: bool,
}

impl ClosureSolution {
    pub fn params(&self) -> Result<SurfaceParams> {
        SurfaceParams::new(self.h, self.c)
    }
}

/// The C-interval of one branch and the values of `K` at its ends.
struct Bracket {
    c_lo: f64,
    c_hi: f64,
    k_at_lo: f64,
    k_at_hi: f64,
}

fn bracket(h: f64, target: f64, branch: Branch) -> Result<Bracket> {
    let cm = c_min(h);
    let below = |(left, _): (f64, f64)| Bracket {
        c_lo: cm,
        c_hi: -1.0 / h,
        k_at_lo: k_limit_cmin(h),
        k_at_hi: left,
    };
    let above = |(_, right): (f64, f64)| Bracket {
        c_lo: -1.0 / h,
        c_hi: f64::INFINITY,
        k_at_lo: right,
        k_at_hi: k_limit_inf(h),
    };
    if h >= 0.0 {
        if branch != Branch::WholeRay {
            return Err(CmcError::Domain(format!("branch {branch:?} requires H < 0")));
        }
        return Ok(Bracket {
            c_lo: cm,
            c_hi: f64::INFINITY,
            k_at_lo: k_limit_cmin(h),
            k_at_hi: k_limit_inf(h),
        });
    }
    let limits = k_one_sided_limits(h)?;
    Ok(match branch {
        Branch::BelowAxisC => below(limits),
        Branch::AboveAxisC => above(limits),
        Branch::WholeRay => {
            // the two branches cover disjoint ranges, (pi, 2 pi) and (-pi, 0)
            if target > limits.0 {
                below(limits)
            } else {
                above(limits)
            }
        }
    })
}

fn k_at(h: f64, c: f64) -> Result<f64> {
    Ok(k_value(&SurfaceParams::new(h, c)?)?.value)
}

/// Solves `K(H, C) = target` on the given branch.
pub fn solve_c_for_angle(h: f64, target: f64, branch: Branch) -> Result<AngleSolution> {
    let br = bracket(h, target, branch)?;
    let out_of_range = || CmcError::OutOfRange { target, lo: br.k_at_hi, hi: br.k_at_lo };
    if !(target < br.k_at_lo && target > br.k_at_hi) {
        return Err(out_of_range());
    }

    // Pull the tentative endpoints in from the exact limits until the
    // quadrature values bracket the target.
    let scale = br.c_lo.abs().max(1.0);
    let mut lo = None;
    let mut eps = 1e-3;
    while eps > 1e-14 {
        let c = br.c_lo + eps * scale;
        if c < br.c_hi && k_at(h, c)? > target {
            lo = Some(c);
            break;
        }
        eps *= 0.1;
    }
    let mut hi = None;
    if br.c_hi.is_finite() {
        let mut eps = 1e-3;
        while eps > 1e-14 {
            let c = br.c_hi - eps * br.c_hi.abs();
            if c > br.c_lo && k_at(h, c)? < target {
                hi = Some(c);
                break;
            }
            eps *= 0.1;
        }
    } else {
        let mut c = (2.0 * br.c_lo).max(10.0);
        while c < 1e16 {
            if k_at(h, c)? < target {
                hi = Some(c);
                break;
            }
            c *= 4.0;
        }
    }
    let (Some(mut lo), Some(mut hi)) = (lo, hi) else {
        return Err(out_of_range());
    };

    let mut best = (f64::INFINITY, lo);
    for _ in 0..tol::SOLVER_ITERATIONS {
        // geometric midpoints while the bracket spans orders of magnitude
        let mid = if hi > 4.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if !(mid > lo && mid < hi) {
            break;
        }
        let k = k_at(h, mid)?;
        let r = (k - target).abs();
        if r < best.0 {
            best = (r, mid);
        }
        if r < 1e-12 {
            break;
        }
        if k > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (residual, c) = best;
    if residual >= tol::SOLVER {
        return Err(CmcError::NonConvergence(format!(
            "bisection for K = {target} at H = {h} stalled with residual {residual:e}"
        )));
    }
    Ok(AngleSolution { h, c, angle: target, residual })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Solves `K(H, C) = 2 pi m / k` for coprime `m, k`.
pub fn solve_closure(h: f64, m: i64, k: u64, branch: Branch) -> Result<ClosureSolution> {
    if k == 0 || m == 0 || gcd(m.unsigned_abs(), k) != 1 {
        return Err(CmcError::InvalidInput(format!("need coprime nonzero m, k; got {m}/{k}")));
    }
    let target = 2.0 * PI * m as f64 / k as f64;
    let s = solve_c_for_angle(h, target, branch)?;
    Ok(ClosureSolution {
        m: m.unsigned_abs(),
        k,
        h,
        c: s.c,
        residual: s.residual,
        contains_axis: false,
    })
}

/// Bisection for `b(H) = target` over `H < 0`, `target` in `(0, pi)`.
fn solve_b(target: f64) -> Result<(f64, f64)> {
    // b decreases from pi (H -> -inf) to 0 (H -> 0)
    let b = |h: f64| b_value(h).map(|r| r.value);
    let mut lo = -1.0;
    while b(lo)? < target {
        lo *= 2.0;
        if lo < -1e12 {
            return Err(CmcError::OutOfRange { target, lo: 0.0, hi: PI });
        }
    }
    let mut hi = -0.5;
    while b(hi)? > target {
        hi *= 0.5;
        if hi > -1e-12 {
            return Err(CmcError::OutOfRange { target, lo: 0.0, hi: PI });
        }
    }
    let mut best = (f64::INFINITY, lo);
    for _ in 0..tol::SOLVER_ITERATIONS {
        let mid = -(lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            break;
        }
        let v = b(mid)?;
        let r = (v - target).abs();
        if r < best.0 {
            best = (r, mid);
        }
        if r < 1e-13 {
            break;
        }
        if v > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if best.0 >= tol::SOLVER {
        return Err(CmcError::NonConvergence(format!(
            "bisection for b(H) = {target} stalled with residual {:e}",
            best.0
        )));
    }
    Ok((best.1, best.0))
}

/// The `H_m < 0` with `b(H_m) = 2 pi / m`, paired with `C = -1/H_m`.
pub fn solve_h_for_axis_symmetry(m: u64) -> Result<ClosureSolution> {
    if m <= 2 {
        return Err(CmcError::Domain(format!(
            "b(H) < pi, so b(H) = 2 pi / {m} has no solution"
        )));
    }
    let (h, residual) = solve_b(2.0 * PI / m as f64)?;
    Ok(ClosureSolution { m, k: m, h, c: -1.0 / h, residual, contains_axis: true })
}

/// The axis surface whose pieces rotate by `2 pi j / m`, i.e.
/// `b(H) = 2 pi j / m - pi`. Requires `m / 2 < j < m`, `gcd(j, m) = 1`; the
/// profile then closes after exactly `m` pieces.
pub fn solve_h_for_axis_rotation(m: u64, j: u64) -> Result<ClosureSolution> {
    if !(2 * j > m && j < m) || gcd(j, m) != 1 {
        return Err(CmcError::Domain(format!("need m/2 < j < m coprime with m, got j={j}, m={m}")));
    }
    let target = 2.0 * PI * j as f64 / m as f64 - PI;
    let (h, residual) = solve_b(target)?;
    Ok(ClosureSolution { m: j, k: m, h, c: -1.0 / h, residual, contains_axis: true })
}
