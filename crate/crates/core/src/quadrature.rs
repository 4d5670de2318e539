//! Quadrature engines.
//!
//! * [`chebyshev_weighted`] integrates `f(u) / sqrt((u - x1)(x2 - u))` over
//!   `(x1, x2)`. The sine substitution `u = mid + half * sin(phi)` absorbs
//!   the weight; sampling `phi` at midpoints gives the Gauss–Chebyshev rule
//!   of the first kind, exact for polynomials of degree `< 2n`.
//! * [`adaptive`] is a bisection scheme around a 7/15-point Gauss–Kronrod
//!   pair for smooth integrands.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{CmcError, Result};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Endpoints carrying the weight `1 / sqrt((u - x1)(x2 - u))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularInterval {
    x1: f64,
    x2: f64,
}

impl SingularInterval {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if !(x1 < x2) || !x1.is_finite() || !x2.is_finite() {
            return Err(CmcError::InvalidInput(format!(
                "singular interval needs finite x1 < x2, got ({x1}, {x2})"
            )));
        }
        Ok(Self { x1, x2 })
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    fn mid(&self) -> f64 {
        0.5 * (self.x1 + self.x2)
    }

    fn half_width(&self) -> f64 {
        0.5 * (self.x2 - self.x1)
    }

    /// Distance from `p` to the closed interval.
    pub fn distance_to(&self, p: f64) -> f64 {
        if p < self.x1 {
            self.x1 - p
        } else if p > self.x2 {
            p - self.x2
        } else {
            0.0
        }
    }
}

/// Gauss–Chebyshev rule with `n` nodes on `iv`.
fn chebyshev_rule<F: Fn(f64) -> f64>(f: &F, iv: &SingularInterval, n: usize) -> Result<f64> {
    let (mid, half) = (iv.mid(), iv.half_width());
    let step = PI / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        // phi in (-pi/2, pi/2), midpoints of n equal cells
        let phi = -0.5 * PI + (k as f64 + 0.5) * step;
        let u = mid + half * phi.sin();
        let v = f(u);
        if !v.is_finite() {
            return Err(CmcError::NonFinite(u));
        }
        sum += v;
    }
    Ok(sum * step)
}

/// Integrates `f(u) / sqrt((u - x1)(x2 - u))` over `iv`, starting from `n`
/// nodes and doubling until successive values differ by less than `tol`.
pub fn chebyshev_weighted<F: Fn(f64) -> f64>(
    f: F,
    iv: SingularInterval,
    n: usize,
    tol: f64,
) -> Result<QuadResult> {
    if n < 2 {
        return Err(CmcError::InvalidInput(format!("need at least 2 nodes, got {n}")));
    }
    let mut n = n;
    let mut evaluations = n;
    let mut prev = chebyshev_rule(&f, &iv, n)?;
    while 2 * n <= tol::MAX_CHEBYSHEV_NODES {
        n *= 2;
        let cur = chebyshev_rule(&f, &iv, n)?;
        evaluations += n;
        let diff = (cur - prev).abs();
        if diff < tol {
            return Ok(QuadResult { value: cur, error_estimate: diff, evaluations });
        }
        prev = cur;
    }
    Err(CmcError::NonConvergence(format!(
        "weighted rule on ({}, {}) not within {tol:e} at {} nodes",
        iv.x1, iv.x2, tol::MAX_CHEBYSHEV_NODES
    )))
}

/// [`chebyshev_weighted`] for an `f` with a pole at `pole` outside the
/// interval. Refuses to integrate when the pole is inside the interval or
/// closer than [`tol::POLE_PROXIMITY`] to it.
pub fn chebyshev_weighted_pole_checked<F: Fn(f64) -> f64>(
    f: F,
    iv: SingularInterval,
    pole: f64,
    n: usize,
    tol: f64,
) -> Result<QuadResult> {
    if pole > iv.x1 && pole < iv.x2 {
        return Err(CmcError::InvalidInput(format!(
            "pole {pole} inside ({}, {})",
            iv.x1, iv.x2
        )));
    }
    // the nodes never get closer to an outside pole than the endpoints do
    let distance = iv.distance_to(pole);
    if distance < tol::POLE_PROXIMITY {
        return Err(CmcError::PoleProximity { pole, distance });
    }
    chebyshev_weighted(f, iv, n, tol)
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel.
#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    depth: u32,
    value: f64,
    error: f64,
    /// Kronrod estimate of the integral of `|f|`, the rounding scale.
    absolute: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, depth: u32) -> Result<Self> {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let eval = |x: f64| -> Result<f64> {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(CmcError::NonFinite(x))
            }
        };
        let fc = eval(c)?;
        let mut kronrod = WGK[7] * fc;
        let mut gauss = WG[3] * fc;
        let mut absolute = WGK[7] * fc.abs();
        for j in 0..7 {
            let dx = h * XGK[j];
            let (fl, fr) = (eval(c - dx)?, eval(c + dx)?);
            kronrod += WGK[j] * (fl + fr);
            absolute += WGK[j] * (fl.abs() + fr.abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * (fl + fr);
            }
        }
        Ok(Self {
            lo,
            hi,
            depth,
            value: kronrod * h,
            error: ((kronrod - gauss) * h).abs(),
            absolute: absolute * h.abs(),
        })
    }

    /// Further bisection cannot improve an estimate already at rounding level.
    fn at_rounding_level(&self) -> bool {
        self.error <= 50.0 * f64::EPSILON * self.absolute
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod quadrature of a smooth `f` on `[a, b]`
/// to absolute tolerance `tol`: the panel with the largest error estimate
/// is bisected until the estimates sum to at most `tol`. Panels whose
/// estimate is at rounding level are retired instead of bisected.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 1 });
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(CmcError::InvalidInput(format!("non-finite bounds ({a}, {b})")));
    }
    if !(tol > 0.0) {
        return Err(CmcError::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut evaluations = 15;
    let mut active = BinaryHeap::new();
    let mut retired: Vec<Panel> = Vec::new();
    active.push(Panel::new(&f, a, b, 0)?);
    let total_error = |active: &BinaryHeap<Panel>, retired: &[Panel]| -> f64 {
        active.iter().chain(retired).map(|p| p.error).sum()
    };
    let mut error = active.peek().map_or(0.0, |p| p.error);
    while error > tol {
        let Some(worst) = active.pop() else { break };
        if worst.at_rounding_level() {
            retired.push(worst);
            continue;
        }
        if worst.depth >= tol::MAX_ADAPTIVE_DEPTH {
            return Err(CmcError::NonConvergence(format!(
                "adaptive rule reached depth {} on [{}, {}]",
                tol::MAX_ADAPTIVE_DEPTH,
                worst.lo,
                worst.hi
            )));
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = Panel::new(&f, worst.lo, mid, worst.depth + 1)?;
        let right = Panel::new(&f, mid, worst.hi, worst.depth + 1)?;
        evaluations += 30;
        error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
        if active.len() % 256 == 0 {
            // keep the running sum from drifting
            error = total_error(&active, &retired);
        }
    }
    let panels = || active.iter().chain(&retired);
    Ok(QuadResult {
        value: panels().map(|p| p.value).sum(),
        error_estimate: panels().map(|p| p.error).sum(),
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> SingularInterval {
        SingularInterval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn weighted_constant_and_linear() {
        let iv = SingularInterval::new(-0.3, 2.1).unwrap();
        let r = chebyshev_weighted(|_| 1.0, iv, 4, 1e-14).unwrap();
        assert!((r.value - PI).abs() < 1e-14);
        let r = chebyshev_weighted(|u| u, iv, 4, 1e-14).unwrap();
        assert!((r.value - PI * 0.9).abs() < 1e-14);
    }

    #[test]
    fn weighted_square_on_unit_interval() {
        // u = (1 + sin phi)/2: integral of (1 + sin)^2 / 4 over (-pi/2, pi/2)
        // = (pi + pi/2) / 4 = 3 pi / 8
        let r = chebyshev_weighted(|u| u * u, unit(), 4, 1e-14).unwrap();
        assert!((r.value - 3.0 * PI / 8.0).abs() < 1e-14);
        assert!(r.error_estimate >= 0.0 && r.evaluations > 0);
    }

    #[test]
    fn weighted_is_exact_below_degree_2n() {
        // Wallis: integral of x^(2j) / sqrt(1 - x^2) over (-1, 1) = pi (2j-1)!! / (2j)!!
        let iv = SingularInterval::new(-1.0, 1.0).unwrap();
        let n = 6;
        for j in 0..n {
            let exact = (1..=j).fold(PI, |acc, i| acc * (2 * i - 1) as f64 / (2 * i) as f64);
            let got = chebyshev_rule(&|x: f64| x.powi(2 * j as i32), &iv, n).unwrap();
            assert!((got - exact).abs() < 1e-13, "degree {}", 2 * j);
        }
    }

    #[test]
    fn weighted_rejects_bad_input() {
        assert!(SingularInterval::new(1.0, 1.0).is_err());
        assert!(chebyshev_weighted(|_| 1.0, unit(), 1, 1e-10).is_err());
        assert!(matches!(
            chebyshev_weighted(|u| 1.0 / u, unit(), 2, 1e-10),
            Err(CmcError::NonConvergence(_))
        ));
    }

    #[test]
    fn pole_checks() {
        assert!(matches!(
            chebyshev_weighted_pole_checked(|u| 1.0 / (1.0 - u), unit(), 0.5, 8, 1e-10),
            Err(CmcError::InvalidInput(_))
        ));
        let iv = SingularInterval::new(0.2, 1.0 - 1e-15).unwrap();
        assert!(matches!(
            chebyshev_weighted_pole_checked(|u| 1.0 / (1.0 - u), iv, 1.0, 8, 1e-10),
            Err(CmcError::PoleProximity { .. })
        ));
        // far pole: integral of 1/((p - u) sqrt((u-a)(b-u))) = pi / sqrt((p-a)(p-b))
        let iv = SingularInterval::new(0.1, 0.6).unwrap();
        let r = chebyshev_weighted_pole_checked(|u| 1.0 / (1.0 - u), iv, 1.0, 8, 1e-13).unwrap();
        assert!((r.value - PI / (0.9f64 * 0.4).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_basics() {
        let r = adaptive(f64::sin, 0.0, PI, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert_eq!(adaptive(f64::sin, 1.0, 1.0, 1e-12).unwrap().value, 0.0);
        // reversed bounds flip the sign
        let r = adaptive(f64::sin, PI, 0.0, 1e-12).unwrap();
        assert!((r.value + 2.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_resolves_a_narrow_spike() {
        let eps = 1e-6;
        let f = |x: f64| eps / (x * x + eps * eps);
        let r = adaptive(f, -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn adaptive_reports_non_finite() {
        assert!(matches!(
            adaptive(|x: f64| 1.0 / x, 0.0, 1.0, 1e-8),
            Err(CmcError::NonFinite(_)) | Err(CmcError::NonConvergence(_))
        ));
        assert!(matches!(
            adaptive(|_| f64::NAN, 0.0, 1.0, 1e-8),
            Err(CmcError::NonFinite(_))
        ));
    }
}
