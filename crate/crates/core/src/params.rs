//! The two-parameter moduli space `(H, C)` and the quantities that depend on
//! it in closed form.

use std::f64::consts::PI;

use crate::error::{CmcError, Result};
use crate::tol;

/// Smallest admissible conserved quantity for mean curvature `h`:
/// `2 (H + sqrt(1 + H^2))`. At equality the profile is a circle.
///
/// Evaluated as `2 / (sqrt(1 + H^2) - H)` for negative `h` to avoid
/// cancellation.
pub fn c_min(h: f64) -> f64 {
    let w = (1.0 + h * h).sqrt();
    if h >= 0.0 {
        2.0 * (h + w)
    } else {
        2.0 / (w - h)
    }
}

/// Period of `g`: `pi / sqrt(1 + H^2)`.
pub fn period(h: f64) -> f64 {
    PI / (1.0 + h * h).sqrt()
}

/// Which side of the hyperbola `C = -1/H` a parameter pair lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `H < 0` and `C < -1/H`.
    BelowAxisC,
    /// `H < 0` and `C > -1/H`.
    AboveAxisC,
    /// `H < 0` and `C = -1/H`: the profile passes through the origin.
    Axis,
    /// `H >= 0`, where the hyperbola does not meet the moduli space.
    NotApplicable,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::BelowAxisC => "below_axis_C",
            Side::AboveAxisC => "above_axis_C",
            Side::Axis => "axis",
            Side::NotApplicable => "not_applicable",
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A point `(H, C)` of the moduli space with `C >= c_min(H)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParams {
    h: f64,
    c: f64,
}

impl SurfaceParams {
    /// Validates `C >= c_min(H)`. Values below `c_min` by no more than the
    /// boundary tolerance are snapped onto the isoparametric boundary.
    pub fn new(h: f64, c: f64) -> Result<Self> {
        if !h.is_finite() || !c.is_finite() {
            return Err(CmcError::Domain(format!("non-finite parameters H = {h}, C = {c}")));
        }
        let cm = c_min(h);
        if c < cm {
            if cm - c <= tol::BOUNDARY_REL * cm.max(1.0) {
                return Ok(Self { h, c: cm });
            }
            return Err(CmcError::Domain(format!(
                "C = {c} is below c_min(H) = {cm} for H = {h}"
            )));
        }
        Ok(Self { h, c })
    }

    /// The isoparametric (Clifford-type) surface with mean curvature `h`.
    pub fn isoparametric(h: f64) -> Self {
        Self { h, c: c_min(h) }
    }

    /// The axis-containing surface `C = -1/H`; requires `h < 0`.
    pub fn axis(h: f64) -> Result<Self> {
        if !(h < 0.0) {
            return Err(CmcError::Domain(format!("axis case requires H < 0, got {h}")));
        }
        Self::new(h, -1.0 / h)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `sqrt(1 + H^2)`.
    pub fn w(&self) -> f64 {
        (1.0 + self.h * self.h).sqrt()
    }

    pub fn period(&self) -> f64 {
        period(self.h)
    }

    pub fn c_min(&self) -> f64 {
        c_min(self.h)
    }

    /// Discriminant `C^2 - 4CH - 4`, exactly zero on the boundary.
    pub fn discriminant(&self) -> f64 {
        if self.is_isoparametric() {
            return 0.0;
        }
        let (h, c) = (self.h, self.c);
        (c * c - 4.0 * c * h - 4.0).max(0.0)
    }

    pub fn is_isoparametric(&self) -> bool {
        let cm = self.c_min();
        (self.c - cm).abs() <= tol::BOUNDARY_REL * cm.max(1.0)
    }

    pub fn contains_axis(&self) -> bool {
        self.h < 0.0 && (self.c + 1.0 / self.h).abs() <= tol::BOUNDARY_REL * (1.0 / self.h).abs()
    }

    pub fn side(&self) -> Side {
        if self.h >= 0.0 {
            Side::NotApplicable
        } else if self.contains_axis() {
            Side::Axis
        } else if self.c < -1.0 / self.h {
            Side::BelowAxisC
        } else {
            Side::AboveAxisC
        }
    }

    /// `1 + H C`; its sign decides the side of the axis hyperbola.
    pub(crate) fn axis_gap(&self) -> f64 {
        1.0 + self.h * self.c
    }

    /// Squared extreme values of `g`, `(g_min^2, g_max^2)`.
    ///
    /// `g_min^2` is evaluated through the product identity
    /// `g_min^2 g_max^2 = 1 / (1 + H^2)` so it stays accurate for large `C`.
    pub fn g_squared_bounds(&self) -> (f64, f64) {
        let (h, c) = (self.h, self.c);
        let w2 = 1.0 + h * h;
        let sum = c - 2.0 * h + self.discriminant().sqrt();
        (2.0 / sum, sum / (2.0 * w2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_min_values() {
        assert_eq!(c_min(0.0), 2.0);
        assert!((c_min(-1.0) - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((c_min(-1.0) - 0.828427).abs() < 1e-6);
    }

    #[test]
    fn c_min_below_axis_for_negative_h() {
        for i in 1..=200 {
            let h = -0.05 * i as f64;
            assert!(c_min(h) < -1.0 / h, "H = {h}");
        }
    }

    #[test]
    fn period_values() {
        assert!((period(0.0) - PI).abs() < 1e-15);
        assert!((period(3f64.sqrt()) - PI / 2.0).abs() < 1e-15);
        assert!((period(-1.0) - PI / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_c_below_existence() {
        assert!(matches!(SurfaceParams::new(0.0, 1.9), Err(CmcError::Domain(_))));
        assert!(SurfaceParams::new(0.0, 2.0).unwrap().is_isoparametric());
        // snapped onto the boundary
        let p = SurfaceParams::new(0.0, 2.0 - 1e-14).unwrap();
        assert_eq!(p.c(), 2.0);
    }

    #[test]
    fn flags_and_sides() {
        let p = SurfaceParams::new(-0.5, 2.0).unwrap();
        assert!(p.contains_axis());
        assert_eq!(p.side(), Side::Axis);
        assert_eq!(SurfaceParams::new(-0.5, 1.9).unwrap().side(), Side::BelowAxisC);
        assert_eq!(SurfaceParams::new(-0.5, 2.1).unwrap().side(), Side::AboveAxisC);
        assert_eq!(SurfaceParams::new(0.5, 4.0).unwrap().side(), Side::NotApplicable);
        assert!(!SurfaceParams::new(-0.5, 2.0 + 1e-9).unwrap().contains_axis());
    }

    #[test]
    fn g_bounds_product_identity() {
        let p = SurfaceParams::new(0.3, 7.0).unwrap();
        let (lo, hi) = p.g_squared_bounds();
        assert!((lo * hi - 1.0 / (1.0 + 0.09)).abs() < 1e-14);
        let d = p.discriminant().sqrt();
        assert!((lo - (7.0 - 0.6 - d) / 2.18).abs() < 1e-14);
    }
}
