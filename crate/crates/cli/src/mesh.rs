//! Stereographic images of the surface in `S^3` as quad meshes.

use std::f64::consts::TAU;

use cmc_core::surface::immersion_from_point;
use cmc_core::{AmbientPoint, CmcError, Profile, SurfaceParams};

use crate::error::{CliError, Result};

/// Points closer than this to the projection pole are refused.
pub const POLE_CUTOFF: f64 = 1e-9;

pub const DEFAULT_POLE: AmbientPoint = AmbientPoint([0.0, 0.0, 0.0, 1.0]);

/// An orthonormal basis of the 3-plane orthogonal to a unit pole.
fn complement_basis(pole: &AmbientPoint) -> [[f64; 4]; 3] {
    let mut basis: Vec<[f64; 4]> = Vec::with_capacity(3);
    let mut frame = vec![pole.0];
    for axis in 0..4 {
        let mut v = [0.0; 4];
        v[axis] = 1.0;
        for u in &frame {
            let d: f64 = (0..4).map(|i| v[i] * u[i]).sum();
            for i in 0..4 {
                v[i] -= d * u[i];
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        // skip standard axes that are (nearly) spanned already
        if n > 0.5 {
            let v = v.map(|x| x / n);
            frame.push(v);
            basis.push(v);
        }
        if basis.len() == 3 {
            break;
        }
    }
    [basis[0], basis[1], basis[2]]
}

/// Checks that `pole` has unit norm.
pub fn validate_pole(pole: &AmbientPoint) -> Result<()> {
    let n = pole.norm();
    if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
        return Err(CliError::InvalidInput(format!("projection pole must be a unit vector, |pole| = {n}")));
    }
    Ok(())
}

/// Stereographic projection from `pole` onto the 3-plane orthogonal to it.
pub fn stereographic_project(pt: &AmbientPoint, pole: &AmbientPoint) -> Result<[f64; 3]> {
    validate_pole(pole)?;
    let distance = (0..4).map(|i| (pt.0[i] - pole.0[i]).powi(2)).sum::<f64>().sqrt();
    if distance < POLE_CUTOFF {
        return Err(CliError::PoleProximity { distance });
    }
    Ok(project_with(pt, pole, &complement_basis(pole)))
}

fn project_with(pt: &AmbientPoint, pole: &AmbientPoint, basis: &[[f64; 4]; 3]) -> [f64; 3] {
    let denom = 1.0 - pt.dot(pole);
    basis.map(|e| (0..4).map(|i| pt.0[i] * e[i]).sum::<f64>() / denom)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    /// Row-major: vertex `j n_s + i` sits at `(s_i, t_j)`.
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based quad indices, counter-clockwise in `(s, t)`.
    pub faces: Vec<[usize; 4]>,
    pub n_s: usize,
    pub n_t: usize,
    pub pole: AmbientPoint,
}

impl SurfaceMesh {
    pub fn vertex(&self, i: usize, j: usize) -> [f64; 3] {
        self.vertices[j * self.n_s + i]
    }
}

/// A grid over `s in [0, 2 pi)` and `t` spanning `pieces` fundamental pieces
/// starting at `t = -T/4`. The `s` direction wraps; the first and last
/// `t` rows coincide exactly when the profile closes after `pieces` pieces.
pub fn build_mesh(
    p: &SurfaceParams,
    n_s: usize,
    n_t: usize,
    pieces: usize,
    pole: &AmbientPoint,
) -> Result<SurfaceMesh> {
    if n_s < 3 || n_t < 3 {
        return Err(CliError::InvalidInput(format!("mesh needs n_s, n_t >= 3, got {n_s} x {n_t}")));
    }
    if pieces == 0 {
        return Err(CliError::InvalidInput("mesh needs at least one piece".into()));
    }
    validate_pole(pole)?;
    let basis = complement_basis(pole);
    let profile = Profile::new(*p)?;
    let period = profile.period();
    let step = pieces as f64 * period / (n_t - 1) as f64;
    let rows = profile.sample_beta(-0.25 * period, step, n_t)?;

    let mut vertices = Vec::with_capacity(n_s * n_t);
    for b in &rows {
        for i in 0..n_s {
            let s = TAU * i as f64 / n_s as f64;
            let pt = immersion_from_point(s, b);
            let distance = (0..4).map(|k| (pt.0[k] - pole.0[k]).powi(2)).sum::<f64>().sqrt();
            if distance < POLE_CUTOFF {
                return Err(CliError::PoleProximity { distance });
            }
            vertices.push(project_with(&pt, pole, &basis));
        }
    }
    if let Some(v) = vertices.iter().find(|v| v.iter().any(|x| !x.is_finite())) {
        return Err(CmcError::NonFinite(v[0]).into());
    }

    let mut faces = Vec::with_capacity(n_s * (n_t - 1));
    for j in 0..n_t - 1 {
        for i in 0..n_s {
            let i1 = (i + 1) % n_s;
            faces.push([j * n_s + i, j * n_s + i1, (j + 1) * n_s + i1, (j + 1) * n_s + i]);
        }
    }
    Ok(SurfaceMesh { vertices, faces, n_s, n_t, pole: *pole })
}
