//! File round trips and mesh invariants through the library API.

use cmc_cli::export::{mesh_obj, profile_csv, read_profile_csv, write_file};
use cmc_cli::{build_mesh, stereographic_project, SurfaceMesh, DEFAULT_POLE};
use cmc_core::moduli::{
    profile_polyline_pieces, region_bounds, solve_h_for_axis_rotation, solve_h_for_axis_symmetry,
};
use cmc_core::surface::immersion_phi;
use cmc_core::{AmbientPoint, SurfaceParams};

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

/// Largest distance between matching vertices of the first and last `t` rows,
/// relative to the smallest spacing between consecutive rows.
fn t_closure_ratio(mesh: &SurfaceMesh) -> f64 {
    let last = mesh.n_t - 1;
    let gap = (0..mesh.n_s).map(|i| dist(mesh.vertex(i, 0), mesh.vertex(i, last))).fold(0.0, f64::max);
    let spacing = (0..last)
        .flat_map(|j| (0..mesh.n_s).map(move |i| (i, j)))
        .map(|(i, j)| dist(mesh.vertex(i, j), mesh.vertex(i, j + 1)))
        .fold(f64::INFINITY, f64::min);
    gap / spacing
}

#[test]
fn profile_csv_round_trips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for (h, c, pieces) in [(0.0, 4.0, 1), (-0.7, 2.3, 3), (2.0, 1e3, 2)] {
        let poly = profile_polyline_pieces(&SurfaceParams::new(h, c).unwrap(), pieces, 97).unwrap();
        let path = dir.path().join(format!("p{h}.csv"));
        write_file(&path, &profile_csv(&poly)).unwrap();
        let back = read_profile_csv(&path).unwrap();
        assert_eq!(back, poly);
        assert!(back.points().iter().zip(poly.points()).all(|(a, b)| {
            a.t.to_bits() == b.t.to_bits() && a.x.to_bits() == b.x.to_bits() && a.y.to_bits() == b.y.to_bits()
        }));
    }
}

#[test]
fn missing_file_reports_its_path() {
    let err = read_profile_csv(std::path::Path::new("/no/such/profile.csv")).unwrap_err();
    assert!(err.to_string().contains("/no/such/profile.csv"));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn mesh_vertices_are_finite_and_faces_in_range() {
    for p in [
        SurfaceParams::new(0.0, 4.0).unwrap(),
        SurfaceParams::new(-1.0, 0.9).unwrap(),
        SurfaceParams::new(-1.0, 5.0).unwrap(),
        SurfaceParams::axis(-0.5).unwrap(),
        SurfaceParams::new(3.0, 50.0).unwrap(),
    ] {
        let (_, big) = region_bounds(&p);
        assert!(big < 1.0);
        let mesh = build_mesh(&p, 24, 60, 2, &DEFAULT_POLE).unwrap();
        assert_eq!(mesh.vertices.len(), mesh.n_s * mesh.n_t);
        assert!(mesh.vertices.iter().flatten().all(|x| x.is_finite()));
        assert!(mesh.faces.iter().flatten().all(|&i| i < mesh.vertices.len()));
    }
}

#[test]
fn mesh_vertices_are_projected_immersion_points() {
    let p = SurfaceParams::new(0.4, 3.0).unwrap();
    let pole = AmbientPoint([0.0, 0.6, 0.0, 0.8]);
    let mesh = build_mesh(&p, 10, 11, 1, &pole).unwrap();
    let period = p.period();
    for &(i, j) in &[(0usize, 0usize), (3, 4), (9, 10)] {
        let s = std::f64::consts::TAU * i as f64 / 10.0;
        let t = -0.25 * period + period * j as f64 / 10.0;
        let expected = stereographic_project(&immersion_phi(&p, s, t).unwrap(), &pole).unwrap();
        assert!(dist(mesh.vertex(i, j), expected) < 1e-9);
    }
}

#[test]
fn s_direction_wraps() {
    let p = SurfaceParams::new(0.2, 5.0).unwrap();
    let mesh = build_mesh(&p, 6, 4, 1, &DEFAULT_POLE).unwrap();
    // the last quad of each row joins column n_s - 1 back to column 0
    assert_eq!(mesh.faces[5], [5, 0, 6, 11]);
}

#[test]
fn closed_axis_mesh_closes_in_t() {
    // per-piece rotation 4 pi / 3: three pieces close the profile
    let s = solve_h_for_axis_rotation(3, 2).unwrap();
    let p = s.params().unwrap();
    let mesh = build_mesh(&p, 16, 3 * 64 + 1, 3, &DEFAULT_POLE).unwrap();
    assert!(t_closure_ratio(&mesh) < 1e-4, "{}", t_closure_ratio(&mesh));

    // the b = 2 pi / 3 profile rotates by 5 pi / 3 per piece and needs six
    let s = solve_h_for_axis_symmetry(3).unwrap();
    let p = s.params().unwrap();
    let three = build_mesh(&p, 16, 3 * 64 + 1, 3, &DEFAULT_POLE).unwrap();
    assert!(t_closure_ratio(&three) > 1.0);
    let six = build_mesh(&p, 16, 6 * 64 + 1, 6, &DEFAULT_POLE).unwrap();
    assert!(t_closure_ratio(&six) < 1e-4, "{}", t_closure_ratio(&six));
}

#[test]
fn obj_output_is_deterministic() {
    let p = SurfaceParams::new(-0.3, 4.0).unwrap();
    let a = mesh_obj(&build_mesh(&p, 8, 9, 1, &DEFAULT_POLE).unwrap(), &p);
    let b = mesh_obj(&build_mesh(&p, 8, 9, 1, &DEFAULT_POLE).unwrap(), &p);
    assert_eq!(a, b);
}
