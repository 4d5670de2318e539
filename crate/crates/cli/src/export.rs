//! Deterministic text serializations: CSV, JSON, SVG and OBJ.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use cmc_core::moduli::region_bounds;
use cmc_core::{ProfilePoint, ProfilePolyline, SurfaceParams};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::mesh::SurfaceMesh;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const PROFILE_CSV_HEADER: &str = "H,C,t,x,y";

/// Side length of the square SVG viewport; the unit disk fills it.
pub const SVG_SIZE: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
    Obj,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
            Format::Obj => "obj",
        }
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            "obj" => Ok(Format::Obj),
            other => Err(CliError::InvalidInput(format!("unknown format {other:?}"))),
        }
    }
}

/// 17 significant digits, enough to round-trip every double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// The file at `path` replaced by `contents`, with the path in any error.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Wraps a payload with the crate version and the inputs that produced it.
#[derive(Debug, Serialize)]
pub struct Document<'a, P: Serialize, D: Serialize> {
    pub version: &'a str,
    pub kind: &'a str,
    pub params: P,
    pub data: D,
}

pub fn to_json<P: Serialize, D: Serialize>(kind: &str, params: P, data: D) -> String {
    let doc = Document { version: VERSION, kind, params, data };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamsEcho {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl From<&SurfaceParams> for ParamsEcho {
    fn from(p: &SurfaceParams) -> Self {
        ParamsEcho { h: p.h(), c: p.c() }
    }
}

/// Writes string records to a CSV document in memory.
pub fn csv_document<I, R>(header: &[&str], records: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in records {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("records are UTF-8")
}

pub fn profile_csv(poly: &ProfilePolyline) -> String {
    let (h, c) = (fmt_f64(poly.params().h()), fmt_f64(poly.params().c()));
    let header: Vec<&str> = PROFILE_CSV_HEADER.split(',').collect();
    csv_document(
        &header,
        poly.points().iter().map(|p| [h.clone(), c.clone(), fmt_f64(p.t), fmt_f64(p.x), fmt_f64(p.y)]),
    )
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

/// Inverse of [`profile_csv`]; `path` is only used in error messages.
pub fn parse_profile_csv(text: &str, path: &Path) -> Result<ProfilePolyline> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_error(path, 1, e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != PROFILE_CSV_HEADER {
        return Err(parse_error(path, 1, format!("expected header {PROFILE_CSV_HEADER:?}")));
    }
    let mut hc: Option<(u64, u64)> = None;
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 5 {
            return Err(parse_error(path, line, format!("expected 5 fields, found {}", record.len())));
        }
        let mut v = [0.0f64; 5];
        for (slot, field) in v.iter_mut().zip(record.iter()) {
            *slot = field
                .trim()
                .parse()
                .map_err(|_| parse_error(path, line, format!("not a number: {field:?}")))?;
        }
        let bits = (v[0].to_bits(), v[1].to_bits());
        if *hc.get_or_insert(bits) != bits {
            return Err(parse_error(path, line, "H and C change within the file"));
        }
        points.push(ProfilePoint { t: v[2], x: v[3], y: v[4] });
    }
    let Some((h, c)) = hc else {
        return Err(parse_error(path, 2, "no samples"));
    };
    let params = SurfaceParams::new(f64::from_bits(h), f64::from_bits(c))?;
    Ok(ProfilePolyline::new(params, points)?)
}

pub fn read_profile_csv(path: &Path) -> Result<ProfilePolyline> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_profile_csv(&text, path)
}

#[derive(Debug, Serialize)]
struct ProfileData {
    m_hc: f64,
    big_m_hc: f64,
    closure_gap: f64,
    t: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
}

pub fn profile_json(poly: &ProfilePolyline, pieces: usize) -> String {
    let (m, big) = region_bounds(poly.params());
    let data = ProfileData {
        m_hc: m,
        big_m_hc: big,
        closure_gap: poly.closure_gap(),
        t: poly.points().iter().map(|p| p.t).collect(),
        x: poly.points().iter().map(|p| p.x).collect(),
        y: poly.points().iter().map(|p| p.y).collect(),
    };
    #[derive(Serialize)]
    struct Echo {
        #[serde(flatten)]
        params: ParamsEcho,
        pieces: usize,
        samples: usize,
    }
    let echo = Echo { params: poly.params().into(), pieces, samples: poly.len() };
    to_json("profile", echo, data)
}

fn svg_xy(x: f64, y: f64) -> (f64, f64) {
    let half = 0.5 * SVG_SIZE;
    (half * (1.0 + x), half * (1.0 - y))
}

/// The profile inside the unit disk with the circles of radius 1,
/// `sqrt(m_HC)` and `sqrt(M_HC)`.
pub fn profile_svg(poly: &ProfilePolyline) -> String {
    let p = poly.params();
    let (m, big) = region_bounds(p);
    let half = 0.5 * SVG_SIZE;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = SVG_SIZE
    );
    let _ = writeln!(
        out,
        "<!-- cmc {VERSION}: H={} C={} m_HC={} M_HC={} samples={}; \
         unit disk scaled to the {SVG_SIZE}x{SVG_SIZE} viewport, y axis up, \
         stroke widths 1 (guides) and 1.5 (profile) -->",
        fmt_f64(p.h()),
        fmt_f64(p.c()),
        fmt_f64(m),
        fmt_f64(big),
        poly.len()
    );
    let dashed = r#" stroke-dasharray="6 4""#;
    for (r, class, dash) in [(1.0, "unit", ""), (m.sqrt(), "inner", dashed), (big.sqrt(), "outer", dashed)] {
        let _ = writeln!(
            out,
            r#"<circle class="{class}" cx="{half}" cy="{half}" r="{:.3}" fill="none" stroke="gray" stroke-width="1"{dash}/>"#,
            half * r
        );
    }
    out.push_str(r#"<polyline class="profile" fill="none" stroke="black" stroke-width="1.5" points=""#);
    for (i, pt) in poly.points().iter().enumerate() {
        let (x, y) = svg_xy(pt.x, pt.y);
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.3},{y:.3}");
    }
    out.push_str("\"/>\n</svg>\n");
    out
}

/// ASCII OBJ with `v` records followed by 1-indexed quad `f` records.
pub fn mesh_obj(mesh: &SurfaceMesh, params: &SurfaceParams) -> String {
    let mut out = String::with_capacity(80 * (mesh.vertices.len() + mesh.faces.len()) + 200);
    let pole = mesh.pole.0;
    let _ = writeln!(
        out,
        "# cmc {VERSION}: H={} C={} n_s={} n_t={} pole={},{},{},{}",
        fmt_f64(params.h()),
        fmt_f64(params.c()),
        mesh.n_s,
        mesh.n_t,
        pole[0],
        pole[1],
        pole[2],
        pole[3]
    );
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]));
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    }
    out
}
