//! Grid evaluation of `K`, `b`, the annulus bounds and the classification.

use std::str::FromStr;

use cmc_core::angular::{b_value, k_value};
use cmc_core::moduli::{classify, region_bounds, DEFAULT_QMAX, DEFAULT_RATIONAL_TOL};
use cmc_core::{c_min, CmcError, SurfaceParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::export::{csv_document, fmt_f64, to_json};

pub const SWEEP_CSV_HEADER: &str = "H,C,K,err,side,m_HC,M_HC,tag,sym_order";

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if steps < 1 {
            return Err(CliError::InvalidInput(format!("grid needs steps >= 1, got {steps}")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::InvalidInput(format!("grid needs finite lo < hi, got ({lo}, {hi})")));
        }
        Ok(Self { lo, hi, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.hi } else { self.lo + (self.hi - self.lo) * i as f64 / n })
            .collect()
    }
}

/// Parses `lo,hi,steps`.
impl FromStr for GridRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || CliError::InvalidInput(format!("expected lo,hi,steps, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].parse().map_err(|_| bad())?;
        let hi = parts[1].parse().map_err(|_| bad())?;
        let steps = parts[2].parse().map_err(|_| bad())?;
        GridRange::new(lo, hi, steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CMode {
    Absolute(GridRange),
    /// `C = c_min(H) + offset`.
    Offset(GridRange),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Outputs {
    #[serde(rename = "K")]
    pub k: bool,
    pub b: bool,
    pub bounds: bool,
    pub classification: bool,
}

impl Outputs {
    pub const ALL: Outputs = Outputs { k: true, b: true, bounds: true, classification: true };
}

/// Parses a comma-separated subset of `K,b,bounds,classification`.
impl FromStr for Outputs {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Outputs { k: false, b: false, bounds: false, classification: false };
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "K" => out.k = true,
                "b" => out.b = true,
                "bounds" => out.bounds = true,
                "classification" => out.classification = true,
                other => return Err(CliError::InvalidInput(format!("unknown sweep output {other:?}"))),
            }
        }
        if out == (Outputs { k: false, b: false, bounds: false, classification: false }) {
            return Err(CliError::InvalidInput("sweep needs at least one output".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    #[serde(rename = "H_range")]
    pub h_range: GridRange,
    #[serde(rename = "C_mode")]
    pub c_mode: CMode,
    pub outputs: Outputs,
    pub q_max: u64,
    pub tol: f64,
}

impl SweepSpec {
    pub fn new(h_range: GridRange, c_mode: CMode, outputs: Outputs) -> Self {
        SweepSpec { h_range, c_mode, outputs, q_max: DEFAULT_QMAX, tol: DEFAULT_RATIONAL_TOL }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |r: &GridRange| GridRange::new(r.lo, r.hi, r.steps).map(|_| ());
        check(&self.h_range)?;
        match &self.c_mode {
            CMode::Absolute(r) => check(r)?,
            CMode::Offset(r) => {
                check(r)?;
                if !(r.lo > 0.0) {
                    return Err(CliError::InvalidInput(format!("offset grid needs lo > 0, got {}", r.lo)));
                }
            }
        }
        if self.q_max == 0 || !(self.tol > 0.0) {
            return Err(CliError::InvalidInput("classification needs q_max >= 1 and tol > 0".into()));
        }
        Ok(())
    }

    /// Grid cells in row-major order: `H` outer, `C` inner.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        let (range, offset) = match self.c_mode {
            CMode::Absolute(r) => (r, false),
            CMode::Offset(r) => (r, true),
        };
        let cs = range.values();
        let mut out = Vec::with_capacity(self.h_range.steps * cs.len());
        for h in self.h_range.values() {
            let base = if offset { c_min(h) } else { 0.0 };
            out.extend(cs.iter().map(|&c| (h, base + c)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub err: Option<f64>,
    pub side: Option<String>,
    #[serde(rename = "m_HC")]
    pub m_hc: Option<f64>,
    #[serde(rename = "M_HC")]
    pub big_m_hc: Option<f64>,
    pub tag: Option<String>,
    pub sym_order: Option<u64>,
    pub b: Option<f64>,
    pub b_err: Option<f64>,
    /// Failures of individual outputs, joined by `"; "`.
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(h: f64, c: f64) -> Self {
        SweepRow {
            h,
            c,
            k: None,
            err: None,
            side: None,
            m_hc: None,
            big_m_hc: None,
            tag: None,
            sym_order: None,
            b: None,
            b_err: None,
            error: None,
        }
    }

    fn record(&mut self, what: &str, e: CmcError) {
        let msg = format!("{what}: {e}");
        match &mut self.error {
            Some(s) => {
                s.push_str("; ");
                s.push_str(&msg);
            }
            None => self.error = Some(msg),
        }
    }
}

pub fn evaluate_cell(spec: &SweepSpec, h: f64, c: f64) -> SweepRow {
    let mut row = SweepRow::empty(h, c);
    let p = match SurfaceParams::new(h, c) {
        Ok(p) => p,
        Err(e) => {
            row.record("params", e);
            return row;
        }
    };
    row.side = Some(p.side().as_str().to_string());
    let o = spec.outputs;
    // on the axis itself K is undefined; the b column carries the rotation
    if o.k && !p.contains_axis() {
        match k_value(&p) {
            Ok(k) => {
                row.k = Some(k.value);
                row.err = Some(k.error_estimate);
            }
            Err(e) => row.record("K", e),
        }
    }
    if o.b && h < 0.0 {
        match b_value(h) {
            Ok(b) => {
                row.b = Some(b.value);
                row.b_err = Some(b.error_estimate);
            }
            Err(e) => row.record("b", e),
        }
    }
    if o.bounds {
        let (m, big) = region_bounds(&p);
        row.m_hc = Some(m);
        row.big_m_hc = Some(big);
    }
    if o.classification {
        match classify(&p, spec.q_max, spec.tol) {
            Ok(cl) => {
                row.tag = Some(cl.tag.as_str().to_string());
                row.sym_order = cl.symmetry_order;
            }
            Err(e) => row.record("classification", e),
        }
    }
    row
}

/// Evaluates every cell in parallel; rows come back in grid order.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec.cells().into_par_iter().map(|(h, c)| evaluate_cell(spec, h, c)).collect())
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// One line per row. A failed cell has `error: ...` in the `tag` column.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let header: Vec<&str> = SWEEP_CSV_HEADER.split(',').collect();
    csv_document(
        &header,
        rows.iter().map(|r| {
            let tag = match (&r.error, &r.tag) {
                (Some(e), _) => format!("error: {e}"),
                (None, t) => t.clone().unwrap_or_default(),
            };
            [
                fmt_f64(r.h),
                fmt_f64(r.c),
                opt(r.k),
                opt(r.err),
                r.side.clone().unwrap_or_default(),
                opt(r.m_hc),
                opt(r.big_m_hc),
                tag,
                r.sym_order.map(|s| s.to_string()).unwrap_or_default(),
            ]
        }),
    )
}

pub fn sweep_json(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    to_json("sweep", spec, rows)
}
