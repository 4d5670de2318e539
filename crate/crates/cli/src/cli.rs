//! Argument parsing and subcommand dispatch.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use cmc_core::angular::{b_value, k_limit_cmin, k_limit_inf, k_one_sided_limits, k_value};
use cmc_core::moduli::{
    classify, profile_polyline_pieces, self_intersection, solve_closure,
    solve_h_for_axis_rotation, solve_h_for_axis_symmetry, Branch, ClosureSolution,
    DEFAULT_INTERSECTION_TOL, DEFAULT_QMAX, DEFAULT_RATIONAL_TOL,
};
use cmc_core::{c_min, AmbientPoint, SurfaceParams};
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, Result, EXIT_NUMERICAL, EXIT_OK};
use crate::export::{self, to_json, write_file, Format, ParamsEcho};
use crate::mesh::build_mesh;
use crate::sweep::{self, CMode, GridRange, Outputs, SweepSpec};
use crate::verify::run_verify;

#[derive(Debug, Parser)]
#[command(
    name = "cmc",
    version,
    about = "Rotational constant mean curvature surfaces in the 3-sphere"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct HcArgs {
    /// Mean curvature H.
    #[arg(long = "H")]
    pub h: f64,
    /// Integration constant C, at least c_min(H).
    #[arg(long = "C")]
    pub c: f64,
}

impl HcArgs {
    fn params(&self) -> Result<SurfaceParams> {
        Ok(SurfaceParams::new(self.h, self.c)?)
    }
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv, json, svg or obj (not every command supports all).
    #[arg(long)]
    pub format: Option<String>,
}

impl OutArgs {
    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = match &self.format {
            Some(s) => s.parse()?,
            None => default,
        };
        if !allowed.contains(&f) {
            let names: Vec<&str> = allowed.iter().map(|f| f.as_str()).collect();
            return Err(CliError::InvalidInput(format!(
                "format {} not supported here; choose one of {}",
                f.as_str(),
                names.join(", ")
            )));
        }
        Ok(f)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// K(H, C) with its error estimate and side of C = -1/H.
    KValue {
        #[command(flatten)]
        hc: HcArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// b(H) for H < 0.
    BValue {
        #[arg(long = "H")]
        h: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Limits of K at the ends of the C range and across C = -1/H.
    Limits {
        #[arg(long = "H")]
        h: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Samples of the profile curve over several fundamental pieces.
    Profile {
        #[command(flatten)]
        hc: HcArgs,
        #[arg(long, default_value_t = 1)]
        pieces: usize,
        /// Samples per piece.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// C on one branch with K(H, C) = 2 pi m / k.
    SolveClosure {
        #[arg(long = "H")]
        h: f64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        k: u64,
        /// below, above or whole (the single branch for H >= 0).
        #[arg(long, default_value = "whole")]
        branch: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// H < 0 whose axis-crossing profile has b(H) = 2 pi / m, or with
    /// --k j, per-piece rotation b(H) + pi = 2 pi j / m.
    SolveAxis {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Isoparametric, closed with a symmetry order, or presumed dense.
    Classify {
        #[command(flatten)]
        hc: HcArgs,
        #[arg(long, default_value_t = DEFAULT_QMAX)]
        qmax: u64,
        #[arg(long, default_value_t = DEFAULT_RATIONAL_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Self-intersection test of the profile over several pieces.
    CheckEmbedded {
        #[command(flatten)]
        hc: HcArgs,
        #[arg(long, default_value_t = 1)]
        pieces: usize,
        /// Samples per piece.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_INTERSECTION_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// OBJ quad mesh of the stereographic image of the surface.
    Mesh {
        #[command(flatten)]
        hc: HcArgs,
        #[arg(long, default_value_t = 1)]
        pieces: usize,
        /// Grid rows along the profile (t direction).
        #[arg(long, default_value_t = 257)]
        samples: usize,
        /// Grid columns around the rotation (s direction).
        #[arg(long, default_value_t = 64)]
        ns: usize,
        /// Projection pole x,y,z,w on the unit sphere.
        #[arg(long, default_value = "0,0,0,1", allow_hyphen_values = true)]
        pole: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Grid evaluation over H and C.
    Sweep {
        /// lo,hi,steps for H.
        #[arg(long = "H-range", allow_hyphen_values = true)]
        h_range: String,
        /// lo,hi,steps for absolute C values.
        #[arg(long = "C-range", allow_hyphen_values = true, conflicts_with = "c_offset", required_unless_present = "c_offset")]
        c_range: Option<String>,
        /// lo,hi,steps for C - c_min(H), with lo > 0.
        #[arg(long = "C-offset", allow_hyphen_values = true)]
        c_offset: Option<String>,
        /// Comma-separated subset of K,b,bounds,classification.
        #[arg(long, default_value = "K,b,bounds,classification")]
        outputs: String,
        #[arg(long, default_value_t = DEFAULT_QMAX)]
        qmax: u64,
        #[arg(long, default_value_t = DEFAULT_RATIONAL_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Randomized ODE-residual and radius-identity checks.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

impl Cli {
    /// Like `try_parse_from`, but numeric flags accept negative values
    /// (`--H -0.5`) in every subcommand.
    pub fn parse_args<I, T>(argv: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let command = Cli::command().mut_subcommands(|s| s.allow_negative_numbers(true));
        let mut matches = command.try_get_matches_from(argv)?;
        Cli::from_arg_matches_mut(&mut matches)
    }
}

/// What a successful command produced, plus its exit status.
pub struct Outcome {
    pub text: String,
    pub out: Option<PathBuf>,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String, out: &OutArgs) -> Self {
        Outcome { text, out: out.out.clone(), code: EXIT_OK }
    }
}

fn kv(pairs: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "none".into())
}

fn parse_pole(s: &str) -> Result<AmbientPoint> {
    let bad = || CliError::InvalidInput(format!("expected pole x,y,z,w, got {s:?}"));
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    let v: [f64; 4] = v.try_into().map_err(|_| bad())?;
    Ok(AmbientPoint(v))
}

fn parse_branch(s: &str) -> Result<Branch> {
    match s {
        "below" => Ok(Branch::BelowAxisC),
        "above" => Ok(Branch::AboveAxisC),
        "whole" => Ok(Branch::WholeRay),
        other => Err(CliError::InvalidInput(format!("unknown branch {other:?}; use below, above or whole"))),
    }
}

fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        return Err(CliError::InvalidInput(format!("--{name} must be positive")));
    }
    Ok(v)
}

#[derive(Serialize)]
struct ClosureReport {
    m: u64,
    k: u64,
    #[serde(rename = "H")]
    h: f64,
    #[serde(rename = "C")]
    c: f64,
    residual: f64,
    contains_axis: bool,
    pieces_to_close: Option<u64>,
}

fn closure_report(s: &ClosureSolution) -> Result<ClosureReport> {
    let cl = classify(&s.params()?, DEFAULT_QMAX, DEFAULT_RATIONAL_TOL)?;
    Ok(ClosureReport {
        m: s.m,
        k: s.k,
        h: s.h,
        c: s.c,
        residual: s.residual,
        contains_axis: s.contains_axis,
        pieces_to_close: cl.symmetry_order,
    })
}

fn closure_text(r: &ClosureReport) -> String {
    kv(&[
        ("m", r.m.to_string()),
        ("k", r.k.to_string()),
        ("H", r.h.to_string()),
        ("C", r.c.to_string()),
        ("residual", r.residual.to_string()),
        ("contains_axis", r.contains_axis.to_string()),
        ("pieces_to_close", opt(r.pieces_to_close)),
    ])
}

pub fn execute(command: &Command) -> Result<Outcome> {
    use Format::{Csv, Json, Obj, Svg};
    match command {
        Command::KValue { hc, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            let p = hc.params()?;
            let k = k_value(&p)?;
            let text = if fmt == Json {
                to_json(
                    "k-value",
                    ParamsEcho::from(&p),
                    json!({ "K": k.value, "err": k.error_estimate, "side": k.side.as_str() }),
                )
            } else {
                kv(&[
                    ("K", k.value.to_string()),
                    ("err", k.error_estimate.to_string()),
                    ("side", k.side.as_str().into()),
                ])
            };
            Ok(Outcome::ok(text, out))
        }
        Command::BValue { h, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            let b = b_value(*h)?;
            let text = if fmt == Json {
                to_json("b-value", json!({ "H": h }), json!({ "b": b.value, "err": b.error_estimate }))
            } else {
                kv(&[("b", b.value.to_string()), ("err", b.error_estimate.to_string())])
            };
            Ok(Outcome::ok(text, out))
        }
        Command::Limits { h, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            if !h.is_finite() {
                return Err(CliError::InvalidInput(format!("H must be finite, got {h}")));
            }
            let mut data = json!({
                "c_min": c_min(*h),
                "K_at_c_min": k_limit_cmin(*h),
                "K_at_infinity": k_limit_inf(*h),
            });
            if *h < 0.0 {
                let (below, above) = k_one_sided_limits(*h)?;
                data["axis_C"] = json!(-1.0 / h);
                data["b"] = json!(b_value(*h)?.value);
                data["K_below_axis"] = json!(below);
                data["K_above_axis"] = json!(above);
            }
            let text = if fmt == Json {
                to_json("limits", json!({ "H": h }), &data)
            } else {
                let obj = data.as_object().expect("object literal");
                let order = ["c_min", "K_at_c_min", "K_at_infinity", "axis_C", "b", "K_below_axis", "K_above_axis"];
                let pairs: Vec<(&str, String)> =
                    order.iter().filter_map(|k| obj.get(*k).map(|v| (*k, v.to_string()))).collect();
                kv(&pairs)
            };
            Ok(Outcome::ok(text, out))
        }
        Command::Profile { hc, pieces, samples, out } => {
            let fmt = out.format(Csv, &[Csv, Json, Svg])?;
            let p = hc.params()?;
            let poly = profile_polyline_pieces(&p, positive("pieces", *pieces)?, positive("samples", *samples)?)?;
            let text = match fmt {
                Json => export::profile_json(&poly, *pieces),
                Svg => export::profile_svg(&poly),
                _ => export::profile_csv(&poly),
            };
            Ok(Outcome::ok(text, out))
        }
        Command::SolveClosure { h, m, k, branch, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            let s = solve_closure(*h, *m, *k, parse_branch(branch)?)?;
            let r = closure_report(&s)?;
            let text = if fmt == Json {
                to_json("solve-closure", json!({ "H": h, "m": m, "k": k, "branch": branch }), &r)
            } else {
                closure_text(&r)
            };
            Ok(Outcome::ok(text, out))
        }
        Command::SolveAxis { m, k, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            let s = match k {
                Some(j) => solve_h_for_axis_rotation(*m, *j)?,
                None => solve_h_for_axis_symmetry(*m)?,
            };
            let r = closure_report(&s)?;
            let text = if fmt == Json {
                to_json("solve-axis", json!({ "m": m, "k": k }), &r)
            } else {
                closure_text(&r)
            };
            Ok(Outcome::ok(text, out))
        }
        Command::Classify { hc, qmax, tol, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            if *qmax == 0 || !(*tol > 0.0) {
                return Err(CliError::InvalidInput("--qmax must be >= 1 and --tol > 0".into()));
            }
            let p = hc.params()?;
            let cl = classify(&p, *qmax, *tol)?;
            let data = json!({
                "tag": cl.tag.as_str(),
                "symmetry_order": cl.symmetry_order,
                "contains_axis": cl.contains_axis,
                "embedded": cl.embedded,
                "angle": cl.angle,
                "annulus": cl.annulus.map(|(m, big)| [m, big]),
            });
            let text = if fmt == Json {
                to_json("classify", json!({ "H": p.h(), "C": p.c(), "qmax": qmax, "tol": tol }), &data)
            } else {
                kv(&[
                    ("tag", cl.tag.as_str().into()),
                    ("symmetry_order", opt(cl.symmetry_order)),
                    ("contains_axis", cl.contains_axis.to_string()),
                    ("embedded", opt(cl.embedded)),
                    ("angle", opt(cl.angle)),
                    ("annulus", cl.annulus.map(|(m, big)| format!("{m},{big}")).unwrap_or_else(|| "none".into())),
                ])
            };
            Ok(Outcome::ok(text, out))
        }
        Command::CheckEmbedded { hc, pieces, samples, tol, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            if !(*tol >= 0.0) {
                return Err(CliError::InvalidInput("--tol must be non-negative".into()));
            }
            let p = hc.params()?;
            let poly = profile_polyline_pieces(&p, positive("pieces", *pieces)?, positive("samples", *samples)?)?;
            let report = self_intersection(&poly, *tol);
            let witness = report.witness.map(|w| [w.t_a, w.t_b, w.point.0, w.point.1]);
            let text = if fmt == Json {
                to_json(
                    "check-embedded",
                    json!({ "H": p.h(), "C": p.c(), "pieces": pieces, "samples": samples, "tol": tol }),
                    json!({
                        "intersects": report.intersects,
                        "witness": witness,
                        "segments_tested": report.segments_tested,
                        "closure_gap": poly.closure_gap(),
                    }),
                )
            } else {
                kv(&[
                    ("intersects", report.intersects.to_string()),
                    (
                        "witness",
                        witness
                            .map(|w| format!("t_a={} t_b={} point={},{}", w[0], w[1], w[2], w[3]))
                            .unwrap_or_else(|| "none".into()),
                    ),
                    ("segments_tested", report.segments_tested.to_string()),
                    ("closure_gap", poly.closure_gap().to_string()),
                ])
            };
            Ok(Outcome::ok(text, out))
        }
        Command::Mesh { hc, pieces, samples, ns, pole, out } => {
            out.format(Obj, &[Obj])?;
            let p = hc.params()?;
            let pole = parse_pole(pole)?;
            let mesh = build_mesh(&p, *ns, *samples, positive("pieces", *pieces)?, &pole)?;
            Ok(Outcome::ok(export::mesh_obj(&mesh, &p), out))
        }
        Command::Sweep { h_range, c_range, c_offset, outputs, qmax, tol, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            let c_mode = match (c_range, c_offset) {
                (Some(r), None) => CMode::Absolute(r.parse()?),
                (None, Some(r)) => CMode::Offset(r.parse()?),
                _ => return Err(CliError::InvalidInput("give exactly one of --C-range and --C-offset".into())),
            };
            let h: GridRange = h_range.parse()?;
            let outputs: Outputs = outputs.parse()?;
            let spec = SweepSpec { q_max: *qmax, tol: *tol, ..SweepSpec::new(h, c_mode, outputs) };
            let rows = sweep::sweep(&spec)?;
            let text = if fmt == Json { sweep::sweep_json(&spec, &rows) } else { sweep::sweep_csv(&rows) };
            Ok(Outcome::ok(text, out))
        }
        Command::Verify { seed, cases, out } => {
            let fmt = out.format(Csv, &[Csv, Json])?;
            let report = run_verify(*seed, *cases)?;
            let text = if fmt == Json {
                to_json("verify", json!({ "seed": seed, "cases": cases }), &report)
            } else {
                kv(&[
                    ("cases", report.cases.to_string()),
                    ("max_ode_residual", report.max_ode_residual.to_string()),
                    ("max_radius_error", report.max_radius_error.to_string()),
                    ("ode_failures", report.ode_failures.to_string()),
                    ("radius_failures", report.radius_failures.to_string()),
                    ("status", if report.passed() { "pass" } else { "fail" }.into()),
                ])
            };
            let code = if report.passed() { EXIT_OK } else { EXIT_NUMERICAL };
            Ok(Outcome { text, out: out.out.clone(), code })
        }
    }
}

fn emit(outcome: &Outcome) -> Result<()> {
    match &outcome.out {
        Some(path) => write_file(path, &outcome.text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::parse_args(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command).and_then(|o| emit(&o).map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
