//! The `cmc` binary end to end: output, files and exit codes.

use std::f64::consts::PI;
use std::process::{Command, Output};

fn cmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The value of `key = value` in text output.
fn field(text: &str, key: &str) -> String {
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

#[test]
fn k_value_at_h_zero() {
    let o = cmc(&["k-value", "--H", "0", "--C", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let k: f64 = field(&text, "K").parse().unwrap();
    let err: f64 = field(&text, "err").parse().unwrap();
    assert!(k > PI && k < PI * 2f64.sqrt(), "{k}");
    assert!(err >= 0.0 && err < 1e-10);
}

#[test]
fn solve_axis_for_three() {
    let o = cmc(&["solve-axis", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let h: f64 = field(&text, "H").parse().unwrap();
    let c: f64 = field(&text, "C").parse().unwrap();
    let residual: f64 = field(&text, "residual").parse().unwrap();
    assert!(h < 0.0);
    assert!((c + 1.0 / h).abs() < 1e-12);
    assert!(residual < 1e-9);
    assert_eq!(field(&text, "contains_axis"), "true");
}

#[test]
fn verify_default_suite_passes() {
    let o = cmc(&["verify", "--seed", "42", "--cases", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(field(&text, "status"), "pass");
    assert_eq!(field(&text, "cases"), "1000");
}

#[test]
fn invalid_inputs_exit_with_two() {
    for args in [
        &["k-value", "--H", "0", "--C", "1"][..],
        &["k-value", "--H", "-0.5", "--C", "2"],
        &["b-value", "--H", "0.5"],
        &["solve-axis", "--m", "2"],
        &["solve-closure", "--H", "0", "--m", "1", "--k", "2"],
        &["profile", "--H", "0", "--C", "4", "--format", "obj"],
        &["sweep", "--H-range", "0,1,3", "--C-offset", "0,1,3"],
        &["mesh", "--H", "0", "--C", "4", "--pole", "0,0,1"],
        &["mesh", "--H", "0", "--C", "4", "--pole", "0,0,0,2"],
    ] {
        let o = cmc(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cmc(&["k-value", "--H", "0", "--C", "4", "--nope"]).status.code(), Some(2));
    assert_eq!(cmc(&["k-value", "--H", "0"]).status.code(), Some(2));
    assert_eq!(cmc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cmc(&["k-value", "--H", "zero", "--C", "4"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_failure_with_the_path() {
    let o = cmc(&["k-value", "--H", "0", "--C", "4", "--out", "/nonexistent-dir/k.txt"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/k.txt"));
}

#[test]
fn json_output_carries_version_and_params() {
    let o = cmc(&["k-value", "--H", "1", "--C", "9", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["params"]["H"], 1.0);
    assert_eq!(v["params"]["C"], 9.0);
    assert!(v["data"]["K"].as_f64().unwrap() > 0.0);
}

#[test]
fn limits_and_b_value_agree() {
    let limits = stdout(&cmc(&["limits", "--H", "-1"]));
    let b = stdout(&cmc(&["b-value", "--H", "-1"]));
    let b_lim: f64 = field(&limits, "b").parse().unwrap();
    let b_val: f64 = field(&b, "b").parse().unwrap();
    assert_eq!(b_lim, b_val);
    let below: f64 = field(&limits, "K_below_axis").parse().unwrap();
    let above: f64 = field(&limits, "K_above_axis").parse().unwrap();
    assert!((below - above - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn classify_and_check_embedded() {
    let o = stdout(&cmc(&["classify", "--H", "0.3", "--C", "7.123456"]));
    assert_eq!(field(&o, "tag"), "presumed_dense");
    let o = stdout(&cmc(&["check-embedded", "--H", "-0.5", "--C", "1.8284271247461903", "--pieces", "3"]));
    assert_eq!(field(&o, "intersects"), "true");
    assert_ne!(field(&o, "witness"), "none");
}

#[test]
fn solve_closure_round_trips_through_k_value() {
    let o = stdout(&cmc(&["solve-closure", "--H", "0.9", "--m", "1", "--k", "3"]));
    let c = field(&o, "C");
    assert_eq!(field(&o, "pieces_to_close"), "3");
    let k: f64 = field(&stdout(&cmc(&["k-value", "--H", "0.9", "--C", &c])), "K").parse().unwrap();
    assert!((k - 2.0 * PI / 3.0).abs() < 1e-9);
}

#[test]
fn sweep_writes_ordered_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let args = ["sweep", "--H-range", "-1,1,3", "--C-offset", "0.5,20,4", "--out"];
    let o = cmc(&[&args[..], &[csv.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "H,C,K,err,side,m_HC,M_HC,tag,sym_order");
    assert_eq!(lines.len(), 13);
    let hs: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(hs.windows(2).all(|w| w[0] <= w[1]));

    let o = cmc(&["sweep", "--H-range", "-1,1,3", "--C-offset", "0.5,20,4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"].as_array().unwrap().len(), 12);
    assert_eq!(v["params"]["C_mode"]["mode"], "offset");
    // repeated runs are byte-identical
    let again = cmc(&["sweep", "--H-range", "-1,1,3", "--C-offset", "0.5,20,4", "--format", "json"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn sweep_rows_at_minus_one_show_the_two_branches() {
    let o = cmc(&["sweep", "--H-range", "-1,0,1", "--C-range", "0.85,3,44", "--outputs", "K,b", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["data"].as_array().unwrap();
    let b = rows[0]["b"].as_f64().unwrap();
    let mut below = Vec::new();
    let mut above = Vec::new();
    for r in rows {
        match r["side"].as_str().unwrap() {
            "below_axis_C" => below.push(r["K"].as_f64().unwrap()),
            "above_axis_C" => above.push(r["K"].as_f64().unwrap()),
            _ => {}
        }
    }
    assert!(!below.is_empty() && !above.is_empty());
    // K decreases towards b + pi from above, and away from b - pi below it
    assert!(below.iter().all(|&k| k > b + PI) && above.iter().all(|&k| k < b - PI));
    for side in [&below, &above] {
        assert!(side.windows(2).all(|w| w[1] < w[0]));
    }
    // the jump across C = -1/H is close to 2 pi
    assert!(below.last().unwrap() - above.first().unwrap() > 1.5 * PI);
}

#[test]
fn profile_and_mesh_files() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let o = cmc(&["profile", "--H", "0.5", "--C", "6", "--pieces", "2", "--format", "svg", "--out", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polyline").count(), 1);
    assert_eq!(text.matches("<circle").count(), 3);

    let obj = dir.path().join("m.obj");
    let o = cmc(&["mesh", "--H", "0.5", "--C", "6", "--samples", "20", "--ns", "8", "--out", obj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 160);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 8 * 19);
}
