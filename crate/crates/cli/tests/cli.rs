use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fraclap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraclap")).args(args).output().expect("binary runs")
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn csv_rows(p: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(p).unwrap();
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) => s.parse().unwrap(),
        _ => panic!("not a number: {v}"),
    }
}

#[test]
fn constants_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = fraclap(&["constants", "--s", "0.5", "--d", "2", "--volume", "1", "--surface", "4", "--rel-tol", "1e-7", "--format", "json", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let j = json_file(&out);
    assert!((num(&j["L1"]["value"]) - 1.0 / (12.0 * std::f64::consts::PI)).abs() < 1e-8);
    assert!(num(&j["L2"]["value"]) > 0.0);
    assert_eq!(j["L2"]["route"], "L2:K_integral");
    for key in ["C1", "C2", "L2_tilde", "L2_zeta", "L2_eigenfunction"] {
        assert!(j[key]["value"].is_number(), "{key}");
    }
    for (_, v) in j.as_object().unwrap() {
        assert!(v["route"].is_string() && v.get("value").is_some() && v.get("err").is_some());
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fraclap(&["constants", "--s", "1.5"]).status.code(), Some(2));
    assert_eq!(fraclap(&["constants", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(fraclap(&["convert", "--A", "1", "--B", "1", "--a", "1", "--b", "1.5"]).status.code(), Some(2));
    assert_eq!(fraclap(&["verify-square", "--m", "80"]).status.code(), Some(2));
}

#[test]
fn convert_example_and_round_trip() {
    let o = fraclap(&["convert", "--A", "1", "--a", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(num(&j["C"]["value"]), 0.25);
    assert_eq!(num(&j["D"]["value"]), 0.0);
    assert_eq!(num(&j["check:roundtrip"]["value"]), 1.0);
    let o = fraclap(&["convert", "--A", "2", "--B", "0.3", "--a", "0.8", "--b", "0.4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn layer_closes_on_l2_and_formats_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("k.csv");
    let json_path = dir.path().join("k.json");
    let plot = dir.path().join("k.py");
    let base = ["layer", "--t-min", "0.1", "--t-max", "1", "--per-decade", "1", "--rel-tol", "1e-7"];
    let mut a: Vec<&str> = base.to_vec();
    a.extend(["-o", csv_path.to_str().unwrap(), "--plot-script", plot.to_str().unwrap()]);
    assert_eq!(fraclap(&a).status.code(), Some(0));
    let mut b: Vec<&str> = base.to_vec();
    b.extend(["--format", "json", "-o", json_path.to_str().unwrap()]);
    assert_eq!(fraclap(&b).status.code(), Some(0));

    let rows = csv_rows(&csv_path);
    let j = json_file(&json_path);
    let ts: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(ts.last().copied(), Some(f64::INFINITY));
    for (i, row) in rows.iter().enumerate() {
        for (c, cell) in ["t", "K", "cumulative", "err"].iter().zip(row) {
            assert_eq!(cell.parse::<f64>().unwrap(), num(&j[format!("{c}[{i}]")]["value"]));
        }
    }
    let last: f64 = rows.last().unwrap()[2].parse().unwrap();
    let summary = csv_rows(Path::new(&format!("{}.summary.csv", csv_path.display())));
    let l2: f64 = summary.iter().find(|r| r[0] == "L2").unwrap()[1].parse().unwrap();
    assert_eq!(last, l2);
    assert!(std::fs::read_to_string(&plot).unwrap().contains("k.csv"));

    // same quadrature contract as `constants`
    let c = fraclap(&["constants", "--rel-tol", "1e-7", "--format", "json"]);
    let cj: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert!((num(&cj["L2"]["value"]) - last).abs() < 1e-10);
}

#[test]
fn square_pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    let args = |p: &Path| {
        vec!["verify-square".to_string(), "--m".into(), "16".into(), "--h-min".into(), "0.1".into(), "--h-max".into(), "0.4".into(), "--c1-tol".into(), "1".into(), "--format".into(), "json".into(), "-o".into(), p.display().to_string()]
    };
    let run = |p: &Path| Command::new(env!("CARGO_BIN_EXE_fraclap")).args(args(p)).output().unwrap();
    assert_eq!(run(&p1).status.code(), Some(0));
    assert_eq!(run(&p2).status.code(), Some(0));
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    let j = json_file(&p1);
    assert!(num(&j["c0_rel_dev"]["value"]).abs() < 0.03);
}

#[test]
fn failed_assertion_exits_four_with_report() {
    let o = fraclap(&["verify-square", "--m", "12", "--h-min", "0.1", "--h-max", "0.4", "--c0-tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(4));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("h,riesz_mean"));
    assert!(String::from_utf8(o.stderr).unwrap().contains("check:c0_within_tol,0,"));
}

#[test]
fn lattice_and_partition_checks() {
    let o = fraclap(&["order-check", "--shape", "square", "--m", "12", "--s", "0.75"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for g in ["interval", "disk"] {
        let o = fraclap(&["localization-check", "--geometry", g, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{g}");
        let j: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(num(&j["partition_error_res8"]["value"]) < 1e-3);
    }
    let o = fraclap(&["verify-halfspace", "--spacing", "0.25", "--depth-points", "32", "--box-depth", "96", "--tangential-points", "1024", "--window-min", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("x_d,ratio,lattice,continuum,rel_gap\n"));
}

#[test]
fn kernel_table() {
    let o = fraclap(&["kernels", "--s", "0.25", "--points", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
}
