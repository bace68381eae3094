// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::process::{Command, Output};

use serde_json::Value;

fn nhbath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhbath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = nhbath(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&ok(&all)).unwrap()
}

struct Csv {
    preamble: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut lines = text.lines();
        let mut preamble = Vec::new();
        let header = loop {
            let l = lines.next().expect("header row");
            if let Some(meta) = l.strip_prefix("# ") {
                preamble.push(meta.to_string());
            } else {
                break l;
            }
        };
        let split = |l: &str| l.split(',').map(String::from).collect::<Vec<_>>();
        Csv {
            preamble,
            columns: split(header),
            rows: lines.map(split).collect(),
        }
    }

    fn col(&self, name: &str) -> usize {
        self.columns
            .iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("no column {name} in {:?}", self.columns))
    }

    fn num(&self, row: &[String], name: &str) -> f64 {
        row[self.col(name)].parse().unwrap()
    }

    fn meta(&self, key: &str) -> Value {
        let prefix = format!("{key}: ");
        let line = self
            .preamble
            .iter()
            .find_map(|l| l.strip_prefix(&prefix))
            .unwrap_or_else(|| panic!("no `{key}` line"));
        serde_json::from_str(line).unwrap()
    }
}

fn kinds(report: &Value) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for p in report["results"]["poles"].as_array().unwrap() {
        *counts
            .entry(p["kind"].as_str().unwrap().to_string())
            .or_default() += 1;
    }
    counts
}

#[test]
fn weak_coupling_poles_and_first_critical_rate() {
    let r = json(&["poles", "--g0", "0.8", "--gamma", "0.2"]);
    let k = kinds(&r);
    assert_eq!(k.get("Resonant"), Some(&1));
    assert_eq!(k.get("AntiResonant"), Some(&1));
    let gc1 = r["results"]["gamma_c1"].as_f64().unwrap();
    assert!((gc1 - 0.8f64 * 0.8).abs() < 1e-12, "{gc1}");
    assert_eq!(r["results"]["gamma_c2"], Value::Null);
    assert_eq!(r["results"]["regime"]["regime"], "Weak");
}

#[test]
fn strong_coupling_has_two_bound_poles_and_a_physical_ep() {
    let r = json(&["poles", "--g0", "2", "--gamma", "2"]);
    assert_eq!(kinds(&r).get("Bound"), Some(&2));
    let ep = &r["results"]["ep"];
    assert_eq!(ep["kind"], "Physical");
    let gamma_ep = ep["gamma_ep"].as_f64().unwrap();
    assert!((gamma_ep - 2.0 * 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn half_sigma_gives_one_pole_and_the_degenerate_flag() {
    let r = json(&["poles", "--g0", "1", "--gamma", "1"]);
    assert_eq!(r["results"]["poles"].as_array().unwrap().len(), 1);
    assert_eq!(r["results"]["degenerate_quadratic"], true);
}

#[test]
fn all_routes_agree_at_weak_coupling() {
    let r = json(&[
        "decay", "--g0", "0.6", "--gamma", "0.05", "--tmax", "50", "--route", "all",
    ]);
    let pairs = r["diagnostics"]["pairwise_max_deviation"]
        .as_array()
        .unwrap();
    assert_eq!(pairs.len(), 3);
    for p in pairs {
        let d = p["max_abs_dca"].as_f64().unwrap();
        assert!(d < 1e-4, "{p}");
    }
    let rows = r["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3 * 501);
}

#[test]
fn strong_decay_lists_two_first_sheet_pole_terms() {
    let csv = Csv::parse(&ok(&[
        "decay",
        "--g0",
        "2",
        "--gamma",
        "3.7",
        "--route",
        "spectral",
        "--npoints",
        "50",
    ]));
    assert!(csv.columns.contains(&"re_pole_2".to_string()));
    assert!(!csv.columns.contains(&"re_pole_3".to_string()));
    let terms = csv.meta("diagnostics")["pole_terms"].clone();
    let terms = terms.as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert!(terms.iter().all(|t| t["sheet"] == "FirstSheet"));

    // the columns add up to the total
    for row in &csv.rows {
        let parts = ["pole_1", "pole_2", "hankel1", "hankel2"];
        let re: f64 = parts.iter().map(|p| csv.num(row, &format!("re_{p}"))).sum();
        let im: f64 = parts.iter().map(|p| csv.num(row, &format!("im_{p}"))).sum();
        assert!((re - csv.num(row, "re_ca")).abs() < 1e-12);
        assert!((im - csv.num(row, "im_ca")).abs() < 1e-12);
    }
}

#[test]
fn lossless_lattice_conserves_the_norm() {
    let csv = Csv::parse(&ok(&[
        "decay", "--g0", "0.6", "--gamma", "0.0", "--route", "lattice",
    ]));
    assert!(!csv.rows.is_empty());
    for row in &csv.rows {
        let n = csv.num(row, "norm");
        assert!((n - 1.0).abs() < 1e-10, "{n}");
    }
}

#[test]
fn numbers_carry_seventeen_significant_digits() {
    let csv = Csv::parse(&ok(&[
        "decay",
        "--g0",
        "0.6",
        "--gamma",
        "0.5",
        "--npoints",
        "5",
    ]));
    let t = &csv.rows[1][csv.col("t")];
    let (mantissa, exp) = t.split_once('e').unwrap();
    assert_eq!(mantissa.replace(['-', '.'], "").len(), 17, "{t}");
    assert!(exp.parse::<i32>().is_ok());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "decay", "--g0", "1.2", "--gamma", "1.35", "--route", "all", "--tmax", "10",
    ];
    assert_eq!(ok(&args), ok(&args));
    let fig = ["fig", "10", "--npoints", "101"];
    assert_eq!(ok(&fig), ok(&fig));
}

#[test]
fn json_params_round_trip_through_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let first = json(&[
        "decay",
        "--g0",
        "1.2",
        "--gamma",
        "2",
        "--tmax",
        "12",
        "--npoints",
        "31",
    ]);
    let params = first["params"].as_object().unwrap();
    let text: String = params.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, text).unwrap();
    let second = json(&["decay", "--config", path.to_str().unwrap()]);
    assert_eq!(first, second);
}

#[test]
fn flags_override_config_file_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# weak coupling\ng0 = 0.6\ngamma = 0.05\ntmax = 20\nformat = json\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let r: Value = serde_json::from_str(&ok(&["decay", "--config", cfg, "--tmax", "5"])).unwrap();
    assert_eq!(r["params"]["tmax"], 5.0);
    assert_eq!(r["params"]["g0"], 0.6);
    assert_eq!(r["params"]["npoints"], 501);

    let out = dir.path().join("out.csv");
    ok(&[
        "decay",
        "--config",
        cfg,
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(std::fs::read_to_string(out)
        .unwrap()
        .starts_with("# command: decay"));
}

fn error_of(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"))
}

#[test]
fn invalid_input_exits_two_before_computing() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "g0 = 0.6\ngama = 0.1\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["poles", "--gamma", "1"],
        vec!["poles", "--g0", "-1", "--gamma", "1"],
        vec!["decay", "--g0", "0.6", "--gamma", "0.05", "--tmin", "0.001"],
        vec![
            "decay", "--g0", "0.6", "--gamma", "0.05", "--route", "lattice", "--nsites", "30",
        ],
        vec![
            "decay", "--g0", "0.6", "--gamma", "0.05", "--route", "lindblad", "--nsites", "13",
        ],
        vec![
            "decay", "--g0", "0.6", "--gamma", "0.05", "--route", "nowhere",
        ],
        vec!["optimal", "--g0", "1", "--detuning", "0.3"],
        vec!["fig", "12"],
        vec!["decay", "--config", bad.to_str().unwrap()],
    ];
    for args in cases {
        let out = nhbath(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let e = error_of(&out);
        assert_eq!(e["error"]["kind"], "validation", "{args:?}");
    }
}

#[test]
fn failed_verification_exits_three() {
    // 64 modes recur well before t = 100
    let out = nhbath(&[
        "verify", "--g0", "0.6", "--gamma", "0.05", "--nmodes", "64", "--tmax", "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["error"]["kind"], "numerical");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"]["pass"], false);
}

#[test]
fn verify_passes_on_a_published_set() {
    let r = json(&["verify", "--g0", "2", "--gamma", "4.5", "--tmax", "30"]);
    assert_eq!(r["results"]["pass"], true);
    for row in r["results"]["rows"].as_array().unwrap() {
        assert_eq!(row[3], true, "{row}");
    }
}

#[test]
fn sweep_reports_the_crossing_at_the_first_critical_rate() {
    let csv = Csv::parse(&ok(&[
        "sweep",
        "--g0",
        "0.8",
        "--gamma-hi",
        "3",
        "--ngamma",
        "61",
    ]));
    let events = csv.meta("results")["events"].clone();
    let events = events.as_array().unwrap();
    assert_eq!(events.len(), 1);
    assert_eq!(events[0]["type"], "sheet_crossing");
    assert!((events[0]["gamma"].as_f64().unwrap() - 0.64).abs() < 1e-8);
    assert_eq!(csv.rows.len(), 2 * 61);
}

#[test]
fn phase_diagram_covers_the_grid() {
    let csv = Csv::parse(&ok(&[
        "phase-diagram",
        "--ng0",
        "7",
        "--ngamma",
        "9",
        "--gamma-hi",
        "6",
    ]));
    assert_eq!(csv.rows.len(), 63);
    for row in &csv.rows {
        let total: usize = ["n_bound", "n_resonant", "n_antiresonant"]
            .iter()
            .map(|c| row[csv.col(c)].parse::<usize>().unwrap())
            .sum();
        assert!(total <= 2);
    }
}

#[test]
fn optimum_sits_at_the_predicted_rate() {
    for (g0, expected) in [(0.6, 0.36), (2.0, 2.0 * 3f64.sqrt())] {
        let g = g0.to_string();
        let r = json(&["optimal", "--g0", &g]);
        let o = &r["results"]["optimum"];
        assert!(
            (o["gamma_star"].as_f64().unwrap() - expected).abs() <= 1e-6,
            "{o}"
        );
        assert_eq!(o["discrepancy"], false);
    }
}

#[test]
fn trajectory_figure_spans_the_caption_range() {
    let csv = Csv::parse(&ok(&["fig", "3", "--ngamma", "31"]));
    assert_eq!(csv.columns[..3], ["g0", "gamma", "label"]);
    let gammas: Vec<f64> = csv.rows.iter().map(|r| csv.num(r, "gamma")).collect();
    assert_eq!(gammas.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
    assert_eq!(gammas.iter().cloned().fold(0.0, f64::max), 3.0);
    assert!(csv.rows.iter().all(|r| csv.num(r, "g0") == 0.8));
}

#[test]
fn figure_seven_has_two_curves_and_records_the_normalization() {
    let csv = Csv::parse(&ok(&["fig", "7", "--npoints", "101"]));
    let mut gammas: Vec<f64> = csv.rows.iter().map(|r| csv.num(r, "gamma")).collect();
    gammas.dedup();
    assert_eq!(gammas, [1.1, 1.35]);
    assert!(csv
        .preamble
        .iter()
        .any(|l| l.contains("\"1,1\"") && l.contains("1.1")));
    let devs = csv.meta("diagnostics")["spectral_vs_lattice"].clone();
    for d in devs.as_array().unwrap() {
        assert!(d["max_abs_dca"].as_f64().unwrap() < 1e-4, "{d}");
    }
}

#[test]
fn figure_thirteen_covers_three_couplings() {
    let csv = Csv::parse(&ok(&["fig", "13", "--ngamma", "21"]));
    let mut g0s: Vec<f64> = csv.rows.iter().map(|r| csv.num(r, "g0")).collect();
    g0s.dedup();
    assert_eq!(g0s, [0.8, 1.2, 2.0]);
    assert!(csv.columns.contains(&"re_k".to_string()));
    assert!(csv.columns.contains(&"re_s".to_string()));
}

#[test]
fn help_and_version_exit_zero() {
    assert!(nhbath(&["--help"]).status.success());
    assert!(nhbath(&["--version"]).status.success());
}
