// Copyright 2026 The steerqkd Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steerqkd"))
        .args(args)
        .output()
        .unwrap()
}

fn write_state(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_werner() {
    let dir = TempDir::new().unwrap();
    let f = write_state(&dir, "w.json", r#"{"family":"werner","params":{"omega":0.8}}"#);
    let v = json(&bin(&["analyze", s(&f)]));
    assert!((v["f3_bound"].as_f64().unwrap() - 1.3856).abs() < 1e-4);
    assert!((v["q_min"].as_f64().unwrap() - 0.1).abs() < 1e-12);
    assert_eq!(v["useful"], Value::Bool(true));
}

#[test]
fn analyze_gamma_worked_example() {
    let dir = TempDir::new().unwrap();
    let f = write_state(&dir, "g.json", r#"{"family":"gamma","params":{"q":0.9,"alpha":0.25}}"#);
    let v = json(&bin(&["analyze", s(&f)]));
    assert!((v["q_min"].as_f64().unwrap() - 0.22284).abs() < 1e-5);
    assert_eq!(v["useful"], Value::Bool(false));
}

#[test]
fn analyze_maximally_mixed_matrix() {
    let dir = TempDir::new().unwrap();
    let rows: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { [0.25, 0.0] } else { [0.0, 0.0] }).collect())
        .collect();
    let text = serde_json::json!({ "matrix": rows }).to_string();
    let f = write_state(&dir, "m.json", &text);
    let v = json(&bin(&["analyze", s(&f)]));
    assert_eq!(v["f3_bound"].as_f64(), Some(0.0));
    assert_eq!(v["chsh_bound"].as_f64(), Some(0.0));
    assert_eq!(v["useful"], Value::Bool(false));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("none.json");
    assert_eq!(bin(&["analyze", s(&missing)]).status.code(), Some(2));
    let bad = write_state(&dir, "bad.json", r#"{"family":"werner","params":{"omega":2}}"#);
    let out = bin(&["analyze", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params"));
    let broken = write_state(&dir, "broken.json", "{\n  \"family\": \"werner\",\n  \"params\": [\n}");
    let out = bin(&["analyze", s(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert_eq!(
        bin(&["scan", "--family", "werner", "--range", "omega=1:0:0.1", "--out", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));

    let product = write_state(&dir, "p.json", r#"{"family":"gamma","params":{"q":0,"alpha":0.3}}"#);
    let annihilated = bin(&[
        "simulate",
        s(&product),
        "--rounds",
        "10",
        "--seed",
        "1",
        "--filter",
        "0,1",
    ]);
    assert_eq!(annihilated.status.code(), Some(3));
    let empty = bin(&["simulate", s(&product), "--rounds", "0", "--seed", "1"]);
    assert_eq!(empty.status.code(), Some(3));
}

#[test]
fn simulate_singlet_and_werner() {
    let dir = TempDir::new().unwrap();
    let f = write_state(&dir, "s.json", r#"{"family":"werner","params":{"omega":1}}"#);
    let v = json(&bin(&["simulate", s(&f), "--rounds", "10000", "--seed", "3"]));
    assert_eq!(v["report"]["empirical_qber"].as_f64(), Some(0.0));
    assert_eq!(v["config"]["seed"].as_u64(), Some(3));
    assert!(v["report"].get("raw_key_alice").is_none());

    let f = write_state(&dir, "w.json", r#"{"family":"werner","params":{"omega":0.8}}"#);
    let v = json(&bin(&["simulate", s(&f), "--rounds", "1000000", "--seed", "42"]));
    let q = v["report"]["empirical_qber"].as_f64().unwrap();
    let n = v["report"]["disclosed_count"].as_f64().unwrap();
    assert!((q - 0.1).abs() <= 4.0 * (0.09 / n).sqrt(), "{q}");
}

#[test]
fn simulate_filtered_heralding() {
    let dir = TempDir::new().unwrap();
    let f = write_state(&dir, "g.json", r#"{"family":"gamma","params":{"q":0.9,"alpha":0.25}}"#);
    let v = json(&bin(&[
        "simulate",
        s(&f),
        "--rounds",
        "10000000",
        "--seed",
        "7",
        "--filter",
        "0.02119,0.02563",
    ]));
    let p = v["report"]["p_succ_empirical"].as_f64().unwrap();
    let want = 5.797_849_999_927_331e-4;
    assert!((p - want).abs() <= 4.0 * (want * (1.0 - want) / 1e7).sqrt(), "{p}");
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn werner_scan_flips_at_inverse_root_three() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("w.csv");
    assert!(bin(&[
        "scan",
        "--family",
        "werner",
        "--range",
        "omega=0:1:0.001",
        "--out",
        s(&out)
    ])
    .status
    .success());
    let (header, rows) = read_csv(&out);
    assert_eq!(rows.len(), 1001);
    let col = header.iter().position(|h| h == "useful").unwrap();
    let first = rows.iter().find(|r| r[col] == "1").unwrap();
    let omega: f64 = first[0].parse().unwrap();
    assert!((omega - 0.5774).abs() <= 1e-3);
}

#[test]
fn gamma_scan_boundary_follows_closed_form() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.csv");
    let args = [
        "scan",
        "--family",
        "gamma",
        "--range",
        "q=0:1:0.005",
        "--range",
        "alpha=0:0.785:0.005",
        "--out",
        s(&out),
    ];
    assert!(bin(&args).status.success());
    let (header, rows) = read_csv(&out);
    let col = header.iter().position(|h| h == "useful").unwrap();
    let step = 0.005;
    // Wherever the verdict changes between neighbouring α cells, the curve
    // 2q sin 2α + |1 − 2q| = √3 must cross that cell.
    let f = |q: f64, a: f64| 2.0 * q * (2.0 * a).sin() + (1.0 - 2.0 * q).abs() - 3f64.sqrt();
    let mut crossings = 0;
    for pair in rows.windows(2) {
        let (q0, a0): (f64, f64) = (pair[0][0].parse().unwrap(), pair[0][1].parse().unwrap());
        let (q1, a1): (f64, f64) = (pair[1][0].parse().unwrap(), pair[1][1].parse().unwrap());
        if q0 == q1 && pair[0][col] != pair[1][col] {
            crossings += 1;
            assert!((a1 - a0 - step).abs() < 1e-9);
            assert!(
                f(q0, a0) * f(q1, a1) <= 0.0,
                "no crossing at q = {q0}, α ∈ [{a0}, {a1}]"
            );
        }
    }
    assert!(crossings > 10);
}

#[test]
fn bell_diagonal_scan_has_absolutely_local_useful_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b.csv");
    let args = [
        "scan",
        "--family",
        "bell_diagonal",
        "--range",
        "w1=0:1:0.02",
        "--range",
        "w2=0:1:0.02",
        "--range",
        "w3=0:1:0.02",
        "--out",
        s(&out),
    ];
    assert!(bin(&args).status.success());
    let (header, rows) = read_csv(&out);
    let u = header.iter().position(|h| h == "useful").unwrap();
    let l = header.iter().position(|h| h == "absolutely_local").unwrap();
    assert!(rows.iter().any(|r| r[u] == "1" && r[l] == "1"));
    assert!(rows.iter().all(|r| r.len() == header.len()));
}

#[test]
fn table1_prints_csv() {
    let out = bin(&[
        "table1", "--eps1", "1", "--eps2", "1", "--alphas", "0,0.6", "--qstep", "0.05",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,q_start");
    assert_eq!(lines[1], "0,NaN");
    let start: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((start - 0.707).abs() < 2e-3);
}
