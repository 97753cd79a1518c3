// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SINGLE: &str = "p edge 2 1\ne 1 2 5\n";
const FOUR_CYCLE: &str = "p edge 4 4\ne 1 2 1\ne 2 3 2\ne 3 4 1\ne 4 1 2\n";

fn wmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wmatch")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn solve_single_edge() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "one.txt", SINGLE);
    for algo in ["liquidationist", "hybrid"] {
        let o = wmatch(&["solve", "--algo", algo, "--input", &f]);
        assert_eq!(o.status.code(), Some(0));
        let s = stdout(&o);
        assert!(s.lines().any(|l| l == "m 1 2"), "{}", s);
        assert!(s.contains("c weight 5"), "{}", s);
    }
}

#[test]
fn solve_four_cycle() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "c4.txt", FOUR_CYCLE);
    for algo in ["liquidationist", "hybrid"] {
        let o = wmatch(&["solve", "--algo", algo, "--input", &f, "--check-invariants"]);
        assert_eq!(o.status.code(), Some(0));
        let s = stdout(&o);
        assert!(s.contains("c weight 4"), "{}", s);
        assert!(s.contains("c verified true"), "{}", s);
    }
}

#[test]
fn checked_solve_on_generated_instance() {
    let d = TempDir::new().unwrap();
    let g = path(&d, "g.txt");
    let o = wmatch(&["gen", "--n", "12", "--m", "30", "-N", "64", "--seed", "3", "--perfect", "--out", &g]);
    assert_eq!(o.status.code(), Some(0));
    for algo in ["liquidationist", "hybrid"] {
        let o = wmatch(&["solve", "--algo", algo, "--input", &g, "--check-invariants"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let oracle = wmatch(&["oracle", "--input", &g]);
    let want = stdout(&oracle).trim().to_string();
    let got = stdout(&wmatch(&["solve", "--input", &g]));
    assert!(got.contains(&format!("c weight {}", want)), "{} vs {}", got, want);
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let bad = write(&d, "bad.txt", "p edge 4 1\ne 1 5 3\n");
    assert_eq!(wmatch(&["solve", "--input", &bad]).status.code(), Some(1));
    let odd = write(&d, "odd.txt", "p edge 3 1\ne 1 2 3\n");
    assert_eq!(wmatch(&["solve", "--input", &odd]).status.code(), Some(1));
    let star = write(&d, "star.txt", "p edge 4 3\ne 1 2 1\ne 1 3 1\ne 1 4 1\n");
    for algo in ["liquidationist", "hybrid"] {
        assert_eq!(wmatch(&["solve", "--algo", algo, "--input", &star]).status.code(), Some(3));
    }
    assert_eq!(wmatch(&["oracle", "--input", &star]).status.code(), Some(3));
    assert_eq!(wmatch(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(wmatch(&["solve", "--input", &path(&d, "missing.txt")]).status.code(), Some(1));
}

#[test]
fn gen_is_deterministic() {
    let d = TempDir::new().unwrap();
    for fam in ["random-gnm", "random-regular-ish", "nested-blossom-adversarial"] {
        let (a, b) = (path(&d, "a.txt"), path(&d, "b.txt"));
        for p in [&a, &b] {
            let o = wmatch(&["gen", "--generator", fam, "--n", "8", "--m", "12", "-N", "10", "--seed", "7", "--out", p]);
            assert_eq!(o.status.code(), Some(0));
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{}", fam);
    }
}

#[test]
fn oracle_four_cycle() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "c4.txt", FOUR_CYCLE);
    let o = wmatch(&["oracle", "--input", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4");
}

fn solve_with_cert(d: &TempDir, graph: &str) -> (String, serde_json::Value) {
    let cert = path(d, "cert.json");
    let o = wmatch(&["solve", "--input", graph, "--cert", &cert]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    (cert, v)
}

/// y(u) + y(v) plus z of every blossom holding both ends.
fn yz(c: &serde_json::Value, u: u64, v: u64) -> i64 {
    let y = |x: u64| c["y"][x as usize].as_i64().unwrap();
    let mut s = y(u) + y(v);
    for b in c["blossoms"].as_array().unwrap() {
        let vs: Vec<u64> = b["vertices"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        if vs.contains(&u) && vs.contains(&v) {
            s += b["z"].as_i64().unwrap();
        }
    }
    s
}

#[test]
fn verify_accepts_and_rejects() {
    let d = TempDir::new().unwrap();
    let g = path(&d, "g.txt");
    wmatch(&["gen", "--n", "10", "--m", "25", "-N", "30", "--seed", "11", "--perfect", "--out", &g]);
    let (cert, mut c) = solve_with_cert(&d, &g);
    let ok = wmatch(&["verify", "--cert", &cert, "--graph", &g]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).trim_end().ends_with("ok"));

    // push a matched edge above its weight
    let matched: Vec<u64> = c["matching"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    let edge = c["edges"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| matched.contains(&e["id"].as_u64().unwrap()))
        .expect("matching is non-empty")
        .clone();
    let (u, v, w) = (edge["u"].as_u64().unwrap(), edge["v"].as_u64().unwrap(), edge["w"].as_i64().unwrap());
    let lift = w - yz(&c, u, v) + 1;
    assert!(lift >= 1);
    let u = u as usize;
    c["y"][u] = serde_json::json!(c["y"][u].as_i64().unwrap() + lift);
    let bad = write(&d, "bad.json", &c.to_string());
    let o = wmatch(&["verify", "--cert", &bad, "--graph", &g]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("violation"), "{}", stdout(&o));
}

#[test]
fn json_report_weight_matches_matching() {
    let d = TempDir::new().unwrap();
    let g = path(&d, "g.txt");
    wmatch(&["gen", "--generator", "nested-blossom-adversarial", "--n", "30", "--m", "60", "-N", "100", "--seed", "2", "--perfect", "--out", &g]);
    let text = fs::read_to_string(&g).unwrap();
    let mut w = std::collections::HashMap::new();
    for l in text.lines().filter(|l| l.starts_with("e ")) {
        let p: Vec<i64> = l[2..].split_whitespace().map(|x| x.parse().unwrap()).collect();
        w.insert((p[0].min(p[1]), p[0].max(p[1])), p[2]);
    }
    for algo in ["liquidationist", "hybrid"] {
        let j = path(&d, "r.json");
        let o = wmatch(&["solve", "--algo", algo, "--input", &g, "--json", &j]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&j).unwrap()).unwrap();
        let total: i64 = v["matching"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| {
                let (a, b) = (p[0].as_i64().unwrap(), p[1].as_i64().unwrap());
                w[&(a.min(b), a.max(b))]
            })
            .sum();
        assert_eq!(v["report"]["weight"].as_i64().unwrap(), total);
        assert_eq!(v["report"]["algorithm"], algo);
        assert_eq!(v["matching"].as_array().unwrap().len(), 15);
    }
}

#[test]
fn bench_csv_header_is_stable_and_appendable() {
    let d = TempDir::new().unwrap();
    let out = path(&d, "bench.csv");
    let suite = "random-gnm:16:40:50:1:p,nested:20:40:64:2:p";
    for _ in 0..2 {
        let o = wmatch(&["bench", "--suite", suite, "--repeat", "2", "--out", &out]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,algo,tau,n,m,N,weight,time_ms,adjustments,scales");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert_eq!(lines.iter().filter(|l| l.starts_with("instance,")).count(), 1);
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 10));
    assert_eq!(wmatch(&["bench", "--suite", "nope:1", "--out", &out]).status.code(), Some(1));
}

#[test]
fn match_log_enables_trace() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "c4.txt", FOUR_CYCLE);
    let o = Command::new(env!("CARGO_BIN_EXE_wmatch"))
        .args(["solve", "--algo", "liquidationist", "--input", &f])
        .env("MATCH_LOG", "trace")
        .output()
        .unwrap();
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.lines().any(|l| l.starts_with("t=")), "{}", err);
    assert!(err.contains("scale 1:"), "{}", err);
    let quiet = wmatch(&["solve", "--input", &f]);
    assert!(!String::from_utf8_lossy(&quiet.stderr).contains("t="));
    assert!(Path::new(&f).exists());
}
