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


//! Bench suites, CSV rows and the growth summary.

use std::fs::OpenOptions;

use wmatch_core::generate::{generate, Family, InstanceSpec};
use wmatch_core::scaling::Options;

use crate::commands::run_algo;
use crate::{Algo, BenchArgs, Failure};

pub const HEADER: [&str; 10] = [
    "instance", "algo", "tau", "n", "m", "N", "weight", "time_ms", "adjustments", "scales",
];

pub fn parse_suite(s: &str) -> Result<Vec<InstanceSpec>, Failure> {
    if s == "scaling" {
        return Ok([1024usize, 2048, 4096]
            .iter()
            .map(|&n| InstanceSpec::new(Family::RandomGnm, n, 4 * n, 1 << 10, 1).perfect())
            .collect());
    }
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|item| {
            let bad = || Failure::Parse(format!("bad suite item `{}`, expected family:n:m:N:seed[:p]", item));
            let parts: Vec<&str> = item.trim().split(':').collect();
            if parts.len() < 5 || parts.len() > 6 {
                return Err(bad());
            }
            let fam: Family = parts[0].parse().map_err(|_| bad())?;
            let n = parts[1].parse().map_err(|_| bad())?;
            let m = parts[2].parse().map_err(|_| bad())?;
            let top = parts[3].parse().map_err(|_| bad())?;
            let seed = parts[4].parse().map_err(|_| bad())?;
            let mut spec = InstanceSpec::new(fam, n, m, top, seed);
            match parts.get(5) {
                Some(&"p") => spec.guarantee_perfect = true,
                Some(_) => return Err(bad()),
                None => {}
            }
            Ok(spec)
        })
        .collect()
}

struct Row {
    spec: InstanceSpec,
    algo: Algo,
    time_ms: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

pub fn run(a: &BenchArgs) -> Result<(), Failure> {
    let suite = parse_suite(&a.suite)?;
    let algos = match a.algo {
        Some(x) => vec![x],
        None => vec![Algo::Liquidationist, Algo::Hybrid],
    };
    let fresh = std::fs::metadata(&a.out).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&a.out)
        .map_err(|e| Failure::Parse(format!("{}: {}", a.out.display(), e)))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    let io = |e: csv::Error| Failure::Parse(e.to_string());
    if fresh {
        w.write_record(HEADER).map_err(io)?;
    }
    let mut rows = Vec::new();
    for spec in &suite {
        let g = generate(spec).map_err(|e| Failure::Parse(e.to_string()))?;
        for &algo in &algos {
            let opts = Options {
                tau: a.tau,
                ..Options::default()
            };
            let mut times = Vec::new();
            let mut last = None;
            for _ in 0..a.repeat.max(1) {
                let sol = run_algo(algo, &g, &opts)?;
                times.push(sol.report.time_ms);
                last = Some(sol);
            }
            let sol = last.unwrap();
            let t = median(times);
            let r = &sol.report;
            w.write_record([
                spec.label(),
                algo.name().to_string(),
                r.tau.to_string(),
                r.n.to_string(),
                r.m.to_string(),
                r.max_weight.to_string(),
                r.weight.to_string(),
                format!("{:.3}", t),
                r.total_adjustments().to_string(),
                r.scales.len().to_string(),
            ])
            .map_err(io)?;
            w.flush().map_err(|e| Failure::Parse(e.to_string()))?;
            rows.push(Row { spec: spec.clone(), algo, time_ms: t });
        }
    }
    summary(&rows);
    Ok(())
}

fn reference(spec: &InstanceSpec) -> f64 {
    let n = spec.n.max(2) as f64;
    let top = spec.max_weight.max(2) as f64;
    spec.m.max(1) as f64 * n.sqrt() * (n * top).log2()
}

/// Observed growth per doubling of n against the reference curve.
fn summary(rows: &[Row]) {
    for algo in [Algo::Liquidationist, Algo::Hybrid] {
        let mut mine: Vec<&Row> = rows.iter().filter(|r| r.algo == algo).collect();
        mine.sort_by_key(|r| r.spec.n);
        if mine.is_empty() {
            continue;
        }
        println!("{}:", algo.name());
        for pair in mine.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b.spec.n != 2 * a.spec.n || a.time_ms <= 0.0 {
                continue;
            }
            let growth = b.time_ms / a.time_ms;
            let expect = reference(&b.spec) / reference(&a.spec);
            println!(
                "  n {} -> {}: time x{:.2} (reference x{:.2}, envelope x4.00) {}",
                a.spec.n,
                b.spec.n,
                growth,
                expect,
                if growth <= 4.0 { "within" } else { "above" }
            );
        }
        for r in &mine {
            println!("  n {} time_ms {:.3} per-reference {:.3e}", r.spec.n, r.time_ms, r.time_ms / reference(&r.spec));
        }
    }
}
