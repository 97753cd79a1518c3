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
use std::io::Write;
use std::path::Path;

use wmatch_core::generate::{generate, InstanceSpec};
use wmatch_core::graph::{load_dimacs, write_dimacs};
use wmatch_core::hybrid::run_hybrid;
use wmatch_core::liquidationist::run_liquidationist;
use wmatch_core::scaling::{matched_pairs, Options, Solution};
use wmatch_core::verify::{check_invariants, check_optimality_gap, oracle_weight, Certificate};
use wmatch_core::{Graph, SolveResult};

use crate::{Algo, Failure, GenArgs, SolveArgs};

pub fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))?;
    load_dimacs(&text, false).map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| Failure::Parse(format!("{}: {}", path.display(), e)))
}

/// `MATCH_LOG=trace` prints search events, any other value per-scale lines.
fn log_level() -> Option<String> {
    std::env::var("MATCH_LOG")
        .ok()
        .filter(|s| !s.is_empty() && s != "0" && s != "off")
}

pub fn run_algo(algo: Algo, g: &Graph, opts: &Options) -> SolveResult<Solution> {
    match algo {
        Algo::Liquidationist => run_liquidationist(g, opts),
        Algo::Hybrid => run_hybrid(g, opts),
    }
}

pub fn solve(a: &SolveArgs) -> Result<(), Failure> {
    let g = read_graph(&a.input)?;
    let level = log_level();
    let opts = Options {
        tau: a.tau,
        check: a.check_invariants,
        trace: a.trace || level.as_deref() == Some("trace"),
        shadow: false,
    };
    let sol = run_algo(a.algo, &g, &opts)?;
    for line in &sol.trace {
        eprintln!("{}", line);
    }
    if level.is_some() {
        for s in &sol.report.scales {
            eprintln!(
                "scale {}: searches {} adjustments {} free {} dummies {} large_z {}",
                s.scale, s.search_calls + s.search_one_calls, s.dual_adjustments, s.free_after_reduction,
                s.dummies_added, s.large_z_end
            );
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let pairs = matched_pairs(&g, &sol.matching);
    let mut sorted: Vec<(usize, usize)> = pairs.iter().map(|&(u, v, _)| (u + 1, v + 1)).collect();
    sorted.sort_unstable();
    for (u, v) in &sorted {
        let _ = writeln!(out, "m {} {}", u, v);
    }
    let r = &sol.report;
    let _ = writeln!(out, "c weight {}", sol.weight);
    let _ = writeln!(
        out,
        "c algo {} tau {} scales {} adjustments {} time_ms {:.3}",
        r.algorithm,
        r.tau,
        r.scales.len(),
        r.total_adjustments(),
        r.time_ms
    );
    if let Some(v) = r.verified {
        let _ = writeln!(out, "c verified {}", v);
    }
    if let Some(path) = &a.json {
        let body = serde_json::json!({
            "report": r,
            "matching": sorted,
        });
        write_file(path, &serde_json::to_string_pretty(&body).expect("json"))?;
    }
    if let Some(path) = &a.cert {
        write_file(path, &sol.certificate.to_json())?;
    }
    Ok(())
}

pub fn gen(a: &GenArgs) -> Result<(), Failure> {
    let mut spec = InstanceSpec::new(a.generator, a.n, a.m, a.max_weight, a.seed);
    spec.guarantee_perfect = a.perfect;
    let g = generate(&spec).map_err(|e| Failure::Parse(e.to_string()))?;
    let body = format!("c {}\n{}", spec.label(), write_dimacs(&g));
    match &a.out {
        Some(p) => write_file(p, &body),
        None => {
            print!("{}", body);
            Ok(())
        }
    }
}

pub fn oracle(input: &Path) -> Result<(), Failure> {
    let g = read_graph(input)?;
    match oracle_weight(&g) {
        Ok(Some(w)) => {
            println!("{}", w);
            Ok(())
        }
        Ok(None) => Err(Failure::Infeasible("no perfect matching".into())),
        Err(e) => Err(Failure::Parse(e.to_string())),
    }
}

pub fn verify(cert: &Path, graph: Option<&Path>) -> Result<(), Failure> {
    let text = fs::read_to_string(cert).map_err(|e| Failure::Parse(format!("{}: {}", cert.display(), e)))?;
    let c = Certificate::from_json(&text).map_err(|e| Failure::Parse(format!("{}: {}", cert.display(), e)))?;
    let g = match graph {
        Some(p) => Some(read_graph(p)?),
        None => None,
    };
    let mut problems: Vec<String> = check_invariants(&c)
        .into_iter()
        .map(|v| format!("{} edge={:?} blossom={:?} {}", v.clause, v.edge, v.blossom, v.detail))
        .collect();
    if let Some(g) = &g {
        for e in c.edges.iter().filter(|e| e.id < g.m()) {
            let ge = g.edge(e.id);
            if (ge.u, ge.v) != (e.u, e.v) && (ge.v, ge.u) != (e.u, e.v) {
                problems.push(format!("graph: edge {} endpoints differ", e.id));
            }
        }
    }
    let gap = check_optimality_gap(&c, g.as_ref());
    println!(
        "matching_weight {} dual_objective {} optimum {}",
        gap.matching_weight,
        gap.dual_objective,
        gap.optimum.map_or("-".to_string(), |x| x.to_string())
    );
    if !gap.ok {
        problems.push(format!("gap: {}", gap.detail));
    }
    for p in &problems {
        println!("violation {}", p);
    }
    if problems.is_empty() {
        println!("ok");
        Ok(())
    } else {
        Err(Failure::Violation(format!("{} problems", problems.len())))
    }
}
