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

//! Steps shared by both scaling drivers: scale initialization, large
//! blossom liquidation, reweighting, perfection and finalization.

use std::time::Instant;

use crate::blossom::BlossomForest;
use crate::eligibility::Criterion;
use crate::engine::{Engine, SearchParams};
use crate::error::{violation, SolveError, SolveResult};
use crate::graph::{input_weight, EdgeId, Graph, Matching, VertexId};
use crate::old::OldForest;
use crate::queue::QueueKind;
use crate::report::{RunReport, ScaleReport};
use crate::state::State;
use crate::verify::{check_optimality_gap, check_state, Certificate, Mode};

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Small/large threshold; each driver has its own default.
    pub tau: Option<usize>,
    /// Audit certificates and invariant bounds while solving.
    pub check: bool,
    /// Record the event trace of every search.
    pub trace: bool,
    /// Run every search against the eager dual oracle.
    pub shadow: bool,
}

impl Options {
    pub fn checked() -> Options {
        Options {
            check: true,
            shadow: true,
            ..Options::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub matching: Matching,
    pub weight: i64,
    pub report: RunReport,
    pub certificate: Certificate,
    pub trace: Vec<String>,
}

pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

fn ceil_cbrt_sq(n: usize) -> usize {
    // smallest r with r^3 >= n^2
    let target = (n as u128) * (n as u128);
    let mut r = (n as f64).powf(2.0 / 3.0) as u128;
    while r * r * r < target {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) * (r - 1) >= target {
        r -= 1;
    }
    r as usize
}

pub fn default_tau_liquidationist(n: usize) -> usize {
    ceil_sqrt(n).max(1)
}

pub fn default_tau_hybrid(n: usize) -> usize {
    let lo = ceil_sqrt(n).max(1);
    let hi = ceil_cbrt_sq(n).max(lo);
    let x = ((n as f64).sqrt() * (n.max(2) as f64).log2()).ceil() as usize;
    x.clamp(lo, hi)
}

pub(crate) struct Ctx {
    pub st: State,
    pub eng: Engine,
    pub opts: Options,
    pub tau: usize,
    pub n: usize,
    pub report: RunReport,
    started: Instant,
}

impl Ctx {
    pub fn new(g: Graph, opts: Options, tau: usize, algorithm: &str) -> Ctx {
        let n = g.n();
        let report = RunReport {
            algorithm: algorithm.to_string(),
            tau,
            n,
            m: g.m(),
            max_weight: g.max_weight(),
            ..RunReport::default()
        };
        let eng = if opts.trace { Engine::with_trace() } else { Engine::new() };
        Ctx {
            st: State::new(g),
            eng,
            opts,
            tau,
            n,
            report,
            started: Instant::now(),
        }
    }

    pub fn params<'a>(&self, roots: &'a [VertexId], c: Criterion) -> SearchParams<'a> {
        let mut p = SearchParams::new(roots, c);
        p.shadow = self.opts.shadow;
        p
    }

    pub fn scale_count(&self) -> u32 {
        self.st.scales.scale_count
    }

    /// Initialization and Scaling. Returns the fresh per-scale record.
    pub fn start_scale(&mut self) -> SolveResult<ScaleReport> {
        let st = &mut self.st;
        let nv = st.g.vertex_capacity();
        let prev_m = st.mate.edges();
        let first = st.scales.current_scale == 0;
        st.old = OldForest::snapshot(&st.forest);
        st.forest = BlossomForest::new(nv);
        st.mate = Matching::new(nv);
        st.scales.advance();
        let i = st.scales.current_scale;
        for e in 0..st.g.edge_capacity() {
            st.w[e] = 2 * (st.w[e] + st.scales.digit(e, i));
        }
        for v in 0..nv {
            st.pi[v] *= 2;
            if st.g.vertex_active(v) {
                st.y[v] = 2 * st.y[v] + 3;
            }
        }
        st.old.scale_z(2);
        if self.opts.check {
            let mut near = vec![first; st.g.edge_capacity()];
            for e in prev_m {
                near[e] = true;
            }
            for id in 0..st.old.len() {
                for e in st.old.blossom_edges(id) {
                    near[e] = true;
                }
            }
            for e in 0..st.g.edge_capacity() {
                if !st.g.edge_active(e) {
                    continue;
                }
                let yz = st.yz(e);
                if st.w[e] > yz || (near[e] && st.w[e] < yz - 6) {
                    return violation(format!(
                        "scale {}: edge {} has w = {}, yz = {} after scaling",
                        i, e, st.w[e], yz
                    ));
                }
            }
        }
        Ok(ScaleReport {
            scale: i,
            ..ScaleReport::default()
        })
    }

    /// Liquidates every inherited blossom with at least tau vertices.
    pub fn liquidate_large(&mut self, rep: &mut ScaleReport) {
        let big: Vec<usize> = self
            .st
            .old
            .alive()
            .filter(|&id| self.st.old.size(id) >= self.tau)
            .collect();
        for id in big {
            rep.liquidated_large_z += self.st.old.z(id);
            self.st.liquidate_old(id);
        }
    }

    pub fn reweight(&mut self) -> SolveResult<()> {
        let st = &mut self.st;
        for e in 0..st.g.edge_capacity() {
            if !st.g.edge_active(e) {
                continue;
            }
            let ed = *st.g.edge(e);
            st.w[e] -= st.y[ed.u] + st.y[ed.v];
            if st.w[e] % 2 != 0 {
                return violation(format!("edge {} has odd weight {} after reweighting", e, st.w[e]));
            }
        }
        for v in 0..st.g.vertex_capacity() {
            if st.g.vertex_active(v) {
                st.pi[v] += st.y[v];
                st.y[v] = 0;
            }
        }
        Ok(())
    }

    fn count_free(&self) -> (usize, usize) {
        let free = self.st.free_vertices();
        let orig = free.iter().filter(|&&v| v < self.n).count();
        (free.len(), orig)
    }

    pub fn record_reduction(&self, rep: &mut ScaleReport) {
        let (all, orig) = self.count_free();
        rep.free_after_reduction = all;
        rep.free_original_after_reduction = orig;
    }

    /// Drops free dummies and gives every remaining free vertex a fresh
    /// matched pendant whose edge is tight.
    pub fn perfection(&mut self, rep: &mut ScaleReport, expect_y: Option<i64>) -> SolveResult<()> {
        let st = &mut self.st;
        let owners: Vec<VertexId> = (0..self.n)
            .filter(|&u| st.g.dummies().is_active(u))
            .collect();
        for u in owners {
            let d = st.g.dummy_of(u);
            if !st.mate.is_matched(d) {
                st.g.deactivate_dummy(u);
            }
        }
        let scale = st.scales.current_scale as usize;
        for u in st.free_vertices() {
            if st.g.is_dummy(u) {
                return violation(format!("dummy {} free after cleanup", u));
            }
            let (d, e) = st.g.activate_dummy(u, scale);
            st.y[d] = -st.y[u];
            st.pi[d] = -st.pi[u];
            st.w[e] = 0;
            if let Some(want) = expect_y {
                if st.y[d] != want {
                    return violation(format!("dummy of {} gets y = {}, expected {}", u, st.y[d], want));
                }
            }
            st.mate.set(&st.g, e);
            rep.dummies_added += 1;
        }
        Ok(())
    }

    pub fn large_z(&self) -> i64 {
        self.st
            .forest
            .blossoms()
            .filter(|&b| self.st.forest.size(b) >= self.tau)
            .map(|b| self.st.forest.z(b))
            .sum()
    }

    pub fn end_scale(&mut self, mut rep: ScaleReport) -> SolveResult<()> {
        rep.large_z_end = self.large_z();
        if self.opts.check {
            if !self.st.mate.is_perfect_on(&self.st.g) {
                return violation(format!("scale {} ends without a perfect matching", rep.scale));
            }
            let v = check_state(&self.st, Mode::Rcs);
            rep.violations = v.len();
            if let Some(first) = v.first() {
                return violation(format!(
                    "scale {} certificate: {} ({:?}, {:?}) {}",
                    rep.scale, first.clause, first.edge, first.blossom, first.detail
                ));
            }
            if let Err(e) = self.st.forest.validate(&self.st.g, self.st.mate.mates()) {
                return violation(e);
            }
        }
        self.report.scales.push(rep);
        Ok(())
    }

    /// Deletes every dummy and rematches the freed vertices.
    pub fn finalize(&mut self) -> SolveResult<()> {
        let st = &mut self.st;
        for u in 0..self.n {
            if !st.g.dummies().is_active(u) {
                continue;
            }
            let d = st.g.dummy_of(u);
            let de = st.g.dummy_edge(u);
            if st.mate.mate_edge(u) == Some(de) {
                st.mate.unset_vertex(u);
            }
            st.mate.unset_vertex(d);
            st.g.deactivate_dummy(u);
        }
        self.report.finalization_free = self.st.free_count();
        loop {
            let free = self.st.free_vertices();
            if free.is_empty() {
                break;
            }
            let (even, odd): (Vec<VertexId>, Vec<VertexId>) =
                free.iter().partition(|&&v| self.st.y[v].rem_euclid(2) == 0);
            let mut progressed = false;
            for class in [even, odd] {
                if class.is_empty() {
                    continue;
                }
                let mut p = self.params(&class, Criterion::Three);
                p.queue = QueueKind::Ordered;
                p.exhaust = true;
                let out = self.eng.run(&mut self.st, &p)?;
                self.report.finalization_searches += 1;
                if out.augmented() {
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return Err(SolveError::Infeasible(format!(
                    "{} vertices cannot be matched",
                    self.st.free_count()
                )));
            }
        }
        for e in 0..self.st.g.m() {
            let want = 2 * self.st.scales.wbar[e];
            if self.st.plain_weight(e) != want {
                return violation(format!(
                    "edge {} ends with plain weight {}, expected {}",
                    e,
                    self.st.plain_weight(e),
                    want
                ));
            }
        }
        Ok(())
    }

    /// Runs every scale through `scale_body`, then finalizes.
    pub fn solve_with<F>(mut self, mut scale_body: F) -> SolveResult<Solution>
    where
        F: FnMut(&mut Ctx, &mut ScaleReport) -> SolveResult<()>,
    {
        if self.n % 2 == 1 {
            return Err(SolveError::Infeasible(format!("odd vertex count {}", self.n)));
        }
        for _ in 0..self.scale_count() {
            let mut rep = self.start_scale()?;
            scale_body(&mut self, &mut rep)?;
            self.end_scale(rep)?;
        }
        self.finalize()?;
        let cert = Certificate::from_state(&self.st, Mode::Rcs);
        if self.opts.check {
            let v = check_state(&self.st, Mode::Rcs);
            if let Some(first) = v.first() {
                return violation(format!(
                    "final certificate: {} ({:?}) {}",
                    first.clause, first.edge, first.detail
                ));
            }
            let gap = check_optimality_gap(&cert, Some(&self.st.g));
            if !gap.ok {
                return violation(format!("final optimality gap: {}", gap.detail));
            }
            self.report.verified = Some(true);
        }
        let weight = input_weight(&self.st.g, &self.st.mate);
        self.report.weight = weight;
        self.report.time_ms = self.started.elapsed().as_secs_f64() * 1e3;
        let trace = self.eng.take_trace();
        Ok(Solution {
            matching: self.st.mate.clone(),
            weight,
            report: self.report,
            certificate: cert,
            trace,
        })
    }
}

/// Edges of `m` restricted to the original graph.
pub fn matched_pairs(g: &Graph, m: &Matching) -> Vec<(VertexId, VertexId, EdgeId)> {
    m.edges()
        .into_iter()
        .filter(|&e| !g.is_dummy_edge(e))
        .map(|e| {
            let ed = g.edge(e);
            (ed.u.min(ed.v), ed.u.max(ed.v), e)
        })
        .collect()
}
