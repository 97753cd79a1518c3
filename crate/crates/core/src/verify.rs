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

//! Exhaustive oracle and dual certificate checks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Matching, VertexId};
use crate::state::State;

pub const ORACLE_MAX_N: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle refuses n = {0} (limit {ORACLE_MAX_N})")]
    TooLarge(usize),
}

/// Maximum `w`-weight perfect matching over the original vertices and
/// edges of `g`, by exhaustive recursion: the lowest unmatched vertex is
/// paired with each free neighbour in turn. Subproblems are memoized by
/// the set of matched vertices. `Ok(None)` means no perfect matching.
pub fn brute_force_mwpm(g: &Graph, w: &[i64]) -> Result<Option<(i64, Vec<EdgeId>)>, OracleError> {
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(OracleError::TooLarge(n));
    }
    if n % 2 == 1 {
        return Ok(None);
    }
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut memo: Vec<Option<Option<i64>>> = vec![None; 1usize << n];
    fn best(
        g: &Graph,
        w: &[i64],
        full: u32,
        mask: u32,
        memo: &mut Vec<Option<Option<i64>>>,
    ) -> Option<i64> {
        if mask == full {
            return Some(0);
        }
        if let Some(r) = memo[mask as usize] {
            return r;
        }
        let u = (!mask).trailing_zeros() as usize;
        let mut out: Option<i64> = None;
        for &e in g.adj(u) {
            if g.is_dummy_edge(e) {
                continue;
            }
            let v = g.edge(e).other(u);
            if mask & (1 << v) != 0 {
                continue;
            }
            if let Some(rest) = best(g, w, full, mask | (1 << u) | (1 << v), memo) {
                let cand = rest + w[e];
                if out.map_or(true, |o| cand > o) {
                    out = Some(cand);
                }
            }
        }
        memo[mask as usize] = Some(out);
        out
    }
    let total = match best(g, w, full, 0, &mut memo) {
        None => return Ok(None),
        Some(x) => x,
    };
    // walk the memo to recover a witness
    let mut mask = 0u32;
    let mut left = total;
    let mut picked = Vec::new();
    while mask != full {
        let u = (!mask).trailing_zeros() as usize;
        let mut found = false;
        for &e in g.adj(u) {
            if g.is_dummy_edge(e) {
                continue;
            }
            let v = g.edge(e).other(u);
            if mask & (1 << v) != 0 {
                continue;
            }
            let next = mask | (1 << u) | (1 << v);
            if best(g, w, full, next, &mut memo) == Some(left - w[e]) {
                picked.push(e);
                left -= w[e];
                mask = next;
                found = true;
                break;
            }
        }
        assert!(found, "oracle witness walk lost the optimum");
    }
    picked.sort_unstable();
    Ok(Some((total, picked)))
}

/// Input-weight optimum, the usual entry point for tests.
pub fn oracle_weight(g: &Graph) -> Result<Option<i64>, OracleError> {
    let w: Vec<i64> = g.edges().iter().map(|e| e.w).collect();
    Ok(brute_force_mwpm(g, &w)?.map(|(x, _)| x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Exact complementary slackness.
    Cs,
    /// Relaxed complementary slackness.
    Rcs,
    /// Inherited and current blossoms side by side.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertBlossom {
    pub vertices: Vec<VertexId>,
    pub base: VertexId,
    pub z: i64,
    pub parent: Option<usize>,
    /// Inherited from the previous scale.
    pub old: bool,
    /// Edges of the blossom's own cycle.
    pub cycle: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertEdge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub w: i64,
}

/// Self-contained snapshot of matching, blossoms and duals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub mode: Mode,
    /// Which weight function `edges[].w` holds.
    pub weights: String,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<CertEdge>,
    /// Indexed by vertex id; entries of inactive vertices are ignored.
    pub y: Vec<i64>,
    pub blossoms: Vec<CertBlossom>,
    pub matching: Vec<EdgeId>,
}

impl Certificate {
    pub fn from_state(st: &State, mode: Mode) -> Certificate {
        let vertices: Vec<VertexId> = st.g.active_vertices().collect();
        let edges = (0..st.g.edge_capacity())
            .filter(|&e| st.g.edge_active(e))
            .map(|e| {
                let ed = st.g.edge(e);
                CertEdge {
                    id: e,
                    u: ed.u,
                    v: ed.v,
                    w: st.w[e],
                }
            })
            .collect();
        let mut blossoms = Vec::new();
        let mut idx = vec![usize::MAX; st.forest.capacity()];
        let mut order: Vec<usize> = Vec::new();
        let mut stack = st.forest.root_blossoms();
        while let Some(b) = stack.pop() {
            order.push(b);
            for &c in st.forest.children(b) {
                if st.forest.is_blossom(c) {
                    stack.push(c);
                }
            }
        }
        for b in order {
            idx[b] = blossoms.len();
            let mut vs = st.forest.leaves(b);
            vs.sort_unstable();
            blossoms.push(CertBlossom {
                vertices: vs,
                base: st.forest.base(b),
                z: st.forest.z(b),
                parent: st.forest.parent(b).map(|p| idx[p]),
                old: false,
                cycle: st.forest.cycle(b).iter().map(|c| c.e).collect(),
            });
        }
        let shift = blossoms.len();
        let mut oidx = vec![usize::MAX; st.old.len()];
        for id in 0..st.old.len() {
            if st.old.nodes[id].alive {
                oidx[id] = blossoms.len();
                let nd = &st.old.nodes[id];
                blossoms.push(CertBlossom {
                    vertices: nd.members.clone(),
                    base: usize::MAX,
                    z: nd.z,
                    parent: None,
                    old: true,
                    cycle: nd.cycle_edges.clone(),
                });
            }
        }
        for id in 0..st.old.len() {
            if oidx[id] != usize::MAX {
                blossoms[oidx[id]].parent = st.old.alive_parent(id).map(|p| oidx[p]);
            }
        }
        debug_assert!(blossoms[..shift].iter().all(|b| !b.old));
        Certificate {
            mode,
            weights: format!("scale {} in force", st.scales.current_scale),
            vertices,
            edges,
            y: st.y.clone(),
            blossoms,
            matching: st.mate.edges(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate, serde_json::Error> {
        serde_json::from_str(s)
    }

    fn edge(&self, id: EdgeId) -> Option<&CertEdge> {
        match self.edges.binary_search_by_key(&id, |e| e.id) {
            Ok(i) => Some(&self.edges[i]),
            Err(_) => None,
        }
    }

    fn members(&self) -> Vec<Vec<usize>> {
        let cap = self.y.len();
        let mut out = vec![Vec::new(); cap];
        for (i, b) in self.blossoms.iter().enumerate() {
            for &v in &b.vertices {
                if v < cap {
                    out[v].push(i);
                }
            }
        }
        out
    }

    fn yz_with(&self, members: &[Vec<usize>], u: VertexId, v: VertexId) -> i64 {
        let mut s = self.y[u] + self.y[v];
        for &b in &members[u] {
            if self.blossoms[b].vertices.binary_search(&v).is_ok() {
                s += self.blossoms[b].z;
            }
        }
        s
    }

    pub fn yz(&self, u: VertexId, v: VertexId) -> i64 {
        self.yz_with(&self.members(), u, v)
    }

    /// Edge ids of E_B: the cycle edges of `b` and its descendants.
    pub fn blossom_edges(&self, b: usize) -> Vec<EdgeId> {
        let mut out = self.blossoms[b].cycle.clone();
        for (i, c) in self.blossoms.iter().enumerate() {
            if i != b && c.old == self.blossoms[b].old && self.nested(i, b) {
                out.extend_from_slice(&c.cycle);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether blossom `i` lies inside blossom `j` (following parents).
    fn nested(&self, i: usize, j: usize) -> bool {
        let mut p = self.blossoms[i].parent;
        while let Some(x) = p {
            if x == j {
                return true;
            }
            p = self.blossoms[x].parent;
        }
        false
    }

    pub fn dual_objective(&self) -> i64 {
        let ys: i64 = self.vertices.iter().map(|&v| self.y[v]).sum();
        let zs: i64 = self
            .blossoms
            .iter()
            .map(|b| b.z * (b.vertices.len() / 2) as i64)
            .sum();
        ys + zs
    }

    pub fn matching_weight(&self) -> i64 {
        self.matching
            .iter()
            .map(|&e| self.edge(e).map_or(0, |x| x.w))
            .sum()
    }

    pub fn is_perfect(&self) -> bool {
        let mut hit = vec![0u8; self.y.len()];
        for &e in &self.matching {
            if let Some(x) = self.edge(e) {
                hit[x.u] += 1;
                hit[x.v] += 1;
            }
        }
        self.vertices.iter().all(|&v| hit[v] == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: String,
    pub edge: Option<EdgeId>,
    pub blossom: Option<usize>,
    pub detail: String,
}

fn viol(clause: &str, edge: Option<EdgeId>, blossom: Option<usize>, detail: String) -> Violation {
    Violation {
        clause: clause.to_string(),
        edge,
        blossom,
        detail,
    }
}

/// Every clause of the property selected by `c.mode`; an empty list means
/// the certificate is clean.
pub fn check_invariants(c: &Certificate) -> Vec<Violation> {
    let mut c = c.clone();
    c.edges.sort_by_key(|e| e.id);
    let c = &c;
    let mut out = Vec::new();
    let cap = c.y.len();
    for &v in &c.vertices {
        if v >= cap {
            out.push(viol("structure", None, None, format!("vertex {} has no y entry", v)));
            return out;
        }
    }
    for e in &c.edges {
        if e.u >= cap || e.v >= cap || e.u == e.v {
            out.push(viol("structure", Some(e.id), None, "bad endpoints".into()));
            return out;
        }
        if e.w % 2 != 0 {
            out.push(viol("even weights", Some(e.id), None, format!("w = {}", e.w)));
        }
    }

    // matching
    let mut mate = vec![None; cap];
    let mut in_m = std::collections::HashSet::new();
    for &id in &c.matching {
        match c.edge(id) {
            None => out.push(viol("matching", Some(id), None, "unknown edge".into())),
            Some(e) => {
                for x in [e.u, e.v] {
                    if mate[x].is_some() {
                        out.push(viol("matching", Some(id), None, format!("vertex {} matched twice", x)));
                    }
                    mate[x] = Some(id);
                }
                in_m.insert(id);
            }
        }
    }

    // granularity
    for (i, b) in c.blossoms.iter().enumerate() {
        if b.z < 0 || b.z % 2 != 0 {
            out.push(viol("granularity", None, Some(i), format!("z = {}", b.z)));
        }
        if b.vertices.len() % 2 == 0 {
            out.push(viol("structure", None, Some(i), format!("even size {}", b.vertices.len())));
        }
    }

    // laminarity over old and new together
    let sets: Vec<std::collections::HashSet<VertexId>> = c
        .blossoms
        .iter()
        .map(|b| b.vertices.iter().copied().collect())
        .collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let common = sets[i].intersection(&sets[j]).count();
            if common == 0 {
                continue;
            }
            let nested = common == sets[i].len() || common == sets[j].len();
            if !nested {
                out.push(viol("laminarity", None, Some(i), format!("crosses blossom {}", j)));
            } else if c.mode == Mode::Mixed {
                let (small, big) = if sets[i].len() <= sets[j].len() { (i, j) } else { (j, i) };
                if c.blossoms[small].old && !c.blossoms[big].old {
                    out.push(viol(
                        "old inside new",
                        None,
                        Some(small),
                        format!("inherited blossom inside current blossom {}", big),
                    ));
                }
            }
        }
    }

    // active blossoms
    let mut tight_set = std::collections::HashSet::new();
    for (i, b) in c.blossoms.iter().enumerate() {
        if b.old {
            if c.mode == Mode::Mixed {
                for &id in &c.matching {
                    if let Some(e) = c.edge(id) {
                        let a = sets[i].contains(&e.u);
                        let z = sets[i].contains(&e.v);
                        if a != z {
                            out.push(viol(
                                "matched edge leaves inherited blossom",
                                Some(id),
                                Some(i),
                                String::new(),
                            ));
                        }
                    }
                }
            }
            continue;
        }
        let root = b.parent.is_none();
        if root && b.z <= 0 {
            out.push(viol("active blossoms", None, Some(i), "root blossom with z = 0".into()));
        }
        let eb = c.blossom_edges(i);
        tight_set.extend(eb.iter().copied());
        if c.mode != Mode::Mixed || b.z > 0 {
            let k = eb.iter().filter(|e| in_m.contains(e)).count();
            if k != b.vertices.len() / 2 {
                out.push(viol(
                    "active blossoms",
                    None,
                    Some(i),
                    format!("{} matched edges inside, size {}", k, b.vertices.len()),
                ));
            }
        }
    }

    // domination and tightness
    let members = c.members();
    let lower = if c.mode == Mode::Rcs { 2 } else { 0 };
    for e in &c.edges {
        let yz = c.yz_with(&members, e.u, e.v);
        if yz < e.w - lower {
            let clause = if lower == 0 { "domination" } else { "near domination" };
            out.push(viol(clause, Some(e.id), None, format!("yz = {}, w = {}", yz, e.w)));
        }
        if in_m.contains(&e.id) || tight_set.contains(&e.id) {
            let bad = match c.mode {
                Mode::Rcs => yz > e.w,
                _ => yz != e.w,
            };
            if bad {
                let clause = if c.mode == Mode::Rcs { "near tightness" } else { "tightness" };
                out.push(viol(clause, Some(e.id), None, format!("yz = {}, w = {}", yz, e.w)));
            }
        }
    }
    out
}

pub fn check_state(st: &State, mode: Mode) -> Vec<Violation> {
    check_invariants(&Certificate::from_state(st, mode))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub matching_weight: i64,
    pub dual_objective: i64,
    /// Optimum under the certificate's weights when the oracle ran.
    pub optimum: Option<i64>,
    pub ok: bool,
    pub detail: String,
}

/// Optimality bounds implied by the certificate. Exact mode demands
/// w(M) = yz(V); relaxed mode demands w(M) >= w(M*) - n against the
/// oracle when `g` is small enough, and otherwise the two-sided bound
/// yz(V) <= w(M) <= yz(V) + n.
pub fn check_optimality_gap(c: &Certificate, g: Option<&Graph>) -> GapReport {
    let mw = c.matching_weight();
    let dual = c.dual_objective();
    let n = c.vertices.len() as i64;
    if !c.is_perfect() {
        return GapReport {
            matching_weight: mw,
            dual_objective: dual,
            optimum: None,
            ok: false,
            detail: "matching is not perfect".into(),
        };
    }
    match c.mode {
        Mode::Cs | Mode::Mixed => GapReport {
            matching_weight: mw,
            dual_objective: dual,
            optimum: None,
            ok: mw == dual,
            detail: format!("w(M) - yz(V) = {}", mw - dual),
        },
        Mode::Rcs => {
            let mut optimum = None;
            if let Some(g) = g {
                if g.n() <= ORACLE_MAX_N {
                    let mut w = vec![0i64; g.edge_capacity()];
                    for e in &c.edges {
                        if e.id < w.len() {
                            w[e.id] = e.w;
                        }
                    }
                    optimum = brute_force_mwpm(g, &w).ok().flatten().map(|x| x.0);
                }
            }
            match optimum {
                Some(opt) => GapReport {
                    matching_weight: mw,
                    dual_objective: dual,
                    optimum,
                    ok: mw >= opt - n,
                    detail: format!("w(M*) - w(M) = {}", opt - mw),
                },
                None => GapReport {
                    matching_weight: mw,
                    dual_objective: dual,
                    optimum: None,
                    ok: dual <= mw && mw <= dual + n,
                    detail: format!("w(M) - yz(V) = {}", mw - dual),
                },
            }
        }
    }
}

/// Whether `m` is a perfect matching of `g`'s original vertices built from
/// original edges only.
pub fn is_perfect_original(g: &Graph, m: &Matching) -> bool {
    (0..g.n()).all(|v| match m.mate_edge(v) {
        Some(e) => !g.is_dummy_edge(e) && m.mate_edge(g.edge(e).other(v)) == Some(e),
        None => false,
    })
}
