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

//! Graph, matching and weight-scale representation.
//!
//! Vertices are dense ids `0..n`. A graph can reserve one dummy pendant slot
//! per original vertex: the dummy of `u` is vertex `n + u` and its only edge
//! has id `m + u`. Slots are switched on and off through the dummy registry,
//! so ids stay stable for the whole run.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: i64,
}

impl Edge {
    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            debug_assert_eq!(x, self.v);
            self.u
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range (n = {n})")]
    OutOfRange { vertex: usize, n: usize },
    #[error("negative weight {0}")]
    NegativeWeight(i64),
}

/// Dummy pendants currently attached, with the scale that created them.
#[derive(Clone, Debug, Default)]
pub struct DummyRegistry {
    active: Vec<bool>,
    created: Vec<usize>,
}

impl DummyRegistry {
    pub fn is_active(&self, owner: VertexId) -> bool {
        self.active.get(owner).copied().unwrap_or(false)
    }

    pub fn created_at(&self, owner: VertexId) -> Option<usize> {
        if self.is_active(owner) {
            Some(self.created[owner])
        } else {
            None
        }
    }

    pub fn count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    m: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<EdgeId>>,
    dummies: DummyRegistry,
    reserved: bool,
}

impl Graph {
    /// Builds a graph, collapsing parallel edges to the heaviest copy.
    pub fn from_edges<I>(n: usize, list: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        for (u, v, w) in list {
            if u >= n {
                return Err(GraphError::OutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::OutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if w < 0 {
                return Err(GraphError::NegativeWeight(w));
            }
            let key = (u.min(v), u.max(v));
            match index.get(&key) {
                Some(&e) => {
                    if edges[e].w < w {
                        edges[e].w = w;
                    }
                }
                None => {
                    index.insert(key, edges.len());
                    edges.push(Edge { u: key.0, v: key.1, w });
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (e, ed) in edges.iter().enumerate() {
            adj[ed.u].push(e);
            adj[ed.v].push(e);
        }
        Ok(Graph {
            n,
            m: edges.len(),
            edges,
            adj,
            dummies: DummyRegistry::default(),
            reserved: false,
        })
    }

    /// Number of original vertices.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of original edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_capacity(&self) -> usize {
        if self.reserved {
            2 * self.n
        } else {
            self.n
        }
    }

    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    /// The original edges, without dummy slots.
    pub fn edges(&self) -> &[Edge] {
        &self.edges[..self.m]
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    /// Incident edge ids, including inactive dummy slots; filter with
    /// [`Graph::edge_active`].
    #[inline]
    pub fn adj(&self, v: VertexId) -> &[EdgeId] {
        &self.adj[v]
    }

    pub fn max_weight(&self) -> i64 {
        self.edges().iter().map(|e| e.w).max().unwrap_or(0)
    }

    pub fn reserve_dummies(&mut self) {
        if self.reserved {
            return;
        }
        self.reserved = true;
        for u in 0..self.n {
            let d = self.n + u;
            let e = self.edges.len();
            self.edges.push(Edge { u, v: d, w: 0 });
            self.adj[u].push(e);
            self.adj.push(vec![e]);
        }
        self.dummies.active = vec![false; self.n];
        self.dummies.created = vec![0; self.n];
    }

    #[inline]
    pub fn is_dummy(&self, v: VertexId) -> bool {
        v >= self.n
    }

    #[inline]
    pub fn is_dummy_edge(&self, e: EdgeId) -> bool {
        e >= self.m
    }

    pub fn dummy_of(&self, owner: VertexId) -> VertexId {
        self.n + owner
    }

    pub fn dummy_edge(&self, owner: VertexId) -> EdgeId {
        self.m + owner
    }

    /// The original vertex a dummy hangs from.
    pub fn dummy_owner(&self, d: VertexId) -> VertexId {
        d - self.n
    }

    #[inline]
    pub fn vertex_active(&self, v: VertexId) -> bool {
        v < self.n || self.dummies.is_active(v - self.n)
    }

    #[inline]
    pub fn edge_active(&self, e: EdgeId) -> bool {
        e < self.m || self.dummies.is_active(e - self.m)
    }

    pub fn activate_dummy(&mut self, owner: VertexId, scale: usize) -> (VertexId, EdgeId) {
        assert!(self.reserved, "dummy slots not reserved");
        self.dummies.active[owner] = true;
        self.dummies.created[owner] = scale;
        (self.dummy_of(owner), self.dummy_edge(owner))
    }

    pub fn deactivate_dummy(&mut self, owner: VertexId) {
        self.dummies.active[owner] = false;
    }

    pub fn dummies(&self) -> &DummyRegistry {
        &self.dummies
    }

    pub fn active_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_capacity()).filter(move |&v| self.vertex_active(v))
    }
}

/// Parses the `p edge` / `e u v w` text format. Vertices are 1-indexed in
/// the file.
pub fn load_dimacs(text: &str, allow_odd: bool) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut list = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = s.split_whitespace().collect();
        let err = |msg: &str| GraphError::Parse { line, msg: msg.to_string() };
        match parts[0] {
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate header"));
                }
                if parts.len() != 4 || parts[1] != "edge" {
                    return Err(err("malformed header, expected `p edge <n> <m>`"));
                }
                let n: usize = parts[2].parse().map_err(|_| err("bad vertex count"))?;
                let m: usize = parts[3].parse().map_err(|_| err("bad edge count"))?;
                if n % 2 == 1 && !allow_odd {
                    return Err(err("odd vertex count has no perfect matching"));
                }
                header = Some((n, m));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| err("edge line before header"))?;
                if parts.len() != 4 {
                    return Err(err("malformed edge line, expected `e <u> <v> <w>`"));
                }
                let u: i64 = parts[1].parse().map_err(|_| err("bad endpoint"))?;
                let v: i64 = parts[2].parse().map_err(|_| err("bad endpoint"))?;
                let w: i64 = parts[3].parse().map_err(|_| err("bad weight"))?;
                for x in [u, v] {
                    if x < 1 || x as usize > n {
                        return Err(err(&format!("vertex {} out of range", x)));
                    }
                }
                if w < 0 {
                    return Err(err("negative weight"));
                }
                if u == v {
                    return Err(err("self-loop"));
                }
                list.push((u as usize - 1, v as usize - 1, w));
            }
            _ => return Err(err("unknown line type")),
        }
    }
    let (n, _) = header.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    Graph::from_edges(n, list)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p edge {} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    mate: Vec<Option<EdgeId>>,
}

impl Matching {
    pub fn new(vertices: usize) -> Matching {
        Matching {
            mate: vec![None; vertices],
        }
    }

    pub fn from_mates(mate: Vec<Option<EdgeId>>) -> Matching {
        Matching { mate }
    }

    pub fn from_edges(g: &Graph, list: &[EdgeId]) -> Matching {
        let mut m = Matching::new(g.vertex_capacity());
        for &e in list {
            m.set(g, e);
        }
        m
    }

    #[inline]
    pub fn mate_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.mate[v]
    }

    pub fn partner(&self, g: &Graph, v: VertexId) -> Option<VertexId> {
        self.mate[v].map(|e| g.edge(e).other(v))
    }

    pub fn set(&mut self, g: &Graph, e: EdgeId) {
        let ed = g.edge(e);
        self.mate[ed.u] = Some(e);
        self.mate[ed.v] = Some(e);
    }

    pub fn unset_vertex(&mut self, v: VertexId) {
        self.mate[v] = None;
    }

    pub fn mates(&self) -> &[Option<EdgeId>] {
        &self.mate
    }

    pub fn mates_mut(&mut self) -> &mut [Option<EdgeId>] {
        &mut self.mate
    }

    pub fn len_vertices(&self) -> usize {
        self.mate.len()
    }

    /// Matched edge ids in increasing order.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.mate.iter().flatten().copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_matched(&self, v: VertexId) -> bool {
        self.mate[v].is_some()
    }

    pub fn contains(&self, g: &Graph, e: EdgeId) -> bool {
        self.mate[g.edge(e).u] == Some(e)
    }

    /// Checks vertex-disjointness and that both endpoints agree.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        for (v, m) in self.mate.iter().enumerate() {
            if let Some(e) = *m {
                let ed = g.edge(e);
                if ed.u != v && ed.v != v {
                    return Err(format!("vertex {} points to non-incident edge {}", v, e));
                }
                let o = ed.other(v);
                if self.mate[o] != Some(e) {
                    return Err(format!("edge {} matched at {} but not at {}", e, v, o));
                }
            }
        }
        Ok(())
    }

    pub fn is_perfect_on(&self, g: &Graph) -> bool {
        g.active_vertices().all(|v| self.mate[v].is_some())
    }
}

/// Sum of `w` over matched edges.
pub fn matching_weight(m: &Matching, w: &[i64]) -> i64 {
    m.edges().iter().map(|&e| w[e]).sum()
}

/// Sum of the input weights over matched original edges.
pub fn input_weight(g: &Graph, m: &Matching) -> i64 {
    m.edges()
        .iter()
        .filter(|&&e| !g.is_dummy_edge(e))
        .map(|&e| g.edge(e).w)
        .sum()
}

#[derive(Clone, Debug)]
pub struct WeightScales {
    pub multiplier: i64,
    /// Extended weight per edge slot (dummy slots carry 0).
    pub wbar: Vec<i64>,
    pub scale_count: u32,
    pub current_scale: u32,
    /// Weight in force for the current scale, before reweighting offsets.
    pub w: Vec<i64>,
    pub w_prev: Vec<i64>,
}

/// Number of scales for a largest extended weight `top`. This is
/// `ceil(log2(top))`, at least 1.
pub fn scale_count_for(top: i64) -> u32 {
    if top <= 2 {
        return 1;
    }
    64 - ((top - 1) as u64).leading_zeros()
}

pub fn init_scales(g: &Graph) -> WeightScales {
    let multiplier = g.n() as i64 / 2 + 1;
    let mut wbar = vec![0i64; g.edge_capacity()];
    for (e, ed) in g.edges().iter().enumerate() {
        wbar[e] = multiplier * ed.w;
    }
    let top = multiplier * g.max_weight();
    let scale_count = scale_count_for(top);
    WeightScales {
        multiplier,
        w: vec![0; wbar.len()],
        w_prev: vec![0; wbar.len()],
        wbar,
        scale_count,
        current_scale: 0,
    }
}

impl WeightScales {
    /// Digit of `wbar[e]` used at scale `i` (1-based, most significant
    /// first). The leading digit absorbs everything above the remaining
    /// `scale_count - 1` bits, so it is 2 exactly when `wbar[e]` equals
    /// `2^scale_count`; all other digits are bits.
    pub fn digit(&self, e: EdgeId, i: u32) -> i64 {
        let shift = self.scale_count - i;
        let x = self.wbar[e] >> shift;
        if i == 1 {
            x
        } else {
            x & 1
        }
    }

    /// Advances the plain weight recurrence `w = 2(w' + digit)`.
    pub fn advance(&mut self) {
        self.current_scale += 1;
        let i = self.current_scale;
        std::mem::swap(&mut self.w, &mut self.w_prev);
        for e in 0..self.wbar.len() {
            self.w[e] = 2 * (self.w_prev[e] + self.digit(e, i));
        }
    }

    /// Recombines the digits; equals `wbar[e]` for every edge.
    pub fn reconstruct(&self, e: EdgeId) -> i64 {
        let mut x = 0;
        for i in 1..=self.scale_count {
            x = 2 * x + self.digit(e, i);
        }
        x
    }
}
