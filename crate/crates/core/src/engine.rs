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

//! Event-driven Edmonds search with lazily reconstructed duals.
//!
//! Time counts unit dual adjustments. Duals are never touched while the
//! search runs; every vertex and root blossom carries timestamps from
//! which its current value is recomputed, and the values are written back
//! once the search halts.
//!
//! Only edges with both endpoints inside the scope exist for the search.
//! Inherited blossoms holding such edges must all contain the whole scope,
//! so they add the same constant `old_z` to every in-scope edge.

use std::collections::HashMap;

use crate::blossom::CycleEdge;
use crate::eligibility::{slack_star, Criterion};
use crate::error::{violation, SolveError, SolveResult};
use crate::graph::{EdgeId, VertexId};
use crate::queue::{EventQueue, QueueKind};
use crate::sfm::SplitFindmin;
use crate::state::State;
use crate::uf::ForestUnionFind;

const NIL: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Label {
    #[default]
    Free,
    Inner,
    Outer,
}

/// Tree edge into a node: `(edge, vertex inside the node, vertex in the
/// parent node)`.
pub type TreeLink = (EdgeId, VertexId, VertexId);

/// Timestamp bookkeeping of one node. `delta` counts adjustments its
/// vertices took as inner before the current phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stamps {
    pub label: Label,
    pub t_root: i64,
    pub t_in: i64,
    pub t_out: i64,
    pub delta: i64,
}

impl Stamps {
    pub fn become_inner(&mut self, t: i64) {
        self.label = Label::Inner;
        self.t_in = t;
    }

    pub fn become_outer(&mut self, t: i64) {
        if self.label == Label::Inner {
            self.delta += t - self.t_in;
        }
        self.label = Label::Outer;
        self.t_out = t;
    }

    /// Stamps of a child split off an inner blossom dissolving at `t`.
    pub fn child_of(parent: &Stamps, t: i64) -> Stamps {
        Stamps {
            label: Label::Free,
            t_root: t,
            t_in: 0,
            t_out: 0,
            delta: parent.delta + (t - parent.t_in),
        }
    }

    /// Change of y at time `t` for a vertex whose list node has these stamps.
    pub fn y_offset(&self, t: i64) -> i64 {
        match self.label {
            Label::Inner => self.delta + (t - self.t_in),
            Label::Outer => self.delta - (t - self.t_out),
            Label::Free => self.delta,
        }
    }

    /// Change of z at time `t` for a root blossom with these stamps.
    pub fn z_offset(&self, t: i64) -> i64 {
        match self.label {
            Label::Inner => -2 * (t - self.t_in),
            Label::Outer => 2 * (t - self.t_out),
            Label::Free => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Halt {
    Augmented,
    Budget,
    Empty,
}

#[derive(Clone, Debug)]
pub struct SearchParams<'a> {
    pub roots: &'a [VertexId],
    pub criterion: Criterion,
    /// `None` means every active vertex.
    pub scope: Option<&'a [VertexId]>,
    pub old_z: i64,
    pub budget: Option<i64>,
    /// Whether events due exactly at the budget are still processed.
    pub process_at_budget: bool,
    pub queue: QueueKind,
    /// Keep adjusting up to the budget once no events remain.
    pub idle_to_budget: bool,
    /// After an augmentation, look for further paths at the same duals.
    pub exhaust: bool,
    /// Run the eager per-adjustment dual oracle alongside.
    pub shadow: bool,
}

impl<'a> SearchParams<'a> {
    pub fn new(roots: &'a [VertexId], criterion: Criterion) -> SearchParams<'a> {
        SearchParams {
            roots,
            criterion,
            scope: None,
            old_z: 0,
            budget: None,
            process_at_budget: true,
            queue: QueueKind::Ordered,
            idle_to_budget: false,
            exhaust: false,
            shadow: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    pub halt: Option<Halt>,
    pub adjustments: i64,
    pub augmentations: usize,
    pub events: usize,
    pub blossoms: usize,
    pub dissolves: usize,
    pub shadow_checks: usize,
}

impl SearchOutcome {
    pub fn augmented(&self) -> bool {
        self.augmentations > 0
    }
}

#[derive(Clone, Copy, Debug)]
enum Ev {
    Dissolve(usize, u32),
    Grow(usize, u32),
    GrowMate(EdgeId, VertexId),
    Blossom(EdgeId),
}

impl Ev {
    fn class(&self) -> usize {
        match self {
            Ev::Dissolve(..) => 0,
            Ev::Grow(..) | Ev::GrowMate(..) => 1,
            Ev::Blossom(..) => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Node {
    st: Stamps,
    gen: u32,
    dgen: u32,
    tparent: Option<TreeLink>,
    tree: usize,
    lo: usize,
    hi: usize,
    mark: (u32, u8),
}

/// Reusable workspace; per-run setup touches only the scope.
#[derive(Debug, Default)]
pub struct Engine {
    li: Vec<usize>,
    verts: Vec<VertexId>,
    order: Vec<usize>,
    list_node: Vec<usize>,
    y0: Vec<i64>,
    nodes: Vec<Node>,
    touched: Vec<usize>,
    vmark: Vec<u32>,
    stamp: u32,
    pub trace: Option<Vec<String>>,
}

impl Engine {
    pub fn new() -> Engine {
        Engine::default()
    }

    pub fn with_trace() -> Engine {
        Engine {
            trace: Some(Vec::new()),
            ..Engine::default()
        }
    }

    pub fn take_trace(&mut self) -> Vec<String> {
        match self.trace.as_mut() {
            Some(t) => std::mem::take(t),
            None => Vec::new(),
        }
    }

    /// Runs one search; with `exhaust`, repeats zero-budget searches from
    /// the still-free roots after the first augmentation.
    pub fn run(&mut self, st: &mut State, p: &SearchParams) -> SolveResult<SearchOutcome> {
        let mut out = self.run_once(st, p)?;
        if p.exhaust && out.augmented() {
            loop {
                let left: Vec<VertexId> = p
                    .roots
                    .iter()
                    .copied()
                    .filter(|&r| !st.mate.is_matched(r))
                    .collect();
                if left.is_empty() {
                    break;
                }
                let mut q = p.clone();
                q.roots = &left;
                q.budget = Some(0);
                q.process_at_budget = true;
                q.idle_to_budget = false;
                q.queue = QueueKind::Bucket;
                let more = self.run_once(st, &q)?;
                out.events += more.events;
                out.blossoms += more.blossoms;
                out.dissolves += more.dissolves;
                out.shadow_checks += more.shadow_checks;
                if !more.augmented() {
                    break;
                }
                out.augmentations += more.augmentations;
            }
        }
        Ok(out)
    }

    fn run_once(&mut self, st: &mut State, p: &SearchParams) -> SolveResult<SearchOutcome> {
        let nv = st.g.vertex_capacity();
        if self.li.len() < nv {
            self.li.resize(nv, NIL);
        }
        self.verts.clear();
        match p.scope {
            Some(s) => self.verts.extend(s.iter().copied().filter(|&v| st.g.vertex_active(v))),
            None => self.verts.extend(st.g.active_vertices()),
        }
        for (i, &v) in self.verts.iter().enumerate() {
            self.li[v] = i;
        }
        st.forest.set_defer_free(true);
        let res = {
            let mut s = Search::new(self, st, p);
            s.go()
        };
        st.forest.set_defer_free(false);
        for &b in &self.touched {
            if b < self.nodes.len() {
                self.nodes[b] = Node::default();
            }
        }
        self.touched.clear();
        for &v in &self.verts {
            self.li[v] = NIL;
        }
        res
    }
}

struct Search<'e, 's, 'p> {
    ws: &'e mut Engine,
    st: &'s mut State,
    p: &'p SearchParams<'p>,
    sfm: SplitFindmin,
    uf: ForestUnionFind,
    q: EventQueue<Ev>,
    t: i64,
    trees: usize,
    halt: Option<Halt>,
    out: SearchOutcome,
    ye: Vec<i64>,
    ze: HashMap<usize, i64>,
}

impl<'e, 's, 'p> Search<'e, 's, 'p> {
    fn new(ws: &'e mut Engine, st: &'s mut State, p: &'p SearchParams<'p>) -> Self {
        let k = ws.verts.len();
        let q = match p.queue {
            QueueKind::Bucket => EventQueue::bucket(p.budget.expect("bucket queue needs a budget")),
            QueueKind::Ordered => EventQueue::ordered(),
        };
        Search {
            ws,
            st,
            p,
            sfm: SplitFindmin::new(&[]),
            uf: ForestUnionFind::new(k),
            q,
            t: 0,
            trees: 0,
            halt: None,
            out: SearchOutcome::default(),
            ye: Vec::new(),
            ze: HashMap::new(),
        }
    }

    // ---- node bookkeeping ----

    fn node(&self, b: usize) -> Node {
        self.ws.nodes.get(b).copied().unwrap_or_default()
    }

    fn node_mut(&mut self, b: usize) -> &mut Node {
        if self.ws.nodes.len() <= b {
            self.ws.nodes.resize(b + 1, Node::default());
        }
        self.ws.touched.push(b);
        &mut self.ws.nodes[b]
    }

    fn label(&self, b: usize) -> Label {
        self.node(b).st.label
    }

    #[inline]
    fn l(&self, v: VertexId) -> usize {
        let x = self.ws.li[v];
        debug_assert!(x != NIL, "vertex {} outside the scope", v);
        x
    }

    #[inline]
    fn in_scope(&self, v: VertexId) -> bool {
        self.ws.li.get(v).map_or(false, |&x| x != NIL)
    }

    fn root(&self, v: VertexId) -> usize {
        self.st.forest.root_of(v)
    }

    fn list_node_of(&self, v: VertexId) -> usize {
        let s = self.sfm.list(self.l(v));
        self.ws.list_node[s]
    }

    fn y_of(&self, v: VertexId) -> i64 {
        let l = self.l(v);
        let b = self.list_node_of(v);
        self.ws.y0[l] + self.node(b).st.y_offset(self.t)
    }

    fn z_of(&self, b: usize) -> i64 {
        let z0 = self.st.forest.z(b);
        if self.st.forest.parent(b).is_some() {
            return z0;
        }
        z0 + self.node(b).st.z_offset(self.t)
    }

    /// Slack of an edge joining two different root nodes.
    fn slack(&self, e: EdgeId) -> i64 {
        let ed = *self.st.g.edge(e);
        self.y_of(ed.u) + self.y_of(ed.v) + self.p.old_z - self.st.w[e]
    }

    fn star(&self, e: EdgeId, matched: bool) -> SolveResult<i64> {
        let s = self.slack(e);
        if matched && (s > 0 || (self.p.criterion == Criterion::One && s != 0)) {
            return violation(format!(
                "matched edge {} has slack {} at t={}",
                e, s, self.t
            ));
        }
        match slack_star(s, self.p.criterion, matched) {
            Ok(x) if x >= 0 => Ok(x),
            Ok(x) => violation(format!("edge {} has slack* {} at t={}", e, x, self.t)),
            Err(v) => violation(format!(
                "edge {} has slack {} under {:?} at t={}",
                e, v.slack, v.criterion, self.t
            )),
        }
    }

    fn half(&self, e: EdgeId, x: i64) -> SolveResult<i64> {
        if x % 2 != 0 {
            return violation(format!(
                "odd slack* {} on edge {} between search nodes at t={}",
                x, e, self.t
            ));
        }
        Ok(x / 2)
    }

    fn log(&mut self, line: String) {
        if let Some(tr) = self.ws.trace.as_mut() {
            tr.push(format!("t={} {}", self.t, line));
        }
    }

    fn push(&mut self, time: i64, ev: Ev) {
        debug_assert!(time >= self.t);
        self.q.push(time, ev.class(), ev);
    }

    fn leaves(&self, b: usize) -> Vec<VertexId> {
        self.st.forest.leaves(b)
    }

    fn next_stamp(&mut self) -> u32 {
        self.ws.stamp = self.ws.stamp.wrapping_add(1);
        if self.ws.stamp == 0 {
            for m in self.ws.vmark.iter_mut() {
                *m = 0;
            }
            for n in self.ws.nodes.iter_mut() {
                n.mark = (0, 0);
            }
            self.ws.stamp = 1;
        }
        self.ws.stamp
    }

    // ---- setup ----

    fn layout(&mut self, b: usize, order: &mut Vec<usize>) {
        let lo = order.len();
        if self.st.forest.is_blossom(b) {
            let kids = self.st.forest.children(b).to_vec();
            for c in kids {
                self.layout(c, order);
            }
        } else {
            order.push(self.l(b));
        }
        let hi = order.len();
        let n = self.node_mut(b);
        n.lo = lo;
        n.hi = hi;
    }

    fn setup(&mut self) -> SolveResult<()> {
        let k = self.ws.verts.len();
        self.ws.y0.clear();
        for i in 0..k {
            let v = self.ws.verts[i];
            self.ws.y0.push(self.st.y[v]);
        }
        if self.ws.vmark.len() < k {
            self.ws.vmark.resize(k, 0);
        }
        let mut roots = Vec::new();
        let s = self.next_stamp();
        for i in 0..k {
            let r = self.root(self.ws.verts[i]);
            if self.node(r).mark.0 != s {
                self.node_mut(r).mark = (s, 0);
                roots.push(r);
            }
        }
        let mut order = Vec::with_capacity(k);
        for &r in &roots {
            let before = order.len();
            self.layout(r, &mut order);
            if order.len() - before != self.st.forest.size(r) {
                return violation(format!("root {} straddles the search scope", r));
            }
        }
        debug_assert_eq!(order.len(), k);
        self.sfm = SplitFindmin::new(&order);
        self.ws.list_node.clear();
        self.ws.list_node.resize(k, NIL);
        for &r in &roots {
            let n = self.node(r);
            if n.hi < k {
                self.sfm.split(order[n.hi - 1]).expect("non-empty list");
            }
            self.ws.list_node[n.lo] = r;
        }
        self.ws.order = order;
        if self.p.shadow {
            self.ye = self.ws.y0.clone();
            self.ze.clear();
            for &r in &roots {
                let mut stack = vec![r];
                while let Some(b) = stack.pop() {
                    if self.st.forest.is_blossom(b) {
                        self.ze.insert(b, self.st.forest.z(b));
                        stack.extend_from_slice(self.st.forest.children(b));
                    }
                }
            }
        }
        Ok(())
    }

    // ---- main loop ----

    fn go(&mut self) -> SolveResult<SearchOutcome> {
        self.setup()?;
        let roots: Vec<VertexId> = self.p.roots.to_vec();
        for &r in &roots {
            if !self.in_scope(r) {
                return violation(format!("search root {} outside the scope", r));
            }
            if self.st.mate.is_matched(r) {
                return violation(format!("search root {} is matched", r));
            }
            let b = self.root(r);
            if self.label(b) != Label::Free {
                return violation(format!("two search roots in node {}", b));
            }
            self.grow_root(b, r)?;
        }
        while self.halt.is_none() {
            let next = self.q.peek_time();
            let limit = self.p.budget;
            match next {
                None => {
                    match limit {
                        Some(bd) if self.p.idle_to_budget && bd > self.t => {
                            self.advance(bd)?;
                            self.halt = Some(Halt::Budget);
                        }
                        Some(bd) if bd == self.t => self.halt = Some(Halt::Budget),
                        _ => self.halt = Some(Halt::Empty),
                    }
                    break;
                }
                Some(tn) => {
                    if let Some(bd) = limit {
                        let over = if self.p.process_at_budget { tn > bd } else { tn >= bd };
                        if over {
                            self.advance(bd.max(self.t))?;
                            self.halt = Some(Halt::Budget);
                            break;
                        }
                    }
                    if tn > self.t {
                        self.advance(tn)?;
                    }
                    let (_, ev) = self.q.pop().unwrap();
                    self.out.events += 1;
                    self.process(ev)?;
                }
            }
        }
        if self.p.shadow {
            self.shadow_check()?;
        }
        self.finish()?;
        self.out.halt = self.halt;
        self.out.adjustments = self.t;
        Ok(std::mem::take(&mut self.out))
    }

    fn advance(&mut self, to: i64) -> SolveResult<()> {
        let dt = to - self.t;
        debug_assert!(dt >= 0);
        if self.p.shadow && dt > 0 {
            for i in 0..self.ws.verts.len() {
                let v = self.ws.verts[i];
                match self.label(self.root(v)) {
                    Label::Inner => self.ye[i] += dt,
                    Label::Outer => self.ye[i] -= dt,
                    Label::Free => {}
                }
            }
            let keys: Vec<usize> = self.ze.keys().copied().collect();
            for b in keys {
                if !self.st.forest.is_alive(b) || self.st.forest.parent(b).is_some() {
                    continue;
                }
                let d = match self.label(b) {
                    Label::Inner => -2 * dt,
                    Label::Outer => 2 * dt,
                    Label::Free => 0,
                };
                *self.ze.get_mut(&b).unwrap() += d;
            }
        }
        self.t = to;
        if self.p.shadow {
            self.shadow_check()?;
        }
        Ok(())
    }

    fn shadow_check(&mut self) -> SolveResult<()> {
        self.out.shadow_checks += 1;
        for i in 0..self.ws.verts.len() {
            let v = self.ws.verts[i];
            let lazy = self.y_of(v);
            if lazy != self.ye[i] {
                return violation(format!(
                    "y({}) reconstructs to {} but eager value is {} at t={}",
                    v, lazy, self.ye[i], self.t
                ));
            }
        }
        for (&b, &z) in self.ze.iter() {
            if !self.st.forest.is_alive(b) {
                continue;
            }
            let lazy = self.z_of(b);
            if lazy != z {
                return violation(format!(
                    "z({}) reconstructs to {} but eager value is {} at t={}",
                    b, lazy, z, self.t
                ));
            }
        }
        Ok(())
    }

    // ---- events ----

    fn process(&mut self, ev: Ev) -> SolveResult<()> {
        match ev {
            Ev::Dissolve(b, g) => {
                if !self.st.forest.is_alive(b)
                    || self.st.forest.parent(b).is_some()
                    || self.label(b) != Label::Inner
                    || self.node(b).dgen != g
                {
                    return Ok(());
                }
                self.dissolve(b)
            }
            Ev::Grow(b, g) => {
                if !self.st.forest.is_alive(b)
                    || self.st.forest.parent(b).is_some()
                    || self.label(b) != Label::Free
                    || self.node(b).gen != g
                {
                    return Ok(());
                }
                let n = self.node(b);
                let start = self.sfm.list(self.ws.order[n.lo]);
                let (_, e, elem) = match self.sfm.findmin_element(start) {
                    Some(x) => x,
                    None => return Ok(()),
                };
                let x = self.ws.verts[elem];
                let u = self.st.g.edge(e).other(x);
                if self.label(self.root(u)) != Label::Outer {
                    return violation(format!("grow along edge {} from a non-outer vertex", e));
                }
                let ss = self.star(e, false)?;
                if ss != 0 {
                    return violation(format!("grow along edge {} with slack* {}", e, ss));
                }
                self.grow_unmatched(u, e, x)
            }
            Ev::GrowMate(f, b) => {
                let x = self.root(b);
                let y = self.st.g.edge(f).other(b);
                if self.label(x) != Label::Inner
                    || self.st.mate.mate_edge(b) != Some(f)
                    || self.label(self.root(y)) != Label::Free
                {
                    return Ok(());
                }
                let ss = self.star(f, true)?;
                if ss != 0 {
                    return violation(format!("matched edge {} not eligible when growing", f));
                }
                self.grow_matched(b, f, y)
            }
            Ev::Blossom(e) => self.blossom_event(e),
        }
    }

    fn schedule_outer(&mut self, v: VertexId) -> SolveResult<()> {
        let lv = self.l(v);
        let own = self.st.mate.mate_edge(v);
        let deg = self.st.g.adj(v).len();
        for i in 0..deg {
            let e = self.st.g.adj(v)[i];
            if !self.st.g.edge_active(e) || own == Some(e) {
                continue;
            }
            let x = self.st.g.edge(e).other(v);
            if !self.in_scope(x) {
                continue;
            }
            let lx = self.l(x);
            if self.uf.in_tree(lx) && self.uf.find(lx) == self.uf.find(lv) {
                debug_assert_eq!(self.root(x), self.root(v));
                continue;
            }
            let xr = self.root(x);
            if xr == self.root(v) {
                continue;
            }
            let ss = self.star(e, false)?;
            match self.label(xr) {
                Label::Outer => {
                    let h = self.half(e, ss)?;
                    self.push(self.t + h, Ev::Blossom(e));
                }
                Label::Inner => {
                    let ln = self.list_node_of(x);
                    let key = self.t + ss - self.node(ln).st.y_offset(self.t);
                    self.sfm.decreasekey(lx, key, e);
                }
                Label::Free => {
                    let ln = self.list_node_of(x);
                    let off = self.node(ln).st.y_offset(self.t);
                    let start = self.sfm.list(lx);
                    let before = self.sfm.findmin(start);
                    self.sfm.decreasekey(lx, self.t + ss - off, e);
                    let after = self.sfm.findmin(start);
                    if after != before {
                        let (k, _) = after.unwrap();
                        let n = self.node_mut(ln);
                        n.gen += 1;
                        let g = n.gen;
                        self.push(k + off, Ev::Grow(ln, g));
                    }
                }
            }
        }
        Ok(())
    }

    fn schedule_dissolve(&mut self, b: usize) -> SolveResult<()> {
        if !self.st.forest.is_blossom(b) {
            return Ok(());
        }
        let z = self.z_of(b);
        if z < 0 || z % 2 != 0 {
            return violation(format!("inner blossom {} has z = {}", b, z));
        }
        let n = self.node_mut(b);
        n.dgen += 1;
        let g = n.dgen;
        self.push(self.t + z / 2, Ev::Dissolve(b, g));
        Ok(())
    }

    fn schedule_inner(&mut self, x: usize) -> SolveResult<()> {
        self.schedule_dissolve(x)?;
        let b = self.st.forest.base(x);
        let f = match self.st.mate.mate_edge(b) {
            Some(f) => f,
            None => return violation(format!("inner node {} has a free base", x)),
        };
        let y = self.st.g.edge(f).other(b);
        if !self.in_scope(y) {
            return violation(format!("mate of {} lies outside the search scope", b));
        }
        let ss = self.star(f, true)?;
        match self.label(self.root(y)) {
            Label::Free => self.push(self.t + ss, Ev::GrowMate(f, b)),
            Label::Inner => {
                let h = self.half(f, ss)?;
                self.push(self.t + h, Ev::Blossom(f));
            }
            Label::Outer => {
                return violation(format!("inner node {} matched to an outer node", x));
            }
        }
        Ok(())
    }

    /// Hangs the vertices of `b` not yet in T below `head` and joins them
    /// to its set.
    fn gather(&mut self, b: usize, head: VertexId) {
        let lh = self.l(head);
        for v in self.leaves(b) {
            if v == head {
                continue;
            }
            let lv = self.l(v);
            if self.uf.in_tree(lv) {
                continue;
            }
            self.uf.addedge(lh, lv);
            self.uf.unite(lh, lv);
        }
    }

    fn make_outer(&mut self, b: usize) -> SolveResult<()> {
        let t = self.t;
        self.node_mut(b).st.become_outer(t);
        for v in self.leaves(b) {
            self.schedule_outer(v)?;
        }
        Ok(())
    }

    fn grow_root(&mut self, b: usize, r: VertexId) -> SolveResult<()> {
        let tree = self.trees;
        self.trees += 1;
        {
            let n = self.node_mut(b);
            n.tree = tree;
            n.tparent = None;
        }
        self.uf.make_root(self.l(r));
        self.gather(b, r);
        self.log(format!("GROW root {} node {}", r, b));
        self.make_outer(b)
    }

    fn grow_unmatched(&mut self, u: VertexId, e: EdgeId, v: VertexId) -> SolveResult<()> {
        let l = self.root(v);
        let tree = self.node(self.root(u)).tree;
        let t = self.t;
        {
            let n = self.node_mut(l);
            n.st.become_inner(t);
            n.tparent = Some((e, v, u));
            n.tree = tree;
        }
        let (lu, lv) = (self.l(u), self.l(v));
        self.uf.addedge(lu, lv);
        if self.st.forest.is_blossom(l) {
            for (_, a, b) in self.st.forest.base_path(l, v) {
                let (la, lb) = (self.l(a), self.l(b));
                self.uf.addedge(la, lb);
            }
        }
        self.log(format!("GROW inner {} via edge {} from {}", l, e, u));
        let base = self.st.forest.base(l);
        if !self.st.mate.is_matched(base) {
            let st = &mut *self.st;
            st.forest.augment_blossom(l, v, st.mate.mates_mut());
            st.mate.mates_mut()[v] = Some(e);
            self.walk_outer(u, e);
            self.augmented(e);
            return Ok(());
        }
        self.schedule_inner(l)
    }

    fn grow_matched(&mut self, x: VertexId, f: EdgeId, y: VertexId) -> SolveResult<()> {
        let yb = self.root(y);
        let tree = self.node(self.root(x)).tree;
        {
            let n = self.node_mut(yb);
            n.tparent = Some((f, y, x));
            n.tree = tree;
        }
        let (lx, ly) = (self.l(x), self.l(y));
        self.uf.addedge(lx, ly);
        self.gather(yb, y);
        self.log(format!("GROW outer {} via matched edge {}", yb, f));
        self.make_outer(yb)
    }

    fn augmented(&mut self, e: EdgeId) {
        self.out.augmentations += 1;
        self.halt = Some(Halt::Augmented);
        self.log(format!("AUGMENT edge {}", e));
    }

    /// Flips the tree path from outer vertex `s` to its root; `s` takes
    /// `edge` as its new mate.
    fn walk_outer(&mut self, mut s: VertexId, mut edge: EdgeId) {
        loop {
            let sn = self.root(s);
            {
                let st = &mut *self.st;
                st.forest.augment_blossom(sn, s, st.mate.mates_mut());
                st.mate.mates_mut()[s] = Some(edge);
            }
            let (_, _, p) = match self.node(sn).tparent {
                None => break,
                Some(tp) => tp,
            };
            let pn = self.root(p);
            let (f2, q, o) = self.node(pn).tparent.expect("inner node without a tree edge");
            let st = &mut *self.st;
            st.forest.augment_blossom(pn, q, st.mate.mates_mut());
            st.mate.mates_mut()[q] = Some(f2);
            s = o;
            edge = f2;
        }
    }

    fn parent_node(&self, b: usize) -> Option<usize> {
        self.node(b).tparent.map(|(_, _, p)| self.root(p))
    }

    fn blossom_event(&mut self, e: EdgeId) -> SolveResult<()> {
        let ed = *self.st.g.edge(e);
        let (u, v) = (ed.u, ed.v);
        let (un, vn) = (self.root(u), self.root(v));
        if un == vn {
            return Ok(());
        }
        let matched = self.st.mate.mate_edge(u) == Some(e);
        let want = if matched { Label::Inner } else { Label::Outer };
        if self.label(un) != want || self.label(vn) != want {
            return Ok(());
        }
        let ss = self.star(e, matched)?;
        if ss != 0 {
            return violation(format!("blossom edge {} has slack* {} when processed", e, ss));
        }
        if self.node(un).tree != self.node(vn).tree {
            if matched {
                for xn in [un, vn] {
                    let (te, entry, pv) = self.node(xn).tparent.expect("inner node without a tree edge");
                    {
                        let st = &mut *self.st;
                        st.forest.augment_blossom(xn, entry, st.mate.mates_mut());
                        st.mate.mates_mut()[entry] = Some(te);
                    }
                    self.walk_outer(pv, te);
                }
            } else {
                self.walk_outer(u, e);
                self.walk_outer(v, e);
            }
            self.augmented(e);
            return Ok(());
        }
        self.shrink_cycle(e, u, v, un, vn)
    }

    fn shrink_cycle(
        &mut self,
        e: EdgeId,
        u: VertexId,
        v: VertexId,
        un: usize,
        vn: usize,
    ) -> SolveResult<()> {
        let s = self.next_stamp();
        let (mut a, mut b) = (Some(un), Some(vn));
        let lca = loop {
            if let Some(x) = a {
                if self.node(x).mark == (s, 2) {
                    break x;
                }
                self.node_mut(x).mark = (s, 1);
                a = self.parent_node(x);
            }
            if let Some(y) = b {
                if self.node(y).mark == (s, 1) {
                    break y;
                }
                self.node_mut(y).mark = (s, 2);
                b = self.parent_node(y);
            }
            if a.is_none() && b.is_none() {
                return violation(format!("edge {} joins one tree without a common ancestor", e));
            }
        };
        let path_to = |me: &Self, mut c: usize| {
            let mut out = Vec::new();
            while c != lca {
                out.push(c);
                c = me.parent_node(c).expect("path misses the common ancestor");
            }
            out
        };
        let xp = path_to(self, un);
        let yp = path_to(self, vn);
        let mut children = Vec::with_capacity(xp.len() + yp.len() + 1);
        let mut cycle = Vec::with_capacity(children.capacity());
        children.push(lca);
        for &c in xp.iter().rev() {
            let (te, cv, pv) = self.node(c).tparent.unwrap();
            children.push(c);
            cycle.push(CycleEdge { e: te, a: pv, b: cv });
        }
        cycle.push(CycleEdge { e, a: u, b: v });
        for &c in &yp {
            let (te, cv, pv) = self.node(c).tparent.unwrap();
            children.push(c);
            cycle.push(CycleEdge { e: te, a: cv, b: pv });
        }
        let t = self.t;
        let mut fresh = Vec::new();
        for &c in &children {
            if self.st.forest.is_blossom(c) {
                let z = self.z_of(c);
                self.st.forest.set_z(c, z);
            }
            if c == lca {
                continue;
            }
            let (_, cv, pv) = self.node(c).tparent.unwrap();
            let (lc, lp) = (self.l(cv), self.l(pv));
            match self.label(c) {
                Label::Inner => {
                    if self.st.forest.is_blossom(c) {
                        for (_, x, y) in self.st.forest.base_path(c, cv) {
                            let (lx, ly) = (self.l(x), self.l(y));
                            self.uf.unite(lx, ly);
                        }
                    }
                    self.gather(c, cv);
                    self.uf.unite(lc, lp);
                    self.node_mut(c).st.become_outer(t);
                    fresh.push(c);
                }
                Label::Outer => self.uf.unite(lc, lp),
                Label::Free => return violation(format!("free node {} on a blossom cycle", c)),
            }
        }
        let lca_node = self.node(lca);
        let nb = self.st.forest.shrink(children, cycle);
        {
            let n = self.node_mut(nb);
            n.st = Stamps {
                label: Label::Outer,
                t_root: t,
                t_in: 0,
                t_out: t,
                delta: 0,
            };
            n.tparent = lca_node.tparent;
            n.tree = lca_node.tree;
        }
        if self.p.shadow {
            self.ze.insert(nb, 0);
        }
        self.out.blossoms += 1;
        self.log(format!("BLOSSOM {} from edge {} base {}", nb, e, self.st.forest.base(nb)));
        for c in fresh {
            for x in self.leaves(c) {
                self.schedule_outer(x)?;
            }
        }
        Ok(())
    }

    fn dissolve(&mut self, b: usize) -> SolveResult<()> {
        let z = self.z_of(b);
        if z != 0 {
            return violation(format!("dissolving blossom {} with z = {}", b, z));
        }
        let t = self.t;
        let bn = self.node(b);
        let kids = self.st.forest.children(b).to_vec();
        let cyc = self.st.forest.cycle(b).to_vec();
        for &c in &kids[..kids.len() - 1] {
            let h = self.node(c).hi;
            let at = self.ws.order[h - 1];
            self.sfm.split(at).expect("non-empty list");
        }
        self.st.forest.set_z(b, 0);
        self.st.forest.dissolve(b, false);
        self.out.dissolves += 1;
        self.log(format!("DISSOLVE {}", b));
        for &c in &kids {
            let n = self.node_mut(c);
            n.st = Stamps::child_of(&bn.st, t);
            n.tparent = None;
            n.tree = bn.tree;
            let lo = n.lo;
            self.ws.list_node[lo] = c;
        }
        let (te, entry, pv) = bn.tparent.expect("inner blossom without a tree edge");
        let l = kids.len();
        let i = kids.iter().position(|&c| c == self.root(entry)).unwrap();
        let mut idx = vec![i];
        let mut k = i;
        while k != 0 {
            k = if i % 2 == 0 { k - 1 } else { (k + 1) % l };
            idx.push(k);
        }
        // (edge, vertex in `from`, vertex in `to`) for adjacent children
        let link = |from: usize, to: usize| -> (EdgeId, VertexId, VertexId) {
            if to + 1 == from {
                let c = cyc[to];
                (c.e, c.b, c.a)
            } else {
                let c = cyc[from];
                debug_assert_eq!((from + 1) % l, to);
                (c.e, c.a, c.b)
            }
        };
        let mut on_path = vec![false; l];
        for (p, &c) in idx.iter().enumerate() {
            on_path[c] = true;
            let node = kids[c];
            let tp = if p == 0 {
                (te, entry, pv)
            } else {
                let (e, from_v, to_v) = link(idx[p - 1], c);
                (e, to_v, from_v)
            };
            self.node_mut(node).tparent = Some(tp);
            if p % 2 == 0 {
                self.node_mut(node).st.become_inner(t);
            } else {
                let exit = link(c, idx[p + 1]).1;
                let base = self.st.forest.base(node);
                if self.st.forest.is_blossom(node) {
                    for (_, x, y) in self.st.forest.base_path(node, exit) {
                        let (lx, ly) = (self.l(x), self.l(y));
                        self.uf.unite(lx, ly);
                    }
                }
                self.gather(node, base);
                self.node_mut(node).st.become_outer(t);
            }
        }
        for (p, &c) in idx.iter().enumerate() {
            let node = kids[c];
            if p % 2 == 0 {
                self.schedule_dissolve(node)?;
            } else {
                for x in self.leaves(node) {
                    self.schedule_outer(x)?;
                }
            }
        }
        for c in 0..l {
            if on_path[c] {
                continue;
            }
            let node = kids[c];
            let n = self.node_mut(node);
            n.tparent = None;
            let off = n.st.y_offset(t);
            let lo = n.lo;
            let start = self.sfm.list(self.ws.order[lo]);
            if let Some((key, _)) = self.sfm.findmin(start) {
                let n = self.node_mut(node);
                n.gen += 1;
                let g = n.gen;
                self.push(key + off, Ev::Grow(node, g));
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> SolveResult<()> {
        let k = self.ws.verts.len();
        let ys: Vec<i64> = (0..k).map(|i| self.y_of(self.ws.verts[i])).collect();
        for (i, y) in ys.into_iter().enumerate() {
            let v = self.ws.verts[i];
            self.st.y[v] = y;
        }
        let s = self.next_stamp();
        let mut roots = Vec::new();
        for i in 0..k {
            let r = self.root(self.ws.verts[i]);
            if self.node(r).mark != (s, 3) {
                self.node_mut(r).mark = (s, 3);
                roots.push(r);
            }
        }
        let zs: Vec<(usize, i64)> = roots
            .iter()
            .filter(|&&r| self.st.forest.is_blossom(r))
            .map(|&r| (r, self.z_of(r)))
            .collect();
        for (r, z) in zs {
            if z < 0 {
                return violation(format!("blossom {} ends the search with z = {}", r, z));
            }
            self.st.forest.set_z(r, z);
        }
        self.st.forest.dissolve_zero_roots(&roots);
        Ok(())
    }
}

impl From<crate::sfm::SfmError> for SolveError {
    fn from(e: crate::sfm::SfmError) -> SolveError {
        SolveError::Violation(format!("{:?}", e))
    }
}
