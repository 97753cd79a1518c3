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

//! SearchOne: augment along a maximal set of eligible paths from every
//! free vertex, shrink, and make exactly one dual adjustment.
//!
//! Runs under Criterion 2, where a path once augmented becomes
//! ineligible. Each pass augments along vertex-disjoint paths, retiring
//! the two trees involved; passes repeat until one finds nothing.

use std::collections::VecDeque;

use crate::blossom::CycleEdge;
use crate::eligibility::{eligible_by_slack, Criterion, EligibleView};
use crate::error::{violation, SolveResult};
use crate::graph::{EdgeId, VertexId};
use crate::state::State;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
enum Mark {
    #[default]
    None,
    Inner,
    Outer,
}

#[derive(Clone, Copy, Debug, Default)]
struct Info {
    mark: Mark,
    tparent: Option<(EdgeId, VertexId, VertexId)>,
    tree: usize,
    seen: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchOneOutcome {
    pub augmentations: usize,
    pub blossoms: usize,
    pub adjusted: bool,
    pub dissolved: usize,
    /// Runs of the exhaustive path scan (only when requested).
    pub exhaustive_checks: usize,
}

/// One Edmonds forest grown from all free vertices over the contracted
/// eligible graph.
struct Builder<'a> {
    st: &'a mut State,
    c: Criterion,
    info: Vec<Info>,
    queue: VecDeque<VertexId>,
    stamp: u32,
    blossoms: usize,
    /// Trees that already augmented in this pass.
    dead: Vec<bool>,
}

impl<'a> Builder<'a> {
    fn new(st: &'a mut State, c: Criterion) -> Builder<'a> {
        Builder {
            st,
            c,
            info: Vec::new(),
            queue: VecDeque::new(),
            stamp: 0,
            blossoms: 0,
            dead: Vec::new(),
        }
    }

    fn at(&mut self, b: usize) -> &mut Info {
        if self.info.len() <= b {
            self.info.resize(b + 1, Info::default());
        }
        &mut self.info[b]
    }

    fn get(&self, b: usize) -> Info {
        self.info.get(b).copied().unwrap_or_default()
    }

    fn root(&self, v: VertexId) -> usize {
        self.st.forest.root_of(v)
    }

    fn eligible(&self, e: EdgeId, matched: bool) -> bool {
        eligible_by_slack(self.st.slack(e), self.c, matched)
    }

    fn make_outer(&mut self, b: usize) {
        self.at(b).mark = Mark::Outer;
        for v in self.st.forest.leaves(b) {
            self.queue.push_back(v);
        }
    }

    fn live(&self, b: usize) -> bool {
        let i = self.get(b);
        i.mark == Mark::None || !self.dead[i.tree]
    }

    /// One pass; augments along vertex-disjoint paths and returns how many.
    fn grow(&mut self) -> SolveResult<usize> {
        self.info.clear();
        self.queue.clear();
        let free = self.st.free_vertices();
        self.dead = vec![false; free.len()];
        for (i, &r) in free.iter().enumerate() {
            let b = self.root(r);
            self.at(b).tree = i;
            self.make_outer(b);
        }
        let mut found = 0;
        'pop: while let Some(v) = self.queue.pop_front() {
            if !self.live(self.root(v)) {
                continue;
            }
            let own = self.st.mate.mate_edge(v);
            for k in 0..self.st.g.adj(v).len() {
                let vn = self.root(v);
                let e = self.st.g.adj(v)[k];
                if !self.st.g.edge_active(e) || own == Some(e) {
                    continue;
                }
                let x = self.st.g.edge(e).other(v);
                let xn = self.root(x);
                if xn == vn || !self.live(xn) || !self.eligible(e, false) {
                    continue;
                }
                match self.get(xn).mark {
                    Mark::Inner => {}
                    Mark::Outer => {
                        let (ta, tb) = (self.get(vn).tree, self.get(xn).tree);
                        if ta != tb {
                            self.walk(v, e);
                            self.walk(x, e);
                            self.dead[ta] = true;
                            self.dead[tb] = true;
                            found += 1;
                            continue 'pop;
                        }
                        self.shrink(e, v, x)?;
                    }
                    Mark::None => {
                        let tree = self.get(vn).tree;
                        {
                            let i = self.at(xn);
                            i.mark = Mark::Inner;
                            i.tparent = Some((e, x, v));
                            i.tree = tree;
                        }
                        if self.from_inner(xn)? {
                            found += 1;
                            continue 'pop;
                        }
                    }
                }
            }
        }
        Ok(found)
    }

    /// Follows the matched edge out of a freshly labeled inner node; true
    /// when that closed an augmenting path.
    fn from_inner(&mut self, xn: usize) -> SolveResult<bool> {
        let b = self.st.forest.base(xn);
        let f = match self.st.mate.mate_edge(b) {
            Some(f) => f,
            None => return violation(format!("unlabeled node {} has a free base", xn)),
        };
        if !self.eligible(f, true) {
            return Ok(false);
        }
        let y = self.st.g.edge(f).other(b);
        let yn = self.root(y);
        if !self.live(yn) {
            return Ok(false);
        }
        match self.get(yn).mark {
            Mark::None => {
                let tree = self.get(xn).tree;
                {
                    let i = self.at(yn);
                    i.tparent = Some((f, y, b));
                    i.tree = tree;
                }
                self.make_outer(yn);
                Ok(false)
            }
            Mark::Inner => {
                let (ta, tb) = (self.get(xn).tree, self.get(yn).tree);
                if ta != tb {
                    for n in [xn, yn] {
                        let (te, entry, pv) = self.get(n).tparent.unwrap();
                        let st = &mut *self.st;
                        st.forest.augment_blossom(n, entry, st.mate.mates_mut());
                        st.mate.mates_mut()[entry] = Some(te);
                        self.walk(pv, te);
                    }
                    self.dead[ta] = true;
                    self.dead[tb] = true;
                    return Ok(true);
                }
                self.shrink(f, b, y)?;
                Ok(false)
            }
            Mark::Outer => violation(format!("inner node {} matched to an outer node", xn)),
        }
    }

    fn walk(&mut self, mut s: VertexId, mut edge: EdgeId) {
        loop {
            let sn = self.root(s);
            {
                let st = &mut *self.st;
                st.forest.augment_blossom(sn, s, st.mate.mates_mut());
                st.mate.mates_mut()[s] = Some(edge);
            }
            let p = match self.get(sn).tparent {
                None => break,
                Some((_, _, p)) => p,
            };
            let pn = self.root(p);
            let (f2, q, o) = self.get(pn).tparent.unwrap();
            let st = &mut *self.st;
            st.forest.augment_blossom(pn, q, st.mate.mates_mut());
            st.mate.mates_mut()[q] = Some(f2);
            s = o;
            edge = f2;
        }
    }

    fn parent_node(&self, b: usize) -> Option<usize> {
        self.get(b).tparent.map(|(_, _, p)| self.root(p))
    }

    fn shrink(&mut self, e: EdgeId, u: VertexId, v: VertexId) -> SolveResult<()> {
        self.stamp += 1;
        let s = self.stamp;
        let (un, vn) = (self.root(u), self.root(v));
        let (mut a, mut b) = (Some(un), Some(vn));
        let lca = loop {
            if let Some(x) = a {
                if self.get(x).seen == s * 2 + 1 {
                    break x;
                }
                self.at(x).seen = s * 2;
                a = self.parent_node(x);
            }
            if let Some(y) = b {
                if self.get(y).seen == s * 2 {
                    break y;
                }
                self.at(y).seen = s * 2 + 1;
                b = self.parent_node(y);
            }
            if a.is_none() && b.is_none() {
                return violation(format!("edge {} closes no cycle", e));
            }
        };
        let path = |me: &Self, mut c: usize| {
            let mut out = Vec::new();
            while c != lca {
                out.push(c);
                c = me.parent_node(c).unwrap();
            }
            out
        };
        let xp = path(self, un);
        let yp = path(self, vn);
        let mut children = vec![lca];
        let mut cycle = Vec::new();
        for &c in xp.iter().rev() {
            let (te, cv, pv) = self.get(c).tparent.unwrap();
            children.push(c);
            cycle.push(CycleEdge { e: te, a: pv, b: cv });
        }
        cycle.push(CycleEdge { e, a: u, b: v });
        for &c in &yp {
            let (te, cv, pv) = self.get(c).tparent.unwrap();
            children.push(c);
            cycle.push(CycleEdge { e: te, a: cv, b: pv });
        }
        let was_inner: Vec<usize> = children
            .iter()
            .copied()
            .filter(|&c| self.get(c).mark == Mark::Inner)
            .collect();
        let top = self.get(lca);
        let nb = self.st.forest.shrink(children, cycle);
        {
            let i = self.at(nb);
            i.mark = Mark::Outer;
            i.tparent = top.tparent;
            i.tree = top.tree;
        }
        self.blossoms += 1;
        for c in was_inner {
            for x in self.st.forest.leaves(c) {
                self.queue.push_back(x);
            }
        }
        Ok(())
    }

    /// Unit adjustment over the final forest.
    fn adjust(&mut self) -> SolveResult<()> {
        let roots: Vec<usize> = {
            let mut r: Vec<usize> = self
                .st
                .g
                .active_vertices()
                .map(|v| self.st.forest.root_of(v))
                .collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        for b in roots {
            let (dy, dz) = match self.get(b).mark {
                Mark::Outer => (-1, 2),
                Mark::Inner => (1, -2),
                Mark::None => continue,
            };
            for v in self.st.forest.leaves(b) {
                self.st.y[v] += dy;
            }
            if self.st.forest.is_blossom(b) {
                let z = self.st.forest.z(b) + dz;
                if z < 0 {
                    return violation(format!("inner blossom {} would reach z = {}", b, z));
                }
                self.st.forest.set_z(b, z);
            }
        }
        Ok(())
    }
}

/// Exhaustive search for an alternating path between two free nodes of
/// the contracted eligible graph. Exponential; meant for tiny graphs.
pub fn exhaustive_augmenting_path(st: &State, c: Criterion) -> Option<Vec<EdgeId>> {
    let view = EligibleView::new(st, c);
    let nodes = view.nodes();
    let cap = st.forest.capacity();
    let mut free_node = vec![false; cap];
    let mut matched_out: Vec<Option<(EdgeId, usize)>> = vec![None; cap];
    let mut unmatched: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); cap];
    for &b in &nodes {
        let base = st.forest.base(b);
        if !st.mate.is_matched(base) {
            free_node[b] = true;
        }
    }
    for ve in view.edges() {
        if ve.matched {
            matched_out[ve.a] = Some((ve.e, ve.b));
            matched_out[ve.b] = Some((ve.e, ve.a));
        } else {
            unmatched[ve.a].push((ve.e, ve.b));
            unmatched[ve.b].push((ve.e, ve.a));
        }
    }
    fn dfs(
        at: usize,
        start: usize,
        on: &mut Vec<bool>,
        path: &mut Vec<EdgeId>,
        free_node: &[bool],
        matched_out: &[Option<(EdgeId, usize)>],
        unmatched: &[Vec<(EdgeId, usize)>],
    ) -> bool {
        for &(e, x) in &unmatched[at] {
            if on[x] {
                continue;
            }
            path.push(e);
            if free_node[x] && x != start {
                return true;
            }
            if let Some((f, y)) = matched_out[x] {
                if !on[y] {
                    on[x] = true;
                    on[y] = true;
                    path.push(f);
                    if dfs(y, start, on, path, free_node, matched_out, unmatched) {
                        return true;
                    }
                    path.pop();
                    on[x] = false;
                    on[y] = false;
                }
            }
            path.pop();
        }
        false
    }
    let mut on = vec![false; cap];
    for &s in &nodes {
        if !free_node[s] {
            continue;
        }
        on[s] = true;
        let mut path = Vec::new();
        if dfs(s, s, &mut on, &mut path, &free_node, &matched_out, &unmatched) {
            return Some(path);
        }
        on[s] = false;
    }
    None
}

/// Graphs with at most this many original vertices get the exhaustive
/// scan when checking is on.
pub const EXHAUSTIVE_LIMIT: usize = 12;

pub fn search_one(st: &mut State, check: bool) -> SolveResult<SearchOneOutcome> {
    let mut out = SearchOneOutcome::default();
    let free = st.free_vertices();
    if free.is_empty() {
        return Ok(out);
    }
    let p = st.y[free[0]].rem_euclid(2);
    if free.iter().any(|&v| st.y[v].rem_euclid(2) != p) {
        return violation("free vertices of mixed parity entering SearchOne".to_string());
    }
    out.dissolved += st.forest.dissolve_all_zero_roots();
    loop {
        let mut b = Builder::new(st, Criterion::Two);
        let found = b.grow()?;
        out.blossoms += b.blossoms;
        match found {
            k if k > 0 => {
                out.augmentations += k;
                drop(b);
                out.dissolved += st.forest.dissolve_all_zero_roots();
            }
            _ => {
                if check && b.st.g.n() <= EXHAUSTIVE_LIMIT {
                    out.exhaustive_checks += 1;
                    if let Some(p) = exhaustive_augmenting_path(b.st, Criterion::Two) {
                        return violation(format!(
                            "eligible augmenting path {:?} survives SearchOne",
                            p
                        ));
                    }
                }
                if b.st.free_count() > 0 {
                    b.adjust()?;
                    out.adjusted = true;
                }
                drop(b);
                out.dissolved += st.forest.dissolve_all_zero_roots();
                return Ok(out);
            }
        }
    }
}
