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

//! The laminar family of current blossoms.
//!
//! Node ids `0..nv` are the vertices themselves; blossom ids start at `nv`.
//! A blossom keeps its children in odd-cycle order with the child holding
//! the base first, and the cycle edge `i` joins child `i` to child `i + 1`
//! (mod the cycle length). Edge `i` is matched iff `i` is odd.

use crate::graph::{EdgeId, Graph, VertexId};

pub const NONE: usize = usize::MAX;

/// One cycle edge, oriented: `a` lies in child `i`, `b` in child `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleEdge {
    pub e: EdgeId,
    pub a: VertexId,
    pub b: VertexId,
}

impl CycleEdge {
    pub fn flipped(self) -> CycleEdge {
        CycleEdge {
            e: self.e,
            a: self.b,
            b: self.a,
        }
    }
}

/// A step of a path inside a blossom, walked from `from` to `to`.
pub type Step = (EdgeId, VertexId, VertexId);

#[derive(Clone, Debug)]
pub struct BlossomForest {
    nv: usize,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    cycle: Vec<Vec<CycleEdge>>,
    base: Vec<VertexId>,
    z: Vec<i64>,
    size: Vec<usize>,
    alive: Vec<bool>,
    root_of: Vec<usize>,
    free: Vec<usize>,
    pending: Vec<usize>,
    defer: bool,
}

impl BlossomForest {
    pub fn new(nv: usize) -> BlossomForest {
        BlossomForest {
            nv,
            parent: vec![NONE; nv],
            children: vec![Vec::new(); nv],
            cycle: vec![Vec::new(); nv],
            base: (0..nv).collect(),
            z: vec![0; nv],
            size: vec![1; nv],
            alive: vec![true; nv],
            root_of: (0..nv).collect(),
            free: Vec::new(),
            pending: Vec::new(),
            defer: false,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.nv
    }

    /// One past the largest node id ever allocated.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn is_blossom(&self, b: usize) -> bool {
        b >= self.nv
    }

    #[inline]
    pub fn is_alive(&self, b: usize) -> bool {
        self.alive[b]
    }

    #[inline]
    pub fn parent(&self, b: usize) -> Option<usize> {
        let p = self.parent[b];
        if p == NONE {
            None
        } else {
            Some(p)
        }
    }

    #[inline]
    pub fn root_of(&self, v: VertexId) -> usize {
        self.root_of[v]
    }

    #[inline]
    pub fn children(&self, b: usize) -> &[usize] {
        &self.children[b]
    }

    #[inline]
    pub fn cycle(&self, b: usize) -> &[CycleEdge] {
        &self.cycle[b]
    }

    #[inline]
    pub fn base(&self, b: usize) -> VertexId {
        self.base[b]
    }

    #[inline]
    pub fn z(&self, b: usize) -> i64 {
        self.z[b]
    }

    #[inline]
    pub fn set_z(&mut self, b: usize, z: i64) {
        self.z[b] = z;
    }

    #[inline]
    pub fn size(&self, b: usize) -> usize {
        self.size[b]
    }

    /// Ids released by dissolutions are held back while deferral is on, so
    /// a running search never sees an id reused.
    pub fn set_defer_free(&mut self, on: bool) {
        self.defer = on;
        if !on {
            let p = std::mem::take(&mut self.pending);
            self.free.extend(p);
        }
    }

    pub fn blossoms(&self) -> impl Iterator<Item = usize> + '_ {
        (self.nv..self.capacity()).filter(move |&b| self.alive[b])
    }

    pub fn root_blossoms(&self) -> Vec<usize> {
        self.blossoms().filter(|&b| self.parent[b] == NONE).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.blossoms().next().is_none()
    }

    pub fn leaves(&self, b: usize) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.size[b]);
        self.push_leaves(b, &mut out);
        out
    }

    pub fn push_leaves(&self, b: usize, out: &mut Vec<VertexId>) {
        if !self.is_blossom(b) {
            out.push(b);
            return;
        }
        let mut stack = vec![b];
        while let Some(x) = stack.pop() {
            if self.is_blossom(x) {
                for &c in self.children[x].iter().rev() {
                    stack.push(c);
                }
            } else {
                out.push(x);
            }
        }
    }

    /// Depth-first leaf order in which every blossom is contiguous and
    /// children appear in cycle order.
    pub fn leaf_order(&self, roots: &[usize]) -> Vec<VertexId> {
        let mut out = Vec::new();
        for &r in roots {
            self.push_leaves(r, &mut out);
        }
        out
    }

    /// The child of `b` that contains vertex `v`.
    pub fn child_containing(&self, b: usize, v: VertexId) -> usize {
        let mut t = v;
        while self.parent[t] != b {
            t = self.parent[t];
            assert!(t != NONE, "vertex {} not inside blossom {}", v, b);
        }
        t
    }

    pub fn contains(&self, b: usize, v: VertexId) -> bool {
        let mut t = v;
        loop {
            if t == b {
                return true;
            }
            t = self.parent[t];
            if t == NONE {
                return false;
            }
        }
    }

    /// Innermost blossom containing both endpoints, if any.
    pub fn common_blossom(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let mut anc = Vec::new();
        let mut t = self.parent[u];
        while t != NONE {
            anc.push(t);
            t = self.parent[t];
        }
        let mut t = self.parent[v];
        while t != NONE {
            if anc.contains(&t) {
                return Some(t);
            }
            t = self.parent[t];
        }
        None
    }

    /// Sum of z over blossoms containing both endpoints.
    pub fn z_common(&self, u: VertexId, v: VertexId) -> i64 {
        let mut s = 0;
        let mut t = match self.common_blossom(u, v) {
            Some(b) => b,
            None => return 0,
        };
        while t != NONE {
            s += self.z[t];
            t = self.parent[t];
        }
        s
    }

    fn alloc(&mut self) -> usize {
        if let Some(id) = self.free.pop() {
            id
        } else {
            self.parent.push(NONE);
            self.children.push(Vec::new());
            self.cycle.push(Vec::new());
            self.base.push(NONE);
            self.z.push(0);
            self.size.push(0);
            self.alive.push(false);
            self.parent.len() - 1
        }
    }

    /// Shrinks an odd alternating cycle of root nodes into a new root
    /// blossom with z = 0. `children[0]` must hold the base.
    pub fn shrink(&mut self, children: Vec<usize>, cycle: Vec<CycleEdge>) -> usize {
        let l = children.len();
        assert!(l >= 3 && l % 2 == 1, "blossom cycle must be odd, got {}", l);
        assert_eq!(cycle.len(), l);
        let id = self.alloc();
        let mut size = 0;
        for &c in &children {
            assert!(self.alive[c] && self.parent[c] == NONE, "child {} is not a root", c);
            self.parent[c] = id;
            size += self.size[c];
        }
        self.base[id] = self.base[children[0]];
        self.z[id] = 0;
        self.size[id] = size;
        self.alive[id] = true;
        self.parent[id] = NONE;
        self.children[id] = children;
        self.cycle[id] = cycle;
        let mut lv = Vec::with_capacity(size);
        self.push_leaves(id, &mut lv);
        for v in lv {
            self.root_of[v] = id;
        }
        id
    }

    /// Removes root blossom `b`; its children become roots. Requires
    /// z(b) = 0 unless `force`.
    pub fn dissolve(&mut self, b: usize, force: bool) -> Vec<usize> {
        assert!(self.is_blossom(b) && self.alive[b], "not a live blossom: {}", b);
        assert!(self.parent[b] == NONE, "blossom {} is not a root", b);
        assert!(force || self.z[b] == 0, "blossom {} has z = {}", b, self.z[b]);
        let kids = std::mem::take(&mut self.children[b]);
        self.cycle[b].clear();
        let mut lv = Vec::new();
        for &c in &kids {
            self.parent[c] = NONE;
            lv.clear();
            self.push_leaves(c, &mut lv);
            for &v in &lv {
                self.root_of[v] = c;
            }
        }
        self.alive[b] = false;
        self.z[b] = 0;
        self.size[b] = 0;
        if self.defer {
            self.pending.push(b);
        } else {
            self.free.push(b);
        }
        kids
    }

    /// Dissolves every root blossom with z = 0, repeatedly, among the roots
    /// reachable from `roots`. Returns the number dissolved.
    pub fn dissolve_zero_roots(&mut self, roots: &[usize]) -> usize {
        let mut stack: Vec<usize> = roots.to_vec();
        let mut count = 0;
        while let Some(b) = stack.pop() {
            if !self.is_blossom(b) || !self.alive[b] || self.parent[b] != NONE {
                continue;
            }
            if self.z[b] == 0 {
                let kids = self.dissolve(b, false);
                count += 1;
                stack.extend(kids);
            }
        }
        count
    }

    pub fn dissolve_all_zero_roots(&mut self) -> usize {
        let r = self.root_blossoms();
        self.dissolve_zero_roots(&r)
    }

    /// Even-length alternating path in E_b from `v` to base(b), starting
    /// with a matched edge unless `v` is the base.
    pub fn base_path(&self, b: usize, v: VertexId) -> Vec<Step> {
        let mut out = Vec::new();
        self.base_path_into(b, v, &mut out);
        out
    }

    fn reverse_path_into(&self, b: usize, v: VertexId, out: &mut Vec<Step>) {
        let mut p = Vec::new();
        self.base_path_into(b, v, &mut p);
        for &(e, x, y) in p.iter().rev() {
            out.push((e, y, x));
        }
    }

    fn base_path_into(&self, b: usize, v: VertexId, out: &mut Vec<Step>) {
        if !self.is_blossom(b) {
            assert_eq!(b, v);
            return;
        }
        let ch = &self.children[b];
        let cyc = &self.cycle[b];
        let l = ch.len();
        let t = self.child_containing(b, v);
        let i = ch.iter().position(|&c| c == t).unwrap();
        self.base_path_into(t, v, out);
        if i % 2 == 0 {
            let mut k = i;
            while k > 0 {
                let em = cyc[k - 1];
                out.push((em.e, em.b, em.a));
                let eu = cyc[k - 2];
                self.reverse_path_into(ch[k - 1], eu.b, out);
                out.push((eu.e, eu.b, eu.a));
                self.base_path_into(ch[k - 2], eu.a, out);
                k -= 2;
            }
        } else {
            let mut k = i;
            while k != 0 {
                let em = cyc[k];
                out.push((em.e, em.a, em.b));
                let eu = cyc[k + 1];
                self.reverse_path_into(ch[k + 1], eu.a, out);
                out.push((eu.e, eu.a, eu.b));
                let nxt = (k + 2) % l;
                self.base_path_into(ch[nxt], eu.b, out);
                k = nxt;
            }
        }
    }

    /// Moves the base of `b` to `v` by flipping the alternating path from
    /// `v` to the old base, recursively through sub-blossoms. The caller
    /// sets the mate of `v` afterwards.
    pub fn augment_blossom(&mut self, b: usize, v: VertexId, mate: &mut [Option<EdgeId>]) {
        if !self.is_blossom(b) {
            return;
        }
        let t = self.child_containing(b, v);
        self.augment_blossom(t, v, mate);
        let l = self.children[b].len();
        let i = self.children[b].iter().position(|&c| c == t).unwrap();
        if i % 2 == 0 {
            let mut k = i;
            while k > 0 {
                let eu = self.cycle[b][k - 2];
                let (ca, cb) = (self.children[b][k - 2], self.children[b][k - 1]);
                self.augment_blossom(cb, eu.b, mate);
                self.augment_blossom(ca, eu.a, mate);
                mate[eu.a] = Some(eu.e);
                mate[eu.b] = Some(eu.e);
                k -= 2;
            }
        } else {
            let mut k = i;
            while k != 0 {
                let eu = self.cycle[b][k + 1];
                let nxt = (k + 2) % l;
                let (ca, cb) = (self.children[b][k + 1], self.children[b][nxt]);
                self.augment_blossom(ca, eu.a, mate);
                self.augment_blossom(cb, eu.b, mate);
                mate[eu.a] = Some(eu.e);
                mate[eu.b] = Some(eu.e);
                k = nxt;
            }
        }
        self.children[b].rotate_left(i);
        self.cycle[b].rotate_left(i);
        self.base[b] = v;
    }

    /// Structural audit of every live blossom against graph and matching.
    pub fn validate(&self, g: &Graph, mate: &[Option<EdgeId>]) -> Result<(), String> {
        for b in self.blossoms() {
            let ch = &self.children[b];
            let cyc = &self.cycle[b];
            let l = ch.len();
            if l < 3 || l % 2 == 0 {
                return Err(format!("blossom {} has {} children", b, l));
            }
            if cyc.len() != l {
                return Err(format!("blossom {} cycle length mismatch", b));
            }
            if self.base[b] != self.base[ch[0]] {
                return Err(format!("blossom {} base not in first child", b));
            }
            for i in 0..l {
                let ce = cyc[i];
                let ed = g.edge(ce.e);
                if !((ed.u == ce.a && ed.v == ce.b) || (ed.u == ce.b && ed.v == ce.a)) {
                    return Err(format!("blossom {} cycle edge {} endpoints wrong", b, i));
                }
                if !self.contains(ch[i], ce.a) || !self.contains(ch[(i + 1) % l], ce.b) {
                    return Err(format!("blossom {} cycle edge {} misplaced", b, i));
                }
                let matched = mate[ce.a] == Some(ce.e);
                if matched != (i % 2 == 1) {
                    return Err(format!("blossom {} cycle edge {} parity wrong", b, i));
                }
            }
            let lv = self.leaves(b);
            if lv.len() != self.size[b] || lv.len() % 2 == 0 {
                return Err(format!("blossom {} size {} inconsistent", b, lv.len()));
            }
            let mut inside = 0;
            for &v in &lv {
                if let Some(e) = mate[v] {
                    let o = g.edge(e).other(v);
                    if self.contains(b, o) {
                        inside += 1;
                    } else if v != self.base[b] {
                        return Err(format!("blossom {} non-base {} matched outside", b, v));
                    }
                }
            }
            if inside / 2 != lv.len() / 2 {
                return Err(format!("blossom {} has {} internal matched edges", b, inside / 2));
            }
            for &v in &lv {
                let mut t = v;
                while self.parent[t] != NONE {
                    t = self.parent[t];
                }
                if self.root_of[v] != t {
                    return Err(format!("root_of({}) stale", v));
                }
            }
        }
        Ok(())
    }
}
