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

//! Union-find over a growing forest T.
//!
//! Elements join T with `addedge(parent, child)`; `unite` may only merge
//! across an edge of T, and the merged set is represented by its most
//! ancestral element (the top of the parent side).

const NIL: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct ForestUnionFind {
    link: Vec<usize>,
    rank: Vec<u8>,
    top: Vec<usize>,
    tparent: Vec<usize>,
    in_tree: Vec<bool>,
}

impl ForestUnionFind {
    pub fn new(n: usize) -> ForestUnionFind {
        ForestUnionFind {
            link: (0..n).collect(),
            rank: vec![0; n],
            top: (0..n).collect(),
            tparent: vec![NIL; n],
            in_tree: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.link.len()
    }

    pub fn is_empty(&self) -> bool {
        self.link.is_empty()
    }

    pub fn in_tree(&self, x: usize) -> bool {
        self.in_tree[x]
    }

    pub fn tree_parent(&self, x: usize) -> Option<usize> {
        if self.tparent[x] == NIL {
            None
        } else {
            Some(self.tparent[x])
        }
    }

    /// Starts a new tree at `r`.
    pub fn make_root(&mut self, r: usize) {
        assert!(!self.in_tree[r], "element {} already in T", r);
        self.in_tree[r] = true;
    }

    /// Hangs the new element `child` below `parent` in T.
    pub fn addedge(&mut self, parent: usize, child: usize) {
        assert!(self.in_tree[parent], "addedge: parent {} not in T", parent);
        assert!(!self.in_tree[child], "addedge: child {} already in T", child);
        self.in_tree[child] = true;
        self.tparent[child] = parent;
    }

    fn rep(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.link[r] != r {
            r = self.link[r];
        }
        let mut c = x;
        while self.link[c] != r {
            let nx = self.link[c];
            self.link[c] = r;
            c = nx;
        }
        r
    }

    /// The most ancestral element of the set holding `x`.
    pub fn find(&mut self, x: usize) -> usize {
        let r = self.rep(x);
        self.top[r]
    }

    /// Merges the sets of `a` and `b`; `(a, b)` must be an edge of T.
    pub fn unite(&mut self, a: usize, b: usize) {
        let (parent, child) = if self.tparent[b] == a {
            (a, b)
        } else if self.tparent[a] == b {
            (b, a)
        } else {
            panic!("unite({}, {}): not an edge of T", a, b);
        };
        let rp = self.rep(parent);
        let rc = self.rep(child);
        if rp == rc {
            return;
        }
        let t = self.top[rp];
        let r = if self.rank[rp] < self.rank[rc] {
            self.link[rp] = rc;
            rc
        } else {
            if self.rank[rp] == self.rank[rc] {
                self.rank[rp] += 1;
            }
            self.link[rc] = rp;
            rp
        };
        self.top[r] = t;
    }
}

/// Reference implementation with explicit labels, for testing.
#[derive(Clone, Debug)]
pub struct NaiveUnionFind {
    label: Vec<usize>,
    tparent: Vec<usize>,
    in_tree: Vec<bool>,
}

impl NaiveUnionFind {
    pub fn new(n: usize) -> NaiveUnionFind {
        NaiveUnionFind {
            label: (0..n).collect(),
            tparent: vec![NIL; n],
            in_tree: vec![false; n],
        }
    }

    pub fn make_root(&mut self, r: usize) {
        assert!(!self.in_tree[r]);
        self.in_tree[r] = true;
    }

    pub fn addedge(&mut self, parent: usize, child: usize) {
        assert!(self.in_tree[parent] && !self.in_tree[child]);
        self.in_tree[child] = true;
        self.tparent[child] = parent;
    }

    pub fn find(&self, x: usize) -> usize {
        self.label[x]
    }

    pub fn unite(&mut self, a: usize, b: usize) {
        let (parent, child) = if self.tparent[b] == a {
            (a, b)
        } else if self.tparent[a] == b {
            (b, a)
        } else {
            panic!("unite({}, {}): not an edge of T", a, b);
        };
        let keep = self.label[parent];
        let gone = self.label[child];
        if keep == gone {
            return;
        }
        // labels are tops; the parent side's top survives
        for l in self.label.iter_mut() {
            if *l == gone {
                *l = keep;
            }
        }
    }
}
