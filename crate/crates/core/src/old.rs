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

//! Blossoms inherited from the previous scale.
//!
//! The family is frozen when a scale starts. Afterwards blossoms only
//! lose z or die (liquidation, translation, dissolution); nothing new is
//! ever added.

use crate::blossom::BlossomForest;
use crate::graph::{EdgeId, VertexId};

#[derive(Clone, Debug)]
pub struct OldBlossom {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Sorted member vertices.
    pub members: Vec<VertexId>,
    /// Edges of the blossom's own odd cycle.
    pub cycle_edges: Vec<EdgeId>,
    pub z: i64,
    pub alive: bool,
}

impl OldBlossom {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug, Default)]
pub struct OldForest {
    pub nodes: Vec<OldBlossom>,
    deepest: Vec<Option<usize>>,
}

impl OldForest {
    pub fn empty(nv: usize) -> OldForest {
        OldForest {
            nodes: Vec::new(),
            deepest: vec![None; nv],
        }
    }

    /// Copies every live blossom of `f`, parents before children.
    pub fn snapshot(f: &BlossomForest) -> OldForest {
        let nv = f.vertex_count();
        let mut out = OldForest::empty(nv);
        let mut id_of = vec![usize::MAX; f.capacity()];
        let mut stack: Vec<(usize, Option<usize>)> =
            f.root_blossoms().into_iter().map(|b| (b, None)).collect();
        while let Some((b, parent)) = stack.pop() {
            let id = out.nodes.len();
            id_of[b] = id;
            let mut members = f.leaves(b);
            members.sort_unstable();
            out.nodes.push(OldBlossom {
                parent,
                children: Vec::new(),
                members,
                cycle_edges: f.cycle(b).iter().map(|c| c.e).collect(),
                z: f.z(b),
                alive: true,
            });
            if let Some(p) = parent {
                out.nodes[p].children.push(id);
            }
            for &c in f.children(b) {
                if f.is_blossom(c) {
                    stack.push((c, Some(id)));
                }
            }
        }
        // parents come first, so the last write is the deepest
        for id in 0..out.nodes.len() {
            for k in 0..out.nodes[id].members.len() {
                let v = out.nodes[id].members[k];
                out.deepest[v] = Some(id);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn any_alive(&self) -> bool {
        self.nodes.iter().any(|b| b.alive)
    }

    pub fn alive(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(move |&i| self.nodes[i].alive)
    }

    pub fn z(&self, id: usize) -> i64 {
        self.nodes[id].z
    }

    pub fn size(&self, id: usize) -> usize {
        self.nodes[id].size()
    }

    /// Nearest live proper ancestor.
    pub fn alive_parent(&self, id: usize) -> Option<usize> {
        let mut p = self.nodes[id].parent;
        while let Some(x) = p {
            if self.nodes[x].alive {
                return Some(x);
            }
            p = self.nodes[x].parent;
        }
        None
    }

    /// Live blossoms not inside another live blossom.
    pub fn alive_roots(&self) -> Vec<usize> {
        self.alive().filter(|&i| self.alive_parent(i).is_none()).collect()
    }

    /// Live blossoms containing `v`, innermost first.
    pub fn chain_of(&self, v: VertexId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = self.deepest.get(v).copied().flatten();
        while let Some(x) = p {
            if self.nodes[x].alive {
                out.push(x);
            }
            p = self.nodes[x].parent;
        }
        out
    }

    /// Sum of z over live blossoms containing both endpoints.
    pub fn z_common(&self, u: VertexId, v: VertexId) -> i64 {
        let mut s = 0;
        let mut p = self.deepest.get(u).copied().flatten();
        while let Some(x) = p {
            let b = &self.nodes[x];
            if b.alive && b.contains(v) {
                s += b.z;
            }
            p = b.parent;
        }
        s
    }

    /// Sum of z over live blossoms that strictly contain blossom `id`.
    pub fn z_above(&self, id: usize) -> i64 {
        let mut s = 0;
        let mut p = self.nodes[id].parent;
        while let Some(x) = p {
            if self.nodes[x].alive {
                s += self.nodes[x].z;
            }
            p = self.nodes[x].parent;
        }
        s
    }

    /// Sum of z over live blossoms containing blossom `id` (itself included).
    pub fn z_from(&self, id: usize) -> i64 {
        let own = if self.nodes[id].alive { self.nodes[id].z } else { 0 };
        own + self.z_above(id)
    }

    pub fn scale_z(&mut self, factor: i64) {
        for b in &mut self.nodes {
            b.z *= factor;
        }
    }

    /// Marks blossom `id` dissolved. Its z must already be zero unless the
    /// caller redistributed it.
    pub fn kill(&mut self, id: usize) {
        self.nodes[id].alive = false;
        self.nodes[id].z = 0;
    }

    /// Live descendants of `id` in postorder, `id` last.
    pub fn postorder(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(id, false)];
        while let Some((x, done)) = stack.pop() {
            if done {
                if self.nodes[x].alive {
                    out.push(x);
                }
                continue;
            }
            stack.push((x, true));
            for &c in self.nodes[x].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Cycle edges of `id` and of all its sub-blossoms.
    pub fn blossom_edges(&self, id: usize) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            out.extend_from_slice(&self.nodes[x].cycle_edges);
            stack.extend_from_slice(&self.nodes[x].children);
        }
        out
    }
}
