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

//! Solver state shared by the searches and the scaling drivers.
//!
//! `w` is the weight in force. Reweighting is applied literally, so
//! `w[e] = plain(e) - pi[u] - pi[v]` where `plain` follows the doubling
//! recurrence of the scales.

use crate::blossom::BlossomForest;
use crate::graph::{init_scales, EdgeId, Graph, Matching, VertexId, WeightScales};
use crate::old::OldForest;

#[derive(Clone, Debug)]
pub struct State {
    pub g: Graph,
    pub scales: WeightScales,
    pub w: Vec<i64>,
    pub pi: Vec<i64>,
    pub y: Vec<i64>,
    pub mate: Matching,
    pub forest: BlossomForest,
    pub old: OldForest,
}

impl State {
    pub fn new(mut g: Graph) -> State {
        g.reserve_dummies();
        let nv = g.vertex_capacity();
        let ne = g.edge_capacity();
        let scales = init_scales(&g);
        State {
            scales,
            w: vec![0; ne],
            pi: vec![0; nv],
            y: vec![0; nv],
            mate: Matching::new(nv),
            forest: BlossomForest::new(nv),
            old: OldForest::empty(nv),
            g,
        }
    }

    /// Plain scaled weight of `e`, undoing the reweighting offsets.
    pub fn plain_weight(&self, e: EdgeId) -> i64 {
        let ed = self.g.edge(e);
        self.w[e] + self.pi[ed.u] + self.pi[ed.v]
    }

    /// y(u) + y(v) plus z of every current and inherited blossom holding
    /// both endpoints.
    pub fn yz(&self, e: EdgeId) -> i64 {
        let ed = self.g.edge(e);
        self.y[ed.u]
            + self.y[ed.v]
            + self.forest.z_common(ed.u, ed.v)
            + self.old.z_common(ed.u, ed.v)
    }

    pub fn slack(&self, e: EdgeId) -> i64 {
        self.yz(e) - self.w[e]
    }

    pub fn is_matched_edge(&self, e: EdgeId) -> bool {
        self.mate.mate_edge(self.g.edge(e).u) == Some(e)
    }

    pub fn free_vertices(&self) -> Vec<VertexId> {
        self.g
            .active_vertices()
            .filter(|&v| !self.mate.is_matched(v))
            .collect()
    }

    pub fn free_count(&self) -> usize {
        self.g
            .active_vertices()
            .filter(|&v| !self.mate.is_matched(v))
            .count()
    }

    /// Dual objective restricted to `scope` (pass all active vertices for
    /// yz(V)). Blossoms inside the scope count z * floor(|B|/2); blossoms
    /// strictly containing it count z * floor(|S|/2).
    pub fn dual_objective(&self, scope: &[VertexId]) -> i64 {
        let mut mark = vec![false; self.g.vertex_capacity()];
        for &v in scope {
            mark[v] = true;
        }
        let s = scope.len();
        let mut total: i64 = scope.iter().map(|&v| self.y[v]).sum();
        let mut count = |members: &[VertexId], z: i64| {
            if z == 0 {
                return;
            }
            let inside = members.iter().filter(|&&v| mark[v]).count();
            if inside == members.len() {
                total += z * (members.len() / 2) as i64;
            } else if inside == s && members.len() > s {
                total += z * (s / 2) as i64;
            }
        };
        for b in self.forest.blossoms() {
            let lv = self.forest.leaves(b);
            count(&lv, self.forest.z(b));
        }
        for id in self.old.alive() {
            let nd = &self.old.nodes[id];
            count(&nd.members, nd.z);
        }
        total
    }

    pub fn dual_objective_all(&self) -> i64 {
        let all: Vec<VertexId> = self.g.active_vertices().collect();
        self.dual_objective(&all)
    }

    /// Moves z/2 onto every member and drops the inherited blossom.
    pub fn liquidate_old(&mut self, id: usize) -> i64 {
        let z = self.old.nodes[id].z;
        assert!(z % 2 == 0 && z >= 0, "inherited blossom {} has z = {}", id, z);
        let half = z / 2;
        for k in 0..self.old.nodes[id].members.len() {
            let v = self.old.nodes[id].members[k];
            self.y[v] += half;
        }
        self.old.kill(id);
        half
    }

    /// Liquidates a root blossom of the current family.
    pub fn liquidate_new(&mut self, b: usize) -> Vec<usize> {
        assert!(
            self.forest.parent(b).is_none(),
            "liquidate: blossom {} is not a root",
            b
        );
        let z = self.forest.z(b);
        assert!(z % 2 == 0 && z >= 0);
        for v in self.forest.leaves(b) {
            self.y[v] += z / 2;
        }
        self.forest.set_z(b, 0);
        self.forest.dissolve(b, false)
    }

    pub fn translate_old(&mut self, id: usize, units: i64) {
        let nd = &mut self.old.nodes[id];
        assert!(nd.z >= 2 * units, "translate: z({}) = {} < {}", id, nd.z, 2 * units);
        nd.z -= 2 * units;
        for k in 0..nd.members.len() {
            let v = nd.members[k];
            self.y[v] += units;
        }
    }

    pub fn translate_new(&mut self, b: usize) {
        let z = self.forest.z(b);
        assert!(z >= 2, "translate: z({}) = {}", b, z);
        self.forest.set_z(b, z - 2);
        for v in self.forest.leaves(b) {
            self.y[v] += 1;
        }
    }

    /// Flat view of the current matching's edge ids.
    pub fn matched_edges(&self) -> Vec<EdgeId> {
        self.mate.edges()
    }
}
