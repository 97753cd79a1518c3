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

//! Edge slack, the three eligibility criteria and slack★.

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, VertexId};
use crate::state::State;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    /// Tight edges only.
    One,
    /// Unmatched at slack -2, matched at slack 0, plus blossom edges.
    Two,
    /// Slack 0 or -2, either way.
    Three,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackViolation {
    pub slack: i64,
    pub matched: bool,
    pub criterion: Criterion,
}

/// Distance from eligibility as the duals move. Errors on a slack the
/// criterion's invariant rules out.
pub fn slack_star(slack: i64, c: Criterion, matched: bool) -> Result<i64, SlackViolation> {
    let bad = || SlackViolation {
        slack,
        matched,
        criterion: c,
    };
    match c {
        Criterion::One => Ok(slack),
        Criterion::Two => {
            if matched {
                Ok(-slack)
            } else {
                Ok(slack + 2)
            }
        }
        Criterion::Three => {
            if slack >= 0 {
                Ok(slack)
            } else if slack >= -2 {
                Ok(slack + 2)
            } else {
                Err(bad())
            }
        }
    }
}

/// Eligibility of an edge that is not internal to a current blossom.
pub fn eligible_by_slack(slack: i64, c: Criterion, matched: bool) -> bool {
    match c {
        Criterion::One => slack == 0,
        Criterion::Two => {
            if matched {
                slack == 0
            } else {
                slack == -2
            }
        }
        Criterion::Three => slack == 0 || slack == -2,
    }
}

/// Full predicate; blossom-internal edges count only under Criterion 2.
pub fn is_eligible(slack: i64, c: Criterion, matched: bool, in_blossom: bool) -> bool {
    if in_blossom && c == Criterion::Two {
        return true;
    }
    eligible_by_slack(slack, c, matched)
}

/// The contracted eligible graph: root blossoms as nodes, eligible edges
/// between distinct roots.
pub struct EligibleView<'a> {
    st: &'a State,
    c: Criterion,
    scope: Option<&'a [bool]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ViewEdge {
    pub e: EdgeId,
    pub a: usize,
    pub b: usize,
    pub matched: bool,
}

impl<'a> EligibleView<'a> {
    pub fn new(st: &'a State, c: Criterion) -> EligibleView<'a> {
        EligibleView { st, c, scope: None }
    }

    pub fn with_scope(st: &'a State, c: Criterion, scope: &'a [bool]) -> EligibleView<'a> {
        EligibleView {
            st,
            c,
            scope: Some(scope),
        }
    }

    fn in_scope(&self, v: VertexId) -> bool {
        self.scope.map_or(true, |s| s[v])
    }

    /// Contracted node of a vertex.
    pub fn node(&self, v: VertexId) -> usize {
        self.st.forest.root_of(v)
    }

    pub fn nodes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .st
            .g
            .active_vertices()
            .filter(|&v| self.in_scope(v))
            .map(|v| self.node(v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn edge(&self, e: EdgeId) -> Option<ViewEdge> {
        if !self.st.g.edge_active(e) {
            return None;
        }
        let ed = self.st.g.edge(e);
        if !self.in_scope(ed.u) || !self.in_scope(ed.v) {
            return None;
        }
        let (a, b) = (self.node(ed.u), self.node(ed.v));
        if a == b {
            return None;
        }
        let matched = self.st.is_matched_edge(e);
        if !eligible_by_slack(self.st.slack(e), self.c, matched) {
            return None;
        }
        Some(ViewEdge { e, a, b, matched })
    }

    pub fn edges(&self) -> Vec<ViewEdge> {
        (0..self.st.g.edge_capacity()).filter_map(|e| self.edge(e)).collect()
    }

    /// Eligible edges leaving the contracted node that holds `v`.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = ViewEdge> + '_ {
        self.st.g.adj(v).iter().filter_map(move |&e| self.edge(e))
    }
}
