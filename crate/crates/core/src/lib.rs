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

//! Maximum weight perfect matching on general graphs by scaling.
//!
//! Two drivers share one event-driven Edmonds search: the Liquidationist
//! and the Hybrid, which delegates the small inherited blossoms to a
//! Gabow-style dismantling step.

pub mod blossom;
pub mod eligibility;
pub mod engine;
pub mod error;
pub mod gabow;
pub mod generate;
pub mod graph;
pub mod hybrid;
pub mod liquidationist;
pub mod old;
pub mod queue;
pub mod report;
pub mod scaling;
pub mod search_one;
pub mod sfm;
pub mod state;
pub mod uf;
pub mod verify;

pub use error::{SolveError, SolveResult};
pub use graph::{Edge, EdgeId, Graph, GraphError, Matching, VertexId};
