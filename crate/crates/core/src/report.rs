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

//! Per-run and per-scale statistics.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub scale: u32,
    /// Sum of z over inherited large blossoms, after doubling.
    pub liquidated_large_z: i64,
    pub search_calls: usize,
    pub dual_adjustments: i64,
    /// Free vertices after free vertex reduction, dummies included.
    pub free_after_reduction: usize,
    /// The same count restricted to original vertices.
    pub free_original_after_reduction: usize,
    pub dummies_added: usize,
    /// Sum of z over current large blossoms when the scale ends.
    pub large_z_end: i64,
    pub gabow_calls: usize,
    pub shells_searched: usize,
    pub shell_adjustments: i64,
    pub stage1_iterations: usize,
    /// Shell search with the most adjustments per vertex of its final C*,
    /// as (adjustments, n(C*)).
    pub worst_shell: (i64, i64),
    pub search_one_calls: usize,
    pub exhaustive_checks: usize,
    pub shadow_checks: usize,
    /// Certificate violations found at the scale boundary (checking only).
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub tau: usize,
    pub n: usize,
    pub m: usize,
    pub max_weight: i64,
    pub weight: i64,
    pub verified: Option<bool>,
    pub time_ms: f64,
    pub scales: Vec<ScaleReport>,
    pub finalization_searches: usize,
    pub finalization_free: usize,
}

impl RunReport {
    pub fn total_adjustments(&self) -> i64 {
        self.scales.iter().map(|s| s.dual_adjustments + s.shell_adjustments).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
