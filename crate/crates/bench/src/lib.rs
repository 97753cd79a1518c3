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


//! Instance suites shared by the criterion benches.

use wmatch_core::generate::{generate, Family, InstanceSpec};
use wmatch_core::Graph;

/// Perfect random graphs with `m = 4n` and weights up to 1024.
pub fn suite(ns: &[usize]) -> Vec<(String, Graph)> {
    ns.iter()
        .map(|&n| {
            let spec = InstanceSpec::new(Family::RandomGnm, n, 4 * n, 1024, 1).perfect();
            (spec.label(), generate(&spec).expect("suite instance"))
        })
        .collect()
}

/// Nested odd cycles; exercises blossom dismantling.
pub fn adversarial(n: usize) -> (String, Graph) {
    let spec = InstanceSpec::new(Family::NestedBlossomAdversarial, n, 2 * n, 1024, 7).perfect();
    (spec.label(), generate(&spec).expect("adversarial instance"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_shapes() {
        let s = suite(&[16, 32]);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].1.n(), 16);
        assert_eq!(adversarial(20).1.n(), 20);
    }
}
