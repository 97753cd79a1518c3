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

//! Seeded instance generators.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RandomGnm,
    RandomRegularIsh,
    NestedBlossomAdversarial,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::RandomGnm => "random-gnm",
            Family::RandomRegularIsh => "random-regular-ish",
            Family::NestedBlossomAdversarial => "nested-blossom-adversarial",
        })
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Family, String> {
        match s {
            "random-gnm" | "gnm" => Ok(Family::RandomGnm),
            "random-regular-ish" | "regular" => Ok(Family::RandomRegularIsh),
            "nested-blossom-adversarial" | "nested" => Ok(Family::NestedBlossomAdversarial),
            _ => Err(format!("unknown generator `{}`", s)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub generator: Family,
    pub n: usize,
    pub m: usize,
    pub max_weight: i64,
    pub seed: u64,
    /// Add the edges of a random perfect matching on top.
    pub guarantee_perfect: bool,
}

impl InstanceSpec {
    pub fn new(generator: Family, n: usize, m: usize, max_weight: i64, seed: u64) -> InstanceSpec {
        InstanceSpec {
            generator,
            n,
            m,
            max_weight,
            seed,
            guarantee_perfect: false,
        }
    }

    pub fn perfect(mut self) -> InstanceSpec {
        self.guarantee_perfect = true;
        self
    }

    /// Short name used in bench CSV rows.
    pub fn label(&self) -> String {
        format!(
            "{}-n{}-m{}-N{}-s{}{}",
            self.generator,
            self.n,
            self.m,
            self.max_weight,
            self.seed,
            if self.guarantee_perfect { "-p" } else { "" }
        )
    }
}

struct Builder {
    n: usize,
    seen: HashSet<(usize, usize)>,
    list: Vec<(usize, usize, i64)>,
}

impl Builder {
    fn add(&mut self, u: usize, v: usize, w: i64) -> bool {
        if u == v {
            return false;
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return false;
        }
        self.list.push((key.0, key.1, w));
        true
    }

    fn full(&self) -> bool {
        self.list.len() >= self.n * self.n.saturating_sub(1) / 2
    }
}

fn random_pairs(b: &mut Builder, rng: &mut ChaCha8Rng, m: usize, top: i64) {
    let n = b.n;
    if n < 2 {
        return;
    }
    while b.list.len() < m && !b.full() {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let w = rng.gen_range(0..=top);
        b.add(u, v, w);
    }
}

fn regular_ish(b: &mut Builder, rng: &mut ChaCha8Rng, m: usize, top: i64) {
    let n = b.n;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut stale = 0;
    while b.list.len() < m && !b.full() && stale < 8 {
        perm.shuffle(rng);
        let before = b.list.len();
        for k in 0..n / 2 {
            if b.list.len() >= m {
                break;
            }
            let w = rng.gen_range(0..=top);
            b.add(perm[2 * k], perm[2 * k + 1], w);
        }
        stale = if b.list.len() == before { stale + 1 } else { 0 };
    }
    random_pairs(b, rng, m, top);
}

/// Towers of odd cycles wrapped around each other, heaviest innermost,
/// joined in pairs, plus light random edges.
fn nested(b: &mut Builder, rng: &mut ChaCha8Rng, m: usize, top: i64) {
    let n = b.n;
    let top = top.max(1);
    let mut next = 0;
    let mut towers: Vec<Vec<usize>> = Vec::new();
    while n - next >= 3 {
        let room = n - next;
        let depth = rng.gen_range(1..=((room - 1) / 2).min(6));
        let mut members = vec![next, next + 1, next + 2];
        b.add(next, next + 1, top);
        b.add(next + 1, next + 2, top);
        b.add(next + 2, next, top);
        next += 3;
        for j in 1..depth {
            let (x, y) = (next, next + 1);
            next += 2;
            let w = (top - j as i64).max(0);
            let a = *members.choose(rng).unwrap();
            let c = *members.iter().filter(|&&v| v != a).collect::<Vec<_>>().choose(rng).unwrap();
            b.add(a, x, w);
            b.add(x, y, w);
            b.add(y, *c, w);
            members.extend([x, y]);
        }
        towers.push(members);
    }
    for k in 0..towers.len() / 2 {
        let u = *towers[2 * k].choose(rng).unwrap();
        let v = *towers[2 * k + 1].choose(rng).unwrap();
        b.add(u, v, top / 2);
    }
    let mut rest: Vec<usize> = (next..n).collect();
    if let Some(t) = towers.last() {
        rest.push(*t.choose(rng).unwrap());
    }
    for pair in rest.windows(2) {
        b.add(pair[0], pair[1], rng.gen_range(0..=top / 2));
    }
    random_pairs(b, rng, m, top / 4);
}

/// Builds the instance; identical specs give identical graphs.
pub fn generate(spec: &InstanceSpec) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut b = Builder {
        n: spec.n,
        seen: HashSet::new(),
        list: Vec::new(),
    };
    let top = spec.max_weight.max(0);
    if spec.guarantee_perfect && spec.n >= 2 {
        let mut perm: Vec<usize> = (0..spec.n).collect();
        perm.shuffle(&mut rng);
        for k in 0..spec.n / 2 {
            let w = rng.gen_range(0..=top);
            b.add(perm[2 * k], perm[2 * k + 1], w);
        }
    }
    match spec.generator {
        Family::RandomGnm => random_pairs(&mut b, &mut rng, spec.m, top),
        Family::RandomRegularIsh => regular_ish(&mut b, &mut rng, spec.m, top),
        Family::NestedBlossomAdversarial => nested(&mut b, &mut rng, spec.m, top),
    }
    Graph::from_edges(spec.n, b.list)
}
