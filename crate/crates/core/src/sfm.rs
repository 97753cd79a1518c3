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

//! Split-findmin over a fixed element order.
//!
//! Lists are contiguous runs of the initial order, so a list is named by
//! the position of its first element. A segment tree answers range minima;
//! ties go to the earlier position.

use std::collections::BTreeSet;

use thiserror::Error;

pub const INF: i64 = i64::MAX;
const NIL: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SfmError {
    #[error("split after the last element of a list would leave it empty")]
    EmptyList,
}

#[derive(Clone, Debug)]
pub struct SplitFindmin {
    order: Vec<usize>,
    pos: Vec<usize>,
    key: Vec<i64>,
    witness: Vec<usize>,
    tree: Vec<usize>,
    size: usize,
    starts: BTreeSet<usize>,
}

impl SplitFindmin {
    /// One list holding `order`; every key starts at +inf.
    pub fn new(order: &[usize]) -> SplitFindmin {
        let k = order.len();
        let cap = order.iter().copied().max().map_or(0, |m| m + 1);
        let mut pos = vec![NIL; cap];
        for (i, &x) in order.iter().enumerate() {
            assert!(pos[x] == NIL, "element {} repeated", x);
            pos[x] = i;
        }
        let size = k.next_power_of_two().max(1);
        let mut tree = vec![NIL; 2 * size];
        for i in 0..k {
            tree[size + i] = i;
        }
        let mut s = SplitFindmin {
            order: order.to_vec(),
            pos,
            key: vec![INF; k],
            witness: vec![NIL; k],
            tree,
            size,
            starts: BTreeSet::new(),
        };
        for i in (1..size).rev() {
            s.tree[i] = s.better(s.tree[2 * i], s.tree[2 * i + 1]);
        }
        if k > 0 {
            s.starts.insert(0);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    fn better(&self, a: usize, b: usize) -> usize {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.key[b] < self.key[a] {
            b
        } else {
            a
        }
    }

    pub fn position(&self, u: usize) -> usize {
        self.pos[u]
    }

    /// Name of the list holding `u`.
    pub fn list(&self, u: usize) -> usize {
        let p = self.pos[u];
        *self.starts.range(..=p).next_back().expect("element outside all lists")
    }

    fn list_end(&self, start: usize) -> usize {
        self.starts
            .range(start + 1..)
            .next()
            .copied()
            .unwrap_or(self.order.len())
    }

    /// Elements of the list named `start`, in order.
    pub fn members(&self, start: usize) -> &[usize] {
        &self.order[start..self.list_end(start)]
    }

    /// Cuts the list of `u` right after `u`.
    pub fn split(&mut self, u: usize) -> Result<(), SfmError> {
        let p = self.pos[u];
        let start = self.list(u);
        if p + 1 >= self.list_end(start) {
            return Err(SfmError::EmptyList);
        }
        self.starts.insert(p + 1);
        Ok(())
    }

    pub fn key(&self, u: usize) -> i64 {
        self.key[self.pos[u]]
    }

    /// Lowers key(u) to `k` with `witness` attached; no effect unless `k`
    /// is smaller. Returns whether the key changed.
    pub fn decreasekey(&mut self, u: usize, k: i64, witness: usize) -> bool {
        let p = self.pos[u];
        if k >= self.key[p] {
            return false;
        }
        self.key[p] = k;
        self.witness[p] = witness;
        let mut i = (p + self.size) / 2;
        while i >= 1 {
            self.tree[i] = self.better(self.tree[2 * i], self.tree[2 * i + 1]);
            i /= 2;
        }
        true
    }

    fn range_min(&self, lo: usize, hi: usize) -> usize {
        // leftmost minimum over [lo, hi)
        let mut best = NIL;
        let mut right = NIL;
        let (mut l, mut r) = (lo + self.size, hi + self.size);
        while l < r {
            if l & 1 == 1 {
                best = self.better(best, self.tree[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                right = self.better(self.tree[r], right);
            }
            l /= 2;
            r /= 2;
        }
        self.better(best, right)
    }

    /// Smallest key in the list named `start` and the witness attached to
    /// it, or `None` while every key is +inf.
    pub fn findmin(&self, start: usize) -> Option<(i64, usize)> {
        let end = self.list_end(start);
        let p = self.range_min(start, end);
        if p == NIL || self.key[p] == INF {
            None
        } else {
            Some((self.key[p], self.witness[p]))
        }
    }

    /// Minimum together with the element holding it.
    pub fn findmin_element(&self, start: usize) -> Option<(i64, usize, usize)> {
        let end = self.list_end(start);
        let p = self.range_min(start, end);
        if p == NIL || self.key[p] == INF {
            None
        } else {
            Some((self.key[p], self.witness[p], self.order[p]))
        }
    }
}

/// List-of-lists reference implementation, for testing.
#[derive(Clone, Debug)]
pub struct NaiveSplitFindmin {
    lists: Vec<Vec<usize>>,
    key: Vec<i64>,
    witness: Vec<usize>,
}

impl NaiveSplitFindmin {
    pub fn new(order: &[usize]) -> NaiveSplitFindmin {
        let cap = order.iter().copied().max().map_or(0, |m| m + 1);
        NaiveSplitFindmin {
            lists: if order.is_empty() {
                Vec::new()
            } else {
                vec![order.to_vec()]
            },
            key: vec![INF; cap],
            witness: vec![NIL; cap],
        }
    }

    fn index(&self, u: usize) -> (usize, usize) {
        for (i, l) in self.lists.iter().enumerate() {
            if let Some(j) = l.iter().position(|&x| x == u) {
                return (i, j);
            }
        }
        panic!("element {} not present", u);
    }

    /// First element of the list holding `u`.
    pub fn list_head(&self, u: usize) -> usize {
        let (i, _) = self.index(u);
        self.lists[i][0]
    }

    pub fn split(&mut self, u: usize) -> Result<(), SfmError> {
        let (i, j) = self.index(u);
        if j + 1 == self.lists[i].len() {
            return Err(SfmError::EmptyList);
        }
        let tail = self.lists[i].split_off(j + 1);
        self.lists.insert(i + 1, tail);
        Ok(())
    }

    pub fn decreasekey(&mut self, u: usize, k: i64, witness: usize) -> bool {
        if k >= self.key[u] {
            return false;
        }
        self.key[u] = k;
        self.witness[u] = witness;
        true
    }

    pub fn findmin_of(&self, u: usize) -> Option<(i64, usize)> {
        let (i, _) = self.index(u);
        let mut best: Option<(i64, usize)> = None;
        for &x in &self.lists[i] {
            if self.key[x] != INF && best.map_or(true, |(k, _)| self.key[x] < k) {
                best = Some((self.key[x], self.witness[x]));
            }
        }
        best
    }
}
