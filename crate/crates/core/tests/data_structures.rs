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


use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wmatch_core::queue::EventQueue;
use wmatch_core::sfm::{NaiveSplitFindmin, SfmError, SplitFindmin};
use wmatch_core::uf::{ForestUnionFind, NaiveUnionFind};

#[test]
fn sfm_fresh_lists_are_infinite() {
    let s = SplitFindmin::new(&[0, 1, 2]);
    assert_eq!(s.findmin(s.list(0)), None);
}

#[test]
fn sfm_split_then_findmin() {
    let mut s = SplitFindmin::new(&[0, 1, 2]);
    s.decreasekey(1, 5, 77);
    s.split(0).unwrap();
    assert_eq!(s.members(s.list(0)), &[0]);
    assert_eq!(s.members(s.list(1)), &[1, 2]);
    assert_eq!(s.findmin(s.list(1)), Some((5, 77)));
    assert_eq!(s.findmin(s.list(0)), None);
    assert_eq!(s.split(2), Err(SfmError::EmptyList));
}

#[test]
fn sfm_decreasekey_ignores_larger() {
    let mut s = SplitFindmin::new(&[3, 1]);
    assert!(s.decreasekey(3, 4, 0));
    assert!(!s.decreasekey(3, 9, 1));
    assert_eq!(s.findmin_element(s.list(1)), Some((4, 0, 3)));
}

fn sfm_agree(seed: u64, n: usize, ops: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut fast = SplitFindmin::new(&order);
    let mut slow = NaiveSplitFindmin::new(&order);
    for op in 0..ops {
        let u = rng.gen_range(0..n);
        match rng.gen_range(0..10) {
            0 => assert_eq!(fast.split(u), slow.split(u), "op {}", op),
            1..=5 => {
                let k = rng.gen_range(-1000..1000);
                assert_eq!(fast.decreasekey(u, k, op), slow.decreasekey(u, k, op));
            }
            _ => {
                let l = fast.list(u);
                assert_eq!(fast.members(l)[0], slow.list_head(u));
                assert_eq!(fast.findmin(l), slow.findmin_of(u), "op {}", op);
            }
        }
    }
}

#[test]
fn sfm_matches_naive_100k_ops() {
    sfm_agree(1, 300, 100_000);
}

fn uf_agree(seed: u64, n: usize, ops: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fast = ForestUnionFind::new(n);
    let mut slow = NaiveUnionFind::new(n);
    let mut in_tree: Vec<usize> = Vec::new();
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for op in 0..ops {
        match rng.gen_range(0..10) {
            0 | 1 if next < n => {
                if in_tree.is_empty() || rng.gen_bool(0.1) {
                    fast.make_root(next);
                    slow.make_root(next);
                } else {
                    let p = in_tree[rng.gen_range(0..in_tree.len())];
                    fast.addedge(p, next);
                    slow.addedge(p, next);
                    tree_edges.push((p, next));
                }
                in_tree.push(next);
                next += 1;
            }
            2 if !tree_edges.is_empty() => {
                let (a, b) = tree_edges[rng.gen_range(0..tree_edges.len())];
                let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
                fast.unite(a, b);
                slow.unite(a, b);
            }
            _ => {
                let x = rng.gen_range(0..n);
                assert_eq!(fast.find(x), slow.find(x), "op {}", op);
            }
        }
    }
    for x in 0..n {
        assert_eq!(fast.find(x), slow.find(x));
    }
}

#[test]
fn uf_fresh_is_identity() {
    let mut u = ForestUnionFind::new(4);
    assert!((0..4).all(|x| u.find(x) == x));
}

#[test]
fn uf_unite_along_tree_edge() {
    let mut u = ForestUnionFind::new(3);
    u.make_root(0);
    u.addedge(0, 1);
    u.addedge(1, 2);
    u.unite(2, 1);
    assert_eq!(u.find(2), 1);
    u.unite(0, 1);
    assert_eq!((u.find(0), u.find(1), u.find(2)), (0, 0, 0));
}

#[test]
#[should_panic(expected = "not an edge of T")]
fn uf_rejects_non_tree_union() {
    let mut u = ForestUnionFind::new(3);
    u.make_root(0);
    u.addedge(0, 1);
    u.addedge(0, 2);
    u.unite(1, 2);
}

#[test]
fn uf_matches_naive_100k_ops() {
    uf_agree(2, 2000, 100_000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sfm_random_sequences(seed in any::<u64>(), n in 1usize..60) {
        sfm_agree(seed, n, 1000);
    }

    #[test]
    fn uf_random_sequences(seed in any::<u64>(), n in 1usize..80) {
        uf_agree(seed, n, 1000);
    }

    /// Both queue kinds release the same (time, class) sequence.
    #[test]
    fn queues_agree(events in prop::collection::vec((0i64..40, 0usize..3), 0..200)) {
        let mut b = EventQueue::bucket(40);
        let mut o = EventQueue::ordered();
        for (i, &(t, c)) in events.iter().enumerate() {
            b.push(t, c, (t, c, i));
            o.push(t, c, (t, c, i));
        }
        let mut seen_b = Vec::new();
        let mut seen_o = Vec::new();
        while let Some((t, (_, c, _))) = b.pop() {
            seen_b.push((t, c));
        }
        while let Some((t, (_, c, _))) = o.pop() {
            seen_o.push((t, c));
        }
        prop_assert_eq!(seen_b, seen_o);
    }
}

#[test]
fn bucket_queue_drops_past_horizon() {
    let mut q = EventQueue::bucket(3);
    q.push(5, 0, ());
    q.push(3, 1, ());
    assert_eq!(q.dropped(), 1);
    assert_eq!(q.pop(), Some((3, ())));
    assert!(q.is_empty());
}
