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
use wmatch_core::eligibility::Criterion;
use wmatch_core::engine::{Engine, Halt, Label, SearchParams, Stamps};
use wmatch_core::queue::QueueKind;
use wmatch_core::search_one::{exhaustive_augmenting_path, search_one};
use wmatch_core::state::State;
use wmatch_core::verify::{check_state, Mode};
use wmatch_core::Graph;

/// Every y equal to the largest doubled weight: dominated, one parity.
fn start(n: usize, list: &[(usize, usize, i64)]) -> State {
    let g = Graph::from_edges(n, list.iter().copied()).unwrap();
    let mut st = State::new(g);
    let top = 2 * st.g.max_weight();
    for e in 0..st.g.m() {
        st.w[e] = 2 * st.g.edge(e).w;
    }
    for v in 0..n {
        st.y[v] = top;
    }
    st
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> State {
    let mut list = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                list.push((u, v, rng.gen_range(0..=20)));
            }
        }
    }
    start(n, &list)
}

#[test]
fn tight_edge_augments_immediately() {
    let mut st = start(2, &[(0, 1, 3)]);
    st.y[0] = 3;
    st.y[1] = 3;
    let out = Engine::new()
        .run(&mut st, &SearchParams::new(&[0], Criterion::One))
        .unwrap();
    assert_eq!(out.halt, Some(Halt::Augmented));
    assert_eq!(out.adjustments, 0);
    assert!(st.mate.is_matched(0) && st.mate.is_matched(1));
}

#[test]
fn star_with_matched_center_has_no_path() {
    // center 0 matched to 1, leaves 2 and 3 free; every edge tight
    let mut st = start(4, &[(0, 1, 0), (0, 2, 0), (0, 3, 0)]);
    st.mate.set(&st.g, 0);
    let out = Engine::new()
        .run(&mut st, &SearchParams::new(&[2, 3], Criterion::One))
        .unwrap();
    assert_eq!(out.halt, Some(Halt::Empty));
    assert_eq!(out.augmentations, 0);
    assert!(!st.mate.is_matched(2) && !st.mate.is_matched(3));
}

#[test]
fn zero_budget_processes_time_zero_only() {
    let mut st = start(4, &[(0, 1, 2), (2, 3, 1)]);
    st.y = vec![2; st.y.len()];
    let roots = [0, 1, 2, 3];
    let mut p = SearchParams::new(&roots, Criterion::One);
    p.budget = Some(0);
    p.exhaust = true;
    let out = Engine::new().run(&mut st, &p).unwrap();
    assert_eq!(out.adjustments, 0);
    // (0,1) is tight at the start, (2,3) is not
    assert!(st.mate.is_matched(0));
    assert!(!st.mate.is_matched(2));
}

#[test]
fn walkthrough_vertex_gains_six() {
    // inner during [4,6), [10,12), [16,19), outer during [19,20)
    let mut b1 = Stamps::default();
    b1.become_inner(4);
    let mut b2 = Stamps::child_of(&b1, 6);
    assert_eq!(b2.y_offset(6), 2);
    b2.become_inner(10);
    let mut u5 = Stamps::child_of(&b2, 12);
    assert_eq!(u5.label, Label::Free);
    assert_eq!(u5.y_offset(14), 4);
    u5.become_inner(16);
    u5.become_outer(19);
    assert_eq!(u5.y_offset(19), 7);
    assert_eq!(u5.y_offset(20), 6);
}

#[test]
fn stamps_identity_at_start() {
    let s = Stamps::default();
    assert_eq!((s.y_offset(0), s.z_offset(0)), (0, 0));
}

#[test]
fn search_one_two_disjoint_edges() {
    let mut st = start(4, &[(0, 1, 1), (2, 3, 1)]);
    // unmatched edges are eligible at slack -2 under the relaxed rule
    st.y = vec![0; st.y.len()];
    st.w[0] = 2;
    st.w[1] = 2;
    let out = search_one(&mut st, true).unwrap();
    assert_eq!(out.augmentations, 2);
    assert_eq!(st.free_count(), 0);
}

#[test]
fn search_one_single_path_through_matched_edge() {
    // u0 - v1 = w2 - x3 with (1,2) matched; all eligible
    let mut st = start(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
    st.y = vec![0; st.y.len()];
    st.w[0] = 2;
    st.w[1] = 0;
    st.w[2] = 2;
    st.mate.set(&st.g, 1);
    let out = search_one(&mut st, true).unwrap();
    assert_eq!(out.augmentations, 1);
    assert_eq!(st.free_count(), 0);
    assert!(exhaustive_augmenting_path(&st, Criterion::Two).is_none());
}

#[test]
fn search_one_without_eligible_edges() {
    let mut st = start(4, &[(0, 1, 1), (2, 3, 1)]);
    let out = search_one(&mut st, true).unwrap();
    assert_eq!(out.augmentations, 0);
    assert!(out.adjusted);
    assert_eq!(st.free_count(), 4);
}

#[test]
fn bucket_and_ordered_queues_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for it in 0..100 {
        let n = 2 * rng.gen_range(2..=6);
        let st0 = random_state(&mut rng, n);
        let roots: Vec<usize> = (0..n).collect();
        let mut results = Vec::new();
        for q in [QueueKind::Ordered, QueueKind::Bucket] {
            let mut st = st0.clone();
            let mut p = SearchParams::new(&roots, Criterion::One);
            p.queue = q;
            p.budget = Some(1000);
            p.shadow = true;
            let out = Engine::new().run(&mut st, &p).unwrap();
            assert!(check_state(&st, Mode::Cs).iter().all(|v| v.clause != "domination"), "it {}", it);
            results.push((out.halt, out.adjustments, out.augmentations));
        }
        assert_eq!(results[0], results[1], "it {}", it);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Lazy and eager duals agree at every event, and a search from every
    /// free vertex never breaks domination.
    #[test]
    fn lazy_duals_match_eager(seed in any::<u64>(), half in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut st = random_state(&mut rng, 2 * half);
        let mut eng = Engine::new();
        for _ in 0..half {
            let roots = st.free_vertices();
            if roots.is_empty() {
                break;
            }
            let mut p = SearchParams::new(&roots, Criterion::One);
            p.shadow = true;
            let out = eng.run(&mut st, &p).unwrap();
            prop_assert!(out.shadow_checks > 0);
            if !out.augmented() {
                break;
            }
        }
        for e in 0..st.g.m() {
            prop_assert!(st.slack(e) >= 0);
        }
    }
}
