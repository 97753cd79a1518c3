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


use wmatch_core::blossom::CycleEdge;
use wmatch_core::eligibility::{is_eligible, slack_star, Criterion};
use wmatch_core::graph::{init_scales, load_dimacs, matching_weight, GraphError};
use wmatch_core::state::State;
use wmatch_core::{Graph, Matching};

const FOUR_CYCLE: &str = "p edge 4 4\ne 1 2 1\ne 2 3 2\ne 3 4 1\ne 4 1 2\n";

#[test]
fn parse_single_edge() {
    let g = load_dimacs("p edge 2 1\ne 1 2 5\n", false).unwrap();
    assert_eq!((g.n(), g.m()), (2, 1));
    assert_eq!((g.edge(0).u, g.edge(0).v, g.edge(0).w), (0, 1, 5));
}

#[test]
fn parse_four_cycle() {
    let g = load_dimacs(FOUR_CYCLE, false).unwrap();
    assert_eq!((g.n(), g.m(), g.max_weight()), (4, 4, 2));
    assert!((0..4).all(|v| g.adj(v).len() == 2));
}

#[test]
fn parse_rejects_out_of_range() {
    let err = load_dimacs("p edge 4 1\ne 1 5 3\n", false).unwrap_err();
    match err {
        GraphError::Parse { line, msg } => {
            assert_eq!(line, 2);
            assert!(msg.contains("vertex 5 out of range"), "{}", msg);
        }
        other => panic!("unexpected {:?}", other),
    }
}

#[test]
fn parse_rejects_odd_unless_allowed() {
    assert!(load_dimacs("p edge 3 0\n", false).is_err());
    assert_eq!(load_dimacs("p edge 3 0\n", true).unwrap().n(), 3);
}

#[test]
fn matching_weights() {
    let g = load_dimacs(FOUR_CYCLE, false).unwrap();
    let w: Vec<i64> = g.edges().iter().map(|e| e.w).collect();
    assert_eq!(matching_weight(&Matching::new(4), &w), 0);
    let heavy = Matching::from_edges(&g, &[1, 3]);
    assert_eq!(matching_weight(&heavy, &w), 4);
    let one = Graph::from_edges(2, [(0, 1, 5)]).unwrap();
    assert_eq!(matching_weight(&Matching::from_edges(&one, &[0]), &[5]), 5);
}

#[test]
fn scale_parameters() {
    let g = Graph::from_edges(4, [(0, 1, 5), (2, 3, 1)]).unwrap();
    let s = init_scales(&g);
    assert_eq!((s.multiplier, s.wbar[0], s.scale_count), (3, 15, 4));

    let z = Graph::from_edges(4, [(0, 1, 0), (2, 3, 0)]).unwrap();
    let s = init_scales(&z);
    assert_eq!((s.wbar[0], s.wbar[1], s.scale_count), (0, 0, 1));

    let t = Graph::from_edges(2, [(0, 1, 1)]).unwrap();
    let s = init_scales(&t);
    assert_eq!((s.multiplier, s.wbar[0], s.scale_count), (2, 2, 1));
    // the lone digit carries the whole weight
    assert_eq!(s.digit(0, 1), 2);
}

#[test]
fn digits_reconstruct_and_recur() {
    let g = Graph::from_edges(2, [(0, 1, 5)]).unwrap();
    let mut s = init_scales(&g);
    assert_eq!(s.wbar[0], 10);
    assert_eq!(s.reconstruct(0), 10);
    let digits: Vec<i64> = (1..=s.scale_count).map(|i| s.digit(0, i)).collect();
    assert_eq!(digits, vec![1, 0, 1, 0]);
    s.current_scale = 2;
    s.w[0] = 3;
    s.advance();
    assert_eq!(s.w[0], 8);
}

/// 0-1-2 triangle with pendant 3 on vertex 2; edge ids 0..4.
fn triangle() -> State {
    let g = Graph::from_edges(4, [(0, 1, 2), (1, 2, 2), (2, 0, 2), (2, 3, 2)]).unwrap();
    State::new(g)
}

fn shrink_triangle(st: &mut State) -> usize {
    st.mate.set(&st.g, 0);
    st.forest.shrink(
        vec![2, 0, 1],
        vec![
            CycleEdge { e: 2, a: 2, b: 0 },
            CycleEdge { e: 0, a: 0, b: 1 },
            CycleEdge { e: 1, a: 1, b: 2 },
        ],
    )
}

#[test]
fn yz_definition() {
    let mut st = triangle();
    assert_eq!(st.yz(0), 0);
    let b = shrink_triangle(&mut st);
    st.y[0] = 1;
    st.y[1] = 2;
    st.forest.set_z(b, 4);
    assert_eq!(st.yz(0), 7);
    // straddling edge does not see z
    st.y = vec![0; st.y.len()];
    assert_eq!(st.yz(3), 0);
}

#[test]
fn dual_objective_counts_blossoms() {
    let mut st = triangle();
    assert_eq!(st.dual_objective_all(), 0);
    let b = shrink_triangle(&mut st);
    for v in 0..4 {
        st.y[v] = 1;
    }
    st.forest.set_z(b, 2);
    assert_eq!(st.dual_objective_all(), 6);
}

#[test]
fn liquidation_semantics() {
    let mut st = triangle();
    let b = shrink_triangle(&mut st);
    for v in 0..4 {
        st.y[v] = 1;
    }
    st.forest.set_z(b, 4);
    let (before, inside, across) = (st.dual_objective_all(), st.yz(0), st.yz(3));
    st.liquidate_new(b);
    assert_eq!(&st.y[..3], &[3, 3, 3]);
    assert!(!st.forest.is_alive(b));
    assert_eq!(st.dual_objective_all(), before + 2);
    assert_eq!(st.yz(0), inside);
    assert_eq!(st.yz(3), across + 2);
}

#[test]
fn liquidating_zero_blossom_only_removes_it() {
    let mut st = triangle();
    let b = shrink_triangle(&mut st);
    st.liquidate_new(b);
    assert!(st.y.iter().all(|&y| y == 0));
    assert_eq!(st.forest.root_of(0), 0);
}

#[test]
fn translation_semantics() {
    let mut st = triangle();
    let b = shrink_triangle(&mut st);
    st.forest.set_z(b, 4);
    let (inside, across) = (st.yz(0), st.yz(3));
    st.translate_new(b);
    assert_eq!(st.forest.z(b), 2);
    assert_eq!(&st.y[..3], &[1, 1, 1]);
    assert_eq!(st.yz(3), across + 1);
    // y rises by 2 on an inner edge while z(b) falls by 2
    assert_eq!(st.yz(0), inside);
    st.translate_new(b);
    let mut liq = triangle();
    let lb = shrink_triangle(&mut liq);
    liq.forest.set_z(lb, 4);
    liq.liquidate_new(lb);
    assert_eq!(&st.y[..4], &liq.y[..4]);
}

#[test]
fn shrink_smallest_blossom() {
    let mut st = triangle();
    let b = shrink_triangle(&mut st);
    assert_eq!(st.forest.size(b), 3);
    assert_eq!(st.forest.base(b), 2);
    assert_eq!(st.yz(0), 0);
    assert!(st.forest.validate(&st.g, st.mate.mates()).is_ok());
}

/// Pentagon 0..5 whose first node is a triangle blossom on {5, 6, 7}.
fn nested() -> (State, usize, usize) {
    let g = Graph::from_edges(
        8,
        [
            (5, 6, 1), (6, 7, 1), (7, 5, 1),
            (5, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1),
        ],
    )
    .unwrap();
    let mut st = State::new(g);
    st.mate.set(&st.g, 1); // 6-7
    st.mate.set(&st.g, 4); // 1-2
    st.mate.set(&st.g, 6); // 3-4
    let inner = st.forest.shrink(
        vec![5, 6, 7],
        vec![
            CycleEdge { e: 0, a: 5, b: 6 },
            CycleEdge { e: 1, a: 6, b: 7 },
            CycleEdge { e: 2, a: 7, b: 5 },
        ],
    );
    let outer = st.forest.shrink(
        vec![inner, 1, 2, 3, 4],
        vec![
            CycleEdge { e: 3, a: 5, b: 1 },
            CycleEdge { e: 4, a: 1, b: 2 },
            CycleEdge { e: 5, a: 2, b: 3 },
            CycleEdge { e: 6, a: 3, b: 4 },
            CycleEdge { e: 7, a: 4, b: 5 },
        ],
    );
    (st, inner, outer)
}

#[test]
fn nested_blossom_size_and_dissolve() {
    let (mut st, inner, outer) = nested();
    assert_eq!(st.forest.size(outer), 7);
    assert!(st.forest.validate(&st.g, st.mate.mates()).is_ok());
    let kids = st.forest.dissolve(outer, false);
    assert_eq!(kids, vec![inner, 1, 2, 3, 4]);
    assert!(st.forest.is_alive(inner));
    assert_eq!(st.forest.root_of(6), inner);
    // the surviving child still matches all but its base
    let matched_inside = [0, 1, 2]
        .iter()
        .filter(|&&e| st.mate.contains(&st.g, e))
        .count();
    assert_eq!(matched_inside, 1);
    assert!(st.forest.validate(&st.g, st.mate.mates()).is_ok());
}

#[test]
fn base_paths() {
    let mut st = triangle();
    let b = shrink_triangle(&mut st);
    assert!(st.forest.base_path(b, 2).is_empty());
    let p = st.forest.base_path(b, 0);
    assert_eq!(p, vec![(0, 0, 1), (1, 1, 2)]);
    let (st, _, outer) = nested();
    for v in [1, 2, 3, 4, 6, 7] {
        let p = st.forest.base_path(outer, v);
        assert_eq!(p.len() % 2, 0, "vertex {}", v);
        assert_eq!(p.last().unwrap().2, 5);
    }
}

#[test]
fn augment_moves_base() {
    let mut st = triangle();
    let b = shrink_triangle(&mut st);
    let mut mates = st.mate.mates().to_vec();
    st.forest.augment_blossom(b, 0, &mut mates);
    assert_eq!(st.forest.base(b), 0);
    assert_eq!(mates[1], Some(1));
    assert_eq!(mates[2], Some(1));
    mates[0] = None;
    assert!(st.forest.validate(&st.g, &mates).is_ok());
}

#[test]
fn augment_through_nested_blossom() {
    for v in [1, 2, 3, 4, 6, 7] {
        let (mut st, _, outer) = nested();
        let mut mates = st.mate.mates().to_vec();
        st.forest.augment_blossom(outer, v, &mut mates);
        mates[v] = None;
        assert_eq!(st.forest.base(outer), v);
        assert_eq!(mates.iter().take(8).filter(|m| m.is_some()).count(), 6);
        assert!(st.forest.validate(&st.g, &mates).is_ok(), "entry {}", v);
    }
}

#[test]
fn slack_values() {
    let mut st = triangle();
    st.w[0] = 4;
    st.y[0] = 3;
    st.y[1] = 3;
    assert_eq!(st.slack(0), 2);
    st.y[1] = 1;
    assert_eq!(st.slack(0), 0);
}

#[test]
fn slack_star_table() {
    assert_eq!(slack_star(-2, Criterion::Two, false), Ok(0));
    assert_eq!(slack_star(0, Criterion::Two, true), Ok(0));
    assert_eq!(slack_star(4, Criterion::One, false), Ok(4));
    assert_eq!(slack_star(-2, Criterion::Three, false), Ok(0));
    assert_eq!(slack_star(3, Criterion::Three, true), Ok(3));
    assert!(slack_star(-3, Criterion::Three, false).is_err());
}

#[test]
fn eligibility_table() {
    assert!(is_eligible(7, Criterion::Two, false, true));
    assert!(!is_eligible(7, Criterion::One, false, true));
    assert!(!is_eligible(-2, Criterion::One, false, false));
    assert!(is_eligible(-2, Criterion::Two, false, false));
    assert!(is_eligible(-2, Criterion::Three, false, false));
    for c in [Criterion::One, Criterion::Two, Criterion::Three] {
        assert!(!is_eligible(1, c, false, false));
        assert!(!is_eligible(1, c, true, false));
    }
    assert!(is_eligible(0, Criterion::Two, true, false));
    assert!(!is_eligible(0, Criterion::Two, false, false));
}
