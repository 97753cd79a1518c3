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

//! Monotone event queues keyed by virtual time.
//!
//! Events at equal times come out by class (lower first), then in
//! insertion order within the ordered queue and LIFO within a bucket.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub const CLASSES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueueKind {
    Bucket,
    Ordered,
}

#[derive(Clone, Debug)]
pub enum EventQueue<T> {
    Bucket {
        buckets: Vec<[Vec<T>; CLASSES]>,
        cursor: usize,
        len: usize,
        dropped: usize,
    },
    Ordered {
        heap: BinaryHeap<Reverse<(i64, usize, u64, usize)>>,
        items: Vec<Option<T>>,
        seq: u64,
        floor: i64,
    },
}

impl<T> EventQueue<T> {
    /// A bucket queue covers times `0..=horizon`; later events are dropped.
    pub fn bucket(horizon: i64) -> EventQueue<T> {
        let n = horizon.max(0) as usize + 1;
        EventQueue::Bucket {
            buckets: (0..n).map(|_| [Vec::new(), Vec::new(), Vec::new()]).collect(),
            cursor: 0,
            len: 0,
            dropped: 0,
        }
    }

    pub fn ordered() -> EventQueue<T> {
        EventQueue::Ordered {
            heap: BinaryHeap::new(),
            items: Vec::new(),
            seq: 0,
            floor: 0,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            EventQueue::Bucket { len, .. } => *len,
            EventQueue::Ordered { heap, .. } => heap.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Events discarded for lying past the horizon.
    pub fn dropped(&self) -> usize {
        match self {
            EventQueue::Bucket { dropped, .. } => *dropped,
            EventQueue::Ordered { .. } => 0,
        }
    }

    pub fn push(&mut self, time: i64, class: usize, ev: T) {
        assert!(class < CLASSES);
        match self {
            EventQueue::Bucket {
                buckets,
                cursor,
                len,
                dropped,
            } => {
                assert!(time >= *cursor as i64, "event at {} before now {}", time, cursor);
                let t = time as usize;
                if t >= buckets.len() {
                    *dropped += 1;
                    return;
                }
                buckets[t][class].push(ev);
                *len += 1;
            }
            EventQueue::Ordered {
                heap,
                items,
                seq,
                floor,
            } => {
                assert!(time >= *floor, "event at {} before now {}", time, floor);
                items.push(Some(ev));
                heap.push(Reverse((time, class, *seq, items.len() - 1)));
                *seq += 1;
            }
        }
    }

    pub fn peek_time(&mut self) -> Option<i64> {
        match self {
            EventQueue::Bucket {
                buckets,
                cursor,
                len,
                ..
            } => {
                if *len == 0 {
                    return None;
                }
                while buckets[*cursor].iter().all(|b| b.is_empty()) {
                    *cursor += 1;
                }
                Some(*cursor as i64)
            }
            EventQueue::Ordered { heap, .. } => heap.peek().map(|Reverse(k)| k.0),
        }
    }

    pub fn pop(&mut self) -> Option<(i64, T)> {
        let t = self.peek_time()?;
        match self {
            EventQueue::Bucket {
                buckets,
                cursor,
                len,
                ..
            } => {
                for c in 0..CLASSES {
                    if let Some(ev) = buckets[*cursor][c].pop() {
                        *len -= 1;
                        return Some((t, ev));
                    }
                }
                unreachable!()
            }
            EventQueue::Ordered {
                heap, items, floor, ..
            } => {
                let Reverse((time, _, _, idx)) = heap.pop().unwrap();
                *floor = time;
                Some((time, items[idx].take().unwrap()))
            }
        }
    }
}
