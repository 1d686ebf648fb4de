#![allow(dead_code)]

use proptest::prelude::*;
use s5kit::frame::Frame;
use s5kit::surjection::Surjection;

pub fn frame(min: usize, max: usize) -> impl Strategy<Value = Frame> {
    (min..=max).prop_flat_map(|n| {
        proptest::collection::vec(0..n.max(1), n).prop_map(|labels| Frame::from_labels(&labels))
    })
}

/// A surjection `n ↠ m` built from a random map whose first `m` values are
/// forced to cover the codomain, then shuffled.
pub fn surjection(n: usize, m: usize) -> impl Strategy<Value = Surjection> {
    assert!(1 <= m && m <= n);
    proptest::collection::vec(1..=m, n - m).prop_flat_map(move |tail| {
        let mut values: Vec<usize> = (1..=m).collect();
        values.extend(tail);
        Just(values).prop_shuffle().prop_map(move |v| Surjection::new(v, m).unwrap())
    })
}

pub fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}
