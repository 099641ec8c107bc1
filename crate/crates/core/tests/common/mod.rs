#![allow(dead_code)]

use active_medoids::{Dataset, DistanceBook, DistanceMatrix, Status};
use proptest::prelude::*;

/// Points with coordinates in `[-50, 50]`.
pub fn points(n: std::ops::RangeInclusive<usize>, dim: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Dataset> {
    (n, dim).prop_flat_map(|(n, d)| {
        prop::collection::vec(-50.0f64..50.0, n * d)
            .prop_map(move |xs| Dataset::new("prop", d, xs, None, vec![]).unwrap())
    })
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn truth(d: &Dataset) -> DistanceMatrix {
    DistanceMatrix::from_fn(d.len(), |i, j| euclid(d.point(i), d.point(j)))
}

/// Single-source shortest paths over the exact entries of `book`, by an
/// array-scan Dijkstra. Path lengths accumulate from the source outwards.
pub fn dijkstra(book: &DistanceBook, src: usize) -> Vec<f64> {
    let n = book.size();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[src] = 0.0;
    for _ in 0..n {
        let Some(u) = (0..n)
            .filter(|&v| !done[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
        else {
            break;
        };
        done[u] = true;
        for v in 0..n {
            if v != u && !done[v] && book.status(u, v) == Status::Exact {
                let via = dist[u] + book.value(u, v);
                if via < dist[v] {
                    dist[v] = via;
                }
            }
        }
    }
    dist
}

/// Label vectors over `0..k` of the same length.
pub fn label_pair(n: std::ops::Range<usize>, k: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    n.prop_flat_map(move |n| (prop::collection::vec(0..k, n), prop::collection::vec(0..k, n)))
}
