//! Query-efficient k-medoids clustering for settings where each pairwise
//! distance has to be bought from an oracle.
//!
//! [`active::active_kmedoids`] asks exact distances inside small groups and
//! between a few prominent points of sibling groups, and bounds every other
//! pair from above through the triangle inequality. [`baseline::random_rival`]
//! asks random pairs instead and bounds the rest by shortest paths. Both finish
//! with plain k-medoids on the resulting [`book::DistanceBook`].
//!
//! The crate is `no_std` and needs only `alloc`.
//!
//! ```
//! use active_medoids::{active_kmedoids, gen_blobs, nmi, ActiveParams, DistanceOracle};
//!
//! let data = gen_blobs(2, 100, 2, 20.0, 1.0, 7).unwrap().dataset;
//! let mut oracle = DistanceOracle::euclidean(&data);
//! let out = active_kmedoids(&mut oracle, &ActiveParams::new(2, 42)).unwrap();
//! let score = nmi(&out.clustering.assignment, data.labels().unwrap()).unwrap();
//! assert!(score > 0.9);
//! assert!(out.ledger.ratio().unwrap() < 0.2);
//! ```

#![no_std]

extern crate alloc;

pub mod active;
pub mod baseline;
pub mod book;
pub mod data;
pub mod error;
pub mod eval;
pub mod kmedoids;
pub mod oracle;
mod sum;

pub use active::{active_kmedoids, predict_query_ratio, ActiveOutcome, ActiveParams, GroupNode};
pub use baseline::{floyd_warshall, random_rival, Budget, PairSampler, RivalOutcome};
pub use book::{
    upper_bound_valid, upper_bound_valid_within, DistanceBook, DistanceMatrix, Dissimilarity,
    Entry, Status,
};
pub use data::{gen_blobs, gen_norm, Dataset, Generated};
pub use error::{Error, Result};
pub use eval::{nmi, nmi_with, NmiVariant};
pub use kmedoids::{kmedoids, ClusteringResult, KmedoidsParams, Objective};
pub use oracle::{DistanceOracle, Euclidean, Metric, Oracle, QueryLedger};
