//! Random-Rival: ask uniformly random pairs, bound the rest by shortest paths
//! over the asked pairs, then run k-medoids.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::book::{pair_count, pair_from_index, pair_index, DistanceBook, Status};
use crate::error::{Error, Result};
use crate::kmedoids::{kmedoids, ClusteringResult, KmedoidsParams};
use crate::oracle::{Oracle, QueryLedger};

/// Relative slack when checking that a shortest path does not undercut an exact edge.
const EDGE_SLACK: f64 = 1e-9;

/// Number of distinct pairs to ask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Budget(pub usize);

impl Budget {
    /// Smallest pair count that covers `ratio` of all pairs among `n` points.
    pub fn from_ratio(n: usize, ratio: f64) -> Result<Self> {
        let total = pair_count(n);
        if !(0.0..=1.0).contains(&ratio) {
            return Err(crate::error::invalid(alloc::format!(
                "budget ratio {ratio} outside [0, 1]"
            )));
        }
        Ok(Budget((libm::ceil(ratio * total as f64) as usize).min(total)))
    }

    pub fn check(self, n: usize) -> Result<()> {
        let total = pair_count(n);
        if self.0 > total {
            return Err(Error::BudgetOutOfRange {
                budget: self.0,
                total,
            });
        }
        Ok(())
    }
}

/// Draws distinct pairs without replacement by a lazy Fisher-Yates shuffle of
/// the pair indices.
///
/// For a fixed seed the first `m` draws are the same whatever the eventual
/// number of draws, so smaller budgets are prefixes of larger ones.
#[derive(Debug, Clone)]
pub struct PairSampler {
    n: usize,
    total: usize,
    drawn: usize,
    swapped: HashMap<usize, usize>,
    rng: ChaCha8Rng,
}

impl PairSampler {
    pub fn new(n: usize, seed: u64) -> Self {
        PairSampler {
            n,
            total: pair_count(n),
            drawn: 0,
            swapped: HashMap::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Iterator for PairSampler {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<(usize, usize)> {
        if self.drawn == self.total {
            return None;
        }
        let i = self.drawn;
        let j = self.rng.random_range(i..self.total);
        let at_j = *self.swapped.get(&j).unwrap_or(&j);
        let at_i = *self.swapped.get(&i).unwrap_or(&i);
        self.swapped.insert(j, at_i);
        self.swapped.remove(&i);
        self.drawn += 1;
        Some(pair_from_index(self.n, at_j))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.drawn;
        (left, Some(left))
    }
}

/// Replaces every non-exact entry by the shortest-path length over the graph
/// whose edges are the exact entries (keeping any smaller estimate already
/// stored). Unreachable pairs stay unknown.
///
/// Fails if some path is shorter than an exact edge, which cannot happen when
/// the exact values come from a metric.
pub fn floyd_warshall(book: &mut DistanceBook) -> Result<()> {
    let n = book.size();
    let mut dist = vec![f64::INFINITY; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
    }
    for (i, j, e) in book.pairs() {
        if e.status == Status::Exact {
            dist[i * n + j] = e.value;
            dist[j * n + i] = e.value;
        }
    }

    for k in 0..n {
        let row_k = dist[k * n..(k + 1) * n].to_vec();
        for i in 0..n {
            let ik = dist[i * n + k];
            if ik.is_infinite() {
                continue;
            }
            let row_i = &mut dist[i * n..(i + 1) * n];
            for (d, &kj) in row_i.iter_mut().zip(&row_k) {
                let via = ik + kj;
                if via < *d {
                    *d = via;
                }
            }
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let path = dist[i * n + j];
            let s = pair_index(n, i, j);
            let entry = book.get(i, j)?;
            if entry.status == Status::Exact {
                if path < entry.value * (1.0 - EDGE_SLACK) {
                    return Err(Error::MetricViolation {
                        i,
                        j,
                        exact: entry.value,
                        path,
                    });
                }
            } else {
                book.relax_slot(s, path);
            }
        }
    }
    Ok(())
}

/// Result of a Random-Rival run.
#[derive(Debug, Clone)]
pub struct RivalOutcome {
    pub clustering: ClusteringResult,
    pub book: DistanceBook,
    pub ledger: QueryLedger,
}

/// Asks `budget` random distinct pairs, fills the book by shortest paths and
/// clusters it.
pub fn random_rival<O: Oracle + ?Sized>(
    oracle: &mut O,
    k: usize,
    budget: Budget,
    max_iter: usize,
    seed: u64,
) -> Result<RivalOutcome> {
    random_rival_with(oracle, budget, seed, &KmedoidsParams::new(k, seed).with_max_iter(max_iter))
}

/// [`random_rival`] with explicit k-medoids parameters.
pub fn random_rival_with<O: Oracle + ?Sized>(
    oracle: &mut O,
    budget: Budget,
    seed: u64,
    params: &KmedoidsParams,
) -> Result<RivalOutcome> {
    let n = oracle.size();
    budget.check(n)?;
    if params.k > n {
        return Err(Error::TooFewPoints { n, k: params.k });
    }
    let mut book = DistanceBook::new(n);
    for (i, j) in PairSampler::new(n, seed).take(budget.0) {
        let d = oracle.query(i, j)?;
        book.set_exact(i, j, d)?;
    }
    floyd_warshall(&mut book)?;
    let clustering = kmedoids(&book, params)?;
    Ok(RivalOutcome {
        clustering,
        book,
        ledger: oracle.ledger().clone(),
    })
}

/// Budget ratios `1/steps, 2/steps, ..., 1`.
pub fn sweep_ratios(steps: usize) -> Vec<f64> {
    (1..=steps).map(|i| i as f64 / steps as f64).collect()
}
