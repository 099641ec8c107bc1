//! Pairwise distance oracle with query accounting.

use hashbrown::HashSet;

use crate::book::pair_count;
use crate::data::Dataset;
use crate::error::{Error, Result};

/// A distance function over feature vectors.
///
/// The estimation algebra only yields upper bounds when this is a metric.
pub trait Metric {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Euclidean;

impl Metric for Euclidean {
    #[inline]
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        libm::sqrt(sq)
    }
}

/// Distinct unordered pairs that have been asked so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryLedger {
    n: usize,
    asked: HashSet<(usize, usize)>,
}

impl QueryLedger {
    pub fn new(n: usize) -> Self {
        QueryLedger {
            n,
            asked: HashSet::new(),
        }
    }

    /// Records `{i, j}`; returns `true` when the pair is new. Self-pairs are ignored.
    pub fn record(&mut self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        self.asked.insert((i.min(j), i.max(j)))
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.asked.contains(&(i.min(j), i.max(j)))
    }

    pub fn asked(&self) -> usize {
        self.asked.len()
    }

    pub fn total_pairs(&self) -> usize {
        pair_count(self.n)
    }

    /// Fraction of all `n(n-1)/2` pairs asked.
    pub fn ratio(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::TooFewPairs(self.n));
        }
        Ok(self.asked.len() as f64 / self.total_pairs() as f64)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.asked.iter().copied()
    }
}

/// Anything that answers distance queries and keeps a [`QueryLedger`].
pub trait Oracle {
    /// Number of points the oracle knows about.
    fn size(&self) -> usize;

    /// True distance between `i` and `j`; every distinct pair is recorded.
    fn query(&mut self, i: usize, j: usize) -> Result<f64>;

    fn ledger(&self) -> &QueryLedger;
}

/// Answers queries by evaluating a [`Metric`] on a dataset's feature vectors.
#[derive(Debug, Clone)]
pub struct DistanceOracle<'a, M = Euclidean> {
    dataset: &'a Dataset,
    metric: M,
    ledger: QueryLedger,
}

impl<'a> DistanceOracle<'a, Euclidean> {
    pub fn euclidean(dataset: &'a Dataset) -> Self {
        Self::new(dataset, Euclidean)
    }
}

impl<'a, M: Metric> DistanceOracle<'a, M> {
    pub fn new(dataset: &'a Dataset, metric: M) -> Self {
        DistanceOracle {
            dataset,
            metric,
            ledger: QueryLedger::new(dataset.len()),
        }
    }

    pub fn dataset(&self) -> &Dataset {
        self.dataset
    }

    pub fn asked_ratio(&self) -> Result<f64> {
        self.ledger.ratio()
    }

    /// Distance without touching the ledger, for checking results against truth.
    pub fn peek(&self, i: usize, j: usize) -> f64 {
        self.metric
            .distance(self.dataset.point(i), self.dataset.point(j))
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }
}

impl<M: Metric> Oracle for DistanceOracle<'_, M> {
    fn size(&self) -> usize {
        self.dataset.len()
    }

    fn query(&mut self, i: usize, j: usize) -> Result<f64> {
        let n = self.dataset.len();
        for idx in [i, j] {
            if idx >= n {
                return Err(Error::IndexOutOfBounds { index: idx, len: n });
            }
        }
        if i == j {
            return Ok(0.0);
        }
        self.ledger.record(i, j);
        // evaluate in canonical order so (i, j) and (j, i) agree bit for bit
        Ok(self.peek(i.min(j), i.max(j)))
    }

    fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn line(xs: &[f64]) -> Dataset {
        Dataset::new("line", 1, xs.to_vec(), None, vec![]).unwrap()
    }

    #[test]
    fn three_four_five() {
        let d = Dataset::new("t", 2, vec![0.0, 0.0, 3.0, 4.0], None, vec![]).unwrap();
        let mut o = DistanceOracle::euclidean(&d);
        assert_eq!(o.query(0, 1).unwrap(), 5.0);
    }

    #[test]
    fn self_query_is_free() {
        let d = line(&[0.0, 1.0, 2.0]);
        let mut o = DistanceOracle::euclidean(&d);
        assert_eq!(o.query(1, 1).unwrap(), 0.0);
        assert_eq!(o.ledger().asked(), 0);
        assert_eq!(o.asked_ratio().unwrap(), 0.0);
    }

    #[test]
    fn repeated_pairs_count_once() {
        let xs: Vec<f64> = (0..10).map(|i| (i * i) as f64).collect();
        let d = line(&xs);
        let mut o = DistanceOracle::euclidean(&d);
        let a = o.query(2, 7).unwrap();
        let b = o.query(7, 2).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(o.ledger().asked(), 1);
        assert!(o.ledger().contains(2, 7));
        assert!(o.query(10, 0).is_err());
    }

    #[test]
    fn full_sweep_ratio_is_one() {
        let d = line(&[0.0, 1.0, 3.0, 6.0, 10.0]);
        let mut o = DistanceOracle::euclidean(&d);
        for i in 0..5 {
            for j in 0..5 {
                o.query(i, j).unwrap();
            }
        }
        assert_eq!(o.asked_ratio().unwrap(), 1.0);
        assert_eq!(o.ledger().total_pairs(), 10);
    }

    #[test]
    fn ratio_undefined_below_two_points() {
        let d = line(&[1.0]);
        let o = DistanceOracle::euclidean(&d);
        assert_eq!(o.asked_ratio(), Err(Error::TooFewPairs(1)));
    }
}
