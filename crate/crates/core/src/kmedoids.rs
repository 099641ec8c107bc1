//! Voronoi-iteration k-medoids over any [`Dissimilarity`].
//!
//! Each round assigns every point to its nearest medoid, then moves each
//! medoid to the cluster member with the smallest summed distance to the rest
//! of its cluster. The loop stops when no medoid moves or after `max_iter`
//! rounds.
//!
//! Unknown distances (`+inf`) rank after every finite value. When a point sees
//! only infinite distances it lands in cluster 0. During the medoid update a
//! candidate is scored by how many infinite distances it has first, and by the
//! finite remainder second.
//!
//! All sums are correctly rounded, so the recorded objective never rises
//! from one round to the next.
//!
//! Medoids are kept sorted by point index, so cluster ids follow medoid order
//! and the "lowest medoid" tie-break is the same under either reading.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::book::Dissimilarity;
use crate::error::{invalid, Error, Result};
use crate::sum::ExactSum;

pub const DEFAULT_MAX_ITER: usize = 100;

/// What the clustering minimises.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Sum of distances to the assigned medoid.
    #[default]
    Plain,
    /// Sum of squared distances to the assigned medoid.
    Squared,
}

impl Objective {
    #[inline]
    fn cost(self, d: f64) -> f64 {
        match self {
            Objective::Plain => d,
            Objective::Squared => d * d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KmedoidsParams {
    pub k: usize,
    pub max_iter: usize,
    pub seed: u64,
    pub objective: Objective,
}

impl KmedoidsParams {
    pub fn new(k: usize, seed: u64) -> Self {
        KmedoidsParams {
            k,
            max_iter: DEFAULT_MAX_ITER,
            seed,
            objective: Objective::Plain,
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be at least 1"));
        }
        if self.k > n {
            return Err(Error::TooFewPoints { n, k: self.k });
        }
        Ok(())
    }
}

/// A partition into `k` clusters, each represented by one of its members.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    /// Cluster id per point, in `0..k`.
    pub assignment: Vec<usize>,
    /// Medoid point of each cluster, ascending.
    pub medoids: Vec<usize>,
    pub objective: f64,
    /// Update rounds executed, at most `max_iter`.
    pub iterations_run: usize,
    /// Objective after the initial assignment and after every reassignment.
    pub history: Vec<f64>,
}

impl ClusteringResult {
    pub fn k(&self) -> usize {
        self.medoids.len()
    }

    /// Members of every cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.medoids.len()];
        for (i, &c) in self.assignment.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

/// Nearest medoid per point; a medoid always keeps itself.
pub fn assign<D: Dissimilarity + ?Sized>(d: &D, medoids: &[usize]) -> Vec<usize> {
    let n = d.len();
    let mut own = vec![usize::MAX; n];
    for (c, &m) in medoids.iter().enumerate() {
        own[m] = c;
    }
    (0..n)
        .map(|i| {
            if own[i] != usize::MAX {
                return own[i];
            }
            let mut best = 0;
            let mut best_d = d.dist(i, medoids[0]);
            for (c, &m) in medoids.iter().enumerate().skip(1) {
                let dm = d.dist(i, m);
                if dm < best_d {
                    best = c;
                    best_d = dm;
                }
            }
            best
        })
        .collect()
}

/// Sum over points of the cost of the distance to their cluster's medoid.
pub fn objective<D: Dissimilarity + ?Sized>(
    d: &D,
    assignment: &[usize],
    medoids: &[usize],
    kind: Objective,
) -> Result<f64> {
    if assignment.len() != d.len() {
        return Err(Error::LengthMismatch {
            left: d.len(),
            right: assignment.len(),
        });
    }
    for (c, &m) in medoids.iter().enumerate() {
        if m >= d.len() {
            return Err(Error::IndexOutOfBounds {
                index: m,
                len: d.len(),
            });
        }
        if assignment[m] != c {
            return Err(Error::MedoidNotInCluster(m));
        }
    }
    let mut total = ExactSum::new();
    for (i, &c) in assignment.iter().enumerate() {
        let m = *medoids.get(c).ok_or(Error::IndexOutOfBounds {
            index: c,
            len: medoids.len(),
        })?;
        total.add(kind.cost(d.dist(i, m)));
    }
    Ok(total.value())
}

#[derive(Clone, Copy)]
struct Score {
    unknown: usize,
    finite: f64,
}

impl Score {
    fn cmp(&self, other: &Score) -> Ordering {
        self.unknown
            .cmp(&other.unknown)
            .then(self.finite.total_cmp(&other.finite))
    }
}

fn best_member<D: Dissimilarity + ?Sized>(d: &D, members: &[usize], kind: Objective) -> usize {
    let mut best = members[0];
    let mut best_score: Option<Score> = None;
    let mut sum = ExactSum::new();
    for &c in members {
        sum.clear();
        let mut unknown = 0;
        for &x in members {
            let v = d.dist(c, x);
            if v.is_finite() {
                sum.add(kind.cost(v));
            } else {
                unknown += 1;
            }
        }
        let score = Score {
            unknown,
            finite: sum.value(),
        };
        if best_score.is_none_or(|b| score.cmp(&b) == Ordering::Less) {
            best = c;
            best_score = Some(score);
        }
    }
    best
}

/// Runs k-medoids from `k` distinct medoids drawn uniformly with `params.seed`.
pub fn kmedoids<D: Dissimilarity + ?Sized>(
    d: &D,
    params: &KmedoidsParams,
) -> Result<ClusteringResult> {
    params.validate(d.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let init = rand::seq::index::sample(&mut rng, d.len(), params.k).into_vec();
    kmedoids_from(d, &init, params)
}

/// Runs k-medoids from the given initial medoids.
pub fn kmedoids_from<D: Dissimilarity + ?Sized>(
    d: &D,
    initial: &[usize],
    params: &KmedoidsParams,
) -> Result<ClusteringResult> {
    let n = d.len();
    params.validate(n)?;
    if initial.len() != params.k {
        return Err(Error::LengthMismatch {
            left: params.k,
            right: initial.len(),
        });
    }
    let mut medoids = initial.to_vec();
    medoids.sort_unstable();
    if let Some(&m) = medoids.iter().find(|&&m| m >= n) {
        return Err(Error::IndexOutOfBounds { index: m, len: n });
    }
    if medoids.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("initial medoids must be distinct"));
    }

    let kind = params.objective;
    let mut assignment = assign(d, &medoids);
    let mut history = vec![objective(d, &assignment, &medoids, kind)?];
    let mut iterations_run = 0;
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); params.k];

    while iterations_run < params.max_iter {
        iterations_run += 1;
        for c in clusters.iter_mut() {
            c.clear();
        }
        for (i, &c) in assignment.iter().enumerate() {
            clusters[c].push(i);
        }
        let mut updated: Vec<usize> = clusters
            .iter()
            .map(|members| best_member(d, members, kind))
            .collect();
        updated.sort_unstable();
        if updated == medoids {
            break;
        }
        medoids = updated;
        assignment = assign(d, &medoids);
        history.push(objective(d, &assignment, &medoids, kind)?);
    }

    Ok(ClusteringResult {
        objective: *history.last().expect("history starts non-empty"),
        assignment,
        medoids,
        iterations_run,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::book::{DistanceBook, DistanceMatrix};

    fn line(xs: &[f64]) -> DistanceMatrix {
        DistanceMatrix::from_fn(xs.len(), |i, j| (xs[i] - xs[j]).abs())
    }

    #[test]
    fn k_equals_n_is_all_medoids() {
        let d = line(&[0.0, 4.0, 9.0, 13.0]);
        let r = kmedoids(&d, &KmedoidsParams::new(4, 3)).unwrap();
        assert_eq!(r.medoids, vec![0, 1, 2, 3]);
        assert_eq!(r.assignment, vec![0, 1, 2, 3]);
        assert_eq!(r.objective, 0.0);
    }

    #[test]
    fn two_groups_on_a_line_from_every_start() {
        let d = line(&[0.0, 1.0, 2.0, 10.0, 11.0]);
        for a in 0..5 {
            for b in a + 1..5 {
                let r = kmedoids_from(&d, &[a, b], &KmedoidsParams::new(2, 0)).unwrap();
                assert_eq!(r.medoids, vec![1, 3], "start {a},{b}");
                assert_eq!(r.assignment, vec![0, 0, 0, 1, 1]);
                assert_eq!(r.objective, 3.0);
            }
        }
    }

    #[test]
    fn objective_examples() {
        let same = line(&[2.0, 2.0, 2.0]);
        assert_eq!(
            objective(&same, &[0, 0, 0], &[1], Objective::Plain).unwrap(),
            0.0
        );
        let pair = line(&[0.0, 3.0]);
        assert_eq!(objective(&pair, &[0, 0], &[0], Objective::Plain).unwrap(), 3.0);
        assert_eq!(objective(&pair, &[0, 0], &[0], Objective::Squared).unwrap(), 9.0);
        assert_eq!(
            objective(&pair, &[1, 0], &[0], Objective::Plain),
            Err(Error::MedoidNotInCluster(0))
        );
    }

    #[test]
    fn objective_matches_naive_recount() {
        // a second, loop-by-cluster accounting of the same quantity
        let xs = [0.3, 7.1, 2.2, 9.9, 4.4, 5.0, 1.8, 8.6, 3.3, 6.7];
        let d = line(&xs);
        let r = kmedoids(&d, &KmedoidsParams::new(3, 11)).unwrap();
        let mut recount = 0.0;
        for (c, members) in r.clusters().iter().enumerate() {
            let m = r.medoids[c];
            assert!(members.contains(&m));
            for &x in members {
                recount += (xs[x] - xs[m]).abs();
            }
        }
        assert!((recount - r.objective).abs() < 1e-12);
    }

    #[test]
    fn parameter_errors() {
        let d = line(&[0.0, 1.0]);
        assert_eq!(
            kmedoids(&d, &KmedoidsParams::new(3, 0)),
            Err(Error::TooFewPoints { n: 2, k: 3 })
        );
        assert!(kmedoids(&d, &KmedoidsParams::new(0, 0)).is_err());
        assert!(kmedoids(&d, &KmedoidsParams::new(1, 0).with_max_iter(0)).is_err());
        assert!(kmedoids_from(&d, &[1, 1], &KmedoidsParams::new(2, 0)).is_err());
    }

    #[test]
    fn unknown_distances_fall_back_to_cluster_zero() {
        let book = DistanceBook::new(5);
        let r = kmedoids(&book, &KmedoidsParams::new(2, 1)).unwrap();
        for (i, &c) in r.assignment.iter().enumerate() {
            if !r.medoids.contains(&i) {
                assert_eq!(c, 0);
            }
        }
        assert!(r.objective.is_infinite());
    }

    #[test]
    fn partially_known_distances_prefer_finite_medoids() {
        let mut book = DistanceBook::new(4);
        book.set_exact(0, 1, 1.0).unwrap();
        book.set_exact(1, 2, 1.0).unwrap();
        book.set_exact(0, 2, 2.0).unwrap();
        // point 3 is unreachable; it should never beat the finite trio
        let r = kmedoids_from(&book, &[0, 3], &KmedoidsParams::new(2, 0)).unwrap();
        assert!(r.medoids.contains(&3));
        assert_eq!(r.assignment[0], r.assignment[1]);
    }

    #[test]
    fn duplicate_points_keep_medoids_in_their_clusters() {
        let d = line(&[1.0, 1.0, 1.0, 5.0]);
        let r = kmedoids_from(&d, &[1, 2], &KmedoidsParams::new(2, 0)).unwrap();
        for (c, &m) in r.medoids.iter().enumerate() {
            assert_eq!(r.assignment[m], c);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let xs: Vec<f64> = (0..40).map(|i| ((i * 37) % 23) as f64).collect();
        let d = line(&xs);
        let p = KmedoidsParams::new(4, 99);
        assert_eq!(kmedoids(&d, &p).unwrap(), kmedoids(&d, &p).unwrap());
    }

    #[test]
    fn squared_objective_is_monotone_too() {
        let xs: Vec<f64> = (0..30).map(|i| ((i * 13) % 17) as f64 * 0.7).collect();
        let d = line(&xs);
        let r = kmedoids(&d, &KmedoidsParams::new(3, 5).with_objective(Objective::Squared)).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }
}
