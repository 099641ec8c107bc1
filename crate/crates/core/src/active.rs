//! Active k-medoids: cluster `n` points while asking the oracle for only a
//! small share of the pairwise distances.
//!
//! The points are shuffled once and split recursively into `branching`
//! contiguous, near-equal groups until a group holds at most
//! `2 * leaf_threshold` points. Leaves ask every pair. Going back up, each
//! child group is clustered on what the book knows about it, and its medoids
//! plus `picks_per_cluster` random members per cluster become its prominent
//! points. All prominent pairs across sibling groups are asked, and every other
//! cross-group pair `(a, b)` gets the bound
//!
//! ```text
//! min over prominent x (a's side), y (b's side) of  book(a, x) + exact(x, y) + book(y, b)
//! ```
//!
//! The final clustering runs on the whole book.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::book::{pair_count, DistanceBook, Status, SubView};
use crate::error::{invalid, Error, Result};
use crate::kmedoids::{kmedoids, ClusteringResult, KmedoidsParams, Objective, DEFAULT_MAX_ITER};
use crate::oracle::{Oracle, QueryLedger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActiveParams {
    /// Number of clusters.
    pub k: usize,
    /// Children per internal node.
    pub branching: usize,
    /// Groups of at most twice this size are leaves.
    pub leaf_threshold: usize,
    /// Random non-medoid members taken from each cluster of a group.
    pub picks_per_cluster: usize,
    /// k-medoids iteration cap, for every clustering in the tree.
    pub max_iter: usize,
    pub seed: u64,
    pub objective: Objective,
}

impl ActiveParams {
    /// Defaults: binary splits, one pick per cluster, and the smallest legal
    /// leaf threshold `k * (picks + 1)`.
    pub fn new(k: usize, seed: u64) -> Self {
        ActiveParams {
            k,
            branching: 2,
            leaf_threshold: 2 * k,
            picks_per_cluster: 1,
            max_iter: DEFAULT_MAX_ITER,
            seed,
            objective: Objective::Plain,
        }
    }

    pub fn with_branching(mut self, b: usize) -> Self {
        self.branching = b;
        self
    }

    /// Also resets the leaf threshold to its minimum unless one was set later.
    pub fn with_picks(mut self, s: usize) -> Self {
        self.picks_per_cluster = s;
        self.leaf_threshold = self.prominent_per_group();
        self
    }

    pub fn with_leaf_threshold(mut self, t: usize) -> Self {
        self.leaf_threshold = t;
        self
    }

    pub fn with_max_iter(mut self, p: usize) -> Self {
        self.max_iter = p;
        self
    }

    /// `k * (s + 1)`: prominent points a group contributes when its clusters are large enough.
    pub fn prominent_per_group(&self) -> usize {
        self.k * (self.picks_per_cluster + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if self.branching < 2 {
            return Err(invalid("branching factor must be at least 2"));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be at least 1"));
        }
        if self.leaf_threshold < self.prominent_per_group() {
            return Err(invalid(alloc::format!(
                "leaf threshold {} is below k * (s + 1) = {}",
                self.leaf_threshold,
                self.prominent_per_group()
            )));
        }
        Ok(())
    }

    fn kmedoids(&self, k: usize, seed: u64) -> KmedoidsParams {
        KmedoidsParams {
            k,
            max_iter: self.max_iter,
            seed,
            objective: self.objective,
        }
    }
}

/// One group in the recursion tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupNode {
    pub members: Vec<usize>,
    pub children: Vec<GroupNode>,
    /// Prominent points handed to the parent; empty for the root.
    pub chosen: Vec<usize>,
}

impl GroupNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(GroupNode::node_count).sum::<usize>()
    }

    pub fn leaves(&self) -> Vec<&GroupNode> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a GroupNode>) {
        if self.is_leaf() {
            out.push(self);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    /// Edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(|c| 1 + c.height())
            .max()
            .unwrap_or(0)
    }

    /// Node sizes level by level, left to right.
    pub fn level_sizes(&self) -> Vec<Vec<usize>> {
        let mut levels = Vec::new();
        let mut frontier = vec![self];
        while !frontier.is_empty() {
            levels.push(frontier.iter().map(|g| g.members.len()).collect());
            frontier = frontier.iter().flat_map(|g| g.children.iter()).collect();
        }
        levels
    }
}

/// Splits `members` into `b` contiguous groups whose sizes differ by at most one.
pub fn partition_groups(members: &[usize], b: usize) -> Result<Vec<Vec<usize>>> {
    if b == 0 {
        return Err(invalid("branching factor must be at least 1"));
    }
    if b > members.len() {
        return Err(invalid(alloc::format!(
            "cannot split {} members into {b} groups",
            members.len()
        )));
    }
    let base = members.len() / b;
    let extra = members.len() % b;
    let mut out = Vec::with_capacity(b);
    let mut start = 0;
    for g in 0..b {
        let len = base + usize::from(g < extra);
        out.push(members[start..start + len].to_vec());
        start += len;
    }
    Ok(out)
}

/// Builds the recursion tree over `order` without touching any distances.
pub fn build_tree(order: Vec<usize>, branching: usize, leaf_threshold: usize) -> Result<GroupNode> {
    if branching < 2 {
        return Err(invalid("branching factor must be at least 2"));
    }
    let children = if order.len() <= 2 * leaf_threshold {
        Vec::new()
    } else {
        partition_groups(&order, branching.min(order.len()))?
            .into_iter()
            .map(|g| build_tree(g, branching, leaf_threshold))
            .collect::<Result<_>>()?
    };
    Ok(GroupNode {
        members: order,
        children,
        chosen: Vec::new(),
    })
}

/// Medoids of `result` plus up to `s` distinct random non-medoids per cluster.
///
/// Indices refer to whatever `result` was computed over. Clusters with fewer
/// than `s` non-medoids contribute all their members.
pub fn select_prominent<R: Rng + ?Sized>(
    result: &ClusteringResult,
    s: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(result.k() * (s + 1));
    for (c, members) in result.clusters().into_iter().enumerate() {
        let medoid = result.medoids[c];
        out.push(medoid);
        let others: Vec<usize> = members.into_iter().filter(|&m| m != medoid).collect();
        if others.len() <= s {
            out.extend(others);
        } else {
            out.extend(
                rand::seq::index::sample(rng, others.len(), s)
                    .into_iter()
                    .map(|i| others[i]),
            );
        }
    }
    out
}

/// Tightens every cross-group pair through the prominent points of both groups.
///
/// Within-group legs use whatever the book holds; the middle leg must be exact.
pub fn estimate_cross_group(
    book: &mut DistanceBook,
    groups: &[Vec<usize>],
    chosen: &[Vec<usize>],
) -> Result<()> {
    if groups.len() != chosen.len() {
        return Err(Error::LengthMismatch {
            left: groups.len(),
            right: chosen.len(),
        });
    }
    let n = book.size();
    if let Some(&bad) = groups.iter().chain(chosen).flatten().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfBounds { index: bad, len: n });
    }
    for gi in 0..groups.len() {
        for gj in gi + 1..groups.len() {
            let (cx, cy) = (&chosen[gi], &chosen[gj]);
            if cx.is_empty() || cy.is_empty() {
                continue;
            }
            let mut exact = Vec::with_capacity(cx.len() * cy.len());
            for &x in cx {
                for &y in cy {
                    if book.status(x, y) != Status::Exact {
                        return Err(Error::MissingExact { i: x, j: y });
                    }
                    exact.push(book.value(x, y));
                }
            }
            let mut via_y = vec![f64::INFINITY; cy.len()];
            for &a in &groups[gi] {
                // via_y[y] = min over x of book(a, x) + exact(x, y)
                via_y.fill(f64::INFINITY);
                for (xi, &x) in cx.iter().enumerate() {
                    let ax = book.value(a, x);
                    if ax.is_infinite() {
                        continue;
                    }
                    let row = &exact[xi * cy.len()..(xi + 1) * cy.len()];
                    for (v, &e) in via_y.iter_mut().zip(row) {
                        let s = ax + e;
                        if s < *v {
                            *v = s;
                        }
                    }
                }
                for &b in &groups[gj] {
                    let mut best = f64::INFINITY;
                    for (&v, &y) in via_y.iter().zip(cy) {
                        let s = v + book.value(y, b);
                        if s < best {
                            best = s;
                        }
                    }
                    if a != b {
                        book.relax_pair(a, b, best);
                    }
                }
            }
        }
    }
    Ok(())
}

fn checked_pow(base: usize, exp: u32) -> Option<usize> {
    base.checked_pow(exp)
}

/// Exponent `e = floor(log_b(n / t_h))`, computed on integers.
fn floor_log(n: usize, t_h: usize, b: usize) -> i32 {
    if n >= t_h {
        let mut e = 0u32;
        while checked_pow(b, e + 1)
            .and_then(|p| p.checked_mul(t_h))
            .is_some_and(|v| v <= n)
        {
            e += 1;
        }
        e as i32
    } else {
        // smallest m with t_h <= b^m * n gives floor = -m
        let mut m = 1u32;
        while checked_pow(b, m)
            .and_then(|p| p.checked_mul(n))
            .is_some_and(|v| v < t_h)
        {
            m += 1;
        }
        -(m as i32)
    }
}

/// Closed-form estimate of the asked fraction of pairs:
///
/// ```text
/// ( b^2 (k(s+1))^2 (b^floor(log_b(n / t_h)) - 1) / (b - 1)  +  n t_h ) / C(n, 2)
/// ```
///
/// An order-of-magnitude guide only; the oracle's ledger is the ground truth.
pub fn predict_query_ratio(n: usize, k: usize, b: usize, s: usize, t_h: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewPairs(n));
    }
    if b < 2 || k == 0 || t_h == 0 {
        return Err(invalid("need b >= 2, k >= 1, t_h >= 1"));
    }
    let bf = b as f64;
    let t = (k * (s + 1)) as f64;
    let internal = (libm::pow(bf, floor_log(n, t_h, b) as f64) - 1.0) / (bf - 1.0);
    let asked = bf * bf * t * t * internal + (n as f64) * (t_h as f64);
    Ok(asked / pair_count(n) as f64)
}

/// Everything an active run produces.
#[derive(Debug, Clone)]
pub struct ActiveOutcome {
    pub clustering: ClusteringResult,
    pub book: DistanceBook,
    pub ledger: QueryLedger,
    pub tree: GroupNode,
}

struct Run<'a, O: ?Sized> {
    oracle: &'a mut O,
    params: &'a ActiveParams,
    book: DistanceBook,
    rng: ChaCha8Rng,
    next_node: u64,
}

impl<O: Oracle + ?Sized> Run<'_, O> {
    fn ask(&mut self, i: usize, j: usize) -> Result<()> {
        let d = self.oracle.query(i, j)?;
        self.book.set_exact(i, j, d)
    }

    fn node_seed(&mut self) -> u64 {
        self.next_node += 1;
        self.params
            .seed
            .wrapping_add(self.next_node.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    /// Fills the book for `node`'s subtree and sets each child's prominent points.
    fn fill(&mut self, node: &mut GroupNode) -> Result<()> {
        if node.is_leaf() {
            let m = &node.members;
            for a in 0..m.len() {
                for b in a + 1..m.len() {
                    self.ask(m[a], m[b])?;
                }
            }
            return Ok(());
        }
        for child in node.children.iter_mut() {
            self.fill(child)?;
            let k = self.params.k.min(child.members.len());
            let seed = self.node_seed();
            let local = kmedoids(
                &SubView::new(&self.book, &child.members),
                &self.params.kmedoids(k, seed),
            )?;
            child.chosen = select_prominent(&local, self.params.picks_per_cluster, &mut self.rng)
                .into_iter()
                .map(|i| child.members[i])
                .collect();
        }
        for gi in 0..node.children.len() {
            for gj in gi + 1..node.children.len() {
                for xi in 0..node.children[gi].chosen.len() {
                    for yi in 0..node.children[gj].chosen.len() {
                        let (x, y) = (node.children[gi].chosen[xi], node.children[gj].chosen[yi]);
                        self.ask(x, y)?;
                    }
                }
            }
        }
        let groups: Vec<Vec<usize>> = node.children.iter().map(|c| c.members.clone()).collect();
        let chosen: Vec<Vec<usize>> = node.children.iter().map(|c| c.chosen.clone()).collect();
        estimate_cross_group(&mut self.book, &groups, &chosen)
    }
}

/// Clusters every point the oracle knows about into `params.k` groups.
///
/// With `n <= 2 * leaf_threshold` this asks every pair and returns exactly what
/// full-matrix k-medoids returns for the same seed.
pub fn active_kmedoids<O: Oracle + ?Sized>(
    oracle: &mut O,
    params: &ActiveParams,
) -> Result<ActiveOutcome> {
    params.validate()?;
    let n = oracle.size();
    if n < params.k {
        return Err(Error::TooFewPoints { n, k: params.k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..n).collect();
    if n > 2 * params.leaf_threshold {
        order.shuffle(&mut rng);
    }
    let mut tree = build_tree(order, params.branching, params.leaf_threshold)?;

    let mut run = Run {
        book: DistanceBook::new(n),
        oracle,
        params,
        rng,
        next_node: 0,
    };
    run.fill(&mut tree)?;
    let Run { book, oracle, .. } = run;

    let clustering = kmedoids(&book, &params.kmedoids(params.k, params.seed))?;
    Ok(ActiveOutcome {
        clustering,
        book,
        ledger: oracle.ledger().clone(),
        tree,
    })
}
