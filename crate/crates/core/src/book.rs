//! Pairwise distance storage.
//!
//! [`DistanceBook`] keeps one value per unordered pair together with how that
//! value is known: confirmed by the oracle ([`Status::Exact`]), bounded from
//! above through chains of known distances ([`Status::Estimate`]), or not at
//! all ([`Status::Unknown`], stored as `+inf`).
//!
//! Exact entries are frozen once written, and estimates only ever move down.
//! As long as every exact value comes from a metric and every candidate handed
//! to [`DistanceBook::relax_upper`] is the length of a path through stored
//! values, each stored value stays an upper bound of the true distance.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// How a stored distance is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Exact,
    Estimate,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::Estimate => "estimate",
            Status::Unknown => "unknown",
        }
    }
}

/// A stored value and its status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub value: f64,
    pub status: Status,
}

/// Read access to a square, symmetric dissimilarity.
pub trait Dissimilarity {
    fn len(&self) -> usize;

    /// Distance between `i` and `j`; `+inf` when nothing is known.
    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Number of unordered pairs among `n` points.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Row-major position of pair `(i, j)`, `i < j`, in the strict upper triangle.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(n: usize, index: usize) -> (usize, usize) {
    debug_assert!(index < pair_count(n));
    // Closed form on the row offsets, then fix up float drift.
    let nf = n as f64;
    let disc = (2.0 * nf - 1.0) * (2.0 * nf - 1.0) - 8.0 * index as f64;
    let mut i = libm::floor(((2.0 * nf - 1.0) - libm::sqrt(disc.max(0.0))) / 2.0) as usize;
    i = i.min(n.saturating_sub(2));
    let offset = |r: usize| r * (2 * n - r - 1) / 2;
    while i > 0 && offset(i) > index {
        i -= 1;
    }
    while offset(i + 1) <= index {
        i += 1;
    }
    (i, i + 1 + index - offset(i))
}

/// Symmetric store of exact and upper-bound distances over `n` points.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceBook {
    n: usize,
    values: Vec<f64>,
    status: Vec<Status>,
}

impl DistanceBook {
    /// A book where every off-diagonal pair is unknown.
    pub fn new(n: usize) -> Self {
        let m = pair_count(n);
        DistanceBook {
            n,
            values: vec![f64::INFINITY; m],
            status: vec![Status::Unknown; m],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.n {
            Err(Error::IndexOutOfBounds { index: i, len: self.n })
        } else {
            Ok(())
        }
    }

    fn slot(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::SelfPair(i));
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        Ok(pair_index(self.n, a, b))
    }

    pub fn get(&self, i: usize, j: usize) -> Result<Entry> {
        if i == j {
            self.check(i)?;
            return Ok(Entry {
                value: 0.0,
                status: Status::Exact,
            });
        }
        let s = self.slot(i, j)?;
        Ok(Entry {
            value: self.values[s],
            status: self.status[s],
        })
    }

    /// Stored value without bounds reporting; panics on bad indices.
    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        assert!(b < self.n, "index {b} out of bounds for {} points", self.n);
        self.values[pair_index(self.n, a, b)]
    }

    #[inline]
    pub fn status(&self, i: usize, j: usize) -> Status {
        if i == j {
            return Status::Exact;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        assert!(b < self.n, "index {b} out of bounds for {} points", self.n);
        self.status[pair_index(self.n, a, b)]
    }

    #[inline]
    pub fn is_exact(&self, i: usize, j: usize) -> bool {
        self.status(i, j) == Status::Exact
    }

    /// Records an oracle answer.
    ///
    /// Writing the same pair twice must repeat the identical value; anything
    /// else means the oracle is inconsistent.
    pub fn set_exact(&mut self, i: usize, j: usize, d: f64) -> Result<()> {
        let s = self.slot(i, j)?;
        if d.is_nan() || d < 0.0 || d.is_infinite() {
            return Err(Error::InvalidDistance { i, j, value: d });
        }
        if self.status[s] == Status::Exact {
            let stored = self.values[s];
            if stored.to_bits() != d.to_bits() {
                return Err(Error::ConflictingExact { i, j, stored, new: d });
            }
            return Ok(());
        }
        self.values[s] = d;
        self.status[s] = Status::Exact;
        Ok(())
    }

    /// Tightens the upper bound of a non-exact pair to `min(stored, candidate)`
    /// and returns the stored value afterwards.
    pub fn relax_upper(&mut self, i: usize, j: usize, candidate: f64) -> Result<f64> {
        let s = self.slot(i, j)?;
        if candidate.is_nan() || candidate < 0.0 {
            return Err(Error::InvalidDistance {
                i,
                j,
                value: candidate,
            });
        }
        Ok(self.relax_slot(s, candidate))
    }

    #[inline]
    pub(crate) fn relax_slot(&mut self, s: usize, candidate: f64) -> f64 {
        if self.status[s] != Status::Exact && candidate < self.values[s] {
            self.values[s] = candidate;
            self.status[s] = Status::Estimate;
        }
        self.values[s]
    }

    /// Unchecked relax for hot loops; indices must be distinct and in range.
    #[inline]
    pub(crate) fn relax_pair(&mut self, i: usize, j: usize, candidate: f64) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.relax_slot(pair_index(self.n, a, b), candidate)
    }

    /// Iterates `(i, j, entry)` over all pairs with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Entry)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (i + 1..n).map(move |j| {
                let s = pair_index(n, i, j);
                (
                    i,
                    j,
                    Entry {
                        value: self.values[s],
                        status: self.status[s],
                    },
                )
            })
        })
    }

    /// Number of off-diagonal pairs with the given status.
    pub fn count(&self, status: Status) -> usize {
        self.status.iter().filter(|&&s| s == status).count()
    }
}

impl Dissimilarity for DistanceBook {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.value(i, j)
    }
}

/// Dense, fully known `n x n` distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a row-major `n x n` buffer.
    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(DistanceMatrix { n, data })
    }

    /// Builds a matrix by evaluating `f` on every pair `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = f(i, j);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        DistanceMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl Dissimilarity for DistanceMatrix {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// A dissimilarity restricted to a subset of points, re-indexed `0..members.len()`.
#[derive(Debug, Clone, Copy)]
pub struct SubView<'a, D: ?Sized> {
    inner: &'a D,
    members: &'a [usize],
}

impl<'a, D: Dissimilarity + ?Sized> SubView<'a, D> {
    pub fn new(inner: &'a D, members: &'a [usize]) -> Self {
        SubView { inner, members }
    }

    /// Global index of local point `i`.
    pub fn global(&self, i: usize) -> usize {
        self.members[i]
    }
}

impl<D: Dissimilarity + ?Sized> Dissimilarity for SubView<'_, D> {
    fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.inner.dist(self.members[i], self.members[j])
    }
}

/// True iff every stored value is at least the true distance.
pub fn upper_bound_valid(book: &DistanceBook, truth: &DistanceMatrix) -> Result<bool> {
    upper_bound_valid_within(book, truth, 0.0)
}

/// [`upper_bound_valid`] with an absolute slack for summation round-off.
pub fn upper_bound_valid_within(
    book: &DistanceBook,
    truth: &DistanceMatrix,
    tolerance: f64,
) -> Result<bool> {
    if book.size() != truth.size() {
        return Err(Error::DimensionMismatch {
            expected: book.size(),
            found: truth.size(),
        });
    }
    Ok(book
        .pairs()
        .all(|(i, j, e)| truth.dist(i, j) <= e.value + tolerance))
}
