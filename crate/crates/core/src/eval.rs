//! Normalized mutual information between two labelings.
//!
//! Entropy and mutual-information terms are sorted before summation, so the
//! score is bit-for-bit symmetric and invariant under relabeling.

use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hash;

use hashbrown::HashMap;

use crate::error::{Error, Result};

/// How mutual information is normalized.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum NmiVariant {
    /// `I / sqrt(H(a) H(b))`
    #[default]
    Geometric,
    /// `I / ((H(a) + H(b)) / 2)`
    Arithmetic,
    /// `I / max(H(a), H(b))`
    Max,
}

fn dense_ids<T: Eq + Hash>(labels: &[T]) -> (Vec<usize>, usize) {
    let mut ids: HashMap<&T, usize> = HashMap::new();
    let dense = labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect();
    (dense, ids.len())
}

fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

fn entropy(counts: &[usize], n: usize) -> f64 {
    let nf = n as f64;
    sorted_sum(
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| (c as f64 / nf) * libm::log(nf / c as f64))
            .collect(),
    )
}

/// NMI with the default geometric normalization.
pub fn nmi<A: Eq + Hash, B: Eq + Hash>(a: &[A], b: &[B]) -> Result<f64> {
    nmi_with(a, b, NmiVariant::Geometric)
}

/// NMI in `[0, 1]` computed from the contingency table with natural logs.
///
/// Two single-cluster labelings score 1; if only one of them is a single
/// cluster the score is 0.
pub fn nmi_with<A: Eq + Hash, B: Eq + Hash>(a: &[A], b: &[B], variant: NmiVariant) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = a.len();
    let (ia, ka) = dense_ids(a);
    let (ib, kb) = dense_ids(b);
    let mut table = vec![0usize; ka * kb];
    let mut row = vec![0usize; ka];
    let mut col = vec![0usize; kb];
    for (&x, &y) in ia.iter().zip(&ib) {
        table[x * kb + y] += 1;
        row[x] += 1;
        col[y] += 1;
    }

    let ha = entropy(&row, n);
    let hb = entropy(&col, n);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }

    let nf = n as f64;
    let mut terms = Vec::new();
    for x in 0..ka {
        for y in 0..kb {
            let c = table[x * kb + y];
            if c == 0 {
                continue;
            }
            // n * c / (row * col) keeps integer products exact before dividing
            let ratio = (n as f64 * c as f64) / (row[x] as f64 * col[y] as f64);
            terms.push((c as f64 / nf) * libm::log(ratio));
        }
    }
    let mi = sorted_sum(terms);
    let norm = match variant {
        NmiVariant::Geometric => libm::sqrt(ha * hb),
        NmiVariant::Arithmetic => (ha + hb) / 2.0,
        NmiVariant::Max => ha.max(hb),
    };
    Ok((mi / norm).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_one() {
        let a = [0, 0, 1, 1, 2, 2, 2];
        assert_eq!(nmi(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn relabeled_is_one() {
        let a = [0, 0, 1, 1, 2, 2, 2];
        let b = ["z", "z", "x", "x", "y", "y", "y"];
        assert_eq!(nmi(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn independent_is_zero() {
        assert_eq!(nmi(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_conventions() {
        assert_eq!(nmi(&[1, 1, 1], &[5, 5, 5]).unwrap(), 1.0);
        assert_eq!(nmi(&[1, 1, 1], &[0, 1, 2]).unwrap(), 0.0);
        assert_eq!(nmi(&[7], &[3]).unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        assert_eq!(nmi(&[0, 1], &[0]), Err(Error::LengthMismatch { left: 2, right: 1 }));
        assert_eq!(nmi::<u8, u8>(&[], &[]), Err(Error::EmptyInput));
    }

    #[test]
    fn variants_order() {
        // geometric mean sits between arithmetic mean and max normalisations
        let a = [0, 0, 0, 1, 1, 1, 2, 2];
        let b = [0, 0, 1, 1, 1, 1, 1, 0];
        let g = nmi_with(&a, &b, NmiVariant::Geometric).unwrap();
        let ar = nmi_with(&a, &b, NmiVariant::Arithmetic).unwrap();
        let m = nmi_with(&a, &b, NmiVariant::Max).unwrap();
        assert!(m <= ar && ar <= g, "{m} {ar} {g}");
        assert!(g > 0.0 && g < 1.0);
    }
}
