//! Correctly rounded summation (Shewchuk's non-overlapping partials).
//!
//! k-medoids compares sums over different member orders; rounding each sum
//! once keeps "smaller real sum" and "smaller stored sum" in agreement.

use alloc::vec::Vec;

#[derive(Debug, Clone, Default)]
pub(crate) struct ExactSum {
    partials: Vec<f64>,
    infinite: bool,
}

impl ExactSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn clear(&mut self) {
        self.partials.clear();
        self.infinite = false;
    }

    /// Adds a non-negative term; `+inf` makes the sum infinite.
    pub(crate) fn add(&mut self, mut x: f64) {
        if x.is_infinite() {
            self.infinite = true;
            return;
        }
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                core::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    /// The exact sum rounded to nearest, ties to even.
    pub(crate) fn value(&self) -> f64 {
        if self.infinite {
            return f64::INFINITY;
        }
        let p = &self.partials;
        let Some(mut n) = p.len().checked_sub(1) else {
            return 0.0;
        };
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            lo = y - (hi - x);
            if lo != 0.0 {
                break;
            }
        }
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

#[cfg(test)]
fn exact_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = ExactSum::new();
    for t in terms {
        s.add(t);
    }
    s.value()
}
