//! In-memory datasets and seeded synthetic generators.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Error, Result};

/// `n` points in `dim` dimensions, stored row-major, with optional class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    dim: usize,
    points: Vec<f64>,
    labels: Option<Vec<usize>>,
    class_names: Vec<String>,
}

impl Dataset {
    /// Validates shape and finiteness.
    ///
    /// `class_names` may be empty; otherwise every label must index into it.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        points: Vec<f64>,
        labels: Option<Vec<usize>>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if points.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: points.len() % dim,
            });
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature {
                point: pos / dim,
                dim: pos % dim,
            });
        }
        let n = points.len() / dim;
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: l.len(),
                });
            }
            if !class_names.is_empty() && l.iter().any(|&c| c >= class_names.len()) {
                return Err(invalid("label id without a class name"));
            }
        }
        Ok(Dataset {
            name: name.into(),
            dim,
            points,
            labels,
            class_names,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Distinct label count, if labelled.
    pub fn num_classes(&self) -> Option<usize> {
        let labels = self.labels.as_ref()?;
        let mut seen: Vec<usize> = labels.clone();
        seen.sort_unstable();
        seen.dedup();
        Some(seen.len())
    }
}

/// Output of a generator: the dataset plus the centers it was drawn around.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub dataset: Dataset,
    pub centers: Vec<Vec<f64>>,
}

fn gaussian_cloud(
    name: String,
    centers: &[Vec<f64>],
    per_center: usize,
    dim: usize,
    variance: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Dataset> {
    let noise = Normal::new(0.0, libm::sqrt(variance)).map_err(|_| invalid("variance"))?;
    let mut points = Vec::with_capacity(centers.len() * per_center * dim);
    let mut labels = Vec::with_capacity(centers.len() * per_center);
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per_center {
            points.extend(center.iter().map(|&x| x + noise.sample(rng)));
            labels.push(c);
        }
    }
    Dataset::new(name, dim, points, Some(labels), Vec::new())
}

/// Gaussian clouds around centers drawn uniformly from `[0, side]^dim`.
///
/// `variance` is per coordinate. `(10, 1000, 20, 50.0, 1.0)` yields the
/// classic NORM-10 benchmark.
pub fn gen_norm(
    num_centers: usize,
    points_per_center: usize,
    dim: usize,
    side: f64,
    variance: f64,
    seed: u64,
) -> Result<Generated> {
    if num_centers == 0 || points_per_center == 0 || dim == 0 {
        return Err(invalid("counts must be at least 1"));
    }
    if !(side > 0.0 && side.is_finite()) {
        return Err(invalid("side must be positive"));
    }
    if !(variance >= 0.0 && variance.is_finite()) {
        return Err(invalid("variance must be non-negative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..num_centers)
        .map(|_| (0..dim).map(|_| rng.random_range(0.0..=side)).collect())
        .collect();
    let name = alloc::format!("norm-{num_centers}x{points_per_center}-d{dim}");
    let dataset = gaussian_cloud(name, &centers, points_per_center, dim, variance, &mut rng)?;
    Ok(Generated { dataset, centers })
}

const CENTER_ATTEMPTS: usize = 10_000;

/// `k` Gaussian blobs whose centers are pairwise at least `separation` apart.
///
/// Centers are placed by rejection sampling in `[0, 2 * k * separation]^dim`.
pub fn gen_blobs(
    k: usize,
    per_cluster: usize,
    dim: usize,
    separation: f64,
    variance: f64,
    seed: u64,
) -> Result<Generated> {
    if k == 0 || per_cluster == 0 || dim == 0 {
        return Err(invalid("counts must be at least 1"));
    }
    if !(separation >= 0.0 && separation.is_finite()) {
        return Err(invalid("separation must be non-negative"));
    }
    if !(variance >= 0.0 && variance.is_finite()) {
        return Err(invalid("variance must be non-negative"));
    }
    let side = (2 * k) as f64 * separation;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut attempts = 0;
    while centers.len() < k {
        if attempts == CENTER_ATTEMPTS {
            return Err(Error::InfeasibleSeparation {
                k,
                separation,
                attempts,
            });
        }
        attempts += 1;
        let candidate: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..=side)).collect();
        let far_enough = centers.iter().all(|c| {
            let sq: f64 = c.iter().zip(&candidate).map(|(a, b)| (a - b) * (a - b)).sum();
            libm::sqrt(sq) >= separation
        });
        if far_enough {
            centers.push(candidate);
        }
    }
    let name = alloc::format!("blobs-{k}x{per_cluster}-d{dim}");
    let dataset = gaussian_cloud(name, &centers, per_cluster, dim, variance, &mut rng)?;
    Ok(Generated { dataset, centers })
}

/// Column means of the points carrying `label`.
pub fn class_mean(dataset: &Dataset, label: usize) -> Option<Vec<f64>> {
    let labels = dataset.labels()?;
    let mut sum = vec![0.0; dataset.dim()];
    let mut count = 0usize;
    for (i, _) in labels.iter().enumerate().filter(|(_, &l)| l == label) {
        for (s, x) in sum.iter_mut().zip(dataset.point(i)) {
            *s += x;
        }
        count += 1;
    }
    if count == 0 {
        return None;
    }
    Some(sum.into_iter().map(|s| s / count as f64).collect())
}
