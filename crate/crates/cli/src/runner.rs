//! Runs one algorithm on one dataset and turns the outcome into a [`RunReport`].

use std::str::FromStr;
use std::time::Instant;

use active_medoids::baseline::{random_rival_with, sweep_ratios};
use active_medoids::{
    active_kmedoids, kmedoids, nmi_with, predict_query_ratio, ActiveParams, Budget,
    ClusteringResult, Dataset, DistanceBook, DistanceMatrix, DistanceOracle, KmedoidsParams,
    NmiVariant, Objective, Oracle,
};

use crate::error::{CliError, Result};
use crate::report::{ReportParams, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Active,
    RandomRival,
    Full,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Active => "active",
            Algorithm::RandomRival => "rr",
            Algorithm::Full => "full",
        }
    }
}

impl FromStr for Algorithm {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "active" => Ok(Algorithm::Active),
            "rr" | "random-rival" => Ok(Algorithm::RandomRival),
            "full" => Ok(Algorithm::Full),
            other => Err(CliError::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

pub fn variant_name(v: NmiVariant) -> &'static str {
    match v {
        NmiVariant::Geometric => "geometric",
        NmiVariant::Arithmetic => "arithmetic",
        NmiVariant::Max => "max",
    }
}

pub fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Plain => "plain",
        Objective::Squared => "squared",
    }
}

/// Random-Rival budget, as a share of all pairs or an absolute count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetSpec {
    Ratio(f64),
    Pairs(usize),
}

impl BudgetSpec {
    pub fn resolve(self, n: usize) -> Result<Budget> {
        let b = match self {
            BudgetSpec::Ratio(r) => Budget::from_ratio(n, r)?,
            BudgetSpec::Pairs(p) => Budget(p),
        };
        b.check(n)?;
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    pub branching: usize,
    pub picks: usize,
    /// Defaults to `k * (picks + 1)`.
    pub leaf_threshold: Option<usize>,
    pub max_iter: usize,
    pub seed: u64,
    pub budget: Option<BudgetSpec>,
    pub nmi_variant: NmiVariant,
    pub objective: Objective,
    /// Fail instead of skipping NMI when the dataset has no labels.
    pub require_nmi: bool,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, k: usize) -> Self {
        RunConfig {
            algorithm,
            k,
            branching: 2,
            picks: 1,
            leaf_threshold: None,
            max_iter: active_medoids::kmedoids::DEFAULT_MAX_ITER,
            seed: 42,
            budget: None,
            nmi_variant: NmiVariant::Geometric,
            objective: Objective::Plain,
            require_nmi: false,
        }
    }

    pub fn active_params(&self) -> ActiveParams {
        ActiveParams {
            k: self.k,
            branching: self.branching,
            leaf_threshold: self.leaf_threshold.unwrap_or(self.k * (self.picks + 1)),
            picks_per_cluster: self.picks,
            max_iter: self.max_iter,
            seed: self.seed,
            objective: self.objective,
        }
    }

    fn kmedoids_params(&self) -> KmedoidsParams {
        KmedoidsParams::new(self.k, self.seed)
            .with_max_iter(self.max_iter)
            .with_objective(self.objective)
    }
}

/// A finished run: the report plus the book it clustered on.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub clustering: ClusteringResult,
    pub book: Option<DistanceBook>,
}

pub fn run_once(dataset: &Dataset, config: &RunConfig) -> Result<RunReport> {
    Ok(run_detailed(dataset, config)?.report)
}

pub fn run_detailed(dataset: &Dataset, config: &RunConfig) -> Result<RunOutput> {
    let n = dataset.len();
    let mut warnings = Vec::new();
    if config.require_nmi && dataset.labels().is_none() {
        return Err(CliError::Config(format!(
            "dataset `{}` has no labels to score against",
            dataset.name()
        )));
    }
    if let Some(classes) = dataset.num_classes() {
        if classes != config.k {
            warnings.push(format!("k = {} but labels have {classes} classes", config.k));
        }
    }

    let mut oracle = DistanceOracle::euclidean(dataset);
    let start = Instant::now();
    let mut params = ReportParams {
        k: config.k,
        b: None,
        s: None,
        t_h: None,
        p: config.max_iter,
        seed: config.seed,
        budget: None,
        objective: objective_name(config.objective).into(),
    };
    let mut predicted = None;
    let (clustering, book) = match config.algorithm {
        Algorithm::Active => {
            let ap = config.active_params();
            params.b = Some(ap.branching);
            params.s = Some(ap.picks_per_cluster);
            params.t_h = Some(ap.leaf_threshold);
            let out = active_kmedoids(&mut oracle, &ap)?;
            predicted = predict_query_ratio(n, ap.k, ap.branching, ap.picks_per_cluster, ap.leaf_threshold).ok();
            (out.clustering, Some(out.book))
        }
        Algorithm::RandomRival => {
            let requested = config
                .budget
                .ok_or_else(|| CliError::Config("random-rival needs a budget".into()))?;
            let budget = requested.resolve(n)?;
            params.budget = Some(budget.0);
            let out = random_rival_with(&mut oracle, budget, config.seed, &config.kmedoids_params())?;
            (out.clustering, Some(out.book))
        }
        Algorithm::Full => {
            let mut failure = None;
            let full = DistanceMatrix::from_fn(n, |i, j| match oracle.query(i, j) {
                Ok(d) => d,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            });
            if let Some(e) = failure {
                return Err(e.into());
            }
            (kmedoids(&full, &config.kmedoids_params())?, None)
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let nmi = match dataset.labels() {
        Some(truth) => Some(nmi_with(&clustering.assignment, truth, config.nmi_variant)?),
        None => None,
    };
    let ledger = oracle.ledger();
    let report = RunReport {
        dataset: dataset.name().to_string(),
        algorithm: config.algorithm.as_str().into(),
        n,
        params,
        nmi,
        nmi_variant: variant_name(config.nmi_variant).into(),
        asked_pairs: ledger.asked(),
        asked_ratio: ledger.ratio()?,
        predicted_ratio: predicted,
        objective: clustering.objective,
        iterations: clustering.iterations_run,
        medoids: clustering.medoids.clone(),
        warnings,
        wall_time_ms,
    };
    Ok(RunOutput {
        report,
        clustering,
        book,
    })
}

/// Random-Rival at budgets `1/steps, ..., 1` with one shared seed.
///
/// Pair draws for a smaller budget are a prefix of those for a larger one.
pub fn sweep_budget(dataset: &Dataset, config: &RunConfig, steps: usize) -> Result<Vec<RunReport>> {
    if config.algorithm != Algorithm::RandomRival {
        return Err(CliError::Config("budget sweeps run random-rival only".into()));
    }
    if steps == 0 {
        return Err(CliError::Config("sweep needs at least one step".into()));
    }
    sweep_ratios(steps)
        .into_iter()
        .map(|ratio| {
            let cfg = RunConfig {
                budget: Some(BudgetSpec::Ratio(ratio)),
                ..config.clone()
            };
            run_once(dataset, &cfg)
        })
        .collect()
}

/// `(budget ratio, nmi)` pairs for [`crate::report::curve_csv`].
pub fn curve_points(reports: &[RunReport], steps: usize) -> Vec<(f64, Option<f64>)> {
    sweep_ratios(steps)
        .into_iter()
        .zip(reports)
        .map(|(r, rep)| (r, rep.nmi))
        .collect()
}
