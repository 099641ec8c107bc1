use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use active_medoids::{gen_blobs, gen_norm, predict_query_ratio, NmiVariant, Objective};
use active_medoids_cli::report::curve_csv;
use active_medoids_cli::runner::curve_points;
use active_medoids_cli::{
    append_ledger, dump_book, load_csv, run_detailed, sweep_budget, write_csv, Algorithm,
    BudgetSpec, CliError, LabelColumn, Manifest, Result, RunConfig, RunReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Query-efficient k-medoids: run active, random-rival or full-matrix
/// clustering on a CSV dataset and report NMI and the share of distances asked.
#[derive(Debug, Parser)]
#[command(name = "active-medoids", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic dataset as CSV (features x0.., trailing `label`).
    Generate {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Print the closed-form query-ratio estimate for an active run.
    Predict {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        b: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Defaults to k(s+1).
        #[arg(long)]
        th: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Gaussian clouds around centers drawn uniformly in a hypercube.
    Norm {
        #[arg(long, default_value_t = 10)]
        centers: usize,
        #[arg(long, default_value_t = 1000)]
        per_center: usize,
        #[arg(long, default_value_t = 20)]
        dim: usize,
        #[arg(long, default_value_t = 50.0)]
        side: f64,
        #[arg(long, default_value_t = 1.0)]
        variance: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gaussian blobs whose centers are at least `separation` apart.
    Blobs {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        per_cluster: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10.0)]
        separation: f64,
        #[arg(long, default_value_t = 1.0)]
        variance: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoArg {
    Active,
    Rr,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Geometric,
    Arithmetic,
    Max,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Plain,
    Squared,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// CSV dataset.
    #[arg(long, conflicts_with = "manifest")]
    data: Option<PathBuf>,
    /// TOML manifest naming the CSV, label column and k.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Label column: zero-based index or header name.
    #[arg(long = "label-col")]
    label_col: Option<LabelColumn>,
    #[arg(long, value_enum, default_value = "active")]
    algo: AlgoArg,
    /// Number of clusters; falls back to the manifest, then to the label count.
    #[arg(long)]
    k: Option<usize>,
    /// Branching factor.
    #[arg(long, default_value_t = 2)]
    b: usize,
    /// Random picks per cluster.
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// Leaf threshold; defaults to k(s+1).
    #[arg(long)]
    th: Option<usize>,
    /// Maximum k-medoids iterations.
    #[arg(long, default_value_t = 100)]
    p: usize,
    /// Random-rival budget as a share of all pairs.
    #[arg(long, conflicts_with = "budget_pairs")]
    budget: Option<f64>,
    /// Random-rival budget as a pair count.
    #[arg(long = "budget-pairs")]
    budget_pairs: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sweep random-rival budgets 1/steps, 2/steps, ..., 1.
    #[arg(long, num_args = 0..=1, default_missing_value = "20", value_name = "STEPS")]
    sweep: Option<usize>,
    /// JSON report (an array for sweeps); printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Results ledger CSV to append one row per run to.
    #[arg(long)]
    ledger: Option<PathBuf>,
    /// `budget_ratio,nmi` curve CSV for sweeps.
    #[arg(long)]
    curve: Option<PathBuf>,
    #[arg(long = "nmi-variant", value_enum, default_value = "geometric")]
    nmi_variant: VariantArg,
    #[arg(long, value_enum, default_value = "plain")]
    objective: ObjectiveArg,
    /// Write the final distance book as `i,j,value,status`.
    #[arg(long = "dump-book")]
    dump_book: Option<PathBuf>,
    /// Fail when the dataset has no labels instead of omitting NMI.
    #[arg(long = "require-nmi")]
    require_nmi: bool,
}

fn error_line(kind: &str, message: &str) -> String {
    let quoted = serde_json::to_string(message).unwrap_or_else(|_| format!("\"{message}\""));
    format!("error kind={kind} message={quoted}")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let msg = e.kind().to_string();
            eprintln!("{}", error_line("usage", &msg));
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Some(Command::Generate { kind }) => generate(kind),
        Some(Command::Predict { n, k, b, s, th }) => {
            let ratio = predict_query_ratio(n, k, b, s, th.unwrap_or(k * (s + 1)))?;
            println!("{ratio}");
            Ok(())
        }
        None => run(cli.run),
    }
}

fn generate(kind: GenKind) -> Result<()> {
    let (g, out) = match kind {
        GenKind::Norm {
            centers,
            per_center,
            dim,
            side,
            variance,
            seed,
            out,
        } => (gen_norm(centers, per_center, dim, side, variance, seed)?, out),
        GenKind::Blobs {
            k,
            per_cluster,
            dim,
            separation,
            variance,
            seed,
            out,
        } => (gen_blobs(k, per_cluster, dim, separation, variance, seed)?, out),
    };
    write_csv(&g.dataset, &out)
}

fn run(args: RunArgs) -> Result<()> {
    let (path, label, manifest_k, name) = match (&args.manifest, &args.data) {
        (Some(m), _) => {
            let m = Manifest::load(m)?;
            (m.path, args.label_col.clone().or(m.label_column), m.k, m.name)
        }
        (None, Some(d)) => (d.clone(), args.label_col.clone(), None, None),
        (None, None) => return Err(CliError::Config("one of --data or --manifest is required".into())),
    };
    let mut dataset = load_csv(&path, label.as_ref())?;
    if let Some(name) = name {
        dataset = active_medoids::Dataset::new(
            name,
            dataset.dim(),
            dataset.points().to_vec(),
            dataset.labels().map(<[usize]>::to_vec),
            dataset.class_names().to_vec(),
        )?;
    }
    let k = args
        .k
        .or(manifest_k)
        .or(dataset.num_classes())
        .ok_or_else(|| CliError::Config("no --k given and the dataset has no labels".into()))?;

    let algorithm = match args.algo {
        AlgoArg::Active => Algorithm::Active,
        AlgoArg::Rr => Algorithm::RandomRival,
        AlgoArg::Full => Algorithm::Full,
    };
    let mut config = RunConfig::new(algorithm, k);
    config.branching = args.b;
    config.picks = args.s;
    config.leaf_threshold = args.th;
    config.max_iter = args.p;
    config.seed = args.seed;
    config.budget = match (args.budget, args.budget_pairs) {
        (Some(r), _) => Some(BudgetSpec::Ratio(r)),
        (None, Some(p)) => Some(BudgetSpec::Pairs(p)),
        (None, None) => None,
    };
    config.nmi_variant = match args.nmi_variant {
        VariantArg::Geometric => NmiVariant::Geometric,
        VariantArg::Arithmetic => NmiVariant::Arithmetic,
        VariantArg::Max => NmiVariant::Max,
    };
    config.objective = match args.objective {
        ObjectiveArg::Plain => Objective::Plain,
        ObjectiveArg::Squared => Objective::Squared,
    };
    config.require_nmi = args.require_nmi;

    if let Some(steps) = args.sweep {
        if algorithm != Algorithm::RandomRival {
            return Err(CliError::Config("--sweep needs --algo rr".into()));
        }
        let reports = sweep_budget(&dataset, &config, steps)?;
        let json = serde_json::to_string_pretty(&reports)?;
        emit(args.out.as_deref(), &json)?;
        if let Some(curve) = &args.curve {
            let text = curve_csv(&curve_points(&reports, steps));
            std::fs::write(curve, text).map_err(|e| io_err(curve, e))?;
        }
        if let Some(ledger) = &args.ledger {
            append_ledger(ledger, &reports)?;
        }
        for r in &reports {
            warn(r);
        }
        return Ok(());
    }

    let output = run_detailed(&dataset, &config)?;
    warn(&output.report);
    emit(args.out.as_deref(), &output.report.to_json()?)?;
    if let Some(ledger) = &args.ledger {
        append_ledger(ledger, std::slice::from_ref(&output.report))?;
    }
    if let Some(path) = &args.dump_book {
        let book = output
            .book
            .as_ref()
            .ok_or_else(|| CliError::Config("--dump-book needs --algo active or rr".into()))?;
        let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| io_err(path, e))?);
        dump_book(book, &mut f)
            .and_then(|()| f.flush())
            .map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

fn warn(report: &RunReport) {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn emit(out: Option<&Path>, json: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{json}\n")).map_err(|e| io_err(path, e)),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.into(),
        source,
    }
}
