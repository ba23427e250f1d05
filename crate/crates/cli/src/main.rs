//! `hybridbench`: plan, generate, evaluate and analyze hybrid-image sweeps.
//!
//! Stages hand off through files under `--out`:
//!
//! ```text
//! plan.json  hybrids/*.png  generation_report.json
//! predictions.csv  evaluation_report.json  report/
//! ```
//!
//! Exit codes: 0 success, 1 internal failure, 2 configuration or argument
//! error, 3 missing input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hybridbench_core::analysis::{aggregate, crossovers, emit_reports, Metric, ALL_PAIRS};
use hybridbench_core::dataset::{generate_dataset, plan_dataset, Canvas, DatasetPlan, Manifest, PathCheck};
use hybridbench_core::inference::{
    evaluate_dataset, load_predictions, prototype_mock_backend, save_predictions, ClassifierBackend,
    LabelMap, CAPTURE_K, MOCK_IDENTITY,
};
use hybridbench_core::{CutoffFrequency, Error, Result, DEFAULT_CUTOFFS};
use log::{info, warn};

#[derive(Debug, Parser)]
#[command(name = "hybridbench", version, about = "Hybrid-image cutoff sweeps for image classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate every blend job and write plan.json
    Plan(RunArgs),
    /// Render the planned hybrids to PNG
    Generate(RunArgs),
    /// Classify the hybrids and write predictions.csv
    Evaluate(RunArgs),
    /// Build hit curves, crossovers and CSV/SVG reports
    Analyze(RunArgs),
    /// plan, generate, evaluate and analyze in one go
    RunAll(RunArgs),
    /// Write the synthetic gradient/checkerboard demo manifest
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Manifest JSON (needed by `plan` and `run-all`)
    #[arg(long)]
    manifest: Option<PathBuf>,

    /// Working directory for all stage outputs
    #[arg(long)]
    out: PathBuf,

    /// Comma-separated cutoffs (Gaussian σ in pixels)
    #[arg(long, value_delimiter = ',')]
    cutoffs: Option<Vec<f64>>,

    /// Square canvas side the sources are resized to
    #[arg(long)]
    canvas: Option<usize>,

    /// `mock` or the path of an ONNX model
    #[arg(long, default_value = "mock")]
    backend: String,

    /// Sidecar JSON for an ONNX model (default: model path with .json)
    #[arg(long)]
    sidecar: Option<PathBuf>,

    /// Ranks captured per prediction
    #[arg(long, default_value_t = CAPTURE_K)]
    k: usize,

    /// Worker threads
    #[arg(long, env = "HYBRIDBENCH_THREADS")]
    workers: Option<usize>,

    /// Regenerate files that already exist
    #[arg(long)]
    overwrite: bool,

    /// Keep only the first N specs of the plan
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Debug, Args)]
struct DemoArgs {
    /// Directory for the demo images and manifest.json
    #[arg(long)]
    out: PathBuf,

    /// Image side in pixels
    #[arg(long, default_value_t = 224)]
    side: usize,

    /// Images per category
    #[arg(long, default_value_t = 3)]
    images: usize,
}

struct Layout {
    plan: PathBuf,
    hybrids: PathBuf,
    generation_report: PathBuf,
    predictions: PathBuf,
    evaluation_report: PathBuf,
    report: PathBuf,
}

impl Layout {
    fn new(out: &Path) -> Self {
        Self {
            plan: out.join("plan.json"),
            hybrids: out.join("hybrids"),
            generation_report: out.join("generation_report.json"),
            predictions: out.join("predictions.csv"),
            evaluation_report: out.join("evaluation_report.json"),
            report: out.join("report"),
        }
    }
}

impl RunArgs {
    fn workers(&self) -> Result<usize> {
        match self.workers {
            Some(0) => Err(Error::Config("--workers must be at least 1".into())),
            Some(n) => Ok(n),
            None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        }
    }

    fn layout(&self) -> Layout {
        Layout::new(&self.out)
    }

    fn load_plan(&self) -> Result<DatasetPlan> {
        let mut plan = DatasetPlan::load(&self.layout().plan)?;
        if let Some(n) = self.limit {
            plan.truncate(n);
        }
        Ok(plan)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn cmd_plan(args: &RunArgs) -> Result<()> {
    let manifest_path = args
        .manifest
        .as_ref()
        .ok_or_else(|| Error::Config("--manifest is required to plan".into()))?;
    let manifest = Manifest::load(manifest_path)?;
    let raw = args
        .cutoffs
        .clone()
        .or(manifest.cutoffs.clone())
        .unwrap_or_else(|| DEFAULT_CUTOFFS.to_vec());
    if raw.is_empty() || raw.iter().any(|&c| !c.is_finite() || c <= 0.0) {
        return Err(Error::Config(format!("cutoffs must be non-empty and positive, got {raw:?}")));
    }
    let cutoffs = raw
        .into_iter()
        .map(CutoffFrequency::new)
        .collect::<Result<Vec<_>>>()?;
    let canvas = args
        .canvas
        .map(Canvas::square)
        .or(manifest.canvas)
        .unwrap_or_default();
    let mut plan = plan_dataset(manifest.categories, &cutoffs, canvas, PathCheck::Deferred)?;
    if let Some(n) = args.limit {
        plan.truncate(n);
    }
    create_dir(&args.out)?;
    plan.save(&args.layout().plan)?;
    println!("{}", plan.specs.len());
    Ok(())
}

fn cmd_generate(args: &RunArgs) -> Result<()> {
    let workers = args.workers()?;
    let plan = args.load_plan()?;
    let layout = args.layout();
    let report = generate_dataset(&plan, &layout.hybrids, workers, args.overwrite)?;
    write_file(&layout.generation_report, &report.to_json()?)?;
    if report.failed > 0 {
        warn!("{} hybrids failed; see {}", report.failed, layout.generation_report.display());
    }
    println!(
        "generated {} skipped {} failed {}",
        report.generated, report.skipped, report.failed
    );
    Ok(())
}

fn load_backend(args: &RunArgs, plan: &DatasetPlan) -> Result<Box<dyn ClassifierBackend>> {
    if args.backend == "mock" {
        return Ok(Box::new(prototype_mock_backend(plan)?));
    }
    let model = PathBuf::from(&args.backend);
    if !model.is_file() {
        return Err(Error::MissingInput(model));
    }
    let sidecar = args.sidecar.clone().unwrap_or_else(|| model.with_extension("json"));
    open_onnx(&model, &sidecar)
}

/// Model paths are checked so a missing file is reported as such, but no
/// ONNX runtime is linked into this build.
fn open_onnx(model: &Path, sidecar: &Path) -> Result<Box<dyn ClassifierBackend>> {
    hybridbench_core::inference::Sidecar::load(sidecar)?;
    Err(Error::Config(format!(
        "cannot load {}: this build has no ONNX runtime; use --backend mock",
        model.display()
    )))
}

fn cmd_evaluate(args: &RunArgs) -> Result<()> {
    let workers = args.workers()?;
    let plan = args.load_plan()?;
    let layout = args.layout();
    if !layout.hybrids.is_dir() {
        return Err(Error::MissingInput(layout.hybrids));
    }
    let backend = load_backend(args, &plan)?;
    if backend.identity() != MOCK_IDENTITY {
        LabelMap::from_class_ids(&plan).validate(backend.label_space_size())?;
    }
    let k = args.k.min(backend.label_space_size());
    if args.k == 0 {
        return Err(Error::Config("--k must be at least 1".into()));
    }
    if k < args.k {
        info!("{} has only {k} labels; capturing top-{k}", backend.identity());
    }
    let eval = evaluate_dataset(&plan, &layout.hybrids, backend.as_ref(), k, workers)?;
    save_predictions(&eval.records, &layout.predictions)?;
    let report = eval.report(backend.identity());
    write_file(&layout.evaluation_report, &serde_json::to_string_pretty(&report)?)?;
    println!("records {} failed {}", report.records, report.failed);
    Ok(())
}

fn cmd_analyze(args: &RunArgs) -> Result<()> {
    let plan = args.load_plan()?;
    let layout = args.layout();
    let records = load_predictions(&layout.predictions)?;
    let mock = records.first().is_some_and(|r| r.backend == MOCK_IDENTITY);
    let labels = if mock {
        LabelMap::by_position(&plan)
    } else {
        LabelMap::from_class_ids(&plan)
    };
    let (pairs, agg) = aggregate(&records, &labels, &plan)?;
    let results = crossovers(&pairs, &agg);
    let names: Vec<String> = plan.categories.iter().map(|c| c.name.clone()).collect();
    create_dir(&layout.report)?;
    emit_reports(&pairs, &agg, &results, &names, &layout.report)?;
    for r in results.iter().filter(|r| r.low_category == ALL_PAIRS) {
        let metric = if r.metric == Metric::Top1 { "top-1" } else { "top-5" };
        match r.crossover {
            Some(c) => println!("{metric} crossover at cutoff {:.3} (between {} and {})", c.cutoff, c.bracket.0, c.bracket.1),
            None => println!("{metric} curves do not cross"),
        }
    }
    println!("reports written to {}", layout.report.display());
    Ok(())
}

fn cmd_demo(args: &DemoArgs) -> Result<()> {
    let path = hybridbench_core::synthetic::write_demo_manifest(&args.out, args.side, args.images)?;
    println!("{}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Plan(a) => cmd_plan(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::RunAll(a) => {
            a.workers()?;
            cmd_plan(&a)?;
            cmd_generate(&a)?;
            cmd_evaluate(&a)?;
            cmd_analyze(&a)
        }
        Command::Demo(a) => cmd_demo(&a),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::Config(_) => 2,
        Error::MissingInput(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
