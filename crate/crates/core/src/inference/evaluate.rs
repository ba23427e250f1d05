use std::io::{Read, Write};
use std::path::Path;
use std::sync::Mutex;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::backend::ClassifierBackend;
use super::preprocess::preprocess;
use super::topk::top_k;
use crate::dataset::{build_pool, DatasetPlan, Failure};
use crate::error::{Error, Result};
use crate::raster::RasterImage;

/// Ranked top-k output of one backend on one hybrid.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    /// File stem of the hybrid spec.
    pub spec: String,
    pub backend: String,
    /// `(label, score)`, best first.
    pub topk: Vec<(usize, f32)>,
}

impl PredictionRecord {
    pub fn top1(&self) -> Option<usize> {
        self.topk.first().map(|t| t.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Evaluation {
    pub records: Vec<PredictionRecord>,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub backend: String,
    pub records: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
}

impl Evaluation {
    pub fn report(&self, backend: &str) -> EvaluationReport {
        EvaluationReport {
            backend: backend.to_string(),
            records: self.records.len(),
            failed: self.failures.len(),
            failures: self.failures.clone(),
        }
    }
}

enum Step {
    Record(PredictionRecord),
    Failed(Failure),
}

/// Classifies every planned hybrid found in `images_dir`.
///
/// Records come back in plan order whatever the scheduling. Missing or
/// undecodable images become failures; backend errors and NaN scores
/// abort the run.
pub fn evaluate_dataset(
    plan: &DatasetPlan,
    images_dir: &Path,
    backend: &dyn ClassifierBackend,
    k: usize,
    workers: usize,
) -> Result<Evaluation> {
    if !images_dir.is_dir() {
        return Err(Error::MissingInput(images_dir.to_path_buf()));
    }
    if k == 0 || k > backend.label_space_size() {
        return Err(Error::invalid(format!(
            "k must be in 1..={}, got {k}",
            backend.label_space_size()
        )));
    }
    let pool = build_pool(workers)?;
    let serial = (!backend.supports_concurrent_calls()).then(|| Mutex::new(()));
    let identity = backend.identity().to_string();

    let steps: Vec<Result<Step>> = pool.install(|| {
        plan.specs
            .par_iter()
            .map(|spec| {
                let stem = spec.file_stem();
                let path = images_dir.join(spec.file_name());
                let img = match RasterImage::load(&path) {
                    Ok(img) => img,
                    Err(e) => {
                        return Ok(Step::Failed(Failure {
                            spec: stem,
                            reason: e.to_string(),
                        }))
                    }
                };
                let input = preprocess(&img, backend.input_spec())?;
                let scores = {
                    let _guard = serial.as_ref().map(|m| m.lock().unwrap_or_else(|p| p.into_inner()));
                    backend.classify(&input)?
                };
                if scores.len() != backend.label_space_size() {
                    return Err(Error::Backend(format!(
                        "{} returned {} scores for a {}-label space",
                        backend.identity(),
                        scores.len(),
                        backend.label_space_size()
                    )));
                }
                let topk = top_k(&scores, k).map_err(|e| match e {
                    Error::Data(msg) => Error::Data(format!("{stem}: {msg}")),
                    other => other,
                })?;
                Ok(Step::Record(PredictionRecord {
                    spec: stem,
                    backend: identity.clone(),
                    topk,
                }))
            })
            .collect()
    });

    let mut out = Evaluation::default();
    for step in steps {
        match step? {
            Step::Record(r) => out.records.push(r),
            Step::Failed(f) => out.failures.push(f),
        }
    }
    info!(
        "{}: {} records, {} failures",
        identity,
        out.records.len(),
        out.failures.len()
    );
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct PredictionRow {
    spec: String,
    backend: String,
    rank: usize,
    label_id: usize,
    score: f32,
}

/// CSV with header `spec,backend,rank,label_id,score`, one row per rank
/// (1-based), LF line endings.
pub fn write_predictions<W: Write>(records: &[PredictionRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for r in records {
        for (i, &(label_id, score)) in r.topk.iter().enumerate() {
            w.serialize(PredictionRow {
                spec: r.spec.clone(),
                backend: r.backend.clone(),
                rank: i + 1,
                label_id,
                score,
            })?;
        }
    }
    w.flush().map_err(|e| Error::Data(format!("writing predictions: {e}")))?;
    Ok(())
}

/// Groups consecutive rows of the same spec back into records.
pub fn read_predictions<R: Read>(input: R) -> Result<Vec<PredictionRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut records: Vec<PredictionRecord> = Vec::new();
    for row in rdr.deserialize() {
        let row: PredictionRow = row?;
        let continues = records
            .last()
            .is_some_and(|r| r.spec == row.spec && r.backend == row.backend);
        if !continues {
            if row.rank != 1 {
                return Err(Error::Data(format!("{}: ranks must start at 1", row.spec)));
            }
            records.push(PredictionRecord {
                spec: row.spec,
                backend: row.backend,
                topk: vec![(row.label_id, row.score)],
            });
        } else {
            let last = records.last_mut().expect("checked above");
            if row.rank != last.topk.len() + 1 {
                return Err(Error::Data(format!("{}: rank {} out of sequence", row.spec, row.rank)));
            }
            last.topk.push((row.label_id, row.score));
        }
    }
    Ok(records)
}

pub fn save_predictions(records: &[PredictionRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_predictions(records, std::io::BufWriter::new(file))
}

pub fn load_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    match std::fs::File::open(path) {
        Ok(f) => read_predictions(std::io::BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::MissingInput(path.to_path_buf())),
        Err(e) => Err(Error::io(path, e)),
    }
}
