//! Parallel, deterministic materialization of a [`DatasetPlan`].

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::Arc;

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plan::{DatasetPlan, HybridSpec};
use crate::error::{Error, Result};
use crate::filter::{compose_from_parts, low_pass_with};
use crate::kernel::GaussianKernel;
use crate::raster::RasterImage;
use crate::resize::resize_bilinear;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub spec: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub generated: usize,
    pub skipped: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
}

impl GenerationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

enum Outcome {
    Generated,
    Skipped,
    Failed(String),
}

type SourceKey = (usize, usize);
type Loaded = std::result::Result<Arc<RasterImage>, String>;

pub(crate) fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::invalid("worker count must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

fn ensure_writable(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".hybridbench-write-probe");
    std::fs::write(&probe, b"").map_err(|e| Error::io(dir, e))?;
    let _ = std::fs::remove_file(&probe);
    Ok(())
}

/// Loads and resizes one source image to the plan canvas.
pub fn load_source(plan: &DatasetPlan, category: &str, index: usize) -> Result<RasterImage> {
    let path = plan
        .source_path(category, index)
        .ok_or_else(|| Error::Data(format!("no source image {category}[{index}] in plan")))?;
    let img = RasterImage::load(path)?;
    resize_bilinear(&img, plan.canvas.width, plan.canvas.height)
}

/// Writes every spec of `plan` as `<out_dir>/<spec>.png`.
///
/// Sources are decoded once, and each source is blurred once per cutoff;
/// the composed pixels equal those of
/// [`compose_hybrid`](crate::filter::compose_hybrid) on the resized sources.
/// A source that cannot be read fails only the specs that use it.
pub fn generate_dataset(
    plan: &DatasetPlan,
    out_dir: &Path,
    workers: usize,
    overwrite: bool,
) -> Result<GenerationReport> {
    let pool = build_pool(workers)?;
    ensure_writable(out_dir)?;

    let positions: HashMap<&str, usize> = plan
        .categories
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.as_str(), i))
        .collect();
    let key_of = |cat: &str, idx: usize| -> Result<SourceKey> {
        let pos = *positions
            .get(cat)
            .ok_or_else(|| Error::Data(format!("spec references unknown category {cat:?}")))?;
        if idx >= plan.categories[pos].images.len() {
            return Err(Error::Data(format!("{cat}[{idx}] is out of range")));
        }
        Ok((pos, idx))
    };

    let mut outcomes: Vec<Option<Outcome>> = Vec::with_capacity(plan.specs.len());
    let mut pending: Vec<(usize, SourceKey, SourceKey)> = Vec::new();
    for (i, spec) in plan.specs.iter().enumerate() {
        if !overwrite && out_dir.join(spec.file_name()).exists() {
            outcomes.push(Some(Outcome::Skipped));
            continue;
        }
        let low = key_of(&spec.low_category, spec.low_index)?;
        let high = key_of(&spec.high_category, spec.high_index)?;
        pending.push((i, low, high));
        outcomes.push(None);
    }

    let needed: BTreeSet<SourceKey> = pending.iter().flat_map(|&(_, l, h)| [l, h]).collect();
    info!("loading {} source images", needed.len());
    let sources: HashMap<SourceKey, Loaded> = pool.install(|| {
        needed
            .par_iter()
            .map(|&(cat, idx)| {
                let loaded = load_source(plan, &plan.categories[cat].name, idx)
                    .map(Arc::new)
                    .map_err(|e| e.to_string());
                ((cat, idx), loaded)
            })
            .collect()
    });

    for &cutoff in &plan.cutoffs {
        let group: Vec<&(usize, SourceKey, SourceKey)> = pending
            .iter()
            .filter(|(i, _, _)| plan.specs[*i].cutoff == cutoff)
            .collect();
        if group.is_empty() {
            continue;
        }
        let kernel = GaussianKernel::new(cutoff);
        let keys: BTreeSet<SourceKey> = group.iter().flat_map(|&&(_, l, h)| [l, h]).collect();
        debug!("cutoff {cutoff}: {} specs, {} sources", group.len(), keys.len());
        let blurred: HashMap<SourceKey, Arc<RasterImage>> = pool.install(|| {
            keys.par_iter()
                .filter_map(|k| match &sources[k] {
                    Ok(img) => Some((*k, Arc::new(low_pass_with(img, &kernel)))),
                    Err(_) => None,
                })
                .collect()
        });
        let results: Vec<(usize, Outcome)> = pool.install(|| {
            group
                .par_iter()
                .map(|&&(i, low, high)| {
                    let spec = &plan.specs[i];
                    let outcome = match write_one(spec, out_dir, &sources, &blurred, low, high) {
                        Ok(()) => Outcome::Generated,
                        Err(reason) => Outcome::Failed(reason),
                    };
                    (i, outcome)
                })
                .collect()
        });
        for (i, outcome) in results {
            outcomes[i] = Some(outcome);
        }
    }

    let mut report = GenerationReport::default();
    for (spec, outcome) in plan.specs.iter().zip(outcomes) {
        match outcome.expect("every spec has an outcome") {
            Outcome::Generated => report.generated += 1,
            Outcome::Skipped => report.skipped += 1,
            Outcome::Failed(reason) => {
                report.failed += 1;
                report.failures.push(Failure {
                    spec: spec.file_stem(),
                    reason,
                });
            }
        }
    }
    info!(
        "generated {}, skipped {}, failed {}",
        report.generated, report.skipped, report.failed
    );
    Ok(report)
}

fn write_one(
    spec: &HybridSpec,
    out_dir: &Path,
    sources: &HashMap<SourceKey, Loaded>,
    blurred: &HashMap<SourceKey, Arc<RasterImage>>,
    low: SourceKey,
    high: SourceKey,
) -> std::result::Result<(), String> {
    let high_src = sources[&high].as_ref().map_err(|e| format!("high source: {e}"))?;
    sources[&low].as_ref().map_err(|e| format!("low source: {e}"))?;
    let hybrid = compose_from_parts(&blurred[&low], high_src, &blurred[&high]).map_err(|e| e.to_string())?;
    let bytes = hybrid.encode_png().map_err(|e| e.to_string())?;
    let name = spec.file_name();
    let tmp = out_dir.join(format!(".{name}.partial"));
    let dest = out_dir.join(&name);
    std::fs::write(&tmp, bytes).map_err(|e| format!("writing {}: {e}", tmp.display()))?;
    std::fs::rename(&tmp, &dest).map_err(|e| format!("renaming to {}: {e}", dest.display()))
}
