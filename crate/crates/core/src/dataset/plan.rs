use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::manifest::{slugify, validate_categories, Canvas, CategoryManifest};
use crate::error::{Error, Result};
use crate::kernel::CutoffFrequency;

/// One blend job: the low-pass source, the high-pass source, and σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridSpec {
    pub low_category: String,
    pub low_index: usize,
    pub high_category: String,
    pub high_index: usize,
    pub cutoff: CutoffFrequency,
}

impl HybridSpec {
    /// `<low>_<i>__<high>_<j>__c<cutoff>`
    pub fn file_stem(&self) -> String {
        SpecKey::from(self).to_string()
    }

    pub fn file_name(&self) -> String {
        format!("{}.png", self.file_stem())
    }
}

/// Filename-level identity of a spec, with slugged category names.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecKey {
    pub low_slug: String,
    pub low_index: usize,
    pub high_slug: String,
    pub high_index: usize,
    pub cutoff: CutoffFrequency,
}

impl From<&HybridSpec> for SpecKey {
    fn from(spec: &HybridSpec) -> Self {
        Self {
            low_slug: slugify(&spec.low_category),
            low_index: spec.low_index,
            high_slug: slugify(&spec.high_category),
            high_index: spec.high_index,
            cutoff: spec.cutoff,
        }
    }
}

impl fmt::Display for SpecKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_{}__{}_{}__c{}",
            self.low_slug, self.low_index, self.high_slug, self.high_index, self.cutoff
        )
    }
}

impl SpecKey {
    /// Parses a file stem or file name (`.png` suffix optional).
    pub fn parse(name: &str) -> Result<Self> {
        let stem = name.strip_suffix(".png").unwrap_or(name);
        let bad = || Error::Data(format!("not a hybrid file name: {name:?}"));
        let parts: Vec<&str> = stem.split("__").collect();
        let [low, high, cutoff] = parts[..] else {
            return Err(bad());
        };
        let split = |s: &str| -> Result<(String, usize)> {
            let (slug, idx) = s.rsplit_once('_').ok_or_else(bad)?;
            if slug.is_empty() || idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            Ok((slug.to_string(), idx.parse().map_err(|_| bad())?))
        };
        let (low_slug, low_index) = split(low)?;
        let (high_slug, high_index) = split(high)?;
        let sigma: f64 = cutoff
            .strip_prefix('c')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        let key = Self {
            low_slug,
            low_index,
            high_slug,
            high_index,
            cutoff: CutoffFrequency::new(sigma).map_err(|_| bad())?,
        };
        if key.to_string() != stem {
            return Err(bad());
        }
        Ok(key)
    }
}

/// Every ordered `(low, high)` pair with `low != high`, low-major in input
/// order.
pub fn enumerate_pairs<T: Clone>(categories: &[T]) -> Result<Vec<(T, T)>> {
    if categories.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 categories to pair, got {}",
            categories.len()
        )));
    }
    let n = categories.len();
    let mut pairs = Vec::with_capacity(n * (n - 1));
    for (i, low) in categories.iter().enumerate() {
        for (j, high) in categories.iter().enumerate() {
            if i != j {
                pairs.push((low.clone(), high.clone()));
            }
        }
    }
    Ok(pairs)
}

/// The full cross-category blend enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetPlan {
    pub categories: Vec<CategoryManifest>,
    pub cutoffs: Vec<CutoffFrequency>,
    pub canvas: Canvas,
    pub specs: Vec<HybridSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathCheck {
    /// Fail planning when a source image is missing.
    Strict,
    /// Leave missing sources for generation to report per spec.
    #[default]
    Deferred,
}

/// Enumerates specs by ordered pair, then low index, then high index, then
/// ascending cutoff.
pub fn plan_dataset(
    categories: Vec<CategoryManifest>,
    cutoffs: &[CutoffFrequency],
    canvas: Canvas,
    path_check: PathCheck,
) -> Result<DatasetPlan> {
    validate_categories(&categories)?;
    if canvas.width == 0 || canvas.height == 0 {
        return Err(Error::invalid("canvas dimensions must be positive"));
    }
    if cutoffs.is_empty() {
        return Err(Error::invalid("at least one cutoff is required"));
    }
    let mut cutoffs = cutoffs.to_vec();
    cutoffs.sort_by(|a, b| a.sigma().total_cmp(&b.sigma()));
    if cutoffs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("cutoffs must be distinct"));
    }
    if path_check == PathCheck::Strict {
        for cat in &categories {
            if let Some(missing) = cat.images.iter().find(|p| !p.is_file()) {
                return Err(Error::MissingInput(missing.clone()));
            }
        }
    }

    let indices: Vec<usize> = (0..categories.len()).collect();
    let pairs = enumerate_pairs(&indices)?;
    let mut specs = Vec::new();
    for (lo, hi) in pairs {
        let (low, high) = (&categories[lo], &categories[hi]);
        for low_index in 0..low.images.len() {
            for high_index in 0..high.images.len() {
                for &cutoff in &cutoffs {
                    specs.push(HybridSpec {
                        low_category: low.name.clone(),
                        low_index,
                        high_category: high.name.clone(),
                        high_index,
                        cutoff,
                    });
                }
            }
        }
    }
    Ok(DatasetPlan {
        categories,
        cutoffs,
        canvas,
        specs,
    })
}

impl DatasetPlan {
    /// Keeps the first `n` specs.
    pub fn truncate(&mut self, n: usize) {
        self.specs.truncate(n);
    }

    pub fn category(&self, name: &str) -> Option<&CategoryManifest> {
        self.categories.iter().find(|c| c.name == name)
    }

    pub fn category_position(&self, name: &str) -> Option<usize> {
        self.categories.iter().position(|c| c.name == name)
    }

    pub fn source_path(&self, category: &str, index: usize) -> Option<&Path> {
        self.category(category)
            .and_then(|c| c.images.get(index))
            .map(PathBuf::as_path)
    }

    /// File stem → position in `specs`.
    pub fn spec_index(&self) -> HashMap<String, usize> {
        self.specs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.file_stem(), i))
            .collect()
    }

    /// Ordered category pairs that occur in `specs`, in plan order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut seen = Vec::<(String, String)>::new();
        for s in &self.specs {
            let last = seen.last();
            if last.is_none_or(|(l, h)| *l != s.low_category || *h != s.high_category) {
                let pair = (s.low_category.clone(), s.high_category.clone());
                if !seen.contains(&pair) {
                    seen.push(pair);
                }
            }
        }
        seen
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed plan: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::from_json(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(Error::MissingInput(path.to_path_buf()))
            }
            Err(e) => Err(Error::io(path, e)),
        }
    }
}
