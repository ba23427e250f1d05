use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One object category and its ordered source images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryManifest {
    pub name: String,
    #[serde(default)]
    pub class_ids: Vec<usize>,
    pub images: Vec<PathBuf>,
}

impl CategoryManifest {
    pub fn new(name: impl Into<String>, class_ids: Vec<usize>, images: Vec<PathBuf>) -> Self {
        Self {
            name: name.into(),
            class_ids,
            images,
        }
    }

    /// Filename-safe form of the name: lowercased, spaces become `-`.
    pub fn slug(&self) -> String {
        slugify(&self.name)
    }
}

pub fn slugify(name: &str) -> String {
    name.to_lowercase().replace(' ', "-")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canvas {
    pub width: usize,
    pub height: usize,
}

impl Canvas {
    pub fn square(side: usize) -> Self {
        Self {
            width: side,
            height: side,
        }
    }
}

impl Default for Canvas {
    fn default() -> Self {
        Self::square(224)
    }
}

/// On-disk manifest document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub categories: Vec<CategoryManifest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canvas: Option<Canvas>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed manifest: {e}")))
    }

    /// Reads a manifest and resolves relative image paths against the
    /// manifest's own directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::MissingInput(path.to_path_buf()))
            }
            Err(e) => return Err(Error::io(path, e)),
        };
        let mut manifest = Self::from_json(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for cat in &mut manifest.categories {
            for img in &mut cat.images {
                if img.is_relative() {
                    *img = base.join(&*img);
                }
            }
        }
        Ok(manifest)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Checks names, slugs and image lists. Slugs must be unique and must not
/// contain `__` or start/end with `_`, which keeps output filenames
/// parseable.
pub fn validate_categories(categories: &[CategoryManifest]) -> Result<()> {
    let mut names = HashSet::new();
    let mut slugs = HashSet::new();
    for cat in categories {
        if cat.name.trim().is_empty() {
            return Err(Error::invalid("category name must be non-empty"));
        }
        if !names.insert(cat.name.as_str()) {
            return Err(Error::invalid(format!("duplicate category name {:?}", cat.name)));
        }
        let slug = cat.slug();
        if slug.contains("__") || slug.starts_with('_') || slug.ends_with('_') || slug.contains('/') {
            return Err(Error::invalid(format!(
                "category name {:?} cannot be encoded in a filename",
                cat.name
            )));
        }
        if !slugs.insert(slug) {
            return Err(Error::invalid(format!(
                "category name {:?} collides with another after lowercasing",
                cat.name
            )));
        }
        if cat.images.is_empty() {
            return Err(Error::invalid(format!("category {:?} has no images", cat.name)));
        }
    }
    Ok(())
}
