use std::collections::BTreeMap;
use std::path::Path;

use crate::dataset::DatasetPlan;
use crate::error::{Error, Result};

/// ImageNet-1k indices of the ten fruit categories.
pub const IMAGENET_FRUIT_IDS: [(&str, usize); 10] = [
    ("Granny Smith", 948),
    ("Strawberry", 949),
    ("Orange", 950),
    ("Lemon", 951),
    ("Fig", 952),
    ("Pineapple", 953),
    ("Banana", 954),
    ("Jackfruit", 955),
    ("Custard Apple", 956),
    ("Pomegranate", 957),
];

/// Category name → label indices that count as that category.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelMap {
    entries: BTreeMap<String, Vec<usize>>,
}

impl LabelMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, category: impl Into<String>, ids: Vec<usize>) {
        self.entries.insert(category.into(), ids);
    }

    pub fn get(&self, category: &str) -> Option<&[usize]> {
        self.entries.get(category).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Uses each category's manifest `class_ids`.
    pub fn from_class_ids(plan: &DatasetPlan) -> Self {
        let mut map = Self::new();
        for cat in &plan.categories {
            map.insert(cat.name.clone(), cat.class_ids.clone());
        }
        map
    }

    /// One label per category, numbered in manifest order. This is the
    /// label space of the prototype backend.
    pub fn by_position(plan: &DatasetPlan) -> Self {
        let mut map = Self::new();
        for (i, cat) in plan.categories.iter().enumerate() {
            map.insert(cat.name.clone(), vec![i]);
        }
        map
    }

    /// Every category needs at least one id, all below `label_space_size`.
    pub fn validate(&self, label_space_size: usize) -> Result<()> {
        for (name, ids) in &self.entries {
            if ids.is_empty() {
                return Err(Error::Config(format!("category {name:?} has no class ids")));
            }
            if let Some(bad) = ids.iter().find(|&&id| id >= label_space_size) {
                return Err(Error::Config(format!(
                    "category {name:?} maps to label {bad}, outside a {label_space_size}-label space"
                )));
            }
        }
        Ok(())
    }
}

/// Reads a label-name file: a JSON array whose index is the label id.
pub fn load_label_names(path: &Path) -> Result<Vec<String>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::MissingInput(path.to_path_buf()))
        }
        Err(e) => return Err(Error::io(path, e)),
    };
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("invalid label map {}: {e}", path.display())))
}
