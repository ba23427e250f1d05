//! Cross-category blend planning and batch hybrid generation.

mod generate;
mod manifest;
mod plan;

pub use generate::{generate_dataset, load_source, Failure, GenerationReport};
pub(crate) use generate::build_pool;
pub use manifest::{slugify, validate_categories, Canvas, CategoryManifest, Manifest};
pub use plan::{enumerate_pairs, plan_dataset, DatasetPlan, HybridSpec, PathCheck, SpecKey};
