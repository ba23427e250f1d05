//! Classifier backends, input preprocessing and top-k prediction capture.

mod backend;
mod evaluate;
mod labels;
mod mock;
mod preprocess;
mod topk;

pub use backend::{ClassifierBackend, InputSpec, InputTensor, Layout, ResizeMode, Sidecar};
pub use evaluate::{
    evaluate_dataset, load_predictions, read_predictions, save_predictions, write_predictions,
    Evaluation, EvaluationReport, PredictionRecord,
};
pub use labels::{load_label_names, LabelMap, IMAGENET_FRUIT_IDS};
pub use mock::{prototype_mock_backend, PrototypeBackend, MOCK_IDENTITY, PROTOTYPE_SIDE};
pub use preprocess::{crop_geometry, preprocess, CropGeometry};
pub use topk::top_k;

/// Number of ranks captured per prediction record.
pub const CAPTURE_K: usize = 5;
