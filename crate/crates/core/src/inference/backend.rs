use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    #[serde(rename = "CHW")]
    Chw,
    #[serde(rename = "HWC")]
    Hwc,
}

/// How an image is brought to the model's input size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResizeMode {
    /// Resize the shorter side, then take the central crop.
    #[default]
    CenterCrop,
    /// Resize straight to the input size.
    Direct,
}

/// Model input contract, read from the backend's sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub width: usize,
    pub height: usize,
    pub layout: Layout,
    pub mean: [f64; 3],
    pub std: [f64; 3],
    #[serde(default)]
    pub resize: ResizeMode,
    /// Shorter-side target for [`ResizeMode::CenterCrop`]; defaults to
    /// `256 / 224` of the crop's shorter side.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resize_shorter: Option<usize>,
}

impl InputSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Config("input size must be positive".into()));
        }
        if self.std.iter().any(|s| *s == 0.0 || !s.is_finite()) || self.mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::Config(format!(
                "normalization constants must be finite with non-zero std, got mean {:?} std {:?}",
                self.mean, self.std
            )));
        }
        Ok(())
    }

    pub fn shorter_side_target(&self) -> usize {
        self.resize_shorter.unwrap_or_else(|| {
            let crop = self.width.min(self.height);
            (crop as f64 * 256.0 / 224.0).round() as usize
        })
    }
}

/// Sidecar JSON accompanying an exported model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub input: InputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
}

impl Sidecar {
    pub fn from_json(text: &str) -> Result<Self> {
        let sidecar: Sidecar = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid sidecar metadata: {e}")))?;
        sidecar.input.validate()?;
        Ok(sidecar)
    }

    /// Loads a sidecar; a relative `labels` path is resolved against the
    /// sidecar's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::MissingInput(path.to_path_buf()))
            }
            Err(e) => return Err(Error::io(path, e)),
        };
        let mut sidecar = Self::from_json(&text)?;
        if let Some(labels) = &mut sidecar.labels {
            if labels.is_relative() {
                *labels = path.parent().unwrap_or_else(|| Path::new(".")).join(&*labels);
            }
        }
        Ok(sidecar)
    }
}

/// A preprocessed model input for a single image (no batch dimension).
#[derive(Debug, Clone, PartialEq)]
pub struct InputTensor {
    pub layout: Layout,
    pub width: usize,
    pub height: usize,
    pub data: Vec<f32>,
}

impl InputTensor {
    /// Value at channel `c`, column `x`, row `y` regardless of layout.
    pub fn at(&self, c: usize, x: usize, y: usize) -> f32 {
        match self.layout {
            Layout::Chw => self.data[(c * self.height + y) * self.width + x],
            Layout::Hwc => self.data[(y * self.width + x) * 3 + c],
        }
    }

    /// Shape in storage order, with a leading batch dimension of 1.
    pub fn shape(&self) -> [usize; 4] {
        match self.layout {
            Layout::Chw => [1, 3, self.height, self.width],
            Layout::Hwc => [1, self.height, self.width, 3],
        }
    }
}

/// A classifier that maps one preprocessed image to a score per label.
///
/// Scores may be logits or probabilities; only their order matters.
pub trait ClassifierBackend: Send + Sync {
    fn identity(&self) -> &str;

    fn label_space_size(&self) -> usize;

    fn input_spec(&self) -> &InputSpec;

    /// Whether `classify` may run on several threads at once. When false
    /// the harness serializes calls.
    fn supports_concurrent_calls(&self) -> bool {
        true
    }

    fn classify(&self, input: &InputTensor) -> Result<Vec<f32>>;
}
