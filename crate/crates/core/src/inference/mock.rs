//! Nearest-prototype classifier used when no model runtime is available.

use super::backend::{ClassifierBackend, InputSpec, InputTensor, Layout, ResizeMode};
use crate::dataset::{load_source, Canvas, DatasetPlan};
use crate::error::{Error, Result};
use crate::raster::RasterImage;
use crate::resize::resize_bilinear;

/// Side length of the downsampled comparison space.
pub const PROTOTYPE_SIDE: usize = 32;

pub const MOCK_IDENTITY: &str = "mock-prototype";

/// Scores an input by `softmax(−MSE)` against per-category mean images at
/// 32×32. One label per category, in manifest order.
#[derive(Debug, Clone)]
pub struct PrototypeBackend {
    names: Vec<String>,
    prototypes: Vec<Vec<f64>>,
    input: InputSpec,
}

impl PrototypeBackend {
    /// `images[i]` are the (already decoded) examples of category `names[i]`.
    pub fn from_images(names: Vec<String>, images: &[Vec<RasterImage>], canvas: Canvas) -> Result<Self> {
        if names.is_empty() || names.len() != images.len() {
            return Err(Error::invalid("prototype backend needs one image list per category"));
        }
        let mut prototypes = Vec::with_capacity(names.len());
        for (name, imgs) in names.iter().zip(images) {
            if imgs.is_empty() {
                return Err(Error::invalid(format!("category {name:?} has no images")));
            }
            let mut acc = vec![0.0; PROTOTYPE_SIDE * PROTOTYPE_SIDE * 3];
            for img in imgs {
                let on_canvas = resize_bilinear(img, canvas.width, canvas.height)?;
                for (a, v) in acc.iter_mut().zip(downsample_area(&on_canvas).samples()) {
                    *a += v;
                }
            }
            let n = imgs.len() as f64;
            prototypes.push(acc.into_iter().map(|v| v / n).collect());
        }
        Ok(Self {
            names,
            prototypes,
            input: InputSpec {
                width: canvas.width,
                height: canvas.height,
                layout: Layout::Chw,
                mean: [0.0; 3],
                std: [1.0; 3],
                resize: ResizeMode::Direct,
                resize_shorter: None,
            },
        })
    }

    pub fn category_names(&self) -> &[String] {
        &self.names
    }

    pub fn prototype(&self, label: usize) -> &[f64] {
        &self.prototypes[label]
    }

    /// Mean squared distance from the input to each prototype.
    pub fn distances(&self, input: &InputTensor) -> Result<Vec<f64>> {
        let img = tensor_to_image(input, &self.input)?;
        let small = downsample_area(&img);
        Ok(self
            .prototypes
            .iter()
            .map(|p| {
                let n = p.len() as f64;
                p.iter()
                    .zip(small.samples())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    / n
            })
            .collect())
    }
}

/// Builds the prototype backend from the plan's source images.
pub fn prototype_mock_backend(plan: &DatasetPlan) -> Result<PrototypeBackend> {
    if plan.categories.is_empty() {
        return Err(Error::invalid("manifest has no categories"));
    }
    let mut images = Vec::with_capacity(plan.categories.len());
    for cat in &plan.categories {
        let imgs = (0..cat.images.len())
            .map(|i| load_source(plan, &cat.name, i))
            .collect::<Result<Vec<_>>>()?;
        images.push(imgs);
    }
    let names = plan.categories.iter().map(|c| c.name.clone()).collect();
    PrototypeBackend::from_images(names, &images, plan.canvas)
}

impl ClassifierBackend for PrototypeBackend {
    fn identity(&self) -> &str {
        MOCK_IDENTITY
    }

    fn label_space_size(&self) -> usize {
        self.names.len()
    }

    fn input_spec(&self) -> &InputSpec {
        &self.input
    }

    fn classify(&self, input: &InputTensor) -> Result<Vec<f32>> {
        let d = self.distances(input)?;
        Ok(softmax_neg(&d).into_iter().map(|p| p as f32).collect())
    }
}

fn softmax_neg(d: &[f64]) -> Vec<f64> {
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let e: Vec<f64> = d.iter().map(|v| (min - v).exp()).collect();
    let sum: f64 = e.iter().sum();
    e.into_iter().map(|v| v / sum).collect()
}

fn tensor_to_image(t: &InputTensor, spec: &InputSpec) -> Result<RasterImage> {
    if (t.width, t.height) != (spec.width, spec.height) {
        return Err(Error::Backend(format!(
            "expected {}x{} input, got {}x{}",
            spec.width, spec.height, t.width, t.height
        )));
    }
    RasterImage::from_fn(t.width, t.height, 3, |c, x, y| {
        f64::from(t.at(c, x, y)) * spec.std[c] + spec.mean[c]
    })
}

// Per-axis coverage weights of each source pixel over each output cell.
fn area_weights(input: usize, output: usize) -> Vec<Vec<(usize, f64)>> {
    let scale = input as f64 / output as f64;
    (0..output)
        .map(|o| {
            let (start, end) = (o as f64 * scale, (o + 1) as f64 * scale);
            let first = start.floor() as usize;
            let last = (end.ceil() as usize).min(input);
            (first..last)
                .filter_map(|i| {
                    let cover = (end.min(i as f64 + 1.0) - start.max(i as f64)) / scale;
                    (cover > 0.0).then_some((i, cover))
                })
                .collect()
        })
        .collect()
}

/// Area-averaging resize to 32×32.
fn downsample_area(img: &RasterImage) -> RasterImage {
    let (w, h, channels) = img.dimensions();
    let xs = area_weights(w, PROTOTYPE_SIDE);
    let ys = area_weights(h, PROTOTYPE_SIDE);
    let mut out = Vec::with_capacity(PROTOTYPE_SIDE * PROTOTYPE_SIDE * channels);
    for c in 0..channels {
        let plane = img.plane(c);
        for wy in &ys {
            for wx in &xs {
                let mut acc = 0.0;
                for &(y, fy) in wy {
                    for &(x, fx) in wx {
                        acc += plane[y * w + x] * fx * fy;
                    }
                }
                out.push(acc);
            }
        }
    }
    RasterImage::from_parts(PROTOTYPE_SIDE, PROTOTYPE_SIDE, channels, out)
}
