//! Hybrid image synthesis and classifier frequency-response analysis.
//!
//! A hybrid image adds the Gaussian low-pass of one image to the high-pass
//! residual of another. Sweeping the filter scale and asking a classifier
//! which source it sees traces two hit curves, one per source, that cross
//! somewhere along the sweep.
//!
//! The crate is organized as a pipeline:
//!
//! * [`filter`], [`kernel`], [`resize`], [`raster`]: image math.
//! * [`dataset`]: plan every ordered category pair × image pair × cutoff
//!   and write the hybrids as PNGs in parallel.
//! * [`inference`]: run a [`ClassifierBackend`](inference::ClassifierBackend)
//!   over the hybrids and capture top-k predictions.
//! * [`analysis`]: fold predictions into per-pair and pooled hit curves,
//!   locate crossovers, and emit CSV/SVG reports.
//! * [`synthetic`]: procedurally generated demo categories.

pub mod analysis;
pub mod dataset;
mod error;
pub mod filter;
pub mod inference;
pub mod kernel;
pub mod raster;
pub mod resize;
pub mod synthetic;

pub use error::{Error, Result};
pub use filter::{compose_hybrid, high_pass, low_pass};
pub use kernel::{build_gaussian_kernel, CutoffFrequency, GaussianKernel, DEFAULT_CUTOFFS};
pub use raster::RasterImage;
pub use resize::resize_bilinear;
