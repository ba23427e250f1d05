//! Procedural demo categories: smooth gradients (all low frequency) and
//! coarse checkerboards (strong edges), three images each.

use std::path::{Path, PathBuf};

use crate::dataset::{Canvas, CategoryManifest, Manifest};
use crate::error::{Error, Result};
use crate::raster::RasterImage;

pub const GRADIENT: &str = "Gradient";
pub const CHECKERBOARD: &str = "Checkerboard";

/// Side of one checkerboard square, in pixels.
pub const CHECKER_SQUARE: usize = 16;

fn lerp(a: [f64; 3], b: [f64; 3], t: f64, c: usize) -> f64 {
    a[c] + (b[c] - a[c]) * t
}

/// Linear color ramp; `variant` picks the direction and endpoint colors.
pub fn gradient(side: usize, variant: usize) -> RasterImage {
    const ENDS: [([f64; 3], [f64; 3]); 3] = [
        ([0.05, 0.10, 0.30], [0.95, 0.85, 0.40]),
        ([0.20, 0.60, 0.10], [0.90, 0.30, 0.70]),
        ([0.80, 0.20, 0.20], [0.15, 0.55, 0.90]),
    ];
    let (a, b) = ENDS[variant % ENDS.len()];
    let span = (side.max(2) - 1) as f64;
    RasterImage::from_fn(side, side, 3, |c, x, y| {
        let t = match variant % 3 {
            0 => x as f64 / span,
            1 => y as f64 / span,
            _ => (x + y) as f64 / (2.0 * span),
        };
        lerp(a, b, t, c)
    })
    .expect("valid dimensions")
}

/// Two-color checkerboard of [`CHECKER_SQUARE`]-pixel squares.
pub fn checkerboard(side: usize, variant: usize) -> RasterImage {
    const COLORS: [([f64; 3], [f64; 3]); 3] = [
        ([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]),
        ([0.10, 0.05, 0.20], [0.95, 0.90, 0.85]),
        ([0.20, 0.15, 0.05], [0.85, 1.0, 0.95]),
    ];
    let (dark, light) = COLORS[variant % COLORS.len()];
    RasterImage::from_fn(side, side, 3, |c, x, y| {
        if (x / CHECKER_SQUARE + y / CHECKER_SQUARE).is_multiple_of(2) {
            dark[c]
        } else {
            light[c]
        }
    })
    .expect("valid dimensions")
}

/// Writes the demo images and a `manifest.json` into `dir` and returns the
/// manifest path. Class ids are the category positions.
pub fn write_demo_manifest(dir: &Path, side: usize, per_category: usize) -> Result<PathBuf> {
    if side == 0 || per_category == 0 {
        return Err(Error::invalid("demo needs a positive image side and count"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut categories = Vec::new();
    for (label, (name, make)) in [
        (GRADIENT, gradient as fn(usize, usize) -> RasterImage),
        (CHECKERBOARD, checkerboard),
    ]
    .into_iter()
    .enumerate()
    {
        let mut images = Vec::new();
        for i in 0..per_category {
            let file = format!("{}_{i}.png", name.to_lowercase());
            make(side, i).save_png(&dir.join(&file))?;
            images.push(PathBuf::from(file));
        }
        categories.push(CategoryManifest::new(name, vec![label], images));
    }
    let manifest = Manifest {
        categories,
        cutoffs: None,
        canvas: Some(Canvas::square(side)),
    };
    let path = dir.join("manifest.json");
    std::fs::write(&path, manifest.to_json()?).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
