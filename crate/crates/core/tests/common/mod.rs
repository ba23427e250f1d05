#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hybridbench_core::RasterImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Dense 2-D convolution with clamp-to-edge padding. The 2-D kernel is
/// evaluated directly as `exp(−(dx² + dy²) / 2σ²)` over the
/// `ceil(3σ)` square and normalized by its own sum, sharing no code with
/// the separable implementation.
pub fn dense_gaussian(img: &RasterImage, sigma: f64) -> RasterImage {
    if sigma == 0.0 {
        return img.clone();
    }
    let r = (3.0 * sigma).ceil() as isize;
    let mut kernel = Vec::new();
    let mut total = 0.0;
    for dy in -r..=r {
        for dx in -r..=r {
            let w = (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
            kernel.push((dx, dy, w));
            total += w;
        }
    }
    let (w, h, ch) = img.dimensions();
    RasterImage::from_fn(w, h, ch, |c, x, y| {
        kernel
            .iter()
            .map(|&(dx, dy, k)| {
                let sx = (x as isize + dx).clamp(0, w as isize - 1) as usize;
                let sy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
                k * img.get(c, sx, sy)
            })
            .sum::<f64>()
            / total
    })
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_image(rng: &mut impl Rng, w: usize, h: usize) -> RasterImage {
    RasterImage::from_fn(w, h, 3, |_, _, _| rng.gen::<f64>()).unwrap()
}

/// Roughly 1/f image: random-phase sinusoids with amplitude falling as
/// 1/frequency around mid-gray, plus mild pixel noise, clamped to [0, 1].
pub fn natural_image(rng: &mut impl Rng, w: usize, h: usize) -> RasterImage {
    let waves: Vec<[f64; 5]> = (0..24)
        .map(|_| {
            let f: f64 = rng.gen_range(1.0..40.0);
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let chan: f64 = rng.gen_range(0.0..3.0);
            [f, theta, phase, 0.25 / f.sqrt(), chan]
        })
        .collect();
    let noise: Vec<f64> = (0..w * h * 3).map(|_| rng.gen_range(-0.03..0.03)).collect();
    RasterImage::from_fn(w, h, 3, |c, x, y| {
        let (u, v) = (x as f64 / w as f64, y as f64 / h as f64);
        let mut s = 0.5;
        for &[f, theta, phase, amp, chan] in &waves {
            let gain = if chan as usize == c { 1.0 } else { 0.5 };
            s += gain * amp * (std::f64::consts::TAU * f * (u * theta.cos() + v * theta.sin()) + phase).sin();
        }
        (s + noise[(c * h + y) * w + x]).clamp(0.0, 1.0)
    })
    .unwrap()
}

pub fn sha256_file(path: &Path) -> String {
    let bytes = std::fs::read(path).unwrap();
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// File name → SHA-256 of every `.png` in `dir`.
pub fn hash_pngs(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path: PathBuf = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "png") {
            out.insert(path.file_name().unwrap().to_string_lossy().into_owned(), sha256_file(&path));
        }
    }
    out
}
