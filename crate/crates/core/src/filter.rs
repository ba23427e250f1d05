//! Separable Gaussian low-pass, its high-pass complement, and hybrid
//! composition.
//!
//! Convolution runs horizontally then vertically, per channel, with
//! clamp-to-edge (replicate) boundary handling.

use crate::error::{Error, Result};
use crate::kernel::{CutoffFrequency, GaussianKernel};
use crate::raster::RasterImage;

pub fn low_pass(img: &RasterImage, cutoff: CutoffFrequency) -> RasterImage {
    let kernel = GaussianKernel::new(cutoff);
    low_pass_with(img, &kernel)
}

pub fn low_pass_with(img: &RasterImage, kernel: &GaussianKernel) -> RasterImage {
    if kernel.is_identity() {
        return img.clone();
    }
    let (w, h, channels) = img.dimensions();
    let mut out = vec![0.0; w * h * channels];
    let mut scratch = vec![0.0; w * h];
    let mut padded = vec![0.0; w + 2 * kernel.radius()];
    for c in 0..channels {
        let src = img.plane(c);
        let dst = &mut out[c * w * h..(c + 1) * w * h];
        horizontal_pass(src, &mut scratch, w, h, kernel, &mut padded);
        vertical_pass(&scratch, dst, w, h, kernel);
    }
    RasterImage::from_parts(w, h, channels, out)
}

fn horizontal_pass(
    src: &[f64],
    dst: &mut [f64],
    w: usize,
    h: usize,
    kernel: &GaussianKernel,
    padded: &mut [f64],
) {
    let r = kernel.radius();
    let taps = kernel.taps();
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        padded[..r].fill(row[0]);
        padded[r..r + w].copy_from_slice(row);
        padded[r + w..].fill(row[w - 1]);
        let out = &mut dst[y * w..(y + 1) * w];
        for (x, o) in out.iter_mut().enumerate() {
            *o = taps
                .iter()
                .zip(&padded[x..x + taps.len()])
                .map(|(t, v)| t * v)
                .sum();
        }
    }
}

// Accumulates whole rows so the inner loop walks contiguous memory.
fn vertical_pass(src: &[f64], dst: &mut [f64], w: usize, h: usize, kernel: &GaussianKernel) {
    let r = kernel.radius() as isize;
    let last = h as isize - 1;
    for y in 0..h {
        let out = &mut dst[y * w..(y + 1) * w];
        out.fill(0.0);
        for (k, &t) in kernel.taps().iter().enumerate() {
            let sy = (y as isize + k as isize - r).clamp(0, last) as usize;
            let row = &src[sy * w..(sy + 1) * w];
            for (o, v) in out.iter_mut().zip(row) {
                *o += t * v;
            }
        }
    }
}

/// `img − low_pass(img)`. The result is zero-mean detail and may be negative.
pub fn high_pass(img: &RasterImage, cutoff: CutoffFrequency) -> RasterImage {
    let blurred = low_pass(img, cutoff);
    subtract(img, &blurred)
}

fn subtract(a: &RasterImage, b: &RasterImage) -> RasterImage {
    let (w, h, c) = a.dimensions();
    let samples = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| x - y)
        .collect();
    RasterImage::from_parts(w, h, c, samples)
}

/// Low-pass of `low_src` plus high-pass of `high_src`, clamped to `[0, 1]`.
///
/// This is a sum of complementary frequency bands, not a pixel-wise
/// interpolation of the two sources.
pub fn compose_hybrid(
    low_src: &RasterImage,
    high_src: &RasterImage,
    cutoff: CutoffFrequency,
) -> Result<RasterImage> {
    check_same_dims(low_src, high_src)?;
    let kernel = GaussianKernel::new(cutoff);
    let low_blur = low_pass_with(low_src, &kernel);
    let high_blur = low_pass_with(high_src, &kernel);
    compose_from_parts(&low_blur, high_src, &high_blur)
}

/// Composes a hybrid from precomputed blurs:
/// `clamp(low_blur + (high_src − high_blur))`.
///
/// Batch generation reuses per-source blurs through this entry point;
/// results are bit-identical to [`compose_hybrid`].
pub fn compose_from_parts(
    low_blur: &RasterImage,
    high_src: &RasterImage,
    high_blur: &RasterImage,
) -> Result<RasterImage> {
    check_same_dims(low_blur, high_src)?;
    check_same_dims(high_src, high_blur)?;
    let (w, h, c) = low_blur.dimensions();
    let samples = low_blur
        .samples()
        .iter()
        .zip(high_src.samples().iter().zip(high_blur.samples()))
        .map(|(lb, (hs, hb))| (lb + (hs - hb)).clamp(0.0, 1.0))
        .collect();
    Ok(RasterImage::from_parts(w, h, c, samples))
}

fn check_same_dims(a: &RasterImage, b: &RasterImage) -> Result<()> {
    if a.dimensions() != b.dimensions() {
        return Err(Error::invalid(format!(
            "image dimensions differ: {:?} vs {:?}",
            a.dimensions(),
            b.dimensions()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(s: f64) -> CutoffFrequency {
        CutoffFrequency::new(s).unwrap()
    }

    fn ramp(w: usize, h: usize) -> RasterImage {
        RasterImage::from_fn(w, h, 3, |c, x, y| {
            ((x * 37 + y * 11 + c * 5) % 17) as f64 / 16.0
        })
        .unwrap()
    }

    #[test]
    fn constant_image_is_fixed_point() {
        let img = RasterImage::filled(20, 13, 3, 0.375).unwrap();
        let out = low_pass(&img, sigma(4.0));
        assert!(out.samples().iter().all(|&v| (v - 0.375).abs() < 1e-15));
        let hp = high_pass(&img, sigma(4.0));
        assert!(hp.samples().iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn sigma_zero_is_identity() {
        let img = ramp(9, 7);
        assert_eq!(low_pass(&img, CutoffFrequency::IDENTITY), img);
        assert!(high_pass(&img, CutoffFrequency::IDENTITY)
            .samples()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn decomposition_is_exact() {
        let img = ramp(31, 17);
        for s in [0.5, 1.0, 4.0, 19.0] {
            let lp = low_pass(&img, sigma(s));
            let hp = high_pass(&img, sigma(s));
            let max = lp
                .samples()
                .iter()
                .zip(hp.samples())
                .zip(img.samples())
                .map(|((l, h), o)| (l + h - o).abs())
                .fold(0.0, f64::max);
            assert!(max <= 1e-6, "sigma {s}: {max}");
        }
    }

    #[test]
    fn impulse_response_is_outer_product() {
        let mut samples = vec![0.0; 15 * 15];
        samples[7 * 15 + 7] = 1.0;
        let img = RasterImage::new(15, 15, 1, samples).unwrap();
        let k = GaussianKernel::new(sigma(1.0));
        let out = low_pass(&img, sigma(1.0));
        for y in 0..15 {
            for x in 0..15 {
                let (dx, dy) = (x as isize - 7, y as isize - 7);
                let expected = if dx.abs() <= 3 && dy.abs() <= 3 {
                    k.taps()[(dx + 3) as usize] * k.taps()[(dy + 3) as usize]
                } else {
                    0.0
                };
                assert!((out.get(0, x, y) - expected).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn kernel_wider_than_image() {
        let img = ramp(3, 2);
        let out = low_pass(&img, sigma(19.0));
        assert_eq!(out.dimensions(), (3, 2, 3));
        assert!(out.samples().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn hybrid_of_same_image_reconstructs() {
        let img = ramp(24, 24);
        for s in [1.0, 4.0, 19.0] {
            let out = compose_hybrid(&img, &img, sigma(s)).unwrap();
            assert!(out.max_abs_diff(&img) <= 1e-5);
        }
    }

    #[test]
    fn hybrid_at_sigma_zero_is_low_source() {
        let a = ramp(16, 12);
        let b = RasterImage::from_fn(16, 12, 3, |_, x, y| ((x + y) % 2) as f64).unwrap();
        assert_eq!(compose_hybrid(&a, &b, CutoffFrequency::IDENTITY).unwrap(), a);
    }

    #[test]
    fn hybrid_rejects_dimension_mismatch() {
        let a = ramp(16, 12);
        let b = ramp(12, 16);
        assert!(matches!(
            compose_hybrid(&a, &b, sigma(1.0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn hybrid_is_not_interpolation() {
        let a = RasterImage::filled(32, 32, 3, 0.2).unwrap();
        let b = RasterImage::filled(32, 32, 3, 0.8).unwrap();
        // flat high source has no detail to contribute
        let out = compose_hybrid(&a, &b, sigma(4.0)).unwrap();
        assert!(out.samples().iter().all(|&v| (v - 0.2).abs() < 1e-12));
    }
}
