//! Planar floating-point raster images and the 8-bit codec boundary.

use std::io::Cursor;
use std::path::Path;

use image::{ImageFormat, RgbImage};

use crate::error::{Error, Result};

/// Planar real-valued image. Samples are stored channel-major
/// (`[channel][row][column]`), nominally in `[0, 1]`.
///
/// Filter intermediates (high-pass residues in particular) may leave the
/// nominal range; only decoded inputs and encoded outputs are clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<f64>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || channels == 0 {
            return Err(Error::invalid(format!(
                "image dimensions must be positive, got {width}x{height}x{channels}"
            )));
        }
        let expected = width * height * channels;
        if samples.len() != expected {
            return Err(Error::invalid(format!(
                "expected {expected} samples for {width}x{height}x{channels}, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("sample {i} is not finite")));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    /// Image with every sample set to `value`.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    /// Builds an image by evaluating `f(channel, x, y)` at every sample.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height * channels);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    samples.push(f(c, x, y));
                }
            }
        }
        Self::new(width, height, channels, samples)
    }

    // Skips validation; callers guarantee shape and finiteness.
    pub(crate) fn from_parts(width: usize, height: usize, channels: usize, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), width * height * channels);
        Self {
            width,
            height,
            channels,
            samples,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn dimensions(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    pub fn plane(&self, channel: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.samples[channel * n..(channel + 1) * n]
    }

    pub fn get(&self, channel: usize, x: usize, y: usize) -> f64 {
        self.samples[(channel * self.height + y) * self.width + x]
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Population variance of one channel.
    pub fn channel_variance(&self, channel: usize) -> f64 {
        let plane = self.plane(channel);
        let n = plane.len() as f64;
        let mean = plane.iter().sum::<f64>() / n;
        plane.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
    }

    pub fn max_abs_diff(&self, other: &RasterImage) -> f64 {
        assert_eq!(self.dimensions(), other.dimensions(), "dimension mismatch");
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn clamped(mut self) -> Self {
        for v in &mut self.samples {
            *v = v.clamp(0.0, 1.0);
        }
        self
    }

    pub fn from_rgb8(img: &RgbImage) -> Self {
        let (w, h) = (img.width() as usize, img.height() as usize);
        let mut samples = vec![0.0; w * h * 3];
        let plane = w * h;
        for (i, px) in img.pixels().enumerate() {
            for c in 0..3 {
                samples[c * plane + i] = f64::from(px[c]) / 255.0;
            }
        }
        Self::from_parts(w, h, 3, samples)
    }

    /// Quantizes to 8-bit RGB. Samples are clamped to `[0, 1]` and rounded
    /// half away from zero. Single-channel images are replicated to gray.
    pub fn to_rgb8(&self) -> Result<RgbImage> {
        if self.channels != 3 && self.channels != 1 {
            return Err(Error::invalid(format!(
                "cannot encode {}-channel image as RGB",
                self.channels
            )));
        }
        let plane = self.width * self.height;
        let mut buf = Vec::with_capacity(plane * 3);
        for i in 0..plane {
            for c in 0..3 {
                let src = if self.channels == 1 { 0 } else { c };
                buf.push(quantize(self.samples[src * plane + i]));
            }
        }
        Ok(RgbImage::from_raw(self.width as u32, self.height as u32, buf)
            .expect("buffer length matches dimensions"))
    }

    /// Decodes any supported image file to RGB, dropping alpha.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let decoded = image::load_from_memory(&bytes).map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Ok(Self::from_rgb8(&decoded.to_rgb8()))
    }

    /// Encodes as an 8-bit RGB PNG.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let rgb = self.to_rgb8()?;
        let mut out = Cursor::new(Vec::new());
        rgb.write_to(&mut out, ImageFormat::Png)
            .map_err(|e| Error::Data(format!("png encoding failed: {e}")))?;
        Ok(out.into_inner())
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let bytes = self.encode_png()?;
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}

/// `[0, 1]` → `0..=255`, clamping first and rounding half away from zero.
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}
