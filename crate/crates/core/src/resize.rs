use crate::error::{Error, Result};
use crate::raster::RasterImage;

#[derive(Debug, Clone, Copy)]
struct Tap {
    lo: usize,
    hi: usize,
    frac: f64,
}

// Half-pixel centers: src = (dst + 0.5) * in / out - 0.5, clamped to the edge.
fn axis_taps(input: usize, output: usize) -> Vec<Tap> {
    let scale = input as f64 / output as f64;
    let max = (input - 1) as f64;
    (0..output)
        .map(|d| {
            let s = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, max);
            let lo = s.floor() as usize;
            let hi = (lo + 1).min(input - 1);
            Tap {
                lo,
                hi,
                frac: s - lo as f64,
            }
        })
        .collect()
}

/// Bilinear resampling with half-pixel-center coordinates and edge clamping.
pub fn resize_bilinear(img: &RasterImage, out_w: usize, out_h: usize) -> Result<RasterImage> {
    if out_w == 0 || out_h == 0 {
        return Err(Error::invalid(format!(
            "resize target must be at least 1x1, got {out_w}x{out_h}"
        )));
    }
    let (w, h, channels) = img.dimensions();
    if (w, h) == (out_w, out_h) {
        return Ok(img.clone());
    }
    let xs = axis_taps(w, out_w);
    let ys = axis_taps(h, out_h);
    let mut out = Vec::with_capacity(out_w * out_h * channels);
    for c in 0..channels {
        let plane = img.plane(c);
        for ty in &ys {
            let r0 = &plane[ty.lo * w..(ty.lo + 1) * w];
            let r1 = &plane[ty.hi * w..(ty.hi + 1) * w];
            for tx in &xs {
                let top = r0[tx.lo] + (r0[tx.hi] - r0[tx.lo]) * tx.frac;
                let bottom = r1[tx.lo] + (r1[tx.hi] - r1[tx.lo]) * tx.frac;
                out.push(top + (bottom - top) * ty.frac);
            }
        }
    }
    Ok(RasterImage::from_parts(out_w, out_h, channels, out))
}
