use super::backend::{InputSpec, InputTensor, Layout, ResizeMode};
use crate::error::{Error, Result};
use crate::raster::RasterImage;
use crate::resize::resize_bilinear;

/// Geometry of the shorter-side resize followed by a central crop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CropGeometry {
    pub resized_width: usize,
    pub resized_height: usize,
    pub left: usize,
    pub top: usize,
}

/// The shorter side becomes `shorter`, the longer side is scaled and
/// truncated; crop offsets round half to even.
pub fn crop_geometry(width: usize, height: usize, shorter: usize, crop_w: usize, crop_h: usize) -> Result<CropGeometry> {
    let (rw, rh) = if width <= height {
        (shorter, (shorter as f64 * height as f64 / width as f64) as usize)
    } else {
        ((shorter as f64 * width as f64 / height as f64) as usize, shorter)
    };
    if rw < crop_w || rh < crop_h {
        return Err(Error::Config(format!(
            "resized image {rw}x{rh} is smaller than the {crop_w}x{crop_h} crop"
        )));
    }
    Ok(CropGeometry {
        resized_width: rw,
        resized_height: rh,
        left: ((rw - crop_w) as f64 / 2.0).round_ties_even() as usize,
        top: ((rh - crop_h) as f64 / 2.0).round_ties_even() as usize,
    })
}

/// Brings a decoded RGB image to the backend's input contract.
pub fn preprocess(img: &RasterImage, spec: &InputSpec) -> Result<InputTensor> {
    spec.validate()?;
    if img.channels() != 3 {
        return Err(Error::invalid(format!("expected RGB input, got {} channels", img.channels())));
    }
    let (w, h) = (spec.width, spec.height);
    let (resized, left, top) = match spec.resize {
        ResizeMode::Direct => (resize_bilinear(img, w, h)?, 0, 0),
        ResizeMode::CenterCrop => {
            let g = crop_geometry(img.width(), img.height(), spec.shorter_side_target(), w, h)?;
            (resize_bilinear(img, g.resized_width, g.resized_height)?, g.left, g.top)
        }
    };
    let norm = |c: usize, x: usize, y: usize| {
        ((resized.get(c, left + x, top + y) - spec.mean[c]) / spec.std[c]) as f32
    };
    let mut data = Vec::with_capacity(w * h * 3);
    match spec.layout {
        Layout::Chw => {
            for c in 0..3 {
                for y in 0..h {
                    for x in 0..w {
                        data.push(norm(c, x, y));
                    }
                }
            }
        }
        Layout::Hwc => {
            for y in 0..h {
                for x in 0..w {
                    for c in 0..3 {
                        data.push(norm(c, x, y));
                    }
                }
            }
        }
    }
    Ok(InputTensor {
        layout: spec.layout,
        width: w,
        height: h,
        data,
    })
}
