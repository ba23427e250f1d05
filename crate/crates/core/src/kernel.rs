//! Cutoff parameterization and truncated Gaussian kernels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The sweep parameter of a hybrid: the standard deviation, in pixels, of
/// the spatial Gaussian low-pass filter. Zero is the identity filter.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct CutoffFrequency(f64);

/// Default sweep: σ ∈ {1, 4, 7, 10, 13, 16, 19}.
pub const DEFAULT_CUTOFFS: [f64; 7] = [1.0, 4.0, 7.0, 10.0, 13.0, 16.0, 19.0];

impl CutoffFrequency {
    pub const IDENTITY: CutoffFrequency = CutoffFrequency(0.0);

    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::invalid(format!(
                "cutoff must be finite and non-negative, got {sigma}"
            )));
        }
        Ok(Self(sigma))
    }

    pub fn sigma(self) -> f64 {
        self.0
    }

    pub fn default_sweep() -> Vec<CutoffFrequency> {
        DEFAULT_CUTOFFS.iter().map(|&s| CutoffFrequency(s)).collect()
    }
}

impl TryFrom<f64> for CutoffFrequency {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<CutoffFrequency> for f64 {
    fn from(c: CutoffFrequency) -> f64 {
        c.0
    }
}

/// Prints without trailing zeros: `13`, `2.5`.
impl fmt::Display for CutoffFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Normalized, symmetric 1-D Gaussian taps with radius `ceil(3σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    sigma: f64,
    radius: usize,
    taps: Vec<f64>,
}

impl GaussianKernel {
    pub fn new(cutoff: CutoffFrequency) -> Self {
        let sigma = cutoff.sigma();
        if sigma == 0.0 {
            return Self {
                sigma,
                radius: 0,
                taps: vec![1.0],
            };
        }
        let radius = (3.0 * sigma).ceil() as usize;
        let denom = 2.0 * sigma * sigma;
        let half: Vec<f64> = (0..=radius)
            .map(|i| {
                let d = i as f64;
                (-d * d / denom).exp()
            })
            .collect();
        let sum = half[0] + 2.0 * half[1..].iter().sum::<f64>();
        // Mirror from the half so symmetry is exact.
        let taps = (0..2 * radius + 1)
            .map(|k| half[k.abs_diff(radius)] / sum)
            .collect();
        Self {
            sigma,
            radius,
            taps,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn is_identity(&self) -> bool {
        self.radius == 0
    }
}

pub fn build_gaussian_kernel(cutoff: CutoffFrequency) -> GaussianKernel {
    GaussianKernel::new(cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sigma_zero_is_identity() {
        let k = GaussianKernel::new(CutoffFrequency::IDENTITY);
        assert_eq!(k.radius(), 0);
        assert_eq!(k.taps(), &[1.0]);
    }

    #[test]
    fn sigma_one_has_seven_taps() {
        let k = GaussianKernel::new(CutoffFrequency::new(1.0).unwrap());
        assert_eq!(k.radius(), 3);
        assert_eq!(k.taps().len(), 7);
        assert!((k.taps().iter().sum::<f64>() - 1.0).abs() < 1e-6);
        // exp(-i^2/2) / sum, evaluated offline
        let expected = [
            0.3990502796524549,
            0.2420362293761143,
            0.054005582622414484,
            0.004433048175243745,
        ];
        for (i, e) in expected.iter().enumerate() {
            assert!((k.taps()[3 + i] - e).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_four_matches_offline_evaluation() {
        let k = GaussianKernel::new(CutoffFrequency::new(4.0).unwrap());
        assert_eq!(k.radius(), 12);
        assert_eq!(k.taps().len(), 25);
        // exp(-i^2/32) / 10.009172595445069, i = 0..=12
        let expected = [
            0.09990835810495222,
            0.09683450107728371,
            0.0881688165699329,
            0.07541478526731735,
            0.0605974823522027,
            0.04574137946027258,
            0.032435494968494315,
            0.021606697733267614,
            0.013521125941838638,
            0.00794865988767476,
            0.004389666898480905,
            0.0022773291864289984,
            0.001109881604329387,
        ];
        for (i, e) in expected.iter().enumerate() {
            assert!((k.taps()[12 + i] - e).abs() < 1e-12, "tap {i}");
            assert!((k.taps()[12 - i] - e).abs() < 1e-12, "tap -{i}");
        }
    }

    #[test]
    fn rejects_negative_and_non_finite() {
        assert!(CutoffFrequency::new(-1.0).is_err());
        assert!(CutoffFrequency::new(f64::NAN).is_err());
        assert!(CutoffFrequency::new(f64::INFINITY).is_err());
    }

    #[test]
    fn display_has_no_trailing_zeros() {
        assert_eq!(CutoffFrequency::new(13.0).unwrap().to_string(), "13");
        assert_eq!(CutoffFrequency::new(2.5).unwrap().to_string(), "2.5");
    }

    proptest! {
        #[test]
        fn normalized_symmetric_peaked(sigma in 0.01f64..=32.0) {
            let k = GaussianKernel::new(CutoffFrequency::new(sigma).unwrap());
            let t = k.taps();
            let r = k.radius();
            prop_assert_eq!(t.len(), 2 * r + 1);
            prop_assert!((t.iter().sum::<f64>() - 1.0).abs() <= 1e-6);
            for i in 0..t.len() {
                prop_assert_eq!(t[i], t[2 * r - i]);
                prop_assert!(t[i] >= 0.0);
                prop_assert!(t[i] <= t[r]);
            }
        }
    }
}
