use super::curves::{CurvePoint, Metric};

/// Where the obj1 and obj2 curves meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    pub cutoff: f64,
    /// Adjacent sampled cutoffs enclosing the crossing.
    pub bracket: (f64, f64),
}

/// Crossing of `obj1` and `obj2` sampled at ascending `cutoffs`.
///
/// Scans adjacent samples for the first where `d = obj1 − obj2` changes
/// sign or touches zero and returns the linear-interpolation root. A zero
/// at a sample returns that sample. `None` when the curves never meet or
/// fewer than two samples exist.
pub fn find_crossover(cutoffs: &[f64], obj1: &[f64], obj2: &[f64]) -> Option<Crossover> {
    assert_eq!(cutoffs.len(), obj1.len());
    assert_eq!(cutoffs.len(), obj2.len());
    if cutoffs.len() < 2 {
        return None;
    }
    let d: Vec<f64> = obj1.iter().zip(obj2).map(|(a, b)| a - b).collect();
    (0..cutoffs.len() - 1).find_map(|i| {
        let (d0, d1) = (d[i], d[i + 1]);
        let (c0, c1) = (cutoffs[i], cutoffs[i + 1]);
        let cutoff = if d0 == 0.0 {
            c0
        } else if d1 == 0.0 {
            c1
        } else if d0.signum() != d1.signum() {
            c0 + (c1 - c0) * d0 / (d0 - d1)
        } else {
            return None;
        };
        Some(Crossover {
            cutoff,
            bracket: (c0, c1),
        })
    })
}

/// Crossover of a hit curve on percentages, ignoring cutoffs with no
/// records.
pub fn curve_crossover(points: &[CurvePoint], metric: Metric) -> Option<Crossover> {
    let sampled: Vec<&CurvePoint> = points.iter().filter(|p| p.n > 0).collect();
    let cutoffs: Vec<f64> = sampled.iter().map(|p| p.cutoff).collect();
    let obj1: Vec<f64> = sampled.iter().map(|p| p.obj1_pct(metric)).collect();
    let obj2: Vec<f64> = sampled.iter().map(|p| p.obj2_pct(metric)).collect();
    find_crossover(&cutoffs, &obj1, &obj2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverResult {
    pub low_category: String,
    pub high_category: String,
    pub metric: Metric,
    pub crossover: Option<Crossover>,
}
