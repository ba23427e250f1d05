use std::cmp::Ordering;

use crate::error::{Error, Result};

// Higher score first, lower index on ties. Callers have rejected NaN.
fn rank_order(a: &(usize, f32), b: &(usize, f32)) -> Ordering {
    b.1.partial_cmp(&a.1)
        .unwrap_or(Ordering::Equal)
        .then(a.0.cmp(&b.0))
}

/// The `k` highest-scoring `(label, score)` pairs, ties broken by the
/// smaller label index.
pub fn top_k(scores: &[f32], k: usize) -> Result<Vec<(usize, f32)>> {
    if k == 0 || k > scores.len() {
        return Err(Error::invalid(format!(
            "k must be in 1..={}, got {k}",
            scores.len()
        )));
    }
    if let Some(i) = scores.iter().position(|s| s.is_nan()) {
        return Err(Error::Data(format!("score {i} is NaN")));
    }
    let mut ranked: Vec<(usize, f32)> = scores.iter().copied().enumerate().collect();
    if k < ranked.len() {
        ranked.select_nth_unstable_by(k - 1, rank_order);
        ranked.truncate(k);
    }
    ranked.sort_by(rank_order);
    Ok(ranked)
}
