use std::collections::HashMap;

use crate::dataset::DatasetPlan;
use crate::error::{Error, Result};
use crate::inference::{LabelMap, PredictionRecord};

/// Hit counts at one cutoff. `obj1` is the low-pass source category,
/// `obj2` the high-pass source category.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurvePoint {
    pub cutoff: f64,
    pub n: usize,
    pub obj1_top1: usize,
    pub obj2_top1: usize,
    pub obj1_top5: usize,
    pub obj2_top5: usize,
}

impl CurvePoint {
    fn pct(&self, count: usize) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            count as f64 * 100.0 / self.n as f64
        }
    }

    pub fn obj1_pct(&self, metric: Metric) -> f64 {
        self.pct(self.obj1(metric))
    }

    pub fn obj2_pct(&self, metric: Metric) -> f64 {
        self.pct(self.obj2(metric))
    }

    pub fn obj1(&self, metric: Metric) -> usize {
        match metric {
            Metric::Top1 => self.obj1_top1,
            Metric::Top5 => self.obj1_top5,
        }
    }

    pub fn obj2(&self, metric: Metric) -> usize {
        match metric {
            Metric::Top1 => self.obj2_top1,
            Metric::Top5 => self.obj2_top5,
        }
    }

    fn add(&mut self, other: &CurvePoint) {
        self.n += other.n;
        self.obj1_top1 += other.obj1_top1;
        self.obj2_top1 += other.obj2_top1;
        self.obj1_top5 += other.obj1_top5;
        self.obj2_top5 += other.obj2_top5;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Top1,
    Top5,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Top1 => "top1",
            Metric::Top5 => "top5",
        }
    }

    fn depth(self) -> usize {
        match self {
            Metric::Top1 => 1,
            Metric::Top5 => 5,
        }
    }
}

/// Per-cutoff counts for one ordered category pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCurve {
    pub low_category: String,
    pub high_category: String,
    pub points: Vec<CurvePoint>,
}

/// Counts pooled over every ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub points: Vec<CurvePoint>,
}

fn hit(record: &PredictionRecord, ids: &[usize], metric: Metric) -> bool {
    record
        .topk
        .iter()
        .take(metric.depth())
        .any(|(label, _)| ids.contains(label))
}

/// Folds prediction records into per-pair and pooled hit curves.
///
/// Specs without a record simply lower `n` at their cutoff. A top-5 list
/// holding both categories counts for both objects.
pub fn aggregate(
    records: &[PredictionRecord],
    labels: &LabelMap,
    plan: &DatasetPlan,
) -> Result<(Vec<PairCurve>, AggregateCurve)> {
    let blank: Vec<CurvePoint> = plan
        .cutoffs
        .iter()
        .map(|c| CurvePoint {
            cutoff: c.sigma(),
            ..CurvePoint::default()
        })
        .collect();
    let mut pairs: Vec<PairCurve> = plan
        .pairs()
        .into_iter()
        .map(|(low_category, high_category)| PairCurve {
            low_category,
            high_category,
            points: blank.clone(),
        })
        .collect();
    let pair_pos: HashMap<(&str, &str), usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.low_category.as_str(), p.high_category.as_str()), i))
        .collect();
    let spec_index = plan.spec_index();
    let ids_for = |name: &str| {
        labels
            .get(name)
            .ok_or_else(|| Error::Data(format!("category {name:?} has no label mapping")))
    };

    let mut bumps: Vec<(usize, usize, [bool; 4])> = Vec::with_capacity(records.len());
    for record in records {
        let &si = spec_index
            .get(&record.spec)
            .ok_or_else(|| Error::Data(format!("record {:?} is not in the plan", record.spec)))?;
        let spec = &plan.specs[si];
        let low_ids = ids_for(&spec.low_category)?;
        let high_ids = ids_for(&spec.high_category)?;
        let pi = pair_pos[&(spec.low_category.as_str(), spec.high_category.as_str())];
        let ci = plan
            .cutoffs
            .iter()
            .position(|c| *c == spec.cutoff)
            .ok_or_else(|| Error::Data(format!("{}: cutoff not in plan", record.spec)))?;
        bumps.push((
            pi,
            ci,
            [
                hit(record, low_ids, Metric::Top1),
                hit(record, high_ids, Metric::Top1),
                hit(record, low_ids, Metric::Top5),
                hit(record, high_ids, Metric::Top5),
            ],
        ));
    }
    for (pi, ci, h) in bumps {
        let p = &mut pairs[pi].points[ci];
        p.n += 1;
        p.obj1_top1 += usize::from(h[0]);
        p.obj2_top1 += usize::from(h[1]);
        p.obj1_top5 += usize::from(h[2]);
        p.obj2_top5 += usize::from(h[3]);
    }

    let mut total = blank;
    for pair in &pairs {
        for (t, p) in total.iter_mut().zip(&pair.points) {
            t.add(p);
        }
    }
    Ok((pairs, AggregateCurve { points: total }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{plan_dataset, Canvas, CategoryManifest, PathCheck};
    use crate::kernel::CutoffFrequency;

    fn fruit_plan() -> DatasetPlan {
        plan_dataset(
            vec![
                CategoryManifest::new("Banana", vec![954], vec!["b.png".into()]),
                CategoryManifest::new("Fig", vec![952], vec!["f.png".into()]),
            ],
            &CutoffFrequency::default_sweep(),
            Canvas::default(),
            PathCheck::Deferred,
        )
        .unwrap()
    }

    fn rec(spec: &str, ids: &[usize]) -> PredictionRecord {
        PredictionRecord {
            spec: spec.into(),
            backend: "x".into(),
            topk: ids.iter().map(|&i| (i, 0.0)).collect(),
        }
    }

    #[test]
    fn single_record_rule() {
        let plan = fruit_plan();
        let labels = LabelMap::from_class_ids(&plan);
        let (pairs, agg) = aggregate(&[rec("banana_0__fig_0__c1", &[954, 12, 7, 3, 1])], &labels, &plan).unwrap();
        let p = pairs[0].points[0];
        assert_eq!((p.n, p.obj1_top1, p.obj1_top5, p.obj2_top1, p.obj2_top5), (1, 1, 1, 0, 0));
        assert_eq!(agg.points[0], p);
        assert_eq!(pairs[1].points[0].n, 0);
        assert_eq!(agg.points[1].n, 0);
    }

    #[test]
    fn both_objects_in_top5() {
        let plan = fruit_plan();
        let labels = LabelMap::from_class_ids(&plan);
        let (pairs, _) = aggregate(&[rec("fig_0__banana_0__c4", &[1, 954, 2, 952, 3])], &labels, &plan).unwrap();
        let p = pairs[1].points[1];
        assert_eq!((p.obj1_top1, p.obj2_top1, p.obj1_top5, p.obj2_top5), (0, 0, 1, 1));
    }

    #[test]
    fn unknown_spec_or_category_is_data_error() {
        let plan = fruit_plan();
        let labels = LabelMap::from_class_ids(&plan);
        assert!(matches!(
            aggregate(&[rec("banana_0__kiwi_0__c1", &[1])], &labels, &plan),
            Err(Error::Data(_))
        ));
        let mut partial = LabelMap::new();
        partial.insert("Banana", vec![954]);
        assert!(matches!(
            aggregate(&[rec("banana_0__fig_0__c1", &[1])], &partial, &plan),
            Err(Error::Data(_))
        ));
    }
}
