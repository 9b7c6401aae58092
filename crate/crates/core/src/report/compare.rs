use super::{assign_dataset, ExperimentConfig};
use crate::assign::{AssignmentResult, Strategy, StrategyConfig};
use crate::error::{Error, Result};
use crate::ingest::DatasetImage;
use crate::pyramid::PyramidConfig;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// `|A ∩ B| / |A ∪ B|`, defined as 1 when both sets are empty.
pub fn jaccard(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        1.0
    } else {
        a.intersection(b).count() as f64 / union as f64
    }
}

fn positive_set(r: &AssignmentResult, range: std::ops::Range<usize>) -> BTreeSet<usize> {
    r.labels[range.clone()]
        .iter()
        .zip(range)
        .filter(|(l, _)| l.is_positive())
        .map(|(_, i)| i)
        .collect()
}

/// Agreement of two strategies' positive anchor sets on the same images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub a: Strategy,
    pub b: Strategy,
    pub mean_jaccard: f64,
    pub per_image_jaccard: Vec<f64>,
    /// Mean over images of the per-level Jaccard.
    pub per_level_jaccard: Vec<f64>,
    /// Mean of `positives_b - positives_a` per ground truth.
    pub mean_count_delta: f64,
    pub mean_abs_count_delta: f64,
}

/// Compares two result lists image by image. The anchor sets must match.
pub fn compare_results(a: &[AssignmentResult], b: &[AssignmentResult]) -> Result<PairComparison> {
    if a.len() != b.len() {
        return Err(Error::InvalidData(format!(
            "result lists cover {} and {} images",
            a.len(),
            b.len()
        )));
    }
    let levels = a.first().map_or(0, |r| r.level_sizes.len());
    let mut per_image = Vec::with_capacity(a.len());
    let mut level_sums = vec![0.0; levels];
    let (mut delta, mut abs_delta, mut gts) = (0i64, 0u64, 0usize);
    let (mut sa, mut sb) = (None, None);

    for (ra, rb) in a.iter().zip(b) {
        if ra.labels.len() != rb.labels.len() || ra.level_sizes != rb.level_sizes {
            return Err(Error::MismatchedAnchors {
                left: ra.labels.len(),
                right: rb.labels.len(),
            });
        }
        if ra.gts.len() != rb.gts.len() {
            return Err(Error::InvalidData("results cover different ground truths".into()));
        }
        sa.get_or_insert(ra.strategy);
        sb.get_or_insert(rb.strategy);
        per_image.push(jaccard(
            &positive_set(ra, 0..ra.labels.len()),
            &positive_set(rb, 0..rb.labels.len()),
        ));
        let mut start = 0;
        for (level, &size) in ra.level_sizes.iter().enumerate() {
            let range = start..start + size;
            if let Some(sum) = level_sums.get_mut(level) {
                *sum += jaccard(&positive_set(ra, range.clone()), &positive_set(rb, range));
            }
            start += size;
        }
        for (ga, gb) in ra.gts.iter().zip(&rb.gts) {
            let d = gb.num_positives as i64 - ga.num_positives as i64;
            delta += d;
            abs_delta += d.unsigned_abs();
            gts += 1;
        }
    }

    let n = per_image.len();
    let mean = |sum: f64, n: usize| if n == 0 { 1.0 } else { sum / n as f64 };
    Ok(PairComparison {
        a: sa.unwrap_or(Strategy::Atss),
        b: sb.unwrap_or(Strategy::Atss),
        mean_jaccard: mean(per_image.iter().sum(), n),
        per_level_jaccard: level_sums.into_iter().map(|s| mean(s, n)).collect(),
        per_image_jaccard: per_image,
        mean_count_delta: if gts == 0 { 0.0 } else { delta as f64 / gts as f64 },
        mean_abs_count_delta: if gts == 0 { 0.0 } else { abs_delta as f64 / gts as f64 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub strategies: Vec<Strategy>,
    pub pairs: Vec<PairComparison>,
}

impl Comparison {
    pub fn pair(&self, a: Strategy, b: Strategy) -> Option<&PairComparison> {
        self.pairs.iter().find(|p| p.a == a && p.b == b)
    }
}

/// Runs every strategy on the same anchors and compares all pairs.
pub fn compare_strategies(
    images: &[DatasetImage],
    pyramid: &PyramidConfig,
    configs: &[StrategyConfig],
) -> Result<Comparison> {
    let results = configs
        .iter()
        .map(|s| assign_dataset(images, &ExperimentConfig::new(pyramid.clone(), s.clone())))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for i in 0..configs.len() {
        for j in i + 1..configs.len() {
            let mut p = compare_results(&results[i], &results[j])?;
            p.a = configs[i].strategy;
            p.b = configs[j].strategy;
            pairs.push(p);
        }
    }
    Ok(Comparison {
        strategies: configs.iter().map(|c| c.strategy).collect(),
        pairs,
    })
}
