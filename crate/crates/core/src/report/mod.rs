//! Aggregate statistics over assignment results.

mod compare;
mod render;
mod sweep;

pub use compare::{compare_results, compare_strategies, jaccard, Comparison, PairComparison};
pub use render::{report_csv, report_text, sweep_csv, sweep_text, comparison_text, SWEEP_CSV_HEADER};
pub use sweep::{parse_ratio, run_sweep, SweepParam, SweepRow, SweepTable, SWEEP_NOTE};

use crate::assign::{assign, AssignmentResult, GroundTruth, Strategy, StrategyConfig};
use crate::error::Result;
use crate::ingest::DatasetImage;
use crate::pyramid::{generate_anchors, PyramidConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Upper edges of the sqrt-area buckets; the last bucket is open.
pub const SCALE_BUCKET_EDGES: [f64; 7] = [0.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0];

/// Anchor layout plus assignment strategy: everything needed to label a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub pyramid: PyramidConfig,
    pub strategy: StrategyConfig,
}

impl ExperimentConfig {
    pub fn new(pyramid: PyramidConfig, strategy: StrategyConfig) -> Self {
        Self { pyramid, strategy }
    }

    pub fn validate(&self) -> Result<()> {
        self.pyramid.validate()?;
        self.strategy.validate(self.pyramid.num_levels())
    }
}

/// Labels every image, in parallel on the current rayon pool. Output order
/// follows `images`.
pub fn assign_dataset(images: &[DatasetImage], cfg: &ExperimentConfig) -> Result<Vec<AssignmentResult>> {
    cfg.validate()?;
    images
        .par_iter()
        .map(|img| {
            let anchors = generate_anchors(img.width, img.height, &cfg.pyramid)?;
            Ok(assign(&anchors, &img.gts, &cfg.strategy))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CountSummary {
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub min: usize,
    pub max: usize,
}

impl CountSummary {
    pub fn from_counts(counts: &[usize]) -> Self {
        if counts.is_empty() {
            return Self::default();
        }
        let mut sorted = counts.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let mean = sorted.iter().sum::<usize>() as f64 / n as f64;
        let var = sorted
            .iter()
            .map(|&c| (c as f64 - mean).powi(2))
            .sum::<f64>()
            / n as f64;
        let median = if n % 2 == 1 {
            sorted[n / 2] as f64
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
        };
        Self {
            mean,
            median,
            std: var.sqrt(),
            min: sorted[0],
            max: sorted[n - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleBucket {
    /// Inclusive lower edge of the sqrt-area range, pixels.
    pub lo: f64,
    /// Exclusive upper edge; `None` for the open last bucket.
    pub hi: Option<f64>,
    pub gts: usize,
    pub positives: usize,
    pub mean_positives: f64,
    pub zero_positive_gts: usize,
}

impl ScaleBucket {
    pub fn label(&self) -> String {
        match self.hi {
            Some(hi) => format!("{}-{}", self.lo, hi),
            None => format!(">={}", self.lo),
        }
    }

    pub fn contains(&self, scale: f64) -> bool {
        scale >= self.lo && self.hi.is_none_or(|hi| scale < hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSummary {
    pub mean_m: f64,
    pub mean_v: f64,
    pub mean_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentReport {
    pub strategy: Option<Strategy>,
    pub images: usize,
    pub gts: usize,
    pub anchors: usize,
    pub positives: usize,
    pub ignored: usize,
    pub positives_per_gt: CountSummary,
    pub zero_positive_gts: usize,
    pub zero_positive_fraction: f64,
    pub ignore_fraction: f64,
    pub positives_per_level: Vec<usize>,
    pub scale_buckets: Vec<ScaleBucket>,
    /// Number of ground truths holding exactly `n` positives, keyed by `n`.
    pub positive_count_histogram: BTreeMap<usize, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdSummary>,
}

impl AssignmentReport {
    pub fn empty() -> Self {
        Self {
            strategy: None,
            images: 0,
            gts: 0,
            anchors: 0,
            positives: 0,
            ignored: 0,
            positives_per_gt: CountSummary::default(),
            zero_positive_gts: 0,
            zero_positive_fraction: 0.0,
            ignore_fraction: 0.0,
            positives_per_level: Vec::new(),
            scale_buckets: empty_buckets(),
            positive_count_histogram: BTreeMap::new(),
            thresholds: None,
        }
    }

    /// Mean positives per ground truth within the bucket starting at `lo`.
    pub fn bucket_mean(&self, lo: f64) -> Option<f64> {
        self.scale_buckets
            .iter()
            .find(|b| b.lo == lo && b.gts > 0)
            .map(|b| b.mean_positives)
    }
}

fn empty_buckets() -> Vec<ScaleBucket> {
    SCALE_BUCKET_EDGES
        .iter()
        .enumerate()
        .map(|(i, &lo)| ScaleBucket {
            lo,
            hi: SCALE_BUCKET_EDGES.get(i + 1).copied(),
            gts: 0,
            positives: 0,
            mean_positives: 0.0,
            zero_positive_gts: 0,
        })
        .collect()
}

/// Aggregates per-image results with their ground truths.
///
/// Sums run in input order, so the output depends only on the sequence of
/// results, never on how they were computed.
pub fn summarize<'a, I>(results: I) -> AssignmentReport
where
    I: IntoIterator<Item = (&'a AssignmentResult, &'a [GroundTruth])>,
{
    let mut report = AssignmentReport::empty();
    let mut counts = Vec::new();
    let mut sums = (0.0, 0.0, 0.0);
    let mut with_stats = 0usize;

    for (result, gts) in results {
        report.strategy.get_or_insert(result.strategy);
        report.images += 1;
        report.anchors += result.num_anchors();
        report.ignored += result.num_ignored();
        let per_level = result.positives_per_level();
        if report.positives_per_level.len() < per_level.len() {
            report.positives_per_level.resize(per_level.len(), 0);
        }
        for (acc, n) in report.positives_per_level.iter_mut().zip(per_level) {
            *acc += n;
        }

        for (diag, gt) in result.gts.iter().zip(gts) {
            let n = diag.num_positives;
            counts.push(n);
            report.positives += n;
            *report.positive_count_histogram.entry(n).or_default() += 1;
            let scale = gt.bbox.area().sqrt();
            if let Some(bucket) = report.scale_buckets.iter_mut().find(|b| b.contains(scale)) {
                bucket.gts += 1;
                bucket.positives += n;
                bucket.zero_positive_gts += usize::from(n == 0);
            }
            if let Some(s) = diag.stats {
                sums.0 += s.mean;
                sums.1 += s.std;
                sums.2 += s.threshold;
                with_stats += 1;
            }
        }
    }

    report.gts = counts.len();
    report.positives_per_gt = CountSummary::from_counts(&counts);
    report.zero_positive_gts = counts.iter().filter(|&&c| c == 0).count();
    if report.gts > 0 {
        report.zero_positive_fraction = report.zero_positive_gts as f64 / report.gts as f64;
    }
    if report.anchors > 0 {
        report.ignore_fraction = report.ignored as f64 / report.anchors as f64;
    }
    for b in &mut report.scale_buckets {
        if b.gts > 0 {
            b.mean_positives = b.positives as f64 / b.gts as f64;
        }
    }
    if with_stats > 0 {
        let n = with_stats as f64;
        report.thresholds = Some(ThresholdSummary {
            mean_m: sums.0 / n,
            mean_v: sums.1 / n,
            mean_t: sums.2 / n,
        });
    }
    report
}

/// Assigns and summarizes a dataset in one go.
pub fn report_dataset(images: &[DatasetImage], cfg: &ExperimentConfig) -> Result<AssignmentReport> {
    let results = assign_dataset(images, cfg)?;
    Ok(summarize(
        results.iter().zip(images).map(|(r, img)| (r, img.gts.as_slice())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::{Label, GtDiagnostics};
    use crate::geometry::BBox;

    #[test]
    fn empty_input() {
        let r = summarize(std::iter::empty());
        assert_eq!(r, AssignmentReport::empty());
        assert_eq!(r.positives_per_gt.mean, 0.0);
    }

    #[test]
    fn count_summary() {
        let s = CountSummary::from_counts(&[4, 1, 3, 0]);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.median, 2.0);
        assert_eq!((s.min, s.max), (0, 4));
        assert!((s.std - 2.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hand_tally() {
        // two images, three GTs, hand-built labels
        let diag = |gt, n| GtDiagnostics {
            num_positives: n,
            ..GtDiagnostics::empty(gt)
        };
        let r1 = AssignmentResult {
            strategy: Strategy::Iou,
            labels: vec![
                Label::Positive(0),
                Label::Positive(1),
                Label::Ignore,
                Label::Negative,
                Label::Positive(1),
            ],
            level_sizes: vec![3, 2],
            gts: vec![diag(0, 1), diag(1, 2)],
        };
        let r2 = AssignmentResult {
            strategy: Strategy::Iou,
            labels: vec![Label::Negative, Label::Ignore, Label::Ignore],
            level_sizes: vec![2, 1],
            gts: vec![diag(0, 0)],
        };
        let g1 = [
            GroundTruth::new(0, BBox::new(0., 0., 20., 20.), 1),
            GroundTruth::new(1, BBox::new(0., 0., 100., 100.), 1),
        ];
        let g2 = [GroundTruth::new(0, BBox::new(0., 0., 8., 8.), 1)];
        let r = summarize([(&r1, &g1[..]), (&r2, &g2[..])]);
        assert_eq!(r.images, 2);
        assert_eq!(r.gts, 3);
        assert_eq!(r.anchors, 8);
        assert_eq!(r.positives, 3);
        assert_eq!(r.ignored, 3);
        assert_eq!(r.ignore_fraction, 3.0 / 8.0);
        assert_eq!(r.zero_positive_gts, 1);
        assert_eq!(r.positives_per_level, vec![2, 1]);
        assert_eq!(r.positives_per_gt.median, 1.0);
        assert_eq!(r.bucket_mean(0.0), Some(0.0));
        assert_eq!(r.bucket_mean(16.0), Some(1.0));
        assert_eq!(r.bucket_mean(64.0), Some(2.0));
        assert_eq!(r.scale_buckets.iter().map(|b| b.gts).sum::<usize>(), 3);
        assert_eq!(r.positive_count_histogram, BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
        assert!(r.thresholds.is_none());
    }
}
