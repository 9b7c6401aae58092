//! Positive/negative training-sample definitions.
//!
//! Four strategies share one output type, [`AssignmentResult`]:
//!
//! - [`assign_iou`]: IoU thresholds with best-anchor forcing (RetinaNet).
//! - [`assign_spatial_scale`]: anchor point inside the box plus a per-level
//!   regression-distance range (FCOS).
//! - [`assign_atss`]: adaptive selection. Top-k closest anchors per level form
//!   the candidate set, and candidates whose IoU reaches mean + std of the
//!   candidate IoUs (and whose center lies in the box) become positives.
//! - [`assign_center_sampling`]: the ATSS candidate step followed by the FCOS
//!   scale-range filter.

mod atss;
mod candidates;
mod center_sampling;
mod iou;
mod record;
mod spatial_scale;

pub use atss::assign_atss;
pub use candidates::select_candidates;
pub use center_sampling::assign_center_sampling;
pub use iou::assign_iou;
pub use record::{AssignmentRecord, LabelSpan, SpanLabel};
pub use spatial_scale::assign_spatial_scale;

use crate::error::{Error, Result};
use crate::geometry::BBox;
use crate::pyramid::AnchorSet;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub bbox: BBox,
    pub category: u32,
    /// Ordinal within its image.
    pub id: usize,
}

impl GroundTruth {
    pub fn new(id: usize, bbox: BBox, category: u32) -> Self {
        Self { bbox, category, id }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Ignore,
    /// Index of the assigned ground truth in the input slice.
    Positive(usize),
}

impl Label {
    pub fn is_positive(&self) -> bool {
        matches!(self, Label::Positive(_))
    }

    pub fn gt(&self) -> Option<usize> {
        match *self {
            Label::Positive(g) => Some(g),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Atss,
    Iou,
    #[serde(rename = "fcos")]
    SpatialScale,
    CenterSampling,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Atss,
        Strategy::Iou,
        Strategy::SpatialScale,
        Strategy::CenterSampling,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Atss => "atss",
            Strategy::Iou => "iou",
            Strategy::SpatialScale => "fcos",
            Strategy::CenterSampling => "center-sampling",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| {
                Error::config(
                    "strategy",
                    format!("unknown strategy `{s}` (expected atss, iou, fcos or center-sampling)"),
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AtssConfig {
    /// Candidates taken per pyramid level.
    pub k: usize,
}

impl Default for AtssConfig {
    fn default() -> Self {
        Self { k: 9 }
    }
}

impl AtssConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::config("k", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IouAssignConfig {
    pub theta_p: f64,
    pub theta_n: f64,
    /// Force each ground truth's best-overlapping anchor positive.
    pub force_best_match: bool,
}

impl Default for IouAssignConfig {
    fn default() -> Self {
        Self {
            theta_p: 0.5,
            theta_n: 0.4,
            force_best_match: true,
        }
    }
}

impl IouAssignConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta_p) {
            return Err(Error::config("theta_p", "must lie in [0, 1]"));
        }
        if !(0.0..=self.theta_p).contains(&self.theta_n) {
            return Err(Error::config("theta_n", "must lie in [0, theta_p]"));
        }
        Ok(())
    }
}

/// Per-level regression ranges: level `i` accepts `max(l, t, r, b)` in
/// `(bounds[i], bounds[i + 1]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScaleRangeConfig {
    pub bounds: Vec<f64>,
}

impl Default for ScaleRangeConfig {
    fn default() -> Self {
        Self {
            bounds: vec![0.0, 64.0, 128.0, 256.0, 512.0, f64::INFINITY],
        }
    }
}

impl ScaleRangeConfig {
    pub fn new(bounds: Vec<f64>) -> Result<Self> {
        let cfg = Self { bounds };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.len() < 2 {
            return Err(Error::config("scale_ranges", "need at least two bounds"));
        }
        if self.bounds.iter().any(|b| b.is_nan()) {
            return Err(Error::config("scale_ranges", "bounds must be numbers"));
        }
        if self.bounds.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("scale_ranges", "bounds must be strictly increasing"));
        }
        Ok(())
    }

    pub fn validate_for_levels(&self, levels: usize) -> Result<()> {
        self.validate()?;
        if self.bounds.len() != levels + 1 {
            return Err(Error::config(
                "scale_ranges",
                format!(
                    "{} bounds given for {levels} pyramid levels (need {})",
                    self.bounds.len(),
                    levels + 1
                ),
            ));
        }
        Ok(())
    }

    /// Whether `max_distance` falls in the range of `level`. Levels without
    /// a configured range accept nothing.
    pub fn accepts(&self, level: usize, max_distance: f64) -> bool {
        match (self.bounds.get(level), self.bounds.get(level + 1)) {
            (Some(&lo), Some(&hi)) => max_distance > lo && max_distance <= hi,
            _ => false,
        }
    }
}

/// Largest of the four side distances from `(x, y)` to `b`.
pub(crate) fn max_side_distance(b: &BBox, x: f64, y: f64) -> f64 {
    (x - b.x1).max(y - b.y1).max(b.x2 - x).max(b.y2 - y)
}

/// Full per-strategy configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    pub atss: AtssConfig,
    pub iou: IouAssignConfig,
    pub scale_ranges: ScaleRangeConfig,
}

impl StrategyConfig {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            atss: AtssConfig::default(),
            iou: IouAssignConfig::default(),
            scale_ranges: ScaleRangeConfig::default(),
        }
    }

    pub fn validate(&self, levels: usize) -> Result<()> {
        match self.strategy {
            Strategy::Atss => self.atss.validate(),
            Strategy::Iou => self.iou.validate(),
            Strategy::SpatialScale => self.scale_ranges.validate_for_levels(levels),
            Strategy::CenterSampling => {
                self.atss.validate()?;
                self.scale_ranges.validate_for_levels(levels)
            }
        }
    }
}

/// Runs the configured strategy.
pub fn assign(anchors: &AnchorSet, gts: &[GroundTruth], cfg: &StrategyConfig) -> AssignmentResult {
    match cfg.strategy {
        Strategy::Atss => assign_atss(anchors, gts, &cfg.atss),
        Strategy::Iou => assign_iou(anchors, gts, &cfg.iou),
        Strategy::SpatialScale => assign_spatial_scale(anchors, gts, &cfg.scale_ranges),
        Strategy::CenterSampling => {
            assign_center_sampling(anchors, gts, &cfg.atss, &cfg.scale_ranges)
        }
    }
}

/// Adaptive threshold statistics of one ground truth's candidate IoUs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdStats {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub threshold: f64,
}

impl ThresholdStats {
    pub fn from_ious(ious: &[f64]) -> Option<Self> {
        if ious.is_empty() {
            return None;
        }
        let n = ious.len() as f64;
        let mean = ious.iter().sum::<f64>() / n;
        let var = ious.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        Some(Self {
            mean,
            std,
            threshold: mean + std,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GtDiagnostics {
    pub gt: usize,
    /// Spatial candidates considered for this ground truth. For the IoU
    /// strategy, anchors with non-zero overlap.
    pub num_candidates: usize,
    /// Top-k candidate anchors, level by level in order of increasing center
    /// distance. Only filled by the strategies with a top-k candidate step.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates_per_level: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidate_ious: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<ThresholdStats>,
    /// Positives held after conflicts between ground truths are resolved.
    pub num_positives: usize,
}

impl GtDiagnostics {
    pub(crate) fn empty(gt: usize) -> Self {
        Self {
            gt,
            num_candidates: 0,
            candidates: Vec::new(),
            candidates_per_level: Vec::new(),
            candidate_ious: Vec::new(),
            stats: None,
            num_positives: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    pub strategy: Strategy,
    /// One label per anchor, in global anchor order.
    pub labels: Vec<Label>,
    /// Anchors per pyramid level, copied from the anchor set.
    pub level_sizes: Vec<usize>,
    pub gts: Vec<GtDiagnostics>,
}

impl AssignmentResult {
    /// Builds the result from per-anchor labels, filling in final positive counts.
    pub(crate) fn finish(
        strategy: Strategy,
        anchors: &AnchorSet,
        labels: Vec<Label>,
        mut gts: Vec<GtDiagnostics>,
    ) -> Self {
        for g in &mut gts {
            g.num_positives = 0;
        }
        for label in &labels {
            if let Label::Positive(g) = label {
                gts[*g].num_positives += 1;
            }
        }
        Self {
            strategy,
            labels,
            level_sizes: anchors.level_sizes(),
            gts,
        }
    }

    pub fn num_anchors(&self) -> usize {
        self.labels.len()
    }

    pub fn positives(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.gt().map(|g| (i, g)))
    }

    pub fn num_positives(&self) -> usize {
        self.labels.iter().filter(|l| l.is_positive()).count()
    }

    pub fn num_ignored(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Ignore).count()
    }

    pub fn num_negatives(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Negative).count()
    }

    /// Level of a global anchor index.
    pub fn level_of(&self, anchor: usize) -> usize {
        let mut end = 0;
        for (level, size) in self.level_sizes.iter().enumerate() {
            end += size;
            if anchor < end {
                return level;
            }
        }
        panic!("anchor index {anchor} out of range")
    }

    pub fn positives_per_level(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.level_sizes.len());
        let mut start = 0;
        for size in &self.level_sizes {
            out.push(
                self.labels[start..start + size]
                    .iter()
                    .filter(|l| l.is_positive())
                    .count(),
            );
            start += size;
        }
        out
    }

    pub fn to_record(&self) -> AssignmentRecord {
        AssignmentRecord::from(self)
    }
}

/// Winner of one anchor among several claiming ground truths.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Claim {
    pub gt: usize,
    pub key: f64,
}

/// Keeps the claim with the larger key; equal keys keep the earlier ground truth.
pub(crate) fn claim_max(slot: &mut Option<Claim>, gt: usize, key: f64) {
    match slot {
        Some(c) if key > c.key || (key == c.key && gt < c.gt) => *c = Claim { gt, key },
        Some(_) => {}
        None => *slot = Some(Claim { gt, key }),
    }
}

/// Keeps the claim with the smaller key; equal keys keep the earlier ground truth.
pub(crate) fn claim_min(slot: &mut Option<Claim>, gt: usize, key: f64) {
    match slot {
        Some(c) if key < c.key || (key == c.key && gt < c.gt) => *c = Claim { gt, key },
        Some(_) => {}
        None => *slot = Some(Claim { gt, key }),
    }
}

pub(crate) fn labels_from_claims(claims: Vec<Option<Claim>>) -> Vec<Label> {
    claims
        .into_iter()
        .map(|c| c.map_or(Label::Negative, |c| Label::Positive(c.gt)))
        .collect()
}
