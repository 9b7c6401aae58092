//! COCO annotation loading, validation and the training resize policy.

mod coco;
mod synthetic;

pub use coco::{CocoAnnotation, CocoCategory, CocoFile, CocoImage};
pub use synthetic::{synthesize, SyntheticSpec};

use crate::assign::GroundTruth;
use crate::error::{Error, Result};
use crate::geometry::BBox;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::Path;

/// Width or height at or below this is a degenerate annotation.
pub const MIN_BOX_SIDE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetImage {
    pub id: u64,
    pub original_width: u32,
    pub original_height: u32,
    /// Current (possibly resized) dimensions; ground truths live in this frame.
    pub width: u32,
    pub height: u32,
    /// Factor mapping original coordinates to the current frame.
    pub scale: f64,
    pub gts: Vec<GroundTruth>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadStats {
    pub images: usize,
    pub categories: usize,
    pub raw_annotations: usize,
    pub crowd_dropped: usize,
    pub degenerate_dropped: usize,
    pub loaded_gts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocoDataset {
    pub images: Vec<DatasetImage>,
    pub categories: Vec<CocoCategory>,
    pub stats: LoadStats,
}

impl CocoDataset {
    /// Converts parsed annotations into per-image ground truths.
    ///
    /// Boxes go from `[x, y, w, h]` to corner form and are clipped to the
    /// image. Crowd regions and boxes with a side of at most [`MIN_BOX_SIDE`]
    /// (before or after clipping) are dropped and counted.
    pub fn from_coco(file: CocoFile) -> Result<Self> {
        let mut images = Vec::with_capacity(file.images.len());
        let mut by_id = HashMap::with_capacity(file.images.len());
        for img in &file.images {
            if img.width == 0 || img.height == 0 {
                return Err(Error::InvalidData(format!("image {} has zero size", img.id)));
            }
            if by_id.insert(img.id, images.len()).is_some() {
                return Err(Error::InvalidData(format!("duplicate image id {}", img.id)));
            }
            images.push(DatasetImage {
                id: img.id,
                original_width: img.width,
                original_height: img.height,
                width: img.width,
                height: img.height,
                scale: 1.0,
                gts: Vec::new(),
            });
        }

        let mut stats = LoadStats {
            images: images.len(),
            categories: file.categories.len(),
            raw_annotations: file.annotations.len(),
            ..LoadStats::default()
        };
        for ann in &file.annotations {
            let &slot = by_id.get(&ann.image_id).ok_or(Error::UnknownImage {
                annotation_id: ann.id,
                image_id: ann.image_id,
            })?;
            if ann.bbox.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidData(format!(
                    "annotation {} has a non-finite bbox",
                    ann.id
                )));
            }
            if ann.iscrowd {
                stats.crowd_dropped += 1;
                continue;
            }
            let [x, y, w, h] = ann.bbox;
            let img = &mut images[slot];
            let bbox = BBox::from_xywh(x, y, w, h).clip(f64::from(img.width), f64::from(img.height));
            if w <= MIN_BOX_SIDE || h <= MIN_BOX_SIDE || !is_proper(&bbox) {
                stats.degenerate_dropped += 1;
                continue;
            }
            let id = img.gts.len();
            img.gts.push(GroundTruth::new(id, bbox, ann.category_id));
        }
        stats.loaded_gts = images.iter().map(|i| i.gts.len()).sum();

        Ok(Self {
            images,
            categories: file.categories,
            stats,
        })
    }

    pub fn from_json_str(json: &str) -> Result<Self> {
        let file: CocoFile = serde_json::from_str(json).map_err(|source| Error::Json {
            path: "<memory>".into(),
            source,
        })?;
        Self::from_coco(file)
    }

    /// Applies `policy` to every image.
    pub fn resized(mut self, policy: &ResizePolicy) -> Self {
        self.images = self.images.iter().map(|img| resize_gt(img, policy)).collect();
        self.stats.loaded_gts = self.images.iter().map(|i| i.gts.len()).sum();
        self
    }

    pub fn num_gts(&self) -> usize {
        self.images.iter().map(|i| i.gts.len()).sum()
    }
}

fn is_proper(b: &BBox) -> bool {
    b.width() > MIN_BOX_SIDE && b.height() > MIN_BOX_SIDE
}

/// Reads a COCO instance-annotation file. Ground truths stay in original
/// image coordinates.
pub fn load_coco(path: impl AsRef<Path>) -> Result<CocoDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: CocoFile = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    CocoDataset::from_coco(file)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ResizePolicy {
    pub shorter_side: u32,
    pub max_longer_side: u32,
}

impl Default for ResizePolicy {
    fn default() -> Self {
        Self {
            shorter_side: 800,
            max_longer_side: 1333,
        }
    }
}

impl ResizePolicy {
    pub fn validate(&self) -> Result<()> {
        if self.shorter_side == 0 || self.shorter_side > self.max_longer_side {
            return Err(Error::config(
                "resize",
                "need 0 < shorter_side <= max_longer_side",
            ));
        }
        Ok(())
    }

    pub fn scale_for(&self, width: u32, height: u32) -> f64 {
        let (w, h) = (f64::from(width), f64::from(height));
        (f64::from(self.shorter_side) / w.min(h)).min(f64::from(self.max_longer_side) / w.max(h))
    }
}

/// Rescales an image (from its original size) so its shorter side reaches the
/// target without the longer side exceeding the cap. Dimensions round to the
/// nearest pixel; boxes are scaled by the same factor and clipped. A box that
/// collapses under clipping is dropped and the remaining ids renumbered.
pub fn resize_gt(img: &DatasetImage, policy: &ResizePolicy) -> DatasetImage {
    let scale = policy.scale_for(img.original_width, img.original_height);
    let width = ((f64::from(img.original_width) * scale).round() as u32).max(1);
    let height = ((f64::from(img.original_height) * scale).round() as u32).max(1);
    let factor = scale / img.scale;
    let gts = img
        .gts
        .iter()
        .map(|g| g.bbox.scale(factor).clip(f64::from(width), f64::from(height)))
        .zip(&img.gts)
        .filter(|(b, _)| is_proper(b))
        .enumerate()
        .map(|(id, (bbox, g))| GroundTruth::new(id, bbox, g.category))
        .collect();
    DatasetImage {
        id: img.id,
        original_width: img.original_width,
        original_height: img.original_height,
        width,
        height,
        scale,
        gts,
    }
}
