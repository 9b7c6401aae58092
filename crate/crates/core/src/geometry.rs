//! Axis-aligned box arithmetic in continuous pixel coordinates.
//!
//! Widths are `x2 - x1` with no `+1` pixel offset, and everything is `f64`
//! so that threshold comparisons are reproducible bit-for-bit.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_squared(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_squared(other).sqrt()
    }
}

/// Corner-form box `[x1, y1, x2, y2]`, origin top-left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct BBox {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl From<[f64; 4]> for BBox {
    fn from([x1, y1, x2, y2]: [f64; 4]) -> Self {
        Self { x1, y1, x2, y2 }
    }
}

impl From<BBox> for [f64; 4] {
    fn from(b: BBox) -> Self {
        [b.x1, b.y1, b.x2, b.y2]
    }
}

impl BBox {
    pub const fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self { x1, y1, x2, y2 }
    }

    /// Builds a box from COCO `[x, y, w, h]`.
    pub fn from_xywh(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self::new(x, y, x + w, y + h)
    }

    pub fn from_center(center: Point, w: f64, h: f64) -> Self {
        Self::new(
            center.x - w / 2.0,
            center.y - h / 2.0,
            center.x + w / 2.0,
            center.y + h / 2.0,
        )
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn center(&self) -> Point {
        Point::new((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)
    }

    /// Finite coordinates with `x2 >= x1` and `y2 >= y1`.
    pub fn is_valid(&self) -> bool {
        [self.x1, self.y1, self.x2, self.y2]
            .iter()
            .all(|v| v.is_finite())
            && self.x2 >= self.x1
            && self.y2 >= self.y1
    }

    /// Boundary-inclusive containment.
    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x1 && p.x <= self.x2 && p.y >= self.y1 && p.y <= self.y2
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let w = self.x2.min(other.x2) - self.x1.max(other.x1);
        let h = self.y2.min(other.y2) - self.y1.max(other.y1);
        if w <= 0.0 || h <= 0.0 {
            0.0
        } else {
            w * h
        }
    }

    /// Smallest box enclosing both.
    pub fn enclosing(&self, other: &BBox) -> BBox {
        BBox::new(
            self.x1.min(other.x1),
            self.y1.min(other.y1),
            self.x2.max(other.x2),
            self.y2.max(other.y2),
        )
    }

    pub fn scale(&self, factor: f64) -> BBox {
        BBox::new(
            self.x1 * factor,
            self.y1 * factor,
            self.x2 * factor,
            self.y2 * factor,
        )
    }

    /// Scales the box about its own center.
    pub fn scale_about_center(&self, factor: f64) -> BBox {
        BBox::from_center(self.center(), self.width() * factor, self.height() * factor)
    }

    pub fn clip(&self, width: f64, height: f64) -> BBox {
        BBox::new(
            self.x1.clamp(0.0, width),
            self.y1.clamp(0.0, height),
            self.x2.clamp(0.0, width),
            self.y2.clamp(0.0, height),
        )
    }
}

/// Intersection over union. Zero when the union is empty.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter <= 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        inter / union
    }
}

/// Generalized IoU: `iou - (|C| - |A ∪ B|) / |C|` with `C` the enclosing box.
pub fn giou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    let union = a.area() + b.area() - inter;
    let hull = a.enclosing(b).area();
    if hull <= 0.0 {
        return 0.0;
    }
    let iou = if union > 0.0 { inter / union } else { 0.0 };
    iou - (hull - union) / hull
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub bbox: BBox,
    pub score: f64,
    pub category: u32,
    /// Pyramid level that produced the detection, when known. Pre-NMS top-k
    /// is applied per level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

impl Detection {
    pub fn new(bbox: BBox, score: f64, category: u32) -> Self {
        Self {
            bbox,
            score,
            category,
            level: None,
        }
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level = Some(level);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NmsConfig {
    /// Boxes overlapping a kept box of the same category above this IoU are dropped.
    pub iou_threshold: f64,
    /// Detections scoring at or below this are discarded before anything else.
    pub score_floor: f64,
    /// Detections kept per pyramid level before suppression.
    pub pre_topk: usize,
    /// Detections kept per image after suppression.
    pub post_topk: usize,
}

impl Default for NmsConfig {
    fn default() -> Self {
        Self {
            iou_threshold: 0.6,
            score_floor: 0.05,
            pre_topk: 1000,
            post_topk: 100,
        }
    }
}

/// Descending score, ties broken by lower input index.
fn by_score_desc(dets: &[Detection]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| {
        dets[b]
            .score
            .partial_cmp(&dets[a].score)
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    }
}

/// Score filter, per-level top-k, per-category greedy suppression, per-image top-k.
///
/// The result is sorted by descending score; equal scores keep input order.
pub fn nms(dets: &[Detection], cfg: &NmsConfig) -> Vec<Detection> {
    let mut by_level: BTreeMap<Option<usize>, Vec<usize>> = BTreeMap::new();
    for (i, d) in dets.iter().enumerate() {
        if d.score > cfg.score_floor {
            by_level.entry(d.level).or_default().push(i);
        }
    }

    let mut by_category: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for mut idx in by_level.into_values() {
        idx.sort_by(by_score_desc(dets));
        idx.truncate(cfg.pre_topk);
        for i in idx {
            by_category.entry(dets[i].category).or_default().push(i);
        }
    }

    let mut kept = Vec::new();
    for mut idx in by_category.into_values() {
        idx.sort_by(by_score_desc(dets));
        let mut survivors: Vec<usize> = Vec::new();
        for i in idx {
            let suppressed = survivors
                .iter()
                .any(|&j| iou(&dets[i].bbox, &dets[j].bbox) > cfg.iou_threshold);
            if !suppressed {
                survivors.push(i);
            }
        }
        kept.extend(survivors);
    }

    kept.sort_by(by_score_desc(dets));
    kept.truncate(cfg.post_topk);
    kept.into_iter().map(|i| dets[i]).collect()
}
