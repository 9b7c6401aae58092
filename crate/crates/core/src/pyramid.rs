//! Multi-level anchor grids.
//!
//! Anchors are laid out level-major, then row-major over feature-map
//! locations, with the per-location templates innermost:
//!
//! `index = level_offset + (row * cols + col) * templates + template`

use crate::error::{Error, Result};
use crate::geometry::{BBox, Point};
use serde::{Deserialize, Serialize};
use std::ops::Range;

pub const DEFAULT_STRIDES: [u32; 5] = [8, 16, 32, 64, 128];
pub const DEFAULT_SCALE_MULTIPLIER: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub stride: u32,
    /// Anchor side in units of the stride.
    pub scale_multiplier: f64,
    /// Width-to-height ratios; every ratio keeps the square anchor's area.
    pub aspect_ratios: Vec<f64>,
    /// Octave subdivisions; scale `j` multiplies the side by `2^(j / n)`.
    pub scales_per_octave: u32,
}

impl LevelSpec {
    pub fn square(stride: u32, scale_multiplier: f64) -> Self {
        Self {
            stride,
            scale_multiplier,
            aspect_ratios: vec![1.0],
            scales_per_octave: 1,
        }
    }

    pub fn templates_per_location(&self) -> usize {
        self.aspect_ratios.len() * self.scales_per_octave as usize
    }

    /// `(width, height)` of each template, scale-major then ratio.
    pub fn template_sizes(&self) -> Vec<(f64, f64)> {
        let base = self.scale_multiplier * f64::from(self.stride);
        let n = self.scales_per_octave;
        (0..n)
            .flat_map(|j| {
                let side = base * 2f64.powf(f64::from(j) / f64::from(n));
                self.aspect_ratios.iter().map(move |&r| {
                    let s = r.sqrt();
                    (side * s, side / s)
                })
            })
            .collect()
    }

    fn validate(&self, level: usize) -> Result<()> {
        let field = |name: &str| format!("pyramid.levels[{level}].{name}");
        if self.stride == 0 {
            return Err(Error::config(field("stride"), "must be positive"));
        }
        if !(self.scale_multiplier.is_finite() && self.scale_multiplier > 0.0) {
            return Err(Error::config(field("scale_multiplier"), "must be positive"));
        }
        if self.aspect_ratios.is_empty() {
            return Err(Error::config(field("aspect_ratios"), "must not be empty"));
        }
        if let Some(r) = self
            .aspect_ratios
            .iter()
            .find(|r| !(r.is_finite() && **r > 0.0))
        {
            return Err(Error::config(
                field("aspect_ratios"),
                format!("ratio {r} is not positive"),
            ));
        }
        if self.scales_per_octave == 0 {
            return Err(Error::config(field("scales_per_octave"), "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PyramidConfig {
    pub levels: Vec<LevelSpec>,
}

impl Default for PyramidConfig {
    /// P3–P7, one square `8S` anchor per location.
    fn default() -> Self {
        Self::square(&DEFAULT_STRIDES, DEFAULT_SCALE_MULTIPLIER)
    }
}

impl PyramidConfig {
    pub fn square(strides: &[u32], scale_multiplier: f64) -> Self {
        Self {
            levels: strides
                .iter()
                .map(|&s| LevelSpec::square(s, scale_multiplier))
                .collect(),
        }
    }

    pub fn with_scale_multiplier(mut self, m: f64) -> Self {
        self.levels.iter_mut().for_each(|l| l.scale_multiplier = m);
        self
    }

    pub fn with_aspect_ratios(mut self, ratios: &[f64]) -> Self {
        self.levels
            .iter_mut()
            .for_each(|l| l.aspect_ratios = ratios.to_vec());
        self
    }

    pub fn with_scales_per_octave(mut self, n: u32) -> Self {
        self.levels.iter_mut().for_each(|l| l.scales_per_octave = n);
        self
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::config("pyramid.levels", "at least one level required"));
        }
        for (i, level) in self.levels.iter().enumerate() {
            level.validate(i)?;
        }
        if self.levels.windows(2).any(|w| w[1].stride <= w[0].stride) {
            return Err(Error::config(
                "pyramid.strides",
                "strides must be strictly increasing",
            ));
        }
        Ok(())
    }
}

/// Grid geometry of one pyramid level inside an [`AnchorSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelGrid {
    pub stride: u32,
    pub rows: usize,
    pub cols: usize,
    pub templates: usize,
    /// Global index of the first anchor on this level.
    pub offset: usize,
}

impl LevelGrid {
    pub fn locations(&self) -> usize {
        self.rows * self.cols
    }

    pub fn len(&self) -> usize {
        self.locations() * self.templates
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> Range<usize> {
        self.offset..self.offset + self.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnchorIndex {
    pub level: usize,
    pub row: usize,
    pub col: usize,
    pub template: usize,
}

/// All anchors of one image, flat and globally indexed.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSet {
    pub image_width: u32,
    pub image_height: u32,
    levels: Vec<LevelGrid>,
    boxes: Vec<BBox>,
    centers: Vec<Point>,
}

impl AnchorSet {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn levels(&self) -> &[LevelGrid] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn boxes(&self) -> &[BBox] {
        &self.boxes
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(LevelGrid::len).collect()
    }

    pub fn level_of(&self, index: usize) -> usize {
        // levels are few; a linear scan beats binary search here
        self.levels
            .iter()
            .position(|l| index < l.offset + l.len())
            .expect("anchor index out of range")
    }

    pub fn locate(&self, index: usize) -> AnchorIndex {
        let level = self.level_of(index);
        let grid = &self.levels[level];
        let local = index - grid.offset;
        let loc = local / grid.templates;
        AnchorIndex {
            level,
            row: loc / grid.cols,
            col: loc % grid.cols,
            template: local % grid.templates,
        }
    }

    pub fn index_of(&self, at: AnchorIndex) -> Option<usize> {
        let grid = self.levels.get(at.level)?;
        if at.row >= grid.rows || at.col >= grid.cols || at.template >= grid.templates {
            return None;
        }
        Some(grid.offset + (at.row * grid.cols + at.col) * grid.templates + at.template)
    }

    /// Copy of this set with every anchor box scaled about its own center.
    pub fn scaled_about_centers(&self, factor: f64) -> AnchorSet {
        AnchorSet {
            boxes: self
                .boxes
                .iter()
                .map(|b| b.scale_about_center(factor))
                .collect(),
            ..self.clone()
        }
    }
}

/// Tiles every level with anchors centered at `((col + 0.5) * S, (row + 0.5) * S)`
/// on a `ceil(H / S) x ceil(W / S)` grid. Anchors are not clipped.
pub fn generate_anchors(image_width: u32, image_height: u32, config: &PyramidConfig) -> Result<AnchorSet> {
    if image_width == 0 || image_height == 0 {
        return Err(Error::config("image", "width and height must be at least 1"));
    }
    config.validate()?;

    let mut levels = Vec::with_capacity(config.levels.len());
    let mut boxes = Vec::new();
    let mut centers = Vec::new();
    for spec in &config.levels {
        let stride = spec.stride as usize;
        let grid = LevelGrid {
            stride: spec.stride,
            rows: (image_height as usize).div_ceil(stride),
            cols: (image_width as usize).div_ceil(stride),
            templates: spec.templates_per_location(),
            offset: boxes.len(),
        };
        let sizes = spec.template_sizes();
        let s = f64::from(spec.stride);
        boxes.reserve(grid.len());
        centers.reserve(grid.len());
        for row in 0..grid.rows {
            let cy = (row as f64 + 0.5) * s;
            for col in 0..grid.cols {
                let c = Point::new((col as f64 + 0.5) * s, cy);
                for &(w, h) in &sizes {
                    boxes.push(BBox::from_center(c, w, h));
                    centers.push(c);
                }
            }
        }
        levels.push(grid);
    }

    Ok(AnchorSet {
        image_width,
        image_height,
        levels,
        boxes,
        centers,
    })
}
