//! Seeded synthetic corpus in COCO format.
//!
//! Images have an 800 px shorter side and a longer side drawn from
//! `[800, 1333]`, so the default resize policy leaves them unchanged. Box
//! sizes (square root of area) are log-uniform in `[min_size, max_size]`
//! with a log-uniform aspect ratio in `[1/2, 2]`, placed uniformly inside
//! the image.

use super::coco::{CocoAnnotation, CocoCategory, CocoFile, CocoImage};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

const SHORTER_SIDE: u32 = 800;
const MAX_LONGER_SIDE: u32 = 1333;
const MAX_ASPECT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub images: usize,
    pub boxes_per_image: usize,
    pub min_size: f64,
    pub max_size: f64,
    pub categories: u32,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            images: 1000,
            boxes_per_image: 6,
            min_size: 16.0,
            max_size: 512.0,
            categories: 80,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.images == 0 {
            return Err(Error::config("synthetic.images", "must be at least 1"));
        }
        if self.categories == 0 {
            return Err(Error::config("synthetic.categories", "must be at least 1"));
        }
        if !(self.min_size > 0.0 && self.min_size <= self.max_size) {
            return Err(Error::config("synthetic.min_size", "need 0 < min_size <= max_size"));
        }
        // the widest box must fit inside the shorter side
        if self.max_size * MAX_ASPECT.sqrt() > f64::from(SHORTER_SIDE) {
            return Err(Error::config(
                "synthetic.max_size",
                format!("boxes above {:.0} px do not fit the images", f64::from(SHORTER_SIDE) / MAX_ASPECT.sqrt()),
            ));
        }
        Ok(())
    }
}

/// Parses `key=value` pairs separated by commas, e.g.
/// `seed=7,images=1000,boxes=6,min=16,max=512,categories=80`. Missing keys
/// keep their defaults.
impl FromStr for SyntheticSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = SyntheticSpec::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::config("synthetic", format!("expected key=value, got `{part}`")))?;
            let bad = |e: &dyn std::fmt::Display| Error::config(format!("synthetic.{key}"), e.to_string());
            match key.trim() {
                "seed" => spec.seed = value.parse().map_err(|e| bad(&e))?,
                "images" => spec.images = value.parse().map_err(|e| bad(&e))?,
                "boxes" => spec.boxes_per_image = value.parse().map_err(|e| bad(&e))?,
                "min" => spec.min_size = value.parse().map_err(|e| bad(&e))?,
                "max" => spec.max_size = value.parse().map_err(|e| bad(&e))?,
                "categories" => spec.categories = value.parse().map_err(|e| bad(&e))?,
                other => return Err(Error::config("synthetic", format!("unknown key `{other}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.random_range(lo.ln()..hi.ln()).exp()
}

pub fn synthesize(spec: &SyntheticSpec) -> Result<CocoFile> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut images = Vec::with_capacity(spec.images);
    let mut annotations = Vec::with_capacity(spec.images * spec.boxes_per_image);

    for i in 0..spec.images {
        let longer = rng.random_range(SHORTER_SIDE..=MAX_LONGER_SIDE);
        let (width, height) = if rng.random_bool(0.5) {
            (longer, SHORTER_SIDE)
        } else {
            (SHORTER_SIDE, longer)
        };
        let id = i as u64 + 1;
        images.push(CocoImage {
            id,
            width,
            height,
            file_name: Some(format!("synthetic_{id:06}.jpg")),
        });
        for _ in 0..spec.boxes_per_image {
            let size = log_uniform(&mut rng, spec.min_size, spec.max_size);
            let aspect = log_uniform(&mut rng, 1.0 / MAX_ASPECT, MAX_ASPECT).sqrt();
            let w = size * aspect;
            let h = size / aspect;
            let x = rng.random_range(0.0..=f64::from(width) - w);
            let y = rng.random_range(0.0..=f64::from(height) - h);
            annotations.push(CocoAnnotation {
                id: annotations.len() as u64 + 1,
                image_id: id,
                bbox: [x, y, w, h],
                category_id: rng.random_range(1..=spec.categories),
                iscrowd: false,
            });
        }
    }

    let categories = (1..=spec.categories)
        .map(|id| CocoCategory {
            id,
            name: format!("class_{id}"),
            supercategory: None,
        })
        .collect();
    Ok(CocoFile {
        images,
        annotations,
        categories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_spec() {
        let s: SyntheticSpec = "seed=3, images=10,boxes=2".parse().unwrap();
        assert_eq!(s.seed, 3);
        assert_eq!(s.images, 10);
        assert_eq!(s.boxes_per_image, 2);
        assert_eq!(s.max_size, 512.0);
        assert!("seed".parse::<SyntheticSpec>().is_err());
        assert!("colour=red".parse::<SyntheticSpec>().is_err());
        assert!("images=0".parse::<SyntheticSpec>().is_err());
        assert!("max=1000".parse::<SyntheticSpec>().is_err());
    }

    #[test]
    fn seeded_and_in_bounds() {
        let spec = SyntheticSpec {
            images: 20,
            ..Default::default()
        };
        let a = synthesize(&spec).unwrap();
        assert_eq!(a, synthesize(&spec).unwrap());
        assert_ne!(a, synthesize(&SyntheticSpec { seed: 1, ..spec }).unwrap());
        assert_eq!(a.annotations.len(), 20 * 6);
        for ann in &a.annotations {
            let img = &a.images[ann.image_id as usize - 1];
            let [x, y, w, h] = ann.bbox;
            assert!(x >= 0.0 && y >= 0.0);
            assert!(x + w <= f64::from(img.width) + 1e-9);
            assert!(y + h <= f64::from(img.height) + 1e-9);
            let size = (w * h).sqrt();
            assert!((16.0 - 1e-9..=512.0 + 1e-9).contains(&size));
        }
    }
}
