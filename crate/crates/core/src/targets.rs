//! Regression-target codecs for the two regression starting points: an
//! anchor box (four offsets) and an anchor point (four side distances).

use crate::error::{Error, Result};
use crate::geometry::{BBox, Point};
use serde::{Deserialize, Serialize};

/// Center offsets normalized by anchor size, and log size ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxDelta {
    pub dx: f64,
    pub dy: f64,
    pub dw: f64,
    pub dh: f64,
}

/// Distances from an anchor point to the left, top, right and bottom sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceTarget {
    pub l: f64,
    pub t: f64,
    pub r: f64,
    pub b: f64,
}

impl DistanceTarget {
    pub fn max(&self) -> f64 {
        self.l.max(self.t).max(self.r).max(self.b)
    }
}

fn check_positive(b: &BBox) -> Result<()> {
    if b.width() > 0.0 && b.height() > 0.0 && b.is_valid() {
        Ok(())
    } else {
        Err(Error::DegenerateAnchor(*b))
    }
}

pub fn encode_box_offsets(anchor: &BBox, gt: &BBox) -> Result<BoxDelta> {
    check_positive(anchor)?;
    check_positive(gt)?;
    let (a, g) = (anchor.center(), gt.center());
    let (aw, ah) = (anchor.width(), anchor.height());
    Ok(BoxDelta {
        dx: (g.x - a.x) / aw,
        dy: (g.y - a.y) / ah,
        dw: (gt.width() / aw).ln(),
        dh: (gt.height() / ah).ln(),
    })
}

pub fn decode_box_offsets(anchor: &BBox, delta: &BoxDelta) -> Result<BBox> {
    check_positive(anchor)?;
    let (aw, ah) = (anchor.width(), anchor.height());
    let a = anchor.center();
    let center = Point::new(a.x + delta.dx * aw, a.y + delta.dy * ah);
    Ok(BBox::from_center(center, aw * delta.dw.exp(), ah * delta.dh.exp()))
}

/// Side distances of a point inside `gt` (boundary inclusive).
pub fn encode_point_distances(point: &Point, gt: &BBox) -> Result<DistanceTarget> {
    if !gt.contains(point) {
        return Err(Error::PointOutsideBox {
            x: point.x,
            y: point.y,
        });
    }
    Ok(DistanceTarget {
        l: point.x - gt.x1,
        t: point.y - gt.y1,
        r: gt.x2 - point.x,
        b: gt.y2 - point.y,
    })
}

pub fn decode_point_distances(point: &Point, d: &DistanceTarget) -> BBox {
    BBox::new(point.x - d.l, point.y - d.t, point.x + d.r, point.y + d.b)
}
