//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here is written directly from the definitions with naive loops
//! and full sorts. None of it calls into the library's geometry or assignment
//! code; it only reads anchor boxes, centers and level sizes.

#![allow(dead_code, clippy::needless_range_loop)]

use atss::assign::{GroundTruth, Label};
use atss::geometry::{BBox, Detection};
use atss::pyramid::{generate_anchors, AnchorSet, PyramidConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn oracle_iou(a: &BBox, b: &BBox) -> f64 {
    let ix = (a.x2.min(b.x2) - a.x1.max(b.x1)).max(0.0);
    let iy = (a.y2.min(b.y2) - a.y1.max(b.y1)).max(0.0);
    let inter = ix * iy;
    if inter == 0.0 {
        return 0.0;
    }
    let area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
    let area_b = (b.x2 - b.x1) * (b.y2 - b.y1);
    inter / (area_a + area_b - inter)
}

fn inside(b: &BBox, x: f64, y: f64) -> bool {
    b.x1 <= x && x <= b.x2 && b.y1 <= y && y <= b.y2
}

fn level_ranges(anchors: &AnchorSet) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    anchors
        .level_sizes()
        .into_iter()
        .map(|n| {
            let r = start..start + n;
            start += n;
            r
        })
        .collect()
}

/// Top-k per level by exhaustive sort on (distance, index).
pub fn oracle_candidates(anchors: &AnchorSet, gt: &BBox, k: usize) -> Vec<Vec<usize>> {
    let gx = (gt.x1 + gt.x2) / 2.0;
    let gy = (gt.y1 + gt.y2) / 2.0;
    level_ranges(anchors)
        .into_iter()
        .map(|range| {
            let mut all: Vec<(f64, usize)> = range
                .map(|i| {
                    let c = anchors.centers()[i];
                    (((c.x - gx).powi(2) + (c.y - gy).powi(2)).sqrt(), i)
                })
                .collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            all.into_iter().take(k).map(|(_, i)| i).collect()
        })
        .collect()
}

pub struct OracleAtssGt {
    pub candidates: Vec<usize>,
    pub ious: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub threshold: f64,
}

pub fn oracle_atss(anchors: &AnchorSet, gts: &[GroundTruth], k: usize) -> (Vec<Label>, Vec<OracleAtssGt>) {
    let n = anchors.len();
    // claims[a] = list of (gt, iou)
    let mut claims: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut per_gt = Vec::new();
    for (g, gt) in gts.iter().enumerate() {
        let candidates: Vec<usize> = oracle_candidates(anchors, &gt.bbox, k).concat();
        let ious: Vec<f64> = candidates
            .iter()
            .map(|&a| oracle_iou(&anchors.boxes()[a], &gt.bbox))
            .collect();
        let count = ious.len() as f64;
        let mean = ious.iter().sum::<f64>() / count;
        let mut sq = 0.0;
        for v in &ious {
            sq += (v - mean) * (v - mean);
        }
        let std = (sq / count).sqrt();
        let threshold = mean + std;
        for (&a, &v) in candidates.iter().zip(&ious) {
            let c = anchors.centers()[a];
            if v >= threshold && inside(&gt.bbox, c.x, c.y) {
                claims[a].push((g, v));
            }
        }
        per_gt.push(OracleAtssGt {
            candidates,
            ious,
            mean,
            std,
            threshold,
        });
    }
    let labels = claims
        .into_iter()
        .map(|cs| {
            let mut best: Option<(usize, f64)> = None;
            for (g, v) in cs {
                if best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((g, v));
                }
            }
            best.map_or(Label::Negative, |(g, _)| Label::Positive(g))
        })
        .collect();
    (labels, per_gt)
}

pub fn oracle_iou_assign(
    anchors: &AnchorSet,
    gts: &[GroundTruth],
    theta_p: f64,
    theta_n: f64,
    force: bool,
) -> Vec<Label> {
    let n = anchors.len();
    let m: Vec<Vec<f64>> = anchors
        .boxes()
        .iter()
        .map(|a| gts.iter().map(|g| oracle_iou(a, &g.bbox)).collect())
        .collect();
    // forced[a] = gts whose best anchor is a
    let mut forced: Vec<Vec<usize>> = vec![Vec::new(); n];
    if force {
        for g in 0..gts.len() {
            let mut best = 0;
            for a in 1..n {
                if m[a][g] > m[best][g] {
                    best = a;
                }
            }
            if m[best][g] > 0.0 {
                forced[best].push(g);
            }
        }
    }
    (0..n)
        .map(|a| {
            let mut top: Option<(usize, f64)> = None;
            for g in 0..gts.len() {
                if top.is_none_or(|(_, v)| m[a][g] > v) {
                    top = Some((g, m[a][g]));
                }
            }
            let mut claimants = forced[a].clone();
            if let Some((g, v)) = top {
                if v > theta_p {
                    claimants.push(g);
                }
            }
            claimants.sort();
            let mut winner: Option<usize> = None;
            for g in claimants {
                if winner.is_none_or(|w| m[a][g] > m[a][w]) {
                    winner = Some(g);
                }
            }
            match (winner, top) {
                (Some(g), _) => Label::Positive(g),
                (None, Some((_, v))) if v >= theta_n => Label::Ignore,
                _ => Label::Negative,
            }
        })
        .collect()
}

fn in_range(bounds: &[f64], level: usize, d: f64) -> bool {
    level + 1 < bounds.len() && bounds[level] < d && d <= bounds[level + 1]
}

fn max_dist(b: &BBox, x: f64, y: f64) -> f64 {
    [x - b.x1, y - b.y1, b.x2 - x, b.y2 - y]
        .into_iter()
        .fold(f64::MIN, f64::max)
}

/// Picks the smallest-area claimant, earlier ground truth on ties.
fn smallest(gts: &[GroundTruth], claimants: &[usize]) -> Option<usize> {
    let area = |g: usize| (gts[g].bbox.x2 - gts[g].bbox.x1) * (gts[g].bbox.y2 - gts[g].bbox.y1);
    let mut best: Option<usize> = None;
    for &g in claimants {
        if best.is_none_or(|b| area(g) < area(b)) {
            best = Some(g);
        }
    }
    best
}

pub fn oracle_spatial_scale(anchors: &AnchorSet, gts: &[GroundTruth], bounds: &[f64]) -> Vec<Label> {
    let mut labels = vec![Label::Negative; anchors.len()];
    for (level, range) in level_ranges(anchors).into_iter().enumerate() {
        for a in range {
            let c = anchors.centers()[a];
            let claimants: Vec<usize> = (0..gts.len())
                .filter(|&g| inside(&gts[g].bbox, c.x, c.y))
                .filter(|&g| in_range(bounds, level, max_dist(&gts[g].bbox, c.x, c.y)))
                .collect();
            if let Some(g) = smallest(gts, &claimants) {
                labels[a] = Label::Positive(g);
            }
        }
    }
    labels
}

/// Candidate step of the ATSS oracle composed with the scale filter of the
/// spatial/scale oracle.
pub fn oracle_center_sampling(
    anchors: &AnchorSet,
    gts: &[GroundTruth],
    k: usize,
    bounds: &[f64],
) -> Vec<Label> {
    let mut claims: Vec<Vec<usize>> = vec![Vec::new(); anchors.len()];
    for (g, gt) in gts.iter().enumerate() {
        for (level, cands) in oracle_candidates(anchors, &gt.bbox, k).into_iter().enumerate() {
            for a in cands {
                let c = anchors.centers()[a];
                if inside(&gt.bbox, c.x, c.y) && in_range(bounds, level, max_dist(&gt.bbox, c.x, c.y)) {
                    claims[a].push(g);
                }
            }
        }
    }
    claims
        .iter()
        .map(|cs| smallest(gts, cs).map_or(Label::Negative, Label::Positive))
        .collect()
}

/// Greedy NMS written as a single loop over all remaining boxes.
pub fn oracle_nms(
    dets: &[Detection],
    iou_threshold: f64,
    score_floor: f64,
    pre_topk: usize,
    post_topk: usize,
) -> Vec<Detection> {
    let mut pool: Vec<usize> = Vec::new();
    let mut levels: Vec<Option<usize>> = dets.iter().map(|d| d.level).collect();
    levels.sort();
    levels.dedup();
    for level in levels {
        let mut idx: Vec<usize> = (0..dets.len())
            .filter(|&i| dets[i].level == level && dets[i].score > score_floor)
            .collect();
        idx.sort_by(|&a, &b| dets[b].score.partial_cmp(&dets[a].score).unwrap().then(a.cmp(&b)));
        pool.extend(idx.into_iter().take(pre_topk));
    }
    let mut kept = Vec::new();
    while !pool.is_empty() {
        let mut best = 0;
        for j in 1..pool.len() {
            let (a, b) = (pool[j], pool[best]);
            if dets[a].score > dets[b].score || (dets[a].score == dets[b].score && a < b) {
                best = j;
            }
        }
        let top = pool.remove(best);
        kept.push(top);
        pool.retain(|&j| {
            dets[j].category != dets[top].category || oracle_iou(&dets[j].bbox, &dets[top].bbox) <= iou_threshold
        });
    }
    kept.truncate(post_topk);
    kept.into_iter().map(|i| dets[i]).collect()
}

pub fn random_box(rng: &mut impl Rng, w: f64, h: f64, min_side: f64) -> BBox {
    let x1 = rng.random_range(0.0..w - min_side);
    let y1 = rng.random_range(0.0..h - min_side);
    let x2 = rng.random_range(x1 + min_side..=w);
    let y2 = rng.random_range(y1 + min_side..=h);
    BBox::new(x1, y1, x2, y2)
}

pub fn random_gts(rng: &mut impl Rng, w: u32, h: u32, max: usize) -> Vec<GroundTruth> {
    let n = rng.random_range(0..=max);
    (0..n)
        .map(|id| GroundTruth::new(id, random_box(rng, f64::from(w), f64::from(h), 2.0), rng.random_range(1..4)))
        .collect()
}

/// A random image of at most 128x128 with one or two pyramid levels and up
/// to five ground truths.
pub fn instance(seed: u64) -> (AnchorSet, Vec<GroundTruth>) {
    let mut r = rng(seed);
    let w = r.random_range(16..=128);
    let h = r.random_range(16..=128);
    let strides: &[u32] = match r.random_range(0..4) {
        0 => &[8],
        1 => &[8, 16],
        2 => &[16, 32],
        _ => &[4, 16],
    };
    let ratios: &[f64] = match r.random_range(0..3) {
        0 => &[1.0],
        1 => &[0.5, 1.0, 2.0],
        _ => &[0.25, 4.0],
    };
    let cfg = PyramidConfig::square(strides, r.random_range(1.0..9.0))
        .with_aspect_ratios(ratios)
        .with_scales_per_octave(r.random_range(1..=2));
    let anchors = generate_anchors(w, h, &cfg).unwrap();
    let gts = random_gts(&mut r, w, h, 5);
    (anchors, gts)
}

/// Scale bounds with one interval per level.
pub fn bounds_for(levels: usize) -> Vec<f64> {
    let mut b: Vec<f64> = (0..levels).map(|i| if i == 0 { 0.0 } else { 16.0 * f64::from(1 << i) }).collect();
    b.push(f64::INFINITY);
    b
}
