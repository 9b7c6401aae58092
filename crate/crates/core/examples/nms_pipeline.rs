//! Inference post-processing: score floor, per-level top-k, per-class greedy
//! suppression and a final cap.

use atss::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    // Clusters of jittered boxes around a few objects.
    let objects = [BBox::new(50., 50., 150., 200.), BBox::new(300., 100., 420., 180.)];
    let mut dets = Vec::new();
    for (cat, obj) in objects.iter().enumerate() {
        for level in 0..3 {
            for _ in 0..20 {
                let j = |r: &mut ChaCha8Rng| r.random_range(-12.0..12.0);
                let b = BBox::new(obj.x1 + j(&mut rng), obj.y1 + j(&mut rng), obj.x2 + j(&mut rng), obj.y2 + j(&mut rng));
                dets.push(Detection::new(b, rng.random_range(0.0..1.0), cat as u32).with_level(level));
            }
        }
    }

    let cfg = NmsConfig::default();
    let kept = nms(&dets, &cfg);
    println!("{} detections -> {} kept with {cfg:?}", dets.len(), kept.len());
    for d in &kept {
        println!("  class {} score {:.3} {:?}", d.category, d.score, d.bbox);
    }

    let strict = NmsConfig { iou_threshold: 0.3, ..cfg };
    println!("iou threshold 0.3 keeps {}", nms(&dets, &strict).len());
}
