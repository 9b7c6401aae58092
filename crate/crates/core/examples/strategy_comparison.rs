//! The four strategies side by side on one image, then positive-set
//! agreement over a small synthetic corpus.

use atss::prelude::*;

fn main() -> atss::Result<()> {
    let anchors = generate_anchors(800, 800, &PyramidConfig::default())?;
    let gts = [
        GroundTruth::new(0, BBox::new(40., 40., 72., 64.), 1),
        GroundTruth::new(1, BBox::new(200., 150., 500., 600.), 1),
    ];
    println!("{:<16} {:>10} {:>8} {:>8}", "strategy", "positives", "ignored", "per gt");
    for s in Strategy::ALL {
        let r = assign(&anchors, &gts, &StrategyConfig::new(s));
        let per_gt: Vec<usize> = r.gts.iter().map(|d| d.num_positives).collect();
        println!("{:<16} {:>10} {:>8} {:>8?}", s.name(), r.num_positives(), r.num_ignored(), per_gt);
    }

    let spec: SyntheticSpec = "seed=3,images=50".parse()?;
    let images = CocoDataset::from_coco(synthesize(&spec)?)?.resized(&ResizePolicy::default()).images;
    let configs: Vec<StrategyConfig> = Strategy::ALL.iter().map(|&s| StrategyConfig::new(s)).collect();
    let cmp = compare_strategies(&images, &PyramidConfig::default(), &configs)?;
    println!();
    for p in &cmp.pairs {
        println!("{:<16} vs {:<16} jaccard {:.3}", p.a.name(), p.b.name(), p.mean_jaccard);
    }
    Ok(())
}
