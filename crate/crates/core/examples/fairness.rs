//! Positives per ground truth by object scale, for all four strategies, on a
//! seeded synthetic corpus.
//!
//! `cargo run --release --example fairness -- [images]`

use atss::prelude::*;

fn main() -> atss::Result<()> {
    let images = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1000);
    let spec = SyntheticSpec {
        seed: 7,
        images,
        ..SyntheticSpec::default()
    };
    let dataset = CocoDataset::from_coco(synthesize(&spec)?)?.resized(&ResizePolicy::default());
    println!("{} images, {} ground truths\n", dataset.images.len(), dataset.num_gts());

    print!("{:<16} {:>8} {:>6}", "strategy", "mean", "zero%");
    for lo in [16.0, 32.0, 64.0, 128.0, 256.0] {
        print!(" {:>9}", format!("{lo}-{}", lo * 2.0));
    }
    println!();
    for strategy in Strategy::ALL {
        let cfg = ExperimentConfig::new(PyramidConfig::default(), StrategyConfig::new(strategy));
        let report = report_dataset(&dataset.images, &cfg)?;
        print!(
            "{:<16} {:>8.3} {:>6.2}",
            strategy.name(),
            report.positives_per_gt.mean,
            100.0 * report.zero_positive_fraction
        );
        for lo in [16.0, 32.0, 64.0, 128.0, 256.0] {
            print!(" {:>9.3}", report.bucket_mean(lo).unwrap_or(0.0));
        }
        println!();
    }
    Ok(())
}
