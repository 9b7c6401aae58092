//! Sweeps the ATSS candidate count k over a synthetic corpus and prints the
//! sweep table.

use atss::prelude::*;
use atss::report::sweep_text;

fn main() -> atss::Result<()> {
    let spec: SyntheticSpec = "seed=0,images=200".parse()?;
    let images = CocoDataset::from_coco(synthesize(&spec)?)?.resized(&ResizePolicy::default()).images;
    let base = ExperimentConfig::new(PyramidConfig::default(), StrategyConfig::new(Strategy::Atss));
    let values: Vec<String> = (3..=19).step_by(2).map(|k: usize| k.to_string()).collect();
    let table = run_sweep(&images, &base, SweepParam::K, &values)?;
    print!("{}", sweep_text(&table));
    Ok(())
}
