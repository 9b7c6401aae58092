//! Anchor layout of the default five-level pyramid, and of a three-ratio
//! variant, on a 1067x800 image.

use atss::prelude::*;

fn describe(name: &str, set: &AnchorSet) {
    println!("{name}: {} anchors", set.len());
    for grid in set.levels() {
        let first = set.boxes()[grid.offset];
        println!(
            "  stride {:>3}: {:>3}x{:<3} locations x {} templates = {:>6}  first {:?}",
            grid.stride,
            grid.cols,
            grid.rows,
            grid.templates,
            grid.len(),
            first
        );
    }
}

fn main() -> atss::Result<()> {
    let square = generate_anchors(1067, 800, &PyramidConfig::default())?;
    describe("one square anchor per location", &square);

    let cfg = PyramidConfig::default().with_aspect_ratios(&[0.5, 1.0, 2.0]);
    let ratios = generate_anchors(1067, 800, &cfg)?;
    describe("\nthree aspect ratios", &ratios);

    let i = ratios.levels()[2].offset + 7;
    println!("\nanchor {i} is at {:?}", ratios.locate(i));
    Ok(())
}
