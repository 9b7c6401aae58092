//! Loads a COCO instances file, applies the 800/1333 resize and prints the
//! load accounting.
//!
//! `cargo run --example coco_ingest -- path/to/instances.json`

use atss::prelude::*;

fn main() -> atss::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/coco_fixture.json").to_string()
    });
    let ds = load_coco(&path)?;
    let s = ds.stats;
    println!(
        "{path}\n{} images, {} categories, {} annotations: {} crowd and {} degenerate dropped, {} kept",
        s.images, s.categories, s.raw_annotations, s.crowd_dropped, s.degenerate_dropped, s.loaded_gts
    );

    let ds = ds.resized(&ResizePolicy::default());
    for img in ds.images.iter().take(5) {
        println!(
            "image {}: {}x{} -> {}x{} (x{:.4}), {} boxes",
            img.id, img.original_width, img.original_height, img.width, img.height, img.scale, img.gts.len()
        );
    }
    Ok(())
}
