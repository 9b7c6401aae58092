//! ATSS on one image, with the per-object candidate statistics behind each
//! adaptive threshold.

use atss::prelude::*;

fn main() -> atss::Result<()> {
    let anchors = generate_anchors(1067, 800, &PyramidConfig::default())?;
    let gts = [
        GroundTruth::new(0, BBox::new(100., 120., 140., 150.), 1),
        GroundTruth::new(1, BBox::new(300., 200., 620., 560.), 2),
        GroundTruth::new(2, BBox::new(500., 400., 580., 700.), 3),
    ];
    let result = assign_atss(&anchors, &gts, &AtssConfig::default());

    for d in &result.gts {
        let s = d.stats.expect("every object has candidates");
        println!(
            "gt {}: {} candidates {:?}, mean {:.3} std {:.3} threshold {:.3}, {} positives",
            d.gt, d.num_candidates, d.candidates_per_level, s.mean, s.std, s.threshold, d.num_positives
        );
    }
    println!("positives per level: {:?}", result.positives_per_level());
    for (a, g) in result.positives().take(5) {
        println!("  anchor {a} ({:?}) -> gt {g}", anchors.locate(a));
    }

    let record = serde_json::to_string(&result.to_record()).expect("serializes");
    println!("record: {} bytes of JSON", record.len());
    Ok(())
}
