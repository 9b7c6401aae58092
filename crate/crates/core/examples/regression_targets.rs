//! Box-offset and point-distance regression targets, encoded and decoded.

use atss::prelude::*;

fn main() -> atss::Result<()> {
    let anchor = BBox::from_center(Point::new(64., 64.), 64., 64.);
    let gt = BBox::new(40., 30., 120., 90.);

    let delta = encode_box_offsets(&anchor, &gt)?;
    println!("anchor {anchor:?}\ngt     {gt:?}");
    println!("offsets {delta:?}");
    println!("decoded {:?}", decode_box_offsets(&anchor, &delta)?);

    let p = anchor.center();
    let dist = encode_point_distances(&p, &gt)?;
    println!("\ndistances from ({}, {}): {dist:?}, max {}", p.x, p.y, dist.max());
    println!("decoded {:?}", decode_point_distances(&p, &dist));

    match encode_point_distances(&Point::new(10., 10.), &gt) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\noutside point: {e}"),
    }
    Ok(())
}
