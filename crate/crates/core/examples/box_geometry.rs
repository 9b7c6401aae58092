//! IoU and GIoU for a few box pairs.

use atss::prelude::*;

fn main() {
    let a = BBox::new(0., 0., 10., 10.);
    let pairs = [
        ("identical", a),
        ("shifted by half", BBox::new(5., 0., 15., 10.)),
        ("contained", BBox::new(2., 2., 8., 8.)),
        ("touching", BBox::new(10., 0., 20., 10.)),
        ("far apart", BBox::new(30., 30., 40., 40.)),
    ];
    println!("{:<16} {:>8} {:>8}", "b", "iou", "giou");
    for (name, b) in pairs {
        println!("{name:<16} {:>8.4} {:>8.4}", iou(&a, &b), giou(&a, &b));
    }

    let c = a.center();
    println!("\ncenter of {a:?} is ({}, {}), area {}", c.x, c.y, a.area());
    println!("contains its own corner: {}", a.contains(&Point::new(10., 10.)));
}
