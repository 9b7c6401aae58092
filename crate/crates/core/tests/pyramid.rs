use atss::pyramid::{generate_anchors, PyramidConfig};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = PyramidConfig> {
    (
        prop::sample::subsequence(vec![4u32, 8, 16, 32, 64, 128], 1..=5),
        1.0..10.0f64,
        prop::sample::subsequence(vec![0.25, 0.5, 1.0, 2.0, 4.0], 1..=3),
        1u32..=3,
    )
        .prop_map(|(strides, m, ratios, spo)| {
            PyramidConfig::square(&strides, m)
                .with_aspect_ratios(&ratios)
                .with_scales_per_octave(spo)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_counts_and_index_bijection(w in 1u32..300, h in 1u32..300, cfg in config()) {
        let set = generate_anchors(w, h, &cfg).unwrap();
        let mut expected_total = 0;
        for (grid, spec) in set.levels().iter().zip(&cfg.levels) {
            let s = spec.stride;
            let n = w.div_ceil(s) as usize * h.div_ceil(s) as usize * spec.templates_per_location();
            prop_assert_eq!(grid.len(), n);
            prop_assert_eq!(grid.offset, expected_total);
            expected_total += n;
        }
        prop_assert_eq!(set.len(), expected_total);
        for i in 0..set.len() {
            prop_assert_eq!(set.index_of(set.locate(i)), Some(i));
        }
    }

    #[test]
    fn centers_lie_on_the_padded_grid(w in 1u32..300, h in 1u32..300, cfg in config()) {
        let set = generate_anchors(w, h, &cfg).unwrap();
        for (i, c) in set.centers().iter().enumerate() {
            let at = set.locate(i);
            let s = f64::from(set.levels()[at.level].stride);
            prop_assert_eq!(c.x, (at.col as f64 + 0.5) * s);
            prop_assert_eq!(c.y, (at.row as f64 + 0.5) * s);
            prop_assert!(c.x < f64::from(w.div_ceil(s as u32)) * s);
            prop_assert!(c.y < f64::from(h.div_ceil(s as u32)) * s);
            let bc = set.boxes()[i].center();
            prop_assert!((bc.x - c.x).abs() < 1e-9 && (bc.y - c.y).abs() < 1e-9);
        }
    }

    #[test]
    fn template_areas_match_within_a_scale(cfg in config()) {
        let set = generate_anchors(64, 64, &cfg).unwrap();
        for (grid, spec) in set.levels().iter().zip(&cfg.levels) {
            let r = spec.aspect_ratios.len();
            let first = &set.boxes()[grid.offset..grid.offset + grid.templates];
            for scale in first.chunks(r) {
                let a0 = scale[0].area();
                for b in scale {
                    prop_assert!((b.area() - a0).abs() / a0 < 1e-6);
                }
            }
        }
    }
}

#[test]
fn centers_inside_image_when_dims_are_stride_multiples() {
    let set = generate_anchors(640, 512, &PyramidConfig::default()).unwrap();
    assert!(set
        .centers()
        .iter()
        .all(|c| c.x > 0.0 && c.x < 640.0 && c.y > 0.0 && c.y < 512.0));
}

#[test]
fn square_anchors_have_side_m_times_stride() {
    let set = generate_anchors(333, 517, &PyramidConfig::default()).unwrap();
    for (i, b) in set.boxes().iter().enumerate() {
        let s = f64::from(set.levels()[set.locate(i).level].stride);
        assert_eq!(b.width(), 8.0 * s);
        assert_eq!(b.height(), 8.0 * s);
    }
}
