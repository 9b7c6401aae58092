use crate::geometry::Point;
use crate::pyramid::AnchorSet;
use std::cmp::Ordering;

/// Top-k anchors per level closest to `center` by L2 distance between centers.
///
/// Returns the selected global indices (level by level, nearest first) and the
/// number taken from each level. Equal distances prefer the lower anchor
/// index; a level with fewer than `k` anchors contributes all of them.
pub fn select_candidates(anchors: &AnchorSet, center: Point, k: usize) -> (Vec<usize>, Vec<usize>) {
    let mut selected = Vec::with_capacity(k * anchors.num_levels());
    let mut per_level = Vec::with_capacity(anchors.num_levels());
    let centers = anchors.centers();
    let mut scratch: Vec<(f64, usize)> = Vec::new();

    for grid in anchors.levels() {
        let take = k.min(grid.len());
        // Templates at one location share a center, so rank locations and
        // expand; within a location template order is index order.
        let locations = take.div_ceil(grid.templates);
        scratch.clear();
        scratch.extend((0..grid.locations()).map(|loc| {
            let c = &centers[grid.offset + loc * grid.templates];
            (c.distance_squared(&center), loc)
        }));
        let cmp = |a: &(f64, usize), b: &(f64, usize)| {
            a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1))
        };
        if locations < scratch.len() {
            scratch.select_nth_unstable_by(locations, cmp);
            scratch.truncate(locations);
        }
        scratch.sort_unstable_by(cmp);

        let before = selected.len();
        'outer: for &(_, loc) in scratch.iter() {
            for t in 0..grid.templates {
                if selected.len() - before == take {
                    break 'outer;
                }
                selected.push(grid.offset + loc * grid.templates + t);
            }
        }
        per_level.push(selected.len() - before);
    }
    (selected, per_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pyramid::{generate_anchors, PyramidConfig};

    #[test]
    fn takes_whole_level_when_small() {
        let set = generate_anchors(32, 32, &PyramidConfig::square(&[8, 16], 8.0)).unwrap();
        let (idx, per_level) = select_candidates(&set, Point::new(16.0, 16.0), 9);
        assert_eq!(per_level, vec![9, 4]);
        assert_eq!(idx.len(), 13);
    }

    #[test]
    fn ties_prefer_lower_index() {
        // center (16,16) is equidistant from the four stride-8 centers around it
        let set = generate_anchors(32, 32, &PyramidConfig::square(&[8], 8.0)).unwrap();
        let (idx, _) = select_candidates(&set, Point::new(16.0, 16.0), 2);
        assert_eq!(idx, vec![5, 6]);
    }

    #[test]
    fn multiple_templates_expand_in_order() {
        let cfg = PyramidConfig::square(&[8], 8.0).with_aspect_ratios(&[0.5, 1.0, 2.0]);
        let set = generate_anchors(32, 32, &cfg).unwrap();
        let (idx, _) = select_candidates(&set, Point::new(4.0, 4.0), 4);
        assert_eq!(idx, vec![0, 1, 2, 3]);
    }
}
