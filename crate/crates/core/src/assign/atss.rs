use super::{
    claim_max, labels_from_claims, select_candidates, AssignmentResult, AtssConfig, GroundTruth,
    GtDiagnostics, Strategy, ThresholdStats,
};
use crate::geometry::iou;
use crate::pyramid::AnchorSet;

/// Adaptive training sample selection.
///
/// For each ground truth `g`: take the `k` anchors per level whose centers
/// are closest to the center of `g`, compute their IoUs with `g`, and set the
/// threshold `t_g = mean + std` (population std). Candidates with
/// `IoU >= t_g` whose center lies inside `g` are positive. An anchor claimed
/// by several ground truths goes to the one it overlaps most; every other
/// anchor is negative, so no anchor is ever ignored.
pub fn assign_atss(anchors: &AnchorSet, gts: &[GroundTruth], cfg: &AtssConfig) -> AssignmentResult {
    let boxes = anchors.boxes();
    let centers = anchors.centers();
    let mut claims = vec![None; anchors.len()];
    let mut diagnostics = Vec::with_capacity(gts.len());

    for (g, gt) in gts.iter().enumerate() {
        let (candidates, per_level) = select_candidates(anchors, gt.bbox.center(), cfg.k);
        let ious: Vec<f64> = candidates.iter().map(|&a| iou(&boxes[a], &gt.bbox)).collect();
        let stats = ThresholdStats::from_ious(&ious);

        if let Some(stats) = stats {
            for (&a, &v) in candidates.iter().zip(&ious) {
                if v >= stats.threshold && gt.bbox.contains(&centers[a]) {
                    claim_max(&mut claims[a], g, v);
                }
            }
        }

        diagnostics.push(GtDiagnostics {
            num_candidates: candidates.len(),
            candidates,
            candidates_per_level: per_level,
            candidate_ious: ious,
            stats,
            ..GtDiagnostics::empty(g)
        });
    }

    AssignmentResult::finish(Strategy::Atss, anchors, labels_from_claims(claims), diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::Label;
    use crate::geometry::BBox;
    use crate::pyramid::{generate_anchors, PyramidConfig};

    #[test]
    fn empty_gts_all_negative() {
        let set = generate_anchors(64, 64, &PyramidConfig::default()).unwrap();
        let r = assign_atss(&set, &[], &AtssConfig::default());
        assert!(r.labels.iter().all(|l| *l == Label::Negative));
        assert!(r.gts.is_empty());
    }

    #[test]
    fn candidate_budget_is_k_per_level() {
        let set = generate_anchors(800, 1067, &PyramidConfig::default()).unwrap();
        let gt = GroundTruth::new(0, BBox::new(300., 300., 420., 380.), 1);
        let r = assign_atss(&set, &[gt], &AtssConfig::default());
        assert_eq!(r.gts[0].candidates.len(), 45);
        assert_eq!(r.gts[0].candidates_per_level, vec![9; 5]);
        assert!(r.gts[0].num_positives > 0);
        assert_eq!(r.num_ignored(), 0);
    }

    #[test]
    fn positives_meet_threshold_and_center() {
        let set = generate_anchors(256, 256, &PyramidConfig::square(&[8, 16, 32], 8.0)).unwrap();
        let gts = [
            GroundTruth::new(0, BBox::new(10., 20., 90., 70.), 0),
            GroundTruth::new(1, BBox::new(40., 30., 200., 230.), 0),
        ];
        let r = assign_atss(&set, &gts, &AtssConfig::default());
        for (a, g) in r.positives() {
            let t = r.gts[g].stats.unwrap().threshold;
            assert!(iou(&set.boxes()[a], &gts[g].bbox) >= t);
            assert!(gts[g].bbox.contains(&set.centers()[a]));
        }
    }
}
