use super::{
    claim_max, AssignmentResult, Claim, GroundTruth, GtDiagnostics, IouAssignConfig, Label,
    Strategy,
};
use crate::geometry::iou;
use crate::pyramid::AnchorSet;

/// IoU-threshold assignment.
///
/// Each anchor follows its best-overlapping ground truth: above `theta_p` it
/// is positive, below `theta_n` negative, in between ignored. With
/// `force_best_match`, every ground truth's highest-IoU anchor is made
/// positive as well, overriding negative and ignore labels. When several
/// ground truths claim one anchor the highest IoU wins.
///
/// Ground truths that overlap no anchor at all are not forced.
pub fn assign_iou(anchors: &AnchorSet, gts: &[GroundTruth], cfg: &IouAssignConfig) -> AssignmentResult {
    let n = anchors.len();
    // best (gt, iou) per anchor
    let mut best: Vec<Option<Claim>> = vec![None; n];
    let mut diagnostics: Vec<GtDiagnostics> = (0..gts.len()).map(GtDiagnostics::empty).collect();
    // best (anchor, iou) per gt
    let mut argmax: Vec<Option<(usize, f64)>> = vec![None; gts.len()];

    for (g, gt) in gts.iter().enumerate() {
        for (a, anchor) in anchors.boxes().iter().enumerate() {
            let v = iou(anchor, &gt.bbox);
            if v > 0.0 {
                diagnostics[g].num_candidates += 1;
                if argmax[g].is_none_or(|(_, b)| v > b) {
                    argmax[g] = Some((a, v));
                }
            }
            claim_max(&mut best[a], g, v);
        }
    }

    let mut claims: Vec<Option<Claim>> = best
        .iter()
        .map(|b| b.filter(|c| c.key > cfg.theta_p))
        .collect();
    if cfg.force_best_match {
        for (g, m) in argmax.iter().enumerate() {
            if let Some((a, v)) = *m {
                claim_max(&mut claims[a], g, v);
            }
        }
    }

    let labels = claims
        .iter()
        .zip(&best)
        .map(|(claim, best)| match (claim, best) {
            (Some(c), _) => Label::Positive(c.gt),
            (None, Some(b)) if b.key >= cfg.theta_n => Label::Ignore,
            _ => Label::Negative,
        })
        .collect();

    AssignmentResult::finish(Strategy::Iou, anchors, labels, diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BBox;
    use crate::pyramid::{generate_anchors, PyramidConfig};

    #[test]
    fn identical_anchor_is_positive() {
        let set = generate_anchors(16, 16, &PyramidConfig::square(&[8], 2.0)).unwrap();
        let gt = GroundTruth::new(0, set.boxes()[3], 1);
        let r = assign_iou(&set, &[gt], &IouAssignConfig::default());
        assert_eq!(r.labels[3], Label::Positive(0));
    }

    #[test]
    fn best_anchor_forced_below_threshold() {
        // single 64x64 anchor centered at (4,4); GT overlapping it at IoU 0.3
        let set = generate_anchors(8, 8, &PyramidConfig::square(&[8], 8.0)).unwrap();
        let anchor = set.boxes()[0];
        // 64 wide, height h sharing the anchor top edge: IoU = h / 64
        let gt = BBox::new(anchor.x1, anchor.y1, anchor.x2, anchor.y1 + 0.3 * 64.0);
        assert!((iou(&anchor, &gt) - 0.3).abs() < 1e-12);
        let gts = [GroundTruth::new(0, gt, 1)];

        let r = assign_iou(&set, &gts, &IouAssignConfig::default());
        assert_eq!(r.labels[0], Label::Positive(0));

        let off = IouAssignConfig {
            force_best_match: false,
            ..Default::default()
        };
        let r = assign_iou(&set, &gts, &off);
        assert_eq!(r.labels[0], Label::Negative);
    }

    #[test]
    fn ignore_band() {
        let set = generate_anchors(8, 8, &PyramidConfig::square(&[8], 8.0)).unwrap();
        let anchor = set.boxes()[0];
        let gt = BBox::new(anchor.x1, anchor.y1, anchor.x2, anchor.y1 + 0.45 * 64.0);
        let cfg = IouAssignConfig {
            force_best_match: false,
            ..Default::default()
        };
        let r = assign_iou(&set, &[GroundTruth::new(0, gt, 1)], &cfg);
        assert_eq!(r.labels[0], Label::Ignore);
    }

    #[test]
    fn gt_without_overlap_is_not_forced() {
        let set = generate_anchors(8, 8, &PyramidConfig::square(&[8], 1.0)).unwrap();
        let gt = GroundTruth::new(0, BBox::new(100., 100., 110., 110.), 1);
        let r = assign_iou(&set, &[gt], &IouAssignConfig::default());
        assert_eq!(r.labels, vec![Label::Negative]);
        assert_eq!(r.gts[0].num_positives, 0);
    }
}
