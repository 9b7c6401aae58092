use super::{
    claim_min, labels_from_claims, max_side_distance, select_candidates, AssignmentResult,
    AtssConfig, GroundTruth, GtDiagnostics, ScaleRangeConfig, Strategy,
};
use crate::pyramid::AnchorSet;

/// ATSS candidate selection followed by the FCOS scale-range filter.
///
/// A candidate is positive when its center lies inside the ground truth and
/// the largest side distance falls in its level's range. Ambiguous anchors
/// go to the smallest-area ground truth, as in the spatial/scale strategy.
pub fn assign_center_sampling(
    anchors: &AnchorSet,
    gts: &[GroundTruth],
    cfg: &AtssConfig,
    ranges: &ScaleRangeConfig,
) -> AssignmentResult {
    let centers = anchors.centers();
    let mut claims = vec![None; anchors.len()];
    let mut diagnostics = Vec::with_capacity(gts.len());

    for (g, gt) in gts.iter().enumerate() {
        let (candidates, per_level) = select_candidates(anchors, gt.bbox.center(), cfg.k);
        let area = gt.bbox.area();
        let mut start = 0;
        for (level, &n) in per_level.iter().enumerate() {
            for &a in &candidates[start..start + n] {
                let p = &centers[a];
                if gt.bbox.contains(p) && ranges.accepts(level, max_side_distance(&gt.bbox, p.x, p.y)) {
                    claim_min(&mut claims[a], g, area);
                }
            }
            start += n;
        }
        diagnostics.push(GtDiagnostics {
            num_candidates: candidates.len(),
            candidates,
            candidates_per_level: per_level,
            ..GtDiagnostics::empty(g)
        });
    }

    AssignmentResult::finish(
        Strategy::CenterSampling,
        anchors,
        labels_from_claims(claims),
        diagnostics,
    )
}
