use super::{
    claim_min, labels_from_claims, max_side_distance, AssignmentResult, GroundTruth,
    GtDiagnostics, ScaleRangeConfig, Strategy,
};
use crate::pyramid::AnchorSet;

/// Spatial and scale constraints on anchor points.
///
/// An anchor point inside a ground-truth box (boundary inclusive) is a
/// candidate; it becomes positive when the largest of its four side distances
/// lies in its level's range. A point qualifying for several ground truths is
/// given to the smallest one. Everything else is negative.
pub fn assign_spatial_scale(
    anchors: &AnchorSet,
    gts: &[GroundTruth],
    ranges: &ScaleRangeConfig,
) -> AssignmentResult {
    let centers = anchors.centers();
    let mut claims = vec![None; anchors.len()];
    let mut diagnostics: Vec<GtDiagnostics> = (0..gts.len()).map(GtDiagnostics::empty).collect();

    for (level, grid) in anchors.levels().iter().enumerate() {
        for a in grid.range() {
            let p = &centers[a];
            for (g, gt) in gts.iter().enumerate() {
                if !gt.bbox.contains(p) {
                    continue;
                }
                diagnostics[g].num_candidates += 1;
                if ranges.accepts(level, max_side_distance(&gt.bbox, p.x, p.y)) {
                    claim_min(&mut claims[a], g, gt.bbox.area());
                }
            }
        }
    }

    AssignmentResult::finish(
        Strategy::SpatialScale,
        anchors,
        labels_from_claims(claims),
        diagnostics,
    )
}
