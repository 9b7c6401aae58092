//! Training-sample assignment for dense object detectors.
//!
//! The crate implements and compares the ways anchor-based and anchor-free
//! detectors decide which anchors are positive, negative or ignored:
//! IoU thresholding, spatial/scale constraints on anchor points, adaptive
//! training sample selection (ATSS) and its center-sampling variant. Around
//! that core sit box geometry and NMS, feature-pyramid anchor generation,
//! regression-target codecs, COCO ingestion and statistics reports.
//!
//! ```
//! use atss::prelude::*;
//!
//! let anchors = generate_anchors(640, 480, &PyramidConfig::default()).unwrap();
//! let gts = [GroundTruth::new(0, BBox::new(100.0, 80.0, 260.0, 200.0), 1)];
//! let result = assign_atss(&anchors, &gts, &AtssConfig::default());
//! assert!(result.gts[0].num_positives > 0);
//! ```

pub mod assign;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod pyramid;
pub mod report;
pub mod targets;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::assign::{
        assign, assign_atss, assign_center_sampling, assign_iou, assign_spatial_scale,
        AssignmentResult, AtssConfig, GroundTruth, IouAssignConfig, Label, ScaleRangeConfig,
        Strategy, StrategyConfig,
    };
    pub use crate::geometry::{giou, iou, nms, BBox, Detection, NmsConfig, Point};
    pub use crate::ingest::{load_coco, resize_gt, synthesize, CocoDataset, DatasetImage, ResizePolicy, SyntheticSpec};
    pub use crate::pyramid::{generate_anchors, AnchorSet, LevelSpec, PyramidConfig};
    pub use crate::report::{
        assign_dataset, compare_strategies, report_dataset, run_sweep, summarize,
        AssignmentReport, ExperimentConfig, SweepParam, SweepTable,
    };
    pub use crate::targets::{
        decode_box_offsets, decode_point_distances, encode_box_offsets, encode_point_distances,
        BoxDelta, DistanceTarget,
    };
}
