use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("annotation {annotation_id} references unknown image id {image_id}")]
    UnknownImage { annotation_id: u64, image_id: u64 },
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("invalid config `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("anchor box has non-positive width or height: {0:?}")]
    DegenerateAnchor(crate::geometry::BBox),
    #[error("point ({x}, {y}) lies outside the target box")]
    PointOutsideBox { x: f64, y: f64 },
    #[error("assignment results cover different anchor sets ({left} vs {right} anchors)")]
    MismatchedAnchors { left: usize, right: usize },
    #[error("unknown sweep parameter `{0}` (expected k, anchor_scale or aspect_ratio)")]
    UnknownSweepParam(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
