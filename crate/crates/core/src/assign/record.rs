//! JSON form of an [`AssignmentResult`].
//!
//! Per-anchor labels are run-length encoded as spans of consecutive anchors
//! sharing a label:
//!
//! ```json
//! {"start": 0, "len": 412, "label": "negative"}
//! {"start": 412, "len": 1, "label": "positive", "gt": 0}
//! ```
//!
//! Per-GT diagnostics are written verbatim.

use super::{AssignmentResult, GtDiagnostics, Label, Strategy};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "label", rename_all = "lowercase")]
pub enum SpanLabel {
    Negative,
    Ignore,
    Positive { gt: usize },
}

impl From<Label> for SpanLabel {
    fn from(l: Label) -> Self {
        match l {
            Label::Negative => SpanLabel::Negative,
            Label::Ignore => SpanLabel::Ignore,
            Label::Positive(gt) => SpanLabel::Positive { gt },
        }
    }
}

impl From<SpanLabel> for Label {
    fn from(l: SpanLabel) -> Self {
        match l {
            SpanLabel::Negative => Label::Negative,
            SpanLabel::Ignore => Label::Ignore,
            SpanLabel::Positive { gt } => Label::Positive(gt),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSpan {
    pub start: usize,
    pub len: usize,
    #[serde(flatten)]
    pub label: SpanLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub strategy: Strategy,
    pub num_anchors: usize,
    pub level_sizes: Vec<usize>,
    pub spans: Vec<LabelSpan>,
    pub gts: Vec<GtDiagnostics>,
}

impl From<&AssignmentResult> for AssignmentRecord {
    fn from(r: &AssignmentResult) -> Self {
        let mut spans: Vec<LabelSpan> = Vec::new();
        for (i, &label) in r.labels.iter().enumerate() {
            let label = SpanLabel::from(label);
            match spans.last_mut() {
                Some(s) if s.label == label => s.len += 1,
                _ => spans.push(LabelSpan {
                    start: i,
                    len: 1,
                    label,
                }),
            }
        }
        Self {
            strategy: r.strategy,
            num_anchors: r.labels.len(),
            level_sizes: r.level_sizes.clone(),
            spans,
            gts: r.gts.clone(),
        }
    }
}

impl AssignmentRecord {
    /// Expands the spans back into per-anchor labels, checking that they tile
    /// the anchor range and reference existing ground truths. Per-GT positive
    /// counts are recomputed from the labels.
    pub fn into_result(self) -> Result<AssignmentResult> {
        let mut labels = Vec::with_capacity(self.num_anchors);
        for span in &self.spans {
            if span.start != labels.len() {
                return Err(Error::InvalidData(format!(
                    "span starting at {} leaves a gap or overlap at anchor {}",
                    span.start,
                    labels.len()
                )));
            }
            if let SpanLabel::Positive { gt } = span.label {
                if gt >= self.gts.len() {
                    return Err(Error::InvalidData(format!("span references unknown gt {gt}")));
                }
            }
            labels.extend(std::iter::repeat_n(Label::from(span.label), span.len));
        }
        if labels.len() != self.num_anchors || self.level_sizes.iter().sum::<usize>() != self.num_anchors {
            return Err(Error::InvalidData(format!(
                "spans cover {} anchors, record declares {}",
                labels.len(),
                self.num_anchors
            )));
        }
        let mut gts = self.gts;
        for g in &mut gts {
            g.num_positives = 0;
        }
        for label in &labels {
            if let Label::Positive(g) = label {
                gts[*g].num_positives += 1;
            }
        }
        Ok(AssignmentResult {
            strategy: self.strategy,
            labels,
            level_sizes: self.level_sizes,
            gts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::{assign_atss, assign_iou, AtssConfig, GroundTruth, IouAssignConfig};
    use crate::geometry::BBox;
    use crate::pyramid::{generate_anchors, PyramidConfig};

    #[test]
    fn json_roundtrip() {
        let set = generate_anchors(128, 96, &PyramidConfig::square(&[8, 16], 4.0)).unwrap();
        let gts = [
            GroundTruth::new(0, BBox::new(10., 10., 50., 60.), 1),
            GroundTruth::new(1, BBox::new(60., 20., 120., 90.), 2),
        ];
        for r in [
            assign_atss(&set, &gts, &AtssConfig::default()),
            assign_iou(&set, &gts, &IouAssignConfig::default()),
        ] {
            let json = serde_json::to_string(&r.to_record()).unwrap();
            let back: AssignmentRecord = serde_json::from_str(&json).unwrap();
            assert_eq!(back.into_result().unwrap(), r);
        }
    }

    #[test]
    fn span_format() {
        let span = LabelSpan {
            start: 4,
            len: 2,
            label: SpanLabel::Positive { gt: 1 },
        };
        assert_eq!(
            serde_json::to_string(&span).unwrap(),
            r#"{"start":4,"len":2,"label":"positive","gt":1}"#
        );
    }

    #[test]
    fn rejects_gaps() {
        let rec = AssignmentRecord {
            strategy: Strategy::Atss,
            num_anchors: 3,
            level_sizes: vec![3],
            spans: vec![
                LabelSpan {
                    start: 0,
                    len: 1,
                    label: SpanLabel::Negative,
                },
                LabelSpan {
                    start: 2,
                    len: 1,
                    label: SpanLabel::Negative,
                },
            ],
            gts: vec![],
        };
        assert!(rec.into_result().is_err());
    }
}
