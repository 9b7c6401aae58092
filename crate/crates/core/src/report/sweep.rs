use super::{report_dataset, AssignmentReport, ExperimentConfig};
use crate::assign::Strategy;
use crate::error::{Error, Result};
use crate::ingest::DatasetImage;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Stability bands are proxies on assignment statistics; they do not measure
/// detection accuracy.
pub const SWEEP_NOTE: &str = "assignment-count statistics only; stability thresholds are \
artifact-defined proxies for detector accuracy, not AP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    K,
    AnchorScale,
    AspectRatio,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::K => "k",
            SweepParam::AnchorScale => "anchor_scale",
            SweepParam::AspectRatio => "aspect_ratio",
        }
    }

    /// Applies one swept value to a copy of `base`.
    pub fn apply(&self, base: &ExperimentConfig, value: &str) -> Result<ExperimentConfig> {
        let mut cfg = base.clone();
        let bad = |reason: String| Error::config(self.name(), format!("`{value}`: {reason}"));
        match self {
            SweepParam::K => {
                cfg.strategy.atss.k = value.trim().parse().map_err(|e| bad(format!("{e}")))?;
            }
            SweepParam::AnchorScale => {
                let m: f64 = value.trim().parse().map_err(|e| bad(format!("{e}")))?;
                cfg.pyramid = cfg.pyramid.with_scale_multiplier(m);
            }
            SweepParam::AspectRatio => {
                let r = parse_ratio(value).map_err(bad)?;
                cfg.pyramid = cfg.pyramid.with_aspect_ratios(&[r]);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "k" => Ok(SweepParam::K),
            "anchor_scale" | "scale" => Ok(SweepParam::AnchorScale),
            "aspect_ratio" | "ratio" => Ok(SweepParam::AspectRatio),
            _ => Err(Error::UnknownSweepParam(s.to_string())),
        }
    }
}

/// Parses a width:height ratio (`"1:4"`) or a plain number (`"0.25"`).
pub fn parse_ratio(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let r = match s.split_once(':') {
        Some((w, h)) => {
            let w: f64 = w.trim().parse().map_err(|e| format!("{e}"))?;
            let h: f64 = h.trim().parse().map_err(|e| format!("{e}"))?;
            w / h
        }
        None => s.parse().map_err(|e| format!("{e}"))?,
    };
    if r.is_finite() && r > 0.0 {
        Ok(r)
    } else {
        Err("ratio must be positive".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: String,
    pub report: AssignmentReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub parameter: SweepParam,
    pub strategy: Strategy,
    pub note: String,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn row(&self, value: &str) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.value == value)
    }
}

/// One full assignment and summary per value, on the same images.
pub fn run_sweep(
    images: &[DatasetImage],
    base: &ExperimentConfig,
    param: SweepParam,
    values: &[String],
) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::config("values", "at least one sweep value required"));
    }
    let configs = values
        .iter()
        .map(|v| param.apply(base, v))
        .collect::<Result<Vec<_>>>()?;
    let rows = values
        .iter()
        .zip(&configs)
        .map(|(value, cfg)| {
            Ok(SweepRow {
                value: value.trim().to_string(),
                report: report_dataset(images, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        parameter: param,
        strategy: base.strategy.strategy,
        note: SWEEP_NOTE.to_string(),
        rows,
    })
}
