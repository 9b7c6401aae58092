//! Plain-text and CSV renderings. JSON goes through serde directly.

use super::{AssignmentReport, Comparison, SweepTable};
use std::fmt::Write;

pub const SWEEP_CSV_HEADER: &str = "parameter,value,strategy,images,gts,anchors,positives,\
mean_pos_per_gt,median_pos_per_gt,std_pos_per_gt,zero_pos_fraction,ignore_fraction,mean_threshold";

fn strategy_name(r: &AssignmentReport) -> &'static str {
    r.strategy.map_or("-", |s| s.name())
}

pub fn report_text(r: &AssignmentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "strategy            {}", strategy_name(r));
    let _ = writeln!(out, "images              {}", r.images);
    let _ = writeln!(out, "ground truths       {}", r.gts);
    let _ = writeln!(out, "anchors             {}", r.anchors);
    let _ = writeln!(out, "positives           {}", r.positives);
    let _ = writeln!(out, "ignored             {}", r.ignored);
    let s = &r.positives_per_gt;
    let _ = writeln!(
        out,
        "positives per gt    mean {:.4}  median {:.1}  std {:.4}  min {}  max {}",
        s.mean, s.median, s.std, s.min, s.max
    );
    let _ = writeln!(
        out,
        "zero-positive gts   {} ({:.4})",
        r.zero_positive_gts, r.zero_positive_fraction
    );
    let _ = writeln!(out, "ignore fraction     {:.6}", r.ignore_fraction);
    if let Some(t) = &r.thresholds {
        let _ = writeln!(
            out,
            "iou threshold       mean m_g {:.4}  mean v_g {:.4}  mean t_g {:.4}",
            t.mean_m, t.mean_v, t.mean_t
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<8} {:>12}", "level", "positives");
    for (i, n) in r.positives_per_level.iter().enumerate() {
        let _ = writeln!(out, "{:<8} {:>12}", i, n);
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<10} {:>8} {:>10} {:>10} {:>8}",
        "sqrt-area", "gts", "positives", "mean", "zero"
    );
    for b in &r.scale_buckets {
        let _ = writeln!(
            out,
            "{:<10} {:>8} {:>10} {:>10.4} {:>8}",
            b.label(),
            b.gts,
            b.positives,
            b.mean_positives,
            b.zero_positive_gts
        );
    }
    out
}

/// Scale-bucket table: `bucket,lo,hi,gts,positives,mean_positives,zero_positive_gts`.
pub fn report_csv(r: &AssignmentReport) -> String {
    let mut out = String::from("bucket,lo,hi,gts,positives,mean_positives,zero_positive_gts\n");
    for b in &r.scale_buckets {
        let hi = b.hi.map_or_else(|| "inf".to_string(), |h| h.to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6},{}",
            b.label(),
            b.lo,
            hi,
            b.gts,
            b.positives,
            b.mean_positives,
            b.zero_positive_gts
        );
    }
    out
}

pub fn sweep_csv(t: &SweepTable) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in &t.rows {
        let r = &row.report;
        let threshold = r
            .thresholds
            .map_or_else(String::new, |s| format!("{:.6}", s.mean_t));
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.1},{:.6},{:.6},{:.6},{}",
            t.parameter,
            row.value,
            t.strategy,
            r.images,
            r.gts,
            r.anchors,
            r.positives,
            r.positives_per_gt.mean,
            r.positives_per_gt.median,
            r.positives_per_gt.std,
            r.zero_positive_fraction,
            r.ignore_fraction,
            threshold
        );
    }
    out
}

pub fn sweep_text(t: &SweepTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sweep of {} ({})", t.parameter, t.strategy);
    let _ = writeln!(out, "note: {}", t.note);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<8} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "value", "gts", "mean", "median", "std", "zero", "mean t_g"
    );
    for row in &t.rows {
        let r = &row.report;
        let threshold = r
            .thresholds
            .map_or_else(|| "-".to_string(), |s| format!("{:.4}", s.mean_t));
        let _ = writeln!(
            out,
            "{:<8} {:>8} {:>10.4} {:>10.1} {:>10.4} {:>10.4} {:>10}",
            row.value,
            r.gts,
            r.positives_per_gt.mean,
            r.positives_per_gt.median,
            r.positives_per_gt.std,
            r.zero_positive_fraction,
            threshold
        );
    }
    out
}

pub fn comparison_text(c: &Comparison) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:<16} {:>10} {:>12} {:>12}  per-level jaccard",
        "a", "b", "jaccard", "count delta", "|delta|"
    );
    for p in &c.pairs {
        let levels: Vec<String> = p.per_level_jaccard.iter().map(|v| format!("{v:.3}")).collect();
        let _ = writeln!(
            out,
            "{:<16} {:<16} {:>10.4} {:>12.4} {:>12.4}  {}",
            p.a.name(),
            p.b.name(),
            p.mean_jaccard,
            p.mean_count_delta,
            p.mean_abs_count_delta,
            levels.join(" ")
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::Strategy;
    use crate::report::{SweepParam, SweepRow};

    #[test]
    fn sweep_csv_has_one_row_per_value() {
        let t = SweepTable {
            parameter: SweepParam::K,
            strategy: Strategy::Atss,
            note: String::new(),
            rows: ["3", "9"]
                .iter()
                .map(|v| SweepRow {
                    value: v.to_string(),
                    report: AssignmentReport::empty(),
                })
                .collect(),
        };
        let csv = sweep_csv(&t);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert!(lines[1].starts_with("k,3,atss,0,0,0,0,"));
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
    }

    #[test]
    fn report_csv_buckets() {
        let csv = report_csv(&AssignmentReport::empty());
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.lines().last().unwrap().starts_with(">=512,512,inf,"));
    }
}
