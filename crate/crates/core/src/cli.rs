//! Command-line front end.
//!
//! Every run is driven by a [`RunConfig`]: defaults, then an optional TOML
//! file (`--config`), then flags. Flags win over the file.
//!
//! Exit codes: 0 success, 1 usage, 2 config, 3 data.

use crate::assign::{AtssConfig, IouAssignConfig, ScaleRangeConfig, Strategy, StrategyConfig};
use crate::error::{Error, Result};
use crate::geometry::{nms, Detection, NmsConfig};
use crate::ingest::{load_coco, synthesize, CocoDataset, LoadStats, ResizePolicy, SyntheticSpec};
use crate::pyramid::{LevelSpec, PyramidConfig, DEFAULT_SCALE_MULTIPLIER, DEFAULT_STRIDES};
use crate::report::{
    assign_dataset, comparison_text, compare_strategies, report_csv, report_text, run_sweep,
    summarize, sweep_csv, sweep_text, AssignmentReport, ExperimentConfig, SweepParam,
};
use crate::assign::AssignmentRecord;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;

/// Caveats written into every assignment report.
pub const REPORT_NOTES: [&str; 3] = [
    "anchors are not clipped to the image",
    "ground-truth boxes are clipped to the image after resizing",
    "crowd and degenerate annotations are dropped before assignment",
];

#[derive(Debug, Parser)]
#[command(name = "atss", version, about = "Compare training-sample assignment strategies for object detectors")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assign one strategy over a dataset and write a full report
    Assign {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write per-image assignment records (assignments.jsonl)
        #[arg(long)]
        dump_assignments: bool,
    },
    /// Sweep k, the anchor scale or the aspect ratio
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Parameter to sweep: k, anchor_scale or aspect_ratio
        #[arg(long)]
        param: String,
        /// Comma-separated values, e.g. 3,5,7 or 1:4,1:2,1:1
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
    /// Compare the positive sets of all four strategies on the same anchors
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a seeded synthetic corpus in COCO format
    Synth {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Score filter, per-level top-k and per-class NMS over a detections file
    NmsDemo {
        #[command(flatten)]
        common: CommonArgs,
        /// JSON array of {"bbox": [x1, y1, x2, y2], "score", "category", "level"?}
        #[arg(long)]
        detections: PathBuf,
        #[arg(long)]
        iou_threshold: Option<f64>,
        #[arg(long)]
        score_floor: Option<f64>,
        #[arg(long)]
        pre_topk: Option<usize>,
        #[arg(long)]
        post_topk: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Txt,
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// COCO instance-annotation JSON
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Synthetic corpus, e.g. seed=1,images=1000,boxes=6,min=16,max=512
    #[arg(long)]
    pub synthetic: Option<String>,
    /// atss, iou, fcos or center-sampling
    #[arg(long)]
    pub strategy: Option<String>,
    /// Candidates per pyramid level (atss, center-sampling)
    #[arg(long)]
    pub k: Option<usize>,
    /// Positive IoU threshold (iou strategy)
    #[arg(long)]
    pub theta_p: Option<f64>,
    /// Negative IoU threshold (iou strategy)
    #[arg(long)]
    pub theta_n: Option<f64>,
    /// Force each ground truth's best anchor positive (iou strategy)
    #[arg(long)]
    pub force_best_match: Option<bool>,
    /// Comma-separated regression-range bounds, e.g. 0,64,128,256,512,inf
    #[arg(long, value_delimiter = ',')]
    pub scale_ranges: Option<Vec<f64>>,
    /// Comma-separated pyramid strides
    #[arg(long, value_delimiter = ',')]
    pub strides: Option<Vec<u32>>,
    /// Anchor side in units of the stride
    #[arg(long)]
    pub anchor_scale: Option<f64>,
    /// Comma-separated w:h ratios, e.g. 1:2,1:1,2:1
    #[arg(long, value_delimiter = ',')]
    pub aspect_ratios: Option<Vec<String>>,
    /// Anchor scales per octave
    #[arg(long)]
    pub scales_per_octave: Option<u32>,
    /// Resize target for the shorter image side
    #[arg(long)]
    pub shorter_side: Option<u32>,
    /// Cap on the longer image side after resizing
    #[arg(long)]
    pub max_longer_side: Option<u32>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated output formats
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    /// Seed for synthetic corpora
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Pyramid layout as written in the config file: one spec shared by all levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PyramidSection {
    pub strides: Vec<u32>,
    pub anchor_scale: f64,
    pub aspect_ratios: Vec<f64>,
    pub scales_per_octave: u32,
}

impl Default for PyramidSection {
    fn default() -> Self {
        Self {
            strides: DEFAULT_STRIDES.to_vec(),
            anchor_scale: DEFAULT_SCALE_MULTIPLIER,
            aspect_ratios: vec![1.0],
            scales_per_octave: 1,
        }
    }
}

impl PyramidSection {
    pub fn to_config(&self) -> PyramidConfig {
        PyramidConfig {
            levels: self
                .strides
                .iter()
                .map(|&stride| LevelSpec {
                    stride,
                    scale_multiplier: self.anchor_scale,
                    aspect_ratios: self.aspect_ratios.clone(),
                    scales_per_octave: self.scales_per_octave,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dataset: Option<PathBuf>,
    pub synthetic: Option<SyntheticSpec>,
    pub pyramid: PyramidSection,
    pub strategy: Strategy,
    pub atss: AtssConfig,
    pub iou: IouAssignConfig,
    pub scale_ranges: ScaleRangeConfig,
    pub resize: ResizePolicy,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub seed: u64,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dataset: None,
            synthetic: None,
            pyramid: PyramidSection::default(),
            strategy: Strategy::Atss,
            atss: AtssConfig::default(),
            iou: IouAssignConfig::default(),
            scale_ranges: ScaleRangeConfig::default(),
            resize: ResizePolicy::default(),
            out: PathBuf::from("out"),
            formats: vec![Format::Json, Format::Csv, Format::Txt],
            seed: 0,
            workers: 1,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let mut cfg = match &args.config {
            Some(path) => Self::load(path).map_err(|e| match e {
                Error::Io { .. } => Error::config("config", e.to_string()),
                other => other,
            })?,
            None => Self::default(),
        };
        let synthetic_has_seed = cfg.synthetic.is_some();

        if let Some(seed) = args.seed {
            cfg.seed = seed;
        }
        if let Some(d) = &args.dataset {
            cfg.dataset = Some(d.clone());
            cfg.synthetic = None;
        }
        let mut seed_pinned = synthetic_has_seed && args.seed.is_none();
        if let Some(s) = &args.synthetic {
            cfg.synthetic = Some(s.parse()?);
            cfg.dataset = None;
            seed_pinned = s.split(',').any(|p| p.trim_start().starts_with("seed="));
        }
        if let Some(spec) = &mut cfg.synthetic {
            if !seed_pinned {
                spec.seed = cfg.seed;
            }
        }
        if let Some(s) = &args.strategy {
            cfg.strategy = s.parse()?;
        }
        if let Some(k) = args.k {
            cfg.atss.k = k;
        }
        if let Some(v) = args.theta_p {
            cfg.iou.theta_p = v;
        }
        if let Some(v) = args.theta_n {
            cfg.iou.theta_n = v;
        }
        if let Some(v) = args.force_best_match {
            cfg.iou.force_best_match = v;
        }
        if let Some(v) = &args.scale_ranges {
            cfg.scale_ranges = ScaleRangeConfig { bounds: v.clone() };
        }
        if let Some(v) = &args.strides {
            cfg.pyramid.strides = v.clone();
        }
        if let Some(v) = args.anchor_scale {
            cfg.pyramid.anchor_scale = v;
        }
        if let Some(v) = &args.aspect_ratios {
            cfg.pyramid.aspect_ratios = v
                .iter()
                .map(|r| crate::report::parse_ratio(r).map_err(|e| Error::config("aspect_ratios", format!("`{r}`: {e}"))))
                .collect::<Result<_>>()?;
        }
        if let Some(v) = args.scales_per_octave {
            cfg.pyramid.scales_per_octave = v;
        }
        if let Some(v) = args.shorter_side {
            cfg.resize.shorter_side = v;
        }
        if let Some(v) = args.max_longer_side {
            cfg.resize.max_longer_side = v;
        }
        if let Some(v) = &args.out {
            cfg.out = v.clone();
        }
        if let Some(v) = &args.format {
            cfg.formats = v.clone();
        }
        if let Some(v) = args.workers {
            cfg.workers = v;
        }
        cfg.formats.sort();
        cfg.formats.dedup();
        Ok(cfg)
    }

    pub fn experiment(&self) -> ExperimentConfig {
        ExperimentConfig {
            pyramid: self.pyramid.to_config(),
            strategy: StrategyConfig {
                strategy: self.strategy,
                atss: self.atss,
                iou: self.iou,
                scale_ranges: self.scale_ranges.clone(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.experiment().validate()?;
        self.resize.validate()?;
        if self.dataset.is_some() && self.synthetic.is_some() {
            return Err(Error::config("dataset", "give either a dataset or a synthetic spec, not both"));
        }
        if let Some(spec) = &self.synthetic {
            spec.validate()?;
        }
        if self.formats.is_empty() {
            return Err(Error::config("formats", "at least one output format required"));
        }
        Ok(())
    }

    /// Loads the configured source and applies the resize policy.
    pub fn load_dataset(&self) -> Result<CocoDataset> {
        let raw = match (&self.dataset, &self.synthetic) {
            (Some(path), None) => load_coco(path)?,
            (None, Some(spec)) => CocoDataset::from_coco(synthesize(spec)?)?,
            _ => {
                return Err(Error::config(
                    "dataset",
                    "exactly one of --dataset or --synthetic is required",
                ))
            }
        };
        Ok(raw.resized(&self.resize))
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))
    }
}

#[derive(Debug, Serialize)]
struct AssignOutput<'a> {
    dataset: LoadStats,
    notes: &'a [&'a str],
    report: &'a AssignmentReport,
}

#[derive(Debug, Serialize)]
struct ImageRecord {
    image_id: u64,
    #[serde(flatten)]
    record: AssignmentRecord,
}

#[derive(Debug, Serialize)]
struct NmsOutput<'a> {
    config: NmsConfig,
    input: usize,
    kept: &'a [Detection],
}

fn write(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(&path, contents).map_err(|source| Error::Io { path, source })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn prepare_out(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out).map_err(|source| Error::Io {
        path: cfg.out.clone(),
        source,
    })
}

fn cmd_assign(cfg: &RunConfig, dump: bool) -> Result<()> {
    let dataset = cfg.load_dataset()?;
    let experiment = cfg.experiment();
    let results = cfg.pool()?.install(|| assign_dataset(&dataset.images, &experiment))?;
    let report = summarize(
        results
            .iter()
            .zip(&dataset.images)
            .map(|(r, img)| (r, img.gts.as_slice())),
    );
    prepare_out(cfg)?;
    if cfg.wants(Format::Json) {
        let out = AssignOutput {
            dataset: dataset.stats,
            notes: &REPORT_NOTES,
            report: &report,
        };
        write(cfg.out.join("report.json"), to_json(&out))?;
    }
    if cfg.wants(Format::Csv) {
        write(cfg.out.join("report.csv"), report_csv(&report))?;
    }
    let text = report_text(&report);
    if cfg.wants(Format::Txt) {
        write(cfg.out.join("report.txt"), &text)?;
    }
    if dump {
        let mut lines = String::new();
        for (r, img) in results.iter().zip(&dataset.images) {
            let rec = ImageRecord {
                image_id: img.id,
                record: r.to_record(),
            };
            lines.push_str(&serde_json::to_string(&rec).expect("records serialize"));
            lines.push('\n');
        }
        write(cfg.out.join("assignments.jsonl"), lines)?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, param: &str, values: &[String]) -> Result<()> {
    let param: SweepParam = param.parse()?;
    let dataset = cfg.load_dataset()?;
    let table = cfg
        .pool()?
        .install(|| run_sweep(&dataset.images, &cfg.experiment(), param, values))?;
    prepare_out(cfg)?;
    let stem = format!("sweep_{}", param.name());
    if cfg.wants(Format::Json) {
        write(cfg.out.join(format!("{stem}.json")), to_json(&table))?;
    }
    if cfg.wants(Format::Csv) {
        write(cfg.out.join(format!("{stem}.csv")), sweep_csv(&table))?;
    }
    let text = sweep_text(&table);
    if cfg.wants(Format::Txt) {
        write(cfg.out.join(format!("{stem}.txt")), &text)?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_compare(cfg: &RunConfig) -> Result<()> {
    let dataset = cfg.load_dataset()?;
    let base = cfg.experiment();
    let configs: Vec<StrategyConfig> = Strategy::ALL
        .into_iter()
        .map(|s| StrategyConfig {
            strategy: s,
            ..base.strategy.clone()
        })
        .collect();
    for c in &configs {
        c.validate(base.pyramid.num_levels())?;
    }
    let cmp = cfg
        .pool()?
        .install(|| compare_strategies(&dataset.images, &base.pyramid, &configs))?;
    prepare_out(cfg)?;
    if cfg.wants(Format::Json) {
        write(cfg.out.join("comparison.json"), to_json(&cmp))?;
    }
    if cfg.wants(Format::Csv) {
        let mut csv = String::from("a,b,mean_jaccard,mean_count_delta,mean_abs_count_delta\n");
        for p in &cmp.pairs {
            csv.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6}\n",
                p.a, p.b, p.mean_jaccard, p.mean_count_delta, p.mean_abs_count_delta
            ));
        }
        write(cfg.out.join("comparison.csv"), csv)?;
    }
    let text = comparison_text(&cmp);
    if cfg.wants(Format::Txt) {
        write(cfg.out.join("comparison.txt"), &text)?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_synth(cfg: &RunConfig) -> Result<()> {
    let spec = cfg.synthetic.unwrap_or(SyntheticSpec {
        seed: cfg.seed,
        ..SyntheticSpec::default()
    });
    let file = synthesize(&spec)?;
    prepare_out(cfg)?;
    let path = cfg.out.join("synthetic_coco.json");
    write(path.clone(), serde_json::to_string(&file).expect("COCO serializes"))?;
    println!(
        "wrote {} images, {} annotations to {}",
        file.images.len(),
        file.annotations.len(),
        path.display()
    );
    Ok(())
}

fn load_detections(path: &Path) -> Result<Vec<Detection>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let dets: Vec<Detection> = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    for (i, d) in dets.iter().enumerate() {
        if !(0.0..=1.0).contains(&d.score) {
            return Err(Error::InvalidData(format!("detection {i}: score {} outside [0, 1]", d.score)));
        }
        if !d.bbox.is_valid() {
            return Err(Error::InvalidData(format!("detection {i}: invalid box {:?}", d.bbox)));
        }
    }
    Ok(dets)
}

fn cmd_nms(cfg: &RunConfig, detections: &Path, nms_cfg: NmsConfig) -> Result<()> {
    if !(0.0..=1.0).contains(&nms_cfg.iou_threshold) {
        return Err(Error::config("iou_threshold", "must lie in [0, 1]"));
    }
    let dets = load_detections(detections)?;
    let kept = nms(&dets, &nms_cfg);
    prepare_out(cfg)?;
    let out = NmsOutput {
        config: nms_cfg,
        input: dets.len(),
        kept: &kept,
    };
    if cfg.wants(Format::Json) {
        write(cfg.out.join("nms.json"), to_json(&out))?;
    }
    if cfg.wants(Format::Csv) {
        let mut csv = String::from("x1,y1,x2,y2,score,category\n");
        for d in &kept {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                d.bbox.x1, d.bbox.y1, d.bbox.x2, d.bbox.y2, d.score, d.category
            ));
        }
        write(cfg.out.join("nms.csv"), csv)?;
    }
    println!("kept {} of {} detections", kept.len(), dets.len());
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig { .. } | Error::UnknownSweepParam(_) => EXIT_CONFIG,
        _ => EXIT_DATA,
    }
}

fn dispatch(command: Command) -> Result<()> {
    let resolve = |common: &CommonArgs| -> Result<RunConfig> {
        let cfg = RunConfig::resolve(common)?;
        cfg.validate()?;
        Ok(cfg)
    };
    match command {
        Command::Assign {
            common,
            dump_assignments,
        } => cmd_assign(&resolve(&common)?, dump_assignments),
        Command::Sweep {
            common,
            param,
            values,
        } => cmd_sweep(&resolve(&common)?, &param, &values),
        Command::Compare { common } => cmd_compare(&resolve(&common)?),
        Command::Synth { common } => cmd_synth(&resolve(&common)?),
        Command::NmsDemo {
            common,
            detections,
            iou_threshold,
            score_floor,
            pre_topk,
            post_topk,
        } => {
            let d = NmsConfig::default();
            let nms_cfg = NmsConfig {
                iou_threshold: iou_threshold.unwrap_or(d.iou_threshold),
                score_floor: score_floor.unwrap_or(d.score_floor),
                pre_topk: pre_topk.unwrap_or(d.pre_topk),
                post_topk: post_topk.unwrap_or(d.post_topk),
            };
            cmd_nms(&resolve(&common)?, &detections, nms_cfg)
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(
            &path,
            "strategy = \"iou\"\nseed = 5\n[atss]\nk = 7\n[synthetic]\nimages = 3\n",
        )
        .unwrap();
        let args = CommonArgs {
            config: Some(path.clone()),
            k: Some(11),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.strategy, Strategy::Iou);
        assert_eq!(cfg.atss.k, 11);
        assert_eq!(cfg.synthetic.unwrap().images, 3);

        let args = CommonArgs {
            config: Some(path),
            synthetic: Some("images=2".into()),
            seed: Some(9),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.synthetic.unwrap().seed, 9);
        assert_eq!(cfg.synthetic.unwrap().images, 2);
    }

    #[test]
    fn synthetic_seed_key_wins() {
        let args = CommonArgs {
            synthetic: Some("seed=4,images=2".into()),
            seed: Some(9),
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve(&args).unwrap().synthetic.unwrap().seed, 4);
    }

    #[test]
    fn config_errors_name_fields() {
        let err = RunConfig::from_toml("bogus = 1").unwrap_err();
        assert_eq!(exit_code(&err), EXIT_CONFIG);
        let args = CommonArgs {
            strategy: Some("retina".into()),
            ..Default::default()
        };
        let err = RunConfig::resolve(&args).unwrap_err();
        assert!(err.to_string().contains("strategy"));

        let cfg = RunConfig {
            synthetic: Some(SyntheticSpec::default()),
            scale_ranges: ScaleRangeConfig { bounds: vec![0.0, 1.0] },
            strategy: Strategy::SpatialScale,
            ..Default::default()
        };
        assert!(cfg.validate().unwrap_err().to_string().contains("scale_ranges"));
    }

    #[test]
    fn toml_scale_ranges_accept_inf() {
        let cfg = RunConfig::from_toml("scale_ranges = [0, 64, 128, 256, 512, inf]").unwrap();
        assert_eq!(cfg.scale_ranges, ScaleRangeConfig::default());
    }
}
