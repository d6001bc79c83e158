use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use super::corpus::{evaluate_corpus, load_corpus, results_csv, CorpusProblem, ProblemRun};
use super::report::{report_csv, LoopReport, LoopRow};
use super::schedule::ScheduleEntry;
use super::store::{merge, DataFile, TrainingStore};
use super::HarnessError;
use crate::features::FeatureConfig;
use crate::guidance::GuidanceMode;
use crate::learning::{serialize, train, TrainParams};
use crate::saturation::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopMode {
    Solo,
    Coop,
}

impl LoopMode {
    pub fn name(&self) -> &'static str {
        match self {
            LoopMode::Solo => "solo",
            LoopMode::Coop => "coop",
        }
    }
}

pub const DEFAULT_BOOST_CUTOFF: usize = 4;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: LoopMode,
    pub limits: Limits,
    pub schedule: Vec<ScheduleEntry>,
    pub boost: Vec<PathBuf>,
    /// Boost rows are used while `loop_index < boost_cutoff`.
    pub boost_cutoff: usize,
    pub seed: u64,
    pub workers: usize,
    pub eta: f64,
    pub lambda: f64,
    /// Where `loop-<k>/` artifacts and `report.csv` go, if anywhere.
    pub out_dir: Option<PathBuf>,
    /// Adds wall-clock columns; reports are then no longer reproducible.
    pub timings: bool,
}

impl RunConfig {
    pub fn new(mode: LoopMode, schedule: Vec<ScheduleEntry>) -> Self {
        RunConfig {
            mode,
            limits: Limits::default(),
            schedule,
            boost: Vec::new(),
            boost_cutoff: DEFAULT_BOOST_CUTOFF,
            seed: 0,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            eta: 0.2,
            lambda: 1.0,
            out_dir: None,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LoopOutcome {
    pub report: LoopReport,
    /// Per report row, problems solved for the first time.
    pub newly_solved: Vec<Vec<String>>,
    /// The training store after the last loop.
    pub store: TrainingStore,
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| HarnessError::Io {
            path: parent.to_path_buf(),
            message: e.to_string(),
        })?;
    }
    std::fs::write(path, text).map_err(|e| HarnessError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn run_loop(corpus_dir: &Path, config: &RunConfig) -> Result<LoopOutcome, HarnessError> {
    let corpus = load_corpus(corpus_dir)?;
    run_loop_on(&corpus, config)
}

struct Recorder<'a> {
    config: &'a RunConfig,
    outcome: LoopOutcome,
    solved_ever: BTreeSet<String>,
}

impl Recorder<'_> {
    fn record(&mut self, mut row: LoopRow, runs: &[ProblemRun], started: Instant, dir: &str) -> Result<(), HarnessError> {
        let solved: Vec<&str> = runs.iter().filter(|r| r.solved()).map(|r| r.name.as_str()).collect();
        let fresh: Vec<String> = solved
            .iter()
            .filter(|n| !self.solved_ever.contains(**n))
            .map(|n| n.to_string())
            .collect();
        self.solved_ever.extend(fresh.iter().cloned());
        row.solved = solved.len();
        row.cumulative = self.solved_ever.len();
        row.seconds = self.config.timings.then(|| (started.elapsed().as_secs_f64() * 1000.0).round() / 1000.0);
        self.outcome.report.rows.push(row);
        self.outcome.newly_solved.push(fresh);
        if let Some(out) = &self.config.out_dir {
            write(&out.join(dir).join("results.csv"), &results_csv(runs, self.config.timings))?;
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&self) -> Result<(), HarnessError> {
        if let Some(out) = &self.config.out_dir {
            write(&out.join("report.csv"), &report_csv(&self.outcome.report))?;
        }
        Ok(())
    }
}

/// E0 baseline (loop -1), then for each schedule entry: merge data, train,
/// evaluate with the model, harvest.
pub fn run_loop_on(corpus: &[CorpusProblem], config: &RunConfig) -> Result<LoopOutcome, HarnessError> {
    let boosts: Vec<DataFile> = config.boost.iter().map(|p| DataFile::load(p)).collect::<Result<_, _>>()?;
    let mut rec = Recorder {
        config,
        outcome: LoopOutcome::default(),
        solved_ever: BTreeSet::new(),
    };

    let started = Instant::now();
    let runs = evaluate_corpus(corpus, &GuidanceMode::Baseline, &config.limits, config.seed, config.workers)?;
    rec.outcome.store.add_runs(&runs, -1);
    let baseline = LoopRow {
        loop_index: -1,
        mode: "e0".into(),
        depth: None,
        trees: None,
        bits: None,
        solved: 0,
        cumulative: 0,
        pos: 0,
        neg: 0,
        boost: 0,
        seconds: None,
    };
    rec.record(baseline, &runs, started, "baseline")?;

    for entry in &config.schedule {
        let started = Instant::now();
        let k = entry.loop_index;
        let cfg = FeatureConfig::new(entry.bits).map_err(|e| HarnessError::Internal(e.to_string()))?;
        let merged = merge(&rec.outcome.store, &boosts, k, config.boost_cutoff, cfg)?;
        let params = TrainParams {
            depth: entry.depth,
            trees: entry.trees,
            eta: config.eta,
            lambda: config.lambda,
            min_child: 1,
        };
        let model = match train(&merged.dataset, &params) {
            Ok(m) => m,
            Err(source) => {
                rec.flush()?;
                return Err(HarnessError::Training { loop_index: k, source });
            }
        };
        let dir = format!("loop-{k}");
        if let Some(out) = &config.out_dir {
            write(&out.join(&dir).join("model.txt"), &serialize(&model))?;
            write(&out.join(&dir).join("data.txt"), &rec.outcome.store.to_data_text(cfg))?;
        }
        let mode = match config.mode {
            LoopMode::Solo => GuidanceMode::Solo(Arc::new(model)),
            LoopMode::Coop => GuidanceMode::Coop(Arc::new(model)),
        };
        let runs = evaluate_corpus(corpus, &mode, &config.limits, config.seed, config.workers)?;
        rec.outcome.store.add_runs(&runs, k as i64);
        let row = LoopRow {
            loop_index: k as i64,
            mode: config.mode.name().into(),
            depth: Some(entry.depth),
            trees: Some(entry.trees),
            bits: Some(entry.bits),
            solved: 0,
            cumulative: 0,
            pos: merged.pos,
            neg: merged.neg,
            boost: merged.boost,
            seconds: None,
        };
        rec.record(row, &runs, started, &dir)?;
    }

    if let Some(out) = &config.out_dir {
        let bits = config.schedule.last().map_or(super::schedule::DEFAULT_BITS, |e| e.bits);
        let cfg = FeatureConfig::new(bits).map_err(|e| HarnessError::Internal(e.to_string()))?;
        write(&out.join("data.txt"), &rec.outcome.store.to_data_text(cfg))?;
    }
    Ok(rec.outcome)
}
