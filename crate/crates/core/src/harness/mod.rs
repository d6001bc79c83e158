//! The proving/learning loop: corpus runs, example harvesting, data merging
//! with boost files, training schedules and reports.

mod corpus;
mod report;
mod run;
mod schedule;
mod store;

use std::path::PathBuf;

pub use corpus::{
    evaluate_corpus, harvest, load_corpus, results_csv, run_problem, shuffled, CorpusProblem, Harvest, Outcome,
    ProblemRun,
};
pub use report::{parse_report_csv, report_csv, report_svg, LoopReport, LoopRow, CSV_HEADER};
pub use run::{run_loop, run_loop_on, LoopMode, LoopOutcome, RunConfig, DEFAULT_BOOST_CUTOFF};
pub use schedule::{builtin_schedule, ScheduleEntry, DEFAULT_BITS, SCHEDULE_NAMES};
pub use store::{merge, DataFile, Merged, TrainingStore};

use crate::learning::LearnError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown schedule `{0}`")]
    UnknownSchedule(String),
    #[error("schedule {name} has {entries} entries, {requested} loops requested")]
    ScheduleTooShort {
        name: String,
        entries: usize,
        requested: usize,
    },
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("{file}:{line}: {message}")]
    Data { file: String, line: usize, message: String },
    #[error("{file}: data has {found} feature bits, run uses {expected}")]
    ConfigMismatch { file: String, expected: u32, found: u32 },
    #[error("training failed in loop {loop_index}: {source}")]
    Training { loop_index: usize, source: LearnError },
    #[error("{0}")]
    Internal(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guidance::GuidanceMode;
    use crate::saturation::Limits;
    use std::fs;

    fn trivial_corpus() -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a_unsat.p"), "cnf(a, axiom, p).\ncnf(b, negated_conjecture, ~p).\n").unwrap();
        fs::write(dir.path().join("b_sat.p"), "cnf(a, axiom, p(a)).\n").unwrap();
        fs::write(dir.path().join("c_chain.p"), "cnf(a, axiom, q(a)).\ncnf(b, axiom, ~q(X) | r(X)).\ncnf(g, negated_conjecture, ~r(a)).\n").unwrap();
        fs::write(dir.path().join("d_broken.p"), "cnf(a, axiom, p(.\n").unwrap();
        fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        dir
    }

    #[test]
    fn corpus_evaluation() {
        let dir = trivial_corpus();
        let corpus = load_corpus(dir.path()).unwrap();
        assert_eq!(corpus.len(), 4);
        let runs = evaluate_corpus(&corpus, &GuidanceMode::Baseline, &Limits::default(), 0, 2).unwrap();
        let outcomes: Vec<&str> = runs.iter().map(|r| r.outcome.as_str()).collect();
        assert_eq!(outcomes, vec!["Unsatisfiable", "Satisfiable", "Unsatisfiable", "Error"]);
        let again = evaluate_corpus(&corpus, &GuidanceMode::Baseline, &Limits::default(), 0, 1).unwrap();
        assert_eq!(results_csv(&runs, false), results_csv(&again, false));
        let empty = tempfile::tempdir().unwrap();
        assert!(load_corpus(empty.path()).unwrap().is_empty());
    }

    #[test]
    fn one_loop_run_writes_artifacts() {
        let dir = trivial_corpus();
        let out = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(LoopMode::Solo, builtin_schedule("exp5", 2).unwrap());
        cfg.out_dir = Some(out.path().to_path_buf());
        cfg.workers = 2;
        let o = run_loop(dir.path(), &cfg).unwrap();
        assert_eq!(o.report.rows.len(), 3);
        assert_eq!(o.report.rows[0].loop_index, -1);
        assert!(o.report.rows.windows(2).all(|w| w[0].cumulative <= w[1].cumulative));
        for f in ["report.csv", "data.txt", "baseline/results.csv", "loop-0/model.txt", "loop-1/data.txt"] {
            assert!(out.path().join(f).exists(), "{f}");
        }
        let csv = fs::read_to_string(out.path().join("report.csv")).unwrap();
        assert_eq!(parse_report_csv(&csv).unwrap(), o.report);
        // exp5 changes bits between loops 0 and 1
        assert_eq!(o.report.rows[1].bits, Some(14));
        assert_eq!(o.report.rows[2].bits, Some(13));
        let data = DataFile::load(&out.path().join("loop-1/data.txt")).unwrap();
        assert_eq!(data.config.bits(), 13);
    }

    #[test]
    fn training_failure_names_the_loop() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("sat.p"), "cnf(a, axiom, p(a)).\n").unwrap();
        let out = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(LoopMode::Coop, builtin_schedule("fives", 2).unwrap());
        cfg.out_dir = Some(out.path().to_path_buf());
        let err = run_loop(dir.path(), &cfg).unwrap_err();
        assert!(matches!(err, HarnessError::Training { loop_index: 0, .. }));
        let csv = fs::read_to_string(out.path().join("report.csv")).unwrap();
        assert_eq!(parse_report_csv(&csv).unwrap().rows.len(), 1);
    }
}
