use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::HarnessError;
use crate::features::{conjecture_clauses, hash_bucket, normalize_literals, AbstractClause};
use crate::guidance::GuidanceMode;
use crate::logic::{parse_problem_file, Problem};
use crate::saturation::{saturate, Limits, SaturationResult, SaturationStatus};

/// A corpus member; parse failures are kept so they show up as failed runs.
#[derive(Clone, Debug)]
pub struct CorpusProblem {
    pub name: String,
    pub path: PathBuf,
    pub problem: Result<Problem, String>,
}

/// Loads every `.p` file of `dir`, sorted by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusProblem>, HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "p"));
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|path| {
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let problem = parse_problem_file(&path).map_err(|e| e.to_string());
            CorpusProblem { name, path, problem }
        })
        .collect())
}

/// Permutes the input clause order. Seed 0 keeps the file order; other seeds
/// shuffle with a generator keyed by the seed and the problem name.
pub fn shuffled(problem: &Problem, seed: u64) -> Problem {
    let mut p = problem.clone();
    if seed != 0 {
        let key = hash_bucket(&p.name, 16) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ key);
        p.clauses.shuffle(&mut rng);
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Unsatisfiable,
    Satisfiable,
    ResourceOut,
    Error(String),
}

impl Outcome {
    pub fn as_str(&self) -> &str {
        match self {
            Outcome::Unsatisfiable => "Unsatisfiable",
            Outcome::Satisfiable => "Satisfiable",
            Outcome::ResourceOut => "ResourceOut",
            Outcome::Error(_) => "Error",
        }
    }
}

/// Training examples harvested from one solved run, kept in abstracted form
/// so they can be featurized under any bucket count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Harvest {
    pub conjecture: Vec<AbstractClause>,
    pub examples: Vec<(AbstractClause, bool)>,
}

impl Harvest {
    pub fn positives(&self) -> usize {
        self.examples.iter().filter(|e| e.1).count()
    }

    pub fn negatives(&self) -> usize {
        self.examples.len() - self.positives()
    }
}

#[derive(Clone, Debug)]
pub struct ProblemRun {
    pub name: String,
    pub outcome: Outcome,
    pub selections: usize,
    pub proof_len: usize,
    pub harvest: Harvest,
    pub seconds: f64,
}

impl ProblemRun {
    pub fn solved(&self) -> bool {
        self.outcome == Outcome::Unsatisfiable
    }
}

/// Selected clauses in the proof are positives, other selected clauses are
/// negatives. Runs without a proof yield nothing.
pub fn harvest(problem: &Problem, result: &SaturationResult) -> Harvest {
    let Some(dag) = result.proof() else {
        return Harvest::default();
    };
    let examples = result
        .trace
        .iter()
        .map(|id| {
            let c = &result.clauses[id.0 as usize];
            (normalize_literals(&c.literals, &problem.signature), dag.contains(*id))
        })
        .collect();
    Harvest {
        conjecture: conjecture_clauses(problem),
        examples,
    }
}

pub fn run_problem(cp: &CorpusProblem, mode: &GuidanceMode, limits: &Limits, seed: u64) -> ProblemRun {
    let start = Instant::now();
    let failed = |msg: String| ProblemRun {
        name: cp.name.clone(),
        outcome: Outcome::Error(msg),
        selections: 0,
        proof_len: 0,
        harvest: Harvest::default(),
        seconds: start.elapsed().as_secs_f64(),
    };
    let problem = match &cp.problem {
        Ok(p) => shuffled(p, seed),
        Err(e) => return failed(e.clone()),
    };
    let strategy = match mode.strategy_for(&problem) {
        Ok(s) => s,
        Err(e) => return failed(e.to_string()),
    };
    let result = saturate(&problem, &strategy, limits);
    let outcome = match result.status {
        SaturationStatus::Unsatisfiable { .. } => Outcome::Unsatisfiable,
        SaturationStatus::Satisfiable => Outcome::Satisfiable,
        SaturationStatus::ResourceOut => Outcome::ResourceOut,
    };
    let harvest = harvest(&problem, &result);
    ProblemRun {
        name: cp.name.clone(),
        outcome,
        selections: result.stats.selections,
        proof_len: result.proof().map_or(0, |d| d.len()),
        harvest,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs every problem, `workers` at a time. Results keep corpus order.
pub fn evaluate_corpus(
    corpus: &[CorpusProblem],
    mode: &GuidanceMode,
    limits: &Limits,
    seed: u64,
    workers: usize,
) -> Result<Vec<ProblemRun>, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Internal(e.to_string()))?;
    Ok(pool.install(|| corpus.par_iter().map(|cp| run_problem(cp, mode, limits, seed)).collect()))
}

/// `problem,status,selections,proof_len,pos,neg[,seconds]`
pub fn results_csv(runs: &[ProblemRun], timings: bool) -> String {
    let mut out = String::from("problem,status,selections,proof_len,pos,neg");
    if timings {
        out.push_str(",seconds");
    }
    out.push('\n');
    for r in runs {
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            r.name,
            r.outcome.as_str(),
            r.selections,
            r.proof_len,
            r.harvest.positives(),
            r.harvest.negatives()
        ));
        if timings {
            out.push_str(&format!(",{:.3}", r.seconds));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_problem;
    use crate::saturation::ProofDag;

    #[test]
    fn harvest_from_two_unit_proof() {
        let p = parse_problem("cnf(a, axiom, p).\ncnf(b, negated_conjecture, ~p).").unwrap();
        let r = saturate(&p, &crate::guidance::e0_strategy(), &Limits::default());
        let h = harvest(&p, &r);
        assert_eq!(h.positives(), r.trace.len());
        assert_eq!(h.negatives(), 0);
        assert_eq!(h.conjecture.len(), 1);
    }

    #[test]
    fn harvest_splits_trace_by_proof() {
        let p = parse_problem(
            "cnf(a, axiom, q(a)).\ncnf(b, axiom, q(b)).\ncnf(c, axiom, q(c)).\ncnf(d, axiom, r(a)).\ncnf(e, axiom, r(b)).\n\
             cnf(f, axiom, r(c)).\ncnf(g, axiom, p(a)).\ncnf(h, axiom, ~p(X) | s(X)).\ncnf(i, negated_conjecture, ~s(a)).",
        )
        .unwrap();
        let fifo = crate::saturation::Strategy::new(vec![crate::saturation::EvalQueue::new(1, crate::saturation::Fifo)], true).unwrap();
        let r = saturate(&p, &fifo, &Limits::default());
        let dag: ProofDag = r.proof().unwrap();
        let h = harvest(&p, &r);
        let in_proof = r.trace.iter().filter(|id| dag.contains(**id)).count();
        assert_eq!(h.positives(), in_proof);
        assert_eq!(h.negatives(), r.trace.len() - in_proof);
        assert_eq!(h.examples.len(), r.trace.len());
    }

    #[test]
    fn unsolved_runs_harvest_nothing() {
        let p = parse_problem("cnf(a, axiom, p(a)).\ncnf(b, negated_conjecture, ~q).").unwrap();
        let r = saturate(&p, &crate::guidance::e0_strategy(), &Limits::default());
        assert!(!r.status.is_unsat());
        assert_eq!(harvest(&p, &r), Harvest::default());
    }

    #[test]
    fn shuffling_is_seeded() {
        let text: String = (0..12).map(|i| format!("cnf(c{i}, axiom, p{i}).\n")).collect();
        let p = parse_problem(&text).unwrap();
        let names = |q: &Problem| q.clauses.iter().map(|c| c.name().unwrap_or("").to_string()).collect::<Vec<_>>();
        assert_eq!(names(&shuffled(&p, 0)), names(&p));
        assert_eq!(names(&shuffled(&p, 3)), names(&shuffled(&p, 3)));
        assert_ne!(names(&shuffled(&p, 3)), names(&shuffled(&p, 4)));
    }
}
