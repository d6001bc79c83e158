use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::corpus::ProblemRun;
use super::HarnessError;
use crate::features::{
    featurize_abstract, featurize_conjecture_abstract, format_example, parse_example, AbstractClause, FeatureConfig,
    FeatureVector,
};
use crate::learning::Dataset;

/// Harvested examples in abstracted form, deduplicated per problem and
/// clause. A clause seen with both labels is kept as positive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrainingStore {
    conjectures: BTreeMap<String, Vec<AbstractClause>>,
    examples: BTreeMap<(String, AbstractClause), (bool, i64)>,
}

fn key_name(name: &str) -> String {
    name.split_whitespace().collect::<Vec<_>>().join("_")
}

impl TrainingStore {
    pub fn new() -> Self {
        TrainingStore::default()
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.examples.values().filter(|v| v.0).count()
    }

    pub fn set_conjecture(&mut self, problem: &str, conj: Vec<AbstractClause>) {
        self.conjectures.entry(key_name(problem)).or_insert(conj);
    }

    /// Adds one example; returns true if the (problem, clause) pair is new.
    pub fn add(&mut self, problem: &str, clause: AbstractClause, label: bool, loop_index: i64) -> bool {
        let key = (key_name(problem), clause);
        match self.examples.get_mut(&key) {
            Some(entry) => {
                entry.0 |= label;
                false
            }
            None => {
                self.examples.insert(key, (label, loop_index));
                true
            }
        }
    }

    pub fn add_runs(&mut self, runs: &[ProblemRun], loop_index: i64) {
        for r in runs.iter().filter(|r| r.solved()) {
            self.set_conjecture(&r.name, r.harvest.conjecture.clone());
            for (c, label) in &r.harvest.examples {
                self.add(&r.name, c.clone(), *label, loop_index);
            }
        }
    }

    pub fn merge_store(&mut self, other: &TrainingStore) {
        for (p, c) in &other.conjectures {
            self.set_conjecture(p, c.clone());
        }
        for ((p, c), (label, l)) in &other.examples {
            self.add(p, c.clone(), *label, *l);
        }
    }

    /// Featurizes every example under `cfg`, merging equal vectors
    /// (positive wins). Sorted by vector.
    pub fn featurize(&self, cfg: FeatureConfig) -> BTreeMap<FeatureVector, bool> {
        let conj: BTreeMap<&String, FeatureVector> = self
            .conjectures
            .iter()
            .map(|(p, cs)| (p, featurize_conjecture_abstract(cs, cfg)))
            .collect();
        let empty = FeatureVector::empty(cfg);
        let mut out = BTreeMap::new();
        for ((p, c), (label, _)) in &self.examples {
            let cv = conj.get(p).unwrap_or(&empty);
            let fv = featurize_abstract(c, cv, cfg).expect("conjecture built under the same configuration");
            *out.entry(fv).or_insert(false) |= *label;
        }
        out
    }

    /// Text form: a `# bits` header, `# conjecture` lines, then per example a
    /// `# clause <problem> <loop> <clause>` comment and its vector line.
    pub fn to_data_text(&self, cfg: FeatureConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# bits {}", cfg.bits());
        for (p, cs) in &self.conjectures {
            for c in cs {
                let _ = writeln!(out, "# conjecture {p} {c}");
            }
        }
        let conj: BTreeMap<&String, FeatureVector> = self
            .conjectures
            .iter()
            .map(|(p, cs)| (p, featurize_conjecture_abstract(cs, cfg)))
            .collect();
        let empty = FeatureVector::empty(cfg);
        for ((p, c), (label, l)) in &self.examples {
            let fv = featurize_abstract(c, conj.get(p).unwrap_or(&empty), cfg).expect("same configuration");
            let _ = writeln!(out, "# clause {p} {l} {c}");
            let _ = writeln!(out, "{}", format_example(&fv, *label));
        }
        out
    }
}

/// A parsed training-data file. When every row carries its clause comment
/// the raw store is kept, so the rows can be re-featurized under other
/// bucket counts.
#[derive(Clone, Debug, PartialEq)]
pub struct DataFile {
    pub name: String,
    pub config: FeatureConfig,
    pub rows: Vec<(FeatureVector, bool)>,
    pub store: Option<TrainingStore>,
}

impl DataFile {
    pub fn parse(name: &str, text: &str) -> Result<Self, HarnessError> {
        let err = |line: usize, message: String| HarnessError::Data {
            file: name.to_string(),
            line,
            message,
        };
        let mut config = None;
        let mut rows = Vec::new();
        let mut store = TrainingStore::new();
        let mut conj: BTreeMap<String, Vec<AbstractClause>> = BTreeMap::new();
        let mut pending: Option<(String, i64, AbstractClause)> = None;
        let mut raw_complete = true;
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                let (tag, rest) = comment.split_once(char::is_whitespace).unwrap_or((comment, ""));
                let rest = rest.trim();
                match tag {
                    "bits" => {
                        let b: u32 = rest.parse().map_err(|_| err(n, format!("invalid bits `{rest}`")))?;
                        config = Some(FeatureConfig::new(b).map_err(|e| err(n, e.to_string()))?);
                    }
                    "conjecture" => {
                        let (p, c) = rest.split_once(char::is_whitespace).ok_or_else(|| err(n, "missing clause".into()))?;
                        let c: AbstractClause = c.parse().map_err(|e| err(n, format!("{e}")))?;
                        conj.entry(p.to_string()).or_default().push(c);
                    }
                    "clause" => {
                        let mut parts = rest.splitn(3, char::is_whitespace);
                        let (Some(p), Some(l), Some(c)) = (parts.next(), parts.next(), parts.next()) else {
                            return Err(err(n, "expected `# clause <problem> <loop> <clause>`".into()));
                        };
                        let l: i64 = l.parse().map_err(|_| err(n, format!("invalid loop `{l}`")))?;
                        let c: AbstractClause = c.parse().map_err(|e| err(n, format!("{e}")))?;
                        pending = Some((p.to_string(), l, c));
                    }
                    _ => {}
                }
                continue;
            }
            let cfg = config.ok_or_else(|| err(n, "example before `# bits` header".into()))?;
            let (fv, label) = parse_example(line, cfg).map_err(|m| err(n, m))?;
            match pending.take() {
                Some((p, l, c)) => {
                    store.add(&p, c, label, l);
                }
                None => raw_complete = false,
            }
            rows.push((fv, label));
        }
        let config = config.ok_or_else(|| err(0, "missing `# bits` header".into()))?;
        for (p, cs) in conj {
            store.set_conjecture(&p, cs);
        }
        Ok(DataFile {
            name: name.to_string(),
            config,
            rows,
            store: raw_complete.then_some(store),
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        DataFile::parse(&name, &text)
    }

    /// Vectors under `cfg`, re-featurized from raw clauses if needed.
    pub fn rows_for(&self, cfg: FeatureConfig) -> Result<Vec<(FeatureVector, bool)>, HarnessError> {
        if cfg == self.config {
            return Ok(self.rows.clone());
        }
        match &self.store {
            Some(s) => Ok(s.featurize(cfg).into_iter().collect()),
            None => Err(HarnessError::ConfigMismatch {
                file: self.name.clone(),
                expected: cfg.bits() as u32,
                found: self.config.bits() as u32,
            }),
        }
    }
}

/// A merged training set and its composition.
#[derive(Clone, Debug, PartialEq)]
pub struct Merged {
    pub dataset: Dataset,
    /// Distinct self-harvested vectors by final label.
    pub pos: usize,
    pub neg: usize,
    /// Distinct vectors contributed only by boost files.
    pub boost: usize,
}

/// Union of the store and, while `loop_index < cutoff`, the boost files.
/// Equal vectors are merged; a positive label wins.
pub fn merge(
    store: &TrainingStore,
    boost: &[DataFile],
    loop_index: usize,
    cutoff: usize,
    cfg: FeatureConfig,
) -> Result<Merged, HarnessError> {
    let mut map: BTreeMap<FeatureVector, (bool, Option<String>)> =
        store.featurize(cfg).into_iter().map(|(fv, l)| (fv, (l, None))).collect();
    if loop_index < cutoff {
        for file in boost {
            for (fv, label) in file.rows_for(cfg)? {
                let e = map.entry(fv).or_insert_with(|| (false, Some(file.name.clone())));
                e.0 |= label;
            }
        }
    }
    let mut dataset = Dataset::new();
    let (mut pos, mut neg, mut b) = (0, 0, 0);
    for (fv, (label, src)) in map {
        match &src {
            None if label => pos += 1,
            None => neg += 1,
            Some(_) => b += 1,
        }
        let tag = src.map_or_else(|| "self".to_string(), |s| format!("boost:{s}"));
        dataset.push(fv, label, tag);
    }
    Ok(Merged {
        dataset,
        pos,
        neg,
        boost: b,
    })
}
