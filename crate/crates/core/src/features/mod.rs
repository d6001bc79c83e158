//! Clause featurization: hashed vertical term walks of length ≤ 3, a
//! conjecture context block, and three numeric statistics.
//!
//! Layout of a vector under `bits = b`:
//!
//! | slots                     | content                              |
//! |---------------------------|--------------------------------------|
//! | `[0, 2^b)`                | clause walk counts                   |
//! | `[2^b, 2^(b+1))`          | conjecture walk counts               |
//! | `2^(b+1)`, `+1`, `+2`     | literal count, weight, max term depth|

mod abstraction;
mod walks;

pub use abstraction::{
    abstract_literal, normalize_literals, normalize_symbols, AbstractClause, AbstractLiteral, AbstractParseError,
    AbstractTerm, EQ_TOKEN, SKOLEM_TOKEN, VAR_TOKEN,
};
pub use walks::{hash_bucket, vertical_walks, WALK_SEPARATOR};

use std::collections::BTreeMap;

use crate::logic::{Clause, Problem, Role, Signature};

pub const MIN_BITS: u8 = 5;
pub const MAX_BITS: u8 = 16;
pub const WALK_LENGTH: usize = 3;
pub const STAT_SLOTS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FeatureError {
    #[error("feature bits must be in [{MIN_BITS}, {MAX_BITS}], got {0}")]
    BitsOutOfRange(u32),
    #[error("feature vector built with {found} bits, expected {expected}")]
    ConfigMismatch { expected: u8, found: u8 },
    #[error("conjecture slot {slot} exceeds the clause block of size {block}")]
    ConjectureOutOfBlock { slot: u32, block: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FeatureConfig {
    bits: u8,
}

impl FeatureConfig {
    pub fn new(bits: u32) -> Result<Self, FeatureError> {
        if !(MIN_BITS as u32..=MAX_BITS as u32).contains(&bits) {
            return Err(FeatureError::BitsOutOfRange(bits));
        }
        Ok(FeatureConfig { bits: bits as u8 })
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    /// Size of one walk block (clause or conjecture).
    pub fn block(&self) -> u32 {
        1 << self.bits
    }

    pub fn dimension(&self) -> u32 {
        2 * self.block() + STAT_SLOTS
    }

    pub fn stat_slot(&self, k: u32) -> u32 {
        2 * self.block() + k
    }
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig { bits: 15 }
    }
}

/// Sparse slot → count vector, sorted by slot, counts ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureVector {
    bits: u8,
    entries: Vec<(u32, u32)>,
}

impl FeatureVector {
    pub fn empty(cfg: FeatureConfig) -> Self {
        FeatureVector {
            bits: cfg.bits,
            entries: Vec::new(),
        }
    }

    /// Builds a vector from arbitrary (slot, count) pairs; duplicates are
    /// summed and zero counts dropped.
    pub fn from_pairs(cfg: FeatureConfig, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m: BTreeMap<u32, u32> = BTreeMap::new();
        for (s, c) in pairs {
            *m.entry(s).or_insert(0) += c;
        }
        FeatureVector {
            bits: cfg.bits,
            entries: m.into_iter().filter(|(_, c)| *c > 0).collect(),
        }
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn config(&self) -> FeatureConfig {
        FeatureConfig { bits: self.bits }
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value at `slot`; absent slots are 0.
    pub fn get(&self, slot: u32) -> u32 {
        self.entries
            .binary_search_by_key(&slot, |e| e.0)
            .map_or(0, |i| self.entries[i].1)
    }

    pub fn check_config(&self, cfg: FeatureConfig) -> Result<(), FeatureError> {
        if self.bits != cfg.bits {
            return Err(FeatureError::ConfigMismatch {
                expected: cfg.bits,
                found: self.bits,
            });
        }
        Ok(())
    }
}

fn walk_counts<'a>(clauses: impl IntoIterator<Item = &'a AbstractClause>, cfg: FeatureConfig) -> Vec<(u32, u32)> {
    clauses
        .into_iter()
        .flat_map(vertical_walks)
        .map(|w| (hash_bucket(&w, cfg.bits as u32), 1))
        .collect()
}

/// Featurizes an abstracted clause in the context of a conjecture vector.
pub fn featurize_abstract(c: &AbstractClause, conj: &FeatureVector, cfg: FeatureConfig) -> Result<FeatureVector, FeatureError> {
    conj.check_config(cfg)?;
    let block = cfg.block();
    if let Some(&(slot, _)) = conj.entries.iter().find(|(s, _)| *s >= block) {
        return Err(FeatureError::ConjectureOutOfBlock { slot, block });
    }
    let mut pairs = walk_counts([c], cfg);
    pairs.extend(conj.entries.iter().map(|&(s, n)| (s + block, n)));
    let weight: usize = c.literals.iter().map(AbstractLiteral::weight).sum();
    let depth = c.literals.iter().map(AbstractLiteral::max_depth).max().unwrap_or(0);
    pairs.push((cfg.stat_slot(0), c.literals.len() as u32));
    pairs.push((cfg.stat_slot(1), weight as u32));
    pairs.push((cfg.stat_slot(2), depth as u32));
    Ok(FeatureVector::from_pairs(cfg, pairs))
}

pub fn featurize(c: &Clause, sig: &Signature, conj: &FeatureVector, cfg: FeatureConfig) -> Result<FeatureVector, FeatureError> {
    featurize_abstract(&normalize_symbols(c, sig), conj, cfg)
}

/// Count-sum of the walk features of all conjecture clauses, clause block only.
pub fn featurize_conjecture_abstract(conjectures: &[AbstractClause], cfg: FeatureConfig) -> FeatureVector {
    FeatureVector::from_pairs(cfg, walk_counts(conjectures, cfg))
}

pub fn conjecture_clauses(problem: &Problem) -> Vec<AbstractClause> {
    problem
        .clauses
        .iter()
        .filter(|c| c.role == Role::NegatedConjecture)
        .map(|c| normalize_symbols(c, &problem.signature))
        .collect()
}

pub fn featurize_conjecture(problem: &Problem, cfg: FeatureConfig) -> FeatureVector {
    featurize_conjecture_abstract(&conjecture_clauses(problem), cfg)
}

/// One training example per line: `<label> <slot>:<count> ...`, slots
/// strictly ascending.
pub fn format_example(fv: &FeatureVector, label: bool) -> String {
    let mut out = String::from(if label { "1" } else { "0" });
    for (s, n) in &fv.entries {
        out.push_str(&format!(" {s}:{n}"));
    }
    out
}

pub fn parse_example(line: &str, cfg: FeatureConfig) -> Result<(FeatureVector, bool), String> {
    let mut words = line.split_whitespace();
    let label = match words.next() {
        Some("1") => true,
        Some("0") => false,
        Some(w) => return Err(format!("label must be 0 or 1, found `{w}`")),
        None => return Err("empty example line".into()),
    };
    let mut entries: Vec<(u32, u32)> = Vec::new();
    for w in words {
        let (s, n) = w.split_once(':').ok_or_else(|| format!("expected `slot:count`, found `{w}`"))?;
        let s: u32 = s.parse().map_err(|_| format!("invalid slot `{s}`"))?;
        let n: u32 = n.parse().map_err(|_| format!("invalid count `{n}`"))?;
        if s >= cfg.dimension() {
            return Err(format!("slot {s} out of range for {} bits", cfg.bits()));
        }
        if n == 0 {
            return Err(format!("slot {s} has count 0"));
        }
        if entries.last().is_some_and(|&(p, _)| p >= s) {
            return Err("slots must be strictly ascending".into());
        }
        entries.push((s, n));
    }
    Ok((FeatureVector { bits: cfg.bits, entries }, label))
}
