use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;

use crate::logic::{clause_weight, Clause, Signature};

/// A clause evaluation function: smaller weights are selected first.
pub trait ClauseEvaluator: Send + Sync {
    fn evaluate(&self, clause: &Clause, sig: &Signature) -> Rational64;

    /// Short name used in statistics and debugging output.
    fn name(&self) -> String;
}

/// Symbol-counting weight, as in `Clauseweight(prio, fweight, vweight, pos_mult)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClauseWeight {
    pub fweight: i64,
    pub vweight: i64,
    pub pos_mult: Rational64,
}

impl Default for ClauseWeight {
    fn default() -> Self {
        ClauseWeight {
            fweight: 1,
            vweight: 1,
            pos_mult: Rational64::from_integer(1),
        }
    }
}

impl ClauseEvaluator for ClauseWeight {
    fn evaluate(&self, clause: &Clause, _sig: &Signature) -> Rational64 {
        clause_weight(&clause.literals, self.fweight, self.vweight, self.pos_mult)
    }

    fn name(&self) -> String {
        format!("clauseweight({},{},{})", self.fweight, self.vweight, self.pos_mult)
    }
}

/// First in, first out: the weight is the clause age.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Fifo;

impl ClauseEvaluator for Fifo {
    fn evaluate(&self, clause: &Clause, _sig: &Signature) -> Rational64 {
        Rational64::from_integer(clause.age as i64)
    }

    fn name(&self) -> String {
        "fifo".into()
    }
}

#[derive(Clone)]
pub struct EvalQueue {
    pub cef: Arc<dyn ClauseEvaluator>,
    /// Picks per scheduling round.
    pub frequency: u32,
}

impl EvalQueue {
    pub fn new(frequency: u32, cef: impl ClauseEvaluator + 'static) -> Self {
        EvalQueue {
            cef: Arc::new(cef),
            frequency,
        }
    }
}

impl fmt::Debug for EvalQueue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.frequency, self.cef.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("a strategy needs at least one queue")]
    NoQueues,
    #[error("queue {0} has frequency 0")]
    ZeroFrequency(usize),
}

/// Ordered evaluation queues plus the initial-clause preference flag.
#[derive(Clone, Debug)]
pub struct Strategy {
    queues: Vec<EvalQueue>,
    pub prefer_initial: bool,
}

impl Strategy {
    pub fn new(queues: Vec<EvalQueue>, prefer_initial: bool) -> Result<Self, StrategyError> {
        if queues.is_empty() {
            return Err(StrategyError::NoQueues);
        }
        if let Some(i) = queues.iter().position(|q| q.frequency == 0) {
            return Err(StrategyError::ZeroFrequency(i));
        }
        Ok(Strategy { queues, prefer_initial })
    }

    pub fn queues(&self) -> &[EvalQueue] {
        &self.queues
    }

    pub fn frequencies(&self) -> Vec<u32> {
        self.queues.iter().map(|q| q.frequency).collect()
    }
}

/// Resource bounds for one run. With neither bound given, the selection
/// budget defaults to [`Limits::DEFAULT_SELECTIONS`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    pub max_selections: Option<usize>,
    pub wall_seconds: Option<f64>,
}

impl Limits {
    pub const DEFAULT_SELECTIONS: usize = 1000;

    pub fn selections(n: usize) -> Self {
        Limits {
            max_selections: Some(n),
            wall_seconds: None,
        }
    }

    pub fn wall(seconds: f64) -> Self {
        Limits {
            max_selections: None,
            wall_seconds: Some(seconds),
        }
    }

    pub(crate) fn effective_selections(&self) -> Option<usize> {
        match (self.max_selections, self.wall_seconds) {
            (None, None) => Some(Self::DEFAULT_SELECTIONS),
            (n, _) => n,
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::selections(Self::DEFAULT_SELECTIONS)
    }
}
