//! Learned clause evaluation and the three selection strategies: `e0`
//! (weight and age), `solo` (model only) and `coop` (model and E0 sharing
//! picks 50:50).

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;

use crate::features::{featurize, featurize_abstract, featurize_conjecture, AbstractClause, FeatureConfig, FeatureError, FeatureVector};
use crate::learning::{GbdtModel, LearnError};
use crate::logic::{Clause, Problem, Signature};
use crate::saturation::{ClauseEvaluator, ClauseWeight, EvalQueue, Fifo, Strategy};

pub const POSITIVE_WEIGHT: i64 = 1;
pub const NEGATIVE_WEIGHT: i64 = 10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GuidanceError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Model(#[from] LearnError),
    #[error("unknown strategy `{0}` (expected e0, solo or coop)")]
    UnknownMode(String),
    #[error("strategy `{0}` needs a model")]
    MissingModel(String),
}

/// Weight 1 for clauses the model calls positive (probability ≥ 0.5),
/// weight 10 otherwise.
pub struct ModelCef {
    model: Arc<GbdtModel>,
    conjecture: FeatureVector,
    config: FeatureConfig,
}

impl ModelCef {
    pub fn new(model: Arc<GbdtModel>, conjecture: FeatureVector, config: FeatureConfig) -> Result<Self, GuidanceError> {
        let probe = featurize_abstract(&AbstractClause::default(), &conjecture, config)?;
        model.predict_margin(&probe)?;
        Ok(ModelCef {
            model,
            conjecture,
            config,
        })
    }

    pub fn for_problem(model: Arc<GbdtModel>, problem: &Problem) -> Result<Self, GuidanceError> {
        let config = model.config();
        let conj = featurize_conjecture(problem, config);
        ModelCef::new(model, conj, config)
    }

    pub fn probability(&self, clause: &Clause, sig: &Signature) -> f64 {
        let fv = featurize(clause, sig, &self.conjecture, self.config).expect("configuration checked in ModelCef::new");
        self.model.predict_prob(&fv).expect("configuration checked in ModelCef::new")
    }
}

pub fn weight_for_probability(p: f64) -> i64 {
    if p >= 0.5 {
        POSITIVE_WEIGHT
    } else {
        NEGATIVE_WEIGHT
    }
}

impl ClauseEvaluator for ModelCef {
    fn evaluate(&self, clause: &Clause, sig: &Signature) -> Rational64 {
        Rational64::from_integer(weight_for_probability(self.probability(clause, sig)))
    }

    fn name(&self) -> String {
        format!("model(bits={},trees={})", self.config.bits(), self.model.trees.len())
    }
}

pub fn e0_strategy() -> Strategy {
    Strategy::new(vec![EvalQueue::new(5, ClauseWeight::default()), EvalQueue::new(1, Fifo)], true)
        .expect("static queue list is valid")
}

pub fn solo_strategy(cef: ModelCef) -> Strategy {
    Strategy::new(vec![EvalQueue::new(1, cef)], true).expect("static queue list is valid")
}

/// Model at frequency 6, then E0's weight and age queues at 5 and 1.
pub fn coop_strategy(cef: ModelCef) -> Strategy {
    Strategy::new(
        vec![EvalQueue::new(6, cef), EvalQueue::new(5, ClauseWeight::default()), EvalQueue::new(1, Fifo)],
        true,
    )
    .expect("static queue list is valid")
}

#[derive(Clone, Debug)]
pub enum GuidanceMode {
    Baseline,
    Solo(Arc<GbdtModel>),
    Coop(Arc<GbdtModel>),
}

impl GuidanceMode {
    /// Builds a mode from its CLI name.
    pub fn from_name(name: &str, model: Option<Arc<GbdtModel>>) -> Result<Self, GuidanceError> {
        match (name, model) {
            ("e0", _) => Ok(GuidanceMode::Baseline),
            ("solo", Some(m)) => Ok(GuidanceMode::Solo(m)),
            ("coop", Some(m)) => Ok(GuidanceMode::Coop(m)),
            ("solo" | "coop", None) => Err(GuidanceError::MissingModel(name.to_string())),
            _ => Err(GuidanceError::UnknownMode(name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GuidanceMode::Baseline => "e0",
            GuidanceMode::Solo(_) => "solo",
            GuidanceMode::Coop(_) => "coop",
        }
    }

    /// The strategy for one problem; model modes featurize its conjecture.
    pub fn strategy_for(&self, problem: &Problem) -> Result<Strategy, GuidanceError> {
        Ok(match self {
            GuidanceMode::Baseline => e0_strategy(),
            GuidanceMode::Solo(m) => solo_strategy(ModelCef::for_problem(m.clone(), problem)?),
            GuidanceMode::Coop(m) => coop_strategy(ModelCef::for_problem(m.clone(), problem)?),
        })
    }
}

impl fmt::Display for GuidanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
