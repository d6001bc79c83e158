//! Inference rules of an unordered resolution/paramodulation calculus:
//! with the identity ordering every literal takes part and equations can
//! be used in both directions.

mod redundancy;
mod rules;

pub use redundancy::{is_tautology, subsumes};
pub use rules::{
    equality_resolution, factor, generate, paramodulate, resolve, CalculusError, InferenceOutcome,
};
pub(crate) use rules::{eq_res_lits, factor_lits, paramod_lits, resolve_lits};
