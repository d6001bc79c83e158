//! A bare-bones saturation prover for clausal first-order logic with
//! equality: no term ordering, no literal selection, no rewriting. Clause
//! selection can be steered by gradient-boosted trees trained on the
//! prover's own proofs in a repeated prove/learn loop.

pub mod calculus;
pub mod features;
pub mod guidance;
pub mod harness;
pub mod learning;
pub mod logic;
pub mod saturation;
