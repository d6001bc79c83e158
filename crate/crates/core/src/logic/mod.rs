//! Terms, literals and clauses over an interned signature, plus
//! substitutions, unification, matching and the CNF reader.

pub mod clause;
pub mod parse;
pub mod subst;
pub mod term;

pub use clause::{
    clause_weight, display_literals, is_variant, normalize_literals, rename_apart, Clause, ClauseId, Orientation,
    Provenance, Role, Rule, Step,
};
pub use parse::{parse_problem, parse_problem_file, parse_problem_named, ParseError, Problem};
pub use subst::{match_literal, match_onto, unify, unify_all, unify_atoms, Substitution};
pub use term::{Atom, Literal, Signature, Symbol, SymbolId, SymbolKind, Term};
