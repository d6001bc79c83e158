//! Proof extraction, independent replay checking, and proof listings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::calculus::{eq_res_lits, factor_lits, paramod_lits, resolve_lits};
use crate::logic::clause::{rename_offset, shift_vars};
use crate::logic::{is_variant, Clause, ClauseId, Literal, Problem, Provenance, Step};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("clause {child} names missing parent {parent}")]
    MissingParent { child: ClauseId, parent: ClauseId },
    #[error("root clause {0} is not in the clause set")]
    MissingRoot(ClauseId),
}

/// The ancestors of an empty clause, keyed by id.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofDag {
    pub root: ClauseId,
    pub nodes: BTreeMap<ClauseId, Clause>,
}

impl ProofDag {
    pub fn ids(&self) -> BTreeSet<ClauseId> {
        self.nodes.keys().copied().collect()
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Transitive closure of provenance parents from `root`, inclusive.
/// `clauses` must be indexed by id.
pub fn extract_proof(clauses: &[Clause], root: ClauseId) -> Result<ProofDag, ProofError> {
    let lookup = |id: ClauseId| clauses.get(id.0 as usize).filter(|c| c.id == id);
    lookup(root).ok_or(ProofError::MissingRoot(root))?;
    let mut nodes = BTreeMap::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if nodes.contains_key(&id) {
            continue;
        }
        let c = lookup(id).expect("checked on push");
        for parent in c.provenance.parents() {
            if lookup(parent).is_none() {
                return Err(ProofError::MissingParent { child: id, parent });
            }
            stack.push(parent);
        }
        nodes.insert(id, c.clone());
    }
    Ok(ProofDag { root, nodes })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("proof check failed at clause {node}: {reason}")]
pub struct VerifyError {
    pub node: ClauseId,
    pub reason: String,
}

/// Replays every inference of `dag` from its recorded premises and
/// positions, and checks inputs against `problem`.
pub fn verify_proof(dag: &ProofDag, problem: &Problem) -> Result<(), VerifyError> {
    let fail = |node: ClauseId, reason: &str| VerifyError {
        node,
        reason: reason.to_string(),
    };
    let root = dag.nodes.get(&dag.root).ok_or_else(|| fail(dag.root, "root missing"))?;
    if !root.is_empty() {
        return Err(fail(dag.root, "root is not the empty clause"));
    }
    for (id, node) in &dag.nodes {
        match &node.provenance {
            Provenance::Input { name } => {
                let known = problem
                    .clauses
                    .iter()
                    .filter(|c| c.name() == Some(name.as_str()))
                    .any(|c| is_variant(&c.literals, &node.literals));
                if !known {
                    return Err(fail(*id, "input clause not found in problem"));
                }
            }
            Provenance::Inferred(step) => {
                let mut parents = Vec::new();
                for p in step.premises() {
                    if p >= *id {
                        return Err(fail(*id, "parent is not older than its child"));
                    }
                    parents.push(&dag.nodes.get(&p).ok_or_else(|| fail(*id, "parent missing"))?.literals);
                }
                let replayed = replay(step, &parents).ok_or_else(|| fail(*id, "recorded inference does not apply"))?;
                if !is_variant(&replayed, &node.literals) {
                    return Err(fail(*id, "replayed conclusion differs"));
                }
            }
        }
    }
    Ok(())
}

/// Re-runs one recorded inference on its premises' literals.
pub fn replay(step: &Step, parents: &[&Vec<Literal>]) -> Option<Vec<Literal>> {
    match *step {
        Step::Resolution { left_lit, right_lit, .. } => {
            let (a, b) = (parents[0], parents[1]);
            let b = shift_vars(b, rename_offset(a));
            resolve_lits(a, left_lit, &b, right_lit)
        }
        Step::Factoring { keep, drop, .. } => factor_lits(parents[0], keep, drop),
        Step::EqualityResolution { lit, .. } => eq_res_lits(parents[0], lit),
        Step::Paramodulation {
            eq_lit,
            orientation,
            into_lit,
            ref path,
            ..
        } => {
            let (from, into) = (parents[0], parents[1]);
            let into = shift_vars(into, rename_offset(from));
            paramod_lits(from, eq_lit, orientation, &into, into_lit, path).ok().flatten()
        }
    }
}

/// One line per clause: `id. <clause> [rule, parents]`.
pub fn proof_listing(dag: &ProofDag, problem: &Problem) -> String {
    let mut out = String::new();
    for (id, c) in &dag.nodes {
        let origin = match &c.provenance {
            Provenance::Input { name } => format!("input, {name}"),
            Provenance::Inferred(step) => {
                let parents: Vec<String> = step.premises().iter().map(|p| p.to_string()).collect();
                format!("{}, {}", step.rule().as_str(), parents.join(","))
            }
        };
        let _ = writeln!(out, "{id}. {} [{origin}]", c.display(&problem.signature));
    }
    out
}
