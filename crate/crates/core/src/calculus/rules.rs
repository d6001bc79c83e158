use crate::logic::clause::{instantiate, shift_vars};
use crate::logic::{unify, unify_atoms, Atom, Clause, ClauseId, Literal, Orientation, Step, Term};

/// One inference: the (normalized) conclusion and a replayable record of
/// how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferenceOutcome {
    pub conclusion: Vec<Literal>,
    pub step: Step,
}

impl InferenceOutcome {
    pub fn rule(&self) -> crate::logic::Rule {
        self.step.rule()
    }

    pub fn premises(&self) -> Vec<ClauseId> {
        self.step.premises()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalculusError {
    #[error("literal {0} is not a positive equation")]
    NotPositiveEquation(usize),
    #[error("literal {lit} has no subterm at {path:?}")]
    InvalidPosition { lit: usize, path: Vec<usize> },
    #[error("paramodulation into variable position {path:?} of literal {lit}")]
    VariablePosition { lit: usize, path: Vec<usize> },
}

fn without(lits: &[Literal], skip: usize) -> impl Iterator<Item = &Literal> {
    lits.iter().enumerate().filter(move |(k, _)| *k != skip).map(|(_, l)| l)
}

/// Binary resolution on literal `i` of `c1` and `j` of `c2`. The clauses
/// must already be variable-disjoint.
pub fn resolve(c1: &Clause, i: usize, c2: &Clause, j: usize) -> Option<InferenceOutcome> {
    resolve_lits(&c1.literals, i, &c2.literals, j).map(|conclusion| InferenceOutcome {
        conclusion,
        step: Step::Resolution {
            left: c1.id,
            left_lit: i,
            right: c2.id,
            right_lit: j,
        },
    })
}

pub(crate) fn resolve_lits(l1: &[Literal], i: usize, l2: &[Literal], j: usize) -> Option<Vec<Literal>> {
    let (a, b) = (l1.get(i)?, l2.get(j)?);
    if a.positive == b.positive || a.is_equation() || b.is_equation() || a.head() != b.head() {
        return None;
    }
    let s = unify_atoms(&a.atom, &b.atom)?;
    let rest: Vec<Literal> = without(l1, i).chain(without(l2, j)).cloned().collect();
    Some(instantiate(&s, &rest))
}

/// Factoring of literals `i` and `j` (same polarity and head); keeps `i`.
pub fn factor(c: &Clause, i: usize, j: usize) -> Option<InferenceOutcome> {
    factor_lits(&c.literals, i, j).map(|conclusion| InferenceOutcome {
        conclusion,
        step: Step::Factoring {
            parent: c.id,
            keep: i,
            drop: j,
        },
    })
}

pub(crate) fn factor_lits(lits: &[Literal], i: usize, j: usize) -> Option<Vec<Literal>> {
    if i == j {
        return None;
    }
    let (a, b) = (lits.get(i)?, lits.get(j)?);
    if a.positive != b.positive || a.head() != b.head() {
        return None;
    }
    let s = unify_atoms(&a.atom, &b.atom)?;
    let rest: Vec<Literal> = without(lits, j).cloned().collect();
    Some(instantiate(&s, &rest))
}

/// Resolves a negative equation `s != t` against reflexivity.
pub fn equality_resolution(c: &Clause, i: usize) -> Option<InferenceOutcome> {
    eq_res_lits(&c.literals, i).map(|conclusion| InferenceOutcome {
        conclusion,
        step: Step::EqualityResolution { parent: c.id, lit: i },
    })
}

pub(crate) fn eq_res_lits(lits: &[Literal], i: usize) -> Option<Vec<Literal>> {
    let lit = lits.get(i)?;
    let Atom::Eq(l, r) = &lit.atom else { return None };
    if lit.positive {
        return None;
    }
    let s = unify(l, r)?;
    let rest: Vec<Literal> = without(lits, i).cloned().collect();
    Some(instantiate(&s, &rest))
}

/// Paramodulation from the positive equation at `eq_index` of `from` into
/// the non-variable subterm at (`lit_index`, `path`) of `into`. Under the
/// identity ordering either side of the equation may be used.
pub fn paramodulate(
    from: &Clause,
    eq_index: usize,
    orientation: Orientation,
    into: &Clause,
    lit_index: usize,
    path: &[usize],
) -> Result<Option<InferenceOutcome>, CalculusError> {
    let conclusion = paramod_lits(&from.literals, eq_index, orientation, &into.literals, lit_index, path)?;
    Ok(conclusion.map(|conclusion| InferenceOutcome {
        conclusion,
        step: Step::Paramodulation {
            from: from.id,
            eq_lit: eq_index,
            orientation,
            into: into.id,
            into_lit: lit_index,
            path: path.to_vec(),
        },
    }))
}

pub(crate) fn oriented(lit: &Literal, orientation: Orientation) -> Option<(&Term, &Term)> {
    match (&lit.atom, lit.positive) {
        (Atom::Eq(l, r), true) => Some(match orientation {
            Orientation::LeftToRight => (l, r),
            Orientation::RightToLeft => (r, l),
        }),
        _ => None,
    }
}

pub(crate) fn paramod_lits(
    from: &[Literal],
    eq_index: usize,
    orientation: Orientation,
    into: &[Literal],
    lit_index: usize,
    path: &[usize],
) -> Result<Option<Vec<Literal>>, CalculusError> {
    let (lhs, rhs) = from
        .get(eq_index)
        .and_then(|l| oriented(l, orientation))
        .ok_or(CalculusError::NotPositiveEquation(eq_index))?;
    let target_lit = into.get(lit_index).ok_or_else(|| CalculusError::InvalidPosition {
        lit: lit_index,
        path: path.to_vec(),
    })?;
    let sub = target_lit.subterm(path).ok_or_else(|| CalculusError::InvalidPosition {
        lit: lit_index,
        path: path.to_vec(),
    })?;
    if sub.is_var() {
        return Err(CalculusError::VariablePosition {
            lit: lit_index,
            path: path.to_vec(),
        });
    }
    Ok(paramod_unchecked(from, eq_index, lhs, rhs, into, lit_index, path, sub))
}

#[allow(clippy::too_many_arguments)]
fn paramod_unchecked(
    from: &[Literal],
    eq_index: usize,
    lhs: &Term,
    rhs: &Term,
    into: &[Literal],
    lit_index: usize,
    path: &[usize],
    sub: &Term,
) -> Option<Vec<Literal>> {
    // cheap head check before a full unification
    if let (Term::App(f, _), Term::App(g, _)) = (lhs, sub) {
        if f != g {
            return None;
        }
    }
    let s = unify(lhs, sub)?;
    let rewritten = into[lit_index].replace_at(path, rhs)?;
    let mut rest: Vec<Literal> = without(from, eq_index).cloned().collect();
    for (k, l) in into.iter().enumerate() {
        rest.push(if k == lit_index { rewritten.clone() } else { l.clone() });
    }
    Some(instantiate(&s, &rest))
}

/// All inferences between `given` and each clause of `processed` ∪ {given}
/// (every literal participates), followed by factoring and equality
/// resolution on `given`. Partners are visited in id order.
pub fn generate<'a>(given: &Clause, processed: impl IntoIterator<Item = &'a Clause>) -> Vec<InferenceOutcome> {
    let mut partners: Vec<&Clause> = processed.into_iter().filter(|c| c.id != given.id).collect();
    partners.push(given);
    partners.sort_by_key(|c| c.id);

    let offset = crate::logic::clause::rename_offset(&given.literals);
    let mut out = Vec::new();
    for partner in partners {
        let is_self = partner.id == given.id;
        let renamed = shift_vars(&partner.literals, offset);
        generate_binary(given, partner.id, &renamed, is_self, &mut out);
    }
    generate_unary(given, &mut out);
    out
}

fn generate_binary(given: &Clause, pid: ClauseId, partner: &[Literal], is_self: bool, out: &mut Vec<InferenceOutcome>) {
    let g = &given.literals;
    for i in 0..g.len() {
        for j in 0..partner.len() {
            if is_self && j <= i {
                continue;
            }
            if let Some(conclusion) = resolve_lits(g, i, partner, j) {
                out.push(InferenceOutcome {
                    conclusion,
                    step: Step::Resolution {
                        left: given.id,
                        left_lit: i,
                        right: pid,
                        right_lit: j,
                    },
                });
            }
        }
    }
    paramod_all(g, given.id, partner, pid, out);
    if !is_self {
        paramod_all(partner, pid, g, given.id, out);
    }
}

/// Every paramodulation from equations of `from` into `into`.
fn paramod_all(from: &[Literal], from_id: ClauseId, into: &[Literal], into_id: ClauseId, out: &mut Vec<InferenceOutcome>) {
    let positions: Vec<Vec<Vec<usize>>> = into.iter().map(Literal::non_var_positions).collect();
    for (e, eq) in from.iter().enumerate() {
        for orientation in [Orientation::LeftToRight, Orientation::RightToLeft] {
            let Some((lhs, rhs)) = oriented(eq, orientation) else { continue };
            for (k, lit) in into.iter().enumerate() {
                for path in &positions[k] {
                    let sub = lit.subterm(path).expect("position from enumeration");
                    if let Some(conclusion) = paramod_unchecked(from, e, lhs, rhs, into, k, path, sub) {
                        out.push(InferenceOutcome {
                            conclusion,
                            step: Step::Paramodulation {
                                from: from_id,
                                eq_lit: e,
                                orientation,
                                into: into_id,
                                into_lit: k,
                                path: path.clone(),
                            },
                        });
                    }
                }
            }
        }
    }
}

fn generate_unary(given: &Clause, out: &mut Vec<InferenceOutcome>) {
    let g = &given.literals;
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            if let Some(conclusion) = factor_lits(g, i, j) {
                out.push(InferenceOutcome {
                    conclusion,
                    step: Step::Factoring {
                        parent: given.id,
                        keep: i,
                        drop: j,
                    },
                });
            }
        }
    }
    for i in 0..g.len() {
        if let Some(conclusion) = eq_res_lits(g, i) {
            out.push(InferenceOutcome {
                conclusion,
                step: Step::EqualityResolution { parent: given.id, lit: i },
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{clause::is_variant, parse_problem, Problem};

    fn problem(text: &str) -> Problem {
        parse_problem(text).unwrap()
    }

    fn show(p: &Problem, lits: &[Literal]) -> String {
        crate::logic::display_literals(lits, &p.signature).to_string()
    }

    #[test]
    fn resolution_examples() {
        let p = problem("cnf(a, axiom, p(X) | q(X)).\ncnf(b, axiom, ~p(a)).\ncnf(c, axiom, p(b)).");
        let r = resolve(&p.clauses[0], 0, &p.clauses[1], 0).unwrap();
        assert_eq!(show(&p, &r.conclusion), "q(a)");
        assert!(resolve(&p.clauses[2], 0, &p.clauses[1], 0).is_none());

        let p = problem("cnf(a, axiom, p).\ncnf(b, axiom, ~p).");
        let r = resolve(&p.clauses[0], 0, &p.clauses[1], 0).unwrap();
        assert!(r.conclusion.is_empty());
        assert_eq!(r.premises(), vec![ClauseId(0), ClauseId(1)]);
    }

    #[test]
    fn factoring_examples() {
        let p = problem("cnf(a, axiom, p(X) | p(a)).\ncnf(b, axiom, p(a) | p(b)).\ncnf(c, axiom, p(X) | p(Y)).");
        assert_eq!(show(&p, &factor(&p.clauses[0], 0, 1).unwrap().conclusion), "p(a)");
        assert!(factor(&p.clauses[1], 0, 1).is_none());
        let f = factor(&p.clauses[2], 0, 1).unwrap();
        assert_eq!(show(&p, &f.conclusion), "p(X0)");
    }

    #[test]
    fn equality_resolution_examples() {
        let p = problem("cnf(a, axiom, X != a | p(X)).\ncnf(b, axiom, a != a).\ncnf(c, axiom, f(a) != g(a)).");
        assert_eq!(show(&p, &equality_resolution(&p.clauses[0], 0).unwrap().conclusion), "p(a)");
        assert!(equality_resolution(&p.clauses[1], 0).unwrap().conclusion.is_empty());
        assert!(equality_resolution(&p.clauses[2], 0).is_none());
    }

    #[test]
    fn paramodulation_examples() {
        let p = problem("cnf(e, axiom, a = b).\ncnf(x, axiom, p(a)).\ncnf(y, axiom, p(b)).\ncnf(z, axiom, p(X)).");
        let r = paramodulate(&p.clauses[0], 0, Orientation::LeftToRight, &p.clauses[1], 0, &[0])
            .unwrap()
            .unwrap();
        assert_eq!(show(&p, &r.conclusion), "p(b)");
        let r = paramodulate(&p.clauses[0], 0, Orientation::RightToLeft, &p.clauses[2], 0, &[0])
            .unwrap()
            .unwrap();
        assert_eq!(show(&p, &r.conclusion), "p(a)");
        let err = paramodulate(&p.clauses[0], 0, Orientation::LeftToRight, &p.clauses[3], 0, &[0]).unwrap_err();
        assert!(matches!(err, CalculusError::VariablePosition { .. }));
        // a non-unifying position is a none-result, not an error
        assert_eq!(
            paramodulate(&p.clauses[0], 0, Orientation::LeftToRight, &p.clauses[2], 0, &[0]),
            Ok(None)
        );
        let err = paramodulate(&p.clauses[1], 0, Orientation::LeftToRight, &p.clauses[2], 0, &[0]).unwrap_err();
        assert_eq!(err, CalculusError::NotPositiveEquation(0));
    }

    #[test]
    fn paramodulation_orientation_symmetry() {
        let p = problem("cnf(e, axiom, f(X) = g(X)).\ncnf(e2, axiom, g(X) = f(X)).\ncnf(t, axiom, q(f(c), g(d))).");
        let into = crate::logic::rename_apart(&p.clauses[0], &p.clauses[2]);
        for path in [[0], [1]] {
            let a = paramodulate(&p.clauses[0], 0, Orientation::LeftToRight, &into, 0, &path).unwrap();
            let b = paramodulate(&p.clauses[1], 0, Orientation::RightToLeft, &into, 0, &path).unwrap();
            assert_eq!(a.map(|o| o.conclusion), b.map(|o| o.conclusion));
        }
    }

    #[test]
    fn generate_examples() {
        let p = problem("cnf(a, axiom, p).\ncnf(b, axiom, ~p).");
        let out = generate(&p.clauses[1], [&p.clauses[0]]);
        assert_eq!(out.len(), 1);
        assert!(out[0].conclusion.is_empty());

        let p = problem("cnf(a, axiom, p(X) | p(a)).");
        let out = generate(&p.clauses[0], []);
        assert!(out
            .iter()
            .any(|o| o.rule() == crate::logic::Rule::Factoring && show(&p, &o.conclusion) == "p(a)"));

        let p = problem("cnf(e, axiom, a = b).\ncnf(x, axiom, p(a)).");
        let out = generate(&p.clauses[0], [&p.clauses[1]]);
        let shown: Vec<String> = out.iter().map(|o| show(&p, &o.conclusion)).collect();
        assert!(shown.contains(&"p(b)".to_string()));
        // self-paramodulation into a = b: a → b at the left side gives b = b
        assert!(out.iter().any(|o| matches!(
            &o.step,
            Step::Paramodulation { from, into, .. } if *from == ClauseId(0) && *into == ClauseId(0)
        )));
        assert!(shown.contains(&"b = b".to_string()));
    }

    #[test]
    fn generate_is_deterministic_and_ordered() {
        let p = problem(
            "cnf(a, axiom, p(X) | ~q(X)).\ncnf(b, axiom, q(a) | X = f(X)).\ncnf(c, axiom, ~p(f(Y)) | q(Y)).\ncnf(r, axiom, ~q(f(X)) | q(X)).",
        );
        let run = || generate(&p.clauses[0], [&p.clauses[2], &p.clauses[1]]);
        let first = run();
        assert_eq!(first, run());
        let partner_of = |o: &InferenceOutcome| match &o.step {
            Step::Resolution { right, .. } => Some(right.0),
            Step::Paramodulation { from, into, .. } => Some(if *from == ClauseId(0) { into.0 } else { from.0 }),
            _ => None,
        };
        let partners: Vec<u32> = first.iter().filter_map(partner_of).collect();
        assert!(partners.windows(2).all(|w| w[0] <= w[1]), "{partners:?}");
        for o in &first {
            assert!(o.conclusion.iter().all(|l| l.max_var().is_none_or(|v| v < 8)));
        }
        assert!(first.iter().any(|o| is_variant(&o.conclusion, &p.clauses[3].literals)));
    }
}
