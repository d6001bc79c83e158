//! Substitutions, syntactic unification with occurs-check, and one-sided matching.

use std::collections::BTreeMap;

use super::clause::Clause;
use super::term::{Atom, Literal, Term};

/// Finite map from variable index to term. Substitutions produced by
/// [`unify`] are idempotent and never bind a variable to itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<u32, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: u32) -> Option<&Term> {
        self.map.get(&var)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    /// Adds a binding without any checks. Identity bindings are dropped.
    pub fn insert(&mut self, var: u32, term: Term) {
        if term != Term::Var(var) {
            self.map.insert(var, term);
        }
    }

    /// Simultaneous replacement.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| self.map.get(&v).cloned().unwrap_or(Term::Var(v)))
    }

    pub fn apply_literal(&self, lit: &Literal) -> Literal {
        Literal {
            positive: lit.positive,
            atom: lit.atom.map_terms(&mut |t| self.apply(t)),
        }
    }

    pub fn apply_literals(&self, lits: &[Literal]) -> Vec<Literal> {
        lits.iter().map(|l| self.apply_literal(l)).collect()
    }

    /// Applies to a clause's literals and renumbers the result's variables
    /// contiguously from 0.
    pub fn apply_clause(&self, c: &Clause) -> Clause {
        let mut out = c.clone();
        out.literals = super::clause::normalize_literals(self.apply_literals(&c.literals));
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.map
            .values()
            .all(|t| self.map.keys().all(|v| !t.occurs(*v)))
    }
}

/// Triangular binding store used during unification.
struct Bindings {
    slots: Vec<Option<Term>>,
}

impl Bindings {
    fn new() -> Self {
        Bindings { slots: Vec::new() }
    }

    fn lookup(&self, v: u32) -> Option<&Term> {
        self.slots.get(v as usize).and_then(Option::as_ref)
    }

    fn bind(&mut self, v: u32, t: Term) {
        let i = v as usize;
        if self.slots.len() <= i {
            self.slots.resize(i + 1, None);
        }
        self.slots[i] = Some(t);
    }

    /// Follows variable bindings at the top of `t`.
    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.lookup(*v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, var: u32, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(v) => *v == var,
            Term::App(_, args) => args.iter().any(|a| self.occurs(var, a)),
        }
    }

    fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(*v),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| self.resolve(a)).collect()),
        }
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let mut stack = vec![(a.clone(), b.clone())];
        while let Some((x, y)) = stack.pop() {
            let x = self.walk(&x).clone();
            let y = self.walk(&y).clone();
            match (&x, &y) {
                (Term::Var(v), Term::Var(w)) if v == w => {}
                (Term::Var(v), t) | (t, Term::Var(v)) => {
                    if self.occurs(*v, t) {
                        return false;
                    }
                    self.bind(*v, t.clone());
                }
                (Term::App(f, xs), Term::App(g, ys)) => {
                    if f != g || xs.len() != ys.len() {
                        return false;
                    }
                    stack.extend(xs.iter().cloned().zip(ys.iter().cloned()).rev());
                }
            }
        }
        true
    }

    fn into_substitution(self) -> Substitution {
        let mut s = Substitution::new();
        for (v, slot) in self.slots.iter().enumerate() {
            if slot.is_some() {
                s.insert(v as u32, self.resolve(&Term::Var(v as u32)));
            }
        }
        s
    }
}

/// Most general unifier of a list of term pairs.
pub fn unify_all<'a>(pairs: impl IntoIterator<Item = (&'a Term, &'a Term)>) -> Option<Substitution> {
    let mut b = Bindings::new();
    for (x, y) in pairs {
        if !b.unify(x, y) {
            return None;
        }
    }
    Some(b.into_substitution())
}

/// Most general unifier of two terms (occurs-check always on).
pub fn unify(a: &Term, b: &Term) -> Option<Substitution> {
    unify_all([(a, b)])
}

/// Unifies two atoms argument-wise. Equations are unified in the stored
/// orientation only; callers try the flipped one when needed.
pub fn unify_atoms(a: &Atom, b: &Atom) -> Option<Substitution> {
    match (a, b) {
        (Atom::Pred(p, xs), Atom::Pred(q, ys)) if p == q && xs.len() == ys.len() => {
            unify_all(xs.iter().zip(ys.iter()))
        }
        (Atom::Eq(l1, r1), Atom::Eq(l2, r2)) => unify_all([(l1, l2), (r1, r2)]),
        _ => None,
    }
}

/// Extends `s` so that `s(pattern) == target`, binding only pattern
/// variables. Target variables are treated as constants.
pub fn match_term_into(pattern: &Term, target: &Term, s: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match s.map.get(v) {
            Some(bound) => bound == target,
            None => {
                s.map.insert(*v, target.clone());
                true
            }
        },
        Term::App(f, xs) => match target {
            Term::App(g, ys) if f == g && xs.len() == ys.len() => xs
                .iter()
                .zip(ys.iter())
                .all(|(x, y)| match_term_into(x, y, s)),
            _ => false,
        },
    }
}

/// One-sided matcher on terms.
pub fn match_onto(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    match_term_into(pattern, target, &mut s).then(|| {
        s.map.retain(|v, t| *t != Term::Var(*v));
        s
    })
}

/// Matches a literal onto another of the same polarity, extending `s`.
/// Equations are tried in both orientations; every successful extension is
/// returned.
pub fn match_literal_into(pattern: &Literal, target: &Literal, s: &Substitution) -> Vec<Substitution> {
    if pattern.positive != target.positive {
        return Vec::new();
    }
    match (&pattern.atom, &target.atom) {
        (Atom::Pred(p, xs), Atom::Pred(q, ys)) => {
            if p != q || xs.len() != ys.len() {
                return Vec::new();
            }
            let mut s = s.clone();
            if xs.iter().zip(ys).all(|(x, y)| match_term_into(x, y, &mut s)) {
                vec![s]
            } else {
                Vec::new()
            }
        }
        (Atom::Eq(l1, r1), Atom::Eq(l2, r2)) => {
            let mut out = Vec::with_capacity(2);
            for (a, b) in [(l2, r2), (r2, l2)] {
                let mut s = s.clone();
                if match_term_into(l1, a, &mut s) && match_term_into(r1, b, &mut s) && !out.contains(&s) {
                    out.push(s);
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

/// One-sided matcher on literals (first successful orientation).
pub fn match_literal(pattern: &Literal, target: &Literal) -> Option<Substitution> {
    match_literal_into(pattern, target, &Substitution::new())
        .into_iter()
        .next()
        .map(|mut s| {
            s.map.retain(|v, t| *t != Term::Var(*v));
            s
        })
}
