use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;

use super::subst::Substitution;
use super::term::{Atom, Literal, Signature, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub u32);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Axiom,
    NegatedConjecture,
    Derived,
}

impl Role {
    pub fn is_initial(self) -> bool {
        self != Role::Derived
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::NegatedConjecture => "negated_conjecture",
            Role::Derived => "plain",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Resolution,
    Factoring,
    EqualityResolution,
    Paramodulation,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Resolution => "resolution",
            Rule::Factoring => "factoring",
            Rule::EqualityResolution => "equality_resolution",
            Rule::Paramodulation => "paramodulation",
        }
    }
}

/// Direction in which a positive equation `l = r` is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    LeftToRight,
    RightToLeft,
}

/// A replayable record of one inference: the rule, its premises, and the
/// literal/subterm positions it used.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Resolution {
        left: ClauseId,
        left_lit: usize,
        right: ClauseId,
        right_lit: usize,
    },
    Factoring {
        parent: ClauseId,
        keep: usize,
        drop: usize,
    },
    EqualityResolution {
        parent: ClauseId,
        lit: usize,
    },
    Paramodulation {
        from: ClauseId,
        eq_lit: usize,
        orientation: Orientation,
        into: ClauseId,
        into_lit: usize,
        path: Vec<usize>,
    },
}

impl Step {
    pub fn rule(&self) -> Rule {
        match self {
            Step::Resolution { .. } => Rule::Resolution,
            Step::Factoring { .. } => Rule::Factoring,
            Step::EqualityResolution { .. } => Rule::EqualityResolution,
            Step::Paramodulation { .. } => Rule::Paramodulation,
        }
    }

    pub fn premises(&self) -> Vec<ClauseId> {
        match self {
            Step::Resolution { left, right, .. } => vec![*left, *right],
            Step::Factoring { parent, .. } | Step::EqualityResolution { parent, .. } => vec![*parent],
            Step::Paramodulation { from, into, .. } => vec![*from, *into],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Input { name: String },
    Inferred(Step),
}

impl Provenance {
    pub fn parents(&self) -> Vec<ClauseId> {
        match self {
            Provenance::Input { .. } => Vec::new(),
            Provenance::Inferred(step) => step.premises(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub id: ClauseId,
    pub literals: Vec<Literal>,
    pub role: Role,
    pub age: u64,
    pub provenance: Provenance,
}

impl Clause {
    /// An input clause; literals are normalized.
    pub fn input(id: ClauseId, name: &str, role: Role, literals: Vec<Literal>) -> Self {
        Clause {
            id,
            literals: normalize_literals(literals),
            role,
            age: id.0 as u64,
            provenance: Provenance::Input {
                name: name.to_string(),
            },
        }
    }

    /// A bare clause for tests and ad-hoc queries.
    pub fn from_literals(literals: Vec<Literal>) -> Self {
        Clause::input(ClauseId(0), "anon", Role::Axiom, literals)
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.literals.iter().filter_map(Literal::max_var).max()
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(Literal::is_ground)
    }

    pub fn name(&self) -> Option<&str> {
        match &self.provenance {
            Provenance::Input { name } => Some(name),
            Provenance::Inferred(_) => None,
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ClauseDisplay<'a> {
        ClauseDisplay {
            literals: &self.literals,
            sig,
        }
    }
}

pub struct ClauseDisplay<'a> {
    literals: &'a [Literal],
    sig: &'a Signature,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("$false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{}", l.display(self.sig))?;
        }
        Ok(())
    }
}

pub fn display_literals<'a>(literals: &'a [Literal], sig: &'a Signature) -> ClauseDisplay<'a> {
    ClauseDisplay { literals, sig }
}

/// Renumbers variables by first occurrence (literal order, preorder).
pub fn normalize_literals(literals: Vec<Literal>) -> Vec<Literal> {
    let mut map: HashMap<u32, u32> = HashMap::new();
    let mut next = 0u32;
    let mut rename = |v: u32| {
        let n = *map.entry(v).or_insert_with(|| {
            next += 1;
            next - 1
        });
        Term::Var(n)
    };
    literals.iter().map(|l| l.map_vars(&mut rename)).collect()
}

/// Shifts every variable of `lits` by `offset`.
pub fn shift_vars(lits: &[Literal], offset: u32) -> Vec<Literal> {
    if offset == 0 {
        return lits.to_vec();
    }
    lits.iter()
        .map(|l| l.map_vars(&mut |v| Term::Var(v + offset)))
        .collect()
}

/// Offset that makes `c2`'s variables disjoint from `c1`'s.
pub fn rename_offset(c1: &[Literal]) -> u32 {
    c1.iter()
        .filter_map(Literal::max_var)
        .max()
        .map_or(0, |m| m + 1)
}

/// Variant of `c2` whose variables are disjoint from those of `c1`.
pub fn rename_apart(c1: &Clause, c2: &Clause) -> Clause {
    let mut out = c2.clone();
    out.literals = shift_vars(&c2.literals, rename_offset(&c1.literals));
    out
}

/// Symbol-counting clause weight: every function, predicate and equality
/// symbol occurrence costs `fweight`, every variable occurrence `vweight`,
/// and positive literals are scaled by `pos_mult`.
pub fn clause_weight(literals: &[Literal], fweight: i64, vweight: i64, pos_mult: Rational64) -> Rational64 {
    literals.iter().fold(Rational64::from_integer(0), |acc, lit| {
        let (syms, vars) = literal_counts(lit);
        let w = Rational64::from_integer(fweight * syms as i64 + vweight * vars as i64);
        acc + if lit.positive { w * pos_mult } else { w }
    })
}

/// (symbol occurrences including the literal head, variable occurrences)
pub fn literal_counts(lit: &Literal) -> (usize, usize) {
    lit.atom.args().fold((1, 0), |(f, v), t| {
        let (tf, tv) = t.symbol_counts();
        (f + tf, v + tv)
    })
}

/// True iff a variable renaming makes the literal multisets equal
/// (equations compared in either orientation).
pub fn is_variant(c1: &[Literal], c2: &[Literal]) -> bool {
    if c1.len() != c2.len() {
        return false;
    }
    let mut used = vec![false; c2.len()];
    variant_search(c1, c2, &mut used, &Renaming::default())
}

#[derive(Clone, Default)]
struct Renaming {
    fwd: HashMap<u32, u32>,
    bwd: HashMap<u32, u32>,
}

impl Renaming {
    fn term(&mut self, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => match (self.fwd.get(x), self.bwd.get(y)) {
                (Some(m), Some(n)) => m == y && n == x,
                (None, None) => {
                    self.fwd.insert(*x, *y);
                    self.bwd.insert(*y, *x);
                    true
                }
                _ => false,
            },
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.term(x, y))
            }
            _ => false,
        }
    }

    fn literal(&self, a: &Literal, b: &Literal) -> Vec<Renaming> {
        if a.positive != b.positive {
            return Vec::new();
        }
        match (&a.atom, &b.atom) {
            (Atom::Pred(p, xs), Atom::Pred(q, ys)) if p == q && xs.len() == ys.len() => {
                let mut r = self.clone();
                if xs.iter().zip(ys).all(|(x, y)| r.term(x, y)) {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            (Atom::Eq(l1, r1), Atom::Eq(l2, r2)) => [(l2, r2), (r2, l2)]
                .into_iter()
                .filter_map(|(x, y)| {
                    let mut r = self.clone();
                    (r.term(l1, x) && r.term(r1, y)).then_some(r)
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}

fn variant_search(c1: &[Literal], c2: &[Literal], used: &mut [bool], ren: &Renaming) -> bool {
    let Some((first, rest)) = c1.split_first() else {
        return true;
    };
    for j in 0..c2.len() {
        if used[j] {
            continue;
        }
        for next in ren.literal(first, &c2[j]) {
            used[j] = true;
            if variant_search(rest, c2, used, &next) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Applies `s` and renumbers.
pub fn instantiate(s: &Substitution, lits: &[Literal]) -> Vec<Literal> {
    normalize_literals(s.apply_literals(lits))
}
