use std::collections::HashMap;
use std::fmt;

/// Index of a symbol inside a [`Signature`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Function,
    Predicate,
    Equality,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

/// Name used for the built-in equality symbol.
pub const EQUALITY_NAME: &str = "=";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("symbol `{name}` used with arity {found}, previously {expected}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("symbol `{name}` used as {found:?}, previously {expected:?}")]
    KindMismatch {
        name: String,
        expected: SymbolKind,
        found: SymbolKind,
    },
}

/// Interned symbol table shared by all clauses of one problem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
    index: HashMap<String, SymbolId>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Looks up or registers `name`, enforcing a single arity and kind per name.
    pub fn intern(
        &mut self,
        name: &str,
        arity: usize,
        kind: SymbolKind,
    ) -> Result<SymbolId, SignatureError> {
        if let Some(&id) = self.index.get(name) {
            let sym = &self.symbols[id.0 as usize];
            if sym.kind != kind {
                return Err(SignatureError::KindMismatch {
                    name: name.to_string(),
                    expected: sym.kind,
                    found: kind,
                });
            }
            if sym.arity != arity {
                return Err(SignatureError::ArityMismatch {
                    name: name.to_string(),
                    expected: sym.arity,
                    found: arity,
                });
            }
            return Ok(id);
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(Symbol {
            name: name.to_string(),
            arity,
            kind,
        });
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn function(&mut self, name: &str, arity: usize) -> SymbolId {
        self.intern(name, arity, SymbolKind::Function)
            .expect("conflicting function symbol")
    }

    pub fn predicate(&mut self, name: &str, arity: usize) -> SymbolId {
        self.intern(name, arity, SymbolKind::Predicate)
            .expect("conflicting predicate symbol")
    }

    pub fn get(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.0 as usize]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.0 as usize].name
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i as u32), s))
    }
}

/// A first-order term. Variables are clause-local indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(u32),
    App(SymbolId, Vec<Term>),
}

impl Term {
    pub fn constant(sym: SymbolId) -> Self {
        Term::App(sym, Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn occurs(&self, var: u32) -> bool {
        match self {
            Term::Var(v) => *v == var,
            Term::App(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Largest variable index, if any.
    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    /// Depth with constants and variables at depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// (symbol occurrences, variable occurrences)
    pub fn symbol_counts(&self) -> (usize, usize) {
        match self {
            Term::Var(_) => (0, 1),
            Term::App(_, args) => args.iter().fold((1, 0), |(f, v), a| {
                let (af, av) = a.symbol_counts();
                (f + af, v + av)
            }),
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Term::App(_, args) => args.get(i)?.subterm(rest),
                Term::Var(_) => None,
            },
        }
    }

    pub fn replace_at(&self, path: &[usize], with: &Term) -> Option<Term> {
        match path.split_first() {
            None => Some(with.clone()),
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let inner = args.get(i)?.replace_at(rest, with)?;
                    let mut args = args.clone();
                    args[i] = inner;
                    Some(Term::App(*f, args))
                }
                Term::Var(_) => None,
            },
        }
    }

    /// Paths of every non-variable subterm in left-to-right preorder.
    pub fn non_var_positions(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let Term::App(_, args) = self {
            out.push(prefix.clone());
            for (i, a) in args.iter().enumerate() {
                prefix.push(i);
                a.non_var_positions(prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(s, args) => Term::App(*s, args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => write!(f, "X{v}"),
            Term::App(s, args) => {
                f.write_str(self.sig.name(*s))?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{}", a.display(self.sig))?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Pred(SymbolId, Vec<Term>),
    /// Unordered: `Eq(s, t)` and `Eq(t, s)` denote the same atom.
    Eq(Term, Term),
}

impl Atom {
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Atom {
        match self {
            Atom::Pred(p, args) => Atom::Pred(*p, args.iter().map(&mut *f).collect()),
            Atom::Eq(l, r) => Atom::Eq(f(l), f(r)),
        }
    }

    /// Top-level terms of the atom, in position order.
    pub fn args(&self) -> ArgsIter<'_> {
        match self {
            Atom::Pred(_, args) => ArgsIter::Slice(args.iter()),
            Atom::Eq(l, r) => ArgsIter::Pair([l, r].into_iter()),
        }
    }

    /// Syntactic equality, with equations compared in both orientations.
    pub fn same_modulo_orientation(&self, other: &Atom) -> bool {
        match (self, other) {
            (Atom::Eq(a, b), Atom::Eq(c, d)) => (a == c && b == d) || (a == d && b == c),
            _ => self == other,
        }
    }
}

pub enum ArgsIter<'a> {
    Slice(std::slice::Iter<'a, Term>),
    Pair(std::array::IntoIter<&'a Term, 2>),
}

impl<'a> Iterator for ArgsIter<'a> {
    type Item = &'a Term;
    fn next(&mut self) -> Option<&'a Term> {
        match self {
            ArgsIter::Slice(it) => it.next(),
            ArgsIter::Pair(it) => it.next(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pred(positive: bool, head: SymbolId, args: Vec<Term>) -> Self {
        Literal {
            positive,
            atom: Atom::Pred(head, args),
        }
    }

    pub fn eq(positive: bool, lhs: Term, rhs: Term) -> Self {
        Literal {
            positive,
            atom: Atom::Eq(lhs, rhs),
        }
    }

    pub fn is_equation(&self) -> bool {
        matches!(self.atom, Atom::Eq(..))
    }

    /// Predicate head, `None` for equations.
    pub fn head(&self) -> Option<SymbolId> {
        match &self.atom {
            Atom::Pred(p, _) => Some(*p),
            Atom::Eq(..) => None,
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        self.atom.args().filter_map(Term::max_var).max()
    }

    /// Term at a literal position. For predicates the first path element
    /// indexes the arguments; for equations it picks the side (0 or 1).
    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        let (&first, rest) = path.split_first()?;
        match &self.atom {
            Atom::Pred(_, args) => args.get(first)?.subterm(rest),
            Atom::Eq(l, r) => match first {
                0 => l.subterm(rest),
                1 => r.subterm(rest),
                _ => None,
            },
        }
    }

    pub fn replace_at(&self, path: &[usize], with: &Term) -> Option<Literal> {
        let (&first, rest) = path.split_first()?;
        let atom = match &self.atom {
            Atom::Pred(p, args) => {
                let mut args = args.clone();
                let slot = args.get_mut(first)?;
                *slot = slot.replace_at(rest, with)?;
                Atom::Pred(*p, args)
            }
            Atom::Eq(l, r) => match first {
                0 => Atom::Eq(l.replace_at(rest, with)?, r.clone()),
                1 => Atom::Eq(l.clone(), r.replace_at(rest, with)?),
                _ => return None,
            },
        };
        Some(Literal {
            positive: self.positive,
            atom,
        })
    }

    /// Every non-variable subterm position, preorder, left to right.
    pub fn non_var_positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        for (i, t) in self.atom.args().enumerate() {
            prefix.push(i);
            t.non_var_positions(&mut prefix, &mut out);
            prefix.pop();
        }
        out
    }

    pub fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Literal {
        Literal {
            positive: self.positive,
            atom: self.atom.map_terms(&mut |t| t.map_vars(f)),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.args().all(Term::is_ground)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> LiteralDisplay<'a> {
        LiteralDisplay { lit: self, sig }
    }
}

pub struct LiteralDisplay<'a> {
    lit: &'a Literal,
    sig: &'a Signature,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lit.atom {
            Atom::Eq(l, r) => {
                let op = if self.lit.positive { "=" } else { "!=" };
                write!(f, "{} {op} {}", l.display(self.sig), r.display(self.sig))
            }
            Atom::Pred(p, args) => {
                if !self.lit.positive {
                    f.write_str("~")?;
                }
                write!(f, "{}", Term::App(*p, args.clone()).display(self.sig))
            }
        }
    }
}
