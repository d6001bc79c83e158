//! Reader for the CNF fragment of TPTP.
//!
//! Accepts `cnf(name, role, formula).` statements, `include('file').`
//! directives (resolved against the including file's directory) and `%`
//! line comments. Roles `axiom`, `hypothesis` (and the other assertion
//! roles) become [`Role::Axiom`]; `negated_conjecture` is kept.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::clause::{Clause, ClauseId, Role};
use super::term::{Literal, Signature, SignatureError, SymbolKind, Term, EQUALITY_NAME};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: {source}")]
    Symbol {
        line: usize,
        col: usize,
        source: SignatureError,
    },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("problem contains no clauses")]
    Empty,
}

impl ParseError {
    /// Name of the offending symbol for arity/kind errors.
    pub fn symbol(&self) -> Option<&str> {
        match self {
            ParseError::Symbol { source, .. } => match source {
                SignatureError::ArityMismatch { name, .. } | SignatureError::KindMismatch { name, .. } => {
                    Some(name)
                }
            },
            _ => None,
        }
    }
}

/// A clause set together with its symbol table.
#[derive(Clone, Debug)]
pub struct Problem {
    pub name: String,
    pub signature: Signature,
    pub clauses: Vec<Clause>,
}

impl Problem {
    pub fn conjecture_clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses
            .iter()
            .filter(|c| c.role == Role::NegatedConjecture)
    }

    /// TPTP text that parses back to variant-equal clauses.
    pub fn to_tptp(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            let name = c.name().map(str::to_string).unwrap_or_else(|| format!("c{}", c.id));
            let _ = writeln!(out, "cnf({}, {}, {}).", name, c.role.as_str(), c.display(&self.signature));
        }
        out
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    parse_problem_named("problem", text, None)
}

pub fn parse_problem_file(path: &Path) -> Result<Problem, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "problem".into());
    parse_problem_named(&name, &text, path.parent())
}

/// Parses `text`; `include` directives are resolved against `base_dir`.
pub fn parse_problem_named(name: &str, text: &str, base_dir: Option<&Path>) -> Result<Problem, ParseError> {
    let mut builder = Builder {
        signature: Signature::new(),
        clauses: Vec::new(),
    };
    builder.read(text, base_dir)?;
    if builder.clauses.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(Problem {
        name: name.to_string(),
        signature: builder.signature,
        clauses: builder.clauses,
    })
}

struct Builder {
    signature: Signature,
    clauses: Vec<Clause>,
}

impl Builder {
    fn read(&mut self, text: &str, base_dir: Option<&Path>) -> Result<(), ParseError> {
        let mut lx = Lexer::new(text);
        loop {
            lx.skip_ws();
            if lx.at_end() {
                return Ok(());
            }
            let (line, col) = lx.pos();
            let word = lx.lower_word()?;
            match word.as_str() {
                "cnf" => self.cnf(&mut lx)?,
                "include" => {
                    lx.expect('(')?;
                    let file = lx.quoted('\'')?;
                    lx.expect(')')?;
                    lx.expect('.')?;
                    let dir = base_dir.unwrap_or_else(|| Path::new("."));
                    let path = dir.join(&file);
                    let text = std::fs::read_to_string(&path).map_err(|source| ParseError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    self.read(&text, path.parent())?;
                }
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        message: format!("expected `cnf` or `include`, found `{other}`"),
                    })
                }
            }
        }
    }

    fn cnf(&mut self, lx: &mut Lexer) -> Result<(), ParseError> {
        lx.expect('(')?;
        let name = lx.name()?;
        lx.expect(',')?;
        let (line, col) = lx.pos();
        let role = match lx.lower_word()?.as_str() {
            "axiom" | "hypothesis" | "plain" | "definition" | "lemma" | "theorem" | "assumption" => Role::Axiom,
            "negated_conjecture" => Role::NegatedConjecture,
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: format!("unsupported role `{other}`"),
                })
            }
        };
        lx.expect(',')?;
        let raw = self.formula(lx)?;
        lx.expect(')')?;
        lx.expect('.')?;
        let mut vars = HashMap::new();
        let mut literals = Vec::with_capacity(raw.len());
        for r in raw {
            if let Some(lit) = self.literal(r, &mut vars)? {
                literals.push(lit);
            }
        }
        let id = ClauseId(self.clauses.len() as u32);
        self.clauses.push(Clause::input(id, &name, role, literals));
        Ok(())
    }

    fn formula(&mut self, lx: &mut Lexer) -> Result<Vec<RawLiteral>, ParseError> {
        lx.skip_ws();
        if lx.peek() == Some('(') {
            lx.bump();
            let inner = self.formula(lx)?;
            lx.expect(')')?;
            lx.skip_ws();
            if lx.peek() == Some('|') {
                lx.bump();
                let mut rest = self.formula(lx)?;
                let mut all = inner;
                all.append(&mut rest);
                return Ok(all);
            }
            return Ok(inner);
        }
        let mut lits = vec![raw_literal(lx)?];
        loop {
            lx.skip_ws();
            if lx.peek() == Some('|') {
                lx.bump();
                lits.push(raw_literal(lx)?);
            } else {
                return Ok(lits);
            }
        }
    }

    /// `None` for `$false` literals, which contribute nothing.
    fn literal(&mut self, r: RawLiteral, vars: &mut HashMap<String, u32>) -> Result<Option<Literal>, ParseError> {
        match r.kind {
            RawAtom::False => Ok(if r.positive { None } else { Some(self.truth()?) }),
            RawAtom::Eq(l, rhs) => {
                self.signature
                    .intern(EQUALITY_NAME, 2, SymbolKind::Equality)
                    .map_err(|source| ParseError::Symbol {
                        line: r.line,
                        col: r.col,
                        source,
                    })?;
                let l = self.term(l, vars)?;
                let rhs = self.term(rhs, vars)?;
                Ok(Some(Literal::eq(r.positive, l, rhs)))
            }
            RawAtom::Pred(t) => {
                if t.is_var {
                    return Err(ParseError::Syntax {
                        line: t.line,
                        col: t.col,
                        message: format!("variable `{}` used as an atom", t.name),
                    });
                }
                let p = self
                    .signature
                    .intern(&t.name, t.args.len(), SymbolKind::Predicate)
                    .map_err(|source| ParseError::Symbol {
                        line: t.line,
                        col: t.col,
                        source,
                    })?;
                let args = t
                    .args
                    .into_iter()
                    .map(|a| self.term(a, vars))
                    .collect::<Result<_, _>>()?;
                Ok(Some(Literal::pred(r.positive, p, args)))
            }
        }
    }

    /// `~$false` is a true literal; represented as `$true` (a 0-ary predicate).
    fn truth(&mut self) -> Result<Literal, ParseError> {
        let p = self
            .signature
            .intern("$true", 0, SymbolKind::Predicate)
            .map_err(|source| ParseError::Symbol { line: 0, col: 0, source })?;
        Ok(Literal::pred(true, p, Vec::new()))
    }

    fn term(&mut self, t: RawTerm, vars: &mut HashMap<String, u32>) -> Result<Term, ParseError> {
        if t.is_var {
            let n = vars.len() as u32;
            return Ok(Term::Var(*vars.entry(t.name).or_insert(n)));
        }
        let f = self
            .signature
            .intern(&t.name, t.args.len(), SymbolKind::Function)
            .map_err(|source| ParseError::Symbol {
                line: t.line,
                col: t.col,
                source,
            })?;
        let args = t
            .args
            .into_iter()
            .map(|a| self.term(a, vars))
            .collect::<Result<_, _>>()?;
        Ok(Term::App(f, args))
    }
}

struct RawTerm {
    name: String,
    is_var: bool,
    args: Vec<RawTerm>,
    line: usize,
    col: usize,
}

enum RawAtom {
    Pred(RawTerm),
    Eq(RawTerm, RawTerm),
    False,
}

struct RawLiteral {
    positive: bool,
    kind: RawAtom,
    line: usize,
    col: usize,
}

fn raw_literal(lx: &mut Lexer) -> Result<RawLiteral, ParseError> {
    lx.skip_ws();
    let (line, col) = lx.pos();
    if lx.peek() == Some('~') {
        lx.bump();
        lx.skip_ws();
        let mut inner = if lx.peek() == Some('(') {
            lx.bump();
            let l = raw_literal(lx)?;
            lx.expect(')')?;
            l
        } else {
            raw_literal(lx)?
        };
        inner.positive = !inner.positive;
        inner.line = line;
        inner.col = col;
        return Ok(inner);
    }
    if lx.peek() == Some('$') {
        let word = lx.dollar_word()?;
        return match word.as_str() {
            "$false" => Ok(RawLiteral {
                positive: true,
                kind: RawAtom::False,
                line,
                col,
            }),
            "$true" => Ok(RawLiteral {
                positive: false,
                kind: RawAtom::False,
                line,
                col,
            }),
            _ => Err(lx.error(format!("unsupported defined symbol `{word}`"))),
        };
    }
    let lhs = raw_term(lx)?;
    lx.skip_ws();
    match lx.peek() {
        Some('=') => {
            lx.bump();
            let rhs = raw_term(lx)?;
            Ok(RawLiteral {
                positive: true,
                kind: RawAtom::Eq(lhs, rhs),
                line,
                col,
            })
        }
        Some('!') => {
            lx.bump();
            lx.expect_now('=')?;
            let rhs = raw_term(lx)?;
            Ok(RawLiteral {
                positive: false,
                kind: RawAtom::Eq(lhs, rhs),
                line,
                col,
            })
        }
        _ => Ok(RawLiteral {
            positive: true,
            kind: RawAtom::Pred(lhs),
            line,
            col,
        }),
    }
}

fn raw_term(lx: &mut Lexer) -> Result<RawTerm, ParseError> {
    lx.skip_ws();
    let (line, col) = lx.pos();
    let (name, is_var) = match lx.peek() {
        Some(c) if c.is_ascii_uppercase() || c == '_' => (lx.word(), true),
        Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() => (lx.word(), false),
        Some('\'') => (lx.quoted('\'')?, false),
        Some(c) => return Err(lx.error(format!("unexpected `{c}` where a term was expected"))),
        None => return Err(lx.error("unexpected end of input".into())),
    };
    let mut args = Vec::new();
    if !is_var && lx.peek() == Some('(') {
        lx.bump();
        loop {
            args.push(raw_term(lx)?);
            lx.skip_ws();
            match lx.peek() {
                Some(',') => lx.bump(),
                Some(')') => {
                    lx.bump();
                    break;
                }
                _ => return Err(lx.error("expected `,` or `)` in argument list".into())),
            }
        }
    }
    Ok(RawTerm {
        name,
        is_var,
        args,
        line,
        col,
    })
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> (usize, usize) {
        (self.line, self.col)
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            message,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) {
        if let Some(c) = self.chars.next() {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '%' {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        self.expect_now(want)
    }

    fn expect_now(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn lower_word(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => Ok(self.word()),
            Some(c) => Err(self.error(format!("expected a lowercase word, found `{c}`"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }

    fn dollar_word(&mut self) -> Result<String, ParseError> {
        self.expect_now('$')?;
        Ok(format!("${}", self.word()))
    }

    /// Statement names: lowercase words, integers, or quoted names.
    fn name(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('\'') => self.quoted('\''),
            Some(c) if c.is_ascii_alphanumeric() => Ok(self.word()),
            Some(c) => Err(self.error(format!("expected a statement name, found `{c}`"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }

    fn quoted(&mut self, q: char) -> Result<String, ParseError> {
        self.skip_ws();
        self.expect_now(q)?;
        let mut s = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated quoted name".into())),
                Some('\\') => {
                    self.bump();
                    if let Some(c) = self.peek() {
                        s.push(c);
                        self.bump();
                    }
                }
                Some(c) if c == q => {
                    self.bump();
                    return Ok(s);
                }
                Some(c) => {
                    s.push(c);
                    self.bump();
                }
            }
        }
    }
}
