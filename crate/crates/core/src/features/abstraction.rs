use std::fmt;
use std::str::FromStr;

use crate::logic::{Atom, Clause, Literal, Signature, Term};

pub const VAR_TOKEN: &str = "*VAR";
pub const SKOLEM_TOKEN: &str = "*SKO";
pub const EQ_TOKEN: &str = "eq";

/// A term with symbols replaced by feature tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractTerm {
    pub token: String,
    pub args: Vec<AbstractTerm>,
}

impl AbstractTerm {
    pub fn depth(&self) -> usize {
        1 + self.args.iter().map(AbstractTerm::depth).max().unwrap_or(0)
    }

    fn size(&self) -> usize {
        1 + self.args.iter().map(AbstractTerm::size).sum::<usize>()
    }
}

/// A literal whose head token carries the polarity prefix (`+p`, `-eq`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractLiteral {
    pub head: String,
    pub args: Vec<AbstractTerm>,
}

impl AbstractLiteral {
    /// Symbol occurrences (head included) plus variable occurrences.
    pub fn weight(&self) -> usize {
        1 + self.args.iter().map(AbstractTerm::size).sum::<usize>()
    }

    pub fn max_depth(&self) -> usize {
        self.args.iter().map(AbstractTerm::depth).max().unwrap_or(0)
    }
}

/// Output of [`normalize_symbols`]: everything featurization looks at.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractClause {
    pub literals: Vec<AbstractLiteral>,
}

fn symbol_token(name: &str) -> String {
    if name.starts_with("esk") || name.starts_with("sk") {
        SKOLEM_TOKEN.to_string()
    } else {
        name.to_string()
    }
}

fn abstract_term(t: &Term, sig: &Signature) -> AbstractTerm {
    match t {
        Term::Var(_) => AbstractTerm {
            token: VAR_TOKEN.to_string(),
            args: Vec::new(),
        },
        Term::App(f, args) => AbstractTerm {
            token: symbol_token(sig.name(*f)),
            args: args.iter().map(|a| abstract_term(a, sig)).collect(),
        },
    }
}

pub fn abstract_literal(lit: &Literal, sig: &Signature) -> AbstractLiteral {
    let sign = if lit.positive { '+' } else { '-' };
    let (name, args): (String, Vec<AbstractTerm>) = match &lit.atom {
        Atom::Pred(p, args) => (symbol_token(sig.name(*p)), args.iter().map(|a| abstract_term(a, sig)).collect()),
        Atom::Eq(l, r) => (EQ_TOKEN.to_string(), vec![abstract_term(l, sig), abstract_term(r, sig)]),
    };
    AbstractLiteral {
        head: format!("{sign}{name}"),
        args,
    }
}

/// Variables become `*VAR`, Skolem-style symbols (`esk…`, `sk…`) become
/// `*SKO`, equations use the head `eq`, and polarity is a `+`/`-` prefix.
pub fn normalize_symbols(c: &Clause, sig: &Signature) -> AbstractClause {
    normalize_literals(&c.literals, sig)
}

pub fn normalize_literals(lits: &[Literal], sig: &Signature) -> AbstractClause {
    AbstractClause {
        literals: lits.iter().map(|l| abstract_literal(l, sig)).collect(),
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &AbstractTerm) -> fmt::Result {
    f.write_str(&t.token)?;
    write_args(f, &t.args)
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[AbstractTerm]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write_term(f, a)?;
    }
    f.write_str(")")
}

impl fmt::Display for AbstractLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.head)?;
        write_args(f, &self.args)
    }
}

impl fmt::Display for AbstractClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("$false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed abstract clause at byte {offset}: {message}")]
pub struct AbstractParseError {
    pub offset: usize,
    pub message: String,
}

impl FromStr for AbstractClause {
    type Err = AbstractParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "$false" {
            return Ok(AbstractClause::default());
        }
        let mut p = TokenParser { src: s, pos: 0 };
        let mut literals = Vec::new();
        loop {
            let t = p.term()?;
            if !(t.token.starts_with('+') || t.token.starts_with('-')) {
                return Err(p.error("literal head must start with + or -"));
            }
            literals.push(AbstractLiteral {
                head: t.token,
                args: t.args,
            });
            p.skip_ws();
            if p.pos == s.len() {
                return Ok(AbstractClause { literals });
            }
            p.expect('|')?;
        }
    }
}

struct TokenParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TokenParser<'_> {
    fn error(&self, message: &str) -> AbstractParseError {
        AbstractParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn expect(&mut self, c: char) -> Result<(), AbstractParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn term(&mut self) -> Result<AbstractTerm, AbstractParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| c == '(' || c == ')' || c == ',' || c == '|' || c.is_whitespace())
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a token"));
        }
        let token = rest[..len].to_string();
        self.pos += len;
        let mut args = Vec::new();
        if self.src[self.pos..].starts_with('(') {
            self.pos += 1;
            loop {
                args.push(self.term()?);
                self.skip_ws();
                if self.src[self.pos..].starts_with(',') {
                    self.pos += 1;
                } else {
                    self.expect(')')?;
                    break;
                }
            }
        }
        Ok(AbstractTerm { token, args })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_problem;

    fn abs(text: &str) -> Vec<String> {
        let p = parse_problem(text).unwrap();
        p.clauses
            .iter()
            .map(|c| normalize_symbols(c, &p.signature).to_string())
            .collect()
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(abs("cnf(a, axiom, p(X)).")[0], "+p(*VAR)");
        assert_eq!(abs("cnf(a, axiom, ~q(sk1(X), a)).")[0], "-q(*SKO(*VAR),a)");
        assert_eq!(abs("cnf(a, axiom, a = b).")[0], "+eq(a,b)");
        assert_eq!(abs("cnf(a, axiom, esk3_0 != b).")[0], "-eq(*SKO,b)");
    }

    #[test]
    fn text_round_trip() {
        for s in ["+p(*VAR)", "-q(*SKO(*VAR),a) | +eq(f(a,b),*VAR) | +r", "$false"] {
            let c: AbstractClause = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert!("p(a)".parse::<AbstractClause>().is_err());
        assert!("+p(a".parse::<AbstractClause>().is_err());
    }
}
