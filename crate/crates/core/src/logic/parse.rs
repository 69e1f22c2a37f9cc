use super::syntax::{all, and, ex, ex_unique, iff, imp, not, or, Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at symbol {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// Parse a formula. Whitespace is ignored. Besides the printed forms, `↔`
/// and `∃!` are accepted and desugared, and any formula may be wrapped in
/// redundant parentheses.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
    let f = p.formula()?;
    if p.pos != p.chars.len() {
        return Err(p.error("end of formula"));
    }
    Ok(f)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        };
        ParseError { position: self.pos, message: format!("expected {expected}, found {found}") }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("{c:?}")))
        }
    }

    fn number(&mut self) -> Result<Option<u64>, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some('0'..='9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map(Some)
            .map_err(|_| ParseError { position: start, message: "number too large".into() })
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        self.expect('x')?;
        let start = self.pos;
        match self.number()? {
            None => Ok(0),
            Some(n) => Var::try_from(n)
                .map_err(|_| ParseError { position: start, message: "variable index too large".into() }),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some('x') => {
                let a = self.var()?;
                let rel = self.peek();
                if !matches!(rel, Some('=' | '∈')) {
                    return Err(self.error("'=' or '∈'"));
                }
                self.pos += 1;
                let b = self.var()?;
                Ok(if rel == Some('=') { Formula::Eq(a, b) } else { Formula::In(a, b) })
            }
            Some('K') => {
                self.pos += 1;
                let l = self.number()?.ok_or_else(|| self.error("digit"))?;
                self.expect(',')?;
                let x = self.number()?.ok_or_else(|| self.error("digit"))?;
                Ok(Formula::KolGe(l, x))
            }
            Some('¬') => {
                self.pos += 1;
                Ok(not(self.formula()?))
            }
            Some(q @ ('∀' | '∃')) => {
                self.pos += 1;
                let unique = q == '∃' && self.peek() == Some('!');
                if unique {
                    self.pos += 1;
                }
                let v = self.var()?;
                let body = self.formula()?;
                Ok(match (q, unique) {
                    ('∀', _) => all(v, body),
                    (_, true) => ex_unique(v, body),
                    _ => ex(v, body),
                })
            }
            Some('(') => {
                self.pos += 1;
                let lhs = self.formula()?;
                let op = self.peek();
                let f = match op {
                    Some(')') => lhs,
                    Some('∧' | '∨' | '→' | '↔') => {
                        self.pos += 1;
                        let rhs = self.formula()?;
                        match op {
                            Some('∧') => and(lhs, rhs),
                            Some('∨') => or(lhs, rhs),
                            Some('→') => imp(lhs, rhs),
                            _ => iff(lhs, rhs),
                        }
                    }
                    _ => return Err(self.error("a connective or ')'")),
                };
                self.expect(')')?;
                Ok(f)
            }
            _ => Err(self.error("a formula")),
        }
    }
}
