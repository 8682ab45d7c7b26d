//! Parser for the expression grammar printed by [`CkElement`]'s `Display`.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := postfix postfix*            juxtaposition is multiplication
//! postfix := atom '*'*                   '*' is the adjoint
//! atom    := 's'N | 'e(' word ')' | 'i' | int ['/' int] | '(' expr ')'
//! ```
//!
//! `word` uses the free-group syntax `g1 g2'`; `e(w)` is the range
//! projection `S(w) S(w)*`.

use fell_core::ck::scalar::{imaginary_unit, rational};
use fell_core::ck::{CkAlgebra, CkElement};
use fell_core::group::parse_word;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("invalid index at position {position}: {message}")]
    Index { position: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::Index { position, .. } => *position,
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { position, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Gen(usize),
    Range(String),
    Imag,
    Int(i64),
    Slash,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

impl Token {
    fn starts_atom(&self) -> bool {
        matches!(self, Token::Gen(_) | Token::Range(_) | Token::Imag | Token::Int(_) | Token::LParen)
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let digits = |from: usize| chars[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    while k < chars.len() {
        let c = chars[k];
        let start = k;
        let simple = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((start, t));
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let followed_by_word_char = |at: usize| chars.get(at).is_some_and(|c| c.is_alphanumeric() || *c == '_');
        match c {
            's' => {
                let n = digits(k + 1);
                if n == 0 {
                    return Err(syntax(start, "expected a generator index after 's'"));
                }
                let text: String = chars[k + 1..k + 1 + n].iter().collect();
                let index = text.parse().map_err(|_| syntax(start, "generator index too large"))?;
                k += 1 + n;
                if followed_by_word_char(k) {
                    return Err(syntax(k, format!("unexpected '{}'", chars[k])));
                }
                out.push((start, Token::Gen(index)));
            }
            'e' => {
                let mut j = k + 1;
                while chars.get(j).is_some_and(|c| c.is_whitespace()) {
                    j += 1;
                }
                if chars.get(j) != Some(&'(') {
                    return Err(syntax(start, "expected '(' after 'e'"));
                }
                let close = chars[j + 1..]
                    .iter()
                    .position(|&c| c == ')')
                    .ok_or_else(|| syntax(start, "unterminated 'e('"))?;
                let word: String = chars[j + 1..j + 1 + close].iter().collect();
                out.push((start, Token::Range(word)));
                k = j + 2 + close;
            }
            'i' if !followed_by_word_char(k + 1) => {
                out.push((start, Token::Imag));
                k += 1;
            }
            d if d.is_ascii_digit() => {
                let n = digits(k);
                let text: String = chars[k..k + n].iter().collect();
                let value = text.parse().map_err(|_| syntax(start, "number too large"))?;
                out.push((start, Token::Int(value)));
                k += n;
            }
            other => return Err(syntax(start, format!("unexpected '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    next: usize,
    end: usize,
    algebra: &'a CkAlgebra,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.next).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.next).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.next).cloned();
        self.next += 1;
        t
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => syntax(self.position(), format!("unexpected {t:?}")),
            None => syntax(self.end, "unexpected end of input"),
        }
    }

    fn expr(&mut self) -> Result<CkElement, ParseError> {
        let negate = self.peek() == Some(&Token::Minus);
        if negate {
            self.bump();
        }
        let first = self.term()?;
        let mut acc = if negate { first.scale(rational(-1, 1)) } else { first };
        while let Some(op @ (Token::Plus | Token::Minus)) = self.peek().cloned() {
            self.bump();
            let rhs = self.term()?;
            acc = if op == Token::Plus { acc.add(&rhs) } else { acc.sub(&rhs) }.map_err(|e| syntax(self.position(), e.to_string()))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<CkElement, ParseError> {
        if !self.peek().is_some_and(Token::starts_atom) {
            return Err(self.unexpected());
        }
        let mut acc = self.postfix()?;
        while self.peek().is_some_and(Token::starts_atom) {
            let at = self.position();
            let f = self.postfix()?;
            acc = acc.mul(&f).map_err(|e| syntax(at, e.to_string()))?;
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<CkElement, ParseError> {
        let mut a = self.atom()?;
        while self.peek() == Some(&Token::Star) {
            self.bump();
            a = a.adjoint();
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<CkElement, ParseError> {
        let alg = self.algebra;
        let Some((at, token)) = self.bump() else { return Err(syntax(self.end, "unexpected end of input")) };
        match token {
            Token::Gen(i) => alg.generator(i).map_err(|e| ParseError::Index { position: at, message: e.to_string() }),
            Token::Range(w) => {
                let word = parse_word(&w, alg.rank()).map_err(|e| ParseError::Index { position: at, message: e.to_string() })?;
                alg.range_projection(&word).map_err(|e| ParseError::Index { position: at, message: e.to_string() })
            }
            Token::Imag => Ok(alg.scalar(imaginary_unit())),
            Token::Int(p) => {
                if self.peek() != Some(&Token::Slash) {
                    return Ok(alg.scalar(rational(p, 1)));
                }
                self.bump();
                match self.bump() {
                    Some((_, Token::Int(0))) => Err(syntax(at, "zero denominator")),
                    Some((_, Token::Int(q))) => Ok(alg.scalar(rational(p, q))),
                    _ => {
                        self.next -= 1;
                        Err(self.unexpected())
                    }
                }
            }
            Token::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.unexpected());
                }
                self.bump();
                Ok(inner)
            }
            _ => {
                self.next -= 1;
                Err(self.unexpected())
            }
        }
    }
}

/// Parses `text` into an exact element of `algebra`. Positions in errors
/// are 0-based character offsets.
pub fn parse_expression(text: &str, algebra: &CkAlgebra) -> Result<CkElement, ParseError> {
    let tokens = lex(text)?;
    let end = text.chars().count();
    let mut p = Parser { tokens, next: 0, end, algebra };
    let x = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(x)
}
