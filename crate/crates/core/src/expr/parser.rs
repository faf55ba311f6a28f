//! Recursive descent parser.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('-' | '+') unary | power
//! power    := primary ('^' exponent)?
//! exponent := sign? INT | '(' sign? INT ')'
//! primary  := NUMBER | VAR | FUNC '(' expr ')' | '(' expr ')'
//! ```
//!
//! An integer literal that opens a term and is followed by `/ INT` (with no
//! `^` after the denominator) is read as one rational literal `p/q`. This
//! agrees numerically with ordinary left-to-right evaluation.

use num_bigint::BigInt;

use super::{Func, Node};
use crate::error::ExprError;
use crate::scalar::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { text: String, integer: bool },
    Var(usize),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, ExprError> {
        let mut lx = Lexer {
            src,
            toks: Vec::new(),
        };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    i += 1;
                    continue;
                }
                b'+' => lx.push(Tok::Plus, start),
                b'-' => lx.push(Tok::Minus, start),
                b'*' => lx.push(Tok::Star, start),
                b'/' => lx.push(Tok::Slash, start),
                b'^' => lx.push(Tok::Caret, start),
                b'(' => lx.push(Tok::LParen, start),
                b')' => lx.push(Tok::RParen, start),
                b'0'..=b'9' | b'.' => {
                    let mut j = i;
                    let mut seen_dot = false;
                    while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                        if bytes[j] == b'.' {
                            if seen_dot {
                                return Err(syntax(j, "second decimal point in number"));
                            }
                            seen_dot = true;
                        }
                        j += 1;
                    }
                    let text = &lx.src[i..j];
                    if text == "." {
                        return Err(syntax(i, "lone decimal point"));
                    }
                    lx.push(
                        Tok::Num {
                            text: text.to_string(),
                            integer: !seen_dot,
                        },
                        start,
                    );
                    i = j;
                    continue;
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut j = i;
                    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    let word = &lx.src[i..j];
                    let tok = match word.strip_prefix('x') {
                        Some(digits)
                            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) =>
                        {
                            let idx = digits
                                .parse::<usize>()
                                .map_err(|_| syntax(start, "variable index too large"))?;
                            Tok::Var(idx)
                        }
                        _ => Tok::Ident(word.to_string()),
                    };
                    lx.push(tok, start);
                    i = j;
                    continue;
                }
                _ => {
                    let ch = lx.src[i..].chars().next().unwrap_or('?');
                    return Err(syntax(i, &format!("unexpected character {ch:?}")));
                }
            }
            i += 1;
        }
        lx.push(Tok::End, src.len());
        Ok(lx.toks)
    }

    fn push(&mut self, t: Tok, at: usize) {
        self.toks.push((t, at));
    }
}

fn syntax(offset: usize, message: &str) -> ExprError {
    ExprError::Syntax {
        offset,
        message: message.to_string(),
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    dim: usize,
}

pub(super) fn parse(src: &str, dim: usize) -> Result<Node, ExprError> {
    let toks = Lexer::run(src)?;
    let mut p = Parser { toks, pos: 0, dim };
    let node = p.expr()?;
    match p.peek() {
        Tok::End => Ok(node),
        _ => Err(syntax(p.offset(), "unexpected trailing input")),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), &format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary(true)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Node::mul(lhs, self.unary(false)?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Node::div(lhs, self.unary(false)?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self, term_start: bool) -> Result<Node, ExprError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Node::neg(self.unary(term_start)?))
            }
            Tok::Plus => {
                self.bump();
                self.unary(term_start)
            }
            _ => self.power(term_start),
        }
    }

    fn power(&mut self, term_start: bool) -> Result<Node, ExprError> {
        let base = self.primary(term_start)?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let k = self.exponent()?;
        if *self.peek() == Tok::Caret {
            return Err(syntax(
                self.offset(),
                "chained exponents are ambiguous; add parentheses",
            ));
        }
        Ok(Node::pow(base, k))
    }

    fn exponent(&mut self) -> Result<i32, ExprError> {
        let parens = *self.peek() == Tok::LParen;
        if parens {
            self.bump();
        }
        let negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let at = self.offset();
        let k = match self.bump() {
            Tok::Num {
                text,
                integer: true,
            } => text
                .parse::<i32>()
                .map_err(|_| syntax(at, "exponent too large"))?,
            _ => return Err(syntax(at, "exponent must be an integer literal")),
        };
        if parens {
            self.expect(Tok::RParen, "')' after exponent")?;
        }
        Ok(if negative { -k } else { k })
    }

    fn primary(&mut self, term_start: bool) -> Result<Node, ExprError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num { text, integer } => {
                let value = parse_rational(&text).map_err(|_| syntax(at, "bad number"))?;
                if integer && term_start {
                    if let Some(q) = self.rational_denominator() {
                        return Ok(Node::Const(value / q));
                    }
                }
                Ok(Node::Const(value))
            }
            Tok::Var(i) => {
                if i >= self.dim {
                    return Err(ExprError::VariableOutOfRange {
                        index: i,
                        dim: self.dim,
                        offset: at,
                    });
                }
                Ok(Node::Var(i))
            }
            Tok::Ident(name) => {
                let func = Func::from_name(&name)
                    .ok_or_else(|| syntax(at, &format!("unknown function `{name}`")))?;
                self.expect(Tok::LParen, "'(' after function name")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Node::call(func, arg))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            _ => Err(syntax(at, "expected a number, variable, function or '('")),
        }
    }

    /// Consumes `/ INT` when it forms a rational literal with the preceding
    /// integer.
    fn rational_denominator(&mut self) -> Option<Rational> {
        if *self.peek() != Tok::Slash {
            return None;
        }
        let Tok::Num {
            text,
            integer: true,
        } = self.peek_at(1).clone()
        else {
            return None;
        };
        if *self.peek_at(2) == Tok::Caret {
            return None;
        }
        let q: BigInt = text.parse().ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        self.bump();
        self.bump();
        Some(Rational::from_integer(q))
    }
}
