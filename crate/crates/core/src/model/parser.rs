//! Parser for the problem-file language.
//!
//! ```text
//! program := (decl | constr | goal)*
//! decl    := "var" ident "in" ("[" int ".." int "]" | "Z") ";"
//! constr  := "constraint" expr cmp expr ";"
//! goal    := ("solve" "all" | "maximize" expr) ";"
//! expr    := term (("+" | "-") term)*
//! term    := factor ("*" factor)*
//! factor  := ["-"] (int | ident ["^" int] | "(" expr ")" ["^" int])
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Domain bounds may
//! carry a leading minus sign.

use thiserror::Error;

use super::csp::{Csp, Goal};
use super::expr::Expr;
use super::poly::Cmp;
use crate::int::Int;
use crate::interval::IntegerInterval;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: variable `{name}` declared twice")]
    Duplicate { line: usize, col: usize, name: String },
    #[error("{line}:{col}: unknown variable `{name}`")]
    Unknown { line: usize, col: usize, name: String },
    #[error("{line}:{col}: exponent must be at least 1")]
    Exponent { line: usize, col: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(Int),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 16] = ["<=", ">=", "!=", "..", "<", ">", "=", "+", "-", "*", "^", "(", ")", "[", "]", ";"];

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (l, col) = (ln + 1, i + 1);
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Int(text.parse().expect("digits")), line: l, col });
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l, col });
            } else {
                let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
                let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                    return Err(ParseError::Syntax { line: l, col, msg: format!("unexpected character `{c}`") });
                };
                out.push(Token { tok: Tok::Sym(sym), line: l, col });
                i += sym.len();
            }
        }
    }
    let line = src.lines().count().max(1);
    out.push(Token { tok: Tok::Eof, line, col: 1 });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    csp: Csp,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek().tok, Tok::Sym(s) if s == sym) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn int(&mut self) -> Result<Int, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(v) => {
                self.next();
                Ok(v)
            }
            _ => self.err("expected integer"),
        }
    }

    fn signed_int(&mut self) -> Result<Int, ParseError> {
        let neg = self.eat("-");
        let v = self.int()?;
        Ok(if neg { -v } else { v })
    }

    fn exponent(&mut self) -> Result<Option<u32>, ParseError> {
        if !self.eat("^") {
            return Ok(None);
        }
        let (line, col) = (self.peek().line, self.peek().col);
        let n = self.int()?;
        match n.to_i64() {
            Some(n) if n >= 1 && n <= u32::MAX as i64 => Ok(Some(n as u32)),
            _ => Err(ParseError::Exponent { line, col }),
        }
    }

    fn program(mut self) -> Result<Csp, ParseError> {
        loop {
            if self.peek().tok == Tok::Eof {
                return Ok(self.csp);
            }
            if self.keyword("var") {
                self.decl()?;
            } else if self.keyword("constraint") {
                let lhs = self.expr()?;
                let cmp = self.cmp()?;
                let rhs = self.expr()?;
                self.expect(";")?;
                self.csp.add_constraint(lhs, cmp, rhs);
            } else if self.keyword("solve") {
                if !self.keyword("all") {
                    return self.err("expected `all`");
                }
                self.expect(";")?;
                self.csp.goal = Goal::All;
            } else if self.keyword("maximize") {
                let e = self.expr()?;
                self.expect(";")?;
                self.csp.goal = Goal::Maximize(e);
            } else {
                return self.err("expected `var`, `constraint`, `solve` or `maximize`");
            }
        }
    }

    fn decl(&mut self) -> Result<(), ParseError> {
        let (line, col) = (self.peek().line, self.peek().col);
        let name = self.ident()?;
        if self.csp.var_id(&name).is_some() {
            return Err(ParseError::Duplicate { line, col, name });
        }
        if !self.keyword("in") {
            return self.err("expected `in`");
        }
        let domain = if self.keyword("Z") {
            IntegerInterval::UNBOUNDED
        } else {
            self.expect("[")?;
            let lo = self.signed_int()?;
            self.expect("..")?;
            let hi = self.signed_int()?;
            self.expect("]")?;
            IntegerInterval::new(lo, hi)
        };
        self.expect(";")?;
        self.csp.add_var(name, domain);
        Ok(())
    }

    fn cmp(&mut self) -> Result<Cmp, ParseError> {
        for (s, c) in [("<=", Cmp::Le), (">=", Cmp::Ge), ("!=", Cmp::Ne), ("<", Cmp::Lt), (">", Cmp::Gt), ("=", Cmp::Eq)] {
            if self.eat(s) {
                return Ok(c);
            }
        }
        self.err("expected comparison operator")
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            if self.eat("+") {
                e = e + self.term()?;
            } else if self.eat("-") {
                e = e - self.term()?;
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.factor()?;
        while self.eat("*") {
            e = e * self.factor()?;
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let neg = self.eat("-");
        let (line, col) = (self.peek().line, self.peek().col);
        let base = match self.peek().tok.clone() {
            Tok::Int(v) => {
                self.next();
                Expr::Lit(v)
            }
            Tok::Ident(name) => {
                self.next();
                let Some(id) = self.csp.var_id(&name) else {
                    return Err(ParseError::Unknown { line, col, name });
                };
                let e = Expr::var(id);
                match self.exponent()? {
                    Some(n) => e.pow_mul(n),
                    None => e,
                }
            }
            Tok::Sym("(") => {
                self.next();
                let e = self.expr()?;
                self.expect(")")?;
                match self.exponent()? {
                    Some(n) => e.pow_mul(n),
                    None => e,
                }
            }
            _ => return self.err("expected expression"),
        };
        Ok(if neg { -base } else { base })
    }
}

/// Parses a problem file into a CSP.
pub fn parse(src: &str) -> Result<Csp, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0, csp: Csp::new() }.program()
}
