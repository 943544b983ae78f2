use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::ast::{BinOp, Cmp, Expr};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(&'static str),
}

/// Tokens with their 1-based character positions.
fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else {
            let sym = match c {
                '+' => "+",
                '-' => "-",
                '*' => "*",
                '(' => "(",
                ')' => ")",
                ',' => ",",
                '=' => "=",
                '≤' => "<=",
                '<' if chars.get(i + 1) == Some(&'=') => {
                    i += 1;
                    "<="
                }
                '<' => "<",
                _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
            };
            i += 1;
            out.push((Tok::Sym(sym), pos));
        }
    }
    Ok(out)
}

fn syntax(position: usize, message: String) -> Error {
    Error::Syntax { position, message }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

/// Parses `src` into an expression tree; no type checking.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected input after expression".into()));
    }
    Ok(e)
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{s}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                BinOp::Add
            } else if self.eat_sym("-") {
                BinOp::Sub
            } else {
                return Ok(e);
            };
            e = Expr::binary(op, e, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if matches!(self.peek(), Some(Tok::Ident(w)) if w == "mod") {
                self.at += 1;
                BinOp::Mod
            } else {
                return Ok(e);
            };
            e = Expr::binary(op, e, self.atom()?);
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(pos, "expected an expression".into()));
        };
        self.at += 1;
        match tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Sym("(") => {
                let mut items = alloc::vec![self.expr()?];
                while self.eat_sym(",") {
                    items.push(self.expr()?);
                }
                self.expect(")")?;
                Ok(if items.len() == 1 {
                    items.pop().expect("one item")
                } else {
                    Expr::Tuple(items)
                })
            }
            Tok::Sym(s) => Err(syntax(pos, format!("unexpected `{s}`"))),
            Tok::Ident(w) => match w.as_str() {
                "pow2neg" => {
                    self.expect("(")?;
                    let e = self.expr()?;
                    self.expect(")")?;
                    Ok(Expr::Pow2Neg(Box::new(e)))
                }
                "min" | "max" => {
                    self.expect("(")?;
                    let a = Box::new(self.expr()?);
                    self.expect(",")?;
                    let b = Box::new(self.expr()?);
                    self.expect(")")?;
                    Ok(if w == "min" {
                        Expr::Min(a, b)
                    } else {
                        Expr::Max(a, b)
                    })
                }
                "if" => {
                    self.expect("(")?;
                    let lhs = Box::new(self.expr()?);
                    let cmp = if self.eat_sym("<") {
                        Cmp::Lt
                    } else if self.eat_sym("<=") {
                        Cmp::Le
                    } else if self.eat_sym("=") {
                        Cmp::Eq
                    } else {
                        return Err(syntax(
                            self.pos(),
                            "expected a comparison `<`, `<=` or `=`".into(),
                        ));
                    };
                    let rhs = Box::new(self.expr()?);
                    self.expect(",")?;
                    let then = Box::new(self.expr()?);
                    self.expect(",")?;
                    let otherwise = Box::new(self.expr()?);
                    self.expect(")")?;
                    Ok(Expr::If {
                        cmp,
                        lhs,
                        rhs,
                        then,
                        otherwise,
                    })
                }
                v if v.starts_with('x')
                    && v.len() > 1
                    && v[1..].bytes().all(|b| b.is_ascii_digit()) =>
                {
                    v[1..]
                        .parse()
                        .map(Expr::Var)
                        .map_err(|_| syntax(pos, format!("variable index too large in `{v}`")))
                }
                _ => Err(syntax(pos, format!("unknown identifier `{w}`"))),
            },
        }
    }
}
