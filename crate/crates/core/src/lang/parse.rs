//! Concrete S-expression syntax.
//!
//! ```text
//! e ::= () | 42 | -3 | 'name | #l0 | #f1 | x
//!     | (lam x e) | (app e1 e2) | (if e1 e2 e3)
//!     | (pair e1 e2) | (fst e) | (snd e)
//!     | (ref e) | (get e) | (op <name> e1 e2)   with <name> ∈ = := + - * <
//!     | (emit e)
//!     | (let x e1 e2) | (seq e1 … en)           derived forms
//! ```
//!
//! `let` and `seq` desugar to applications of lambdas; `seq` picks binders
//! fresh for the continuation. Unbound variables are not rejected here:
//! client programs legitimately reference library operations that a harness
//! binds around them later.

use std::fmt;

use super::syntax::{Expr, Op, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Int(i64),
    Sym(String),
    Loc(u64),
    Fun(u64),
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Sym(s) => write!(f, "symbol '{s}"),
            Tok::Loc(l) => write!(f, "location #l{l}"),
            Tok::Fun(n) => write!(f, "function id #f{n}"),
            Tok::Ident(x) => write!(f, "identifier `{x}`"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

fn is_ident_char(b: u8) -> bool {
    // Operator names (`=`, `:=`, `+`, `-`, `*`, `<`) lex as identifiers; a
    // `-` directly followed by a digit starts an integer literal instead.
    b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'?' | b'!' | b'=' | b':' | b'+' | b'*' | b'<')
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err<T>(&self, line: u32, col: u32, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.src.get(self.pos)?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b';') => {
                    // Comment to end of line.
                    while let Some(b) = self.peek() {
                        self.bump();
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn take_ident(&mut self) -> String {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if is_ident_char(b) {
                self.bump();
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn tokens(mut self) -> Result<Vec<(Tok, u32, u32)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let (line, col) = (self.line, self.col);
            let Some(b) = self.peek() else { break };
            let tok = match b {
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'\'' => {
                    self.bump();
                    let name = self.take_ident();
                    if name.is_empty() {
                        return self.err(line, col, "expected a symbol name after `'`");
                    }
                    Tok::Sym(name)
                }
                b'#' => {
                    self.bump();
                    let tag = self.bump();
                    let digits = self.take_ident();
                    let n: u64 = match digits.parse() {
                        Ok(n) => n,
                        Err(_) => {
                            return self.err(line, col, "expected digits after `#l`/`#f`");
                        }
                    };
                    match tag {
                        Some(b'l') => Tok::Loc(n),
                        Some(b'f') => Tok::Fun(n),
                        _ => return self.err(line, col, "expected `#l<n>` or `#f<n>`"),
                    }
                }
                b'0'..=b'9' => {
                    let start = self.pos;
                    self.bump();
                    while matches!(self.peek(), Some(b'0'..=b'9')) {
                        self.bump();
                    }
                    let text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                    match text.parse::<i64>() {
                        Ok(n) => Tok::Int(n),
                        Err(_) => return self.err(line, col, format!("bad integer `{text}`")),
                    }
                }
                b'-' if matches!(self.src.get(self.pos + 1), Some(b'0'..=b'9')) => {
                    let start = self.pos;
                    self.bump();
                    while matches!(self.peek(), Some(b'0'..=b'9')) {
                        self.bump();
                    }
                    let text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                    match text.parse::<i64>() {
                        Ok(n) => Tok::Int(n),
                        Err(_) => return self.err(line, col, format!("bad integer `{text}`")),
                    }
                }
                _ if is_ident_char(b) => Tok::Ident(self.take_ident()),
                _ => {
                    return self.err(line, col, format!("unexpected character `{}`", b as char));
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, u32, u32)>,
    pos: usize,
    end: (u32, u32),
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end);
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        match self.toks.get(self.pos) {
            Some((t, _, _)) => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn expect_rparen(&mut self, form: &str) -> Result<(), ParseError> {
        match self.next()? {
            Tok::RParen => Ok(()),
            t => self.err_prev(format!("expected `)` to close `{form}`, found {t}")),
        }
    }

    fn err_prev<T>(&self, msg: String) -> Result<T, ParseError> {
        let (line, col) = self
            .toks
            .get(self.pos.saturating_sub(1))
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end);
        Err(ParseError { line, col, msg })
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.next()? {
            Tok::Ident(x) => Ok(x),
            t => self.err_prev(format!("expected {what}, found {t}")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.next()? {
            Tok::Int(n) => Ok(Expr::Val(Value::Int(n))),
            Tok::Sym(s) => Ok(Expr::Val(Value::Sym(s))),
            Tok::Loc(l) => Ok(Expr::Val(Value::Loc(l))),
            Tok::Fun(n) => Ok(Expr::Val(Value::Fun(n))),
            Tok::Ident(x) => Ok(Expr::Var(x)),
            Tok::RParen => self.err_prev("unexpected `)`".to_string()),
            Tok::LParen => {
                if matches!(self.toks.get(self.pos), Some((Tok::RParen, _, _))) {
                    self.pos += 1;
                    return Ok(Expr::Val(Value::Unit));
                }
                let head = self.ident("a form name after `(`")?;
                let e = match head.as_str() {
                    "lam" => {
                        let x = self.ident("a parameter name")?;
                        Expr::lam(&x, self.expr()?)
                    }
                    "app" => {
                        let f = self.expr()?;
                        Expr::app(f, self.expr()?)
                    }
                    "if" => {
                        let c = self.expr()?;
                        let t = self.expr()?;
                        Expr::if_(c, t, self.expr()?)
                    }
                    "pair" => {
                        let a = self.expr()?;
                        Expr::mk_pair(a, self.expr()?)
                    }
                    "fst" => Expr::fst(self.expr()?),
                    "snd" => Expr::snd(self.expr()?),
                    "ref" => Expr::ref_(self.expr()?),
                    "get" => Expr::deref(self.expr()?),
                    "emit" => Expr::emit(self.expr()?),
                    "op" => {
                        let name = match self.next()? {
                            Tok::Ident(x) => x,
                            t => return self.err_prev(format!("expected an operator, found {t}")),
                        };
                        let op = match name.as_str() {
                            "=" => Op::Eq,
                            ":=" => Op::Assign,
                            "+" => Op::Add,
                            "-" => Op::Sub,
                            "*" => Op::Mul,
                            "<" => Op::Lt,
                            other => {
                                return self.err_prev(format!("unknown operator `{other}`"))
                            }
                        };
                        let a = self.expr()?;
                        Expr::binop(op, a, self.expr()?)
                    }
                    "let" => {
                        let x = self.ident("a variable name")?;
                        let e1 = self.expr()?;
                        let e2 = self.expr()?;
                        Expr::let_(&x, e1, e2)
                    }
                    "seq" => {
                        let mut items = vec![self.expr()?];
                        while !matches!(self.toks.get(self.pos), Some((Tok::RParen, _, _)) | None)
                        {
                            items.push(self.expr()?);
                        }
                        Expr::seq(items)
                    }
                    other => return self.err_prev(format!("unknown form `{other}`")),
                };
                self.expect_rparen(&head)?;
                Ok(e)
            }
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let lexer = Lexer::new(text);
    let end = {
        let lines = text.lines().count().max(1) as u32;
        let last_len = text.lines().last().map(|l| l.len() + 1).unwrap_or(1) as u32;
        (lines, last_len)
    };
    let toks = lexer.tokens()?;
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after expression");
    }
    Ok(e)
}

/// Canonical printer. Derived forms print as their desugaring; pair values
/// print with the `pair` constructor, so `parse ∘ print` is the identity on
/// expressions that the parser can produce.
pub fn print(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Pair(a, b) => {
            out.push_str("(pair ");
            write_value(out, a);
            out.push(' ');
            write_value(out, b);
            out.push(')');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Val(v) => write_value(out, v),
        Expr::Var(x) => out.push_str(x),
        Expr::Lam(x, body) => {
            out.push_str("(lam ");
            out.push_str(x);
            out.push(' ');
            write_expr(out, body);
            out.push(')');
        }
        Expr::App(f, a) => {
            out.push_str("(app ");
            write_expr(out, f);
            out.push(' ');
            write_expr(out, a);
            out.push(')');
        }
        Expr::If(c, t, e2) => {
            out.push_str("(if ");
            write_expr(out, c);
            out.push(' ');
            write_expr(out, t);
            out.push(' ');
            write_expr(out, e2);
            out.push(')');
        }
        Expr::MkPair(a, b) => {
            out.push_str("(pair ");
            write_expr(out, a);
            out.push(' ');
            write_expr(out, b);
            out.push(')');
        }
        Expr::Proj(i, e2) => {
            out.push_str(match i {
                super::syntax::Proj::Fst => "(fst ",
                super::syntax::Proj::Snd => "(snd ",
            });
            write_expr(out, e2);
            out.push(')');
        }
        Expr::Ref(e2) => {
            out.push_str("(ref ");
            write_expr(out, e2);
            out.push(')');
        }
        Expr::Deref(e2) => {
            out.push_str("(get ");
            write_expr(out, e2);
            out.push(')');
        }
        Expr::BinOp(op, a, b) => {
            out.push_str("(op ");
            out.push_str(op.name());
            out.push(' ');
            write_expr(out, a);
            out.push(' ');
            write_expr(out, b);
            out.push(')');
        }
        Expr::Emit(e2) => {
            out.push_str("(emit ");
            write_expr(out, e2);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_identity_lambda() {
        assert_eq!(parse("(lam x x)").unwrap(), Expr::lam("x", Expr::var("x")));
    }

    #[test]
    fn parses_emit_of_symbol() {
        assert_eq!(
            parse("(emit 'open)").unwrap(),
            Expr::emit(Expr::val(Value::sym("open")))
        );
    }

    #[test]
    fn parses_the_pop_wrapper_body() {
        // let r = pop () in (emit ⟨'pop, r⟩; r), with `pop` a free variable.
        let got = parse("(let r (app pop ()) (seq (emit (pair 'pop r)) r))").unwrap();
        let emit = Expr::emit(Expr::mk_pair(Expr::val(Value::sym("pop")), Expr::var("r")));
        let seq_body = Expr::app(Expr::lam("_", Expr::var("r")), emit);
        let expected = Expr::app(
            Expr::lam("r", seq_body),
            Expr::app(Expr::var("pop"), Expr::val(Value::Unit)),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn parses_unit_ints_locs_funids() {
        assert_eq!(parse("()").unwrap(), Expr::Val(Value::Unit));
        assert_eq!(parse("-12").unwrap(), Expr::Val(Value::Int(-12)));
        assert_eq!(parse("#l3").unwrap(), Expr::Val(Value::Loc(3)));
        assert_eq!(parse("#f0").unwrap(), Expr::Val(Value::Fun(0)));
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse("(lam x\n  (app x ))").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.col > 1, "column is tracked: {err}");
    }

    #[test]
    fn rejects_unknown_forms_and_operators() {
        assert!(parse("(frob 1 2)").is_err());
        assert!(parse("(op % 1 2)").is_err());
        assert!(parse("(app f)").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let e = parse("; a comment\n(emit 1) ; trailing\n").unwrap();
        assert_eq!(e, Expr::emit(Expr::val(Value::Int(1))));
    }

    #[test]
    fn print_parse_round_trip_on_samples() {
        let samples = [
            "(lam x (app x (pair 1 'two)))",
            "(op := (ref 0) (op + 1 2))",
            "(if (op < 1 2) (emit 'yes) ())",
            "(fst (snd (pair () #l2)))",
        ];
        for s in samples {
            let e = parse(s).unwrap();
            assert_eq!(parse(&print(&e)).unwrap(), e, "round trip for {s}");
        }
    }
}
