//! Values and expressions of the object language: an untyped call-by-value
//! lambda calculus with mutable references, pairs, integers and an `emit`
//! primitive that outputs a value as a trace event.

use std::collections::BTreeSet;
use std::fmt;

/// Runtime values. Functions are represented by identifiers into the ambient
/// function environment, never as lambda terms. `Sym` atoms exist so that
/// trace events can carry readable tags.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Unit,
    Int(i64),
    /// Heap location `#l<n>`.
    Loc(u64),
    /// Function identifier `#f<n>`.
    Fun(u64),
    /// Symbolic atom `'name`.
    Sym(String),
    Pair(Box<Value>, Box<Value>),
}

impl Value {
    pub fn sym(name: &str) -> Value {
        Value::Sym(name.to_string())
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    /// Right-nested tuple: `⟨a,b,c⟩` is `pair(a, pair(b, c))`.
    pub fn tuple(items: Vec<Value>) -> Value {
        let mut it = items.into_iter().rev();
        let last = it.next().expect("tuple of at least one value");
        it.fold(last, |acc, v| Value::pair(v, acc))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "()"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Loc(l) => write!(f, "#l{l}"),
            Value::Fun(n) => write!(f, "#f{n}"),
            Value::Sym(s) => write!(f, "'{s}"),
            Value::Pair(a, b) => write!(f, "(pair {a} {b})"),
        }
    }
}

/// Binary operators. `=` is structural equality on values (locations and
/// function ids compare by identity), `:=` is assignment, the rest are
/// integer arithmetic and comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Eq,
    Assign,
    Add,
    Sub,
    Mul,
    Lt,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Eq => "=",
            Op::Assign => ":=",
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Lt => "<",
        }
    }
}

/// Pair projection index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Proj {
    Fst,
    Snd,
}

/// Expressions. `let` and `;` are derived forms produced by the parser, not
/// constructors. `Emit` takes a full expression (with a matching evaluation
/// context) so that wrapper code like `emit ⟨pop, r⟩` is well-formed before
/// substitution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Val(Value),
    Var(String),
    Lam(String, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    MkPair(Box<Expr>, Box<Expr>),
    Proj(Proj, Box<Expr>),
    Ref(Box<Expr>),
    Deref(Box<Expr>),
    BinOp(Op, Box<Expr>, Box<Expr>),
    Emit(Box<Expr>),
}

impl Expr {
    pub fn val(v: Value) -> Expr {
        Expr::Val(v)
    }

    pub fn var(x: &str) -> Expr {
        Expr::Var(x.to_string())
    }

    pub fn lam(x: &str, body: Expr) -> Expr {
        Expr::Lam(x.to_string(), Box::new(body))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn if_(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn mk_pair(a: Expr, b: Expr) -> Expr {
        Expr::MkPair(Box::new(a), Box::new(b))
    }

    pub fn fst(e: Expr) -> Expr {
        Expr::Proj(Proj::Fst, Box::new(e))
    }

    pub fn snd(e: Expr) -> Expr {
        Expr::Proj(Proj::Snd, Box::new(e))
    }

    pub fn ref_(e: Expr) -> Expr {
        Expr::Ref(Box::new(e))
    }

    pub fn deref(e: Expr) -> Expr {
        Expr::Deref(Box::new(e))
    }

    pub fn binop(op: Op, a: Expr, b: Expr) -> Expr {
        Expr::BinOp(op, Box::new(a), Box::new(b))
    }

    pub fn emit(e: Expr) -> Expr {
        Expr::Emit(Box::new(e))
    }

    /// `let x = e1 in e2`, i.e. `(λx. e2) e1`.
    pub fn let_(x: &str, e1: Expr, e2: Expr) -> Expr {
        Expr::app(Expr::lam(x, e2), e1)
    }

    /// `e1; e2; …; en` right-folded through single-use lambdas whose binder
    /// is chosen fresh for the continuation.
    pub fn seq(mut exprs: Vec<Expr>) -> Expr {
        let last = exprs.pop().expect("seq of at least one expression");
        exprs.into_iter().rev().fold(last, |rest, e| {
            let fresh = fresh_name("_", &free_vars(&rest));
            Expr::let_(&fresh, e, rest)
        })
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }
}

/// First name in `base`, `base1`, `base2`, … not present in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let mut i = 1u64;
    loop {
        let cand = format!("{base}{i}");
        if !avoid.contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

pub fn free_vars(e: &Expr) -> BTreeSet<String> {
    fn go(e: &Expr, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match e {
            Expr::Val(_) => {}
            Expr::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Expr::Lam(x, body) => {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
            Expr::App(a, b) | Expr::MkPair(a, b) | Expr::BinOp(_, a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Expr::If(c, t, e2) => {
                go(c, bound, out);
                go(t, bound, out);
                go(e2, bound, out);
            }
            Expr::Proj(_, e2) | Expr::Ref(e2) | Expr::Deref(e2) | Expr::Emit(e2) => {
                go(e2, bound, out)
            }
        }
    }
    let mut out = BTreeSet::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

/// Call-by-value substitution `e{v/x}`. Values are closed, so no renaming is
/// ever required: descending under a binder for `x` simply stops.
pub fn subst(e: Expr, x: &str, v: &Value) -> Expr {
    match e {
        Expr::Val(w) => Expr::Val(w),
        Expr::Var(y) => {
            if y == x {
                Expr::Val(v.clone())
            } else {
                Expr::Var(y)
            }
        }
        Expr::Lam(y, body) => {
            if y == x {
                Expr::Lam(y, body)
            } else {
                Expr::Lam(y, Box::new(subst(*body, x, v)))
            }
        }
        Expr::App(a, b) => Expr::app(subst(*a, x, v), subst(*b, x, v)),
        Expr::If(c, t, e2) => Expr::if_(subst(*c, x, v), subst(*t, x, v), subst(*e2, x, v)),
        Expr::MkPair(a, b) => Expr::mk_pair(subst(*a, x, v), subst(*b, x, v)),
        Expr::Proj(i, e2) => Expr::Proj(i, Box::new(subst(*e2, x, v))),
        Expr::Ref(e2) => Expr::ref_(subst(*e2, x, v)),
        Expr::Deref(e2) => Expr::deref(subst(*e2, x, v)),
        Expr::BinOp(op, a, b) => Expr::binop(op, subst(*a, x, v), subst(*b, x, v)),
        Expr::Emit(e2) => Expr::emit(subst(*e2, x, v)),
    }
}

/// Erasure `⌊e⌋`: every `emit` subterm becomes `()`, everything else is
/// preserved. Idempotent by construction.
pub fn erase(e: &Expr) -> Expr {
    match e {
        Expr::Val(v) => Expr::Val(v.clone()),
        Expr::Var(x) => Expr::Var(x.clone()),
        Expr::Lam(x, body) => Expr::Lam(x.clone(), Box::new(erase(body))),
        Expr::App(a, b) => Expr::app(erase(a), erase(b)),
        Expr::If(c, t, e2) => Expr::if_(erase(c), erase(t), erase(e2)),
        Expr::MkPair(a, b) => Expr::mk_pair(erase(a), erase(b)),
        Expr::Proj(i, e2) => Expr::Proj(*i, Box::new(erase(e2))),
        Expr::Ref(e2) => Expr::ref_(erase(e2)),
        Expr::Deref(e2) => Expr::deref(erase(e2)),
        Expr::BinOp(op, a, b) => Expr::binop(*op, erase(a), erase(b)),
        Expr::Emit(_) => Expr::Val(Value::Unit),
    }
}
