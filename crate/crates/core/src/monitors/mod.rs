//! Trace languages and their checkers.
//!
//! Each language comes in two forms that must agree on every trace: a
//! declarative membership predicate in [`decl`], transcribed from the
//! defining formulas, and an incremental online monitor in [`online`] that
//! folds over events. Events outside a language's alphabet reject (they are
//! never skipped), with one deliberate exception: `L-str` accepts anything
//! once the library has demonstrably reused a handle, because its defining
//! predicate is a disjunction with exactly that escape hatch.

pub mod decl;
pub mod online;

use crate::lang::Value;

pub use decl::{allocs, esafe, isopen_check, member, noclose, notfresh, stk_tr_check, trav};
pub use online::{mon_init, mon_run, mon_step, mon_verdict, BracState, ForeachPhase, MonitorState, StackMode};

/// The six trace languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LangId {
    File,
    Coll,
    Brac,
    Stack,
    StackSimple,
    Str,
}

impl LangId {
    pub const ALL: [LangId; 6] = [
        LangId::File,
        LangId::Coll,
        LangId::Brac,
        LangId::Stack,
        LangId::StackSimple,
        LangId::Str,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LangId::File => "L-file",
            LangId::Coll => "L-coll",
            LangId::Brac => "L-brac",
            LangId::Stack => "L-stack",
            LangId::StackSimple => "L-stack-simple",
            LangId::Str => "L-str",
        }
    }

    pub fn parse(s: &str) -> Option<LangId> {
        LangId::ALL.into_iter().find(|l| l.as_str() == s)
    }

    /// Whether membership is closed under taking prefixes. `L-str` is not:
    /// a handle reuse late in the trace validates prefixes that were
    /// rejected on their own.
    pub fn prefix_closed(self) -> bool {
        !matches!(self, LangId::Str)
    }
}

impl std::fmt::Display for LangId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn as_pair(v: &Value) -> Option<(&Value, &Value)> {
    match v {
        Value::Pair(a, b) => Some((a, b)),
        _ => None,
    }
}

fn as_sym(v: &Value) -> Option<&str> {
    match v {
        Value::Sym(s) => Some(s),
        _ => None,
    }
}

fn as_loc(v: &Value) -> Option<u64> {
    match v {
        Value::Loc(l) => Some(*l),
        _ => None,
    }
}

fn as_fun(v: &Value) -> Option<u64> {
    match v {
        Value::Fun(f) => Some(*f),
        _ => None,
    }
}

/// Σ = { open, close, read }.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FileEv {
    Open,
    Close,
    Read,
}

pub(crate) fn file_ev(v: &Value) -> Option<FileEv> {
    match as_sym(v)? {
        "open" => Some(FileEv::Open),
        "close" => Some(FileEv::Close),
        "read" => Some(FileEv::Read),
        _ => None,
    }
}

/// Σ = { size, add, remove } ∪ { ⟨iterator,ℓ⟩, ⟨next,ℓ⟩ | ℓ ∈ Loc }.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CollEv {
    Size,
    Add,
    Remove,
    Iterator(u64),
    Next(u64),
}

pub(crate) fn coll_ev(v: &Value) -> Option<CollEv> {
    if let Some(s) = as_sym(v) {
        return match s {
            "size" => Some(CollEv::Size),
            "add" => Some(CollEv::Add),
            "remove" => Some(CollEv::Remove),
            _ => None,
        };
    }
    let (tag, payload) = as_pair(v)?;
    match (as_sym(tag)?, as_loc(payload)) {
        ("iterator", Some(l)) => Some(CollEv::Iterator(l)),
        ("next", Some(l)) => Some(CollEv::Next(l)),
        _ => None,
    }
}

/// Call/return events of the bracketing library; `f` is always a function
/// id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BracEv {
    CallWithRes(u64),
    RetWithRes(u64),
    CallF(u64),
    RetF(u64),
    CallOp,
    RetOp,
}

pub(crate) fn brac_ev(v: &Value) -> Option<BracEv> {
    let (tag, payload) = as_pair(v)?;
    let call = match as_sym(tag)? {
        "call" => true,
        "ret" => false,
        _ => return None,
    };
    if let Some(f) = as_fun(payload) {
        return Some(if call { BracEv::CallF(f) } else { BracEv::RetF(f) });
    }
    if as_sym(payload) == Some("op") {
        return Some(if call { BracEv::CallOp } else { BracEv::RetOp });
    }
    let (inner, f) = as_pair(payload)?;
    if as_sym(inner)? != "withRes" {
        return None;
    }
    let f = as_fun(f)?;
    Some(if call {
        BracEv::CallWithRes(f)
    } else {
        BracEv::RetWithRes(f)
    })
}

/// Events of the traversable stack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum StackEv {
    CallPush(Value),
    RetPush,
    CallPop,
    RetPop(Value),
    CallForeach(u64),
    CallCb(u64, Value),
    RetCb(u64),
    RetForeach,
}

pub(crate) fn stack_ev(v: &Value) -> Option<StackEv> {
    let (tag, payload) = as_pair(v)?;
    match as_sym(tag)? {
        "call" => {
            if as_sym(payload) == Some("pop") {
                return Some(StackEv::CallPop);
            }
            let (head, arg) = as_pair(payload)?;
            if let Some(f) = as_fun(head) {
                return Some(StackEv::CallCb(f, arg.clone()));
            }
            match as_sym(head)? {
                "push" => Some(StackEv::CallPush(arg.clone())),
                "foreach" => Some(StackEv::CallForeach(as_fun(arg)?)),
                _ => None,
            }
        }
        "ret" => {
            if let Some(f) = as_fun(payload) {
                return Some(StackEv::RetCb(f));
            }
            if let Some(s) = as_sym(payload) {
                return match s {
                    "push" => Some(StackEv::RetPush),
                    "foreach" => Some(StackEv::RetForeach),
                    _ => None,
                };
            }
            let (head, x) = as_pair(payload)?;
            if as_sym(head)? == "pop" {
                Some(StackEv::RetPop(x.clone()))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Σ = { ⟨push,v⟩, ⟨pop,v⟩ | v ∈ Val }.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SimpleEv {
    Push(Value),
    Pop(Value),
}

pub(crate) fn simple_ev(v: &Value) -> Option<SimpleEv> {
    let (tag, payload) = as_pair(v)?;
    match as_sym(tag)? {
        "push" => Some(SimpleEv::Push(payload.clone())),
        "pop" => Some(SimpleEv::Pop(payload.clone())),
        _ => None,
    }
}

/// String-sanitisation events; handles are locations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StrEv {
    Input(u64),
    Constant(u64),
    Sanitize(u64),
    Sink(u64),
    Concat(u64, u64, u64),
}

pub(crate) fn str_ev(v: &Value) -> Option<StrEv> {
    let (tag, payload) = as_pair(v)?;
    match as_sym(tag)? {
        "input" => Some(StrEv::Input(as_loc(payload)?)),
        "constant" => Some(StrEv::Constant(as_loc(payload)?)),
        "sanitize" => Some(StrEv::Sanitize(as_loc(payload)?)),
        "sink" => Some(StrEv::Sink(as_loc(payload)?)),
        "concat" => {
            let (s, rest) = as_pair(payload)?;
            let (s1, s2) = as_pair(rest)?;
            Some(StrEv::Concat(as_loc(s)?, as_loc(s1)?, as_loc(s2)?))
        }
        _ => None,
    }
}

/// True when the event belongs to the language's alphabet.
pub fn in_alphabet(lang: LangId, v: &Value) -> bool {
    match lang {
        LangId::File => file_ev(v).is_some(),
        LangId::Coll => coll_ev(v).is_some(),
        LangId::Brac => brac_ev(v).is_some(),
        LangId::Stack => stack_ev(v).is_some(),
        LangId::StackSimple => simple_ev(v).is_some(),
        LangId::Str => str_ev(v).is_some(),
    }
}
