//! Incremental online monitors.
//!
//! A monitor state is a plain immutable value; `mon_step` returns the
//! successor state and `mon_verdict` reads the verdict off the state. The
//! contract, checked exhaustively in the acceptance suite: folding
//! `mon_step` over any trace gives the same verdict as declarative
//! membership of that trace.

use std::collections::BTreeSet;

use crate::lang::Value;

use super::{
    brac_ev, coll_ev, file_ev, simple_ev, stack_ev, str_ev, BracEv, CollEv, FileEv, LangId,
    SimpleEv, StackEv, StrEv,
};

/// Register-automaton states for `L-brac`; the register holds the callback
/// id of the current episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracState {
    Balanced,
    AfterCallWithRes(u64),
    InBody(u64),
    InOp(u64),
    AfterRetF(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForeachPhase {
    ExpectCall,
    InCall(Value),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StackMode {
    Idle,
    InPush(Value),
    InPop,
    InForeach {
        f: u64,
        pending: Vec<Value>,
        phase: ForeachPhase,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonitorState {
    File {
        open: bool,
        rejected: bool,
    },
    Coll {
        /// Iterators created since the last destructive event.
        valid: BTreeSet<u64>,
        rejected: bool,
    },
    Brac {
        state: BracState,
        rejected: bool,
    },
    Stack {
        mode: StackMode,
        /// Replayed stack contents, top first.
        stack: Vec<Value>,
        rejected: bool,
    },
    StackSimple {
        pushed: BTreeSet<Value>,
        rejected: bool,
    },
    /// No reject latch: the verdict is `notfresh ∨ (¬foreign ∧ sunk ⊆ safe)`,
    /// so a handle reuse rehabilitates any earlier failure.
    Str {
        safe: BTreeSet<u64>,
        sunk: BTreeSet<u64>,
        allocated: BTreeSet<u64>,
        notfresh: bool,
        foreign: bool,
    },
}

pub fn mon_init(lang: LangId) -> MonitorState {
    match lang {
        LangId::File => MonitorState::File {
            open: false,
            rejected: false,
        },
        LangId::Coll => MonitorState::Coll {
            valid: BTreeSet::new(),
            rejected: false,
        },
        LangId::Brac => MonitorState::Brac {
            state: BracState::Balanced,
            rejected: false,
        },
        LangId::Stack => MonitorState::Stack {
            mode: StackMode::Idle,
            stack: Vec::new(),
            rejected: false,
        },
        LangId::StackSimple => MonitorState::StackSimple {
            pushed: BTreeSet::new(),
            rejected: false,
        },
        LangId::Str => MonitorState::Str {
            safe: BTreeSet::new(),
            sunk: BTreeSet::new(),
            allocated: BTreeSet::new(),
            notfresh: false,
            foreign: false,
        },
    }
}

pub fn mon_verdict(st: &MonitorState) -> bool {
    match st {
        MonitorState::File { rejected, .. }
        | MonitorState::Coll { rejected, .. }
        | MonitorState::Brac { rejected, .. }
        | MonitorState::Stack { rejected, .. }
        | MonitorState::StackSimple { rejected, .. } => !rejected,
        MonitorState::Str {
            safe,
            sunk,
            notfresh,
            foreign,
            ..
        } => *notfresh || (!*foreign && sunk.is_subset(safe)),
    }
}

pub fn mon_step(st: &MonitorState, ev: &Value) -> MonitorState {
    match st {
        MonitorState::File { open, rejected } => {
            if *rejected {
                return st.clone();
            }
            match file_ev(ev) {
                Some(FileEv::Open) => MonitorState::File {
                    open: true,
                    rejected: false,
                },
                Some(FileEv::Read) if *open => st.clone(),
                Some(FileEv::Close) if *open => MonitorState::File {
                    open: false,
                    rejected: false,
                },
                _ => MonitorState::File {
                    open: *open,
                    rejected: true,
                },
            }
        }

        MonitorState::Coll { valid, rejected } => {
            if *rejected {
                return st.clone();
            }
            let mut valid = valid.clone();
            let rejected = match coll_ev(ev) {
                Some(CollEv::Size) => false,
                Some(CollEv::Add) | Some(CollEv::Remove) => {
                    valid.clear();
                    false
                }
                Some(CollEv::Iterator(l)) => {
                    valid.insert(l);
                    false
                }
                Some(CollEv::Next(l)) => !valid.contains(&l),
                None => true,
            };
            MonitorState::Coll { valid, rejected }
        }

        MonitorState::Brac { state, rejected } => {
            if *rejected {
                return st.clone();
            }
            let next = match (state, brac_ev(ev)) {
                (BracState::Balanced, Some(BracEv::CallWithRes(f))) => {
                    Some(BracState::AfterCallWithRes(f))
                }
                (BracState::AfterCallWithRes(f), Some(BracEv::CallF(g))) if *f == g => {
                    Some(BracState::InBody(*f))
                }
                (BracState::InBody(f), Some(BracEv::CallOp)) => Some(BracState::InOp(*f)),
                (BracState::InOp(f), Some(BracEv::RetOp)) => Some(BracState::InBody(*f)),
                (BracState::InBody(f), Some(BracEv::RetF(g))) if *f == g => {
                    Some(BracState::AfterRetF(*f))
                }
                (BracState::AfterRetF(f), Some(BracEv::RetWithRes(g))) if *f == g => {
                    Some(BracState::Balanced)
                }
                _ => None,
            };
            match next {
                Some(state) => MonitorState::Brac {
                    state,
                    rejected: false,
                },
                None => MonitorState::Brac {
                    state: *state,
                    rejected: true,
                },
            }
        }

        MonitorState::Stack {
            mode,
            stack,
            rejected,
        } => {
            if *rejected {
                return st.clone();
            }
            let reject = || MonitorState::Stack {
                mode: mode.clone(),
                stack: stack.clone(),
                rejected: true,
            };
            let ev = match stack_ev(ev) {
                Some(e) => e,
                None => return reject(),
            };
            match (mode, ev) {
                (StackMode::Idle, StackEv::CallPush(a)) => MonitorState::Stack {
                    mode: StackMode::InPush(a),
                    stack: stack.clone(),
                    rejected: false,
                },
                (StackMode::Idle, StackEv::CallPop) => MonitorState::Stack {
                    mode: StackMode::InPop,
                    stack: stack.clone(),
                    rejected: false,
                },
                (StackMode::Idle, StackEv::CallForeach(f)) => MonitorState::Stack {
                    mode: StackMode::InForeach {
                        f,
                        pending: stack.clone(),
                        phase: ForeachPhase::ExpectCall,
                    },
                    stack: stack.clone(),
                    rejected: false,
                },
                (StackMode::InPush(a), StackEv::RetPush) => {
                    let mut stack = stack.clone();
                    stack.insert(0, a.clone());
                    MonitorState::Stack {
                        mode: StackMode::Idle,
                        stack,
                        rejected: false,
                    }
                }
                (StackMode::InPop, StackEv::RetPop(x)) => {
                    if stack.first() == Some(&x) {
                        MonitorState::Stack {
                            mode: StackMode::Idle,
                            stack: stack[1..].to_vec(),
                            rejected: false,
                        }
                    } else if stack.is_empty() && x == Value::Unit {
                        MonitorState::Stack {
                            mode: StackMode::Idle,
                            stack: Vec::new(),
                            rejected: false,
                        }
                    } else {
                        reject()
                    }
                }
                (
                    StackMode::InForeach {
                        f,
                        pending,
                        phase: ForeachPhase::ExpectCall,
                    },
                    ev,
                ) => match ev {
                    StackEv::CallCb(g, a) if g == *f && pending.first() == Some(&a) => {
                        MonitorState::Stack {
                            mode: StackMode::InForeach {
                                f: *f,
                                pending: pending[1..].to_vec(),
                                phase: ForeachPhase::InCall(a),
                            },
                            stack: stack.clone(),
                            rejected: false,
                        }
                    }
                    StackEv::RetForeach if pending.is_empty() => MonitorState::Stack {
                        mode: StackMode::Idle,
                        stack: stack.clone(),
                        rejected: false,
                    },
                    _ => reject(),
                },
                (
                    StackMode::InForeach {
                        f,
                        pending,
                        phase: ForeachPhase::InCall(_),
                    },
                    StackEv::RetCb(g),
                ) if g == *f => MonitorState::Stack {
                    mode: StackMode::InForeach {
                        f: *f,
                        pending: pending.clone(),
                        phase: ForeachPhase::ExpectCall,
                    },
                    stack: stack.clone(),
                    rejected: false,
                },
                _ => reject(),
            }
        }

        MonitorState::StackSimple { pushed, rejected } => {
            if *rejected {
                return st.clone();
            }
            let mut pushed = pushed.clone();
            let rejected = match simple_ev(ev) {
                Some(SimpleEv::Push(v)) => {
                    pushed.insert(v);
                    false
                }
                Some(SimpleEv::Pop(v)) => v != Value::Unit && !pushed.contains(&v),
                None => true,
            };
            MonitorState::StackSimple { pushed, rejected }
        }

        MonitorState::Str {
            safe,
            sunk,
            allocated,
            notfresh,
            foreign,
        } => {
            let mut safe = safe.clone();
            let mut sunk = sunk.clone();
            let mut allocated = allocated.clone();
            let mut notfresh = *notfresh;
            let mut foreign = *foreign;
            let mut alloc = |l: u64, allocated: &mut BTreeSet<u64>, notfresh: &mut bool| {
                if !allocated.insert(l) {
                    *notfresh = true;
                }
            };
            match str_ev(ev) {
                Some(StrEv::Input(l)) => alloc(l, &mut allocated, &mut notfresh),
                Some(StrEv::Constant(l)) => {
                    alloc(l, &mut allocated, &mut notfresh);
                    safe.insert(l);
                }
                Some(StrEv::Sanitize(l)) => {
                    safe.insert(l);
                }
                Some(StrEv::Concat(r, s1, s2)) => {
                    let operands_safe = safe.contains(&s1) && safe.contains(&s2);
                    alloc(r, &mut allocated, &mut notfresh);
                    if operands_safe {
                        safe.insert(r);
                    }
                }
                Some(StrEv::Sink(l)) => {
                    sunk.insert(l);
                }
                None => foreign = true,
            }
            MonitorState::Str {
                safe,
                sunk,
                allocated,
                notfresh,
                foreign,
            }
        }
    }
}

/// Fold a monitor over a trace, returning the verdict after each event and
/// the final state.
pub fn mon_run(lang: LangId, trace: &[Value]) -> (Vec<bool>, MonitorState) {
    let mut st = mon_init(lang);
    let mut verdicts = Vec::with_capacity(trace.len());
    for ev in trace {
        st = mon_step(&st, ev);
        verdicts.push(mon_verdict(&st));
    }
    (verdicts, st)
}
