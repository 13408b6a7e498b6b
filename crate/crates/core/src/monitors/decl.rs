//! Declarative membership, transcribed from the defining predicates and
//! grammars. These are the reference checkers the online monitors are
//! measured against; they favour being obviously faithful over speed.
//!
//! Positions are 1-based throughout, matching the `t[n]`, `t[|t|]`
//! convention of the definitions.

use std::collections::HashMap;

use crate::lang::Value;

use super::{
    brac_ev, coll_ev, file_ev, simple_ev, stack_ev, str_ev, BracEv, CollEv, FileEv, LangId,
    SimpleEv, StackEv, StrEv,
};

/// Declarative membership of `t` in `lang`.
pub fn member(lang: LangId, t: &[Value]) -> bool {
    match lang {
        LangId::File => file_member(t),
        LangId::Coll => coll_member(t),
        LangId::Brac => brac_member(t),
        LangId::Stack => stack_member(t),
        LangId::StackSimple => stack_simple_member(t),
        LangId::Str => str_member(t),
    }
}

// ---------------------------------------------------------------------------
// L-file: every read/close happens while the file is open.

/// `noclose(t, n, m)`: no close event strictly between positions `n` and `m`.
pub fn noclose(t: &[Value], n: usize, m: usize) -> bool {
    (n + 1..m).all(|k| t[k - 1] != Value::sym("close"))
}

/// `isopen(t, n)`: some earlier open has no close between it and position
/// `n`. Position `|t| + 1` asks about the state after the whole trace.
pub fn isopen_check(t: &[Value], n: usize) -> bool {
    assert!(
        (1..=t.len() + 1).contains(&n),
        "isopen: position {n} out of range for a trace of length {}",
        t.len()
    );
    (1..n).any(|m| t[m - 1] == Value::sym("open") && noclose(t, m, n))
}

fn file_member(t: &[Value]) -> bool {
    if t.iter().any(|e| file_ev(e).is_none()) {
        return false;
    }
    (1..=t.len()).all(|n| match file_ev(&t[n - 1]).unwrap() {
        FileEv::Read | FileEv::Close => isopen_check(t, n),
        FileEv::Open => true,
    })
}

// ---------------------------------------------------------------------------
// L-coll: ⟨next,ℓ⟩ needs an ⟨iterator,ℓ⟩ with no add/remove in between.

fn coll_member(t: &[Value]) -> bool {
    let Some(evs) = t.iter().map(coll_ev).collect::<Option<Vec<_>>>() else {
        return false;
    };
    (1..=evs.len()).all(|i| match evs[i - 1] {
        CollEv::Next(l) => (1..i).any(|j| {
            evs[j - 1] == CollEv::Iterator(l)
                && (j + 1..i).all(|k| !matches!(evs[k - 1], CollEv::Add | CollEv::Remove))
        }),
        _ => true,
    })
}

// ---------------------------------------------------------------------------
// L-brac: prefix closure of sequences of episodes
//   ⟨call,withRes,f⟩ · ⟨call,f⟩ · (⟨call,op⟩ · ⟨ret,op⟩)* · ⟨ret,f⟩ · ⟨ret,withRes,f⟩.

fn brac_member(t: &[Value]) -> bool {
    let Some(evs) = t.iter().map(brac_ev).collect::<Option<Vec<_>>>() else {
        return false;
    };
    is_brac(&evs)
}

fn is_brac(t: &[BracEv]) -> bool {
    if t.is_empty() {
        return true;
    }
    // A complete leading episode followed by a word of the language, or a
    // prefix of a single episode.
    for k in 1..=t.len() {
        if is_full_episode(&t[..k]) && is_brac(&t[k..]) {
            return true;
        }
    }
    is_episode_prefix(t)
}

fn episode(f: u64, op_pairs: usize) -> Vec<BracEv> {
    let mut ep = vec![BracEv::CallWithRes(f), BracEv::CallF(f)];
    for _ in 0..op_pairs {
        ep.push(BracEv::CallOp);
        ep.push(BracEv::RetOp);
    }
    ep.push(BracEv::RetF(f));
    ep.push(BracEv::RetWithRes(f));
    ep
}

fn is_full_episode(s: &[BracEv]) -> bool {
    let BracEv::CallWithRes(f) = s[0] else {
        return false;
    };
    s.len() >= 4 && (s.len() - 4) % 2 == 0 && s == episode(f, (s.len() - 4) / 2).as_slice()
}

fn is_episode_prefix(s: &[BracEv]) -> bool {
    if s.is_empty() {
        return true;
    }
    let BracEv::CallWithRes(f) = s[0] else {
        return false;
    };
    (0..=s.len() / 2 + 1).any(|j| {
        let ep = episode(f, j);
        s.len() <= ep.len() && ep[..s.len()] == *s
    })
}

// ---------------------------------------------------------------------------
// L-stack: prefix closure of { t | stk_tr(t, ε) }.

/// `stk_tr(t, α)`: the complete trace `t` leaves the stack at `α`
/// (head = top). Matches whole episodes from the right end of `t`.
pub fn stk_tr_check(t: &[Value], alpha: &[Value]) -> bool {
    match t.iter().map(stack_ev).collect::<Option<Vec<_>>>() {
        Some(evs) => stk_tr(&evs, alpha),
        None => false,
    }
}

fn stk_tr(t: &[StackEv], alpha: &[Value]) -> bool {
    let n = t.len();
    if n == 0 {
        return alpha.is_empty();
    }
    if n >= 2 {
        if let (StackEv::CallPush(a), StackEv::RetPush) = (&t[n - 2], &t[n - 1]) {
            if let Some((top, rest)) = alpha.split_first() {
                if top == a && stk_tr(&t[..n - 2], rest) {
                    return true;
                }
            }
        }
        if let (StackEv::CallPop, StackEv::RetPop(x)) = (&t[n - 2], &t[n - 1]) {
            if *x == Value::Unit && alpha.is_empty() && stk_tr(&t[..n - 2], &[]) {
                return true;
            }
            let mut before = Vec::with_capacity(alpha.len() + 1);
            before.push(x.clone());
            before.extend_from_slice(alpha);
            if stk_tr(&t[..n - 2], &before) {
                return true;
            }
        }
        if t[n - 1] == StackEv::RetForeach {
            for m in (0..n - 1).rev() {
                if let StackEv::CallForeach(f) = t[m] {
                    if trav(&t[m + 1..n - 1], alpha, f) && stk_tr(&t[..m], alpha) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// `trav(t, α, f)`: `t` is exactly one bracketed callback invocation per
/// element of `α`, in order.
pub fn trav(t: &[Value], alpha: &[Value], f: u64) -> bool {
    match t.iter().map(stack_ev).collect::<Option<Vec<_>>>() {
        Some(evs) => trav_evs(&evs, alpha, f),
        None => false,
    }
}

fn trav_evs(t: &[StackEv], alpha: &[Value], f: u64) -> bool {
    if t.is_empty() {
        return alpha.is_empty();
    }
    if t.len() >= 2 {
        if let (StackEv::CallCb(g, a), StackEv::RetCb(h)) = (&t[0], &t[1]) {
            if *g == f && *h == f {
                if let Some((top, rest)) = alpha.split_first() {
                    return top == a && trav_evs(&t[2..], rest, f);
                }
            }
        }
    }
    false
}

/// All stacks `α` with `stk_tr(t, α)`, by inverting the clauses from the
/// right end. The set has at most one element except transiently around
/// pops of `()`.
fn feasible_stacks(t: &[StackEv]) -> Vec<Vec<Value>> {
    let n = t.len();
    if n == 0 {
        return vec![vec![]];
    }
    match &t[n - 1] {
        StackEv::RetPush => {
            if n < 2 {
                return vec![];
            }
            let StackEv::CallPush(a) = &t[n - 2] else {
                return vec![];
            };
            feasible_stacks(&t[..n - 2])
                .into_iter()
                .map(|mut s| {
                    s.insert(0, a.clone());
                    s
                })
                .collect()
        }
        StackEv::RetPop(x) => {
            if n < 2 || t[n - 2] != StackEv::CallPop {
                return vec![];
            }
            let before = feasible_stacks(&t[..n - 2]);
            let mut out: Vec<Vec<Value>> = Vec::new();
            for s in &before {
                if s.first() == Some(x) {
                    out.push(s[1..].to_vec());
                }
            }
            if *x == Value::Unit && before.iter().any(|s| s.is_empty()) && !out.contains(&vec![])
            {
                out.push(vec![]);
            }
            out.sort();
            out.dedup();
            out
        }
        StackEv::RetForeach => {
            let mut out = Vec::new();
            for m in (0..n - 1).rev() {
                if let StackEv::CallForeach(f) = t[m] {
                    // trav fixes α to the callback arguments in call order.
                    if let Some(alpha) = trav_args(&t[m + 1..n - 1], f) {
                        for s in feasible_stacks(&t[..m]) {
                            if s == alpha && !out.contains(&s) {
                                out.push(s);
                            }
                        }
                    }
                }
            }
            out
        }
        _ => vec![],
    }
}

/// When `t` is exactly a sequence of completed ⟨call,f,a⟩⟨ret,f⟩ pairs,
/// the argument list; otherwise None.
fn trav_args(t: &[StackEv], f: u64) -> Option<Vec<Value>> {
    if t.len() % 2 != 0 {
        return None;
    }
    let mut args = Vec::new();
    for pair in t.chunks(2) {
        match (&pair[0], &pair[1]) {
            (StackEv::CallCb(g, a), StackEv::RetCb(h)) if *g == f && *h == f => {
                args.push(a.clone())
            }
            _ => return None,
        }
    }
    Some(args)
}

/// `t ∈ L-stack` iff some completion of `t` is a full `stk_tr` trace.
/// Because pop episodes can always drain whatever is on the stack,
/// completability to an empty final stack is the same as completability of
/// the currently open episode; the finishers below enumerate exactly those.
fn stack_member(t: &[Value]) -> bool {
    let Some(evs) = t.iter().map(stack_ev).collect::<Option<Vec<_>>>() else {
        return false;
    };
    // Already episode-complete and consistent.
    if !feasible_stacks(&evs).is_empty() {
        return true;
    }
    let n = evs.len();
    // Mid-push: ⟨ret,push⟩ closes it.
    {
        let mut ext = evs.clone();
        ext.push(StackEv::RetPush);
        if !feasible_stacks(&ext).is_empty() {
            return true;
        }
    }
    // Mid-pop: some return value (a pushed value or unit) closes it.
    let mut pool: Vec<Value> = vec![Value::Unit];
    for e in &evs {
        if let StackEv::CallPush(a) = e {
            if !pool.contains(a) {
                pool.push(a.clone());
            }
        }
    }
    for v in &pool {
        let mut ext = evs.clone();
        ext.push(StackEv::RetPop(v.clone()));
        if !feasible_stacks(&ext).is_empty() {
            return true;
        }
    }
    // Mid-foreach: the episode can close iff the events since the opening
    // ⟨call,foreach,f⟩ are a prefix of a traversal of some feasible stack;
    // the remaining callback invocations and ⟨ret,foreach⟩ then exist.
    for m in (0..n).rev() {
        let StackEv::CallForeach(f) = evs[m] else {
            continue;
        };
        let Some((done, dangling)) = trav_prefix(&evs[m + 1..], f) else {
            continue;
        };
        for s in feasible_stacks(&evs[..m]) {
            if s.len() < done.len() {
                continue;
            }
            if s[..done.len()] != done[..] {
                continue;
            }
            match &dangling {
                None => return true,
                Some(a) if s.get(done.len()) == Some(a) => return true,
                Some(_) => {}
            }
        }
    }
    false
}

/// Splits a traversal-in-progress into completed callback arguments and an
/// optionally dangling ⟨call,f,a⟩; None when any other event intervenes.
fn trav_prefix(t: &[StackEv], f: u64) -> Option<(Vec<Value>, Option<Value>)> {
    let mut args = Vec::new();
    let mut i = 0;
    while i < t.len() {
        let StackEv::CallCb(g, a) = &t[i] else {
            return None;
        };
        if *g != f {
            return None;
        }
        match t.get(i + 1) {
            None => return Some((args, Some(a.clone()))),
            Some(StackEv::RetCb(h)) if *h == f => {
                args.push(a.clone());
                i += 2;
            }
            Some(_) => return None,
        }
    }
    Some((args, None))
}

// ---------------------------------------------------------------------------
// L-stack-simple: every non-unit pop value was pushed earlier.

fn stack_simple_member(t: &[Value]) -> bool {
    let Some(evs) = t.iter().map(simple_ev).collect::<Option<Vec<_>>>() else {
        return false;
    };
    (1..=evs.len()).all(|i| match &evs[i - 1] {
        SimpleEv::Pop(v) if *v != Value::Unit => {
            (1..i).any(|j| evs[j - 1] == SimpleEv::Push(v.clone()))
        }
        _ => true,
    })
}

// ---------------------------------------------------------------------------
// L-str: every sink is justified over the whole trace, unless the library
// reused a handle.

/// `esafe(s, t)`: the string `s` is safe to emit after trace `t`, by
/// structural recursion on the right end of `t`.
pub fn esafe(s: &Value, t: &[Value]) -> bool {
    let Some((h, t0)) = t.split_last() else {
        return false;
    };
    if esafe(s, t0) {
        return true;
    }
    if *h == Value::pair(Value::sym("constant"), s.clone())
        || *h == Value::pair(Value::sym("sanitize"), s.clone())
    {
        return true;
    }
    if let Some(StrEv::Concat(r, s1, s2)) = str_ev(h) {
        if Value::Loc(r) == *s {
            return esafe(&Value::Loc(s1), t0) && esafe(&Value::Loc(s2), t0);
        }
    }
    false
}

/// Memoised variant keyed on (handle, prefix length); the recursion is the
/// same as [`esafe`].
fn esafe_memo(s: u64, len: usize, t: &[StrEv], memo: &mut HashMap<(u64, usize), bool>) -> bool {
    if len == 0 {
        return false;
    }
    if let Some(&b) = memo.get(&(s, len)) {
        return b;
    }
    let h = &t[len - 1];
    let r = esafe_memo(s, len - 1, t, memo)
        || matches!(*h, StrEv::Constant(x) | StrEv::Sanitize(x) if x == s)
        || match *h {
            StrEv::Concat(r, s1, s2) if r == s => {
                esafe_memo(s1, len - 1, t, memo) && esafe_memo(s2, len - 1, t, memo)
            }
            _ => false,
        };
    memo.insert((s, len), r);
    r
}

/// The handle an event allocates, when it is an in-alphabet allocation
/// (constant, input, or concat result).
fn alloc_handle(e: &Value) -> Option<u64> {
    match str_ev(e)? {
        StrEv::Input(s) | StrEv::Constant(s) | StrEv::Concat(s, _, _) => Some(s),
        _ => None,
    }
}

/// `allocs(s, t, n)`: position `n` allocates handle `s`.
pub fn allocs(s: &Value, t: &[Value], n: usize) -> bool {
    assert!((1..=t.len()).contains(&n), "allocs: position out of range");
    match (alloc_handle(&t[n - 1]), s) {
        (Some(l), Value::Loc(want)) => l == *want,
        _ => false,
    }
}

/// Two distinct positions allocate the same handle.
pub fn notfresh(t: &[Value]) -> bool {
    (1..=t.len()).any(|n| match alloc_handle(&t[n - 1]) {
        Some(s) => (1..=t.len()).any(|m| m != n && allocs(&Value::Loc(s), t, m)),
        None => false,
    })
}

fn str_member(t: &[Value]) -> bool {
    if notfresh(t) {
        return true;
    }
    let Some(evs) = t.iter().map(|e| str_ev(e)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let mut memo = HashMap::new();
    evs.iter().enumerate().all(|(i, e)| match *e {
        StrEv::Sink(s) => {
            let _ = i;
            esafe_memo(s, evs.len(), &evs, &mut memo)
        }
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Value {
        Value::sym(s)
    }

    fn ev2(tag: &str, v: Value) -> Value {
        Value::pair(sym(tag), v)
    }

    fn loc(l: u64) -> Value {
        Value::Loc(l)
    }

    #[test]
    fn file_membership_examples() {
        let good = vec![sym("open"), sym("read"), sym("close")];
        let bad = vec![sym("open"), sym("close"), sym("read")];
        assert!(member(LangId::File, &good));
        assert!(!member(LangId::File, &bad));
        assert!(member(LangId::File, &[]));
        // Alphabet-foreign events reject.
        assert!(!member(LangId::File, &[sym("open"), Value::Int(1)]));
    }

    #[test]
    fn isopen_examples() {
        assert!(isopen_check(&[sym("open")], 2));
        assert!(!isopen_check(&[], 1));
        assert!(!isopen_check(&[sym("open"), sym("close")], 3));
        assert!(isopen_check(&[sym("open"), sym("close"), sym("open")], 4));
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn isopen_rejects_out_of_range_position() {
        isopen_check(&[sym("open")], 3);
    }

    #[test]
    fn coll_membership() {
        let it = ev2("iterator", loc(1));
        let next = ev2("next", loc(1));
        assert!(member(
            LangId::Coll,
            &[sym("add"), it.clone(), next.clone(), sym("size"), next.clone()]
        ));
        assert!(!member(
            LangId::Coll,
            &[sym("add"), it.clone(), sym("add"), next.clone()]
        ));
        // An iterator that was never created cannot be advanced.
        assert!(!member(LangId::Coll, &[next]));
    }

    #[test]
    fn stack_simple_membership() {
        let pop5 = ev2("pop", Value::Int(5));
        assert!(!member(LangId::StackSimple, &[pop5.clone()]));
        assert!(member(
            LangId::StackSimple,
            &[ev2("push", Value::Int(5)), pop5]
        ));
        // Unit pops are always permitted.
        assert!(member(LangId::StackSimple, &[ev2("pop", Value::Unit)]));
    }

    #[test]
    fn str_membership_with_retroactive_sanitize() {
        let t = vec![ev2("input", loc(1)), ev2("sink", loc(1)), ev2("sanitize", loc(1))];
        assert!(member(LangId::Str, &t));
        assert!(!member(LangId::Str, &t[..2]));
    }

    #[test]
    fn esafe_examples() {
        assert!(!esafe(&loc(1), &[]));
        let t = vec![
            ev2("constant", loc(1)),
            ev2("sanitize", loc(2)),
            Value::pair(
                sym("concat"),
                Value::pair(loc(3), Value::pair(loc(1), loc(2))),
            ),
        ];
        assert!(esafe(&loc(3), &t));
        assert!(!esafe(&loc(4), &t));
    }

    #[test]
    fn notfresh_examples() {
        assert!(notfresh(&[ev2("input", loc(1)), ev2("input", loc(1))]));
        assert!(!notfresh(&[ev2("input", loc(1)), ev2("input", loc(2))]));
        // Sanitize is not an allocation.
        assert!(!notfresh(&[ev2("sanitize", loc(1)), ev2("sanitize", loc(1))]));
    }

    fn cp(v: i64) -> Value {
        Value::pair(sym("call"), Value::pair(sym("push"), Value::Int(v)))
    }

    fn rp() -> Value {
        Value::pair(sym("ret"), sym("push"))
    }

    fn cpop() -> Value {
        Value::pair(sym("call"), sym("pop"))
    }

    fn rpop(v: Value) -> Value {
        Value::pair(sym("ret"), Value::pair(sym("pop"), v))
    }

    #[test]
    fn stk_tr_examples() {
        assert!(stk_tr_check(&[], &[]));
        assert!(!stk_tr_check(&[], &[Value::Int(1)]));
        assert!(stk_tr_check(&[cp(1), rp()], &[Value::Int(1)]));
        assert!(stk_tr_check(&[cpop(), rpop(Value::Unit)], &[]));
        assert!(stk_tr_check(
            &[cp(1), rp(), cpop(), rpop(Value::Int(1))],
            &[]
        ));
        assert!(!stk_tr_check(&[cp(1), rp()], &[]));
    }

    #[test]
    fn stack_member_accepts_open_episodes() {
        assert!(member(LangId::Stack, &[cp(1)]));
        assert!(member(LangId::Stack, &[cpop()]));
        assert!(member(LangId::Stack, &[cp(1), rp(), cpop()]));
        // A pop return value that was never pushed is not completable.
        assert!(!member(
            LangId::Stack,
            &[cpop(), rpop(Value::Int(3))]
        ));
        // Stack discipline: values come back in reverse push order.
        assert!(!member(
            LangId::Stack,
            &[cp(1), rp(), cp(2), rp(), cpop(), rpop(Value::Int(1))]
        ));
    }

    #[test]
    fn stack_member_foreach_traversal() {
        let cf = Value::pair(sym("call"), Value::pair(sym("foreach"), Value::Fun(0)));
        let ccb = |v: i64| Value::pair(sym("call"), Value::pair(Value::Fun(0), Value::Int(v)));
        let rcb = Value::pair(sym("ret"), Value::Fun(0));
        let rf = Value::pair(sym("ret"), sym("foreach"));
        let t = vec![
            cp(1),
            rp(),
            cp(2),
            rp(),
            cf.clone(),
            ccb(2),
            rcb.clone(),
            ccb(1),
            rcb.clone(),
            rf.clone(),
        ];
        assert!(member(LangId::Stack, &t));
        for k in 0..t.len() {
            assert!(member(LangId::Stack, &t[..k]), "prefix of length {k}");
        }
        // Skipping an element, wrong order, or closing early all reject.
        let early = vec![cp(1), rp(), cp(2), rp(), cf.clone(), ccb(2), rcb.clone(), rf.clone()];
        assert!(!member(LangId::Stack, &early));
        let wrong_order = vec![cp(1), rp(), cp(2), rp(), cf, ccb(1)];
        assert!(!member(LangId::Stack, &wrong_order));
    }

    // Brute-force oracle for the oracle: t ∈ L-stack iff some completion over
    // the given events satisfies stk_tr(t · u, ε).
    fn brute_stack_member(t: &[Value], events: &[Value], max_ext: usize) -> bool {
        fn go(t: &mut Vec<Value>, events: &[Value], left: usize) -> bool {
            if stk_tr_check(t, &[]) {
                return true;
            }
            if left == 0 {
                return false;
            }
            for e in events {
                t.push(e.clone());
                if go(t, events, left - 1) {
                    t.pop();
                    return true;
                }
                t.pop();
            }
            false
        }
        go(&mut t.to_vec(), events, max_ext)
    }

    #[test]
    fn stack_member_agrees_with_bounded_brute_force() {
        let cf = Value::pair(sym("call"), Value::pair(sym("foreach"), Value::Fun(0)));
        let ccb = Value::pair(sym("call"), Value::pair(Value::Fun(0), Value::Int(1)));
        let rcb = Value::pair(sym("ret"), Value::Fun(0));
        let rf = Value::pair(sym("ret"), sym("foreach"));
        let events = vec![
            cp(1),
            rp(),
            cpop(),
            rpop(Value::Int(1)),
            rpop(Value::Unit),
            cf,
            ccb,
            rcb,
            rf,
        ];
        // Exhaust all traces up to length 4; completions up to length 8
        // dominate the canonical completion bound at this size.
        let mut stack = vec![Vec::new()];
        while let Some(t) = stack.pop() {
            let fast = member(LangId::Stack, &t);
            let brute = brute_stack_member(&t, &events, 8);
            assert_eq!(fast, brute, "disagreement on {t:?}");
            if t.len() < 4 {
                for e in &events {
                    let mut t2 = t.clone();
                    t2.push(e.clone());
                    stack.push(t2);
                }
            }
        }
    }

    #[test]
    fn brac_membership() {
        let cw = |f| Value::pair(sym("call"), Value::pair(sym("withRes"), Value::Fun(f)));
        let rw = |f| Value::pair(sym("ret"), Value::pair(sym("withRes"), Value::Fun(f)));
        let cf = |f| Value::pair(sym("call"), Value::Fun(f));
        let rf = |f| Value::pair(sym("ret"), Value::Fun(f));
        let cop = Value::pair(sym("call"), sym("op"));
        let rop = Value::pair(sym("ret"), sym("op"));

        let full = vec![cw(0), cf(0), cop.clone(), rop.clone(), rf(0), rw(0)];
        assert!(member(LangId::Brac, &full));
        for k in 0..=full.len() {
            assert!(member(LangId::Brac, &full[..k]));
        }
        // Two episodes back to back, different callbacks.
        let two = [full.clone(), vec![cw(1), cf(1), rf(1), rw(1)]].concat();
        assert!(member(LangId::Brac, &two));
        // op outside a callback body, nesting, and mismatched ids reject.
        assert!(!member(LangId::Brac, &[cop.clone()]));
        assert!(!member(LangId::Brac, &[cw(0), cf(0), cw(1)]));
        assert!(!member(LangId::Brac, &[cw(0), cf(1)]));
        assert!(!member(LangId::Brac, &[cw(0), cf(0), rf(0), rw(1)]));
        // The callback must run exactly once per episode.
        assert!(!member(LangId::Brac, &[cw(0), cf(0), rf(0), cf(0)]));
    }

    #[test]
    fn feasible_stacks_matches_stk_tr_exhaustively() {
        // Every trace over a tiny event set: feasible_stacks(t) must be
        // exactly the set of α with stk_tr(t, α), for α up to depth 3.
        let events = vec![cp(1), rp(), cpop(), rpop(Value::Int(1)), rpop(Value::Unit)];
        let alphas: Vec<Vec<Value>> = vec![
            vec![],
            vec![Value::Int(1)],
            vec![Value::Int(1), Value::Int(1)],
            vec![Value::Int(1), Value::Int(1), Value::Int(1)],
        ];
        let mut stack = vec![Vec::new()];
        while let Some(t) = stack.pop() {
            let evs: Vec<_> = t.iter().map(|e| stack_ev(e).unwrap()).collect();
            let feas = feasible_stacks(&evs);
            for a in &alphas {
                assert_eq!(
                    stk_tr_check(&t, a),
                    feas.contains(a),
                    "trace {t:?}, alpha {a:?}"
                );
            }
            if t.len() < 6 {
                for e in &events {
                    let mut t2 = t.clone();
                    t2.push(e.clone());
                    stack.push(t2);
                }
            }
        }
    }
}
