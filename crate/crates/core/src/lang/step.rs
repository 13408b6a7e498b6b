//! Small-step reduction with labelled transitions.
//!
//! Reduction follows the evaluation-context discipline of the language:
//! leftmost-innermost, left argument before right, with dedicated context
//! slots for `if` conditions, pair components, projections, `ref`, `!` and
//! `emit`. An `emit v` step carries the label `v`; every other step is
//! silent. Fresh locations and function ids come from deterministic counters
//! so runs (and hence traces) are reproducible.

use std::collections::BTreeMap;

use super::syntax::{subst, Expr, Op, Proj, Value};

pub type Heap = BTreeMap<u64, Value>;

/// Function environment: id → (parameter, body). Every lambda encountered
/// during reduction is named and stored here.
pub type FEnv = BTreeMap<u64, (String, Expr)>;

/// A machine configuration. `next_loc` and `next_fun` stay strictly above
/// every allocated id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub expr: Expr,
    pub heap: Heap,
    pub fenv: FEnv,
    pub next_loc: u64,
    pub next_fun: u64,
}

impl Config {
    pub fn new(expr: Expr) -> Config {
        Config {
            expr,
            heap: Heap::new(),
            fenv: FEnv::new(),
            next_loc: 0,
            next_fun: 0,
        }
    }
}

/// Why a configuration cannot reduce.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StuckReason {
    #[error("unbound variable `{0}`")]
    UnboundVar(String),
    #[error("application of a non-function value")]
    ApplyNonFun,
    #[error("unknown function id #f{0}")]
    UnknownFun(u64),
    #[error("projection of a non-pair value")]
    ProjNonPair,
    #[error("`if` condition is not an integer")]
    IfNonInt,
    #[error("`if` condition is negative ({0})")]
    IfNegative(i64),
    #[error("dereference of a non-location value")]
    DerefNonLoc,
    #[error("dereference of unallocated location #l{0}")]
    DerefUnalloc(u64),
    #[error("assignment to a non-location value")]
    AssignNonLoc,
    #[error("assignment to unallocated location #l{0}")]
    AssignUnalloc(u64),
    #[error("operator `{}` applied to non-integer operands", .0.name())]
    ArithNonInt(Op),
}

/// Result of one reduction step on an owned configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    /// The expression is already a value.
    Terminal(Value),
    Stuck(StuckReason),
    /// One step taken; the label is `Some(v)` exactly when the redex was
    /// `emit v`.
    Next(Option<Value>, Config),
}

/// Result of one in-place step; `Terminal` and `Stuck` leave the
/// configuration untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Terminal(Value),
    Stuck(StuckReason),
    Stepped(Option<Value>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Value,
    Stuck,
    FuelExhausted,
}

/// A finished (or fuel-capped) run: emitted labels in order, final
/// configuration, and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub trace: Vec<Value>,
    pub config: Config,
    pub status: RunStatus,
    pub stuck_reason: Option<StuckReason>,
    pub steps: u64,
}

impl RunOutcome {
    pub fn final_value(&self) -> Option<Value> {
        match self.status {
            RunStatus::Value => as_value(&self.config.expr),
            _ => None,
        }
    }
}

/// Pairs of values written with the pair constructor are themselves values;
/// this reads an expression back as a value when it is one. Lambdas are not
/// values (they reduce by being named).
pub fn as_value(e: &Expr) -> Option<Value> {
    match e {
        Expr::Val(v) => Some(v.clone()),
        Expr::MkPair(a, b) => Some(Value::pair(as_value(a)?, as_value(b)?)),
        _ => None,
    }
}

struct State<'a> {
    heap: &'a mut Heap,
    fenv: &'a mut FEnv,
    next_loc: &'a mut u64,
    next_fun: &'a mut u64,
}

enum Reduced {
    Step(Expr, Option<Value>),
    /// Carries the rebuilt, unchanged expression so the caller keeps it.
    Stuck(StuckReason, Expr),
}

fn congr(e: Expr, st: &mut State, rebuild: impl FnOnce(Expr) -> Expr) -> Reduced {
    match reduce(e, st) {
        Reduced::Step(e2, label) => Reduced::Step(rebuild(e2), label),
        Reduced::Stuck(r, e2) => Reduced::Stuck(r, rebuild(e2)),
    }
}

/// Reduce an expression that is not a value by one step.
fn reduce(e: Expr, st: &mut State) -> Reduced {
    match e {
        Expr::Val(_) => unreachable!("values are filtered out by the caller"),
        Expr::Var(x) => {
            let reason = StuckReason::UnboundVar(x.clone());
            Reduced::Stuck(reason, Expr::Var(x))
        }
        Expr::Lam(x, body) => {
            let f = *st.next_fun;
            *st.next_fun += 1;
            st.fenv.insert(f, (x, *body));
            Reduced::Step(Expr::Val(Value::Fun(f)), None)
        }
        Expr::App(e1, e2) => {
            if as_value(&e1).is_none() {
                return congr(*e1, st, |e1| Expr::App(Box::new(e1), e2));
            }
            if as_value(&e2).is_none() {
                return congr(*e2, st, |e2| Expr::App(e1, Box::new(e2)));
            }
            let vf = as_value(&e1).unwrap();
            let va = as_value(&e2).unwrap();
            match vf {
                Value::Fun(f) => match st.fenv.get(&f) {
                    Some((x, body)) => {
                        let (x, body) = (x.clone(), body.clone());
                        Reduced::Step(subst(body, &x, &va), None)
                    }
                    None => Reduced::Stuck(StuckReason::UnknownFun(f), Expr::App(e1, e2)),
                },
                _ => Reduced::Stuck(StuckReason::ApplyNonFun, Expr::App(e1, e2)),
            }
        }
        Expr::If(c, t, e2) => {
            if as_value(&c).is_none() {
                return congr(*c, st, |c| Expr::If(Box::new(c), t, e2));
            }
            match as_value(&c).unwrap() {
                Value::Int(n) if n > 0 => Reduced::Step(*t, None),
                Value::Int(0) => Reduced::Step(*e2, None),
                Value::Int(n) => Reduced::Stuck(StuckReason::IfNegative(n), Expr::If(c, t, e2)),
                _ => Reduced::Stuck(StuckReason::IfNonInt, Expr::If(c, t, e2)),
            }
        }
        Expr::MkPair(a, b) => {
            // Both components being values is the value case, filtered out
            // by the caller; at least one side still reduces here.
            if as_value(&a).is_none() {
                congr(*a, st, |a| Expr::MkPair(Box::new(a), b))
            } else {
                congr(*b, st, |b| Expr::MkPair(a, Box::new(b)))
            }
        }
        Expr::Proj(i, e2) => {
            if as_value(&e2).is_none() {
                return congr(*e2, st, move |e2| Expr::Proj(i, Box::new(e2)));
            }
            match as_value(&e2).unwrap() {
                Value::Pair(l, r) => {
                    let out = match i {
                        Proj::Fst => *l,
                        Proj::Snd => *r,
                    };
                    Reduced::Step(Expr::Val(out), None)
                }
                _ => Reduced::Stuck(StuckReason::ProjNonPair, Expr::Proj(i, e2)),
            }
        }
        Expr::Ref(e2) => {
            if as_value(&e2).is_none() {
                return congr(*e2, st, |e2| Expr::Ref(Box::new(e2)));
            }
            let v = as_value(&e2).unwrap();
            let l = *st.next_loc;
            *st.next_loc += 1;
            st.heap.insert(l, v);
            Reduced::Step(Expr::Val(Value::Loc(l)), None)
        }
        Expr::Deref(e2) => {
            if as_value(&e2).is_none() {
                return congr(*e2, st, |e2| Expr::Deref(Box::new(e2)));
            }
            match as_value(&e2).unwrap() {
                Value::Loc(l) => match st.heap.get(&l) {
                    Some(v) => Reduced::Step(Expr::Val(v.clone()), None),
                    None => Reduced::Stuck(StuckReason::DerefUnalloc(l), Expr::Deref(e2)),
                },
                _ => Reduced::Stuck(StuckReason::DerefNonLoc, Expr::Deref(e2)),
            }
        }
        Expr::BinOp(op, e1, e2) => {
            if as_value(&e1).is_none() {
                return congr(*e1, st, move |e1| Expr::BinOp(op, Box::new(e1), e2));
            }
            if as_value(&e2).is_none() {
                return congr(*e2, st, move |e2| Expr::BinOp(op, e1, Box::new(e2)));
            }
            let v1 = as_value(&e1).unwrap();
            let v2 = as_value(&e2).unwrap();
            let stuck = |r| Reduced::Stuck(r, Expr::BinOp(op, e1.clone(), e2.clone()));
            match op {
                Op::Eq => {
                    let b = if v1 == v2 { 1 } else { 0 };
                    Reduced::Step(Expr::Val(Value::Int(b)), None)
                }
                Op::Assign => match v1 {
                    Value::Loc(l) => {
                        if st.heap.contains_key(&l) {
                            st.heap.insert(l, v2);
                            Reduced::Step(Expr::Val(Value::Unit), None)
                        } else {
                            stuck(StuckReason::AssignUnalloc(l))
                        }
                    }
                    _ => stuck(StuckReason::AssignNonLoc),
                },
                Op::Add | Op::Sub | Op::Mul | Op::Lt => match (v1.clone(), v2.clone()) {
                    (Value::Int(a), Value::Int(b)) => {
                        let out = match op {
                            Op::Add => Value::Int(a.wrapping_add(b)),
                            Op::Sub => Value::Int(a.wrapping_sub(b)),
                            Op::Mul => Value::Int(a.wrapping_mul(b)),
                            Op::Lt => Value::Int(if a < b { 1 } else { 0 }),
                            _ => unreachable!(),
                        };
                        Reduced::Step(Expr::Val(out), None)
                    }
                    _ => stuck(StuckReason::ArithNonInt(op)),
                },
            }
        }
        Expr::Emit(e2) => {
            if as_value(&e2).is_none() {
                return congr(*e2, st, |e2| Expr::Emit(Box::new(e2)));
            }
            let v = as_value(&e2).unwrap();
            Reduced::Step(Expr::Val(Value::Unit), Some(v))
        }
    }
}

/// One step, mutating the configuration in place.
pub fn step_mut(c: &mut Config) -> StepOutcome {
    if let Some(v) = as_value(&c.expr) {
        return StepOutcome::Terminal(v);
    }
    let expr = std::mem::replace(&mut c.expr, Expr::Val(Value::Unit));
    let mut st = State {
        heap: &mut c.heap,
        fenv: &mut c.fenv,
        next_loc: &mut c.next_loc,
        next_fun: &mut c.next_fun,
    };
    match reduce(expr, &mut st) {
        Reduced::Step(e2, label) => {
            c.expr = e2;
            StepOutcome::Stepped(label)
        }
        Reduced::Stuck(reason, e2) => {
            c.expr = e2;
            StepOutcome::Stuck(reason)
        }
    }
}

/// One step on an owned configuration. Deterministic: each configuration has
/// exactly one result.
pub fn step(mut c: Config) -> StepResult {
    match step_mut(&mut c) {
        StepOutcome::Terminal(v) => StepResult::Terminal(v),
        StepOutcome::Stuck(r) => StepResult::Stuck(r),
        StepOutcome::Stepped(label) => StepResult::Next(label, c),
    }
}

/// Iterate `step` at most `fuel` times, collecting the non-silent labels.
pub fn run(c: Config, fuel: u64) -> RunOutcome {
    run_with(c, fuel, |_| {})
}

/// Like [`run`], invoking `on_event` on each emitted label as it happens.
pub fn run_with(mut c: Config, fuel: u64, mut on_event: impl FnMut(&Value)) -> RunOutcome {
    let mut trace = Vec::new();
    let mut steps = 0u64;
    while steps < fuel {
        match step_mut(&mut c) {
            StepOutcome::Terminal(_) => {
                return RunOutcome {
                    trace,
                    config: c,
                    status: RunStatus::Value,
                    stuck_reason: None,
                    steps,
                }
            }
            StepOutcome::Stuck(reason) => {
                return RunOutcome {
                    trace,
                    config: c,
                    status: RunStatus::Stuck,
                    stuck_reason: Some(reason),
                    steps,
                }
            }
            StepOutcome::Stepped(label) => {
                steps += 1;
                if let Some(v) = label {
                    on_event(&v);
                    trace.push(v);
                }
            }
        }
    }
    // Fuel ran out; the configuration may nevertheless be terminal already.
    if let Some(_v) = as_value(&c.expr) {
        return RunOutcome {
            trace,
            config: c,
            status: RunStatus::Value,
            stuck_reason: None,
            steps,
        };
    }
    RunOutcome {
        trace,
        config: c,
        status: RunStatus::FuelExhausted,
        stuck_reason: None,
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::syntax::erase;

    fn run_expr(e: Expr) -> RunOutcome {
        run(Config::new(e), 10_000)
    }

    #[test]
    fn lambda_is_named_then_applied() {
        let e = Expr::app(Expr::lam("x", Expr::var("x")), Expr::val(Value::Int(7)));
        let c = Config::new(e);
        // First step names the lambda, emitting no label.
        let (label, c) = match step(c) {
            StepResult::Next(label, c) => (label, c),
            other => panic!("expected step, got {other:?}"),
        };
        assert_eq!(label, None);
        assert_eq!(
            c.expr,
            Expr::app(Expr::val(Value::Fun(0)), Expr::val(Value::Int(7)))
        );
        assert_eq!(c.fenv.get(&0), Some(&("x".to_string(), Expr::var("x"))));
        // Second step is the beta step.
        match step(c) {
            StepResult::Next(None, c2) => assert_eq!(c2.expr, Expr::Val(Value::Int(7))),
            other => panic!("expected silent step, got {other:?}"),
        }
    }

    #[test]
    fn emit_labels_the_transition() {
        let c = Config::new(Expr::emit(Expr::val(Value::Int(5))));
        match step(c) {
            StepResult::Next(Some(v), c2) => {
                assert_eq!(v, Value::Int(5));
                assert_eq!(c2.expr, Expr::Val(Value::Unit));
            }
            other => panic!("expected emit step, got {other:?}"),
        }
    }

    #[test]
    fn negative_if_condition_is_stuck() {
        let e = Expr::if_(
            Expr::val(Value::Int(-1)),
            Expr::val(Value::Int(1)),
            Expr::val(Value::Int(2)),
        );
        match step(Config::new(e)) {
            StepResult::Stuck(StuckReason::IfNegative(-1)) => {}
            other => panic!("expected stuck, got {other:?}"),
        }
    }

    #[test]
    fn if_branches_on_positive_and_zero() {
        let branch = |n| {
            run_expr(Expr::if_(
                Expr::val(Value::Int(n)),
                Expr::val(Value::sym("then")),
                Expr::val(Value::sym("else")),
            ))
            .final_value()
            .unwrap()
        };
        assert_eq!(branch(3), Value::sym("then"));
        assert_eq!(branch(0), Value::sym("else"));
    }

    #[test]
    fn seq_of_emits_produces_trace_in_order() {
        let e = Expr::seq(vec![
            Expr::emit(Expr::val(Value::Int(1))),
            Expr::emit(Expr::val(Value::Int(2))),
        ]);
        let out = run_expr(e);
        assert_eq!(out.status, RunStatus::Value);
        assert_eq!(out.trace, vec![Value::Int(1), Value::Int(2)]);
        assert_eq!(out.final_value(), Some(Value::Unit));
    }

    #[test]
    fn emit_free_program_has_empty_trace() {
        let e = Expr::let_(
            "r",
            Expr::ref_(Expr::val(Value::Int(2))),
            Expr::deref(Expr::var("r")),
        );
        let out = run_expr(e);
        assert_eq!(out.status, RunStatus::Value);
        assert!(out.trace.is_empty());
        assert_eq!(out.final_value(), Some(Value::Int(2)));
    }

    #[test]
    fn allocation_uses_consecutive_locations() {
        let e = Expr::seq(vec![
            Expr::ref_(Expr::val(Value::Int(10))),
            Expr::ref_(Expr::val(Value::Int(11))),
        ]);
        let out = run_expr(e);
        assert_eq!(out.final_value(), Some(Value::Loc(1)));
        assert_eq!(out.config.heap.get(&0), Some(&Value::Int(10)));
        assert_eq!(out.config.heap.get(&1), Some(&Value::Int(11)));
        assert_eq!(out.config.next_loc, 2);
    }

    #[test]
    fn assignment_and_deref_round_trip() {
        let e = Expr::let_(
            "r",
            Expr::ref_(Expr::val(Value::Int(0))),
            Expr::seq(vec![
                Expr::binop(Op::Assign, Expr::var("r"), Expr::val(Value::Int(9))),
                Expr::deref(Expr::var("r")),
            ]),
        );
        assert_eq!(run_expr(e).final_value(), Some(Value::Int(9)));
    }

    #[test]
    fn structural_equality_on_pairs_and_locs() {
        let pair = |a, b| Expr::mk_pair(Expr::val(Value::Int(a)), Expr::val(Value::Int(b)));
        let e = Expr::binop(Op::Eq, pair(1, 2), pair(1, 2));
        assert_eq!(run_expr(e).final_value(), Some(Value::Int(1)));
        let e2 = Expr::binop(
            Op::Eq,
            Expr::val(Value::Loc(0)),
            Expr::val(Value::Loc(1)),
        );
        assert_eq!(run_expr(e2).final_value(), Some(Value::Int(0)));
    }

    #[test]
    fn erased_emit_program_matches_heap_of_original() {
        // (seq (emit 1) (ref 2)) against its erasure: both end with heap {l0 ↦ 2}.
        let e = Expr::seq(vec![
            Expr::emit(Expr::val(Value::Int(1))),
            Expr::ref_(Expr::val(Value::Int(2))),
        ]);
        let out = run_expr(e.clone());
        let out_erased = run_expr(erase(&e));
        assert_eq!(out.status, RunStatus::Value);
        assert_eq!(out_erased.status, RunStatus::Value);
        assert_eq!(out.trace, vec![Value::Int(1)]);
        assert!(out_erased.trace.is_empty());
        assert_eq!(out.config.heap, out_erased.config.heap);
        assert_eq!(out.config.heap.get(&0), Some(&Value::Int(2)));
    }

    #[test]
    fn evaluation_order_is_left_to_right_in_pairs() {
        let e = Expr::mk_pair(
            Expr::emit(Expr::val(Value::Int(1))),
            Expr::emit(Expr::val(Value::Int(2))),
        );
        let out = run_expr(e);
        assert_eq!(out.trace, vec![Value::Int(1), Value::Int(2)]);
        assert_eq!(out.final_value(), Some(Value::pair(Value::Unit, Value::Unit)));
    }
}
