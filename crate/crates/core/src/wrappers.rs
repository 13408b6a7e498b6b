//! Reference libraries and the wrappers that instrument them.
//!
//! A library bundle is an `init` expression that allocates the library's
//! mutable state and evaluates to a right-nested tuple of its operations
//! (as function ids). Wrapping composes a closed transformation term over
//! `init`, so the wrapped operations emit events around each call exactly as
//! written in the source transformations.
//!
//! The reference implementations are deliberately permissive: they never
//! check protocol state themselves, so misbehaving clients still run to
//! completion and violations are visible only in the emitted trace.

use crate::lang::{free_vars, fresh_name, Expr, Op, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BundleName {
    File,
    Coll,
    Brac,
    Stack,
    StackSimple,
    Str,
}

impl BundleName {
    pub const ALL: [BundleName; 6] = [
        BundleName::File,
        BundleName::Coll,
        BundleName::Brac,
        BundleName::Stack,
        BundleName::StackSimple,
        BundleName::Str,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BundleName::File => "file",
            BundleName::Coll => "coll",
            BundleName::Brac => "brac",
            BundleName::Stack => "stack",
            BundleName::StackSimple => "stack-simple",
            BundleName::Str => "str",
        }
    }

    pub fn parse(s: &str) -> Option<BundleName> {
        BundleName::ALL.into_iter().find(|b| b.as_str() == s)
    }

    /// Operation names in the paper's tuple order.
    pub fn op_names(self) -> &'static [&'static str] {
        match self {
            BundleName::File => &["open", "close", "read"],
            BundleName::Coll => &["size", "add", "remove", "iterator", "next"],
            BundleName::Brac => &["withRes", "op"],
            BundleName::Stack => &["push", "pop", "foreach"],
            BundleName::StackSimple => &["push", "pop"],
            BundleName::Str => &["input", "constant", "sanitize", "concat", "sink"],
        }
    }
}

impl std::fmt::Display for BundleName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A library as an object-language value factory: `init` evaluates to the
/// tuple of operations, ordered as [`BundleName::op_names`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibraryBundle {
    pub name: BundleName,
    pub op_names: Vec<&'static str>,
    pub init: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WrapError {
    #[error("bundle has operations {got:?}, but `{name}` requires {want:?}")]
    ArityMismatch {
        name: BundleName,
        want: Vec<&'static str>,
        got: Vec<&'static str>,
    },
}

fn sym(s: &str) -> Expr {
    Expr::val(Value::sym(s))
}

fn unit() -> Expr {
    Expr::val(Value::Unit)
}

fn int(n: i64) -> Expr {
    Expr::val(Value::Int(n))
}

fn pair(a: Expr, b: Expr) -> Expr {
    Expr::mk_pair(a, b)
}

/// Right-nested tuple expression.
fn tuple(items: Vec<Expr>) -> Expr {
    let mut it = items.into_iter().rev();
    let last = it.next().expect("tuple of at least one expression");
    it.fold(last, |acc, e| pair(e, acc))
}

fn app(f: &str, a: Expr) -> Expr {
    Expr::app(Expr::var(f), a)
}

fn eq(a: Expr, b: Expr) -> Expr {
    Expr::binop(Op::Eq, a, b)
}

fn assign(l: Expr, v: Expr) -> Expr {
    Expr::binop(Op::Assign, l, v)
}

fn get(e: Expr) -> Expr {
    Expr::deref(e)
}

/// `let r = ref () in r := λl. body(l, !r); (!r) arg` — the recursion
/// pattern: the function reaches itself through a heap cell, so no
/// fixed-point combinator clutters the evaluation (cell set-up emits
/// nothing).
fn rec_over_list(param: &str, body: Expr, arg: Expr) -> Expr {
    Expr::let_(
        "__rec",
        Expr::ref_(unit()),
        Expr::seq(vec![
            assign(Expr::var("__rec"), Expr::lam(param, body)),
            Expr::app(get(Expr::var("__rec")), arg),
        ]),
    )
}

fn rec_call(arg: Expr) -> Expr {
    Expr::app(get(Expr::var("__rec")), arg)
}

fn file_init() -> Expr {
    // One int cell: 0 closed, 1 open. No checking anywhere.
    Expr::let_(
        "__cell",
        Expr::ref_(int(0)),
        tuple(vec![
            Expr::lam("_", assign(Expr::var("__cell"), int(1))),
            Expr::lam("_", assign(Expr::var("__cell"), int(0))),
            Expr::lam("_", Expr::seq(vec![get(Expr::var("__cell")), unit()])),
        ]),
    )
}

fn coll_init() -> Expr {
    // A cell holding a nested-pair list; () is the empty list.
    let size = Expr::lam(
        "_",
        rec_over_list(
            "l",
            Expr::if_(
                eq(Expr::var("l"), unit()),
                int(0),
                Expr::binop(Op::Add, int(1), rec_call(Expr::snd(Expr::var("l")))),
            ),
            get(Expr::var("__cell")),
        ),
    );
    let add = Expr::lam(
        "y",
        assign(
            Expr::var("__cell"),
            pair(Expr::var("y"), get(Expr::var("__cell"))),
        ),
    );
    // Drops the first structural match, keeps the rest; no-op when absent.
    let remove = Expr::lam(
        "y",
        assign(
            Expr::var("__cell"),
            rec_over_list(
                "l",
                Expr::if_(
                    eq(Expr::var("l"), unit()),
                    unit(),
                    Expr::if_(
                        eq(Expr::fst(Expr::var("l")), Expr::var("y")),
                        Expr::snd(Expr::var("l")),
                        pair(Expr::fst(Expr::var("l")), rec_call(Expr::snd(Expr::var("l")))),
                    ),
                ),
                get(Expr::var("__cell")),
            ),
        ),
    );
    // A fresh cell holding the current list; its location is the iterator.
    let iterator = Expr::lam("_", Expr::ref_(get(Expr::var("__cell"))));
    let next = Expr::lam(
        "it",
        Expr::let_(
            "l",
            get(Expr::var("it")),
            Expr::if_(
                eq(Expr::var("l"), unit()),
                unit(),
                Expr::seq(vec![
                    assign(Expr::var("it"), Expr::snd(Expr::var("l"))),
                    Expr::fst(Expr::var("l")),
                ]),
            ),
        ),
    );
    Expr::let_(
        "__cell",
        Expr::ref_(unit()),
        tuple(vec![size, add, remove, iterator, next]),
    )
}

fn brac_init() -> Expr {
    // withRes applies the callback to (); op does nothing.
    tuple(vec![
        Expr::lam("f", app("f", unit())),
        Expr::lam("x", unit()),
    ])
}

fn stack_ops() -> (Expr, Expr, Expr) {
    let push = Expr::lam(
        "a",
        assign(
            Expr::var("__cell"),
            pair(Expr::var("a"), get(Expr::var("__cell"))),
        ),
    );
    let pop = Expr::lam(
        "_",
        Expr::let_(
            "l",
            get(Expr::var("__cell")),
            Expr::if_(
                eq(Expr::var("l"), unit()),
                unit(),
                Expr::seq(vec![
                    assign(Expr::var("__cell"), Expr::snd(Expr::var("l"))),
                    Expr::fst(Expr::var("l")),
                ]),
            ),
        ),
    );
    let foreach = Expr::lam(
        "f",
        rec_over_list(
            "l",
            Expr::if_(
                eq(Expr::var("l"), unit()),
                unit(),
                Expr::seq(vec![
                    app("f", Expr::fst(Expr::var("l"))),
                    rec_call(Expr::snd(Expr::var("l"))),
                ]),
            ),
            get(Expr::var("__cell")),
        ),
    );
    (push, pop, foreach)
}

fn stack_init() -> Expr {
    let (push, pop, foreach) = stack_ops();
    Expr::let_(
        "__cell",
        Expr::ref_(unit()),
        tuple(vec![push, pop, foreach]),
    )
}

fn stack_simple_init() -> Expr {
    let (push, pop, _) = stack_ops();
    Expr::let_("__cell", Expr::ref_(unit()), tuple(vec![push, pop]))
}

fn str_init() -> Expr {
    // String handles are fresh locations initialised to 0; contents are
    // irrelevant to the protocol.
    tuple(vec![
        Expr::lam("_", Expr::ref_(int(0))),
        Expr::lam("y", Expr::ref_(int(0))),
        Expr::lam("y", unit()),
        Expr::lam("p", Expr::ref_(int(0))),
        Expr::lam("y", unit()),
    ])
}

/// The reference implementation of a library.
pub fn make_lib(name: BundleName) -> LibraryBundle {
    let init = match name {
        BundleName::File => file_init(),
        BundleName::Coll => coll_init(),
        BundleName::Brac => brac_init(),
        BundleName::Stack => stack_init(),
        BundleName::StackSimple => stack_simple_init(),
        BundleName::Str => str_init(),
    };
    debug_assert!(init.is_closed(), "library init for {name} must be closed");
    LibraryBundle {
        name,
        op_names: name.op_names().to_vec(),
        init,
    }
}

/// `let n1 = π1 t in … let nk = π2…π2 t in body` for a right-nested tuple.
fn detuple(tuple_var: &str, names: &[&str], body: Expr) -> Expr {
    let mut out = body;
    for (i, n) in names.iter().enumerate().rev() {
        let mut path = Expr::var(tuple_var);
        for _ in 0..i.min(names.len() - 1) {
            path = Expr::snd(path);
        }
        if i + 1 < names.len() {
            path = Expr::fst(path);
        }
        // Walking from the left: op_i = fst(snd^i t), last op = snd^(k-1) t.
        out = Expr::let_(n, path, out);
    }
    out
}

fn wrap_file_term() -> Expr {
    let wrapped = |op: &str| {
        Expr::lam(
            "_",
            Expr::seq(vec![app(op, unit()), Expr::emit(sym(op))]),
        )
    };
    Expr::lam(
        "__ops",
        detuple(
            "__ops",
            &["open", "close", "read"],
            tuple(vec![wrapped("open"), wrapped("close"), wrapped("read")]),
        ),
    )
}

fn wrap_coll_term() -> Expr {
    let size = Expr::lam(
        "y",
        Expr::let_(
            "r",
            app("size", Expr::var("y")),
            Expr::seq(vec![Expr::emit(sym("size")), Expr::var("r")]),
        ),
    );
    let add = Expr::lam(
        "y",
        Expr::seq(vec![app("add", Expr::var("y")), Expr::emit(sym("add"))]),
    );
    let remove = Expr::lam(
        "y",
        Expr::seq(vec![
            app("remove", Expr::var("y")),
            Expr::emit(sym("remove")),
        ]),
    );
    let iterator = Expr::lam(
        "_",
        Expr::let_(
            "r",
            app("iterator", unit()),
            Expr::seq(vec![
                Expr::emit(pair(sym("iterator"), Expr::var("r"))),
                Expr::var("r"),
            ]),
        ),
    );
    // The event carries the iterator argument, not next's return value.
    let next = Expr::lam(
        "y",
        Expr::let_(
            "r",
            app("next", Expr::var("y")),
            Expr::seq(vec![
                Expr::emit(pair(sym("next"), Expr::var("y"))),
                Expr::var("r"),
            ]),
        ),
    );
    Expr::lam(
        "__ops",
        detuple(
            "__ops",
            &["size", "add", "remove", "iterator", "next"],
            tuple(vec![size, add, remove, iterator, next]),
        ),
    )
}

fn wrap_brac_term() -> Expr {
    // λf. emit ⟨call,withRes,f⟩;
    //     withRes(λx. emit ⟨call,f⟩; f(x); emit ⟨ret,f⟩);
    //     emit ⟨ret,withRes,f⟩
    let call_f = Expr::emit(pair(sym("call"), Expr::var("f")));
    let ret_f = Expr::emit(pair(sym("ret"), Expr::var("f")));
    let inner = Expr::lam("x", Expr::seq(vec![call_f, app("f", Expr::var("x")), ret_f]));
    let with_res = Expr::lam(
        "f",
        Expr::seq(vec![
            Expr::emit(pair(sym("call"), pair(sym("withRes"), Expr::var("f")))),
            app("withRes", inner),
            Expr::emit(pair(sym("ret"), pair(sym("withRes"), Expr::var("f")))),
        ]),
    );
    let op = Expr::lam(
        "x",
        Expr::seq(vec![
            Expr::emit(pair(sym("call"), sym("op"))),
            app("op", Expr::var("x")),
            Expr::emit(pair(sym("ret"), sym("op"))),
        ]),
    );
    Expr::lam(
        "__ops",
        detuple("__ops", &["withRes", "op"], tuple(vec![with_res, op])),
    )
}

fn wrap_stack_term() -> Expr {
    let push = Expr::lam(
        "a",
        Expr::seq(vec![
            Expr::emit(pair(sym("call"), pair(sym("push"), Expr::var("a")))),
            app("push", Expr::var("a")),
            Expr::emit(pair(sym("ret"), sym("push"))),
        ]),
    );
    let pop = Expr::lam(
        "_",
        Expr::seq(vec![
            Expr::emit(pair(sym("call"), sym("pop"))),
            Expr::let_(
                "x",
                app("pop", unit()),
                Expr::seq(vec![
                    Expr::emit(pair(sym("ret"), pair(sym("pop"), Expr::var("x")))),
                    Expr::var("x"),
                ]),
            ),
        ]),
    );
    // The callback passed to the underlying foreach brackets every client
    // callback invocation with ⟨call,f,a⟩ / ⟨ret,f⟩.
    let inner = Expr::lam(
        "a",
        Expr::seq(vec![
            Expr::emit(pair(
                sym("call"),
                pair(Expr::var("f"), Expr::var("a")),
            )),
            app("f", Expr::var("a")),
            Expr::emit(pair(sym("ret"), Expr::var("f"))),
        ]),
    );
    let foreach = Expr::lam(
        "f",
        Expr::seq(vec![
            Expr::emit(pair(sym("call"), pair(sym("foreach"), Expr::var("f")))),
            app("foreach", inner),
            Expr::emit(pair(sym("ret"), sym("foreach"))),
        ]),
    );
    Expr::lam(
        "__ops",
        detuple(
            "__ops",
            &["push", "pop", "foreach"],
            tuple(vec![push, pop, foreach]),
        ),
    )
}

fn wrap_stack_simple_term() -> Expr {
    // push' = λv. push(v); emit ⟨push, v⟩
    // pop'  = λ_. let r = pop() in emit ⟨pop, r⟩; r
    let push = Expr::lam(
        "v",
        Expr::seq(vec![
            app("push", Expr::var("v")),
            Expr::emit(pair(sym("push"), Expr::var("v"))),
        ]),
    );
    let pop = Expr::lam(
        "_",
        Expr::let_(
            "r",
            app("pop", unit()),
            Expr::seq(vec![
                Expr::emit(pair(sym("pop"), Expr::var("r"))),
                Expr::var("r"),
            ]),
        ),
    );
    Expr::lam(
        "__ops",
        detuple("__ops", &["push", "pop"], tuple(vec![push, pop])),
    )
}

fn wrap_str_term() -> Expr {
    let input = Expr::lam(
        "_",
        Expr::let_(
            "r",
            app("input", unit()),
            Expr::seq(vec![
                Expr::emit(pair(sym("input"), Expr::var("r"))),
                Expr::var("r"),
            ]),
        ),
    );
    let constant = Expr::lam(
        "y",
        Expr::let_(
            "r",
            app("constant", Expr::var("y")),
            Expr::seq(vec![
                Expr::emit(pair(sym("constant"), Expr::var("r"))),
                Expr::var("r"),
            ]),
        ),
    );
    // The sanitize event carries the argument; sanitize itself returns ().
    let sanitize = Expr::lam(
        "y",
        Expr::seq(vec![
            app("sanitize", Expr::var("y")),
            Expr::emit(pair(sym("sanitize"), Expr::var("y"))),
        ]),
    );
    let concat = Expr::lam(
        "p",
        Expr::let_(
            "y1",
            Expr::fst(Expr::var("p")),
            Expr::let_(
                "y2",
                Expr::snd(Expr::var("p")),
                Expr::let_(
                    "r",
                    app("concat", pair(Expr::var("y1"), Expr::var("y2"))),
                    Expr::seq(vec![
                        Expr::emit(pair(
                            sym("concat"),
                            pair(Expr::var("r"), pair(Expr::var("y1"), Expr::var("y2"))),
                        )),
                        Expr::var("r"),
                    ]),
                ),
            ),
        ),
    );
    let sink = Expr::lam(
        "y",
        Expr::seq(vec![
            app("sink", Expr::var("y")),
            Expr::emit(pair(sym("sink"), Expr::var("y"))),
        ]),
    );
    Expr::lam(
        "__ops",
        detuple(
            "__ops",
            &["input", "constant", "sanitize", "concat", "sink"],
            tuple(vec![input, constant, sanitize, concat, sink]),
        ),
    )
}

fn wrap_term(name: BundleName) -> Expr {
    match name {
        BundleName::File => wrap_file_term(),
        BundleName::Coll => wrap_coll_term(),
        BundleName::Brac => wrap_brac_term(),
        BundleName::Stack => wrap_stack_term(),
        BundleName::StackSimple => wrap_stack_simple_term(),
        BundleName::Str => wrap_str_term(),
    }
}

/// Instrument a bundle: the wrapped init applies the (closed) wrapping term
/// to the underlying init's operation tuple.
pub fn wrap(name: BundleName, lib: &LibraryBundle) -> Result<LibraryBundle, WrapError> {
    let want = name.op_names().to_vec();
    if lib.op_names != want {
        return Err(WrapError::ArityMismatch {
            name,
            want,
            got: lib.op_names.clone(),
        });
    }
    let term = wrap_term(name);
    debug_assert!(term.is_closed());
    Ok(LibraryBundle {
        name,
        op_names: want,
        init: Expr::app(term, lib.init.clone()),
    })
}

/// The harness form: evaluate the bundle's init once and let-bind each
/// operation name around the client body.
pub fn with_lib(lib: &LibraryBundle, client: Expr) -> Expr {
    let mut avoid = free_vars(&client);
    for n in &lib.op_names {
        avoid.insert((*n).to_string());
    }
    let t = fresh_name("__lib", &avoid);
    let body = detuple(&t, &lib.op_names, client);
    Expr::let_(&t, lib.init.clone(), body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, run, Config, RunStatus, Value};

    const FUEL: u64 = 1_000_000;

    fn run_client(name: BundleName, wrapped: bool, client_src: &str) -> crate::lang::RunOutcome {
        let lib = make_lib(name);
        let lib = if wrapped {
            wrap(name, &lib).unwrap()
        } else {
            lib
        };
        let client = parse(client_src).unwrap();
        let prog = with_lib(&lib, client);
        assert!(prog.is_closed(), "harness program must be closed");
        let out = run(Config::new(prog), FUEL);
        assert_eq!(out.status, RunStatus::Value, "client run failed: {out:?}");
        out
    }

    #[test]
    fn raw_stack_push_pop_order() {
        let out = run_client(
            BundleName::Stack,
            false,
            "(seq (app push 1) (app push 2)
                  (pair (app pop ()) (pair (app pop ()) (app pop ()))))",
        );
        assert_eq!(
            out.final_value().unwrap(),
            Value::tuple(vec![Value::Int(2), Value::Int(1), Value::Unit])
        );
        assert!(out.trace.is_empty(), "raw library emits nothing");
    }

    #[test]
    fn raw_coll_iterators_are_distinct_locations() {
        let out = run_client(
            BundleName::Coll,
            false,
            "(pair (app iterator ()) (app iterator ()))",
        );
        match out.final_value().unwrap() {
            Value::Pair(a, b) => {
                assert!(matches!(*a, Value::Loc(_)));
                assert!(matches!(*b, Value::Loc(_)));
                assert_ne!(a, b);
            }
            v => panic!("expected a pair of locations, got {v}"),
        }
    }

    #[test]
    fn raw_coll_size_add_remove() {
        let out = run_client(
            BundleName::Coll,
            false,
            "(seq (app add 1) (app add 2) (app add 1)
                  (app remove 1)
                  (app size ()))",
        );
        // remove drops the first structural match only.
        assert_eq!(out.final_value().unwrap(), Value::Int(2));
        let again = run_client(BundleName::Coll, false, "(seq (app remove 9) (app size ()))");
        assert_eq!(again.final_value().unwrap(), Value::Int(0));
    }

    #[test]
    fn raw_file_read_returns_unit_regardless_of_state() {
        let out = run_client(BundleName::File, false, "(app read ())");
        assert_eq!(out.final_value().unwrap(), Value::Unit);
        let out = run_client(BundleName::File, false, "(seq (app open ()) (app read ()))");
        assert_eq!(out.final_value().unwrap(), Value::Unit);
    }

    #[test]
    fn wrapped_file_good_client_trace() {
        let out = run_client(
            BundleName::File,
            true,
            "(seq (app open ()) (app read ()) (app close ()))",
        );
        assert_eq!(
            out.trace,
            vec![Value::sym("open"), Value::sym("read"), Value::sym("close")]
        );
    }

    #[test]
    fn wrapped_stack_simple_trace() {
        let out = run_client(
            BundleName::StackSimple,
            true,
            "(seq (app push 1) (app pop ()))",
        );
        assert_eq!(
            out.trace,
            vec![
                Value::pair(Value::sym("push"), Value::Int(1)),
                Value::pair(Value::sym("pop"), Value::Int(1)),
            ]
        );
    }

    #[test]
    fn wrapped_brac_trace_shape() {
        let out = run_client(BundleName::Brac, true, "(app withRes (lam x (app op x)))");
        let t = &out.trace;
        assert_eq!(t.len(), 6);
        // ⟨call,withRes,f⟩ … ⟨ret,withRes,f⟩ with one callback pair and one
        // op pair inside, all for the same client callback id f.
        let f = match &t[0] {
            Value::Pair(c, rest) => match (&**c, &**rest) {
                (Value::Sym(call), Value::Pair(w, f)) => {
                    assert_eq!(call, "call");
                    assert_eq!(**w, Value::sym("withRes"));
                    match &**f {
                        Value::Fun(id) => *id,
                        v => panic!("callback event payload is not a function id: {v}"),
                    }
                }
                other => panic!("unexpected first event: {other:?}"),
            },
            v => panic!("unexpected first event: {v}"),
        };
        let fv = Value::Fun(f);
        assert_eq!(t[1], Value::pair(Value::sym("call"), fv.clone()));
        assert_eq!(t[2], Value::pair(Value::sym("call"), Value::sym("op")));
        assert_eq!(t[3], Value::pair(Value::sym("ret"), Value::sym("op")));
        assert_eq!(t[4], Value::pair(Value::sym("ret"), fv.clone()));
        assert_eq!(
            t[5],
            Value::pair(Value::sym("ret"), Value::pair(Value::sym("withRes"), fv))
        );
    }

    #[test]
    fn wrapped_coll_event_payloads() {
        let out = run_client(
            BundleName::Coll,
            true,
            "(seq (app add 1) (let it (app iterator ()) (app next it)))",
        );
        assert_eq!(out.trace.len(), 3);
        assert_eq!(out.trace[0], Value::sym("add"));
        let it = match &out.trace[1] {
            Value::Pair(tag, l) => {
                assert_eq!(**tag, Value::sym("iterator"));
                (**l).clone()
            }
            v => panic!("unexpected iterator event {v}"),
        };
        assert!(matches!(it, Value::Loc(_)));
        assert_eq!(out.trace[2], Value::pair(Value::sym("next"), it));
    }

    #[test]
    fn wrapped_str_concat_event() {
        let out = run_client(
            BundleName::Str,
            true,
            "(let a (app input ())
               (let b (app constant 0)
                 (app concat (pair a b))))",
        );
        assert_eq!(out.trace.len(), 3);
        let (la, lb) = match (&out.trace[0], &out.trace[1]) {
            (Value::Pair(_, a), Value::Pair(_, b)) => ((**a).clone(), (**b).clone()),
            other => panic!("unexpected events {other:?}"),
        };
        let r = out.final_value().unwrap();
        assert_eq!(
            out.trace[2],
            Value::pair(
                Value::sym("concat"),
                Value::pair(r, Value::pair(la, lb))
            )
        );
    }

    #[test]
    fn wrap_rejects_arity_mismatch() {
        let lib = make_lib(BundleName::File);
        assert!(matches!(
            wrap(BundleName::Brac, &lib),
            Err(WrapError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn wrapped_run_erases_to_raw_behaviour() {
        // Instance of the erasure theorem on a library client: erasing the
        // wrapped program gives the same final heap and result.
        use crate::lang::{erase, erase_env};
        let lib = wrap(BundleName::Stack, &make_lib(BundleName::Stack)).unwrap();
        let client = parse("(seq (app push 1) (app push 2) (app pop ()))").unwrap();
        let prog = with_lib(&lib, client);
        let instrumented = run(Config::new(prog.clone()), FUEL);
        let erased = run(Config::new(erase(&prog)), FUEL);
        assert_eq!(instrumented.status, RunStatus::Value);
        assert_eq!(erased.status, RunStatus::Value);
        assert!(erased.trace.is_empty());
        assert_eq!(erased.config.heap, instrumented.config.heap);
        assert_eq!(erased.config.fenv, erase_env(&instrumented.config.fenv));
        assert_eq!(
            erased.config.expr,
            erase(&instrumented.config.expr)
        );
    }
}
