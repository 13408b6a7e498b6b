//! The object language: syntax, parser, and small-step semantics.

pub mod parse;
pub mod step;
pub mod syntax;

pub use parse::{parse, print, ParseError};
pub use step::{
    as_value, run, run_with, step, step_mut, Config, FEnv, Heap, RunOutcome, RunStatus,
    StepOutcome, StepResult, StuckReason,
};
pub use syntax::{erase, free_vars, fresh_name, subst, Expr, Op, Proj, Value};

/// A trace is the sequence of values emitted by a run. The paper indexes
/// traces 1-based; helpers that take positions follow that convention.
pub type Trace = Vec<Value>;

/// Erasure extended to function environments.
pub fn erase_env(fenv: &FEnv) -> FEnv {
    fenv.iter()
        .map(|(f, (x, body))| (*f, (x.clone(), erase(body))))
        .collect()
}
